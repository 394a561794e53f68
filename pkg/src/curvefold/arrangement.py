"""Exact planar arrangement of a generic closed polyline curve.

A closed curve with only transverse self-crossings induces a 4-regular
plane graph: the crossings are the vertices, the arcs between consecutive
crossings are the edges, and the complement of the curve splits into faces.
This module builds that graph with exact rational arithmetic and computes
the per-face invariants everything downstream relies on:

* signed area of every bounded face (shoelace over the boundary walk),
* winding number (exact ray casting from a point inside the face),
* depth (BFS distance to the unbounded face in the dual graph),
* a tree/cotree pair whose cotree duals form a BFS spanning tree of the
  dual graph rooted at the unbounded face.

All coordinates are ``fractions.Fraction``; no tolerances anywhere.
"""

from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence


class CurveError(Exception):
    """Base class for curve ingestion and construction failures."""


class MalformedInput(CurveError):
    """The input document is not a valid curve description."""


class DegenerateCurve(CurveError):
    """Too few points, or repeated consecutive points."""


class NonGenericCurve(CurveError):
    """Triple point, tangency, overlap, or endpoint lying on a segment."""


Point = tuple[Fraction, Fraction]


def to_fraction(value) -> Fraction:
    """Convert a JSON scalar (int, decimal string, or float) exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise MalformedInput(f"not a number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        # Floats in a hand-written JSON file are almost always short
        # decimals; convert via the decimal literal to keep them exact.
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedInput(f"cannot parse coordinate {value!r}") from exc
    raise MalformedInput(f"cannot parse coordinate {value!r}")


def fraction_str(q: Fraction) -> str:
    """Serialize exactly: plain decimal when finite, else 'p/q'."""
    q = Fraction(q)
    d = q.denominator
    # d = 2^a * 5^b  <=>  q has a finite decimal expansion.
    n = d
    for p in (2, 5):
        while n % p == 0:
            n //= p
    if n != 1:
        return f"{q.numerator}/{q.denominator}"
    if d == 1:
        return str(q.numerator)
    exp = 0
    scaled = q
    while scaled.denominator != 1:
        scaled *= 10
        exp += 1
    digits = str(abs(scaled.numerator)).rjust(exp + 1, "0")
    sign = "-" if q < 0 else ""
    return f"{sign}{digits[:-exp]}.{digits[-exp:]}"


# ---------------------------------------------------------------------------
# primitive geometry


def _sub(a: Point, b: Point) -> Point:
    return (a[0] - b[0], a[1] - b[1])


def _cross(a: Point, b: Point) -> Fraction:
    return a[0] * b[1] - a[1] * b[0]


def _dot(a: Point, b: Point) -> Fraction:
    return a[0] * b[0] + a[1] * b[1]


def _on_segment(p: Point, a: Point, b: Point) -> bool:
    """Is p on the closed segment [a, b]?  Exact."""
    if _cross(_sub(b, a), _sub(p, a)) != 0:
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def _ccw_cmp(u: Point, v: Point) -> int:
    """Compare two nonzero direction vectors by angle in [0, 2pi)."""

    def half(w: Point) -> int:
        # 0 for angles in [0, pi), 1 for [pi, 2pi)
        if w[1] > 0 or (w[1] == 0 and w[0] > 0):
            return 0
        return 1

    hu, hv = half(u), half(v)
    if hu != hv:
        return -1 if hu < hv else 1
    c = _cross(u, v)
    if c > 0:
        return -1
    if c < 0:
        return 1
    return 0


# ---------------------------------------------------------------------------
# curve ingestion


@dataclass(frozen=True)
class PlaneCurve:
    """A closed polyline, traversed in point order, closed implicitly."""

    points: tuple[Point, ...]
    weights: Optional[Mapping[int, Fraction]] = None

    def __post_init__(self):
        n = len(self.points)
        if n < 3:
            raise DegenerateCurve(f"need at least 3 points, got {n}")
        for i in range(n):
            if self.points[i] == self.points[(i + 1) % n]:
                raise DegenerateCurve(f"repeated consecutive point at index {i}")

    def segments(self) -> list[tuple[Point, Point]]:
        pts = self.points
        return [(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts))]


def parse_curve(doc) -> PlaneCurve:
    """Parse a curve document: a JSON string/bytes or an already-loaded dict.

    Schema: ``{"points": [[x, y], ...]}`` with coordinates given as exact
    decimal strings, integers, or rational strings like "1/3"; optionally
    ``{"weights": {"<face-id>": w}}`` overriding geometric face areas.
    """
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "points" not in doc:
        raise MalformedInput("curve document must be an object with a 'points' field")
    raw = doc["points"]
    if not isinstance(raw, list):
        raise MalformedInput("'points' must be a list")
    pts = []
    for entry in raw:
        if not isinstance(entry, (list, tuple)) or len(entry) != 2:
            raise MalformedInput(f"bad point entry {entry!r}")
        pts.append((to_fraction(entry[0]), to_fraction(entry[1])))
    weights = None
    if "weights" in doc and doc["weights"] is not None:
        if not isinstance(doc["weights"], dict):
            raise MalformedInput("'weights' must be an object")
        weights = {}
        for key, val in doc["weights"].items():
            try:
                fid = int(key)
            except ValueError as exc:
                raise MalformedInput(f"bad face id {key!r}") from exc
            w = to_fraction(val)
            if w < 0:
                raise MalformedInput(f"negative weight for face {fid}")
            weights[fid] = w
    return PlaneCurve(points=tuple(pts), weights=weights)


# ---------------------------------------------------------------------------
# arrangement data model


@dataclass(frozen=True)
class Dart:
    """A directed side of an edge; ``fwd`` means along the curve traversal."""

    edge: int
    fwd: bool

    @property
    def twin(self) -> "Dart":
        return Dart(self.edge, not self.fwd)


@dataclass
class Edge:
    id: int
    v_from: Optional[int]  # None only for the crossing-free loop
    v_to: Optional[int]
    geometry: tuple[Point, ...]  # oriented along the traversal
    left_face: int = -1
    right_face: int = -1

    def endpoint(self, at_tail: bool) -> Optional[int]:
        return self.v_from if at_tail else self.v_to

    def direction_out(self, fwd: bool) -> Point:
        """Direction leaving the tail of the (fwd?) dart."""
        g = self.geometry
        if fwd:
            return _sub(g[1], g[0])
        return _sub(g[-2], g[-1])


@dataclass
class Vertex:
    id: int
    point: Point
    darts_ccw: tuple[Dart, ...] = ()  # outgoing darts in ccw angular order


@dataclass
class Face:
    id: int
    boundary: tuple[Dart, ...]  # cycle of darts with this face on the left
    signed_area: Fraction
    unbounded: bool
    winding: int = 0
    depth: int = -1

    @property
    def area(self) -> Optional[Fraction]:
        return None if self.unbounded else self.signed_area


@dataclass
class Arrangement:
    curve: PlaneCurve
    vertices: list[Vertex]
    edges: list[Edge]
    faces: list[Face]
    traversal: tuple[Dart, ...]  # the curve as a cyclic dart sequence (all fwd)
    # per vertex: the two traversal indices at which the curve leaves it
    vertex_passes: dict[int, tuple[int, int]] = field(default_factory=dict)

    @property
    def unbounded_face(self) -> Face:
        return self.faces[0]

    def dart_tail(self, d: Dart) -> Optional[int]:
        e = self.edges[d.edge]
        return e.v_from if d.fwd else e.v_to

    def dart_head(self, d: Dart) -> Optional[int]:
        e = self.edges[d.edge]
        return e.v_to if d.fwd else e.v_from

    def dart_face(self, d: Dart) -> int:
        e = self.edges[d.edge]
        return e.left_face if d.fwd else e.right_face

    def dart_geometry(self, d: Dart) -> tuple[Point, ...]:
        g = self.edges[d.edge].geometry
        return g if d.fwd else tuple(reversed(g))

    def face_weights(self) -> dict[int, Fraction]:
        """Per bounded face: the override weight if given, else the area."""
        out = {}
        override = self.curve.weights or {}
        for f in self.faces[1:]:
            out[f.id] = Fraction(override.get(f.id, f.signed_area))
        return out

    def dual_neighbors(self, fid: int) -> list[tuple[int, int]]:
        """(neighbor face, edge id) pairs, in ascending edge id order."""
        out = []
        for e in self.edges:
            if e.left_face == fid:
                out.append((e.right_face, e.id))
            elif e.right_face == fid:
                out.append((e.left_face, e.id))
        return out

    def pass_direction(self, vid: int, which: int) -> Point:
        """Direction of motion at the given vertex on pass 0 or 1."""
        k = self.vertex_passes[vid][which]
        return self.edges[self.traversal[k].edge].direction_out(True)

    def crossing_sign(self, vid: int) -> int:
        """+1 if the second pass crosses the first from right to left."""
        d1 = self.pass_direction(vid, 0)
        d2 = self.pass_direction(vid, 1)
        c = _cross(d1, d2)
        assert c != 0, "transverse crossing cannot have parallel strands"
        return 1 if c > 0 else -1


# ---------------------------------------------------------------------------
# intersection finding


def _segment_intersections(curve: PlaneCurve) -> dict[int, list[tuple[Fraction, Point]]]:
    """Map segment index -> sorted (parameter, point) crossings on it.

    Raises NonGenericCurve on any violation of general position.
    """
    segs = curve.segments()
    n = len(segs)
    hits: dict[int, list[tuple[Fraction, Point]]] = {i: [] for i in range(n)}
    point_owners: dict[Point, set[int]] = {}

    for i in range(n):
        a, b = segs[i]
        for j in range(i + 1, n):
            c, d = segs[j]
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            r = _sub(b, a)
            s = _sub(d, c)
            denom = _cross(r, s)
            if denom == 0:
                # Parallel.  Collinear overlap is non-generic.
                if _cross(_sub(c, a), r) == 0:
                    if (_on_segment(c, a, b) or _on_segment(d, a, b)
                            or _on_segment(a, c, d) or _on_segment(b, c, d)):
                        if adjacent:
                            # Sharing just the common endpoint is fine;
                            # anything more means doubling back.
                            shared = b if j == i + 1 else a
                            other_c = d if c == shared else c
                            if _on_segment(other_c, a, b) or _on_segment(
                                    a if shared == b else b, c, d):
                                raise NonGenericCurve(
                                    f"segments {i} and {j} overlap along a line")
                        else:
                            raise NonGenericCurve(
                                f"segments {i} and {j} overlap along a line")
                continue
            t = _cross(_sub(c, a), s) / denom
            u = _cross(_sub(c, a), r) / denom
            if t < 0 or t > 1 or u < 0 or u > 1:
                continue
            boundary = t == 0 or t == 1 or u == 0 or u == 1
            if adjacent:
                shared = b if j == i + 1 else a
                p = (a[0] + t * r[0], a[1] + t * r[1])
                if p == shared:
                    continue
                raise NonGenericCurve(
                    f"adjacent segments {i} and {j} touch at {p} besides their corner")
            if boundary:
                p = (a[0] + t * r[0], a[1] + t * r[1])
                raise NonGenericCurve(
                    f"endpoint contact between segments {i} and {j} at {p}")
            p = (a[0] + t * r[0], a[1] + t * r[1])
            owners = point_owners.setdefault(p, set())
            owners.update((i, j))
            if len(owners) > 2:
                raise NonGenericCurve(f"three or more segments meet at {p}")
            hits[i].append((t, p))
            hits[j].append((u, p))

    for i in range(n):
        hits[i].sort(key=lambda pair: pair[0])
        params = [t for t, _ in hits[i]]
        if len(set(params)) != len(params):
            raise NonGenericCurve(f"coincident crossings on segment {i}")
    return hits


# ---------------------------------------------------------------------------
# arrangement construction


def build_arrangement(curve: PlaneCurve) -> Arrangement:
    hits = _segment_intersections(curve)
    pts = curve.points
    n = len(pts)

    # Flatten the crossings into traversal order.
    visits: list[tuple[int, Fraction, Point]] = []  # (segment, t, point)
    for i in range(n):
        for t, p in hits[i]:
            visits.append((i, t, p))

    if not visits:
        return _simple_loop_arrangement(curve)

    # Vertex ids by first encounter along the traversal.
    vid_of: dict[Point, int] = {}
    vertices: list[Vertex] = []
    for _, _, p in visits:
        if p not in vid_of:
            vid_of[p] = len(vertices)
            vertices.append(Vertex(id=len(vertices), point=p))

    # Edges: arcs between consecutive crossings, carrying the corner points.
    m = len(visits)
    edges: list[Edge] = []
    for k in range(m):
        si, ti, pi = visits[k]
        sj, tj, pj = visits[(k + 1) % m]
        geom: list[Point] = [pi]
        if k + 1 < m and sj == si:
            pass  # same segment, no corners in between
        else:
            # walk the polyline corners from the end of segment si up to
            # the start of segment sj (cyclically)
            s = si
            while True:
                s_next = (s + 1) % n
                geom.append(pts[s_next])
                if s_next == sj:
                    break
                s = s_next
        geom.append(pj)
        edges.append(Edge(id=k, v_from=vid_of[pi], v_to=vid_of[pj], geometry=tuple(geom)))

    traversal = tuple(Dart(k, True) for k in range(m))

    # Record the two traversal passes through each vertex (the pass "at"
    # vertex v is the traversal index of the edge leaving v).
    vertex_passes: dict[int, list[int]] = {v.id: [] for v in vertices}
    for k, e in enumerate(edges):
        vertex_passes[e.v_from].append(k)
    for v in vertices:
        if len(vertex_passes[v.id]) != 2:
            raise NonGenericCurve(f"vertex {v.point} not visited exactly twice")

    # Rotation system: outgoing darts sorted ccw around each vertex.
    incident: dict[int, list[Dart]] = {v.id: [] for v in vertices}
    for e in edges:
        incident[e.v_from].append(Dart(e.id, True))
        incident[e.v_to].append(Dart(e.id, False))
    for v in vertices:
        darts = incident[v.id]
        assert len(darts) == 4, "crossing must have degree 4"

        def keyed(d: Dart) -> Point:
            return edges[d.edge].direction_out(d.fwd)

        darts.sort(key=functools.cmp_to_key(lambda p, q: _ccw_cmp(keyed(p), keyed(q))))
        v.darts_ccw = tuple(darts)

    arr = Arrangement(
        curve=curve,
        vertices=vertices,
        edges=edges,
        faces=[],
        traversal=traversal,
        vertex_passes={v: (ps[0], ps[1]) for v, ps in vertex_passes.items()},
    )

    _trace_faces(arr)
    _compute_windings(arr)
    _compute_depths(arr)
    _check_invariants(arr)
    return arr


def _simple_loop_arrangement(curve: PlaneCurve) -> Arrangement:
    """Crossing-free curve: one closed edge, a bounded and an unbounded face."""
    pts = curve.points
    geom = tuple(pts) + (pts[0],)
    area2 = Fraction(0)
    for i in range(len(pts)):
        a, b = pts[i], pts[(i + 1) % len(pts)]
        area2 += _cross(a, b)
    ccw = area2 > 0
    if area2 == 0:
        raise NonGenericCurve("closed polyline with zero signed area")
    edge = Edge(id=0, v_from=None, v_to=None, geometry=geom)
    d = Dart(0, True)
    inner = Face(id=1, boundary=(d if ccw else d.twin,),
                 signed_area=abs(area2) / 2, unbounded=False,
                 winding=1 if ccw else -1, depth=1)
    outer = Face(id=0, boundary=(d.twin if ccw else d,),
                 signed_area=-abs(area2) / 2, unbounded=True, winding=0, depth=0)
    edge.left_face = 1 if ccw else 0
    edge.right_face = 0 if ccw else 1
    return Arrangement(curve=curve, vertices=[], edges=[edge],
                       faces=[outer, inner], traversal=(d,), vertex_passes={})


def _next_left(arr: Arrangement, d: Dart) -> Dart:
    """Next dart along the boundary of the face to the left of d."""
    head = arr.dart_head(d)
    v = arr.vertices[head]
    back = d.twin  # outgoing at head
    i = v.darts_ccw.index(back)
    return v.darts_ccw[(i - 1) % 4]


def _trace_faces(arr: Arrangement) -> None:
    edges = arr.edges
    all_darts = [Dart(e.id, True) for e in edges] + [Dart(e.id, False) for e in edges]
    seen: set[Dart] = set()
    cycles: list[list[Dart]] = []
    cycle_of: dict[Dart, int] = {}
    for d0 in all_darts:
        if d0 in seen:
            continue
        cyc = []
        d = d0
        while d not in seen:
            seen.add(d)
            cycle_of[d] = len(cycles)
            cyc.append(d)
            d = _next_left(arr, d)
        cycles.append(cyc)

    def cycle_area2(cyc: Sequence[Dart]) -> Fraction:
        total = Fraction(0)
        for d in cyc:
            g = arr.dart_geometry(d)
            for i in range(len(g) - 1):
                total += _cross(g[i], g[i + 1])
        return total

    areas2 = [cycle_area2(c) for c in cycles]
    negatives = [i for i, a in enumerate(areas2) if a < 0]
    assert len(negatives) == 1, "exactly one boundary cycle bounds the unbounded face"
    outer_idx = negatives[0]

    # Face ids by first encounter along the traversal (left, then right),
    # with the unbounded face pinned at id 0.
    order: list[int] = [outer_idx]
    for d in arr.traversal:
        for side in (d, d.twin):
            ci = cycle_of[side]
            if ci not in order:
                order.append(ci)
    assert len(order) == len(cycles)

    faces: list[Face] = []
    fid_of_cycle: dict[int, int] = {}
    for fid, ci in enumerate(order):
        fid_of_cycle[ci] = fid
        faces.append(Face(id=fid, boundary=tuple(cycles[ci]),
                          signed_area=areas2[ci] / 2, unbounded=(fid == 0)))
    for d, ci in cycle_of.items():
        e = arr.edges[d.edge]
        if d.fwd:
            e.left_face = fid_of_cycle[ci]
        else:
            e.right_face = fid_of_cycle[ci]
    arr.faces = faces


def _all_subsegments(arr: Arrangement) -> list[tuple[Point, Point]]:
    out = []
    for e in arr.edges:
        g = e.geometry
        for i in range(len(g) - 1):
            out.append((g[i], g[i + 1]))
    return out


def _interior_point(arr: Arrangement, face: Face) -> Point:
    """An exact point strictly inside the (bounded) face.

    Take the midpoint m of the first geometric sub-segment of the face's
    first boundary dart, push it into the face along the left normal, and
    stop well before the ray out of m hits anything else.
    """
    d = min(face.boundary, key=lambda dd: (dd.edge, not dd.fwd))
    g = arr.dart_geometry(d)
    a, b = g[0], g[1]
    m = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
    dv = _sub(b, a)
    nrm = (-dv[1], dv[0])  # left normal: points into the face on d's left

    t_min: Optional[Fraction] = None
    for (c, dpt) in _all_subsegments(arr):
        if (c, dpt) == (a, b) or (c, dpt) == (b, a):
            continue
        s = _sub(dpt, c)
        denom = _cross(nrm, s)
        if denom == 0:
            if _cross(_sub(c, m), s) == 0:
                # collinear with the ray: hits at the endpoint parameters
                for q in (c, dpt):
                    dq = _sub(q, m)
                    if _dot(dq, nrm) > 0:
                        t = _dot(dq, nrm) / _dot(nrm, nrm)
                        if t > 0 and (t_min is None or t < t_min):
                            t_min = t
            continue
        # solve m + t*nrm = c + u*s exactly
        u = _cross(_sub(m, c), nrm) / _cross(s, nrm)
        t = _cross(_sub(c, m), s) / _cross(nrm, s)
        if 0 <= u <= 1 and t > 0:
            if t_min is None or t < t_min:
                t_min = t
    assert t_min is not None, "a bounded face must enclose the ray"
    delta = t_min / 2
    return (m[0] + delta * nrm[0], m[1] + delta * nrm[1])


def _winding_at(arr: Arrangement, p: Point) -> int:
    """Winding number of the curve about p by exact signed ray casting."""
    segs = _all_subsegments(arr)
    corners = set()
    for (a, b) in segs:
        corners.add(a)
        corners.add(b)

    def candidates():
        yield (Fraction(1), Fraction(0))
        yield (Fraction(0), Fraction(1))
        for k in range(1, 200):
            yield (Fraction(1), Fraction(1, k))
            yield (Fraction(1), Fraction(-1, k))

    ray = None
    for cand in candidates():
        if all(not (_cross(_sub(q, p), cand) == 0 and _dot(_sub(q, p), cand) > 0)
               for q in corners):
            ray = cand
            break
    assert ray is not None, "no generic ray direction found"

    wind = 0
    for (a, b) in segs:
        d = _sub(b, a)
        denom = _cross(ray, d)
        if denom == 0:
            continue
        # Solve p + t*ray = a + s*d exactly.
        s = _cross(_sub(p, a), ray) / _cross(d, ray)
        t = _cross(_sub(a, p), d) / _cross(ray, d)
        if 0 < s < 1 and t > 0:
            wind += 1 if denom > 0 else -1
    return wind


def _compute_windings(arr: Arrangement) -> None:
    arr.faces[0].winding = 0
    for face in arr.faces[1:]:
        p = _interior_point(arr, face)
        face.winding = _winding_at(arr, p)
    # Cross-check against the edge-crossing relation.
    for e in arr.edges:
        assert arr.faces[e.left_face].winding == arr.faces[e.right_face].winding + 1, (
            f"edge {e.id}: winding must drop by one from left to right")


def _compute_depths(arr: Arrangement) -> None:
    for f in arr.faces:
        f.depth = -1
    arr.faces[0].depth = 0
    frontier = [0]
    while frontier:
        nxt = []
        for fid in frontier:
            for nb, _ in sorted(arr.dual_neighbors(fid)):
                if arr.faces[nb].depth == -1:
                    arr.faces[nb].depth = arr.faces[fid].depth + 1
                    nxt.append(nb)
        frontier = nxt


def _check_invariants(arr: Arrangement) -> None:
    V = len(arr.vertices)
    E = len(arr.edges)
    F = len(arr.faces)
    if V:  # the crossing-free loop is graph-theoretically special
        assert V - E + F == 2, f"Euler relation failed: {V}-{E}+{F}"
    for face in arr.faces:
        assert abs(face.winding) <= face.depth or face.unbounded, (
            f"face {face.id}: |winding| {face.winding} exceeds depth {face.depth}")
    assert arr.faces[0].depth == 0 and arr.faces[0].winding == 0


# ---------------------------------------------------------------------------
# face measures and rotation number


def face_measures(arr: Arrangement) -> dict:
    """Per-face (area, winding, depth) table plus the two area totals."""
    table = []
    area_w = Fraction(0)
    area_d = Fraction(0)
    weights = arr.face_weights()
    for f in arr.faces:
        entry = {
            "id": f.id,
            "area": None if f.unbounded else f.signed_area,
            "weight": None if f.unbounded else weights[f.id],
            "winding": f.winding,
            "depth": f.depth,
        }
        table.append(entry)
        if not f.unbounded:
            area_w += abs(f.winding) * weights[f.id]
            area_d += f.depth * weights[f.id]
    return {"faces": table, "area_w": area_w, "area_d": area_d}


def rotation_number(curve: PlaneCurve) -> int:
    """Total turning of the tangent, in full turns.

    Each corner contributes its exterior angle; the sum is an exact integer
    multiple of 2*pi, so the floating point sum rounds unambiguously.
    """
    pts = curve.points
    n = len(pts)
    total = 0.0
    for i in range(n):
        u = _sub(pts[(i + 1) % n], pts[i])
        v = _sub(pts[(i + 2) % n], pts[(i + 1) % n])
        total += math.atan2(float(_cross(u, v)), float(_dot(u, v)))
    turns = total / (2 * math.pi)
    k = round(turns)
    assert abs(turns - k) < 0.25, f"turning sum {turns} too far from an integer"
    return k


def turning_of_directions(dirs: Sequence[Point]) -> int:
    """Rotation number of a closed direction sequence (one entry per
    straight piece, in traversal order)."""
    total = 0.0
    n = len(dirs)
    for i in range(n):
        u, v = dirs[i], dirs[(i + 1) % n]
        total += math.atan2(float(_cross(u, v)), float(_dot(u, v)))
    turns = total / (2 * math.pi)
    k = round(turns)
    assert abs(turns - k) < 0.25, f"turning sum {turns} too far from an integer"
    return k


# ---------------------------------------------------------------------------
# tree / cotree


@dataclass
class TreeCotree:
    tree: frozenset[int]      # primal edge ids
    cotree: frozenset[int]    # primal edge ids; duals span the dual graph
    parent_edge: dict[int, int]   # face id -> cotree edge id toward the root
    parent_face: dict[int, int]   # face id -> parent face id
    level: dict[int, int]         # face id -> BFS level (== depth)

    def children(self, fid: int) -> list[int]:
        return sorted(f for f, p in self.parent_face.items() if p == fid)


def tree_cotree(arr: Arrangement,
                prefer: Optional[Mapping[int, int]] = None) -> TreeCotree:
    """BFS spanning tree of the dual rooted at the unbounded face.

    Deterministic: the frontier explores neighbor faces in ascending face
    id, and among parallel edges between the same two faces the smallest
    edge id wins.  ``prefer`` may pin the parent edge of individual faces
    to another edge of the same BFS level (useful to reproduce specific
    hand-drawn cable systems).
    """
    prefer = dict(prefer or {})
    parent_edge: dict[int, int] = {}
    parent_face: dict[int, int] = {}
    level = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for fid in frontier:
            neighbors = sorted(arr.dual_neighbors(fid), key=lambda t: (t[0], t[1]))
            for nb, eid in neighbors:
                if nb not in level:
                    level[nb] = level[fid] + 1
                    parent_edge[nb] = eid
                    parent_face[nb] = fid
                    nxt.append(nb)
                elif nb in prefer and prefer[nb] == eid and level[nb] == level[fid] + 1:
                    parent_edge[nb] = eid
                    parent_face[nb] = fid
        frontier = sorted(nxt)
    cotree = frozenset(parent_edge.values())
    tree = frozenset(e.id for e in arr.edges) - cotree
    for f in arr.faces:
        assert level[f.id] == f.depth, "cotree BFS level must equal the face depth"
    return TreeCotree(tree=tree, cotree=cotree, parent_edge=parent_edge,
                      parent_face=parent_face, level=level)
