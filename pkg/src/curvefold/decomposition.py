"""Vertex decompositions, Blank cuts, and minimum-area analysis.

A closed curve can be split at a self-crossing into two closed subcurves
by reconnecting the strands the orientation-respecting way.  A *vertex
pairing* smooths a set of pairwise-unlinked crossings at once; it is a
*self-overlapping decomposition* when every resulting piece bounds an
immersed disk (possibly after reversing the piece's orientation — a
clockwise embedded loop counts through its reverse).  The minimum total
winding area over all such decompositions equals the cancellation norm
of the curve's word with face areas as weights, which in turn equals the
minimum area swept by a null-homotopy.

Pieces are represented combinatorially as runs of the original traversal
darts together with the face letters each dart carries.  Pieces produced
only by smoothings keep exact geometry, so their rotation numbers are
computed from turning angles; pieces produced by a Blank cut contain a
synthetic cut arc and expose word-level data only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .arrangement import Arrangement, PlaneCurve, build_arrangement, tree_cotree, turning_of_directions
from .folding import Folding, Pairing, cancellation_norm, complete_to_maximal, positively_foldable
from .words import (CombinedWord, CyclicWord, Letter, build_cable_system, combined_word,
                    is_vertex_token)


class InvalidPairing(Exception):
    """Pairing does not name inverse letters of the word."""


class NotAStack(Exception):
    """Subcurve fails the stack preconditions."""


class InvalidDecomposition(Exception):
    """A claimed decomposition has a piece that is not self-overlapping."""


class LinkedVertices(Exception):
    """Vertex set cannot be smoothed simultaneously."""


# ---------------------------------------------------------------------------
# subcurves


@dataclass(frozen=True)
class SubcurveEntry:
    """One step of a subcurve: a traversal dart or a synthetic cut arc.

    ``positions`` are the global face-word indices of ``letters``; cut
    arcs carry no letters (cables are rerouted off the cut face first).
    """

    dart: Optional[int]            # traversal index; None for a cut arc
    tail_vertex: Optional[int]     # crossing at the step's start, if any
    letters: tuple[Letter, ...]
    positions: tuple[int, ...]
    partial: bool = False          # dart truncated by a cut


@dataclass(frozen=True)
class Subcurve:
    """A closed piece of a curve, tracked through cuts and smoothings."""

    entries: tuple[SubcurveEntry, ...]
    weights: Mapping[int, Fraction] = field(default_factory=dict, compare=False)
    arr: Optional[Arrangement] = field(default=None, compare=False, repr=False)
    provenance: tuple[str, ...] = ()

    def letters(self) -> tuple[Letter, ...]:
        return tuple(l for e in self.entries for l in e.letters)

    def positions(self) -> tuple[int, ...]:
        return tuple(p for e in self.entries for p in e.positions)

    def word(self) -> CyclicWord:
        return CyclicWord(self.letters(), self.weights)

    def signed_count(self, f: int) -> int:
        return sum(s for g, s in self.letters() if g == f)

    def unsigned_count(self, f: int) -> int:
        return sum(1 for g, _ in self.letters() if g == f)

    def windings(self) -> dict[int, int]:
        """Winding number at each face's puncture: signed letter count."""
        out: dict[int, int] = {}
        for f, s in self.letters():
            out[f] = out.get(f, 0) + s
        return out

    def area_w(self) -> Fraction:
        return sum((abs(w) * self.weights[f] for f, w in self.windings().items()),
                   Fraction(0))

    def crossings(self) -> list[int]:
        """Vertices both of whose passes belong to this piece."""
        seen: dict[int, int] = {}
        for e in self.entries:
            if e.tail_vertex is not None:
                seen[e.tail_vertex] = seen.get(e.tail_vertex, 0) + 1
        return sorted(v for v, c in seen.items() if c == 2)

    @property
    def geometric(self) -> bool:
        return self.arr is not None and all(
            e.dart is not None and not e.partial for e in self.entries)

    @property
    def rotation(self) -> Optional[int]:
        """Turning number, exact; None when a cut arc hides the geometry."""
        if not self.geometric:
            return None
        dirs = []
        for e in self.entries:
            geom = self.arr.dart_geometry(self.arr.traversal[e.dart])
            for i in range(len(geom) - 1):
                d = (geom[i + 1][0] - geom[i][0], geom[i + 1][1] - geom[i][1])
                if d != (Fraction(0), Fraction(0)):
                    dirs.append(d)
        return turning_of_directions(dirs)


def curve_subcurve(arr: Arrangement, cables) -> Subcurve:
    """The whole curve as a subcurve, aligned with its combined word."""
    entries: list[SubcurveEntry] = []
    seen: dict[int, int] = {}
    pos = 0
    for t, d in enumerate(arr.traversal):
        v = arr.dart_tail(d)
        if v is not None:
            seen[v] = seen.get(v, 0) + 1
        letters: tuple[Letter, ...] = ()
        if d.edge in cables.ports:
            seq = cables.ports[d.edge]
            if cables.outbound_is_traversal[d.edge]:
                letters = tuple((f, 1) for f in seq)
            else:
                letters = tuple((f, -1) for f in reversed(seq))
        entries.append(SubcurveEntry(
            dart=t, tail_vertex=v, letters=letters,
            positions=tuple(range(pos, pos + len(letters)))))
        pos += len(letters)
    return Subcurve(entries=tuple(entries), weights=arr.face_weights(), arr=arr)


def subcurve_from_combined_word(cw: CombinedWord) -> Subcurve:
    """Word-only subcurve (no geometry), one entry per token."""
    entries: list[SubcurveEntry] = []
    pos = 0
    for tok in cw.tokens:
        if is_vertex_token(tok):
            entries.append(SubcurveEntry(dart=None, tail_vertex=tok[1],
                                         letters=(), positions=()))
        else:
            entries.append(SubcurveEntry(dart=None, tail_vertex=None,
                                         letters=(tok,), positions=(pos,)))
            pos += 1
    return Subcurve(entries=tuple(entries), weights=cw.weights)


# ---------------------------------------------------------------------------
# smoothing


def vertices_linked(a: tuple[int, int], b: tuple[int, int]) -> bool:
    """Do two occurrence chords interleave around the cycle?"""
    (a1, a2), inside = sorted(a), 0
    for x in b:
        inside += 1 if a1 < x < a2 else 0
    return inside == 1


def _occurrence_chord(sc: Subcurve, v: int) -> tuple[int, int]:
    hits = [i for i, e in enumerate(sc.entries) if e.tail_vertex == v]
    if len(hits) != 2:
        raise LinkedVertices(f"vertex {v} does not cross this piece twice")
    return (hits[0], hits[1])


def smooth_at(sc: Subcurve, vertices: Iterable[int]) -> list[Subcurve]:
    """Split a piece at unlinked crossings, respecting orientation.

    Every chord (the two passes through one vertex) cuts the cyclic entry
    sequence in two; a non-crossing family yields len(vertices)+1 pieces,
    each piece owning the entries whose innermost enclosing chord is the
    same.
    """
    vs = sorted(set(vertices))
    chords = {v: _occurrence_chord(sc, v) for v in vs}
    for u, v in itertools.combinations(vs, 2):
        if vertices_linked(chords[u], chords[v]):
            raise LinkedVertices(f"vertices {u} and {v} are linked")

    n = len(sc.entries)

    def owner(i: int) -> Optional[int]:
        best, length = None, n + 1
        for v, (a, b) in chords.items():
            if a <= i < b and b - a < length:
                best, length = v, b - a
        return best

    groups: dict[Optional[int], list[int]] = {}
    for i in range(n):
        groups.setdefault(owner(i), []).append(i)

    smoothed = set(vs)
    pieces: list[Subcurve] = []
    for key in [None] + vs:
        idxs = groups.get(key, [])
        entries = []
        for i in idxs:
            e = sc.entries[i]
            if e.tail_vertex in smoothed:
                e = SubcurveEntry(e.dart, None, e.letters, e.positions, e.partial)
            entries.append(e)
        if not entries:
            continue
        pieces.append(Subcurve(entries=tuple(entries), weights=sc.weights,
                               arr=sc.arr,
                               provenance=sc.provenance + (f"smooth:{key}",)))
    return pieces


# ---------------------------------------------------------------------------
# Blank cuts


def blank_cut(sc: Subcurve, p: Pairing) -> tuple[Subcurve, Subcurve]:
    """Cut along the cable path between the two crossings of a pairing.

    The paired letters are consumed; each side closes up with a cut-arc
    entry.  Cut arcs cross no cables (they are rerouted along face
    boundaries first), so they carry no letters and hide the geometry.
    """
    word = sc.word()
    m = len(word)
    i, j = p.i % m, p.j % m
    if i == j:
        raise InvalidPairing("a pairing needs two distinct positions")
    fi, si = word[i]
    fj, sj = word[j]
    if fi != fj or si != -sj:
        raise InvalidPairing(f"positions {i},{j} are not inverse letters")

    # locate the two letters inside the entry stream
    flat: list[tuple[int, int]] = []  # (entry index, index within entry)
    for ei, e in enumerate(sc.entries):
        for li in range(len(e.letters)):
            flat.append((ei, li))
    (ei1, li1), (ei2, li2) = flat[i], flat[j]

    def side(start: tuple[int, int], stop: tuple[int, int], tag: str) -> Subcurve:
        """Entries strictly between two letter slots, cyclically."""
        (sa, sl), (sb, bl) = start, stop
        entries: list[SubcurveEntry] = []

        def partial(e: SubcurveEntry, lo: int, hi: int, cut: bool) -> SubcurveEntry:
            return SubcurveEntry(dart=e.dart, tail_vertex=None if cut else e.tail_vertex,
                                 letters=e.letters[lo:hi], positions=e.positions[lo:hi],
                                 partial=e.dart is not None)

        ea = sc.entries[sa]
        if sa == sb and sl < bl:
            # both cut letters sit on one dart; keep the stretch between
            entries = [partial(ea, sl + 1, bl, cut=True)]
        else:
            # tail of the entry holding the first cut letter, the entries
            # strictly between, then the head of the entry holding the second
            entries.append(partial(ea, sl + 1, len(ea.letters), cut=True))
            k = (sa + 1) % len(sc.entries)
            while k != sb:
                entries.append(sc.entries[k])
                k = (k + 1) % len(sc.entries)
            entries.append(partial(sc.entries[sb], 0, bl, cut=False))
        entries.append(SubcurveEntry(dart=None, tail_vertex=None,
                                     letters=(), positions=()))  # cut arc
        return Subcurve(entries=tuple(entries), weights=sc.weights, arr=sc.arr,
                        provenance=sc.provenance + (tag,))

    cut1 = side((ei1, li1), (ei2, li2), f"cut:{fi}:{i}-{j}")
    cut2 = side((ei2, li2), (ei1, li1), f"cut:{fi}:{j}-{i}")
    assert len(cut1.letters()) + len(cut2.letters()) == m - 2
    return cut1, cut2


def cut_along_folding(sc: Subcurve, folding: Folding) -> list[Subcurve]:
    """Cut along every pairing, innermost first; returns all pieces."""
    remaining = sorted(folding.pairings, key=lambda p: (p.i, p.j))
    pieces = [(sc, list(range(len(sc.word()))))]  # piece, its global slots
    for p in remaining:
        for idx, (piece, slots) in enumerate(pieces):
            if p.i in slots and p.j in slots:
                local = Pairing(slots.index(p.i), slots.index(p.j))
                a, b = blank_cut(piece, local)
                slots_a = [s for s in a.positions()]
                slots_b = [s for s in b.positions()]
                # keep global numbering via stored positions
                pieces[idx:idx + 1] = [(a, slots_a), (b, slots_b)]
                break
        else:
            raise InvalidPairing(f"pairing {p} spans two pieces")
    return [piece for piece, _ in pieces]


# ---------------------------------------------------------------------------
# goodness, sign changes, stacks


def is_good(sc: Subcurve) -> bool:
    """All occurrences of each face letter share one sign.

    Equivalent to |winding| == depth on each face once cables are merged,
    since the unsigned count measures depth and the signed count winding.
    """
    signs: dict[int, int] = {}
    for f, s in sc.letters():
        if signs.setdefault(f, s) != s:
            return False
    return True


def faces_around_vertex(arr: Arrangement, vid: int) -> tuple[int, ...]:
    """The four incident faces in ccw wedge order."""
    darts = arr.vertices[vid].darts_ccw
    wedges = tuple(arr.dart_face(d) for d in darts)
    for k, d in enumerate(darts):
        nxt = darts[(k + 1) % 4]
        assert arr.dart_face(nxt.twin) == wedges[k], "wedge faces disagree"
    return wedges


def sign_changing_vertices(sc: Subcurve) -> list[int]:
    """Crossings whose four wedge windings read [+1, 0, -1, 0] cyclically."""
    if sc.arr is None:
        raise ValueError("needs an arrangement for the vertex wedges")
    wind = sc.windings()
    out = []
    for v in sc.crossings():
        ws = [wind.get(f, 0) for f in faces_around_vertex(sc.arr, v)]
        for r in range(4):
            if [ws[(r + t) % 4] for t in range(4)] == [1, 0, -1, 0]:
                out.append(v)
                break
    return out


def certify_subcurve(sc: Subcurve) -> tuple[bool, dict]:
    """Is the piece the boundary of an immersed disk, up to orientation?

    Accepts rotation +1 with a positively foldable word, or rotation -1
    with a positively foldable inverse word (the piece read backwards).
    """
    rot = sc.rotation
    if rot is None:
        return _certify_word_only(sc)
    if rot == 1:
        ok, witness = positively_foldable(sc.word())
        if ok:
            return True, {"rotation": 1, "witness": witness}
        return False, {"reason": "not_positively_foldable", "rotation": rot}
    if rot == -1:
        ok, witness = positively_foldable(sc.word().inverse())
        if ok:
            return True, {"rotation": -1, "witness": witness, "reversed": True}
        return False, {"reason": "not_positively_foldable", "rotation": rot}
    return False, {"reason": f"rotation_number={rot}"}


def _certify_word_only(sc: Subcurve) -> tuple[bool, dict]:
    """Fallback for cut pieces: winding-area equality via the norm.

    A piece is self-overlapping (either orientation) only if its minimum
    contraction cost equals its winding area and one orientation folds
    positively; without geometry the rotation test is unavailable, so
    this is a necessary-condition certificate.
    """
    word = sc.word()
    value, _ = cancellation_norm(word)
    if value != sc.area_w():
        return False, {"reason": "norm_exceeds_winding_area"}
    for rot, w in ((1, word), (-1, word.inverse())):
        ok, witness = positively_foldable(w)
        if ok:
            return True, {"rotation": None, "witness": witness,
                          "reversed": rot == -1}
    return False, {"reason": "not_positively_foldable"}


def stack_decompose(sc: Subcurve) -> list[Subcurve]:
    """Split a k-stack into k immersed-disk boundaries by smoothings.

    Searches for a crossing whose smoothing yields two stacks whose
    rotations add up; recursion bottoms out at |rotation| = 1.
    """
    wind = {f: w for f, w in sc.windings().items() if w != 0}
    if not is_good(sc):
        raise NotAStack("mixed letter signs")
    signs = {1 if w > 0 else -1 for w in wind.values()}
    if len(signs) > 1:
        raise NotAStack("winding numbers of both signs")
    rot = sc.rotation
    if rot is None:
        raise NotAStack("rotation unavailable (cut piece)")
    if rot == 0 or (signs and (rot > 0) != (next(iter(signs)) > 0)):
        raise NotAStack(f"rotation {rot} inconsistent with windings")
    k = abs(rot)
    if k == 1:
        ok, cert = certify_subcurve(sc)
        assert ok, "a 1-stack must bound an immersed disk"
        return [sc]
    for v in sc.crossings():
        try:
            pieces = smooth_at(sc, [v])
        except LinkedVertices:
            continue
        if len(pieces) != 2:
            continue
        rots = [p.rotation for p in pieces]
        if None in rots or 0 in rots:
            continue
        if (rots[0] > 0) != (rot > 0) or (rots[1] > 0) != (rot > 0):
            continue
        if abs(rots[0]) + abs(rots[1]) != k:
            continue
        try:
            return stack_decompose(pieces[0]) + stack_decompose(pieces[1])
        except NotAStack:
            continue
    raise NotAStack(f"no smoothing splits this {k}-stack")


# ---------------------------------------------------------------------------
# minimum-area self-overlapping decomposition


@dataclass(frozen=True)
class SelfOverlappingDecomposition:
    vertex_pairs: frozenset[int]
    subcurves: tuple[Subcurve, ...]
    area: Fraction


def _unlinked_subsets(chords: dict[int, tuple[int, int]]) -> list[tuple[int, ...]]:
    """All pairwise non-crossing vertex subsets, smallest first."""
    vs = sorted(chords)
    compatible = {
        (u, v): not vertices_linked(chords[u], chords[v])
        for u, v in itertools.combinations(vs, 2)
    }
    out: list[tuple[int, ...]] = []
    for r in range(len(vs) + 1):
        for combo in itertools.combinations(vs, r):
            if all(compatible[(u, v)] for u, v in itertools.combinations(combo, 2)):
                out.append(combo)
    return out


def _decomposition_for(full: Subcurve, combo: Sequence[int]) -> Optional[SelfOverlappingDecomposition]:
    pieces = smooth_at(full, combo)
    total = Fraction(0)
    for piece in pieces:
        ok, _ = certify_subcurve(piece)
        if not ok:
            return None
        total += piece.area_w()
    return SelfOverlappingDecomposition(frozenset(combo), tuple(pieces), total)


def min_area_sod(curve: PlaneCurve) -> SelfOverlappingDecomposition:
    """Smallest-area decomposition into immersed-disk boundaries.

    The cancellation norm of the face word (area weights) is the provable
    optimum; the search scans unlinked vertex subsets in increasing size
    and returns the first decomposition achieving it.
    """
    arr = build_arrangement(curve)
    tc = tree_cotree(arr)
    cables = build_cable_system(arr, tc)
    full = curve_subcurve(arr, cables)
    target, witness = cancellation_norm(full.word())

    # every piece cut along a maximal folding must have single-signed letters
    maximal = complete_to_maximal(full.word(), witness)
    for piece in cut_along_folding(full, maximal):
        assert is_good(piece), "cut pieces of a maximal folding must be good"

    chords = {v: _occurrence_chord(full, v) for v in range(len(arr.vertices))}
    best: Optional[SelfOverlappingDecomposition] = None
    for combo in _unlinked_subsets(chords):
        sod = _decomposition_for(full, combo)
        if sod is None:
            continue
        if sod.area == target:
            return sod
        if best is None or sod.area < best.area:
            best = sod
    assert best is not None and best.area == target, \
        "search must reach the cancellation norm"
    return best


def sod_oracle(curve: PlaneCurve) -> SelfOverlappingDecomposition:
    """Exhaustive minimum over all unlinked vertex pairings.

    Ignores the cancellation norm entirely; the testing cross-check for
    ``min_area_sod`` on small curves.
    """
    arr = build_arrangement(curve)
    cables = build_cable_system(arr, tree_cotree(arr))
    full = curve_subcurve(arr, cables)
    chords = {v: _occurrence_chord(full, v) for v in range(len(arr.vertices))}
    best: Optional[SelfOverlappingDecomposition] = None
    for combo in _unlinked_subsets(chords):
        sod = _decomposition_for(full, combo)
        if sod is not None and (best is None or sod.area < best.area):
            best = sod
    assert best is not None, "every curve admits at least one decomposition"
    return best


def sod_to_folding(curve: PlaneCurve, sod: SelfOverlappingDecomposition) -> Folding:
    """A folding of the full word with area equal to the decomposition's.

    Each piece contributes a minimum folding of its own subword (its norm
    equals its winding area precisely because the piece bounds an
    immersed disk); pairings embed at the pieces' global positions and
    never link across pieces.
    """
    arr = build_arrangement(curve)
    cables = build_cable_system(arr, tree_cotree(arr))
    full = curve_subcurve(arr, cables)
    word = full.word()
    pairings: list[Pairing] = []
    for piece in sod.subcurves:
        sub = piece.word()
        value, witness = cancellation_norm(sub)
        if value != piece.area_w():
            raise InvalidDecomposition(
                "piece's contraction cost exceeds its winding area")
        slots = piece.positions()
        pairings.extend(Pairing(slots[p.i], slots[p.j]) for p in witness.pairings)
    folding = Folding(word, frozenset(pairings))
    assert folding.area == sod.area
    return folding


# ---------------------------------------------------------------------------
# homotopy trace


@dataclass(frozen=True)
class CutStep:
    face: int
    positions: tuple[int, int]


@dataclass(frozen=True)
class ContractStep:
    letters: tuple[Letter, ...]
    area: Fraction


@dataclass(frozen=True)
class HomotopyTrace:
    steps: tuple[object, ...]
    total_area: Fraction


def homotopy_trace(folding: Folding) -> HomotopyTrace:
    """Replay a folding as an explicit contraction schedule.

    Repeatedly pick a pairing one of whose arcs holds no other pairing,
    cut there, contract the pairing-free side (sweeping each of its faces
    once per letter), and continue on the remainder; the leftover closed
    curve contracts through its depth cycles at the end.  The swept total
    is exactly the folding's unpaired weight.
    """
    word = folding.word
    m = len(word)
    live = list(range(m))
    remaining = set(folding.pairings)
    paired_pos = {x for p in remaining for x in (p.i, p.j)}
    steps: list[object] = []
    total = Fraction(0)

    def free_arc(p: Pairing) -> Optional[list[int]]:
        idx = {pos: k for k, pos in enumerate(live)}
        a, b = idx[p.i], idx[p.j]
        n = len(live)
        for start, stop in ((a, b), (b, a)):
            arc = [live[(start + t) % n] for t in range(1, (stop - start) % n)]
            if not any(x in paired_pos for x in arc):
                return arc
        return None

    while remaining:
        candidates = []
        for p in remaining:
            arc = free_arc(p)
            if arc is not None:
                candidates.append((len(arc), min(p.i, p.j), p, arc))
        assert candidates, "an unlinked family always has an innermost pairing"
        _, _, p, arc = min(candidates, key=lambda c: (c[0], c[1]))
        f, _ = word[p.i]
        steps.append(CutStep(face=f, positions=(p.i, p.j)))
        swept = sum((word.weight(x) for x in arc), Fraction(0))
        steps.append(ContractStep(letters=tuple(word[x] for x in arc), area=swept))
        total += swept
        gone = set(arc) | {p.i, p.j}
        live = [x for x in live if x not in gone]
        remaining.discard(p)
        paired_pos -= {p.i, p.j}

    swept = sum((word.weight(x) for x in live), Fraction(0))
    steps.append(ContractStep(letters=tuple(word[x] for x in live), area=swept))
    total += swept
    trace = HomotopyTrace(steps=tuple(steps), total_area=total)
    assert trace.total_area == folding.area
    return trace
