"""Face words of a curve: cable tracing and cotree recursion.

Two constructions of the same cyclic word over the bounded faces:

* the *traced* word: route a cable from every bounded face to the
  unbounded face along the dual cotree, then walk the curve and record
  every cable crossing with a sign (``blank_word``);
* the *recursive* word: rewrite every cotree edge as a free word over the
  faces using the face-boundary relation and a chosen way of flattening
  each cyclic boundary (``nie_word``).

The two agree letter-for-letter once the flattening is derived from the
cable system (``derive_flattening``); that equality is exercised in the
test-suite for every corpus curve.

Cable routing is purely combinatorial here.  Cables through one edge
form a nested non-crossing bundle, and the nesting is forced up to one
choice per face: where the face's own cable joins the bundle leaving it.
That insertion point is the only knob (``insertions``), and it is in
bijection with the flattening choice of the recursive construction.

Sign convention: a crossing is positive exactly when the child face of
the crossed edge lies to the left of the traversal direction, i.e. when
the edge runs counter-clockwise around the face whose cable bundle it
carries.  Equivalently the curve crosses the outbound cables from right
to left.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .arrangement import Arrangement, Dart, TreeCotree


Letter = tuple[int, int]  # (face id, sign in {+1, -1})


def letter_str(letter: Letter) -> str:
    f, s = letter
    return str(f) if s > 0 else f"-{f}"


def parse_letter(tok) -> Letter:
    if isinstance(tok, int):
        f = tok
    else:
        f = int(tok)
    if f == 0:
        raise ValueError("face id 0 is the unbounded face; letters use bounded faces")
    return (abs(f), 1 if f > 0 else -1)


@dataclass(frozen=True)
class CyclicWord:
    """A cyclic sequence of signed face letters with nonnegative weights."""

    letters: tuple[Letter, ...]
    weights: Mapping[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        w = dict(self.weights)
        for f, _ in self.letters:
            w.setdefault(f, Fraction(1))
        for f, q in w.items():
            if q < 0:
                raise ValueError(f"negative weight for face {f}")
            w[f] = Fraction(q)
        object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i: int) -> Letter:
        return self.letters[i % len(self.letters)]

    def weight(self, i: int) -> Fraction:
        return self.weights[self.letters[i % len(self.letters)][0]]

    def rotate(self, k: int) -> "CyclicWord":
        n = len(self.letters)
        if n == 0:
            return self
        k %= n
        return CyclicWord(self.letters[k:] + self.letters[:k], self.weights)

    def inverse(self) -> "CyclicWord":
        return CyclicWord(invert_sequence(self.letters), self.weights)

    def with_weights(self, weights: Mapping[int, Fraction]) -> "CyclicWord":
        return CyclicWord(self.letters, weights)

    def __str__(self) -> str:
        return "[" + " ".join(letter_str(l) for l in self.letters) + "]"


def invert_sequence(letters: Sequence[Letter]) -> tuple[Letter, ...]:
    """Formal inverse of a linear letter sequence."""
    return tuple((f, -s) for (f, s) in reversed(letters))


def reduce(word: CyclicWord) -> CyclicWord:
    """Cancel adjacent inverse pairs, cyclically, until none remain."""
    letters = list(word.letters)
    changed = True
    while changed and letters:
        changed = False
        n = len(letters)
        for i in range(n):
            j = (i + 1) % n
            if letters[i][0] == letters[j][0] and letters[i][1] == -letters[j][1]:
                for k in sorted({i, j}, reverse=True):
                    letters.pop(k)
                changed = True
                break
    return CyclicWord(tuple(letters), word.weights)


def cyclic_equal(a: CyclicWord, b: CyclicWord) -> bool:
    if len(a) != len(b):
        return False
    if len(a) == 0:
        return True
    for k in range(len(a)):
        if a.rotate(k).letters == b.letters:
            return True
    return False


def equal_up_to_relabeling(a: CyclicWord, b: CyclicWord) -> bool:
    """Does some rotation plus face bijection carry a onto b, sign-exact?"""
    if len(a) != len(b):
        return False
    if len(a) == 0:
        return True
    for k in range(len(a)):
        rot = a.rotate(k).letters
        fwd: dict[int, int] = {}
        bwd: dict[int, int] = {}
        ok = True
        for (fa, sa), (fb, sb) in zip(rot, b.letters):
            if sa != sb:
                ok = False
                break
            if fwd.setdefault(fa, fb) != fb or bwd.setdefault(fb, fa) != fa:
                ok = False
                break
        if ok:
            return True
    return False


def face_counts(word: CyclicWord, f: int) -> tuple[int, int]:
    """(signed, unsigned) occurrence counts of face f in the word."""
    signed = 0
    unsigned = 0
    for (g, s) in word.letters:
        if g == f:
            signed += s
            unsigned += 1
    return signed, unsigned


def word_to_json(word: CyclicWord) -> dict:
    from .arrangement import fraction_str

    return {
        "word": [letter_str(l) for l in word.letters],
        "weights": {str(f): fraction_str(q) for f, q in sorted(word.weights.items())},
    }


def parse_word(doc) -> CyclicWord:
    """Parse a word document: {"word": ["2","-3",...], "weights": {...}}."""
    import json

    from .arrangement import MalformedInput, to_fraction

    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "word" not in doc:
        raise MalformedInput("word document must be an object with a 'word' field")
    try:
        letters = tuple(parse_letter(tok) for tok in doc["word"])
    except ValueError as exc:
        raise MalformedInput(str(exc)) from exc
    weights = {}
    for key, val in (doc.get("weights") or {}).items():
        weights[int(key)] = to_fraction(val)
    return CyclicWord(letters, weights)


# ---------------------------------------------------------------------------
# cable systems


class InvalidFlattening(Exception):
    pass


@dataclass(frozen=True)
class CableSystem:
    """Managed shortest-path cables, one per bounded face.

    ``ports[e]`` lists the faces whose cables cross edge e, ordered along
    the edge's *outbound* direction (counter-clockwise around the child
    face); ``outbound_is_traversal[e]`` says whether that direction is the
    curve traversal direction of e; equivalently, whether crossings on e
    are positive.  ``cables[f]`` is the primal-edge path from face f to
    the unbounded face, and ``ordering`` is the cyclic cable order around
    the basepoint.
    """

    arr: Arrangement
    tc: TreeCotree
    cables: Mapping[int, tuple[int, ...]]
    ports: Mapping[int, tuple[int, ...]]
    outbound_is_traversal: Mapping[int, bool]
    insertions: Mapping[int, int]
    ordering: tuple[int, ...]


def _boundary_children(arr: Arrangement, tc: TreeCotree, fid: int,
                       parent_eid: Optional[int]) -> list[int]:
    """Cotree edges to the children of face fid, in ccw boundary order.

    The walk starts just after the parent edge (or at the cycle's stored
    start for the root / unbounded face).
    """
    cycle = arr.faces[fid].boundary
    n = len(cycle)
    start = 0
    if parent_eid is not None:
        start = next(i for i, d in enumerate(cycle) if d.edge == parent_eid) + 1
    out = []
    for k in range(n):
        d = cycle[(start + k) % n]
        eid = d.edge
        if eid == parent_eid or eid not in tc.cotree:
            continue
        # only edges whose *child* side is a child of fid belong here
        if tc.parent_edge.get(_child_face(arr, tc, eid)) == eid and \
                tc.parent_face[_child_face(arr, tc, eid)] == fid:
            out.append(eid)
    return out


def _child_face(arr: Arrangement, tc: TreeCotree, eid: int) -> int:
    e = arr.edges[eid]
    a, b = e.left_face, e.right_face
    # the deeper endpoint of the dual cotree edge is the child
    if tc.parent_edge.get(a) == eid:
        return a
    assert tc.parent_edge.get(b) == eid, f"edge {eid} is not a cotree edge"
    return b


def build_cable_system(arr: Arrangement, tc: TreeCotree,
                       insertions: Optional[Mapping[int, int]] = None) -> CableSystem:
    """Construct the canonical nested cable routing.

    ``insertions[f]`` picks where face f's own cable joins the bundle
    leaving f through its parent edge (0 = in front, in outbound reading
    order).  Every choice is realizable; the default 0 matches the
    default flattening of the recursive word construction.
    """
    insertions = dict(insertions or {})
    ports: dict[int, tuple[int, ...]] = {}
    outbound_fwd: dict[int, bool] = {}

    def bundle(eid: int) -> tuple[int, ...]:
        if eid in ports:
            return ports[eid]
        g = _child_face(arr, tc, eid)
        children = _boundary_children(arr, tc, g, eid)
        # outbound reading order: reversed child blocks, own cable inserted
        blocks: list[int] = []
        for a in reversed(children):
            blocks.extend(bundle(a))
        pos = insertions.get(g, 0)
        if not 0 <= pos <= len(blocks):
            raise InvalidFlattening(
                f"insertion {pos} for face {g} out of range 0..{len(blocks)}")
        seq = tuple(blocks[:pos]) + (g,) + tuple(blocks[pos:])
        ports[eid] = seq
        e = arr.edges[eid]
        outbound_fwd[eid] = e.left_face == g
        return seq

    for fid in tc.parent_edge:
        bundle(tc.parent_edge[fid])

    cables: dict[int, tuple[int, ...]] = {}
    for f in tc.parent_edge:
        path = []
        g = f
        while g != 0:
            path.append(tc.parent_edge[g])
            g = tc.parent_face[g]
        cables[f] = tuple(path)
        # shortest path assumption: crossings == depth
        assert len(path) == arr.faces[f].depth

    ordering: list[int] = []
    for eid in _boundary_children(arr, tc, 0, None):
        ordering.extend(ports[eid])

    # cables sharing a path prefix keep one relative order on every edge
    for f, path in cables.items():
        for eid in path:
            assert f in ports[eid]

    return CableSystem(arr=arr, tc=tc, cables=cables, ports=ports,
                       outbound_is_traversal=outbound_fwd,
                       insertions=insertions, ordering=tuple(ordering))


def blank_word(arr: Arrangement, cables: CableSystem) -> CyclicWord:
    """Trace the curve and record every cable crossing with its sign.

    A crossing is positive when the curve crosses the cable from right to
    left, which happens exactly when the edge's outbound direction agrees
    with the traversal direction.
    """
    letters: list[Letter] = []
    for d in arr.traversal:
        eid = d.edge
        if eid not in cables.ports:
            continue
        seq = cables.ports[eid]
        if cables.outbound_is_traversal[eid]:
            letters.extend((f, 1) for f in seq)
        else:
            letters.extend((f, -1) for f in reversed(seq))
    word = CyclicWord(tuple(letters), arr.face_weights())
    return word


# ---------------------------------------------------------------------------
# the recursive construction


@dataclass(frozen=True)
class Flattening:
    """Per internal cotree node: which child word is split, and where.

    ``choices[f] = (j, split)`` with j in 1..r counted as in the rewriting
    e_f = w̄_r ... w̄_{j+1} (w̄_j)' ∂f (w̄_j)'' w̄_{j-1} ... w̄_1; ``split``
    is the length of the prefix (w̄_j)'.
    """

    choices: Mapping[int, tuple[int, int]] = field(default_factory=dict)


def nie_word(arr: Arrangement, tc: TreeCotree,
             flat: Optional[Flattening] = None) -> CyclicWord:
    """Bottom-up rewriting of cotree edges into free words over the faces.

    Leaves become a single signed face letter (positive when the edge runs
    counter-clockwise around its face); internal nodes splice the face
    letter into the inverted child words at the position the flattening
    dictates.  The final word concatenates the per-edge free words in
    curve-traversal order.
    """
    choices = dict(flat.choices) if flat else {}
    memo: dict[int, tuple[Letter, ...]] = {}

    def oriented(eid: int) -> tuple[Letter, ...]:
        """Free word of cotree edge eid, oriented along the traversal."""
        if eid in memo:
            return memo[eid]
        g = _child_face(arr, tc, eid)
        children = _boundary_children(arr, tc, g, eid)
        r = len(children)
        # child words in boundary (ccw around g) orientation
        w: list[tuple[Letter, ...]] = []
        for a in children:
            wa = oriented(a)
            ccw_around_g = arr.edges[a].left_face == g
            w.append(wa if ccw_around_g else invert_sequence(wa))
        if r == 0:
            u: tuple[Letter, ...] = ((g, 1),)
        else:
            j, split = choices.get(g, (r, 0))
            if not 1 <= j <= r:
                raise InvalidFlattening(f"face {g}: child index {j} not in 1..{r}")
            wbar = [invert_sequence(x) for x in w]  # wbar[i] for child i+1
            if not 0 <= split <= len(wbar[j - 1]):
                raise InvalidFlattening(
                    f"face {g}: split {split} out of range 0..{len(wbar[j - 1])}")
            u = ()
            for i in range(r, j, -1):
                u += wbar[i - 1]
            u += wbar[j - 1][:split] + ((g, 1),) + wbar[j - 1][split:]
            for i in range(j - 1, 0, -1):
                u += wbar[i - 1]
        e_ccw_around_g = arr.edges[eid].left_face == g
        res = u if e_ccw_around_g else invert_sequence(u)
        memo[eid] = res
        return res

    letters: list[Letter] = []
    for d in arr.traversal:
        if d.edge in tc.cotree:
            letters.extend(oriented(d.edge))
    return CyclicWord(tuple(letters), arr.face_weights())


def derive_flattening(cables: CableSystem) -> Flattening:
    """The flattening induced by a cable system's insertion choices.

    The insertion position of face f's cable inside the outbound bundle
    of its parent edge determines which inverted child word is split and
    where.
    """
    arr, tc = cables.arr, cables.tc
    choices: dict[int, tuple[int, int]] = {}
    for g, path in cables.cables.items():
        eid = path[0]
        children = _boundary_children(arr, tc, g, eid)
        r = len(children)
        if r == 0:
            continue
        lengths = [len(cables.ports[a]) for a in children]  # child 1..r
        pos = cables.insertions.get(g, 0)
        remaining = pos
        j, split = r, 0
        for idx in range(r, 0, -1):
            if remaining <= lengths[idx - 1]:
                j, split = idx, remaining
                break
            remaining -= lengths[idx - 1]
        choices[g] = (j, split)
    return Flattening(choices=choices)


# ---------------------------------------------------------------------------
# combined words


VertexToken = tuple[str, int, int]  # ("v", vertex id, occurrence 1 or 2)


@dataclass(frozen=True)
class CombinedWord:
    """Cyclic interleaving of vertex tokens and signed face letters."""

    tokens: tuple[object, ...]  # VertexToken or Letter
    weights: Mapping[int, Fraction] = field(default_factory=dict)

    def face_letters(self) -> tuple[Letter, ...]:
        return tuple(t for t in self.tokens if not is_vertex_token(t))

    def vertex_sequence(self) -> tuple[int, ...]:
        return tuple(t[1] for t in self.tokens if is_vertex_token(t))

    def word(self) -> CyclicWord:
        return CyclicWord(self.face_letters(), self.weights)


def is_vertex_token(tok) -> bool:
    return isinstance(tok, tuple) and len(tok) == 3 and tok[0] == "v"


def combined_word(arr: Arrangement, cables: CableSystem) -> CombinedWord:
    """Interleave the intersection sequence with the cable crossings."""
    tokens: list[object] = []
    seen: dict[int, int] = {}
    for d in arr.traversal:
        eid = d.edge
        v = arr.dart_tail(d)
        if v is not None:
            occ = seen.get(v, 0) + 1
            seen[v] = occ
            tokens.append(("v", v, occ))
        if eid in cables.ports:
            seq = cables.ports[eid]
            if cables.outbound_is_traversal[eid]:
                tokens.extend((f, 1) for f in seq)
            else:
                tokens.extend((f, -1) for f in reversed(seq))
    for v, occ in seen.items():
        assert occ == 2, f"vertex {v} must appear exactly twice"
    return CombinedWord(tuple(tokens), arr.face_weights())
