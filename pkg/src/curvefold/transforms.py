"""Word rewrites that change the cable drawing but not the curve.

Redrawing the cables of a curve changes its word without changing what
the word measures: the cancellation norm and the existence of a positive
folding are drawing-independent.  Two generating moves realize every
redrawing: switching two cables that are adjacent in the rotation order
around the basepoint, and a full twist about a loop enclosing exactly
two cable endpoints.  Both are implemented as explicit substitutions on
the word, together with *transport* maps that carry a folding of the old
word to a folding of the new word with exactly the same area.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .folding import Folding, Pairing
from .words import CyclicWord, Letter, invert_sequence


class NotAdjacent(Exception):
    """The switch precondition cannot be established for this pair."""


# ---------------------------------------------------------------------------
# switching two adjacent cables


def _normalize_adjacent(word: CyclicWord, f: int, g: int) -> tuple[tuple[Letter, ...], list[int], list[tuple[int, int]]]:
    """Insert cancelling (g, g-bar) pairs so that every f is followed by a
    g and every f-bar is preceded by a g-bar.

    Models drawing cable g along cable f and back before heading to its
    own face.  Returns the letters, a map from old position to new
    position, and the list of inserted pair positions.
    """
    out: list[Letter] = []
    where: list[int] = []
    inserted: list[tuple[int, int]] = []
    for k in range(len(word)):
        letter = word[k]
        if letter == (f, -1):
            prev = out[-1] if out else None
            if prev != (g, -1):
                out.extend([(g, 1), (g, -1)])
                inserted.append((len(out) - 2, len(out) - 1))
        where.append(len(out))
        out.append(letter)
        if letter == (f, 1):
            nxt = word[(k + 1) % len(word)]
            if nxt != (g, 1):
                out.extend([(g, 1), (g, -1)])
                inserted.append((len(out) - 2, len(out) - 1))
    return tuple(out), where, inserted


def _switch_blocks(letters: Sequence[Letter], f: int, g: int) -> tuple[tuple[Letter, ...], list[int]]:
    """Swap every "f g" block to "g f" and every "g-bar f-bar" to
    "f-bar g-bar"; returns letters and the induced position permutation."""
    n = len(letters)
    perm = list(range(n))
    out = list(letters)
    for k in range(n):
        nxt = (k + 1) % n
        if letters[k] == (f, 1):
            if out[nxt] != (g, 1) or letters[nxt] != (g, 1):
                raise NotAdjacent(f"letter {f} at {k} not followed by {g}")
            out[k], out[nxt] = (g, 1), (f, 1)
            perm[k], perm[nxt] = nxt, k
        if letters[k] == (f, -1):
            prv = (k - 1) % n
            if letters[prv] != (g, -1):
                raise NotAdjacent(f"inverse of {f} at {k} not preceded by inverse of {g}")
            out[prv], out[k] = (f, -1), (g, -1)
            perm[prv], perm[k] = k, prv
    return tuple(out), perm


def switch_adjacent(word: CyclicWord, f: int, g: int) -> CyclicWord:
    """Move cable f across the neighbouring cable g.

    The word is first normalized (cancelling (g, g-bar) pairs inserted at
    every f crossing that lacks a neighbour), then each adjacent block is
    swapped.  Weights are untouched.
    """
    if f == g:
        raise NotAdjacent("a cable cannot switch with itself")
    normalized, _, _ = _normalize_adjacent(word, f, g)
    switched, _ = _switch_blocks(normalized, f, g)
    return CyclicWord(switched, word.weights)


def transport_folding_switch(word: CyclicWord, word_switched: CyclicWord,
                             folding: Folding, f: int, g: int) -> Folding:
    """Carry a folding across ``switch_adjacent`` with equal area.

    Pairings not involving the (f, f-bar) letters ride along the position
    permutation.  Around each paired (f, f-bar) the neighbouring g
    letters are re-paired with each other so no pairing becomes linked;
    the count and faces of paired letters are unchanged.
    """
    if f == g:
        raise NotAdjacent("a cable cannot switch with itself")
    normalized, where, inserted = _normalize_adjacent(word, f, g)
    switched, perm = _switch_blocks(normalized, f, g)
    assert CyclicWord(switched, word.weights) == word_switched, \
        "second word must be the switch of the first"
    n = len(normalized)

    # lift onto the normalized word: old pairings move, inserted pairs pair up
    partner: dict[int, int] = {}
    for p in folding.pairings:
        a, b = where[p.i], where[p.j]
        partner[a] = b
        partner[b] = a
    for a, b in inserted:
        partner[a] = b
        partner[b] = a

    # re-pair neighbours of every paired (f, f-bar)
    for a, b in list(partner.items()):
        if normalized[a] != (f, 1) or normalized[b] != (f, -1):
            continue
        ga, gb = (a + 1) % n, (b - 1) % n     # the flanking g and g-bar
        pa, pb = partner.get(ga), partner.get(gb)
        if pa == gb:
            continue                          # already paired together
        if pa is not None and pb is not None:
            partner[ga], partner[gb] = gb, ga
            partner[pa], partner[pb] = pb, pa
        elif pa is not None:
            del partner[pa]
            partner[ga], partner[gb] = gb, ga
        elif pb is not None:
            del partner[pb]
            partner[ga], partner[gb] = gb, ga

    pairings = frozenset(Pairing(min(perm[a], perm[partner[a]]),
                                 max(perm[a], perm[partner[a]]))
                         for a in partner)
    result = Folding(word_switched, pairings)
    assert result.area == folding.area
    return result


# ---------------------------------------------------------------------------
# the twist about a loop around two cable ends


@dataclass(frozen=True)
class _Slot:
    """One letter of the twisted word with its provenance."""

    letter: Letter
    orig: Optional[int]          # original position, if the letter survives
    host: Optional[int] = None   # original position whose block added it
    block: Optional[str] = None  # "pre" or "suf"
    index: int = -1


def _twist_blocks(i: int, j: int, B: Sequence[Letter], letter: Letter) -> Optional[tuple[tuple[Letter, ...], tuple[Letter, ...]]]:
    """Conjugating blocks inserted around one original letter, if any."""
    Bi = tuple(B)
    Bb = invert_sequence(Bi)
    f, _ = letter
    if f == i:
        return ((i, -1), *Bb, (j, -1), *Bi), (*Bb, (j, 1), *Bi, (i, 1))
    if f == j:
        return ((*Bi, (i, -1), *Bb, (j, -1))), ((j, 1), *Bi, (i, 1), *Bb)
    return None


def _twist_layout(word: CyclicWord, i: int, j: int, B: Sequence[Letter]) -> list[_Slot]:
    slots: list[_Slot] = []
    for k in range(len(word)):
        letter = word[k]
        blocks = _twist_blocks(i, j, B, letter)
        if blocks is None:
            slots.append(_Slot(letter, orig=k))
            continue
        pre, suf = blocks
        for t, l in enumerate(pre):
            slots.append(_Slot(l, orig=None, host=k, block="pre", index=t))
        slots.append(_Slot(letter, orig=k))
        for t, l in enumerate(suf):
            slots.append(_Slot(l, orig=None, host=k, block="suf", index=t))
    return slots


def dehn_twist(word: CyclicWord, i: int, j: int, B: Sequence[Letter]) -> CyclicWord:
    """Full twist about a loop enclosing the ends of cables i and j.

    Every crossing with cable i or j picks up conjugating blocks built
    from the bundle word B of the cables lying between them; crossings
    with other cables are untouched.
    """
    slots = _twist_layout(word, i, j, B)
    return CyclicWord(tuple(s.letter for s in slots), word.weights)


def _mirror(slots: list[_Slot]) -> dict[int, int]:
    """Position of each added letter's conjugate inverse twin.

    The blocks flanking one original letter mirror each other: entry t of
    the prefix inverts entry L-1-t of the suffix.
    """
    by_key = {(s.host, s.block, s.index): p
              for p, s in enumerate(slots) if s.orig is None}
    length = {}
    for s in slots:
        if s.orig is None:
            length[s.host] = max(length.get(s.host, 0), s.index + 1)
    twin: dict[int, int] = {}
    for p, s in enumerate(slots):
        if s.orig is None:
            other = "suf" if s.block == "pre" else "pre"
            q = by_key[(s.host, other, length[s.host] - 1 - s.index)]
            twin[p] = q
    return twin


def transport_folding_twist(word: CyclicWord, word_twisted: CyclicWord,
                            folding: Folding, i: int, j: int,
                            B: Sequence[Letter]) -> Folding:
    """Carry a folding across ``dehn_twist`` with equal area.

    Original pairings survive at their new positions.  Around every
    surviving letter the added blocks pair off: mirror-wise around an
    unpaired letter, and across the two members of a pairing (prefix of
    one against suffix of the other), which matches because the blocks
    are conjugate mirror images.
    """
    slots = _twist_layout(word, i, j, B)
    assert CyclicWord(tuple(s.letter for s in slots), word.weights) == word_twisted, \
        "second word must be the twist of the first"
    pos_of = {s.orig: p for p, s in enumerate(slots) if s.orig is not None}
    blocks: dict[tuple[int, str], list[int]] = {}
    for p, s in enumerate(slots):
        if s.orig is None:
            blocks.setdefault((s.host, s.block), []).append(p)

    paired_with = {}
    for p in folding.pairings:
        paired_with[p.i] = p.j
        paired_with[p.j] = p.i

    pairings = {Pairing(min(pos_of[p.i], pos_of[p.j]), max(pos_of[p.i], pos_of[p.j]))
                for p in folding.pairings}

    def pair_blocks(xs: list[int], ys: list[int]) -> None:
        assert len(xs) == len(ys)
        for t, x in enumerate(xs):
            y = ys[len(ys) - 1 - t]
            a, b = min(x, y), max(x, y)
            pairings.add(Pairing(a, b))

    done: set[int] = set()
    for k in range(len(word)):
        if (k, "pre") not in blocks or k in done:
            continue
        mate = paired_with.get(k)
        if mate is None:
            pair_blocks(blocks[(k, "pre")], blocks[(k, "suf")])
            done.add(k)
        else:
            pair_blocks(blocks[(k, "suf")], blocks[(mate, "pre")])
            pair_blocks(blocks[(mate, "suf")], blocks[(k, "pre")])
            done.update((k, mate))

    result = Folding(word_twisted, frozenset(pairings))
    assert result.area == folding.area
    return result


def back_transport_twist(word: CyclicWord, word_twisted: CyclicWord,
                         folding_twisted: Folding, i: int, j: int,
                         B: Sequence[Letter]) -> Folding:
    """Pull a folding of the twisted word back, never increasing area.

    A pairing between a surviving letter and an added letter is resolved
    by alternately following the folding's pairing map and the mirror
    twin map until the chain ends at another surviving letter (pair the
    two survivors) or at an unpaired added letter (leave the survivor
    unpaired — its weight is covered by that added letter of the same
    face).  Both maps are injective, so the chain terminates; a visit set
    guards against malformed input.
    """
    slots = _twist_layout(word, i, j, B)
    assert CyclicWord(tuple(s.letter for s in slots), word.weights) == word_twisted
    twin = _mirror(slots)
    partner: dict[int, int] = {}
    for p in folding_twisted.pairings:
        partner[p.i] = p.j
        partner[p.j] = p.i

    pairings: list[Pairing] = []
    assigned: set[int] = set()
    for p in folding_twisted.pairings:
        a, b = p.i, p.j
        sa, sb = slots[a], slots[b]
        if sa.orig is not None and sb.orig is not None:
            pairings.append(Pairing(min(sa.orig, sb.orig), max(sa.orig, sb.orig)))
            assigned.update((sa.orig, sb.orig))
        elif sa.orig is None and sb.orig is None:
            continue
        else:
            start, added = (sa, b) if sa.orig is not None else (sb, a)
            if start.orig in assigned:
                continue
            visited: set[int] = set()
            cur = added
            end: Optional[int] = None
            while True:
                assert cur not in visited, "the alternating chain must not loop"
                visited.add(cur)
                t = twin[cur]
                if t in visited:
                    break
                visited.add(t)
                nxt = partner.get(t)
                if nxt is None:
                    break                      # unpaired twin: survivor stays unpaired
                if slots[nxt].orig is not None:
                    end = slots[nxt].orig
                    break
                cur = nxt
            if end is not None and end not in assigned:
                pairings.append(Pairing(min(start.orig, end), max(start.orig, end)))
                assigned.update((start.orig, end))

    result = Folding(word, frozenset(pairings))
    assert result.area <= folding_twisted.area
    return result


# ---------------------------------------------------------------------------
# merging cables that end in the same face


def merge_face_cables(word: CyclicWord, alias: Mapping[int, int]) -> CyclicWord:
    """Rename letters of gathered same-face cables to one canonical face.

    Cables that end in one face and follow the same route may be merged;
    in the word this is a renaming, with the canonical face's weight
    carried by the merged letter.
    """
    letters = tuple((alias.get(f, f), s) for f, s in word)
    weights = {alias.get(f, f): w for f, w in word.weights.items()}
    for f, w in word.weights.items():
        assert weights[alias.get(f, f)] == w, "aliased faces must share a weight"
    return CyclicWord(letters, weights)
