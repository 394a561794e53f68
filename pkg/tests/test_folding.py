import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import load_curve, pipeline, unit_weights
from curvefold.folding import (CapExceeded, Folding, Pairing, cancellation_norm,
                               complete_to_maximal, empty_folding, is_linked,
                               is_self_overlapping, norm_bruteforce,
                               positively_foldable, positively_foldable_bruteforce)
from curvefold.words import CyclicWord


def W(*tokens, weights=None):
    letters = []
    for t in tokens:
        letters.append((abs(t), 1 if t > 0 else -1))
    return CyclicWord(letters, weights or {})


def random_word(rng, max_len=9, faces=3, max_weight=4):
    m = rng.randrange(0, max_len + 1)
    letters = [(rng.randrange(1, faces + 1), rng.choice([1, -1]))
               for _ in range(m)]
    weights = {f: Fraction(rng.randrange(1, max_weight + 1))
               for f in range(1, faces + 1)}
    return CyclicWord(letters, weights)


# ---------------------------------------------------------------------------
# pairings and linking


def test_pairing_requires_inverse_letters():
    w = W(1, 2, -1, 2)
    Folding(w, frozenset({Pairing(0, 2)}))     # 1 against -1: fine
    with pytest.raises(ValueError):
        Folding(w, frozenset({Pairing(1, 3)})) # 2 against 2: same sign
    with pytest.raises(ValueError):
        Folding(w, frozenset({Pairing(0, 1)})) # different faces


def test_linking_is_cyclic_alternation():
    w = W(3, 4, -3, -4)
    p, q = Pairing(0, 2), Pairing(1, 3)
    assert is_linked(p, q, w)
    w2 = W(3, -3, 4, -4)
    assert not is_linked(Pairing(0, 1), Pairing(2, 3), w2)
    with pytest.raises(ValueError):
        Folding(w, frozenset({p, q}))


def test_folding_positions_disjoint():
    w = W(1, -1, 1, -1)
    with pytest.raises(ValueError):
        Folding(w, frozenset({Pairing(0, 1), Pairing(1, 2)}))


def test_area_counts_unpaired_weight():
    w = W(1, 2, -1, weights={1: Fraction(3), 2: Fraction(5)})
    assert empty_folding(w).area == Fraction(11)
    assert Folding(w, frozenset({Pairing(0, 2)})).area == Fraction(5)


# ---------------------------------------------------------------------------
# the norm DP


KNOWN_NORMS = [
    (W(), 0),
    (W(1), 1),
    (W(1, -1), 0),
    (W(1, 2, 1), 3),
    (W(2, 3, 1, 4, 2, -3, -4), 5),      # alternation forbids both pairings
    (W(3, 4, -3, -4), 2),
    (W(1, -1, 1, -1), 0),
    (W(1, 1, -1, -1), 0),
]


@pytest.mark.parametrize("word,value", KNOWN_NORMS)
def test_known_norms_unit_weights(word, value):
    got, witness = cancellation_norm(unit_weights(word))
    assert got == Fraction(value)
    assert witness.area == got


def test_norm_weighted():
    w = W(3, 4, -3, -4, weights={3: Fraction(10), 4: Fraction(1)})
    value, witness = cancellation_norm(w)
    assert value == Fraction(2)          # cancel the heavy face
    assert witness.pairings == frozenset({Pairing(0, 2)})


def test_witness_tie_break_is_deterministic():
    w = unit_weights(W(1, -1, 1, -1))
    _, witness = cancellation_norm(w)
    _, witness2 = cancellation_norm(w)
    assert witness == witness2
    assert Pairing(0, 1) in witness.pairings or Pairing(0, 3) in witness.pairings


def test_norm_against_oracle_seeded():
    rng = random.Random(20240824)
    for _ in range(250):
        w = random_word(rng)
        value, witness = cancellation_norm(w)
        assert witness.area == value
        assert value == norm_bruteforce(w)


def test_oracle_cap():
    w = unit_weights(W(*([1] * 15)))
    with pytest.raises(CapExceeded):
        norm_bruteforce(w)


def test_complete_to_maximal():
    rng = random.Random(7)
    for _ in range(150):
        w = random_word(rng)
        value, witness = cancellation_norm(w)
        maximal = complete_to_maximal(w, witness)
        assert witness.pairings <= maximal.pairings
        assert maximal.area <= witness.area
        # no further pairing can be added
        used = maximal.paired_positions
        for i in range(len(w)):
            for j in range(i + 1, len(w)):
                if i in used or j in used:
                    continue
                f, s = w[i]
                g, t = w[j]
                if f != g or s != -t:
                    continue
                cand = Pairing(i, j) if s > 0 else Pairing(j, i)
                assert any(is_linked(cand, p, w) for p in maximal.pairings)


def test_maximal_completion_preserves_minimal_area():
    """Completing a minimum witness never uncovers more weight."""
    rng = random.Random(99)
    for _ in range(150):
        w = random_word(rng)
        value, witness = cancellation_norm(w)
        assert complete_to_maximal(w, witness).area == value


def test_norm_invariant_under_rotation_and_inverse():
    rng = random.Random(5)
    for _ in range(100):
        w = random_word(rng)
        value, _ = cancellation_norm(w)
        k = rng.randrange(0, len(w) + 1)
        assert cancellation_norm(w.rotate(k))[0] == value
        assert cancellation_norm(w.inverse())[0] == value


@given(st.integers(0, 10), st.integers(1, 3), st.integers(0, 2 ** 31))
@settings(max_examples=60, deadline=None)
def test_norm_bounded_by_total_weight(m, faces, seed):
    rng = random.Random(seed)
    w = random_word(rng, max_len=m, faces=faces)
    value, _ = cancellation_norm(w)
    total = sum(w.weight(i) for i in range(len(w)))
    assert 0 <= value <= total


# ---------------------------------------------------------------------------
# positive foldability and self-overlap detection


def test_positive_foldability_examples():
    ok, witness = positively_foldable(unit_weights(W(1)))
    assert ok and witness.pairings == frozenset()
    ok, _ = positively_foldable(unit_weights(W(1, 2, 1)))
    assert ok
    ok, _ = positively_foldable(unit_weights(W(-1)))
    assert not ok
    ok, _ = positively_foldable(unit_weights(W(1, 1, -1)))  # pairable
    assert ok
    ok, _ = positively_foldable(unit_weights(W(1, 2, 1, -3)))
    assert not ok


def test_positive_foldability_against_oracle():
    rng = random.Random(31337)
    for _ in range(250):
        w = random_word(rng, max_len=8)
        fast, witness = positively_foldable(w)
        assert fast == positively_foldable_bruteforce(w)
        if fast and witness is not None:
            # every pairing encloses only positive or cancelled letters
            assert isinstance(witness, Folding)


def test_self_overlapping_corpus():
    expected = {
        "square": True, "one_ear": True,
        "bowtie": False, "mouse": False, "limacon": False,
        "pentagram": False, "spiral": False, "trefoil": False,
        "hook": False,
    }
    for name, verdict in expected.items():
        got, cert = is_self_overlapping(load_curve(name))
        assert got == verdict, name
        if not verdict:
            assert "reason" in cert


def test_self_overlap_reason_rotation():
    _, cert = is_self_overlapping(load_curve("bowtie"))
    assert cert["reason"] == "rotation_number=0"
    # rotation 1 alone is not enough: a negative letter can be unpairable
    _, cert = is_self_overlapping(load_curve("hook"))
    assert cert["reason"] == "not_positively_foldable"
