import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import pipeline, unit_weights
from curvefold.arrangement import tree_cotree
from curvefold.folding import cancellation_norm
from curvefold.words import (CyclicWord, Flattening, InvalidFlattening,
                             blank_word, build_cable_system, combined_word,
                             cyclic_equal, derive_flattening, equal_up_to_relabeling,
                             face_counts, invert_sequence, letter_str, nie_word,
                             parse_letter, parse_word, reduce, word_to_json)

# frozen face words (exact letters as produced by the canonical cable order)
EXPECTED_WORDS = {
    "bowtie": [(1, -1), (2, 1)],
    "hook": [(1, 1), (2, 1), (1, 1), (3, -1)],
    "limacon": [(1, 1), (2, 1), (1, 1)],
    "mouse": [(2, -1), (3, 1), (4, -1), (1, 1), (2, 1), (3, 1), (4, 1)],
    "one_ear": [(2, -1), (3, 1), (1, 1), (2, 1), (3, 1)],
    "pentagram": [(2, -1), (3, -1), (5, -1), (2, -1), (1, -1), (4, -1), (6, -1)],
    "spiral": [(1, 1), (3, 1), (3, 1), (2, 1), (1, 1), (3, 1)],
    "square": [(1, 1)],
    "trefoil": [(1, 1), (3, 1), (2, 1), (1, 1), (4, 1)],
}


def letters_strategy(max_len=8, faces=3):
    return st.lists(
        st.tuples(st.integers(1, faces), st.sampled_from([1, -1])),
        min_size=0, max_size=max_len)


@pytest.mark.parametrize("name", sorted(EXPECTED_WORDS))
def test_frozen_blank_words(name):
    _, _, _, _, word = pipeline(name)
    assert cyclic_equal(word, CyclicWord(EXPECTED_WORDS[name], word.weights))


def test_blank_equals_nie_on_corpus(corpus_name):
    _, arr, tc, cables, word = pipeline(corpus_name)
    other = nie_word(arr, tc, derive_flattening(cables))
    assert cyclic_equal(word, other)


def test_all_flattenings_same_norm(corpus_name):
    """Different cycle flattenings change the word but not its norm or
    per-face signed counts."""
    _, arr, tc, cables, word = pipeline(corpus_name)
    base, _ = cancellation_norm(word)
    faces = sorted(f for f in tc.parent_face if f != 0)
    variants = 0
    for f in faces:
        for j in (1, 2):
            for split in (0, 1):
                try:
                    w = nie_word(arr, tc, Flattening({f: (j, split)}))
                except InvalidFlattening:
                    continue
                variants += 1
                value, _ = cancellation_norm(w)
                assert value == base
                for g in word.weights:
                    assert face_counts(w, g)[0] == face_counts(word, g)[0]
    assert variants >= 1


def test_flattening_rejects_bad_indices():
    _, arr, tc, _, _ = pipeline("mouse")
    with pytest.raises(InvalidFlattening):
        nie_word(arr, tc, Flattening({1: (99, 0)}))


def test_unsigned_count_equals_depth(corpus_name):
    """Managed cables cross exactly depth-many curve edges."""
    _, arr, _, _, word = pipeline(corpus_name)
    for f in arr.faces[1:]:
        signed, unsigned = face_counts(word, f.id)
        assert signed == f.winding
        assert unsigned == f.depth


def test_cable_lengths_equal_depth(corpus_name):
    _, arr, tc, cables, _ = pipeline(corpus_name)
    for f in arr.faces[1:]:
        assert len(cables.cables[f.id]) == f.depth
        # the cable follows the dual cotree toward the unbounded face
        assert all(e in tc.cotree for e in cables.cables[f.id])
    # ports account for every cable crossing
    crossings = sum(len(seq) for seq in cables.ports.values())
    assert crossings == sum(f.depth for f in arr.faces[1:])


def test_combined_word_consistency(corpus_name):
    _, arr, _, cables, word = pipeline(corpus_name)
    cw = combined_word(arr, cables)
    assert cyclic_equal(cw.word(), word)
    seq = cw.vertex_sequence()
    assert len(seq) == 2 * len(arr.vertices)
    for v in range(len(arr.vertices)):
        assert seq.count(v) == 2


def test_insertion_choices_preserve_norm():
    _, arr, tc, _, word = pipeline("mouse")
    base, _ = cancellation_norm(word)
    from curvefold.words import InvalidFlattening
    for f in word.weights:
        for pos in (0, 1):
            try:
                cables = build_cable_system(arr, tc, insertions={f: pos})
            except InvalidFlattening:
                continue  # leaf faces only admit position 0
            w = blank_word(arr, cables)
            value, _ = cancellation_norm(w)
            assert value == base
            assert cyclic_equal(w, nie_word(arr, tc, derive_flattening(cables)))


def test_mouse_word_both_cable_orders():
    """Two distinct canonical cable orders give two frozen words."""
    _, arr, _, _, _ = pipeline("mouse")
    target_a = CyclicWord([(2, 1), (3, 1), (1, 1), (4, 1), (2, 1),
                           (3, -1), (4, -1)])
    target_b = CyclicWord([(3, 1), (2, 1), (1, 1), (4, 1), (3, -1),
                           (2, 1), (4, -1)])
    tc_a = tree_cotree(arr, prefer={3: 3})
    wa = blank_word(arr, build_cable_system(arr, tc_a, insertions={1: 1}))
    assert equal_up_to_relabeling(wa, target_a)
    tc_b = tree_cotree(arr, prefer={3: 1})
    wb = blank_word(arr, build_cable_system(arr, tc_b, insertions={1: 2}))
    assert equal_up_to_relabeling(wb, target_b)


# ---------------------------------------------------------------------------
# word utilities


def test_reduce_examples():
    w = CyclicWord([(1, 1), (2, 1), (2, -1), (1, -1)])
    assert reduce(w).letters == ()
    w = CyclicWord([(2, 1), (1, 1), (1, -1), (3, 1)])
    assert reduce(w).letters in (((2, 1), (3, 1)), ((3, 1), (2, 1)))
    # cyclic cancellation across the seam
    w = CyclicWord([(1, -1), (2, 1), (2, -1), (3, 1), (1, 1)])
    assert sorted(reduce(w).letters) == [(3, 1)]


@given(letters_strategy())
@settings(max_examples=200, deadline=None)
def test_reduce_is_idempotent_and_cancellation_free(letters):
    w = reduce(CyclicWord(letters))
    assert reduce(w).letters == w.letters
    n = len(w)
    for k in range(n):
        f, s = w[k]
        g, t = w[(k + 1) % n]
        if n > 1:
            assert not (f == g and s == -t)


@given(letters_strategy(), st.integers(0, 7))
@settings(max_examples=200, deadline=None)
def test_cyclic_equal_under_rotation(letters, k):
    w = CyclicWord(letters)
    assert cyclic_equal(w, w.rotate(k))


@given(letters_strategy())
@settings(max_examples=200, deadline=None)
def test_inverse_involution(letters):
    w = CyclicWord(letters)
    assert w.inverse().inverse().letters == w.letters
    assert invert_sequence(invert_sequence(tuple(letters))) == tuple(letters)


@given(letters_strategy())
@settings(max_examples=200, deadline=None)
def test_face_counts_add_up(letters):
    w = CyclicWord(letters)
    total = sum(face_counts(w, f)[1] for f in w.weights)
    assert total == len(w)
    for f in w.weights:
        signed, unsigned = face_counts(w, f)
        assert abs(signed) <= unsigned


def test_relabeling_equality():
    a = CyclicWord([(1, 1), (2, -1), (1, 1)])
    b = CyclicWord([(5, 1), (9, -1), (5, 1)])
    assert equal_up_to_relabeling(a, b)
    c = CyclicWord([(5, 1), (9, 1), (5, 1)])
    assert not equal_up_to_relabeling(a, c)


def test_word_json_round_trip(corpus_name):
    _, _, _, _, word = pipeline(corpus_name)
    doc = word_to_json(word)
    back = parse_word(doc)
    assert back.letters == word.letters
    assert back.weights == word.weights


def test_letter_parsing():
    assert parse_letter("3") == (3, 1)
    assert parse_letter("-3") == (3, -1)
    assert letter_str((4, -1)) == "-4"
    with pytest.raises(ValueError):
        parse_letter("0")


def test_weights_validation():
    with pytest.raises(ValueError):
        CyclicWord([(1, 1)], {1: Fraction(-1)})
