import json
import pathlib
from fractions import Fraction

import pytest

from curvefold.arrangement import build_arrangement, parse_curve, tree_cotree
from curvefold.words import blank_word, build_cable_system

CURVES_DIR = pathlib.Path(__file__).resolve().parent.parent / "curves"

CORPUS = sorted(p.stem for p in CURVES_DIR.glob("*.json"))


def load_curve(name: str):
    with open(CURVES_DIR / f"{name}.json") as fh:
        return parse_curve(json.load(fh))


_cache = {}


def pipeline(name: str):
    """(curve, arrangement, tree-cotree, cables, blank word), cached."""
    if name not in _cache:
        curve = load_curve(name)
        arr = build_arrangement(curve)
        tc = tree_cotree(arr)
        cables = build_cable_system(arr, tc)
        word = blank_word(arr, cables)
        _cache[name] = (curve, arr, tc, cables, word)
    return _cache[name]


def unit_weights(word):
    return word.with_weights({f: Fraction(1) for f in word.weights})


@pytest.fixture(params=CORPUS)
def corpus_name(request):
    return request.param
