from fractions import Fraction

import pytest

from conftest import CORPUS, load_curve, pipeline
from curvefold.arrangement import (DegenerateCurve, NonGenericCurve, PlaneCurve,
                                   build_arrangement, fraction_str, parse_curve,
                                   rotation_number, to_fraction, tree_cotree)

# frozen per-curve facts: rotation, vertex count, {face: (area, winding, depth)}
EXPECTED = {
    "bowtie": (0, 1, {1: ("12", -1, 1), 2: ("12", 1, 1)}),
    "hook": (1, 2, {1: ("9", 2, 2), 2: ("74", 1, 1), 3: ("12", -1, 1)}),
    "limacon": (2, 1, {1: ("9.5", 2, 2), 2: ("79", 1, 1)}),
    "mouse": (0, 3, {1: ("3445/14", 1, 1), 2: ("8", 0, 2),
                     3: ("843/14", 2, 2), 4: ("8", 0, 2)}),
    "one_ear": (1, 2, {1: ("3473/14", 1, 1), 2: ("8", 0, 2),
                       3: ("927/14", 2, 2)}),
    "pentagram": (-2, 5, {1: ("121/35", -1, 1), 2: ("1024/105", -2, 2),
                          3: ("608/105", -1, 1), 4: ("608/105", -1, 1),
                          5: ("121/35", -1, 1), 6: ("4", -1, 1)}),
    "spiral": (3, 2, {1: ("101008/1813", 2, 2), 2: ("155586/1813", 1, 1),
                      3: ("774/37", 3, 3)}),
    "square": (1, 0, {1: ("16", 1, 1)}),
    "trefoil": (2, 3, {1: ("2223/88", 2, 2), 2: ("2385/176", 1, 1),
                       3: ("2385/176", 1, 1), 4: ("9.375", 1, 1)}),
}


def test_corpus_is_covered():
    assert set(CORPUS) == set(EXPECTED)


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_frozen_invariants(name):
    rot, nv, faces = EXPECTED[name]
    curve, arr, _, _, _ = pipeline(name)
    assert rotation_number(curve) == rot
    assert len(arr.vertices) == nv
    got = {f.id: (fraction_str(f.signed_area), f.winding, f.depth)
           for f in arr.faces[1:]}
    assert got == faces


def test_euler_formula(corpus_name):
    _, arr, _, _, _ = pipeline(corpus_name)
    v, e, f = len(arr.vertices), len(arr.edges), len(arr.faces)
    if v == 0:
        # crossing-free loop: one edge forming a closed cycle, two faces
        assert (e, f) == (1, 2)
    else:
        assert v - e + f == 2
        assert all(len(vert.darts_ccw) == 4 for vert in arr.vertices)
        assert e == 2 * v


def test_traversal_covers_each_edge_once(corpus_name):
    _, arr, _, _, _ = pipeline(corpus_name)
    assert sorted(d.edge for d in arr.traversal) == sorted(e.id for e in arr.edges)
    assert all(d.fwd for d in arr.traversal)
    # consecutive darts chain head-to-tail
    n = len(arr.traversal)
    for k in range(n):
        head = arr.dart_head(arr.traversal[k])
        tail = arr.dart_tail(arr.traversal[(k + 1) % n])
        assert head == tail


def test_face_boundaries_consistent(corpus_name):
    _, arr, _, _, _ = pipeline(corpus_name)
    for face in arr.faces:
        for d in face.boundary:
            assert arr.dart_face(d) == face.id
    # every dart lies on exactly one face boundary
    total = sum(len(f.boundary) for f in arr.faces)
    assert total == 2 * len(arr.edges)


def test_unbounded_face_has_depth_zero_winding_zero(corpus_name):
    _, arr, _, _, _ = pipeline(corpus_name)
    outer = arr.unbounded_face
    assert outer.depth == 0 and outer.winding == 0 and outer.area is None
    for f in arr.faces[1:]:
        assert f.depth >= 1
        assert f.signed_area > 0


def test_depth_is_dual_distance(corpus_name):
    """Depth equals the BFS level of the tree-cotree construction."""
    _, arr, tc, _, _ = pipeline(corpus_name)
    for f in arr.faces:
        assert tc.level[f.id] == f.depth


def test_winding_changes_by_one_across_edges(corpus_name):
    _, arr, _, _, _ = pipeline(corpus_name)
    for e in arr.edges:
        wl = arr.faces[e.left_face].winding
        wr = arr.faces[e.right_face].winding
        assert wl - wr == 1


def test_tree_cotree_partition(corpus_name):
    _, arr, tc, _, _ = pipeline(corpus_name)
    assert tc.tree | tc.cotree == {e.id for e in arr.edges}
    assert not (tc.tree & tc.cotree)
    assert len(tc.cotree) == len(arr.faces) - 1  # spanning tree of the dual
    for f in arr.faces[1:]:
        path = []
        cur = f.id
        while cur != 0:
            path.append(cur)
            cur = tc.parent_face[cur]
        assert len(path) == f.depth


def test_crossing_signs():
    expected = {"bowtie": [1], "spiral": [-1, -1],
                "pentagram": [1, -1, 1, -1, 1], "mouse": [1, 1, 1]}
    for name, signs in expected.items():
        _, arr, _, _, _ = pipeline(name)
        assert [arr.crossing_sign(v.id) for v in arr.vertices] == signs


def test_vertex_passes(corpus_name):
    _, arr, _, _, _ = pipeline(corpus_name)
    for vid, (a, b) in arr.vertex_passes.items():
        assert a != b
        assert arr.dart_tail(arr.traversal[a]) == vid
        assert arr.dart_tail(arr.traversal[b]) == vid


def test_rejects_too_few_points():
    with pytest.raises(DegenerateCurve):
        PlaneCurve(((Fraction(0), Fraction(0)), (Fraction(1), Fraction(1))))


def test_rejects_repeated_point():
    with pytest.raises(DegenerateCurve):
        parse_curve({"points": [[0, 0], [0, 0], [1, 1]]})


def test_rejects_endpoint_contact():
    # a crossing that coincides with a polyline vertex is not generic
    with pytest.raises(NonGenericCurve):
        build_arrangement(parse_curve(
            {"points": [[0, 0], [4, 3], [4, -3], [-4, 3], [-4, -3]]}))


def test_rejects_overlapping_segments():
    with pytest.raises(NonGenericCurve):
        build_arrangement(parse_curve(
            {"points": [[0, 0], [10, 0], [5, 5], [5, 0], [5, -5], [2, 0],
                        [1, -5]]}))


def test_rational_parsing_and_printing():
    assert to_fraction("1/3") == Fraction(1, 3)
    assert to_fraction("2.5") == Fraction(5, 2)
    assert to_fraction(7) == Fraction(7)
    assert fraction_str(Fraction(5, 2)) == "2.5"
    assert fraction_str(Fraction(-5, 4)) == "-1.25"
    assert fraction_str(Fraction(1, 3)) == "1/3"
    assert fraction_str(Fraction(4)) == "4"


def test_exact_rational_coordinates_work():
    curve = parse_curve({"points": [["1/3", "0"], ["10/3", "1/7"],
                                    ["2", "5/2"]]})
    arr = build_arrangement(curve)
    assert arr.faces[1].signed_area > 0
