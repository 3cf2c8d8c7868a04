from fractions import Fraction as F

import pytest

from qtrees.approx import build_approximation
from qtrees.coverings import generate_covering_sequence
from qtrees.metric import ScaleParams, generate_space
from qtrees.trees import (
    LevelledTree,
    binary_embed,
    binary_width,
    build_color_tree,
    check_binary_sandwich,
    check_color_tree,
    export_tree,
    word_distance,
)


@pytest.fixture(scope="module")
def cantor_tree():
    s = generate_space("cantor", 4)
    sc = ScaleParams.for_space(s, F(1, 9), 4)
    g = build_approximation(s, sc)
    seq = generate_covering_sequence("ultrametric", s, sc, 4, graph=g)
    return seq, build_color_tree(seq, 0), sc


def chain_tree():
    parent = {"r": None, "a": "r", "b": "a", "c": "b"}
    level = {"r": 0, "a": 1, "b": 2, "c": 3}
    return LevelledTree(root="r", parent=parent, level=level)


def test_generation_distance_basics():
    t = chain_tree()
    assert t.generation_distance("c", "c") == 0
    assert t.generation_distance("r", "c") == 3
    siblings = LevelledTree(
        root="r", parent={"r": None, "a": "r", "b": "r"},
        level={"r": 0, "a": 1, "b": 2})
    assert siblings.generation_distance("a", "b") == 2
    assert siblings.lowest_segment_vertex("a", "b") == "r"


def test_lowest_segment_vertex_comparable_is_ancestor_end():
    t = chain_tree()
    assert t.lowest_segment_vertex("a", "c") == "a"
    assert t.lowest_segment_vertex("c", "c") == "c"


def test_color_tree_structure(cantor_tree):
    seq, ct, sc = cantor_tree
    # the root is the whole space; every level-1 block hangs off it
    t = ct.tree
    assert t.level[t.root] == 0
    for uid in ct.level_vertices(1):
        assert t.parent[uid] == t.root
    # level-2 blocks nest inside their level-1 block
    for uid in ct.level_vertices(2):
        parent = t.parent[uid]
        assert t.level[parent] == 1
        assert ct.elements[parent].region.contains_region(
            ct.elements[uid].region)
    check = check_color_tree(seq, ct, sc.k0)
    assert check.status == "pass", check.violations[:2]


def test_color_tree_depth_bound(cantor_tree):
    seq, ct, sc = cantor_tree
    for uid, elem in ct.elements.items():
        assert ct.tree.depth(uid) <= elem.level - sc.k0


def test_single_level_tree():
    s = generate_space("cantor", 3)
    sc = ScaleParams.for_space(s, F(1, 9), 0)
    g = build_approximation(s, sc)
    seq = generate_covering_sequence("ultrametric", s, sc, 0, graph=g)
    ct = build_color_tree(seq, 0)
    assert len(ct.elements) == 1


def test_word_distance():
    assert word_distance((), ()) == 0
    assert word_distance((1, 2), (1, 2, 3)) == 1
    assert word_distance((1, 2), (1, 3)) == 2
    assert word_distance("abc", "abd") == 2


def test_binary_width_and_embed():
    assert binary_width(3) == 2
    assert binary_width(9) == 4
    assert binary_width(1) == 1
    assert binary_embed((3, 1), 3) == (1, 1, 0, 1)
    assert binary_embed((), 3) == ()
    with pytest.raises(ValueError):
        binary_embed((4,), 3)


def test_binary_sandwich_alphabets_3_to_9():
    for n in range(3, 10):
        res = check_binary_sandwich(n, max_len=5)
        assert res.status == "pass", (n, res.violations[:1])


def test_export_tree_format(cantor_tree, tmp_path):
    _, ct, _ = cantor_tree
    path = tmp_path / "tree.txt"
    export_tree(ct, path)
    lines = path.read_text().strip().split("\n")
    assert len(lines) == len(ct.elements)
    for line in lines:
        uid, parent, level, color = line.split()
        assert int(level) >= 0 and color == "0"
