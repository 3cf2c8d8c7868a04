from fractions import Fraction as F

import pytest

from qtrees.approx import Vertex, build_approximation
from qtrees.coverings import generate_covering_sequence
from qtrees.metric import ScaleParams, generate_space, make_space
from qtrees.stage1 import (
    CLOSE,
    DISTINCT,
    UNCLASSIFIED,
    classify_pair,
    critical_level,
    embed_stage1,
    stage1_suite,
    write_pairs_csv,
)


@pytest.fixture(scope="module")
def cantor_emb():
    s = generate_space("cantor", 4)
    sc = ScaleParams.for_space(s, F(1, 9), 4)
    g = build_approximation(s, sc)
    seq = generate_covering_sequence("ultrametric", s, sc, 4, graph=g)
    return embed_stage1(g, seq)


@pytest.fixture(scope="module")
def circle_emb():
    s = generate_space("circle", 81)
    sc = ScaleParams.for_space(s, F(1, 12), 2)
    g = build_approximation(s, sc)
    seq = generate_covering_sequence("shifted_arcs", s, sc, 2, graph=g,
                                     n_colors=2)
    return embed_stage1(g, seq)


def test_root_maps_to_root(cantor_emb):
    emb = cantor_emb
    for c in emb.colors:
        assert emb.image(c, emb.graph.root) == emb.trees[c].tree.root


def test_images_contain_balls_below_own_level(cantor_emb):
    emb = cantor_emb
    g = emb.graph
    for c in emb.colors:
        tree = emb.trees[c]
        for v in g.vertices:
            uid = emb.image(c, v)
            elem = tree.elements[uid]
            if v == g.root:
                continue
            assert elem.level <= v.level - 1
            coord = g.space.coords[v.center]
            assert elem.region.contains_ball(coord, g.ball_radius(v))
            # maximality of the image level
            for j in range(elem.level + 1, v.level):
                for other in tree.level_vertices(j):
                    assert not tree.elements[other].region.contains_ball(
                        coord, g.ball_radius(v))


def test_cantor_level2_maps_into_level1_block(cantor_emb):
    emb = cantor_emb
    tree = emb.trees[0]
    for v in emb.graph.vertices:
        if v.level == 2:
            assert tree.elements[emb.image(0, v)].level == 1


def test_classification_examples():
    s = generate_space("cantor", 4)
    sc = ScaleParams.for_space(s, F(1, 9), 4)
    g = build_approximation(s, sc)
    v = g.vertices[5]
    assert classify_pair(g, v, v).kind == CLOSE
    # boundary: d = r^l exactly gives critical level l
    rows = [[F(0), F(1, 36)], [F(1, 36), F(0)]]
    s2 = make_space(rows)
    sc2 = ScaleParams.for_space(s2, F(1, 6), 2)
    g2 = build_approximation(s2, sc2)
    a, b = Vertex(2, 0), Vertex(2, 1)
    pc = classify_pair(g2, a, b)
    assert pc.kind == DISTINCT and pc.critical_level == 2
    with pytest.raises(ValueError):
        critical_level(g2, a, a)


def test_scan_example_r6():
    # r = 1/6, d = 1/7: 1/36 <= 1/7 < 1/6
    rows = [[F(0), F(1, 7)], [F(1, 7), F(0)]]
    s = make_space(rows)
    sc = ScaleParams.for_space(s, F(1, 6), 2)
    g = build_approximation(s, sc)
    pc = classify_pair(g, Vertex(2, 0), Vertex(2, 1))
    assert pc.kind == DISTINCT and pc.critical_level == 2


def test_negative_level_pairs_unclassified():
    s = generate_space("grid", 3)
    sc = ScaleParams.for_space(s, F(1, 16))
    g = build_approximation(s, sc)
    assert sc.k0 == -1
    root = g.root
    other = next(v for v in g.vertices if v.level == 0
                 and v.center != root.center)
    kind = classify_pair(g, root, other).kind
    assert kind in (CLOSE, UNCLASSIFIED)


def test_product_distance(cantor_emb):
    emb = cantor_emb
    g = emb.graph
    v, w = g.vertices[0], g.vertices[10]
    assert emb.product_distance(v, v) == 0
    assert emb.product_distance(v, w) == emb.tree_distance(0, v, w)
    for a in g.vertices[:10]:
        for b in g.vertices[:10]:
            assert emb.product_distance(a, b) <= \
                2 * len(emb.colors) * g.distance(a, b)


def test_stage1_suites_pass(cantor_emb, circle_emb):
    for emb in (cantor_emb, circle_emb):
        checks, rows = stage1_suite(emb)
        for check in checks:
            assert check.status == "pass", (check.check_id,
                                            check.violations[:1])
        assert not any(r.violation for r in rows)


def test_pairs_csv(cantor_emb, tmp_path):
    _, rows = stage1_suite(cantor_emb)
    path = tmp_path / "pairs.csv"
    write_pairs_csv(rows, path)
    lines = path.read_text().strip().split("\n")
    assert lines[0].startswith("v,v'")
    assert len(lines) == len(rows) + 1


def test_single_vertex_graph_vacuous():
    s = generate_space("cantor", 3)
    sc = ScaleParams.for_space(s, F(1, 9), 0)
    g = build_approximation(s, sc)
    seq = generate_covering_sequence("ultrametric", s, sc, 0, graph=g)
    emb = embed_stage1(g, seq)
    checks, rows = stage1_suite(emb)
    assert not rows
    for check in checks:
        assert check.status == "pass"
