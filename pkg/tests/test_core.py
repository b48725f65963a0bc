from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from k4e.core import (
    Block,
    Design,
    EdgeCollision,
    EdgeMask,
    EdgeMissing,
    InvalidBlock,
    OrderMismatch,
    Permutation,
    Triangle,
    VertexOutOfRange,
    WrongBlockCount,
    admissible_order,
    apply_permutation,
    block_edges,
    block_triangles,
    read_design,
    validate_design,
)

ORDER6 = [[0, 1, 2, 3], [2, 3, 4, 5], [4, 5, 0, 1]]


def perms(v):
    return st.permutations(list(range(v))).map(lambda p: Permutation(tuple(p)))


@pytest.mark.parametrize("v, ok", [(6, True), (5, False), (12, False), (10, True), (11, True),
                                   (0, False), (1, False), (15, True), (16, True)])
def test_admissible_order(v, ok):
    assert admissible_order(v) is ok


def test_block_normalizes_pairs():
    assert Block(1, 0, 3, 2) == Block(0, 1, 2, 3)
    assert Block(0, 1, 2, 3).p == (0, 1)
    assert Block(0, 1, 2, 3).q == (2, 3)
    assert str(Block(4, 5, 1, 0)) == "[4,5,0-1]"


@pytest.mark.parametrize("bad", [(0, 0, 1, 2), (0, 1, 1, 2), (0, 1, 2, 2), (-1, 1, 2, 3)])
def test_block_rejects_repeated_vertices(bad):
    with pytest.raises(InvalidBlock):
        Block(*bad)


def test_block_edges():
    assert block_edges(Block(0, 1, 2, 3)) == {(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)}
    assert block_edges(Block(2, 3, 4, 5)) == {(2, 3), (2, 4), (2, 5), (3, 4), (3, 5)}


@given(st.permutations(range(8)))
def test_block_edges_never_contain_missing_edge(p):
    b = Block(*p[:4])
    e = block_edges(b)
    assert len(e) == 5 and b.q not in e


def test_block_triangles():
    assert block_triangles(Block(0, 1, 2, 3)) == {Triangle(0, 1, 2), Triangle(0, 1, 3)}
    assert block_triangles(Block(4, 5, 0, 1)) == {Triangle(0, 4, 5), Triangle(1, 4, 5)}


def test_edge_mask_index_is_a_bijection():
    for v in (6, 10, 11):
        m = EdgeMask(v)
        idx = [m.index(x, y) for x in range(v) for y in range(x + 1, v)]
        assert sorted(idx) == list(range(v * (v - 1) // 2))
        assert all(m.edge(m.index(x, y)) == (x, y) for x in range(v) for y in range(x + 1, v))
    assert EdgeMask(11).index(0, 1) == 0 and EdgeMask(11).index(9, 10) == 54


def test_edge_mask_disjointness():
    a = EdgeMask.of_block(6, Block(0, 1, 2, 3))
    b = EdgeMask.of_block(6, Block(2, 3, 4, 5))
    c = EdgeMask.of_block(6, Block(0, 1, 4, 5))
    assert a.isdisjoint(b) and not a.isdisjoint(c)
    assert len(a | b) == 10 and (0, 1) in a and (2, 3) not in a


def test_validate_order6():
    d = validate_design(6, ORDER6)
    assert d.order == 6 and len(d.blocks) == 3
    assert [b.as_list() for b in d.blocks] == sorted(ORDER6)


def test_validate_order11_cyclic():
    d = validate_design(11, [[i, (i + 1) % 11, (i + 3) % 11, (i + 5) % 11] for i in range(11)])
    assert len(d.triangles()) == 22


def test_validate_reports_collision():
    with pytest.raises(EdgeCollision) as err:
        validate_design(6, [[0, 1, 2, 3], [0, 1, 4, 5], [2, 3, 4, 5]])
    assert err.value.edge == (0, 1)


def test_validate_reports_wrong_count():
    with pytest.raises(WrongBlockCount):
        validate_design(6, ORDER6[:2])


def test_validate_reports_lowest_bad_edge():
    # [0,2,1-3] leaves 13 uncovered and doubles 23; edge 13 has the lower index.
    with pytest.raises(EdgeMissing) as err:
        validate_design(6, [[0, 2, 1, 3], [2, 3, 4, 5], [4, 5, 0, 1]])
    assert err.value.edge == (1, 3)


def test_validate_vertex_range():
    with pytest.raises(VertexOutOfRange):
        validate_design(6, [[0, 1, 2, 3], [2, 3, 4, 5], [4, 6, 0, 1]])


def test_design_json_round_trip(order6):
    rec = json.loads(json.dumps(order6.to_json()))
    assert rec == {"order": 6, "blocks": sorted(ORDER6)}
    assert read_design(rec) == order6
    assert read_design(json.dumps(rec)) == order6


def test_permutation_example(order6):
    pi = Permutation.from_cycles("(1 2)", 6)
    got = apply_permutation(pi, order6)
    assert got == validate_design(6, [[0, 2, 1, 3], [1, 3, 4, 5], [4, 5, 0, 2]])


def test_permutation_cycles():
    pi = Permutation.from_cycles("(0 2 4)(1 3 5)", 10)
    assert pi.image[:6] == (2, 3, 4, 5, 0, 1) and pi.image[6:] == (6, 7, 8, 9)
    assert Permutation.from_cycles(pi.cycle_string(), 10) == pi
    assert Permutation.from_cycles("(1)", 6) == Permutation.identity(6)
    assert Permutation.identity(4).cycle_string() == "(0)"
    with pytest.raises(ValueError):
        Permutation.from_cycles("(1 2", 6)
    with pytest.raises(ValueError):
        Permutation.from_cycles("(1 7)", 6)


def test_apply_permutation_order_mismatch(order6):
    with pytest.raises(OrderMismatch):
        apply_permutation(Permutation.identity(7), order6)


@settings(max_examples=50, deadline=None)
@given(perms(10), perms(10))
def test_group_action_composition(order10, p, q):
    d = order10["B2"]
    assert apply_permutation(q, apply_permutation(p, d)) == apply_permutation(q.compose(p), d)
    assert apply_permutation(p.inverse(), apply_permutation(p, d)) == d


@settings(max_examples=50, deadline=None)
@given(perms(11))
def test_relabeling_preserves_triangle_count(order11, p):
    d = apply_permutation(p, order11["B1"])
    assert isinstance(d, Design)
    assert len(d.triangles()) == 2 * len(d.blocks)
