from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from k4e._tables import block_table
from k4e.core import InadmissibleOrder, Permutation, apply_permutation
from k4e.search import iter_chunks, root_units, rows_to_designs
from k4e.structure import (
    NotTwoRegular,
    check_d_cycle,
    class_keys,
    degree_profile,
    dn_sets,
    find_subdesigns,
    structure_flags,
    verify_structure,
)


def test_degree_profile_order6(order6):
    prof = degree_profile(order6)
    assert all(prof[x] == (1, 1) for x in range(6))


def test_degree_profile_order10(order10):
    for d in order10.values():
        assert degree_profile(d).census() == {(0, 3): 4, (3, 1): 6}


def test_degree_profile_order11(order11):
    for d in order11.values():
        assert degree_profile(d).census() == {(2, 2): 11}


def test_dn_sets_order6(order6):
    dn = dn_sets(order6)
    assert dn.D == {(0, 1), (2, 3), (4, 5)} == dn.N
    assert dn.D & dn.N


def test_dn_sets_order11(order11):
    dn = dn_sets(order11["B1"])
    assert dn.D == {tuple(sorted((i, (i + 1) % 11))) for i in range(11)}
    for d in order11.values():
        dn = dn_sets(d)
        assert not dn.D & dn.N


def test_d_cycle(order6, order11):
    for d in order11.values():
        shape = check_d_cycle(d)
        assert shape.two_regular and shape.cycle_lengths == (11,)
    shape = check_d_cycle(order6)
    assert not shape.two_regular and shape.components == (2, 2, 2)
    with pytest.raises(NotTwoRegular):
        check_d_cycle(order6, strict=True)


def test_find_subdesigns(order6, order10, order11):
    for d in order10.values():
        subs = find_subdesigns(d, 6)
        assert (0, 1, 2, 3, 4, 5) in [s for s, _ in subs]
        assert all(len(sub.blocks) == 3 for _, sub in subs)
    for d in order11.values():
        assert find_subdesigns(d, 6) == []
    assert find_subdesigns(order6, 6) == []
    with pytest.raises(InadmissibleOrder):
        find_subdesigns(order10["B1"], 7)


def _rows(v, limit):
    chunks = iter_chunks(v, (root_units(v)[1],), chunk=limit)
    return next(chunks)


@pytest.mark.parametrize("v", [10, 11])
def test_structure_flags_agree_with_direct_checks(v):
    # Kernel flags vs the object-level analyzers on a slice of real designs.
    rows = _rows(v, 300)
    flags = structure_flags(v, rows)
    for r, d in zip(flags, rows_to_designs(v, rows, check=True)):
        shape = check_d_cycle(d)
        dn = dn_sets(d)
        assert r[0] == 1
        assert r[1] == (shape.cycle_lengths == (v,))
        assert r[2] == (not dn.D & dn.N)
        assert r[3] == len(find_subdesigns(d, 6))
        census = degree_profile(d).census()
        assert {k: int(n) for k, n in enumerate(r[4:]) if n} == {d3: n for (_, d3), n in census.items()}


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["B1", "B2", "B3"]), st.permutations(list(range(10))))
def test_class_keys_are_invariant(order10, name, p):
    t = block_table(10)
    d = order10[name]
    e = apply_permutation(Permutation(tuple(p)), d)
    rows = np.array([[t.block_id(*b.vertices) for b in x.blocks] for x in (d, e)])
    k = class_keys(10, rows)
    assert (k[0] == k[1]).all()


def test_class_keys_separate_known_designs(order10, order11):
    for designs, v in ((order10, 10), (order11, 11)):
        t = block_table(v)
        rows = np.array([[t.block_id(*b.vertices) for b in d.blocks] for d in designs.values()])
        keys = {tuple(k) for k in class_keys(v, rows).tolist()}
        assert len(keys) == len(designs)


def test_verify_structure_order6():
    rep = verify_structure(6)
    assert rep.ok and rep.labeled == 30
    assert rep.to_json()["checks"]["degree_identity"] == {"checked": 30, "violations": []}
