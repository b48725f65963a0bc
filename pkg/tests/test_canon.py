from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from k4e.canon import are_isomorphic, aut_order, automorphisms, canonical_form
from k4e.core import OrderMismatch, Permutation, apply_permutation
from oracles import brute_canonical


def perms(v):
    return st.permutations(list(range(v))).map(lambda p: Permutation(tuple(p)))


def test_order6_against_brute_force(order6):
    best, fixed = brute_canonical(order6)
    cf = canonical_form(order6)
    assert tuple(b.vertices for b in cf.design.blocks) == best
    assert cf.aut_order == fixed == 24


@settings(max_examples=30, deadline=None)
@given(perms(6))
def test_order6_relabelings_against_brute_force(order6, p):
    d = apply_permutation(p, order6)
    assert tuple(b.vertices for b in canonical_form(d).design.blocks) == brute_canonical(d)[0]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(10, "B1"), (10, "B2"), (10, "B3"), (11, "B1"), (11, "B2")]), st.data())
def test_canonical_form_is_relabeling_invariant(certs, which, data):
    v, name = which
    d = certs[v].designs[name]
    p = data.draw(perms(v))
    a, b = canonical_form(d), canonical_form(apply_permutation(p, d))
    assert a.design == b.design and a.aut_order == b.aut_order
    assert apply_permutation(b.labeling, apply_permutation(p, d)) == b.design


def test_canonical_form_is_idempotent(order10):
    for d in order10.values():
        c = canonical_form(d).design
        assert canonical_form(c).design == c


def test_order10_designs_pairwise_distinct(order10):
    forms = {canonical_form(d).design for d in order10.values()}
    assert len(forms) == 3
    assert not are_isomorphic(order10["B2"], order10["B3"])[0]


def test_order11_designs_not_isomorphic(order11):
    ok, pi = are_isomorphic(order11["B1"], order11["B2"])
    assert not ok and pi is None


def test_order11_cyclic_automorphisms(order11):
    shift = Permutation(tuple((i + 1) % 11 for i in range(11)))
    for d in order11.values():
        auts = automorphisms(d)
        assert len(auts) % 11 == 0 and shift in auts
        assert all(apply_permutation(g, d) == d for g in auts)
        assert math.factorial(11) % len(auts) == 0


@settings(max_examples=30, deadline=None)
@given(perms(10))
def test_witness_is_sound(order10, p):
    d1 = order10["B3"]
    d2 = apply_permutation(p, d1)
    ok, pi = are_isomorphic(d1, d2)
    assert ok and apply_permutation(pi, d1) == d2


def test_automorphisms_form_a_group(order10):
    auts = automorphisms(order10["B1"])
    s = set(auts)
    assert Permutation.identity(10) in s
    assert all(g.compose(h) in s for g in auts for h in auts)
    assert len(auts) == aut_order(order10["B1"])


def test_order_mismatch(order6, order10):
    with pytest.raises(OrderMismatch):
        are_isomorphic(order6, order10["B1"])
