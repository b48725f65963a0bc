"""Canonical forms, isomorphism witnesses and automorphism groups.

The canonical form of a design is its least relabeled image, comparing
canonically sorted block lists lexicographically.  It is found by
branch and bound over partial labelings: labels 0, 1, 2, ... are handed
out in order, and a node is cut as soon as a lower bound on its best
possible sorted block list exceeds the incumbent.  Nodes that only tie
are kept, so every labeling reaching the minimum is visited and their
number is the automorphism group order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._jit import njit
from .core import Block, Design, OrderMismatch, Permutation, apply_permutation, validate_design

_INF = np.iinfo(np.int64).max


@njit
def _pair_bound(x, y, lab, fresh):
    lx = lab[x]
    ly = lab[y]
    if lx >= 0 and ly >= 0:
        if lx < ly:
            return lx, ly, fresh
        return ly, lx, fresh
    if lx >= 0:
        return lx, fresh, fresh + 1
    if ly >= 0:
        return ly, fresh, fresh + 1
    return fresh, fresh + 1, fresh + 2


@njit
def _bound_codes(blocks, lab, k, v, out):
    # Per block, the least image tuple any completion can give; labels >= k are unassigned.
    for i in range(blocks.shape[0]):
        a, b, fresh = _pair_bound(blocks[i, 0], blocks[i, 1], lab, k)
        c, d, fresh = _pair_bound(blocks[i, 2], blocks[i, 3], lab, fresh)
        out[i] = ((a * v + b) * v + c) * v + d
    out.sort()


@njit
def _compare(x, y):
    for i in range(x.shape[0]):
        if x[i] < y[i]:
            return -1
        if x[i] > y[i]:
            return 1
    return 0


@njit
def _min_image(blocks, v, cap):
    """Return (least codes, labelings reaching it, their count, nodes visited)."""
    nb = blocks.shape[0]
    lab = np.full(v, -1, dtype=np.int64)
    who = np.zeros(v, dtype=np.int64)
    nxt = np.zeros(v + 1, dtype=np.int64)
    best = np.full(nb, _INF, dtype=np.int64)
    cur = np.zeros(nb, dtype=np.int64)
    perms = np.zeros((cap, v), dtype=np.int64)
    count = 0
    nodes = 0
    k = 0
    while k >= 0:
        if k == v:
            _bound_codes(blocks, lab, k, v, cur)
            c = _compare(cur, best)
            if c < 0:
                best[:] = cur
                count = 0
            if c <= 0:
                if count == perms.shape[0]:
                    grown = np.zeros((2 * perms.shape[0], v), dtype=np.int64)
                    grown[:count] = perms
                    perms = grown
                perms[count] = lab
                count += 1
            k -= 1
            lab[who[k]] = -1
            continue
        advanced = False
        while nxt[k] < v:
            x = nxt[k]
            nxt[k] += 1
            if lab[x] >= 0:
                continue
            lab[x] = k
            nodes += 1
            _bound_codes(blocks, lab, k + 1, v, cur)
            if _compare(cur, best) <= 0:
                who[k] = x
                k += 1
                nxt[k] = 0
                advanced = True
                break
            lab[x] = -1
        if not advanced:
            k -= 1
            if k >= 0:
                lab[who[k]] = -1
    return best, perms[:count], count, nodes


def decode(codes: np.ndarray, v: int) -> np.ndarray:
    c = np.asarray(codes, dtype=np.int64)
    return np.stack([c // (v ** 3), c // (v * v) % v, c // v % v, c % v], axis=1)


@dataclass(frozen=True)
class CanonicalForm:
    design: Design
    aut_order: int
    labeling: Permutation  # maps the input design onto ``design``

    def to_json(self) -> dict:
        return {**self.design.to_json(), "aut_order": self.aut_order}


def _search(d: Design) -> tuple[np.ndarray, np.ndarray]:
    best, perms, count, _ = _min_image(np.ascontiguousarray(d.array), d.order, 64)
    return best, perms


def canonical_form(d: Design) -> CanonicalForm:
    best, perms = _search(d)
    canon = validate_design(d.order, [Block(*map(int, r)) for r in decode(best, d.order)])
    return CanonicalForm(canon, len(perms), Permutation(tuple(int(x) for x in perms[0])))


def automorphisms(d: Design) -> list[Permutation]:
    """All relabelings fixing ``d``, sorted lexicographically."""
    _, perms = _search(d)
    g0 = Permutation(tuple(int(x) for x in perms[0])).inverse()
    auts = {g0.compose(Permutation(tuple(int(x) for x in p))).image for p in perms}
    return [Permutation(a) for a in sorted(auts)]


def aut_order(d: Design) -> int:
    return canonical_form(d).aut_order


def are_isomorphic(d1: Design, d2: Design) -> tuple[bool, Permutation | None]:
    """Decide isomorphism; on success also return ``pi`` with ``pi(d1) == d2``."""
    if d1.order != d2.order:
        raise OrderMismatch(f"orders {d1.order} and {d2.order} differ")
    c1 = canonical_form(d1)
    c2 = canonical_form(d2)
    if c1.design != c2.design:
        return False, None
    pi = c2.labeling.inverse().compose(c1.labeling)
    if apply_permutation(pi, d1) != d2:
        raise AssertionError("isomorphism witness failed to verify")
    return True, pi
