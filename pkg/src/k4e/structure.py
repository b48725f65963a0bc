"""Structural invariants of designs and sweeping verifiers over the enumerator.

``D`` is the set of degree-3 pairs ``{a,b}`` of the blocks and ``N`` the
set of degree-2 pairs ``{c,d}``.  Every D pair is an edge of its own
block, so D never repeats; N pairs are non-edges and may repeat.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from ._jit import njit
from ._tables import block_table, degree_solutions
from .core import (
    Design,
    Edge,
    InadmissibleOrder,
    K4EError,
    admissible_order,
    num_blocks,
    validate_design,
)
from .search import iter_weighted_chunks, check_order

log = logging.getLogger(__name__)


class NotTwoRegular(K4EError):
    def __init__(self, degrees: dict[int, int]):
        self.degrees = degrees
        super().__init__(f"(X, D) is not 2-regular: degrees {degrees}")


@dataclass(frozen=True)
class DegreeProfile:
    d2: tuple[int, ...]
    d3: tuple[int, ...]

    def __getitem__(self, x: int) -> tuple[int, int]:
        return self.d2[x], self.d3[x]

    def census(self) -> Counter:
        return Counter(zip(self.d2, self.d3))


def degree_profile(d: Design) -> DegreeProfile:
    d2 = [0] * d.order
    d3 = [0] * d.order
    for b in d.blocks:
        d3[b.a] += 1
        d3[b.b] += 1
        d2[b.c] += 1
        d2[b.d] += 1
    for x in range(d.order):
        assert 2 * d2[x] + 3 * d3[x] == d.order - 1, f"degree identity fails at vertex {x}"
    return DegreeProfile(tuple(d2), tuple(d3))


@dataclass(frozen=True)
class DNSets:
    D: frozenset[Edge]
    N: frozenset[Edge]


def dn_sets(d: Design) -> DNSets:
    return DNSets(frozenset(b.p for b in d.blocks), frozenset(b.q for b in d.blocks))


@dataclass(frozen=True)
class DGraphShape:
    two_regular: bool
    components: tuple[int, ...]  # vertex counts, largest first; isolated vertices count
    cycle_lengths: tuple[int, ...] | None


def _components(v: int, edges) -> list[int]:
    parent = list(range(v))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, y in edges:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry
    return sorted(Counter(find(x) for x in range(v)).values(), reverse=True)


def check_d_cycle(d: Design, *, strict: bool = False) -> DGraphShape:
    """Describe the graph (X, D); for order 11 the D pairs form one 11-cycle.

    ``strict=True`` raises :class:`NotTwoRegular` instead of returning a
    shape whose ``cycle_lengths`` is None.
    """
    D = dn_sets(d).D
    deg = Counter()
    for x, y in D:
        deg[x] += 1
        deg[y] += 1
    comps = tuple(_components(d.order, D))
    regular = all(deg[x] == 2 for x in range(d.order))
    if not regular:
        if strict:
            raise NotTwoRegular({x: deg[x] for x in range(d.order)})
        return DGraphShape(False, comps, None)
    return DGraphShape(True, comps, comps)


def find_subdesigns(d: Design, w: int) -> list[tuple[tuple[int, ...], Design]]:
    """Every w-subset S whose blocks inside S form a design of order w."""
    if not admissible_order(w):
        raise InadmissibleOrder(f"no (K4-e)-design of order {w}")
    if w >= d.order:
        return []
    need = num_blocks(w)
    out = []
    for S in combinations(range(d.order), w):
        inside = set(S)
        sub = [b for b in d.blocks if inside.issuperset(b.vertices)]
        if len(sub) != need:
            continue
        relabel = {x: i for i, x in enumerate(S)}
        validate_design(w, [[relabel[x] for x in b.vertices] for b in sub])
        out.append((S, Design(d.order, tuple(sub))))
    return out


# ---------------------------------------------------------------- batch kernels

@njit
def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@njit
def _class_keys(rows, blocks, eidx, v):
    """Isomorphism-invariant key per design (see ``class_key_fields``)."""
    n = rows.shape[0]
    nb = rows.shape[1]
    ne = v * (v - 1) // 2
    width = v + v + nb + 1 + 2
    keys = np.zeros((n, width), dtype=np.int64)
    d3 = np.zeros(v, dtype=np.int64)
    parent = np.zeros(v, dtype=np.int64)
    size = np.zeros(v, dtype=np.int64)
    nmult = np.zeros(ne, dtype=np.int64)
    dmark = np.zeros(ne, dtype=np.bool_)
    adj = np.zeros((v, v), dtype=np.bool_)
    for r in range(n):
        d3[:] = 0
        nmult[:] = 0
        dmark[:] = False
        adj[:, :] = False
        for x in range(v):
            parent[x] = x
        for k in range(nb):
            a, b, c, d = blocks[rows[r, k]]
            d3[a] += 1
            d3[b] += 1
            dmark[eidx[a, b]] = True
            nmult[eidx[c, d]] += 1
            adj[a, b] = adj[b, a] = True
            adj[c, d] = adj[d, c] = True
            ra = _find(parent, a)
            rb = _find(parent, b)
            if ra != rb:
                parent[ra] = rb
        off = 0
        for x in range(v):
            keys[r, off + d3[x]] += 1
        off += v
        size[:] = 0
        for x in range(v):
            size[_find(parent, x)] += 1
        s = np.sort(size)[::-1]
        for x in range(v):
            keys[r, off + x] = s[x]
        off += v
        both = 0
        for e in range(ne):
            if nmult[e] > 0:
                keys[r, off + nmult[e]] += 1
                if dmark[e]:
                    both += 1
        off += nb + 1
        keys[r, off] = both
        tri = 0
        for x in range(v):
            for y in range(x + 1, v):
                if adj[x, y]:
                    for z in range(y + 1, v):
                        if adj[x, z] and adj[y, z]:
                            tri += 1
        keys[r, off + 1] = tri
    return keys


def class_key_fields(v: int) -> list[str]:
    nb = num_blocks(v)
    return ([f"vertices_with_d3={i}" for i in range(v)]
            + [f"d_component_{i}" for i in range(v)]
            + [f"n_pairs_with_multiplicity={m}" for m in range(nb + 1)]
            + ["d_and_n_common_pairs", "triangles_in_d_union_n"])


def class_keys(v: int, rows: np.ndarray) -> np.ndarray:
    t = block_table(v)
    return _class_keys(rows, t.blocks, t.edge_index, v)


@njit
def _structure_flags(rows, blocks, eidx, v, subsets, need):
    """Per design: [degree identity, D is one v-cycle, D and N disjoint, #subdesigns, d3 histogram...]."""
    n = rows.shape[0]
    nb = rows.shape[1]
    ne = v * (v - 1) // 2
    out = np.zeros((n, 4 + v), dtype=np.int64)
    d2 = np.zeros(v, dtype=np.int64)
    d3 = np.zeros(v, dtype=np.int64)
    dd = np.zeros(v, dtype=np.int64)
    parent = np.zeros(v, dtype=np.int64)
    dmark = np.zeros(ne, dtype=np.bool_)
    nmark = np.zeros(ne, dtype=np.bool_)
    vm = np.zeros(nb, dtype=np.int64)
    for r in range(n):
        d2[:] = 0
        d3[:] = 0
        dd[:] = 0
        dmark[:] = False
        nmark[:] = False
        for x in range(v):
            parent[x] = x
        for k in range(nb):
            a, b, c, d = blocks[rows[r, k]]
            d3[a] += 1
            d3[b] += 1
            d2[c] += 1
            d2[d] += 1
            dd[a] += 1
            dd[b] += 1
            dmark[eidx[a, b]] = True
            nmark[eidx[c, d]] = True
            ra = _find(parent, a)
            rb = _find(parent, b)
            if ra != rb:
                parent[ra] = rb
            vm[k] = (1 << a) | (1 << b) | (1 << c) | (1 << d)
        ok = 1
        for x in range(v):
            if 2 * d2[x] + 3 * d3[x] != v - 1:
                ok = 0
            out[r, 4 + d3[x]] += 1
        out[r, 0] = ok
        cyc = 1
        root = _find(parent, 0)
        for x in range(v):
            if dd[x] != 2 or _find(parent, x) != root:
                cyc = 0
        out[r, 1] = cyc
        disjoint = 1
        for e in range(ne):
            if dmark[e] and nmark[e]:
                disjoint = 0
        out[r, 2] = disjoint
        subs = 0
        for s in range(subsets.shape[0]):
            S = subsets[s]
            inside = 0
            for k in range(nb):
                if (vm[k] & ~S) == 0:
                    inside += 1
            if inside == need:
                subs += 1
        out[r, 3] = subs
    return out


def _subset_masks(v: int, w: int) -> np.ndarray:
    return np.array([sum(1 << x for x in S) for S in combinations(range(v), w)], dtype=np.int64)


def structure_flags(v: int, rows: np.ndarray, w: int | None = 6) -> np.ndarray:
    """Flag columns per row; ``w=None`` skips the subdesign count (column 3 is 0)."""
    t = block_table(v)
    if w is None:
        w = 6
        subsets = np.zeros(0, dtype=np.int64)
    else:
        subsets = _subset_masks(v, w) if w < v else np.zeros(0, dtype=np.int64)
    return _structure_flags(rows, t.blocks, t.edge_index, v, subsets, num_blocks(w))


# ---------------------------------------------------------------- structure sweep

@dataclass
class CheckResult:
    checked: int = 0
    violations: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"checked": self.checked, "violations": self.violations}


@dataclass
class StructureReport:
    order: int
    reduced: bool
    visited: int
    labeled: int
    checks: dict[str, CheckResult]

    @property
    def ok(self) -> bool:
        return all(not c.violations for c in self.checks.values())

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "labeled_designs": self.labeled,
            "visited_designs": self.visited,
            "orbit_reduced": self.reduced,
            "passed": self.ok,
            "checks": {k: c.to_json() for k, c in self.checks.items()},
        }


def _expected_census(v: int) -> dict[int, int] | None:
    # Number of vertices per d3 value forced by double counting degree-3 slots:
    # sum over vertices of d3 = 2 b_v, with each vertex on one of the two
    # solutions of 2 d2 + 3 d3 = v - 1.
    sols = degree_solutions(v)
    if len(sols) == 1:
        return {sols[0][1]: v}
    if len(sols) == 2:
        (_, lo), (_, hi) = sorted(sols, key=lambda s: s[1])
        nhi = (2 * num_blocks(v) - lo * v) // (hi - lo)
        if (2 * num_blocks(v) - lo * v) % (hi - lo) == 0 and 0 <= nhi <= v:
            return {k: n for k, n in ((hi, nhi), (lo, v - nhi)) if n}
    return None


def verify_structure(v: int, *, reduced: bool | None = None, jobs: int = 1,
                     abort: bool = True) -> StructureReport:
    """Sweep designs of order ``v`` checking the structural facts for that order.

    Checks (all orders): the degree identity and the forced (d2, d3)
    census.  Order 10: an order-6 subdesign exists.  Order 11: (X, D)
    is a single 11-cycle and D, N are disjoint.

    With ``reduced`` (default for v >= 11) only the two orbit
    representatives through edge {0,1} are searched; ``checked`` counts
    are orbit-weighted and so still count labeled designs.
    """
    check_order(v)
    if reduced is None:
        reduced = v >= 11
    census = _expected_census(v)
    names = ["degree_identity", "degree_census"]
    if v == 10:
        names.append("has_order6_subdesign")
    if v == 11:
        names += ["d_pairs_form_11_cycle", "d_n_disjoint"]
    checks = {n: CheckResult() for n in names}
    t = block_table(v)
    visited = labeled = 0
    for rows, weight in iter_weighted_chunks(v, reduced=reduced, jobs=jobs):
        flags = structure_flags(v, rows, 6 if v == 10 else None)
        visited += len(rows)
        labeled += weight * len(rows)
        bad = {
            "degree_identity": flags[:, 0] == 0,
        }
        hist = flags[:, 4:]
        if census is None:
            bad["degree_census"] = np.zeros(len(rows), dtype=bool)
        else:
            want = np.zeros(v, dtype=np.int64)
            for d3, cnt in census.items():
                want[d3] = cnt
            bad["degree_census"] = (hist != want).any(axis=1)
        if "has_order6_subdesign" in checks:
            bad["has_order6_subdesign"] = flags[:, 3] == 0
        if "d_pairs_form_11_cycle" in checks:
            bad["d_pairs_form_11_cycle"] = flags[:, 1] == 0
            bad["d_n_disjoint"] = flags[:, 2] == 0
        stop = False
        for name, mask in bad.items():
            res = checks[name]
            res.checked += weight * len(rows)
            for i in np.flatnonzero(mask)[: max(0, 5 - len(res.violations))]:
                blocks = t.blocks[rows[i]].tolist()
                res.violations.append({"order": v, "blocks": blocks})
            if mask.any():
                stop = abort
        if stop:
            log.error("structure sweep aborted at first violation")
            break
    return StructureReport(v, reduced, visited, labeled, checks)
