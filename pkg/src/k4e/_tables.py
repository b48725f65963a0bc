"""Precomputed index tables over K_v shared by the kernels.

Blocks of K_v are enumerated once per order in canonical lexicographic
order of ``(a, b, c, d)`` with ``a < b`` and ``c < d``, so sorting block
indices sorts the blocks.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

MAX_KERNEL_EDGES = 64


def edge_index(x: int, y: int, v: int) -> int:
    if x > y:
        x, y = y, x
    return x * v - x * (x + 1) // 2 + (y - x - 1)


@dataclass(frozen=True)
class BlockTable:
    order: int
    n_edges: int
    edge_index: np.ndarray  # (v, v) int64, -1 on the diagonal
    edge_pairs: np.ndarray  # (n_edges, 2)
    blocks: np.ndarray  # (n_blocks, 4) int64
    masks: np.ndarray  # (n_blocks,) uint64 edge bitmask
    vmasks: np.ndarray  # (n_blocks,) int64 vertex bitmask
    by_edge: np.ndarray  # (n_edges, per_edge) block ids containing the edge
    n_by_edge: np.ndarray  # (n_edges,)
    pair_code: np.ndarray  # (n_edges * n_edges,) block id for (p-index, q-index) or -1
    feasible: np.ndarray  # (v + 1, v + 1) bool: partial (d2, d3) extendable

    @property
    def n_blocks(self) -> int:
        return self.blocks.shape[0]

    def block_id(self, a: int, b: int, c: int, d: int) -> int:
        p = self.edge_index[a, b]
        q = self.edge_index[c, d]
        return int(self.pair_code[p * self.n_edges + q])


def degree_solutions(v: int) -> list[tuple[int, int]]:
    """All (d2, d3) with 2*d2 + 3*d3 = v - 1."""
    return [(d2, d3) for d3 in range(v) for d2 in range(v) if 2 * d2 + 3 * d3 == v - 1]


@lru_cache(maxsize=None)
def block_table(v: int) -> BlockTable:
    ne = v * (v - 1) // 2
    if ne > MAX_KERNEL_EDGES:
        raise ValueError(f"order {v} has {ne} edges; kernels support at most {MAX_KERNEL_EDGES}")
    eidx = np.full((v, v), -1, dtype=np.int64)
    pairs = np.zeros((ne, 2), dtype=np.int64)
    for x, y in combinations(range(v), 2):
        k = edge_index(x, y, v)
        eidx[x, y] = eidx[y, x] = k
        pairs[k] = (x, y)

    rows = []
    for a, b in combinations(range(v), 2):
        for c, d in combinations(range(v), 2):
            if c not in (a, b) and d not in (a, b):
                rows.append((a, b, c, d))
    blocks = np.array(rows, dtype=np.int64).reshape(-1, 4)

    masks = np.zeros(len(blocks), dtype=np.uint64)
    vmasks = np.zeros(len(blocks), dtype=np.int64)
    pair_code = np.full(ne * ne, -1, dtype=np.int64)
    members: list[list[int]] = [[] for _ in range(ne)]
    for i, (a, b, c, d) in enumerate(rows):
        m = 0
        for x, y in ((a, b), (a, c), (a, d), (b, c), (b, d)):
            k = int(eidx[x, y])
            m |= 1 << k
            members[k].append(i)
        masks[i] = m
        vmasks[i] = (1 << a) | (1 << b) | (1 << c) | (1 << d)
        pair_code[eidx[a, b] * ne + eidx[c, d]] = i

    width = max(len(m) for m in members)
    by_edge = np.full((ne, width), -1, dtype=np.int64)
    n_by_edge = np.zeros(ne, dtype=np.int64)
    for k, m in enumerate(members):
        by_edge[k, : len(m)] = m
        n_by_edge[k] = len(m)

    feasible = np.zeros((v + 1, v + 1), dtype=np.bool_)
    for d2, d3 in degree_solutions(v):
        feasible[: d2 + 1, : d3 + 1] = True

    for arr in (eidx, pairs, blocks, masks, vmasks, by_edge, n_by_edge, pair_code, feasible):
        arr.setflags(write=False)
    return BlockTable(v, ne, eidx, pairs, blocks, masks, vmasks, by_edge, n_by_edge, pair_code, feasible)
