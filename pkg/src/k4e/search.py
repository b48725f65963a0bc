"""Exhaustive generation of labeled (K4-e)-designs.

The search is an exact cover over the edges of K_v.  At every node the
uncovered edge with the fewest live candidate blocks is chosen (ties go
to the lowest edge index) and each candidate block through it opens its
own subtree, so every block set is produced exactly once.  A candidate
is live when it is edge-disjoint from the cover so far and keeps every
vertex's partial (d2, d3) count below some solution of
``2*d2 + 3*d3 = v - 1``.

Work is split into *root units*: the candidate blocks through edge
``{0,1}``.  Every design contains exactly one of them, so the units
partition the solution set and can be searched independently.
"""

from __future__ import annotations

import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from ._jit import njit
from ._tables import BlockTable, block_table
from .core import (
    Block,
    Design,
    K4EError,
    design_from_array,
    num_blocks,
    require_admissible,
)

log = logging.getLogger(__name__)

DEFAULT_MAX_ORDER = 11
CHUNK = 1 << 15


class OrderTooLarge(K4EError, ValueError):
    pass


@njit(inline=True)
def _live(blocks, bi, d2, d3, feasible):
    a = blocks[bi, 0]
    b = blocks[bi, 1]
    c = blocks[bi, 2]
    d = blocks[bi, 3]
    return (
        feasible[d2[a], d3[a] + 1]
        and feasible[d2[b], d3[b] + 1]
        and feasible[d2[c] + 1, d3[c]]
        and feasible[d2[d] + 1, d3[d]]
    )


@njit
def _choose_edge(covered, n_edges, blocks, masks, by_edge, n_by_edge, d2, d3, feasible):
    best_e = -1
    best_n = 1 << 30
    one = np.uint64(1)
    for e in range(n_edges):
        if (covered >> np.uint64(e)) & one:
            continue
        n = 0
        for j in range(n_by_edge[e]):
            bi = by_edge[e, j]
            if masks[bi] & covered:
                continue
            if _live(blocks, bi, d2, d3, feasible):
                n += 1
                if n >= best_n:
                    break
        if n < best_n:
            best_n = n
            best_e = e
            if n <= 1:
                break
    return best_e


@njit(inline=True)
def _place(blocks, bi, d2, d3, sign):
    d3[blocks[bi, 0]] += sign
    d3[blocks[bi, 1]] += sign
    d2[blocks[bi, 2]] += sign
    d2[blocks[bi, 3]] += sign


@njit
def _search(blocks, masks, by_edge, n_by_edge, feasible, n_edges, full,
            state, covered, ptr, edge, chosen, d2, d3, out):
    """Continue the depth-first search held in the state arrays.

    ``state = [level, base, nodes]``; levels below ``base`` are a fixed
    prefix.  Fills ``out`` with sorted block-id rows and returns how many
    were written; ``state[0] < base`` once the subtree is exhausted.
    """
    level = state[0]
    base = state[1]
    cap = out.shape[0]
    nb = out.shape[1]
    n = 0
    while level >= base:
        e = edge[level]
        c0 = covered[level]
        descended = False
        while e >= 0 and ptr[level] < n_by_edge[e]:
            bi = by_edge[e, ptr[level]]
            ptr[level] += 1
            if masks[bi] & c0:
                continue
            if not _live(blocks, bi, d2, d3, feasible):
                continue
            state[2] += 1
            nc = c0 | masks[bi]
            chosen[level] = bi
            if nc == full:
                for k in range(nb):
                    out[n, k] = chosen[k]
                row = out[n]
                for i in range(1, nb):
                    x = row[i]
                    j = i - 1
                    while j >= 0 and row[j] > x:
                        row[j + 1] = row[j]
                        j -= 1
                    row[j + 1] = x
                n += 1
                if n == cap:
                    state[0] = level
                    return n
                continue
            _place(blocks, bi, d2, d3, 1)
            level += 1
            covered[level] = nc
            ptr[level] = 0
            edge[level] = _choose_edge(nc, n_edges, blocks, masks, by_edge, n_by_edge, d2, d3, feasible)
            descended = True
            break
        if not descended:
            level -= 1
            if level >= base:
                _place(blocks, chosen[level], d2, d3, -1)
    state[0] = level
    return n


@dataclass
class _SearchState:
    table: BlockTable
    full: np.uint64
    state: np.ndarray
    covered: np.ndarray
    ptr: np.ndarray
    edge: np.ndarray
    chosen: np.ndarray
    d2: np.ndarray
    d3: np.ndarray
    done: bool = False


def _start(v: int, prefix: Sequence[int]) -> _SearchState | None:
    t = block_table(v)
    nb = num_blocks(v)
    ne = t.n_edges
    full = np.uint64((1 << ne) - 1)
    covered = np.zeros(nb + 1, dtype=np.uint64)
    ptr = np.zeros(nb + 1, dtype=np.int64)
    edge = np.full(nb + 1, -1, dtype=np.int64)
    chosen = np.zeros(nb + 1, dtype=np.int64)
    d2 = np.zeros(v, dtype=np.int64)
    d3 = np.zeros(v, dtype=np.int64)
    c = np.uint64(0)
    for k, bi in enumerate(prefix):
        if t.masks[bi] & c or not _live(t.blocks, bi, d2, d3, t.feasible):
            return None
        c |= t.masks[bi]
        chosen[k] = bi
        _place(t.blocks, bi, d2, d3, 1)
    base = len(prefix)
    if base > nb:
        return None
    covered[base] = c
    st = _SearchState(t, full, np.array([base, base, 0], dtype=np.int64),
                      covered, ptr, edge, chosen, d2, d3)
    if c == full:
        return st
    edge[base] = _choose_edge(c, ne, t.blocks, t.masks, t.by_edge, t.n_by_edge, d2, d3, t.feasible)
    return st


def _drain(st: _SearchState, chunk: int) -> Iterator[np.ndarray]:
    t = st.table
    nb = st.chosen.shape[0] - 1
    out = np.empty((chunk, nb), dtype=np.int64)
    while st.state[0] >= st.state[1]:
        n = _search(t.blocks, t.masks, t.by_edge, t.n_by_edge, t.feasible, t.n_edges, st.full,
                    st.state, st.covered, st.ptr, st.edge, st.chosen, st.d2, st.d3, out)
        if n:
            yield out[:n].copy()


def check_order(v: int, max_order: int = DEFAULT_MAX_ORDER) -> None:
    require_admissible(v)
    if v > max_order or v * (v - 1) // 2 > 64:
        raise OrderTooLarge(f"order {v} exceeds the supported maximum {min(max_order, 11)}")


def root_units(v: int) -> list[int]:
    """Block ids through edge {0,1}, in canonical order; one per root unit."""
    t = block_table(v)
    return [int(b) for b in t.by_edge[0, : t.n_by_edge[0]]]


def iter_chunks(v: int, prefix: Sequence[int] = (), chunk: int = CHUNK) -> Iterator[np.ndarray]:
    """Yield arrays of sorted block-id rows for every design extending ``prefix``."""
    check_order(v)
    st = _start(v, list(prefix))
    if st is None:
        return
    if st.covered[st.state[1]] == st.full:
        if len(prefix) == num_blocks(v):
            yield np.sort(np.asarray(prefix, dtype=np.int64))[None, :]
        return
    yield from _drain(st, chunk)


def _unit_rows(args: tuple[int, int]) -> tuple[int, np.ndarray]:
    v, bi = args
    parts = list(iter_chunks(v, (bi,)))
    nb = num_blocks(v)
    rows = np.concatenate(parts) if parts else np.empty((0, nb), dtype=np.int64)
    return bi, rows


def _unit_count(args: tuple[int, int]) -> tuple[int, int]:
    v, bi = args
    return bi, sum(len(c) for c in iter_chunks(v, (bi,)))


def rows_to_designs(v: int, rows: np.ndarray, *, check: bool = False) -> list[Design]:
    t = block_table(v)
    return [design_from_array(v, t.blocks[r], check=check) for r in rows]


def _load_resume(path: Path | None, v: int) -> set[int]:
    if path is None or not path.exists():
        return set()
    data = json.loads(path.read_text())
    if int(data.get("order", v)) != v:
        raise ValueError(f"resume file {path} is for order {data.get('order')}, not {v}")
    return {int(k) for k in data.get("completed", [])}


def _save_resume(path: Path | None, v: int, done: set[int]) -> None:
    if path is None:
        return
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps({"order": v, "completed": sorted(done)}))
    os.replace(tmp, path)


def iter_unit_rows(
    v: int,
    units: Iterable[int] | None = None,
    *,
    jobs: int = 1,
    resume: Path | None = None,
) -> Iterator[tuple[int, np.ndarray]]:
    """Yield ``(unit index, rows)`` for each root unit in ascending order.

    With ``jobs > 1`` units run in worker processes; results are still
    yielded in unit order.  Completed unit indices are recorded in
    ``resume`` (JSON) and skipped on a rerun.
    """
    check_order(v)
    roots = root_units(v)
    idx = list(range(len(roots))) if units is None else sorted(units)
    done = _load_resume(resume, v)
    todo = [k for k in idx if k not in done]
    if jobs <= 1:
        for k in todo:
            _, rows = _unit_rows((v, roots[k]))
            yield k, rows
            done.add(k)
            _save_resume(resume, v, done)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for k, (_, rows) in zip(todo, pool.map(_unit_rows, [(v, roots[k]) for k in todo])):
            yield k, rows
            done.add(k)
            _save_resume(resume, v, done)


def enumerate_labeled(
    v: int,
    visitor: Callable[[Design], object] | None = None,
    *,
    first_block: Block | None = None,
    jobs: int = 1,
    resume: Path | None = None,
) -> int:
    """Visit every labeled design of order ``v`` once; return the count.

    ``first_block`` restricts the run to designs containing that block.
    """
    check_order(v)
    t = block_table(v)
    if first_block is not None:
        bi = t.block_id(*first_block.vertices)
        count = 0
        for rows in iter_chunks(v, (bi,)):
            count += len(rows)
            if visitor is not None:
                for d in rows_to_designs(v, rows):
                    visitor(d)
        return count
    count = 0
    for _, rows in iter_unit_rows(v, jobs=jobs, resume=resume):
        count += len(rows)
        if visitor is not None:
            for d in rows_to_designs(v, rows):
                visitor(d)
    return count


def count_labeled(v: int, *, jobs: int = 1) -> int:
    """Total labeled designs, from a full sweep of the root units."""
    check_order(v)
    roots = root_units(v)
    if jobs <= 1:
        return sum(_unit_count((v, b))[1] for b in roots)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return sum(n for _, n in pool.map(_unit_count, [(v, b) for b in roots]))


# Orbit-reduced generation.  The stabiliser of edge {0,1} in S_v acts on the
# blocks through {0,1} with two orbits: {0,1} as the degree-3 pair, and
# {0,1} joining a degree-3 vertex to a degree-2 vertex.  Each design has
# exactly one block through {0,1}, so the designs through one orbit
# representative, weighted by the orbit length, count every labeled design.

def orbit_representatives(v: int) -> list[tuple[Block, int]]:
    """``(block, orbit length)`` for the two orbits of blocks through {0,1}."""
    return [
        (Block(0, 1, 2, 3), math.comb(v - 2, 2)),
        (Block(0, 2, 1, 3), 2 * (v - 2) * (v - 3)),
    ]


def iter_weighted_chunks(v: int, *, reduced: bool = True, jobs: int = 1,
                         resume: Path | None = None) -> Iterator[tuple[np.ndarray, int]]:
    """Yield ``(rows, weight)``; weights sum to the labeled count.

    ``reduced=False`` walks every root unit with weight 1.
    """
    check_order(v)
    if not reduced:
        for _, rows in iter_unit_rows(v, jobs=jobs, resume=resume):
            if len(rows):
                yield rows, 1
        return
    t = block_table(v)
    for blk, w in orbit_representatives(v):
        for rows in iter_chunks(v, (t.block_id(*blk.vertices),)):
            yield rows, w


def write_ndjson(v: int, path: Path | None, *, jobs: int = 1, resume: Path | None = None,
                 stream=None) -> int:
    """Stream every labeled design as one JSON record per line."""
    t = block_table(v)
    count = 0
    fh = open(path, "a" if resume else "w") if path is not None else stream
    try:
        for _, rows in iter_unit_rows(v, jobs=jobs, resume=resume):
            for r in rows:
                blocks = t.blocks[r].tolist()
                fh.write(json.dumps({"order": v, "blocks": blocks}, separators=(",", ":")) + "\n")
            count += len(rows)
            fh.flush()
    finally:
        if path is not None:
            fh.close()
    return count
