"""Slow, obviously-correct reference computations used to check the kernels."""

from __future__ import annotations

from itertools import combinations, permutations

from k4e.core import Block, Design, Permutation, apply_permutation, block_edges, num_blocks
from k4e.spectrum import fine_pair


def all_blocks(v: int) -> list[Block]:
    out = []
    for a, b in combinations(range(v), 2):
        for c, d in combinations([x for x in range(v) if x not in (a, b)], 2):
            out.append(Block(a, b, c, d))
    return out


def naive_designs(v: int) -> set[frozenset[Block]]:
    """Every labeled design, by trying every block at every step and deduplicating."""
    blocks = [(b, block_edges(b)) for b in all_blocks(v)]
    need = num_blocks(v)
    found: set[frozenset[Block]] = set()

    def rec(chosen: frozenset, covered: frozenset):
        if len(chosen) == need:
            found.add(chosen)
            return
        for b, e in blocks:
            if b not in chosen and not (e & covered):
                rec(chosen | {b}, covered | e)

    rec(frozenset(), frozenset())
    return found


def brute_canonical(d: Design) -> tuple[tuple, int]:
    """Least relabeled block list and the number of relabelings fixing ``d``."""
    images = []
    for p in permutations(range(d.order)):
        images.append(tuple(b.vertices for b in apply_permutation(Permutation(p), d).blocks))
    return min(images), sum(1 for im in images if im == tuple(b.vertices for b in d.blocks))


def brute_spectrum(reps: list[Design]) -> dict[tuple[int, int], tuple[int, int, tuple]]:
    """(s, t) -> least (i, j, perm) over every permutation and class pair."""
    v = reps[0].order
    out = {}
    for i, src in enumerate(reps):
        for j, tgt in enumerate(reps):
            for p in permutations(range(v)):
                key = fine_pair(apply_permutation(Permutation(p), src), tgt)
                cand = (i, j, p)
                if key not in out or cand < out[key]:
                    out[key] = cand
    return out
