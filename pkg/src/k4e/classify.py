"""Isomorphism classes of designs of a given order.

Designs streamed from the enumerator are first bucketed by a cheap
invariant key (``structure.class_keys``).  Within a bucket a handful of
designs are canonicalized; the bucket is settled once the classes found
account for every labeled design in it, i.e. the sum of ``v!/|Aut|``
over the distinct canonical forms equals the bucket's labeled count.
Buckets that are not settled this way get a second pass that
canonicalizes all of their designs.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ._tables import block_table
from .canon import automorphisms, canonical_form
from .core import Design, K4EError, Permutation, design_from_array
from .search import DEFAULT_MAX_ORDER, check_order, iter_weighted_chunks
from .structure import class_keys

log = logging.getLogger(__name__)

# Number of isomorphism classes per order, used to reject partial class lists.
KNOWN_CLASS_COUNTS = {6: 1, 10: 3, 11: 2}

SAMPLES_PER_BUCKET = 16


class InconsistentCount(K4EError):
    pass


@dataclass(frozen=True)
class ClassInfo:
    design: Design  # canonical representative
    size: int  # labeled designs in the class, as counted by the sweep
    aut_order: int

    @cached_property
    def automorphisms(self) -> list[Permutation]:
        return automorphisms(self.design)

    def to_json(self) -> dict:
        return {**self.design.to_json(), "aut_order": self.aut_order, "labeled": self.size}


def _sort_key(d: Design) -> tuple:
    return tuple(b.vertices for b in d.blocks)


@dataclass
class _Bucket:
    total: int = 0
    samples: list = field(default_factory=list)


def _canon_rows(v: int, rows, weights) -> dict[Design, list[int]]:
    """canonical design -> [aut order, summed weight]"""
    t = block_table(v)
    found: dict[Design, list[int]] = {}
    for r, w in zip(rows, weights):
        cf = canonical_form(design_from_array(v, t.blocks[r], check=False))
        entry = found.setdefault(cf.design, [cf.aut_order, 0])
        entry[1] += w
    return found


def _settled(v: int, found: dict[Design, list[int]], total: int) -> bool:
    return sum(math.factorial(v) // aut for aut, _ in found.values()) == total


def enumerate_classes(v: int, *, reduced: bool | None = None, jobs: int = 1,
                      max_order: int = DEFAULT_MAX_ORDER) -> list[ClassInfo]:
    """All isomorphism classes of order ``v``, sorted by canonical form.

    ``reduced`` (default for v >= 11) sweeps only the orbit
    representatives through edge {0,1}; sizes are then orbit-weighted
    counts and still equal the number of labeled designs per class.
    """
    check_order(v, max_order)
    if reduced is None:
        reduced = v >= 11
    buckets: dict[tuple, _Bucket] = {}
    for rows, weight in iter_weighted_chunks(v, reduced=reduced, jobs=jobs):
        keys = class_keys(v, rows)
        uniq, inverse, counts = np.unique(keys, axis=0, return_inverse=True, return_counts=True)
        inverse = inverse.ravel()
        for u, key in enumerate(map(tuple, uniq.tolist())):
            b = buckets.setdefault(key, _Bucket())
            b.total += weight * int(counts[u])
            room = SAMPLES_PER_BUCKET - len(b.samples)
            if room > 0:
                for i in np.flatnonzero(inverse == u)[:room]:
                    b.samples.append((rows[i].copy(), weight))
    log.info("order %d: %d invariant buckets", v, len(buckets))

    classes: list[ClassInfo] = []
    rescan = []
    for key, b in buckets.items():
        found = _canon_rows(v, [r for r, _ in b.samples], [w for _, w in b.samples])
        if _settled(v, found, b.total) and len(found) == 1:
            (design, (aut, _)), = found.items()
            classes.append(ClassInfo(design, b.total, aut))
        else:
            rescan.append(key)

    if rescan:
        # Several classes share a key: count every design in those buckets.
        log.info("order %d: recounting %d shared buckets", v, len(rescan))
        wanted = set(rescan)
        merged: dict[Design, list[int]] = {}
        for rows, weight in iter_weighted_chunks(v, reduced=reduced, jobs=jobs):
            keys = class_keys(v, rows)
            sel = [i for i, k in enumerate(map(tuple, keys.tolist())) if k in wanted]
            for d, (aut, w) in _canon_rows(v, rows[sel], [weight] * len(sel)).items():
                entry = merged.setdefault(d, [aut, 0])
                entry[1] += w
        classes += [ClassInfo(d, w, aut) for d, (aut, w) in merged.items()]

    fact = math.factorial(v)
    for c in classes:
        if c.size * c.aut_order != fact:
            raise InconsistentCount(
                f"class of order {v} has {c.size} labeled designs but |Aut| = {c.aut_order}")
    return sorted(classes, key=lambda c: _sort_key(c.design))
