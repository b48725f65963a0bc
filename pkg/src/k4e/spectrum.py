"""Block and triangle intersection spectra.

For designs ``d1, d2`` of the same order, ``s`` is the number of common
blocks and ``t`` the number of common triangles beyond the ``2s`` that
the common blocks carry.  The spectrum of an order collects every pair
``(s, t)`` realised by ``pi(B_i)`` against ``B_j`` over all class
representatives ``B_i, B_j`` and all relabelings ``pi``.

Since ``pi(B_i) == (pi o alpha)(B_i)`` for ``alpha`` in ``Aut(B_i)``,
the sweep visits one permutation per right coset ``pi Aut(B_i)``: the
lexicographically least one.  Permutations are generated in
lexicographic order, so the first hit for a pair is its least witness
under both the reduced and the full sweep.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import islice, permutations
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from . import _jit
from ._jit import njit
from ._tables import block_table
from .canon import are_isomorphic, automorphisms
from .classify import KNOWN_CLASS_COUNTS
from .core import Design, K4EError, OrderMismatch, Permutation, apply_permutation, num_blocks

log = logging.getLogger(__name__)


class UnsupportedOrder(K4EError, ValueError):
    pass


class IncompleteClassList(K4EError, ValueError):
    pass


class UnknownClass(K4EError, KeyError):
    pass


class FinePair(NamedTuple):
    s: int
    t: int


def fine_pair(d1: Design, d2: Design) -> FinePair:
    """Common blocks, and common triangles between the remaining blocks."""
    if d1.order != d2.order:
        raise OrderMismatch(f"orders {d1.order} and {d2.order} differ")
    common = set(d1.blocks) & set(d2.blocks)
    rest1 = Design(d1.order, tuple(b for b in d1.blocks if b not in common))
    rest2 = Design(d2.order, tuple(b for b in d2.blocks if b not in common))
    return FinePair(len(common), len(rest1.triangles() & rest2.triangles()))


# Known block and triangle intersection numbers for the orders handled here.
_J = {
    6: {0, 3},
    10: set(range(0, 7)) | {9},
    11: set(range(0, 7)) | {11},
}
_JT = {
    6: {0, 2, 3, 6},
    10: set(range(0, 13)) | {14, 15, 18},
    11: set(range(0, 17)) | {22},
}


def reference_j_sets(v: int) -> tuple[frozenset[int], frozenset[int]]:
    if v not in _J:
        raise UnsupportedOrder(f"no reference intersection numbers for order {v}")
    return frozenset(_J[v]), frozenset(_JT[v])


@dataclass(frozen=True)
class AdmEnvelope:
    order: int
    pairs: frozenset[tuple[int, int]]

    def to_json(self) -> dict:
        return {"order": self.order, "pairs": [list(p) for p in sorted(self.pairs)]}


def adm(v: int, J: Iterable[int], JT: Iterable[int]) -> AdmEnvelope:
    """Pairs (s, t) with s + t <= b_v, s in J and t + 2s in JT."""
    J, JT = set(J), set(JT)
    b = num_blocks(v)
    pairs = {(s, t) for s in range(b + 1) for t in range(b + 1 - s) if s in J and t + 2 * s in JT}
    return AdmEnvelope(v, frozenset(pairs))


def reference_adm(v: int) -> AdmEnvelope:
    return adm(v, *reference_j_sets(v))


# ---------------------------------------------------------------- sweep kernels

@njit(inline=True)
def _coset_min(perm, m, aut):
    # False once some alpha provably gives perm o alpha < perm on the first m images.
    for a in range(aut.shape[0]):
        alpha = aut[a]
        for k in range(m):
            if alpha[k] >= m:
                break
            x = perm[alpha[k]]
            if x < perm[k]:
                return False
            if x > perm[k]:
                break
    return True


@njit(inline=True)
def _score(perm, src, tgt_blocks, tgt_tris, pair_code, eidx, ne, v, j):
    s = 0
    common = 0
    vv = v * v
    for k in range(src.shape[0]):
        a = perm[src[k, 0]]
        b = perm[src[k, 1]]
        c = perm[src[k, 2]]
        d = perm[src[k, 3]]
        if tgt_blocks[j, pair_code[eidx[a, b] * ne + eidx[c, d]]]:
            s += 1
        if tgt_tris[j, a * vv + b * v + c]:
            common += 1
        if tgt_tris[j, a * vv + b * v + d]:
            common += 1
    return s, common - 2 * s


@njit
def _sweep(src, aut, v, first, tgt_blocks, tgt_tris, pair_code, eidx, ne, nb, found, wit):
    """DFS over permutations in lex order, keeping least coset representatives."""
    nt = tgt_blocks.shape[0]
    perm = np.zeros(v, dtype=np.int64)
    used = np.zeros(v, dtype=np.bool_)
    nxt = np.zeros(v + 1, dtype=np.int64)
    visited = 0
    k = 0
    if first >= 0:
        nxt[0] = first
    while k >= 0:
        if k == v:
            visited += 1
            for j in range(nt):
                s, t = _score(perm, src, tgt_blocks, tgt_tris, pair_code, eidx, ne, v, j)
                if not found[j, s, t]:
                    found[j, s, t] = True
                    wit[j, s, t] = perm
            k -= 1
            used[perm[k]] = False
            continue
        advanced = False
        stop = v if (k > 0 or first < 0) else first + 1
        while nxt[k] < stop:
            x = nxt[k]
            nxt[k] += 1
            if used[x]:
                continue
            perm[k] = x
            if not _coset_min(perm, k + 1, aut):
                continue
            used[x] = True
            k += 1
            nxt[k] = 0
            advanced = True
            break
        if not advanced:
            k -= 1
            if k >= 0:
                used[perm[k]] = False
    return visited


def _sweep_numpy(src, aut, v, first, tgt_blocks, tgt_tris, pair_code, eidx, ne, nb, found, wit,
                 chunk: int = 1 << 16):
    """Vectorised equivalent of ``_sweep`` over itertools permutation chunks."""
    if first >= 0:
        gen = ((first,) + p for p in permutations([x for x in range(v) if x != first]))
    else:
        gen = permutations(range(v))
    nt = tgt_blocks.shape[0]
    visited = 0
    vv = v * v
    while True:
        P = np.array(list(islice(gen, chunk)), dtype=np.int64).reshape(-1, v)
        if not len(P):
            break
        keep = np.ones(len(P), dtype=bool)
        for alpha in aut:
            Q = P[:, alpha]
            diff = Q != P
            idx = diff.argmax(axis=1)
            rows = np.arange(len(P))
            keep &= ~(diff.any(axis=1) & (Q[rows, idx] < P[rows, idx]))
        P = P[keep]
        visited += len(P)
        img = P[:, src]  # (n, blocks, 4)
        a, b, c, d = img[..., 0], img[..., 1], img[..., 2], img[..., 3]
        bid = pair_code[eidx[a, b] * ne + eidx[c, d]]
        for j in range(nt):
            s = tgt_blocks[j][bid].sum(axis=1)
            common = tgt_tris[j][a * vv + b * v + c].sum(axis=1) + tgt_tris[j][a * vv + b * v + d].sum(axis=1)
            t = common - 2 * s
            code = s * (nb + 1) + t
            codes, pos = np.unique(code, return_index=True)
            for cd, p in zip(codes.tolist(), pos.tolist()):
                ss, tt = divmod(cd, nb + 1)
                if not found[j, ss, tt]:
                    found[j, ss, tt] = True
                    wit[j, ss, tt] = P[p]
    return visited


def _target_tables(v: int, targets: Sequence[Design]):
    t = block_table(v)
    blocks_in = np.zeros((len(targets), t.n_blocks), dtype=np.bool_)
    tris_in = np.zeros((len(targets), v ** 3), dtype=np.bool_)
    for j, d in enumerate(targets):
        for b in d.blocks:
            blocks_in[j, t.block_id(*b.vertices)] = True
        for tri in d.triangles():
            for x, y, z in permutations(tri):
                tris_in[j, (x * v + y) * v + z] = True
    return blocks_in, tris_in


def _run_unit(args) -> tuple[np.ndarray, np.ndarray, int]:
    src_design, aut, targets, first, backend = args
    v = src_design.order
    t = block_table(v)
    nb = num_blocks(v)
    blocks_in, tris_in = _target_tables(v, targets)
    found = np.zeros((len(targets), nb + 1, nb + 1), dtype=np.bool_)
    wit = np.zeros((len(targets), nb + 1, nb + 1, v), dtype=np.int64)
    fn = _sweep if backend == "numba" else _sweep_numpy
    visited = fn(np.ascontiguousarray(src_design.array), aut, v, first, blocks_in, tris_in,
                 t.pair_code, t.edge_index, t.n_edges, nb, found, wit)
    return found, wit, visited


# ---------------------------------------------------------------- results

@dataclass(frozen=True)
class SpectrumPoint:
    s: int
    t: int
    i: int
    j: int
    perm: Permutation

    def to_json(self) -> dict:
        return {"s": self.s, "t": self.t, "i": self.i, "j": self.j, "perm": list(self.perm.image)}


@dataclass(frozen=True)
class SpectrumResult:
    order: int
    achieved: dict[tuple[int, int], SpectrumPoint]
    visited: int
    full_sweep: bool

    @property
    def pairs(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.achieved)

    @property
    def J(self) -> frozenset[int]:
        return frozenset(s for s, _ in self.achieved)

    @property
    def J_T(self) -> frozenset[int]:
        return frozenset(t + 2 * s for s, t in self.achieved)

    def excluded_within(self, envelope: AdmEnvelope) -> list[tuple[int, int]]:
        return sorted(envelope.pairs - self.pairs)

    def to_json(self, envelope: AdmEnvelope | None = None) -> dict:
        if envelope is None:
            envelope = adm(self.order, self.J, self.J_T)
        return {
            "order": self.order,
            "achieved": [self.achieved[k].to_json() for k in sorted(self.achieved)],
            "excluded_within_adm": [list(p) for p in self.excluded_within(envelope)],
        }


def _check_classes(v: int, reps: Sequence[Design]) -> None:
    for d in reps:
        if d.order != v:
            raise OrderMismatch(f"representative of order {d.order} in an order-{v} list")
    want = KNOWN_CLASS_COUNTS.get(v)
    if want is not None and len(reps) != want:
        raise IncompleteClassList(f"order {v} has {want} classes, got {len(reps)} representatives")
    for x in range(len(reps)):
        for y in range(x + 1, len(reps)):
            if are_isomorphic(reps[x], reps[y])[0]:
                raise IncompleteClassList(f"representatives {x} and {y} are isomorphic")


def compute_spectrum(v: int, reps: Sequence[Design], *, full_sweep: bool = False,
                     jobs: int = 1, backend: str | None = None) -> SpectrumResult:
    """Every (s, t) realised by ``pi(reps[i])`` against ``reps[j]``.

    Witnesses are the least ``(i, j, pi)`` in lexicographic order.  The
    sweep runs one unit per source class and value of ``pi(0)``; units
    are independent and merged deterministically, so ``jobs`` only
    affects speed.
    """
    reps = list(reps)
    _check_classes(v, reps)
    if backend is None:
        backend = _jit.backend_name()
    units = []
    for i, d in enumerate(reps):
        if full_sweep:
            aut = np.zeros((0, v), dtype=np.int64)
        else:
            aut = np.array([g.image for g in automorphisms(d) if g.image != tuple(range(v))],
                           dtype=np.int64).reshape(-1, v)
        firsts = range(v) if jobs > 1 else [-1]
        units += [(i, (d, aut, reps, f, backend)) for f in firsts]

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_unit, [u for _, u in units]))
    else:
        results = [_run_unit(u) for _, u in units]

    achieved: dict[tuple[int, int], SpectrumPoint] = {}
    visited = 0
    for (i, _), (found, wit, n) in zip(units, results):
        visited += n
        for j, s, t in zip(*np.nonzero(found)):
            pt = SpectrumPoint(int(s), int(t), i, int(j), Permutation(tuple(int(x) for x in wit[j, s, t])))
            old = achieved.get((pt.s, pt.t))
            if old is None or (pt.i, pt.j, pt.perm.image) < (old.i, old.j, old.perm.image):
                achieved[(pt.s, pt.t)] = pt
    log.info("order %d: %d source permutations scored", v, visited)
    return SpectrumResult(v, achieved, visited, full_sweep)


def verify_witnesses(result: SpectrumResult, reps: Sequence[Design]) -> list[tuple[int, int]]:
    """Pairs whose stored witness does not reproduce; empty when all check out."""
    bad = []
    for (s, t), pt in result.achieved.items():
        if fine_pair(apply_permutation(pt.perm, reps[pt.i]), reps[pt.j]) != (s, t):
            bad.append((s, t))
    return sorted(bad)


# ---------------------------------------------------------------- certificates

@dataclass(frozen=True)
class Certificate:
    s: int
    t: int
    perm: Permutation
    source: str
    target: str

    def to_json(self) -> dict:
        return {"s": self.s, "t": self.t, "perm": self.perm.cycle_string(),
                "source": self.source, "target": self.target}


@dataclass(frozen=True)
class CertificateCheck:
    certificate: Certificate
    got: FinePair

    @property
    def passed(self) -> bool:
        return self.got == (self.certificate.s, self.certificate.t)

    def to_json(self) -> dict:
        return {**self.certificate.to_json(), "got": list(self.got), "passed": self.passed}


def verify_certificates(v: int, certs: Iterable[Certificate],
                        designs: Mapping[str, Design]) -> list[CertificateCheck]:
    """Recompute ``fine_pair(pi(source), target)`` for each certificate."""
    out = []
    for c in certs:
        for name in (c.source, c.target):
            if name not in designs:
                raise UnknownClass(name)
        src, tgt = designs[c.source], designs[c.target]
        if src.order != v or tgt.order != v or c.perm.order != v:
            raise OrderMismatch(f"certificate {c.to_json()} is not of order {v}")
        out.append(CertificateCheck(c, fine_pair(apply_permutation(c.perm, src), tgt)))
    return out
