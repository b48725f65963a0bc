"""Blocks, designs, edge masks, triangles and vertex permutations.

A block ``[a,b,c-d]`` is a copy of K4-e whose degree-3 vertices are
``a, b`` and whose degree-2 vertices are ``c, d`` (the missing edge is
``cd``).  Both pairs are stored sorted, so two blocks are equal exactly
when they describe the same subgraph.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from ._tables import edge_index

Edge = tuple[int, int]

_CYCLES_RE = re.compile(r"(?:\(\s*\d+(?:\s+\d+)*\s*\)\s*)*")


class K4EError(Exception):
    """Base class for errors raised by this package."""


class InvalidBlock(K4EError, ValueError):
    pass


class DesignError(K4EError, ValueError):
    pass


class WrongBlockCount(DesignError):
    def __init__(self, order: int, got: int):
        self.order = order
        self.got = got
        super().__init__(f"order {order} needs {num_blocks(order)} blocks, got {got}")


class EdgeCollision(DesignError):
    def __init__(self, edge: Edge):
        self.edge = edge
        super().__init__(f"edge {edge[0]}{edge[1]} is covered more than once")


class EdgeMissing(DesignError):
    def __init__(self, edge: Edge):
        self.edge = edge
        super().__init__(f"edge {edge[0]}{edge[1]} is not covered")


class VertexOutOfRange(DesignError):
    def __init__(self, vertex: int, order: int):
        self.vertex = vertex
        self.order = order
        super().__init__(f"vertex {vertex} outside 0..{order - 1}")


class OrderMismatch(K4EError, ValueError):
    pass


class InadmissibleOrder(K4EError, ValueError):
    pass


def admissible_order(v: int) -> bool:
    """True when a (K4-e)-design of order ``v`` exists."""
    return v >= 6 and v % 5 in (0, 1)


def num_blocks(v: int) -> int:
    return v * (v - 1) // 10


def require_admissible(v: int) -> None:
    if not admissible_order(v):
        raise InadmissibleOrder(f"no (K4-e)-design of order {v}: need v = 0, 1 (mod 5) and v >= 6")


class Triangle(NamedTuple):
    x: int
    y: int
    z: int

    @classmethod
    def of(cls, a: int, b: int, c: int) -> "Triangle":
        x, y, z = sorted((a, b, c))
        if x == y or y == z:
            raise ValueError(f"triangle needs three distinct vertices, got {(a, b, c)}")
        return cls(x, y, z)


@dataclass(frozen=True, order=True)
class Block:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        verts = (self.a, self.b, self.c, self.d)
        if len(set(verts)) != 4:
            raise InvalidBlock(f"block vertices must be distinct: {list(verts)}")
        if min(verts) < 0:
            raise InvalidBlock(f"negative vertex in {list(verts)}")
        if self.a > self.b:
            a, b = self.b, self.a
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "b", b)
        if self.c > self.d:
            c, d = self.d, self.c
            object.__setattr__(self, "c", c)
            object.__setattr__(self, "d", d)

    @classmethod
    def from_seq(cls, seq: Sequence[int]) -> "Block":
        if len(seq) != 4:
            raise InvalidBlock(f"a block has four vertices, got {list(seq)}")
        return cls(*(int(x) for x in seq))

    @property
    def p(self) -> Edge:
        return (self.a, self.b)

    @property
    def q(self) -> Edge:
        return (self.c, self.d)

    @property
    def vertices(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def as_list(self) -> list[int]:
        return [self.a, self.b, self.c, self.d]

    def __str__(self) -> str:
        return f"[{self.a},{self.b},{self.c}-{self.d}]"


def block_edges(b: Block) -> frozenset[Edge]:
    """The five edges ab, ac, ad, bc, bd (never cd)."""
    out = set()
    for x, y in ((b.a, b.b), (b.a, b.c), (b.a, b.d), (b.b, b.c), (b.b, b.d)):
        out.add((x, y) if x < y else (y, x))
    return frozenset(out)


def block_triangles(b: Block) -> frozenset[Triangle]:
    return frozenset((Triangle.of(b.a, b.b, b.c), Triangle.of(b.a, b.b, b.d)))


class EdgeMask:
    """Set of edges of K_v stored as an integer bitmask."""

    __slots__ = ("order", "bits")

    def __init__(self, order: int, bits: int = 0):
        self.order = order
        self.bits = bits

    @property
    def size(self) -> int:
        return self.order * (self.order - 1) // 2

    def index(self, x: int, y: int) -> int:
        if x == y or not (0 <= x < self.order and 0 <= y < self.order):
            raise ValueError(f"({x},{y}) is not an edge of K_{self.order}")
        return edge_index(x, y, self.order)

    def edge(self, k: int) -> Edge:
        v = self.order
        x = 0
        while k >= v - 1 - x:
            k -= v - 1 - x
            x += 1
        return (x, x + 1 + k)

    @classmethod
    def full(cls, order: int) -> "EdgeMask":
        return cls(order, (1 << (order * (order - 1) // 2)) - 1)

    @classmethod
    def of_block(cls, order: int, b: Block) -> "EdgeMask":
        m = cls(order)
        for e in block_edges(b):
            m.bits |= 1 << m.index(*e)
        return m

    def __contains__(self, e: Edge) -> bool:
        return bool(self.bits >> self.index(*e) & 1)

    def add(self, e: Edge) -> None:
        self.bits |= 1 << self.index(*e)

    def isdisjoint(self, other: "EdgeMask") -> bool:
        return self.bits & other.bits == 0

    def __or__(self, other: "EdgeMask") -> "EdgeMask":
        return EdgeMask(self.order, self.bits | other.bits)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, EdgeMask) and (self.order, self.bits) == (other.order, other.bits)

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def __iter__(self) -> Iterator[Edge]:
        bits, k = self.bits, 0
        while bits:
            if bits & 1:
                yield self.edge(k)
            bits >>= 1
            k += 1

    def __repr__(self) -> str:
        return f"EdgeMask(order={self.order}, edges={len(self)})"


@dataclass(frozen=True)
class Design:
    order: int
    blocks: tuple[Block, ...]

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.array([b.vertices for b in self.blocks], dtype=np.int64).reshape(-1, 4)
        arr.setflags(write=False)
        return arr

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    def triangles(self) -> frozenset[Triangle]:
        out: set[Triangle] = set()
        for b in self.blocks:
            out |= block_triangles(b)
        return frozenset(out)

    def to_json(self) -> dict:
        return {"order": self.order, "blocks": [b.as_list() for b in self.blocks]}

    def __str__(self) -> str:
        return "{" + ", ".join(map(str, self.blocks)) + "}"


def validate_design(v: int, blocks: Iterable[Block | Sequence[int]]) -> Design:
    """Check that ``blocks`` partition the edges of K_v and return the design.

    Errors are reported in a fixed order: vertex range, block count, then
    the lowest-indexed doubly covered or uncovered edge.
    """
    bl = [b if isinstance(b, Block) else Block.from_seq(b) for b in blocks]
    for b in bl:
        for x in b.vertices:
            if x >= v:
                raise VertexOutOfRange(x, v)
    if len(bl) != num_blocks(v) or v * (v - 1) % 10:
        raise WrongBlockCount(v, len(bl))
    ne = v * (v - 1) // 2
    cover = [0] * ne
    for b in bl:
        for x, y in block_edges(b):
            cover[edge_index(x, y, v)] += 1
    mask = EdgeMask(v)
    for k, n in enumerate(cover):
        if n > 1:
            raise EdgeCollision(mask.edge(k))
        if n == 0:
            raise EdgeMissing(mask.edge(k))
    return Design(v, tuple(sorted(bl)))


def design_from_array(v: int, arr: np.ndarray, *, check: bool = True) -> Design:
    blocks = [Block(int(a), int(b), int(c), int(d)) for a, b, c, d in arr]
    if check:
        return validate_design(v, blocks)
    return Design(v, tuple(sorted(blocks)))


def read_design(record: dict | str) -> Design:
    if isinstance(record, str):
        record = json.loads(record)
    return validate_design(int(record["order"]), record["blocks"])


@dataclass(frozen=True)
class Permutation:
    image: tuple[int, ...]

    def __post_init__(self):
        img = tuple(int(x) for x in self.image)
        if sorted(img) != list(range(len(img))):
            raise ValueError(f"not a permutation of 0..{len(img) - 1}: {list(img)}")
        object.__setattr__(self, "image", img)

    @property
    def order(self) -> int:
        return len(self.image)

    @classmethod
    def identity(cls, v: int) -> "Permutation":
        return cls(tuple(range(v)))

    @classmethod
    def from_cycles(cls, text: str, v: int) -> "Permutation":
        """Parse cycle notation such as ``"(1 2)(3 4)"``; unlisted points are fixed."""
        norm = text.replace(",", " ").strip()
        if not _CYCLES_RE.fullmatch(norm):
            raise ValueError(f"bad cycle notation: {text!r}")
        img = list(range(v))
        seen: set[int] = set()
        for cyc in re.findall(r"\(([^()]*)\)", norm):
            pts = [int(t) for t in cyc.split()]
            for x in pts:
                if not 0 <= x < v or x in seen:
                    raise ValueError(f"bad cycle notation {text!r} for order {v}")
                seen.add(x)
            for i, x in enumerate(pts):
                img[x] = pts[(i + 1) % len(pts)]
        return cls(tuple(img))

    def cycles(self) -> list[tuple[int, ...]]:
        out, seen = [], set()
        for start in range(self.order):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            x = self.image[start]
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self.image[x]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def cycle_string(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "(0)"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)

    def __call__(self, x: int) -> int:
        return self.image[x]

    def compose(self, other: "Permutation") -> "Permutation":
        """``self ∘ other``: apply ``other`` first."""
        if other.order != self.order:
            raise OrderMismatch("permutations of different degree")
        return Permutation(tuple(self.image[x] for x in other.image))

    def inverse(self) -> "Permutation":
        inv = [0] * self.order
        for x, y in enumerate(self.image):
            inv[y] = x
        return Permutation(tuple(inv))

    def apply_block(self, b: Block) -> Block:
        im = self.image
        return Block(im[b.a], im[b.b], im[b.c], im[b.d])

    def apply_triangle(self, t: Triangle) -> Triangle:
        im = self.image
        return Triangle.of(im[t.x], im[t.y], im[t.z])


def apply_permutation(pi: Permutation, d: Design) -> Design:
    if pi.order != d.order:
        raise OrderMismatch(f"permutation of degree {pi.order} applied to design of order {d.order}")
    return validate_design(d.order, [pi.apply_block(b) for b in d.blocks])


def all_edges(v: int) -> list[Edge]:
    return list(combinations(range(v), 2))
