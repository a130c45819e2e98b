"""Finite posets stored as dense boolean strict-order matrices.

Vertices are the integers 0..n-1.  ``less[u, v]`` holds iff u < v; the
matrix is kept transitively closed, irreflexive and antisymmetric, so
every comparability query is a single lookup.  Posets are immutable
after construction and safe to share between threads.
"""

from __future__ import annotations

import json
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "PosetError",
    "SelfLoopError",
    "CycleError",
    "Poset",
    "build_poset",
    "lex_product",
    "poset_to_json",
    "poset_from_json",
]


class PosetError(Exception):
    """Base class for poset construction and query errors."""


class SelfLoopError(PosetError):
    """A relation (v, v) was supplied."""


class CycleError(PosetError):
    """The transitive closure of the input would force u < u."""


def transitive_closure(mat: np.ndarray) -> np.ndarray:
    """Reachability closure of a boolean relation (diagonal excluded)."""
    out = mat.copy()
    while True:
        step = (out.astype(np.uint8) @ out.astype(np.uint8)) > 0
        new = out | step
        if np.array_equal(new, out):
            return out
        out = new


def _mask_of(row: np.ndarray) -> int:
    """Pack a boolean vector into a python int bitmask (bit i = vertex i)."""
    if row.size == 0:
        return 0
    packed = np.packbits(row, bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def bits(mask: int):
    """Iterate set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Poset:
    """Immutable finite strict partial order on vertices 0..n-1."""

    def __init__(self, less: np.ndarray, *, _trusted: bool = False):
        less = np.asarray(less, dtype=bool)
        n = less.shape[0]
        if less.shape != (n, n):
            raise PosetError(f"relation matrix must be square, got {less.shape}")
        if not _trusted:
            if less.diagonal().any():
                raise CycleError("strict order cannot be reflexive")
            if (less & less.T).any():
                raise CycleError("relation is not antisymmetric")
            step = (less.astype(np.uint8) @ less.astype(np.uint8)) > 0
            if (step & ~less).any():
                raise PosetError("relation is not transitively closed")
        less = less.copy()
        less.flags.writeable = False
        self.n = n
        self.less = less

    # -- elementary queries -------------------------------------------------

    def lt(self, u: int, v: int) -> bool:
        return bool(self.less[u, v])

    def le(self, u: int, v: int) -> bool:
        return u == v or bool(self.less[u, v])

    def comparable(self, u: int, v: int) -> bool:
        return u == v or bool(self.less[u, v]) or bool(self.less[v, u])

    def incomparable(self, u: int, v: int) -> bool:
        return not self.comparable(u, v)

    @cached_property
    def up_mask(self) -> tuple[int, ...]:
        """Strict upset of each vertex as a bitmask."""
        return tuple(_mask_of(self.less[v]) for v in range(self.n))

    @cached_property
    def down_mask(self) -> tuple[int, ...]:
        """Strict downset of each vertex as a bitmask."""
        return tuple(_mask_of(self.less[:, v]) for v in range(self.n))

    @cached_property
    def comp_mask(self) -> tuple[int, ...]:
        """Vertices strictly comparable to each vertex, as a bitmask."""
        return tuple(u | d for u, d in zip(self.up_mask, self.down_mask))

    @cached_property
    def incomp_mask(self) -> tuple[int, ...]:
        full = (1 << self.n) - 1
        return tuple(
            full & ~(self.comp_mask[v] | (1 << v)) for v in range(self.n)
        )

    @cached_property
    def up_height(self) -> tuple[int, ...]:
        """Longest chain with the vertex as bottom (counting the vertex)."""
        h = [1] * self.n
        # process tops first: every vertex above v has a strictly smaller upset
        for v in sorted(range(self.n), key=lambda v: self.up_mask[v].bit_count()):
            above = [h[u] for u in bits(self.up_mask[v])]
            h[v] = 1 + max(above) if above else 1
        return tuple(h)

    def upset(self, v: int) -> tuple[int, ...]:
        return tuple(bits(self.up_mask[v]))

    def downset(self, v: int) -> tuple[int, ...]:
        return tuple(bits(self.down_mask[v]))

    def incomparables(self, v: int) -> tuple[int, ...]:
        return tuple(bits(self.incomp_mask[v]))

    def interval(self, u: int, v: int) -> tuple[int, ...]:
        """Closed interval [u, v]: vertices z with u <= z <= v."""
        inner = self.up_mask[u] & self.down_mask[v]
        out = [u] if self.le(u, v) else []
        out.extend(bits(inner))
        if u != v and self.le(u, v):
            out.append(v)
        return tuple(sorted(set(out)))

    # -- subsets ------------------------------------------------------------

    def is_chain(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        return all(
            self.comparable(a, b) for i, a in enumerate(vs) for b in vs[i + 1 :]
        )

    def is_antichain(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        return all(
            self.incomparable(a, b) for i, a in enumerate(vs) for b in vs[i + 1 :]
        )

    def minimals_of(self, vertices: Iterable[int]) -> tuple[int, ...]:
        vs = sorted(set(vertices))
        m = 0
        for v in vs:
            m |= 1 << v
        return tuple(v for v in vs if not (self.down_mask[v] & m))

    def maximals_of(self, vertices: Iterable[int]) -> tuple[int, ...]:
        vs = sorted(set(vertices))
        m = 0
        for v in vs:
            m |= 1 << v
        return tuple(v for v in vs if not (self.up_mask[v] & m))

    def induced(self, vertices: Sequence[int]) -> "Poset":
        """Induced subposet; vertex k of the result is ``vertices[k]``."""
        idx = np.asarray(list(vertices), dtype=int)
        return Poset(self.less[np.ix_(idx, idx)], _trusted=True)

    def covers(self) -> list[tuple[int, int]]:
        """Edges of the transitive reduction (Hasse diagram)."""
        lt = self.less
        two = (lt.astype(np.uint8) @ lt.astype(np.uint8)) > 0
        cov = lt & ~two
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(cov))]

    def relations(self) -> list[tuple[int, int]]:
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(self.less))]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poset):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.less, other.less)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Poset(n={self.n}, covers={self.covers()!r})"


def build_poset(n: int, relations: Iterable[tuple[int, int]]) -> Poset:
    """Transitively close ``relations`` (pairs i < j) into a Poset.

    Raises SelfLoopError on a pair (v, v) and CycleError when the closure
    would force u < u.
    """
    mat = np.zeros((n, n), dtype=bool)
    for u, v in relations:
        if not (0 <= u < n and 0 <= v < n):
            raise PosetError(f"vertex pair ({u}, {v}) out of range for n={n}")
        if u == v:
            raise SelfLoopError(f"self loop on vertex {u}")
        mat[u, v] = True
    closed = transitive_closure(mat)
    if closed.diagonal().any():
        cyc = int(np.nonzero(closed.diagonal())[0][0])
        raise CycleError(f"relations force {cyc} < {cyc}")
    return Poset(closed, _trusted=True)


def lex_product(p: Poset, q: Poset) -> Poset:
    """Lexicographic product: each vertex of ``p`` inflated to a copy of ``q``.

    Vertex ids: (a, b) maps to a * q.n + b.  (a1,b1) < (a2,b2) iff a1 < a2
    in p, or a1 == a2 and b1 < b2 in q.
    """
    n = p.n * q.n
    less = np.zeros((n, n), dtype=bool)
    if n:
        # block structure: p-relation lifts to full blocks, q-relation to
        # the diagonal blocks
        less = np.kron(p.less, np.ones((q.n, q.n), dtype=bool)) | np.kron(
            np.eye(p.n, dtype=bool), q.less
        )
    return Poset(less, _trusted=True)


def poset_to_json(p: Poset, *, closed: bool = False) -> str:
    """Serialize; covers only by default, full relation with closed=True."""
    if closed:
        doc = {"n": p.n, "relations": [list(e) for e in p.relations()], "closed": True}
    else:
        doc = {"n": p.n, "relations": [list(e) for e in p.covers()]}
    return json.dumps(doc)


def poset_from_json(text: str) -> Poset:
    doc = json.loads(text)
    return build_poset(int(doc["n"]), [tuple(e) for e in doc["relations"]])
