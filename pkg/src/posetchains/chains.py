"""Width, Dilworth chain covers, and the lattice of maximum antichains.

Everything here is deterministic: the augmenting-path matching scans
vertices and neighbors in ascending id, so partitions, extracted
antichains and tie-breaks are reproducible run to run.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .poset import Poset, PosetError, bits

__all__ = [
    "NotComparableError",
    "NotAntichainError",
    "NotMaximumAntichainError",
    "CapExceededError",
    "ChainPartition",
    "max_bipartite_matching",
    "perfect_matching_with_edge",
    "width",
    "dilworth_partition",
    "max_antichain",
    "maximum_antichains",
    "sqsubseteq",
    "antichain_meet",
    "antichain_join",
    "is_dilworth_edge",
]


class NotComparableError(PosetError):
    """The queried pair is incomparable or equal."""


class NotAntichainError(PosetError):
    """A vertex set that must be an antichain is not."""


class NotMaximumAntichainError(PosetError):
    """An antichain argument does not have maximum size."""


class CapExceededError(PosetError):
    """An enumeration produced more results than the caller allowed."""


@dataclass(frozen=True)
class ChainPartition:
    """Partition of 0..n-1 into chains; ``assignment[v]`` is 1..n_chains."""

    assignment: tuple[int, ...]
    n_chains: int

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "ChainPartition":
        """Compress arbitrary labels to contiguous 1-based chain ids."""
        seen: dict[int, int] = {}
        out = []
        for lab in labels:
            if lab not in seen:
                seen[lab] = len(seen) + 1
            out.append(seen[lab])
        return cls(tuple(out), len(seen))

    def chains(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n_chains)]
        for v, c in enumerate(self.assignment):
            out[c - 1].append(v)
        return out

    def validate(self, p: Poset) -> None:
        if len(self.assignment) != p.n:
            raise PosetError("partition size does not match poset")
        if sorted(set(self.assignment)) != list(range(1, self.n_chains + 1)):
            raise PosetError("chain indices are not contiguous 1..k")
        for chain in self.chains():
            if not p.is_chain(chain):
                raise PosetError(f"class {chain} is not a chain")


def max_bipartite_matching(
    n_left: int, n_right: int, adj: Sequence[Sequence[int]]
) -> tuple[list[int | None], list[int | None]]:
    """Kuhn's algorithm; left vertices and neighbors tried in ascending id."""
    match_l: list[int | None] = [None] * n_left
    match_r: list[int | None] = [None] * n_right

    def try_augment(u: int, seen: list[bool]) -> bool:
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                if match_r[v] is None or try_augment(match_r[v], seen):
                    match_l[u] = v
                    match_r[v] = u
                    return True
        return False

    for u in range(n_left):
        try_augment(u, [False] * n_right)
    return match_l, match_r


def _split_adjacency(p: Poset) -> list[list[int]]:
    """Split-graph adjacency: left copy of u connects to right copies of
    everything strictly above u."""
    return [list(bits(p.up_mask[u])) for u in range(p.n)]


def _matching(p: Poset) -> tuple[list[int | None], list[int | None]]:
    return max_bipartite_matching(p.n, p.n, _split_adjacency(p))


def width(p: Poset) -> int:
    """Maximum antichain size = n minus a maximum matching in the split
    graph of the strict order (also the minimum chain-cover size)."""
    match_l, _ = _matching(p)
    return p.n - sum(1 for v in match_l if v is not None)


def dilworth_partition(p: Poset) -> ChainPartition:
    """A minimum chain cover read off the deterministic matching: follow
    matched successor links; chains are numbered by their least vertex."""
    match_l, match_r = _matching(p)
    labels = [0] * p.n
    heads = [v for v in range(p.n) if match_r[v] is None]
    for idx, head in enumerate(sorted(heads), start=1):
        v: int | None = head
        while v is not None:
            labels[v] = idx
            v = match_l[v]
    part = ChainPartition.from_labels(labels)
    return part


def _koenig_antichain(p: Poset) -> tuple[int, ...]:
    """Maximum antichain from the matching's minimum vertex cover."""
    match_l, match_r = _matching(p)
    adj = _split_adjacency(p)
    # alternating reachability from unmatched left vertices
    z_left = [match_l[u] is None for u in range(p.n)]
    z_right = [False] * p.n
    queue = [u for u in range(p.n) if z_left[u]]
    while queue:
        u = queue.pop(0)
        for v in adj[u]:
            if not z_right[v]:
                z_right[v] = True
                w = match_r[v]
                if w is not None and not z_left[w]:
                    z_left[w] = True
                    queue.append(w)
    # cover = (L - Z_L) + (R & Z_R); antichain avoids both copies
    return tuple(v for v in range(p.n) if z_left[v] and not z_right[v])


def max_antichain(p: Poset) -> tuple[int, ...]:
    """One deterministic maximum antichain (sorted vertex ids)."""
    return _koenig_antichain(p)


def maximum_antichains(p: Poset, cap: int = 100_000) -> list[tuple[int, ...]]:
    """All antichains of size width(p), lexicographically sorted.

    Exhaustive backtracking, intended for n <= 20 or so.  Raises
    CapExceededError as soon as more than ``cap`` results exist.
    """
    w = width(p)
    out: list[tuple[int, ...]] = []
    if w == 0:
        return out

    def extend(chosen: list[int], candidates: int) -> None:
        if len(chosen) == w:
            out.append(tuple(chosen))
            if len(out) > cap:
                raise CapExceededError(
                    f"more than {cap} maximum antichains"
                )
            return
        need = w - len(chosen)
        cand = candidates
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            if need > cand.bit_count() + 1:
                return
            chosen.append(v)
            extend(chosen, cand & p.incomp_mask[v])
            chosen.pop()

    extend([], (1 << p.n) - 1)
    return out


def _check_max_antichain(p: Poset, a: Sequence[int], w: int | None = None) -> tuple[int, ...]:
    a = tuple(sorted(a))
    if not p.is_antichain(a):
        raise NotAntichainError(f"{a} is not an antichain")
    w = width(p) if w is None else w
    if len(a) != w:
        raise NotMaximumAntichainError(f"{a} has size {len(a)}, width is {w}")
    return a


def sqsubseteq(p: Poset, a: Sequence[int], b: Sequence[int]) -> bool:
    """Domination order on maximum antichains: every element of ``a`` lies
    below or in ``b``."""
    w = width(p)
    a = _check_max_antichain(p, a, w)
    b = _check_max_antichain(p, b, w)
    bmask = 0
    for v in b:
        bmask |= 1 << v
    return all((p.up_mask[x] | (1 << x)) & bmask for x in a)


def _set_mask(vs: Iterable[int]) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def antichain_meet(p: Poset, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """Minimal elements of the union; the lattice meet."""
    w = width(p)
    a = _check_max_antichain(p, a, w)
    b = _check_max_antichain(p, b, w)
    return p.minimals_of(set(a) | set(b))


def antichain_join(p: Poset, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """Maximal elements of the union; the lattice join."""
    w = width(p)
    a = _check_max_antichain(p, a, w)
    b = _check_max_antichain(p, b, w)
    return p.maximals_of(set(a) | set(b))


def perfect_matching_with_edge(
    n: int, adj: Sequence[Sequence[int]], forced: tuple[int, int] | None = None
) -> bool:
    """Does the balanced bipartite graph have a perfect matching, optionally
    through the forced edge?"""
    if forced is not None:
        fu, fv = forced
        if fv not in adj[fu]:
            return False
        sub = [[v for v in adj[u] if v != fv] if u != fu else [] for u in range(n)]
        match_l, _ = max_bipartite_matching(n, n, sub)
        return sum(1 for v in match_l if v is not None) == n - 1
    match_l, _ = max_bipartite_matching(n, n, adj)
    return sum(1 for v in match_l if v is not None) == n


def _saturated_chains_between(p: Poset, u: int, v: int):
    """Yield saturated chains from u to v inside the closed interval [u, v]."""
    interval = _set_mask(p.interval(u, v))

    def walk(top: int, acc: list[int]):
        if top == v:
            yield tuple(acc)
            return
        nxt = p.up_mask[top] & interval
        for m in p.minimals_of(tuple(bits(nxt))):
            acc.append(m)
            yield from walk(m, acc)
            acc.pop()

    yield from walk(u, [u])


def is_dilworth_edge(p: Poset, u: int, v: int) -> bool:
    """Is there a minimum chain cover with u and v in the same chain?

    The pair is contracted to a single point z with D(z) = D(u) and
    U(z) = U(v); any vertices of [u, v] taken into the same chain must be
    contracted too, so we sweep the saturated chains from u to v inside
    the interval (larger contractions never hurt) and accept as soon as
    one contracted poset still covers with width(p) chains.
    """
    if u == v or not p.comparable(u, v):
        raise NotComparableError(f"{u} and {v} are not a strict comparable pair")
    if p.lt(v, u):
        u, v = v, u
    w = width(p)
    down_u = p.down_mask[u]
    up_v = p.up_mask[v]
    for k in _saturated_chains_between(p, u, v):
        kmask = _set_mask(k)
        keep = [x for x in range(p.n) if not (kmask >> x) & 1]
        nq = len(keep) + 1
        less = np.zeros((nq, nq), dtype=bool)
        sub = p.less[[*keep]][:, [*keep]] if keep else np.zeros((0, 0), dtype=bool)
        less[: len(keep), : len(keep)] = sub
        z = len(keep)
        for i, x in enumerate(keep):
            if (down_u >> x) & 1:
                less[i, z] = True
            if (up_v >> x) & 1:
                less[z, i] = True
        q = Poset(less, _trusted=True)
        if width(q) <= w:
            return True
    return False
