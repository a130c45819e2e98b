"""Presentation orders, First-Fit, Grundy colorings, and exact worst-case
First-Fit values.

A coloring here is a chain partition: color classes are chains of the
poset.  Colors are 1-based throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol, Sequence

import numpy as np

from .chains import ChainPartition, width
from .poset import Poset, PosetError, bits

__all__ = [
    "InvalidGrundyError",
    "InvalidMoveError",
    "TooLargeError",
    "WidthExceededError",
    "OnlineInstance",
    "GrundyColoring",
    "GrundyVerdict",
    "OnlineColorer",
    "FirstFitColorer",
    "first_fit",
    "verify_grundy",
    "grundy_to_presentation",
    "chi_ff_exact",
    "chi_ff_by_presentations",
    "best_grundy_coloring",
    "run_online",
]


class InvalidGrundyError(PosetError):
    """A coloring claimed to be Grundy fails verification."""


class InvalidMoveError(PosetError):
    """An on-line colorer emitted a chain index that breaks the chain
    property; ``step`` is the 1-based presentation step."""

    def __init__(self, step: int, message: str = ""):
        self.step = step
        super().__init__(message or f"invalid chain index at step {step}")


class TooLargeError(PosetError):
    """The exact oracle does not support posets this large."""


class WidthExceededError(PosetError):
    """The input poset is wider than the declared bound."""


@dataclass(frozen=True)
class OnlineInstance:
    """A poset together with a presentation order and a declared width
    bound; the input to on-line chain partitioning algorithms."""

    poset: Poset
    presentation: tuple[int, ...]
    width_bound: int

    def __post_init__(self):
        n = self.poset.n
        if sorted(self.presentation) != list(range(n)):
            raise PosetError("presentation must be a permutation of 0..n-1")
        if width(self.poset) > self.width_bound:
            raise WidthExceededError(
                f"poset width exceeds declared bound {self.width_bound}"
            )

    def presented_matrix(self) -> np.ndarray:
        """Strict order with vertices relabeled to presentation positions."""
        idx = np.asarray(self.presentation, dtype=int)
        return self.poset.less[np.ix_(idx, idx)]

    def to_json_dict(self) -> dict:
        from .poset import poset_to_json
        import json

        doc = json.loads(poset_to_json(self.poset))
        doc["presentation"] = list(self.presentation)
        doc["width_bound"] = self.width_bound
        return doc

    @classmethod
    def from_json_dict(cls, doc: dict) -> "OnlineInstance":
        from .poset import build_poset

        p = build_poset(int(doc["n"]), [tuple(e) for e in doc["relations"]])
        return cls(p, tuple(doc["presentation"]), int(doc["width_bound"]))


@dataclass(frozen=True)
class GrundyColoring:
    """Vertex -> color map (1-based); class i is every vertex of color i."""

    color: tuple[int, ...]
    n_colors: int

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n_colors)]
        for v, c in enumerate(self.color):
            out[c - 1].append(v)
        return out


@dataclass(frozen=True)
class GrundyVerdict:
    ok: bool
    condition: str | None = None
    vertex: int | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


class OnlineColorer(Protocol):
    """On-line chain partitioning contract.

    ``place`` receives the induced subposet on everything presented so
    far (vertices relabeled 0..k-1 in presentation order; the new vertex
    is k-1) and must irrevocably return a positive chain index.  The
    answer may depend only on that prefix poset.
    """

    def place(self, prefix: Poset) -> int: ...


def _first_fit_on_matrix(mat: np.ndarray) -> list[int]:
    """First-Fit over a presentation-ordered strict matrix; colors per
    presentation position."""
    n = mat.shape[0]
    colors: list[int] = []
    chains: list[int] = []  # member masks per chain, by presentation position
    for v in range(n):
        cmask = 0
        for u in range(v):
            if mat[u, v] or mat[v, u]:
                cmask |= 1 << u
        placed = False
        for j, members in enumerate(chains):
            if members & ~cmask == 0:
                chains[j] |= 1 << v
                colors.append(j + 1)
                placed = True
                break
        if not placed:
            chains.append(1 << v)
            colors.append(len(chains))
    return colors


def first_fit(instance: OnlineInstance) -> GrundyColoring:
    """Assign each presented vertex the least chain it extends; the result
    is a Grundy coloring of the instance poset."""
    mat = instance.presented_matrix()
    pos_colors = _first_fit_on_matrix(mat)
    color = [0] * instance.poset.n
    for t, v in enumerate(instance.presentation):
        color[v] = pos_colors[t]
    return GrundyColoring(tuple(color), max(pos_colors, default=0))


def verify_grundy(p: Poset, g: GrundyColoring) -> GrundyVerdict:
    """Check the three Grundy conditions; reports the first violation."""
    n = p.n
    if len(g.color) != n:
        return GrundyVerdict(False, "G1", None, "coloring is not total")
    if n == 0:
        return GrundyVerdict(g.n_colors == 0, "G2" if g.n_colors else None)
    if min(g.color) < 1 or max(g.color) > g.n_colors:
        return GrundyVerdict(False, "G2", None, "color out of range")
    class_mask = [0] * (g.n_colors + 1)
    for v, c in enumerate(g.color):
        class_mask[c] |= 1 << v
    for c in range(1, g.n_colors + 1):
        members = list(bits(class_mask[c]))
        for i, a in enumerate(members):
            for b in members[i + 1 :]:
                if p.incomparable(a, b):
                    return GrundyVerdict(
                        False, "G1", a, f"class {c} holds incomparable {a},{b}"
                    )
        if not members:
            return GrundyVerdict(False, "G2", None, f"color {c} unused")
    for v in range(n):
        for c in range(1, g.color[v]):
            if not (p.incomp_mask[v] & class_mask[c]):
                return GrundyVerdict(
                    False, "G3", v, f"vertex {v} has no witness of color {c}"
                )
    return GrundyVerdict(True)


def grundy_to_presentation(p: Poset, g: GrundyColoring) -> OnlineInstance:
    """Presentation that forces First-Fit to reproduce ``g``: color classes
    in ascending color order, ascending vertex id inside a class."""
    verdict = verify_grundy(p, g)
    if not verdict:
        raise InvalidGrundyError(
            f"not a Grundy coloring: {verdict.condition} ({verdict.detail})"
        )
    order = sorted(range(p.n), key=lambda v: (g.color[v], v))
    return OnlineInstance(p, tuple(order), max(width(p), 0))


def chi_ff_by_presentations(p: Poset) -> int:
    """Exact worst-case First-Fit count: maximum over all presentations.

    Explores the tree of presentation prefixes depth first, memoizing on
    the First-Fit chain state (which determines all future behavior), so
    the result equals brute force over all n! orders.
    """
    n = p.n
    if n == 0:
        return 0
    comp = p.comp_mask
    full = (1 << n) - 1
    memo: dict[tuple[int, ...], int] = {}

    def rec(chains: tuple[int, ...], placed: int) -> int:
        if placed == full:
            return len(chains)
        got = memo.get(chains)
        if got is not None:
            return got
        best = 0
        rem = full & ~placed
        while rem:
            vb = rem & -rem
            v = vb.bit_length() - 1
            rem ^= vb
            for j, members in enumerate(chains):
                if members & ~comp[v] == 0:
                    nxt = chains[:j] + (members | vb,) + chains[j + 1 :]
                    break
            else:
                nxt = chains + (vb,)
            best = max(best, rec(nxt, placed | vb))
        memo[chains] = best
        return best

    return rec((), 0)


def best_grundy_coloring(p: Poset) -> GrundyColoring:
    """A Grundy coloring with the maximum number of colors.

    Branches over candidate bottom color classes: class 1 must be a chain
    such that every other vertex has an incomparable vertex inside it;
    stripping it leaves the same problem one color down.  Subproblems are
    memoized on the remaining vertex set.
    """
    n = p.n
    if n == 0:
        return GrundyColoring((), 0)
    comp = p.comp_mask
    incomp = p.incomp_mask
    memo: dict[int, tuple[int, tuple[int, ...]]] = {}

    def first_chains(s: int):
        """Nonempty chains c <= s whose incomparability neighborhoods cover
        s - c."""
        out: list[int] = []

        def grow(chosen: int, covered: int, cand: int) -> None:
            if chosen and (s & ~chosen) & ~covered == 0:
                out.append(chosen)
            cc = cand
            while cc:
                vb = cc & -cc
                v = vb.bit_length() - 1
                cc ^= vb
                grow(chosen | vb, covered | incomp[v], cc & comp[v])

        grow(0, 0, s)
        return out

    def rec(s: int) -> tuple[int, tuple[int, ...]]:
        if s == 0:
            return 0, ()
        got = memo.get(s)
        if got is not None:
            return got
        best = -1
        best_chains: tuple[int, ...] = ()
        for c in first_chains(s):
            sub, sub_chains = rec(s & ~c)
            if 1 + sub > best:
                best = 1 + sub
                best_chains = (c,) + sub_chains
        memo[s] = (best, best_chains)
        return best, best_chains

    count, class_masks = rec((1 << n) - 1)
    color = [0] * n
    for c, mask in enumerate(class_masks, start=1):
        for v in bits(mask):
            color[v] = c
    return GrundyColoring(tuple(color), count)


def chi_ff_exact(p: Poset) -> int:
    """Worst-case First-Fit chain count over all presentations.

    Uses the exhaustive-presentation oracle up to n = 9 and the Grundy
    search for 10 <= n <= 14; raises TooLargeError beyond that.
    """
    if p.n <= 9:
        return chi_ff_by_presentations(p)
    if p.n <= 14:
        return best_grundy_coloring(p).n_colors
    raise TooLargeError(f"exact mode supports n <= 14, got {p.n}")


class FirstFitColorer:
    """First-Fit wrapped as an OnlineColorer."""

    def __init__(self):
        self._chains: list[int] = []

    def place(self, prefix: Poset) -> int:
        v = prefix.n - 1
        cmask = prefix.comp_mask[v]
        for j, members in enumerate(self._chains):
            if members & ~cmask == 0:
                self._chains[j] |= 1 << v
                return j + 1
        self._chains.append(1 << v)
        return len(self._chains)


def run_online(colorer: OnlineColorer, instance: OnlineInstance) -> ChainPartition:
    """Feed the presentation to the colorer one vertex at a time, checking
    every emitted index keeps its class a chain.

    Raises InvalidMoveError(step) on the first bad move.  The returned
    partition is over the instance's original vertex ids with chain
    indices compressed to 1..k in order of first use.
    """
    if width(instance.poset) > instance.width_bound:
        raise WidthExceededError("instance wider than declared bound")
    mat = instance.presented_matrix()
    n = instance.poset.n
    labels: list[int] = []
    by_label: dict[int, list[int]] = {}
    for k in range(1, n + 1):
        prefix = Poset(mat[:k, :k], _trusted=True)
        idx = colorer.place(prefix)
        if not isinstance(idx, int) or idx < 1:
            raise InvalidMoveError(k, f"chain index {idx!r} at step {k}")
        v = k - 1
        for u in by_label.get(idx, ()):
            if not (mat[u, v] or mat[v, u]):
                raise InvalidMoveError(
                    k, f"step {k}: vertex incomparable to chain {idx} member {u}"
                )
        labels.append(idx)
        by_label.setdefault(idx, []).append(v)
    original = [0] * n
    for t, v in enumerate(instance.presentation):
        original[v] = labels[t]
    return ChainPartition.from_labels(original)
