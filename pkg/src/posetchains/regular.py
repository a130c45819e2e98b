"""Regular instances: antichain-layered posets with core structure.

A regular instance presents a width-w poset as a sequence of disjoint
maximum antichains, linearly ordered by domination, where consecutive
layers (at presentation time) form cores and every cross comparability
factors through the layer just above or below the newcomer.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .chains import (
    NotAntichainError,
    perfect_matching_with_edge,
    width,
)
from .ladder import find_max_ladder
from .poset import Poset, PosetError, build_poset, poset_to_json

__all__ = [
    "SizeMismatchError",
    "RegularInstance",
    "BipartiteCore",
    "Violation",
    "Verdict",
    "derive_ps",
    "is_core",
    "verify_regular",
    "verify_p6_p7",
    "ladder_bound_check",
]


class SizeMismatchError(PosetError):
    """The two sides of a bipartite check have different sizes."""


@dataclass(frozen=True)
class Violation:
    condition: str
    witness: tuple
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.condition} witness={self.witness} {self.detail}".rstrip()


@dataclass(frozen=True)
class Verdict:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def conditions(self) -> set[str]:
        return {v.condition for v in self.violations}

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(str(v) for v in self.violations)


@dataclass(frozen=True)
class RegularInstance:
    """Poset plus its presentation-ordered sequence of maximum antichains."""

    poset: Poset
    antichains: tuple[tuple[int, ...], ...]
    w: int

    def __post_init__(self):
        object.__setattr__(
            self, "antichains", tuple(tuple(sorted(a)) for a in self.antichains)
        )

    def antichain_of(self, v: int) -> int | None:
        """1-based index of the layer containing v, if any."""
        for i, a in enumerate(self.antichains, start=1):
            if v in a:
                return i
        return None

    def to_json(self) -> str:
        return json.dumps(
            {
                "poset": json.loads(poset_to_json(self.poset)),
                "antichains": [list(a) for a in self.antichains],
                "w": self.w,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "RegularInstance":
        doc = json.loads(text)
        p = build_poset(
            int(doc["poset"]["n"]), [tuple(e) for e in doc["poset"]["relations"]]
        )
        return cls(p, tuple(tuple(a) for a in doc["antichains"]), int(doc["w"]))


@dataclass(frozen=True)
class BipartiteCore:
    """A balanced antichain pair whose every cross comparability is forced
    into some perfect matching."""

    poset: Poset
    lower: tuple[int, ...]
    upper: tuple[int, ...]

    def check(self) -> bool:
        return is_core(self.poset, self.lower, self.upper)


def _mask(vs: Sequence[int]) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def _dominated(p: Poset, a: Sequence[int], b: Sequence[int]) -> bool:
    """Every element of a lies below or in b (no validation)."""
    bmask = _mask(b)
    return all((p.up_mask[x] | (1 << x)) & bmask for x in a)


def derive_ps(inst: RegularInstance, i: int) -> tuple[int | None, int | None]:
    """Nearest layers below/above layer i among the earlier-presented ones.

    Returns 1-based indices (p, s); either is None when layer i is the
    minimum (resp. maximum) of the first i layers under domination.
    """
    if not 1 <= i <= len(inst.antichains):
        raise PosetError(f"layer index {i} out of range")
    p = inst.poset
    ai = inst.antichains[i - 1]
    below: list[int] = []
    above: list[int] = []
    for j in range(1, i):
        aj = inst.antichains[j - 1]
        if aj == ai:
            continue
        if _dominated(p, aj, ai):
            below.append(j)
        elif _dominated(p, ai, aj):
            above.append(j)
    p_idx: int | None = None
    for j in below:
        if p_idx is None or _dominated(p, inst.antichains[p_idx - 1], inst.antichains[j - 1]):
            p_idx = j
    s_idx: int | None = None
    for j in above:
        if s_idx is None or _dominated(p, inst.antichains[j - 1], inst.antichains[s_idx - 1]):
            s_idx = j
    return p_idx, s_idx


def _cross_adjacency(p: Poset, low: Sequence[int], high: Sequence[int]) -> list[list[int]]:
    return [[j for j, b in enumerate(high) if p.lt(a, b)] for a in low]


def _core_offense(
    p: Poset, low: Sequence[int], high: Sequence[int]
) -> tuple | None:
    """None when (low, high) is a core; otherwise a witness tuple."""
    w = len(low)
    for b in high:
        for a in low:
            if p.lt(b, a):
                return (b, a, "inverted cross comparability")
    adj = _cross_adjacency(p, low, high)
    for i, a in enumerate(low):
        if not adj[i]:
            return (a, None, "lower vertex with no upward comparability")
    for i, a in enumerate(low):
        for j in adj[i]:
            if not perfect_matching_with_edge(w, adj, (i, j)):
                return (a, high[j], "comparability outside every perfect matching")
    return None


def is_core(p: Poset, low: Sequence[int], high: Sequence[int]) -> bool:
    """Every cross comparability lies in some perfect matching of the
    cross-comparability graph (forced-edge matching test)."""
    low = tuple(sorted(low))
    high = tuple(sorted(high))
    if len(low) != len(high):
        raise SizeMismatchError(f"sides have sizes {len(low)} and {len(high)}")
    if set(low) & set(high):
        raise NotAntichainError("sides are not disjoint")
    if not p.is_antichain(low):
        raise NotAntichainError(f"{low} is not an antichain")
    if not p.is_antichain(high):
        raise NotAntichainError(f"{high} is not an antichain")
    return _core_offense(p, low, high) is None


def verify_regular(inst: RegularInstance) -> Verdict:
    """Replay the presentation and check all five layer conditions."""
    p = inst.poset
    n = len(inst.antichains)
    w = inst.w
    out: list[Violation] = []

    if width(p) != w:
        out.append(Violation("width", (width(p), w), "poset width != declared w"))
    seen: set[int] = set()
    for i, a in enumerate(inst.antichains, start=1):
        if len(a) != w or not p.is_antichain(a):
            out.append(Violation("max-antichain", (i,), f"layer {i} is not a w-antichain"))
        overlap = seen & set(a)
        if overlap:
            out.append(Violation("R2", (i, tuple(sorted(overlap))), "layers overlap"))
        seen |= set(a)
    if seen != set(range(p.n)):
        missing = tuple(sorted(set(range(p.n)) - seen))
        out.append(Violation("R1", missing, "layers do not cover the poset"))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            ai, aj = inst.antichains[i - 1], inst.antichains[j - 1]
            if not (_dominated(p, ai, aj) or _dominated(p, aj, ai)):
                out.append(Violation("R3", (i, j), "layers incomparable under domination"))
    if out:
        # broken layer structure makes the replay conditions meaningless
        return Verdict(tuple(out))

    for i in range(1, n + 1):
        p_idx, s_idx = derive_ps(inst, i)
        ai = inst.antichains[i - 1]
        if s_idx is not None:
            off = _core_offense(p, ai, inst.antichains[s_idx - 1])
            if off:
                out.append(Violation("R4", (i, s_idx) + off, "pair with upper neighbor is not a core"))
        if p_idx is not None:
            off = _core_offense(p, inst.antichains[p_idx - 1], ai)
            if off:
                out.append(Violation("R4", (p_idx, i) + off, "pair with lower neighbor is not a core"))
        smask = _mask(inst.antichains[s_idx - 1]) if s_idx is not None else 0
        pmask = _mask(inst.antichains[p_idx - 1]) if p_idx is not None else 0
        for j in range(1, i):
            for x in ai:
                for y in inst.antichains[j - 1]:
                    if p.lt(x, y):
                        # newcomer below an older vertex: step through the
                        # layer just above at insertion time
                        if not (p.up_mask[x] & (p.down_mask[y] | (1 << y)) & smask):
                            out.append(
                                Violation("R5", (i, j, x, y), "no middle vertex in the upper neighbor")
                            )
                    elif p.lt(y, x):
                        if not ((p.up_mask[y] | (1 << y)) & p.down_mask[x] & pmask):
                            out.append(
                                Violation("R5", (i, j, y, x), "no middle vertex in the lower neighbor")
                            )
    return Verdict(tuple(out))


def _domination_order(inst: RegularInstance) -> list[int]:
    """Layer indices (1-based) sorted ascending by domination."""
    p = inst.poset
    idxs = list(range(1, len(inst.antichains) + 1))
    # insertion sort with the domination test keeps this n^2 and total
    order: list[int] = []
    for i in idxs:
        lo = 0
        while lo < len(order) and _dominated(
            p, inst.antichains[order[lo] - 1], inst.antichains[i - 1]
        ):
            lo += 1
        order.insert(lo, i)
    return order


def verify_p6_p7(inst: RegularInstance) -> Verdict:
    """Global consequences of regularity: every dominated layer pair is a
    core, and cross comparabilities pass through every earliest-presented
    layer of the enclosing interval (both interval readings checked)."""
    p = inst.poset
    n = len(inst.antichains)
    out: list[Violation] = []
    order = _domination_order(inst)
    pos = {idx: t for t, idx in enumerate(order)}
    # rmin[a][b]: least (earliest-presented) layer index among positions a..b
    rmin = [[0] * n for _ in range(n)]
    for a in range(n):
        cur = order[a]
        for b in range(a, n):
            cur = min(cur, order[b])
            rmin[a][b] = cur
    masks = [_mask(a) for a in inst.antichains]
    for a in range(n):
        for b in range(a + 1, n):
            r, s = order[a], order[b]
            ar, as_ = inst.antichains[r - 1], inst.antichains[s - 1]
            off = _core_offense(p, ar, as_)
            if off:
                out.append(Violation("P6", (r, s) + off, "dominated pair is not a core"))
            edges = [
                (x, y) for x in ar for y in as_ if p.lt(x, y)
            ]
            for t_pos in range(a, b + 1):
                t = order[t_pos]
                upper_valid = rmin[t_pos][b] == t
                lower_valid = rmin[a][t_pos] == t
                if not (upper_valid or lower_valid):
                    continue
                tmask = masks[t - 1]
                for x, y in edges:
                    through = (p.up_mask[x] | (1 << x)) & (p.down_mask[y] | (1 << y)) & tmask
                    if not through:
                        if upper_valid:
                            out.append(
                                Violation("P7s", (r, s, t, x, y), "no middle vertex in earliest layer of the upper interval")
                            )
                        if lower_valid:
                            out.append(
                                Violation("P7p", (r, s, t, x, y), "no middle vertex in earliest layer of the lower interval")
                            )
    return Verdict(tuple(out))


def ladder_bound_check(inst: RegularInstance) -> tuple[int, bool]:
    """Largest induced ladder in the instance poset, searched up to
    2w^2 + 1 rungs; ok when it stays at or below 2w^2."""
    cap = 2 * inst.w * inst.w + 1
    m, _ = find_max_ladder(inst.poset, cap=cap)
    return m, m <= 2 * inst.w * inst.w
