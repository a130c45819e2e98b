"""Induced ladder embeddings and the exact maximum-ladder search.

An m-rung ladder is two chains x_1 < ... < x_m and y_1 < ... < y_m with
x_i < y_j exactly when i <= j and no other cross comparabilities; the
pairs (x_i, y_i) are its rungs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .poset import Poset, PosetError

__all__ = ["LadderEmbedding", "find_max_ladder"]


@dataclass(frozen=True)
class LadderEmbedding:
    """Rung list ((low_1, high_1), ..., (low_m, high_m)) witnessing an
    induced m-ladder."""

    rungs: tuple[tuple[int, int], ...]

    @property
    def m(self) -> int:
        return len(self.rungs)

    def vertices(self) -> tuple[int, ...]:
        out = []
        for lo, hi in self.rungs:
            out.extend((lo, hi))
        return tuple(out)

    def validate(self, p: Poset) -> None:
        """Check the induced subposet is exactly the ladder pattern."""
        vs = self.vertices()
        if len(set(vs)) != len(vs):
            raise PosetError("ladder vertices are not distinct")
        lows = [lo for lo, _ in self.rungs]
        highs = [hi for _, hi in self.rungs]
        m = self.m
        for i in range(m):
            if not p.lt(lows[i], highs[i]):
                raise PosetError(f"rung {i+1} is not a comparable pair")
            for j in range(i + 1, m):
                if not p.lt(lows[i], lows[j]):
                    raise PosetError(f"lower leg broken at rungs {i+1},{j+1}")
                if not p.lt(highs[i], highs[j]):
                    raise PosetError(f"upper leg broken at rungs {i+1},{j+1}")
                if not p.lt(lows[i], highs[j]):
                    raise PosetError(f"low_{i+1} must be below high_{j+1}")
                if not p.incomparable(highs[i], lows[j]):
                    raise PosetError(f"high_{i+1} must be incomparable to low_{j+1}")


def find_max_ladder(p: Poset, cap: int = 64) -> tuple[int, LadderEmbedding]:
    """Largest m <= cap such that an induced m-ladder embeds in p, plus one
    witness (m = 0 when p has no comparable pair).

    Depth-first search over rung sequences, candidates in ascending vertex
    id, so the returned witness is deterministic.  Branches are cut with
    the bound rungs_so_far + min(chain height above the new rung,
    remaining lower-leg candidates).
    """
    n = p.n
    if n == 0 or cap <= 0:
        return 0, LadderEmbedding(())
    up = p.up_mask
    incomp = p.incomp_mask
    height = p.up_height
    full = (1 << n) - 1

    best_m = 0
    best: list[tuple[int, int]] = []
    stack: list[tuple[int, int]] = []

    def extend(x_cand: int, y_floor: int, inc_highs: int) -> None:
        """x_cand: usable next lower-leg vertices (above the current lower
        leg, incomparable to every chosen high).  y_floor: vertices strictly
        above the current top high.  inc_highs: vertices incomparable to
        every chosen high."""
        nonlocal best_m, best
        k = len(stack)
        if k > best_m:
            best_m = k
            best = list(stack)
        if k >= cap:
            return
        cand = x_cand
        while cand:
            xb = cand & -cand
            x = xb.bit_length() - 1
            cand ^= xb
            if k + height[x] <= best_m:
                continue
            ys = up[x] & y_floor
            while ys:
                yb = ys & -ys
                y = yb.bit_length() - 1
                ys ^= yb
                nxt_x = up[x] & inc_highs & incomp[y]
                bound = k + 1 + min(
                    height[x] - 1, height[y] - 1, nxt_x.bit_count()
                )
                if bound <= best_m:
                    continue
                stack.append((x, y))
                extend(nxt_x, up[y], inc_highs & incomp[y])
                stack.pop()

    extend(full, full, full)
    return best_m, LadderEmbedding(tuple(best))
