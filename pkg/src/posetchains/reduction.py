"""On-line reduction of general width-w inputs to regular instances.

A CompositeColorer splits the arriving vertices in two: vertices whose
arrival keeps the tracked subset below width w are recursively handled
by a width-(w-1) colorer; every other vertex is captured inside a fresh
maximum antichain of the prefix.  The captured antichains, relabeled as
disjoint blocks, are rebuilt into a regular instance on-line (relations
first restricted to the product order of poset order and antichain
domination, then thinned to forced matching edges between neighboring
blocks plus their transitive consequences), and First-Fit on that
instance supplies the colors.

Every structural claim the construction relies on is re-checked at run
time when ``check`` is enabled; violations raise ReductionInvariantError.
"""

from __future__ import annotations

import numpy as np

from .chains import max_antichain, max_bipartite_matching, perfect_matching_with_edge, width
from .online import ChainPartition, OnlineInstance, WidthExceededError, run_online
from .poset import Poset, PosetError, bits
from .regular import RegularInstance

__all__ = [
    "ReductionInvariantError",
    "CompositeColorer",
    "composite_color",
]


class ReductionInvariantError(PosetError):
    """A structural invariant of the reduction failed at run time."""


class CompositeColorer:
    """On-line colorer for inputs of declared width ``width_bound``.

    Emits global colors (level - 1) * color_cap + local, where level is
    the width handled by the machinery that colored the vertex and local
    is its First-Fit color there.  ``color_cap`` must exceed every local
    color used; the wrapper ``composite_color`` sizes it from the
    instance.
    """

    def __init__(self, width_bound: int, color_cap: int = 1024, check: bool = True):
        if width_bound < 1:
            raise PosetError("width bound must be >= 1")
        self.w = width_bound
        self.color_cap = color_cap
        self.check = check
        self.xbar: list[int] = []
        self.child: CompositeColorer | None = None
        # captured antichains, in creation order
        self.antichains: list[tuple[int, ...]] = []
        self.triggers: list[int] = []
        self.sorted_blocks: list[int] = []  # creation indices, domination-ascending
        self.s_of: list[int | None] = []
        self.p_of: list[int | None] = []
        # labeled points (vertex, block); block b owns points w*b .. w*b+w-1
        self.points: list[tuple[int, int]] = []
        self.up_u: list[int] = []
        self.dn_u: list[int] = []
        self.up_r: list[int] = []
        self.dn_r: list[int] = []
        self.ff_classes: list[int] = []
        self.point_color: list[int] = []

    # -- OnlineColorer contract ---------------------------------------------

    def place(self, prefix: Poset) -> int:
        v = prefix.n - 1
        sub = prefix.induced(self.xbar + [v])
        wsub = width(sub)
        if wsub > self.w:
            raise WidthExceededError(
                f"prefix width {wsub} exceeds declared bound {self.w}"
            )
        if wsub < self.w:
            self.xbar.append(v)
            if self.child is None:
                self.child = CompositeColorer(self.w - 1, self.color_cap, self.check)
            return self.child.place(prefix.induced(self.xbar))
        return self._place_regular(prefix, v)

    # -- regular path ---------------------------------------------------------

    def _place_regular(self, prefix: Poset, v: int) -> int:
        w = self.w
        a_i = self._capture_antichain(prefix, v)
        bi = len(self.antichains)
        self.antichains.append(a_i)
        self.triggers.append(v)
        self._insert_sorted(prefix, bi)
        self._extend_product_order(prefix, bi)
        self._extend_thinned_order(bi)
        if self.check:
            self._check_step(prefix, bi)
        local = self._first_fit_block(bi, v)
        if local >= self.color_cap:
            raise ReductionInvariantError(
                f"local color {local} reached color_cap {self.color_cap}"
            )
        return (self.w - 1) * self.color_cap + local

    def _capture_antichain(self, prefix: Poset, v: int) -> tuple[int, ...]:
        """A_i: the lattice combination of the nearest captured antichains
        around v and a maximum antichain through v."""
        w = self.w
        inc = [u for u in self.xbar if prefix.incomparable(u, v)]
        sub = prefix.induced(inc)
        a_x = tuple(sorted([inc[t] for t in max_antichain(sub)] + [v]))
        if len(a_x) != w:
            raise ReductionInvariantError(
                f"antichain through the trigger has size {len(a_x)}, want {w}"
            )
        a_d = a_x
        for b in reversed(self.sorted_blocks):
            if any(prefix.lt(a, v) for a in self.antichains[b]):
                a_d = self.antichains[b]
                break
        a_u = a_x
        for b in self.sorted_blocks:
            if any(prefix.lt(v, a) for a in self.antichains[b]):
                a_u = self.antichains[b]
                break
        meet = prefix.minimals_of(set(a_u) | set(a_x))
        a_i = tuple(sorted(prefix.maximals_of(set(a_d) | set(meet))))
        if len(a_i) != w or not prefix.is_antichain(a_i):
            raise ReductionInvariantError("captured layer is not a w-antichain")
        if v not in a_i:
            raise ReductionInvariantError("captured layer misses its trigger")
        if a_i in self.antichains:
            raise ReductionInvariantError("captured layer repeats an earlier one")
        return a_i

    def _dominated(self, prefix: Poset, a: tuple[int, ...], b: tuple[int, ...]) -> bool:
        bmask = 0
        for x in b:
            bmask |= 1 << x
        return all((prefix.up_mask[x] | (1 << x)) & bmask for x in a)

    def _insert_sorted(self, prefix: Poset, bi: int) -> None:
        a_i = self.antichains[bi]
        below = above = 0
        pos = len(self.sorted_blocks)
        for t, b in enumerate(self.sorted_blocks):
            other = self.antichains[b]
            if self._dominated(prefix, other, a_i):
                below += 1
            elif self._dominated(prefix, a_i, other):
                above += 1
                pos = min(pos, t)
            else:
                raise ReductionInvariantError(
                    f"captured layers {b} and {bi} are domination-incomparable"
                )
        if below + above != len(self.sorted_blocks) or below != pos:
            raise ReductionInvariantError("captured layers lost linearity")
        self.sorted_blocks.insert(pos, bi)
        self.p_of.append(self.sorted_blocks[pos - 1] if pos > 0 else None)
        self.s_of.append(
            self.sorted_blocks[pos + 1] if pos + 1 < len(self.sorted_blocks) else None
        )

    def _block_points(self, b: int) -> range:
        return range(self.w * b, self.w * (b + 1))

    def _extend_product_order(self, prefix: Poset, bi: int) -> None:
        """Product of poset order and block domination, on labeled points."""
        pos = {b: t for t, b in enumerate(self.sorted_blocks)}
        new_pts = []
        for u in self.antichains[bi]:
            self.points.append((u, bi))
            self.up_u.append(0)
            self.dn_u.append(0)
            self.up_r.append(0)
            self.dn_r.append(0)
            new_pts.append(len(self.points) - 1)
        for a in new_pts:
            u, _ = self.points[a]
            for q in range(new_pts[0]):
                x, bj = self.points[q]
                if pos[bi] < pos[bj] and prefix.le(u, x):
                    self.up_u[a] |= 1 << q
                    self.dn_u[q] |= 1 << a
                elif pos[bj] < pos[bi] and prefix.le(x, u):
                    self.dn_u[a] |= 1 << q
                    self.up_u[q] |= 1 << a

    def _forced_edges(
        self, low: range, high: range, up_masks: list[int]
    ) -> list[tuple[int, int]] | None:
        """Cross comparabilities of the balanced block pair that lie in some
        perfect matching; None when no perfect matching exists at all."""
        w = self.w
        lo = list(low)
        hi = list(high)
        adj = [
            [j for j, b in enumerate(hi) if (up_masks[a] >> b) & 1] for a in lo
        ]
        match_l, _ = max_bipartite_matching(w, w, adj)
        if sum(1 for x in match_l if x is not None) != w:
            return None
        out = []
        for i in range(w):
            for j in adj[i]:
                if perfect_matching_with_edge(w, adj, (i, j)):
                    out.append((lo[i], hi[j]))
        return out

    def _extend_thinned_order(self, bi: int) -> None:
        """Keep only forced matching edges toward the neighboring blocks,
        then whatever transitivity forces through them."""
        new = list(self._block_points(bi))
        s, p = self.s_of[bi], self.p_of[bi]
        if s is not None:
            edges = self._forced_edges(self._block_points(bi), self._block_points(s), self.up_u)
            if edges is None:
                raise ReductionInvariantError(
                    f"blocks {bi},{s} admit no perfect matching"
                )
            for a, b in edges:
                self.up_r[a] |= 1 << b
                self.dn_r[b] |= 1 << a
        if p is not None:
            edges = self._forced_edges(self._block_points(p), self._block_points(bi), self.up_u)
            if edges is None:
                raise ReductionInvariantError(
                    f"blocks {p},{bi} admit no perfect matching"
                )
            for b, a in edges:
                self.dn_r[a] |= 1 << b
                self.up_r[b] |= 1 << a
        for a in new:
            up_ext = 0
            for b in bits(self.up_r[a]):
                up_ext |= self.up_r[b]
            dn_ext = 0
            for b in bits(self.dn_r[a]):
                dn_ext |= self.dn_r[b]
            self.up_r[a] |= up_ext
            self.dn_r[a] |= dn_ext
            abit = 1 << a
            for z in bits(up_ext):
                self.dn_r[z] |= abit
            for z in bits(dn_ext):
                self.up_r[z] |= abit

    def _first_fit_block(self, bi: int, v: int) -> int:
        local = 0
        for a in self._block_points(bi):
            comp = self.up_r[a] | self.dn_r[a]
            for j, members in enumerate(self.ff_classes):
                if members & ~comp == 0:
                    self.ff_classes[j] |= 1 << a
                    self.point_color.append(j + 1)
                    break
            else:
                self.ff_classes.append(1 << a)
                self.point_color.append(len(self.ff_classes))
            if self.points[a][0] == v:
                local = self.point_color[a]
        if not local:
            raise ReductionInvariantError("trigger point missing from its block")
        return local

    # -- runtime invariant suite ----------------------------------------------

    def _check_step(self, prefix: Poset, bi: int) -> None:
        w = self.w
        npts = len(self.points)
        if width(prefix) != w:
            raise ReductionInvariantError("prefix width drifted from the bound")
        # the thinned order stays inside the product order
        for a in range(npts):
            if self.up_r[a] & ~self.up_u[a] or self.dn_r[a] & ~self.dn_u[a]:
                raise ReductionInvariantError("thinned order escaped the product order")
        # blocks are antichains of the product order
        for b in range(len(self.antichains)):
            for a in self._block_points(b):
                blockmask = 0
                for q in self._block_points(b):
                    if q != a:
                        blockmask |= 1 << q
                if (self.up_u[a] | self.dn_u[a]) & blockmask:
                    raise ReductionInvariantError("block is not an antichain")
        # product order has width w: glue perfect matchings along the
        # domination order into a w-chain cover
        for t in range(len(self.sorted_blocks) - 1):
            lo, hi = self.sorted_blocks[t], self.sorted_blocks[t + 1]
            lo_pts, hi_pts = list(self._block_points(lo)), list(self._block_points(hi))
            adj = [
                [j for j, b in enumerate(hi_pts) if (self.up_u[a] >> b) & 1]
                for a in lo_pts
            ]
            match_l, _ = max_bipartite_matching(w, w, adj)
            if sum(1 for x in match_l if x is not None) != w:
                raise ReductionInvariantError(
                    "no perfect matching between domination-consecutive blocks"
                )
        # the thinned order is transitively closed and antisymmetric
        mat = np.zeros((npts, npts), dtype=bool)
        for a in range(npts):
            for z in bits(self.up_r[a]):
                mat[a, z] = True
        if (mat & mat.T).any():
            raise ReductionInvariantError("thinned order not antisymmetric")
        step = (mat.astype(np.uint8) @ mat.astype(np.uint8)) > 0
        if (step & ~mat).any():
            raise ReductionInvariantError("thinned order not transitively closed")
        # neighbor pairs are cores under the thinned order
        s, p = self.s_of[bi], self.p_of[bi]
        for pair in ((bi, s), (p, bi)):
            lo, hi = pair
            if lo is None or hi is None:
                continue
            lo_pts, hi_pts = list(self._block_points(lo)), list(self._block_points(hi))
            adj = [
                [j for j, b in enumerate(hi_pts) if (self.up_r[a] >> b) & 1]
                for a in lo_pts
            ]
            for i in range(w):
                if not adj[i]:
                    raise ReductionInvariantError("thinned core lost a matching edge")
                for j in adj[i]:
                    if not perfect_matching_with_edge(w, adj, (i, j)):
                        raise ReductionInvariantError(
                            "thinned cross edge outside every perfect matching"
                        )
        # color transfer stays sound: thinned order implies poset order
        for a in range(npts):
            u, _ = self.points[a]
            for z in bits(self.up_r[a]):
                x, _ = self.points[z]
                if not prefix.le(u, x):
                    raise ReductionInvariantError("thinned order violates poset order")

    # -- emissions --------------------------------------------------------------

    def regular_instance(self) -> RegularInstance | None:
        """The regular instance built at this level, if any block exists."""
        if not self.antichains:
            return None
        npts = len(self.points)
        less = np.zeros((npts, npts), dtype=bool)
        for a in range(npts):
            for z in bits(self.up_r[a]):
                less[a, z] = True
        p = Poset(less)
        blocks = tuple(
            tuple(self._block_points(b)) for b in range(len(self.antichains))
        )
        return RegularInstance(p, blocks, self.w)

    def regular_instances(self) -> dict[int, RegularInstance]:
        """Per-level emissions, keyed by the level's width."""
        out: dict[int, RegularInstance] = {}
        node: CompositeColorer | None = self
        while node is not None:
            inst = node.regular_instance()
            if inst is not None:
                out[node.w] = inst
            node = node.child
        return out

    def xbar_trace(self) -> dict[int, list[int]]:
        """Per-level captured-subset contents (vertex ids of each level's
        own prefix view)."""
        out: dict[int, list[int]] = {}
        node: CompositeColorer | None = self
        while node is not None:
            out[node.w] = list(node.xbar)
            node = node.child
        return out


def composite_color(
    instance: OnlineInstance, *, check: bool = True
) -> ChainPartition:
    """Run the reduction pipeline over the instance and return the final
    chain partition (validity is enforced move by move)."""
    cap = max(2, instance.poset.n * max(instance.width_bound, 1) + 1)
    colorer = CompositeColorer(instance.width_bound, color_cap=cap, check=check)
    return run_online(colorer, instance)
