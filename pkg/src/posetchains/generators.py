"""Explicit adversarial and structural constructions.

All generators are pure functions of their parameters.  Vertex numbering
conventions are documented per generator and relied on by tests.
"""

from __future__ import annotations

import math

import numpy as np

from .ladder import LadderEmbedding
from .online import GrundyColoring, OnlineInstance
from .poset import Poset, PosetError, lex_product, transitive_closure
from .regular import RegularInstance

__all__ = [
    "BadKError",
    "SizeCapError",
    "gen_Rn",
    "gen_ladder",
    "gen_core",
    "gen_regular_with_ladder",
    "gen_Qk",
    "ff_upper_bound",
    "reduction_chain_bound",
]


class BadKError(PosetError):
    """Core parameter k outside 1..w."""


class SizeCapError(PosetError):
    """A generated poset would exceed the configured size cap."""


def _rn_id(k: int, i: int) -> int:
    """Vertex id of the i-th element (from the top) of the k-th chain;
    chains are laid out in presentation order, bottom-up inside a chain,
    so ids equal presentation positions."""
    return k * (k - 1) // 2 + (k - i)


def gen_Rn(n: int) -> OnlineInstance:
    """The width-2 escalator family that forces First-Fit to n chains.

    Chain k (k = 1..n) holds elements indexed i = k..1 bottom-up.  Every
    element of chain k lies above all of chains 1..k-2, and above exactly
    the bottom part of chain k-1 down to index i; the top i-1 elements of
    chain k-1 stay incomparable.  Presented chain by chain, bottom-up,
    First-Fit gives the element with index i the color i.
    """
    if n < 1:
        raise PosetError("n must be >= 1")
    size = n * (n + 1) // 2
    less = np.zeros((size, size), dtype=bool)
    for k in range(1, n + 1):
        for i in range(1, k + 1):
            vid = _rn_id(k, i)
            # within the chain: smaller index = higher element
            for j in range(1, i):
                less[vid, _rn_id(k, j)] = True
            # everything in chains 1..k-2 lies below
            for kk in range(1, k - 1):
                for jj in range(1, kk + 1):
                    less[_rn_id(kk, jj), vid] = True
            # the previous chain from its bottom up to index i lies below
            for jj in range(i, k):
                less[_rn_id(k - 1, jj), vid] = True
    p = Poset(transitive_closure(less), _trusted=True)
    return OnlineInstance(p, tuple(range(size)), 2 if n >= 2 else 1)


def rn_vertex(k: int, i: int) -> int:
    """Public accessor for the id of chain-k element with index i."""
    return _rn_id(k, i)


def gen_ladder(m: int) -> Poset:
    """The 2m-vertex ladder: lower leg ids 0..m-1, upper leg ids m..2m-1,
    low_i below high_j exactly when i <= j."""
    if m < 1:
        raise PosetError("m must be >= 1")
    less = np.zeros((2 * m, 2 * m), dtype=bool)
    for i in range(m):
        for j in range(i + 1, m):
            less[i, j] = True
            less[m + i, m + j] = True
        for j in range(i, m):
            less[i, m + j] = True
    return Poset(less, _trusted=True)


def core_edges(kind: str, w: int, k: int = 1) -> set[tuple[int, int]]:
    """Cross edges (i, j) meaning lower_i below upper_j, 1-based.

    "I" is the plain perfect matching.  "S" adds a bottom hub: lower_1
    below upper_1..upper_k, plus the staircase lower_i below upper_{i-1}
    for i = 2..k.  "T" is its order dual: upper_w above lower_{w-k+1}..
    lower_w, staircase lower_i below upper_{i-1} for i = w-k+2..w.
    """
    if kind not in ("I", "S", "T"):
        raise PosetError(f"unknown core kind {kind!r}")
    if kind != "I" and not (1 <= k <= w):
        raise BadKError(f"k={k} outside 1..{w}")
    edges = {(i, i) for i in range(1, w + 1)}
    if kind == "S":
        edges |= {(1, j) for j in range(1, k + 1)}
        edges |= {(i, i - 1) for i in range(2, k + 1)}
    elif kind == "T":
        edges |= {(i, w) for i in range(w - k + 1, w + 1)}
        edges |= {(i, i - 1) for i in range(w - k + 2, w + 1)}
    return edges


def gen_core(kind: str, w: int, k: int = 1) -> Poset:
    """Bipartite core on two w-antichains: lower ids 0..w-1, upper ids
    w..2w-1, cross comparabilities per ``core_edges``."""
    less = np.zeros((2 * w, 2 * w), dtype=bool)
    for i, j in core_edges(kind, w, k):
        less[i - 1, w + j - 1] = True
    return Poset(less, _trusted=True)


def _single_block_relations(w: int) -> list[tuple[int, int, str, int]]:
    """Typed core pattern between antichain layers of one block.

    Entries (lower_layer, upper_layer, kind, k); layers are 1..2w+1 in
    presentation order.  Layer 2 opens below layer 1; layers 3..w+1 are
    stacked under layer 1 with matchings between consecutive new layers;
    layer w+2 opens above layer 1; layers w+3..2w+1 stack under layer w+2
    the same way.  The domination order ends up
    2, 3, ..., w+1, 1, 2w+1, 2w, ..., w+2 from bottom to top.
    """
    rels: list[tuple[int, int, str, int]] = [(2, 1, "S", w)]
    for i in range(3, w + 2):
        rels.append((i, 1, "S", w - i + 2))
        rels.append((i - 1, i, "I", 1))
    rels.append((1, w + 2, "T", w))
    for i in range(w + 3, 2 * w + 2):
        rels.append((i, i - 1, "I", 1))
        rels.append((1, i, "T", 2 * w - i + 2))
    return rels


def gen_regular_with_ladder(w: int) -> tuple[RegularInstance, LadderEmbedding]:
    """Regular instance of width w containing an induced ladder with
    w * floor((w+2)/2) rungs, plus the explicit rung witness.

    Built from floor((w+2)/2) copies of a (2w+1)-layer block; the top
    layer of each copy is matched identically to the bottom layer of the
    next, and the whole relation is closed transitively.  In copy c the
    rung (c-1)*w + i pairs the first point of layer i+1 with the w-th
    point of layer 2w+2-i.
    """
    if w < 2:
        raise PosetError("w must be >= 2")
    layers = 2 * w + 1
    h = (w + 2) // 2
    n = h * layers * w

    def vid(copy: int, layer: int, pos: int) -> int:
        # copy 1..h, layer 1..2w+1 (presentation order), pos 1..w
        return ((copy - 1) * layers + (layer - 1)) * w + (pos - 1)

    less = np.zeros((n, n), dtype=bool)
    for c in range(1, h + 1):
        for lo, hi, kind, k in _single_block_relations(w):
            for i, j in core_edges(kind, w, k):
                less[vid(c, lo, i), vid(c, hi, j)] = True
    for c in range(1, h):
        for i in range(1, w + 1):
            # top layer of copy c sits identically below bottom layer of c+1
            less[vid(c, w + 2, i), vid(c + 1, 2, i)] = True
    p = Poset(transitive_closure(less), _trusted=True)
    antichains = tuple(
        tuple(vid(c, l, i) for i in range(1, w + 1))
        for c in range(1, h + 1)
        for l in range(1, layers + 1)
    )
    rungs = tuple(
        (vid(c, i + 1, 1), vid(c, 2 * w + 2 - i, w))
        for c in range(1, h + 1)
        for i in range(1, w + 1)
    )
    return RegularInstance(p, antichains, w), LadderEmbedding(rungs)


def _escalator_with_bottom(m: int) -> tuple[Poset, GrundyColoring]:
    """The escalator on m-1 chains extended with a global bottom vertex,
    together with its (m-1)-color First-Fit outcome (bottom gets color 1)."""
    from .online import first_fit

    inst = gen_Rn(m - 1)
    r = inst.poset
    n = r.n + 1
    less = np.zeros((n, n), dtype=bool)
    less[: r.n, : r.n] = r.less
    less[n - 1, : r.n] = True  # new bottom below everything
    p = Poset(less, _trusted=True)
    base = first_fit(inst)
    color = base.color + (1,)
    return p, GrundyColoring(color, base.n_colors)


def gen_Qk(
    m: int,
    k: int,
    size_cap: int = 20_000,
    pad_to_width: int | None = None,
) -> tuple[Poset, GrundyColoring]:
    """Ladder-free lower-bound family: the k-th lexicographic power of the
    bottomed escalator, with its product Grundy coloring.

    The coloring combines an (m-1)-coloring f of the outer factor with the
    inner coloring g via (f - 1) * n_inner + g, which multiplies the color
    count by m-1 per power.  Width doubles per power (2^k total).
    """
    if m < 2 or k < 0:
        raise PosetError("need m >= 2 and k >= 0")
    base_size = 1 + (m - 1) * m // 2
    if base_size**k > size_cap:
        raise SizeCapError(f"{base_size}^{k} vertices exceeds cap {size_cap}")
    q = Poset(np.zeros((1, 1), dtype=bool), _trusted=True)
    g = GrundyColoring((1,), 1)
    if k > 0:
        outer, f = _escalator_with_bottom(m)
        for _ in range(k):
            nq = q.n
            prod = lex_product(outer, q)
            color = [0] * prod.n
            for a in range(outer.n):
                for b in range(nq):
                    color[a * nq + b] = (f.color[a] - 1) * g.n_colors + g.color[b]
            q, g = prod, GrundyColoring(tuple(color), f.n_colors * g.n_colors)
    if pad_to_width is not None:
        have = 2**k
        if pad_to_width < have:
            raise PosetError(f"cannot pad below intrinsic width {have}")
        extra = pad_to_width - have
        if extra:
            n = q.n + extra
            less = np.zeros((n, n), dtype=bool)
            less[: q.n, : q.n] = q.less
            q = Poset(less, _trusted=True)
            # isolated vertices take fresh top colors, one class each
            color = list(g.color) + [g.n_colors + t + 1 for t in range(extra)]
            g = GrundyColoring(tuple(color), g.n_colors + extra)
    return q, g


def ff_upper_bound(m: int, w: int) -> float:
    """Closed-form worst-case bound for First-Fit on ladder-free posets:
    w ** (2.5 lg(2w) + 2 lg m)."""
    if m < 2 or w < 1:
        raise PosetError("need m >= 2 and w >= 1")
    return float(w) ** (2.5 * math.log2(2 * w) + 2.0 * math.log2(m))


def reduction_chain_bound(w: int) -> float:
    """Bound for the full pipeline on width-w inputs: w levels, each
    First-Fit on a (2w^2+1)-ladder-free regular poset."""
    if w < 1:
        raise PosetError("need w >= 1")
    return w * ff_upper_bound(2 * w * w + 1, w)
