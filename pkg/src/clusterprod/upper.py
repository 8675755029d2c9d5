"""Constructive upper-bound colourings of strong products.

Every algorithm returns ``(Colouring, BoundCertificate)``; the certificate
carries the clustering bound the construction guarantees.  Product vertex
``(u, v)`` of ``g1 ⊠ g2`` has id ``u * |V(g2)| + v``.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .colouring import BoundCertificate, Colouring, evaluate, pipeline_constant
from .decomp import (SeparatorResult, TreeDecomposition, balanced_separator,
                     induced_decomposition, validate_decomposition)
from .graph import Graph, connected_components, induced_subgraph, strong_product
from .families import complete, fan


class ProductInstance:
    """``g1 ⊠ g2`` together with decompositions of both factors.

    ``t`` defaults to the larger of the two widths.
    """

    def __init__(self, g1: Graph, d1: TreeDecomposition, g2: Graph, d2: TreeDecomposition,
                 t: int | None = None, check: bool = True):
        if check:
            for g, d in ((g1, d1), (g2, d2)):
                res = validate_decomposition(g, d)
                if not isinstance(res, int):
                    raise ValueError(f"invalid decomposition: {res.message}")
        self.g1, self.d1, self.g2, self.d2 = g1, d1, g2, d2
        self.t = max(d1.width, d2.width, 0) if t is None else t
        self._product = None

    @property
    def n1(self) -> int:
        return self.g1.n

    @property
    def n2(self) -> int:
        return self.g2.n

    @property
    def n(self) -> int:
        return self.g1.n * self.g2.n

    @property
    def product(self) -> Graph:
        if self._product is None:
            self._product = strong_product(self.g1, self.g2)
        return self._product

    def sub(self, vs1, vs2) -> "ProductInstance":
        g1, _ = induced_subgraph(self.g1, vs1)
        g2, _ = induced_subgraph(self.g2, vs2)
        return ProductInstance(g1, induced_decomposition(self.g1, self.d1, vs1),
                               g2, induced_decomposition(self.g2, self.d2, vs2),
                               t=self.t, check=False)


def row_decomposition(d1: TreeDecomposition, n2: int) -> TreeDecomposition:
    """Decomposition of ``g1 ⊠ g2`` with bags ``B × V(g2)`` on the tree of ``d1``.

    Width is ``(t1 + 1) n2 - 1``; valid for any ``g2`` on ``n2`` vertices.
    """
    bags = tuple(frozenset(u * n2 + v for u in bag for v in range(n2)) for bag in d1.bags)
    return TreeDecomposition(d1.tree, bags)


def _separate(g: Graph, d: TreeDecomposition, p: float) -> SeparatorResult:
    # budgets below 1 still admit S = {} since then (t+1)n/p > n
    if p < 1:
        t = max(d.width, 0)
        return SeparatorResult(frozenset(), p, (t + 1) * g.n / p if p > 0 else math.inf,
                               connected_components(g), t)
    return balanced_separator(g, d, p)


def _cross_mask(n1: int, n2: int, s1, s2) -> np.ndarray:
    mask = np.zeros((n1, n2), dtype=bool)
    if s1:
        mask[sorted(s1), :] = True
    if s2:
        mask[:, sorted(s2)] = True
    return mask


def _two_colour_grid(g1, d1, g2, d2, t) -> tuple[np.ndarray, SeparatorResult, SeparatorResult]:
    n1, n2 = g1.n, g2.n
    n = n1 * n2
    if n == 0:
        return np.zeros((n1, n2), dtype=bool), None, None
    scale = (t + 1) ** (2 / 3) / n ** (1 / 3)
    r1 = _separate(g1, d1, scale * n1)
    r2 = _separate(g2, d2, scale * n2)
    return _cross_mask(n1, n2, r1.separator, r2.separator), r1, r2


def two_colour_product(inst: ProductInstance) -> tuple[Colouring, BoundCertificate]:
    """Blue on ``(S1 x V2) ∪ (V1 x S2)`` for balanced separators ``S_i``, red elsewhere.

    Colour 1 is blue, colour 0 red.
    """
    blue, r1, r2 = _two_colour_grid(inst.g1, inst.d1, inst.g2, inst.d2, inst.t)
    col = Colouring.from_array(2, blue.astype(np.int64).ravel())
    cert = BoundCertificate.make(
        "two_colour_product", {"t": inst.t, "n": inst.n, "n1": inst.n1, "n2": inst.n2},
        S1=sorted(r1.separator) if r1 else [], S2=sorted(r2.separator) if r2 else [],
        X_size=int(blue.sum()))
    return col, cert


def three_colour_product(inst: ProductInstance) -> tuple[Colouring, BoundCertificate]:
    """Colour 2 on the separator cross ``X``; each ``Y1 ⊠ Y2`` block of
    ``G - X`` is 2-coloured with :func:`two_colour_product`."""
    n1, n2, n, t = inst.n1, inst.n2, inst.n, inst.t
    colours = np.full((n1, n2), 2, dtype=np.int64)
    if n == 0:
        return Colouring.from_array(3, colours.ravel()), BoundCertificate.make(
            "three_colour_product", {"t": t, "n": n, "n1": n1, "n2": n2})
    scale = (t + 1) ** (6 / 7) / n ** (3 / 7)
    r1 = _separate(inst.g1, inst.d1, scale * n1)
    r2 = _separate(inst.g2, inst.d2, scale * n2)
    side1 = [_factor_piece(inst.g1, inst.d1, comp) for comp in r1.components]
    side2 = [_factor_piece(inst.g2, inst.d2, comp) for comp in r2.components]
    blocks = 0
    for ids1, g1, d1 in side1:
        for ids2, g2, d2 in side2:
            blue, _, _ = _two_colour_grid(g1, d1, g2, d2, t)
            colours[np.ix_(ids1, ids2)] = blue.astype(np.int64)
            blocks += 1
    col = Colouring.from_array(3, colours.ravel())
    cert = BoundCertificate.make(
        "three_colour_product", {"t": t, "n": n, "n1": n1, "n2": n2},
        S1=sorted(r1.separator), S2=sorted(r2.separator), blocks=blocks)
    return col, cert


def _factor_piece(g, d, comp):
    sub, old = induced_subgraph(g, comp)
    return old, sub, induced_decomposition(g, d, comp)


def _ctw_assign(g, d, c, t, ids, out, depth, log):
    n = g.n
    if n == 0:
        return
    if c == 1:
        out[ids] = 0
        log.setdefault(0, set()).add(depth)
        return
    p = (t + 1) ** (1 / c) * n ** ((c - 1) / c)
    if p <= t + 1:
        out[ids] = c - 1
        log.setdefault(c - 1, set()).add(depth)
        return
    sep = balanced_separator(g, d, p)
    in_s = np.zeros(n, dtype=bool)
    if sep.separator:
        in_s[sorted(sep.separator)] = True
    if (~in_s).any():
        out[ids[~in_s]] = c - 1
        log.setdefault(c - 1, set()).add(depth)
    if in_s.any():
        sub, old = induced_subgraph(g, sep.separator)
        sd = induced_decomposition(g, d, sep.separator)
        _ctw_assign(sub, sd, c - 1, t, ids[old], out, depth + 1, log)


def c_colour_tw(g: Graph, d: TreeDecomposition, c: int, t: int | None = None
                ) -> tuple[Colouring, BoundCertificate]:
    """``c``-colouring with clustering at most ``(t+1)^{(c-1)/c} n^{1/c}``.

    Recursive: colour ``c-1`` goes to ``G - S`` for a separator of budget
    ``(t+1)^{1/c} n^{(c-1)/c}``, and ``G[S]`` is coloured with the remaining
    ``c-1`` colours.  Colour ``i`` is only used at recursion depth ``c-1-i``.
    """
    if c < 1:
        raise ValueError("need at least one colour")
    t = max(d.width, 0) if t is None else t
    out = np.zeros(g.n, dtype=np.int64)
    log = {}
    _ctw_assign(g, d, c, t, np.arange(g.n), out, 0, log)
    col = Colouring.from_array(c, out)
    cert = BoundCertificate.make("c_colour_tw", {"t": t, "c": c, "n": g.n},
                                 colour_depth={k: sorted(v) for k, v in log.items()})
    return col, cert


def product_colouring(inst: ProductInstance, c: int) -> tuple[Colouring, BoundCertificate]:
    """Product of ``s``-colourings of the factors, ``s = floor(sqrt(c))``;
    pair ``(a, b)`` is encoded as colour ``a*s + b``."""
    if c < 1:
        raise ValueError("need at least one colour")
    s = math.isqrt(c)
    col1, _ = c_colour_tw(inst.g1, inst.d1, s, inst.t)
    col2, _ = c_colour_tw(inst.g2, inst.d2, s, inst.t)
    grid = col1.array()[:, None] * s + col2.array()[None, :]
    col = Colouring.from_array(c, grid.ravel())
    cert = BoundCertificate.make(
        "product_colouring", {"t": inst.t, "c": c, "n": inst.n, "n1": inst.n1, "n2": inst.n2},
        s=s, k1=evaluate(inst.g1, col1).clustering, k2=evaluate(inst.g2, col2).clustering)
    return col, cert


def project_colouring(inst: ProductInstance, col1: Colouring) -> tuple[Colouring, BoundCertificate]:
    """Give ``(x, y)`` the colour of ``x``."""
    if len(col1) != inst.n1:
        raise ValueError("col1 must colour g1")
    k = evaluate(inst.g1, col1).clustering
    grid = np.repeat(col1.array(), inst.n2)
    col = Colouring.from_array(col1.colour_count, grid)
    cert = BoundCertificate.make("project_colouring",
                                 {"k": k, "n": inst.n, "n1": inst.n1, "n2": inst.n2,
                                  "c": col1.colour_count})
    return col, cert


def clique_blowup(g: Graph, col: Colouring, l: int) -> tuple[Colouring, BoundCertificate]:
    """Colouring of ``g ⊠ K_l`` in which each clique copy takes its base colour."""
    if l < 1:
        raise ValueError("clique size must be at least 1")
    k = evaluate(g, col).clustering
    blown = Colouring.from_array(col.colour_count, np.repeat(col.array(), l))
    cert = BoundCertificate.make("clique_blowup", {"k": k, "l": l, "n": g.n * l,
                                                   "c": col.colour_count})
    return blown, cert


def blowup_graph(g: Graph, l: int) -> Graph:
    return strong_product(g, complete(l))


# -- tree-partitions -----------------------------------------------------------

@dataclass(frozen=True)
class TreePartitionWitness:
    """Host vertex ``v`` lives in part ``parts[v]``, a node of ``tree``.

    ``part_size_bound`` is the largest part; ``tree_max_degree`` is ``Δ(tree)``.
    ``q_target``/``degree_target`` record ``18(t+1)Δ`` and ``6Δ``.
    """

    tree: Graph
    parts: tuple
    part_size_bound: int
    tree_max_degree: int
    q_target: int = 0
    degree_target: int = 0

    @property
    def within_targets(self) -> bool:
        return self.part_size_bound <= self.q_target and self.tree_max_degree <= self.degree_target


def singleton_witness(tree: Graph) -> TreePartitionWitness:
    """A tree partitioned into its own vertices."""
    return TreePartitionWitness(tree, tuple(range(tree.n)), 1 if tree.n else 0, tree.max_degree())


def witness_violation(g: Graph, w: TreePartitionWitness) -> str | None:
    """``None`` if ``w`` is a valid tree-partition of ``g``, else a reason."""
    if len(w.parts) != g.n:
        return "parts must cover every host vertex"
    tree = w.tree
    if tree.n and (tree.edge_count != tree.n - 1 or len(connected_components(tree)) != 1):
        return "partition graph is not a tree"
    if any(not 0 <= x < tree.n for x in w.parts):
        return "part index out of range"
    for u, v in g.edges.tolist():
        a, b = w.parts[u], w.parts[v]
        if a != b and not tree.has_edge(a, b):
            return f"edge {u}-{v} joins non-adjacent parts {a} and {b}"
    sizes = np.bincount(np.asarray(w.parts, dtype=np.int64), minlength=tree.n) if g.n else []
    if g.n and int(max(sizes)) > w.part_size_bound:
        return "a part exceeds part_size_bound"
    if tree.max_degree() > w.tree_max_degree:
        return "tree degree exceeds tree_max_degree"
    return None


def tree_partition_heuristic(g: Graph, d: TreeDecomposition | None = None,
                             delta: int | None = None) -> TreePartitionWitness:
    """BFS-layering tree-partition.

    From the smallest vertex of each component, every BFS layer ``L_i`` is
    split by the components of ``g[L_i ∪ L_{i+1} ∪ ...]``; each part hangs
    off the unique part of ``L_{i-1}`` it touches.  Component roots are
    chained together.  The achieved part size and tree degree are reported,
    not guaranteed.
    """
    n = g.n
    delta = g.max_degree() if delta is None else delta
    t = max(d.width, 0) if d is not None else 0
    adj = g.adj
    layer = [-1] * n
    order = []
    roots = []
    for r in range(n):
        if layer[r] >= 0:
            continue
        roots.append(r)
        layer[r] = 0
        queue = deque([r])
        while queue:
            x = queue.popleft()
            order.append(x)
            for y in adj[x]:
                if layer[y] < 0:
                    layer[y] = layer[x] + 1
                    queue.append(y)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    # add vertices deepest layer first; union with already-added neighbours
    added = [False] * n
    part_root = [0] * n
    by_layer = sorted(range(n), key=lambda v: -layer[v])
    i = 0
    while i < n:
        j = i
        lay = layer[by_layer[i]]
        while j < n and layer[by_layer[j]] == lay:
            v = by_layer[j]
            added[v] = True
            j += 1
        for v in by_layer[i:j]:
            for y in adj[v]:
                if added[y]:
                    a, b = find(v), find(y)
                    if a != b:
                        parent[a] = b
        for v in by_layer[i:j]:
            part_root[v] = find(v)
        i = j
    node_of = {}
    parts = [0] * n
    for v in order:
        key = (layer[v], part_root[v])
        if key not in node_of:
            node_of[key] = len(node_of)
        parts[v] = node_of[key]
    tree_edges = set()
    for u, v in g.edges.tolist():
        a, b = parts[u], parts[v]
        if a != b:
            tree_edges.add((min(a, b), max(a, b)))
    root_nodes = [parts[r] for r in roots]
    tree_edges.update(zip(root_nodes, root_nodes[1:]))
    tree = Graph(len(node_of), sorted(tree_edges))
    sizes = np.bincount(np.asarray(parts, dtype=np.int64), minlength=tree.n) if n else [0]
    return TreePartitionWitness(tree, tuple(parts), int(max(sizes)), tree.max_degree(),
                                18 * (t + 1) * delta, 6 * delta)


# -- bounded-degree pipeline ---------------------------------------------------

TreeProductOracle = Callable[[Graph, TreeDecomposition, Graph, int], Colouring]


def bounded_degree_pipeline(g1: Graph, d1: TreeDecomposition, g2: Graph,
                            witness: TreePartitionWitness, c: int,
                            oracle: TreeProductOracle | None = None, strict: bool = False,
                            delta: int | None = None, t: int | None = None
                            ) -> tuple[Colouring, BoundCertificate]:
    """``c``-colouring of ``g1 ⊠ g2`` through ``g1 ⊠ T ⊠ K_q``.

    With ``h = |V(g1)|`` and ``l = |V(T)|``: if ``h >= l^{c(c-1)}`` colour
    ``g1`` by :func:`c_colour_tw` and project over ``T`` (branch
    ``projection``).  Otherwise the tree-product colouring must come from
    ``oracle(g1, d1, T, c)``, a colouring of ``g1 ⊠ T``; without one the
    projection is used anyway and the certificate is marked uncertified
    (branch ``fallback``), or ``strict`` raises.  Either way every vertex
    ``(x, y)`` takes the colour of ``(x, parts[y])``.
    """
    if c < 2:
        raise ValueError("pipeline needs c >= 2")
    problem = witness_violation(g2, witness)
    if problem:
        raise ValueError(f"invalid tree-partition witness: {problem}")
    t = max(d1.width, 0) if t is None else t
    delta = g2.max_degree() if delta is None else delta
    h, l, q = g1.n, witness.tree.n, witness.part_size_bound
    n = g1.n * g2.n
    params = {"t": t, "c": c, "Delta": delta, "n": n, "h": h, "l": l, "q": q,
              "f": h * l}
    certified = True
    if h >= l ** (c * (c - 1)):
        branch = "projection"
    elif oracle is not None:
        branch = "oracle"
    elif strict:
        raise ValueError("tree-product oracle required for h < l^(c(c-1))")
    else:
        branch = "fallback"
        certified = False
    if branch == "oracle":
        col_f = oracle(g1, d1, witness.tree, c)
        if len(col_f) != h * l or col_f.colour_count > c:
            raise ValueError("oracle must return a c-colouring of g1 ⊠ T")
        k_f = evaluate(strong_product(g1, witness.tree), col_f).clustering
        params["kF"] = k_f
        target = (2 * (t + 1) ** ((c - 1) / c) * max(6 * delta - 1, 1) ** (c - 1)
                  * (h * l) ** (c / (c * c - c + 1)))
        certified = k_f <= target
        f_colours = col_f.array().reshape(h, l)
    else:
        col1, _ = c_colour_tw(g1, d1, c, t)
        params["k1"] = evaluate(g1, col1).clustering
        f_colours = np.repeat(col1.array()[:, None], l, axis=1)
    parts = np.asarray(witness.parts, dtype=np.int64)
    grid = f_colours[:, parts] if g2.n else np.zeros((h, 0), dtype=np.int64)
    col = Colouring.from_array(c, grid.ravel())
    params["branch"] = branch
    exponent = c / (c * c - c + 1)
    cert = BoundCertificate.make(
        "bounded_degree_pipeline", params, certified,
        asymptotic_bound=pipeline_constant(t, c, max(delta, 1)) * n ** exponent,
        exponent=exponent, q_target=18 * (t + 1) * delta, degree_target=6 * delta,
        tree_max_degree=witness.tree_max_degree)
    return col, cert


# -- explicit fan-product colourings ---------------------------------------------

def fanfan_three_colouring(n: int) -> tuple[Graph, Colouring]:
    """``F_n ⊠ F_n``: every vertex with a dominant coordinate gets colour 0;
    grid rows ``i >= 1`` alternate colours 1 (odd) and 2 (even)."""
    if n < 1:
        raise ValueError("n must be positive")
    g = strong_product(fan(n), fan(n))
    i = np.arange(n + 1)[:, None]
    j = np.arange(n + 1)[None, :]
    colours = np.where((i == 0) | (j == 0), 0, np.where(i % 2 == 1, 1, 2))
    return g, Colouring.from_array(3, colours.ravel())


RED, BLUE, GREEN, BLACK = 0, 1, 2, 3


def fanfan_four_layout(n: int) -> np.ndarray:
    """Colour grid (indexed by fan coordinates ``(i, j)``) of the 4-colouring
    of ``F_{n^3} ⊠ F_{n^3}``.

    ``(0, 0)`` is black.  Along ``X = {(0, j)}`` (blue) and ``Y = {(i, 0)}``
    (red) runs of ``n`` are separated by black triples centred on multiples
    of ``P = n + 3``.  Line ``{(i, lP)}`` is blue and line ``{(lP, j)}`` is
    red; the crossing ``(lP, l'P)`` is blue iff ``l ≡ l' (mod 2)``.
    Everything else is green.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    m = n ** 3
    period = n + 3
    lines = [l * period for l in range(1, n * n + 1) if l * period <= m]
    black = sorted({x for c in lines for x in (c - 1, c, c + 1)} & set(range(1, m + 1)))
    col = np.full((m + 1, m + 1), GREEN, dtype=np.int64)
    col[0, :] = BLUE
    col[:, 0] = RED
    col[0, black] = BLACK
    col[black, 0] = BLACK
    col[0, 0] = BLACK
    col[1:, lines] = BLUE
    col[lines, 1:] = RED
    for a, x in enumerate(lines, start=1):
        for b, y in enumerate(lines, start=1):
            col[x, y] = BLUE if a % 2 == b % 2 else RED
    return col


def fanfan_four_colouring(n: int) -> tuple[Graph, Colouring]:
    """4-colouring of ``F_{n^3} ⊠ F_{n^3}`` with clustering at most ``7n^2``."""
    layout = fanfan_four_layout(n)
    f = fan(n ** 3)
    return strong_product(f, f), Colouring.from_array(4, layout.ravel())
