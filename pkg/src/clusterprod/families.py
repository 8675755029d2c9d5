"""Builders for the graph families used by the colouring results.

Vertex numbering conventions:

* ``fan(n)``: vertex 0 dominates the base path ``1..n``.
* ``cone(m, g)``: copy ``i`` occupies ``i*|V(g)| .. (i+1)*|V(g)|-1``, apex last.
* ``framed_grid(r, c)``: grid vertex ``(i, j)`` is ``i*c + j`` (row 0 on top),
  then the four apexes ``a`` (top), ``b`` (right), ``c`` (bottom), ``d`` (left).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .decomp import (TreeDecomposition, path_decomposition_of_bags, random_ktree,
                     trivial_decomposition, validate_decomposition)
from .graph import Graph, VertexLabel, disjoint_union, strong_product

KINDS = ("path", "complete", "cycle", "fan", "cone", "h_tower", "g_tower", "c_tower",
         "framed_grid", "ktree", "product")


def path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)], [VertexLabel()] * n)


def path_decomposition(n: int) -> TreeDecomposition:
    if n <= 1:
        return path_decomposition_of_bags([frozenset(range(n))])
    return path_decomposition_of_bags([{i, i + 1} for i in range(n - 1)])


def complete(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)], [VertexLabel()] * n)


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)], [VertexLabel()] * n)


def cycle_decomposition(n: int) -> TreeDecomposition:
    return path_decomposition_of_bags([{0, i, i + 1} for i in range(1, n - 1)])


def fan(n: int) -> Graph:
    """Fan ``F_n``: path ``1..n`` plus dominant vertex 0."""
    if n < 1:
        raise ValueError("fan needs n >= 1")
    edges = [(0, i) for i in range(1, n + 1)] + [(i, i + 1) for i in range(1, n)]
    labels = [VertexLabel("dominant")] + [VertexLabel()] * n
    return Graph(n + 1, edges, labels)


def fan_decomposition(n: int) -> TreeDecomposition:
    """Width-2 path decomposition with bags ``{0, i, i+1}``; ``fan(1)`` gets one bag."""
    if n < 1:
        raise ValueError("fan needs n >= 1")
    if n == 1:
        return path_decomposition_of_bags([{0, 1}])
    return path_decomposition_of_bags([{0, i, i + 1} for i in range(1, n)])


def cone(m: int, g: Graph) -> Graph:
    """``m`` disjoint copies of ``g`` plus an apex (last vertex) adjacent to all."""
    if m < 1:
        raise ValueError("cone needs m >= 1")
    union, _ = disjoint_union([g] * m)
    apex = union.n
    edges = list(map(tuple, union.edges.tolist())) + [(v, apex) for v in range(apex)]
    labels = list(union.labels) if union.labels is not None else [VertexLabel()] * apex
    labels.append(VertexLabel("apex"))
    return Graph(apex + 1, edges, labels)


def cone_decomposition(m: int, g: Graph, d: TreeDecomposition) -> TreeDecomposition:
    """Apex added to every bag of every copy; copy trees hang off copy 0's node 0."""
    if not isinstance(validate_decomposition(g, d), int):
        raise ValueError("input decomposition is not valid for g")
    apex = m * g.n
    k = d.tree.n
    bags = []
    tree_edges = []
    for i in range(m):
        bags.extend(frozenset(v + i * g.n for v in b) | {apex} for b in d.bags)
        tree_edges.extend((u + i * k, v + i * k) for u, v in d.tree.edges.tolist())
        if i:
            tree_edges.append((0, i * k))
    return TreeDecomposition(Graph(m * k, tree_edges), tuple(bags))


def h_tower(n: int) -> tuple[Graph, TreeDecomposition]:
    """``H_n``: cone over ``n^2`` copies of ``F_{n^4}``; width 3."""
    if n < 1:
        raise ValueError("h_tower needs n >= 1")
    f = fan(n ** 4)
    return cone(n * n, f), cone_decomposition(n * n, f, fan_decomposition(n ** 4))


def g_tower(c: int, n: int, k: int) -> tuple[Graph, TreeDecomposition]:
    """``G_2 = H_n`` and ``G_{c+1}`` = cone over ``k-1`` copies of ``G_c``."""
    if c < 2 or n < 1:
        raise ValueError("g_tower needs c >= 2 and n >= 1")
    if not 2 <= k <= n ** 3:
        raise ValueError("g_tower needs 2 <= k <= n^3")
    g, d = h_tower(n)
    for _ in range(c - 2):
        g, d = cone(k - 1, g), cone_decomposition(k - 1, g, d)
    return g, d


def g_tower_order(c: int, n: int, k: int) -> int:
    base = n * n * (n ** 4 + 1) + 1
    return (k - 1) ** (c - 2) * base + sum((k - 1) ** i for i in range(c - 2))


def c_tower(t: int, n: int) -> tuple[Graph, TreeDecomposition]:
    """``C_{1,n} = K_1`` and ``C_{t,n}`` = cone over ``n`` copies of ``C_{t-1,n}``."""
    if t < 1 or n < 1:
        raise ValueError("c_tower needs t, n >= 1")
    g = Graph(1, (), [VertexLabel()])
    d = trivial_decomposition(g)
    for _ in range(t - 1):
        g, d = cone(n, g), cone_decomposition(n, g, d)
    return g, d


@dataclass(frozen=True)
class FramedGrid:
    graph: Graph
    rows: int
    cols: int
    a: int
    b: int
    c: int
    d: int

    @property
    def interior(self) -> range:
        return range(self.rows * self.cols)


def framed_grid(rows: int, cols: int) -> FramedGrid:
    """Triangulated ``rows x cols`` grid with an apex over each side.

    Every cell gets the diagonal from its lower-left to its upper-right corner.
    Apexes ``a``/``c`` sit over the top/bottom rows, ``b``/``d`` over the
    right/left columns, and the outer cycle is ``(a, b, c, d)``.
    """
    if rows < 2 or cols < 2:
        raise ValueError("framed_grid needs both sides >= 2")

    def vid(i, j):
        return i * cols + j

    edges = []
    for i in range(rows):
        for j in range(cols):
            if j + 1 < cols:
                edges.append((vid(i, j), vid(i, j + 1)))
            if i + 1 < rows:
                edges.append((vid(i, j), vid(i + 1, j)))
            if i + 1 < rows and j + 1 < cols:
                edges.append((vid(i + 1, j), vid(i, j + 1)))
    a, b, c, d = (rows * cols + k for k in range(4))
    edges += [(a, vid(0, j)) for j in range(cols)]
    edges += [(c, vid(rows - 1, j)) for j in range(cols)]
    edges += [(b, vid(i, cols - 1)) for i in range(rows)]
    edges += [(d, vid(i, 0)) for i in range(rows)]
    edges += [(a, b), (b, c), (c, d), (d, a)]
    labels = [VertexLabel("plain", ((0, i), (1, j))) for i in range(rows) for j in range(cols)]
    labels += [VertexLabel("apex")] * 4
    return FramedGrid(Graph(rows * cols + 4, edges, labels), rows, cols, a, b, c, d)


def _mark_product_roles(g: Graph, n2: int, rule) -> Graph:
    labels = list(g.labels)
    for v in range(g.n):
        role = rule(*divmod(v, n2))
        if role != "plain":
            labels[v] = VertexLabel(role, labels[v].coords)
    return g.with_labels(labels)


def fan_path(n: int) -> Graph:
    """``F_{n^2} ⊠ P_n`` with the copies of the fan's dominant vertex tagged ``spine``."""
    g = strong_product(fan(n * n), path(n))
    return _mark_product_roles(g, n, lambda u, v: "spine" if u == 0 else "plain")


def h_path(n: int) -> Graph:
    """``H_n ⊠ P_n``: apex copies tagged ``spine``, fan-dominant copies ``top``."""
    h, _ = h_tower(n)
    apex = h.n - 1
    roles = [h.role(u) for u in range(h.n)]

    def rule(u, v):
        if u == apex:
            return "spine"
        return "top" if roles[u] == "dominant" else "plain"

    return _mark_product_roles(strong_product(h, path(n)), n, rule)


# -- textual family specs -----------------------------------------------------

@dataclass(frozen=True)
class FamilySpec:
    """Parsed family description, e.g. ``fan:9`` or ``gtower:c=3,n=2,k=2``."""

    kind: str
    params: dict = field(default_factory=dict)
    inner: tuple = ()

    def build(self) -> tuple[Graph, TreeDecomposition | None]:
        return build_family(self)


_ALIASES = {"htower": "h_tower", "gtower": "g_tower", "ctower": "c_tower",
            "framed": "framed_grid", "k_tree": "ktree"}


def _split_top(text: str, sep: str) -> list[str]:
    return [part.strip() for part in text.split(sep)]


def parse_family(text: str) -> FamilySpec:
    """Parse a family string.  ``A*B`` is the strong product of ``A`` and ``B``.

    >>> parse_family("cone:3,fan:4").kind
    'cone'
    """
    text = text.strip()
    if "*" in text:
        parts = _split_top(text, "*")
        return FamilySpec("product", {}, tuple(parse_family(p) for p in parts))
    kind, _, rest = text.partition(":")
    kind = _ALIASES.get(kind.strip().lower(), kind.strip().lower())
    if kind not in KINDS:
        raise ValueError(f"unknown family kind {kind!r}")
    if kind == "cone":
        m, _, inner = rest.partition(",")
        if not inner:
            raise ValueError("cone spec needs 'cone:m,<family>'")
        return FamilySpec("cone", {"m": int(m)}, (parse_family(inner),))
    if kind == "framed_grid":
        match = re.fullmatch(r"\s*(\d+)\s*x\s*(\d+)\s*", rest)
        if not match:
            raise ValueError("framed spec needs 'framed:RxC'")
        return FamilySpec(kind, {"rows": int(match[1]), "cols": int(match[2])})
    params = {}
    positional = []
    for item in filter(None, (s.strip() for s in rest.split(","))):
        if "=" in item:
            key, val = item.split("=", 1)
            params[key.strip()] = int(val)
        else:
            positional.append(int(item))
    defaults = {"path": ["n"], "complete": ["n"], "cycle": ["n"], "fan": ["n"],
                "h_tower": ["n"], "g_tower": ["c", "n", "k"], "c_tower": ["t", "n"],
                "ktree": ["n", "t", "seed"]}[kind]
    for key, val in zip(defaults, positional):
        params.setdefault(key, val)
    missing = [k for k in defaults if k not in params and k != "seed"]
    if missing:
        raise ValueError(f"{kind} spec is missing {missing}")
    for key, val in params.items():
        if val < 1 and key != "seed" and not (kind == "ktree" and key == "t"):
            raise ValueError(f"{kind}: parameter {key} must be positive")
    return FamilySpec(kind, params)


def build_family(spec: FamilySpec) -> tuple[Graph, TreeDecomposition | None]:
    """Build a family together with its structural decomposition."""
    p = spec.params
    kind = spec.kind
    if kind == "path":
        return path(p["n"]), path_decomposition(p["n"])
    if kind == "complete":
        g = complete(p["n"])
        return g, trivial_decomposition(g)
    if kind == "cycle":
        return cycle(p["n"]), cycle_decomposition(p["n"])
    if kind == "fan":
        return fan(p["n"]), fan_decomposition(p["n"])
    if kind == "cone":
        g, d = build_family(spec.inner[0])
        if d is None:
            d = trivial_decomposition(g)
        return cone(p["m"], g), cone_decomposition(p["m"], g, d)
    if kind == "h_tower":
        return h_tower(p["n"])
    if kind == "g_tower":
        return g_tower(p["c"], p["n"], p["k"])
    if kind == "c_tower":
        return c_tower(p["t"], p["n"])
    if kind == "ktree":
        return random_ktree(p["n"], p["t"], p.get("seed", 0))
    if kind == "framed_grid":
        return framed_grid(p["rows"], p["cols"]).graph, None
    if kind == "product":
        g, _ = build_family(spec.inner[0])
        for part in spec.inner[1:]:
            h, _ = build_family(part)
            g = strong_product(g, h)
        return g, None
    raise ValueError(f"unknown family kind {kind!r}")
