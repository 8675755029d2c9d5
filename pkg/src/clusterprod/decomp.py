"""Tree-decompositions: validation, restriction, separators, random k-trees."""
from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, connected_components, induced_subgraph


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags indexed by the nodes of ``tree``."""

    tree: Graph
    bags: tuple

    def __post_init__(self):
        object.__setattr__(self, "bags", tuple(frozenset(int(v) for v in b) for b in self.bags))
        if len(self.bags) != self.tree.n:
            raise ValueError("need one bag per tree node")

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    @property
    def node_count(self) -> int:
        return self.tree.n

    def to_dict(self) -> dict:
        return {"bags": [sorted(b) for b in self.bags], "tree_edges": self.tree.edges.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "TreeDecomposition":
        bags = d["bags"]
        return cls(Graph(len(bags), d.get("tree_edges", [])), tuple(bags))

    def __eq__(self, other):
        if not isinstance(other, TreeDecomposition):
            return NotImplemented
        return self.tree == other.tree and self.bags == other.bags

    def __hash__(self):
        return hash((self.tree, self.bags))


@dataclass(frozen=True)
class Violation:
    """Why a decomposition is invalid: ``axiom`` is one of ``tree``,
    ``range``, ``edge`` or ``connectivity``."""

    axiom: str
    witness: tuple
    message: str = ""

    def __bool__(self):
        return False


def path_decomposition_of_bags(bags) -> TreeDecomposition:
    bags = list(bags)
    return TreeDecomposition(Graph(len(bags), [(i, i + 1) for i in range(len(bags) - 1)]), tuple(bags))


def trivial_decomposition(g: Graph) -> TreeDecomposition:
    return TreeDecomposition(Graph(1), (frozenset(range(g.n)),))


def _is_tree(t: Graph) -> bool:
    if t.n == 0:
        return True
    if t.edge_count != t.n - 1:
        return False
    return len(connected_components(t)) == 1


def validate_decomposition(g: Graph, d: TreeDecomposition):
    """Return the width of ``d`` if it is a tree-decomposition of ``g``,
    otherwise a falsy :class:`Violation` naming the broken axiom."""
    if not _is_tree(d.tree):
        return Violation("tree", (), "bag-node graph is not a tree")
    for x, bag in enumerate(d.bags):
        for v in bag:
            if not 0 <= v < g.n:
                return Violation("range", (x, v), f"bag {x} holds unknown vertex {v}")
    if g.n and d.tree.n == 0:
        return Violation("connectivity", (0,), "no bags")
    occ = [[] for _ in range(g.n)]
    for x, bag in enumerate(d.bags):
        for v in bag:
            occ[v].append(x)
    for u, v in g.edges.tolist():
        if not any(u in d.bags[x] for x in occ[v]):
            return Violation("edge", (u, v), f"edge {u}-{v} is in no bag")
    tadj = d.tree.adj
    for v in range(g.n):
        nodes = occ[v]
        if not nodes:
            return Violation("connectivity", (v,), f"vertex {v} is in no bag")
        inside = set(nodes)
        seen = {nodes[0]}
        queue = [nodes[0]]
        while queue:
            x = queue.pop()
            for y in tadj[x]:
                if y in inside and y not in seen:
                    seen.add(y)
                    queue.append(y)
        if len(seen) != len(inside):
            return Violation("connectivity", (v, tuple(sorted(inside - seen))),
                             f"bags holding vertex {v} are not connected in the tree")
    return d.width


def induced_decomposition(g: Graph, d: TreeDecomposition, vs) -> TreeDecomposition:
    """Restrict ``d`` to ``g[vs]``, using the re-indexing of :func:`induced_subgraph`."""
    _, old_ids = induced_subgraph(g, vs)
    new_id = {int(v): i for i, v in enumerate(old_ids)}
    bags = tuple(frozenset(new_id[v] for v in bag if v in new_id) for bag in d.bags)
    if not bags:
        bags = (frozenset(),)
        return TreeDecomposition(Graph(1), bags)
    return TreeDecomposition(d.tree, bags)


@dataclass
class SeparatorResult:
    separator: frozenset
    budget: float
    component_bound: float
    components: list = field(default_factory=list)
    width: int = 0
    bag_nodes: tuple = ()

    @property
    def size_limit(self) -> int:
        return math.floor(self.budget)

    @property
    def max_component(self) -> int:
        return max((len(c) for c in self.components), default=0)

    def holds(self) -> bool:
        return len(self.separator) <= self.size_limit and self.max_component <= self.component_bound


def balanced_separator(g: Graph, d: TreeDecomposition, p: float) -> SeparatorResult:
    """A set ``S`` of at most ``p`` vertices, each component of ``g - S``
    having at most ``(t+1)n/p`` vertices, where ``t`` is the width of ``d``.

    ``S`` is a union of bags.  The tree is rooted at node 0 and processed
    bottom-up; each vertex is charged to the highest node containing it, and
    a node is cut (its bag joins ``S``) as soon as the uncut weight below it
    exceeds the component bound.  Every cut absorbs more than ``(t+1)n/p``
    vertices, so fewer than ``p/(t+1)`` bags are taken.
    """
    if p < 1:
        raise ValueError("separator budget p must be at least 1")
    n = g.n
    t = max(d.width, 0)
    bound = (t + 1) * n / p
    whole = connected_components(g)
    if max((len(c) for c in whole), default=0) <= bound:
        return SeparatorResult(frozenset(), p, bound, whole, t, ())

    tadj = d.tree.adj
    parent = [-1] * d.tree.n
    order = []
    seen = [False] * d.tree.n
    for root in range(d.tree.n):
        if seen[root]:
            continue
        seen[root] = True
        queue = deque([root])
        while queue:
            x = queue.popleft()
            order.append(x)
            for y in tadj[x]:
                if not seen[y]:
                    seen[y] = True
                    parent[y] = x
                    queue.append(y)
    # home node: first node in BFS order whose bag holds the vertex
    home_weight = [0] * d.tree.n
    homed = [False] * n
    for x in order:
        for v in d.bags[x]:
            if not homed[v]:
                homed[v] = True
                home_weight[x] += 1

    residual = home_weight[:]
    cut = []
    for x in reversed(order):
        if residual[x] > bound:
            cut.append(x)
            residual[x] = 0
        if parent[x] >= 0:
            residual[parent[x]] += residual[x]
    cut.sort()
    sep = frozenset().union(*(d.bags[x] for x in cut)) if cut else frozenset()
    keep = np.ones(n, dtype=bool)
    if sep:
        keep[list(sep)] = False
    comps = connected_components(g, keep)
    return SeparatorResult(sep, p, bound, comps, t, tuple(cut))


def random_ktree(n: int, t: int, seed=None) -> tuple[Graph, TreeDecomposition]:
    """Random ``t``-tree on ``n`` vertices with its width-``t`` decomposition.

    Starts from ``K_{t+1}`` and attaches each new vertex to a uniformly random
    existing ``t``-clique.
    """
    if t < 0 or n < t + 1:
        raise ValueError("random_ktree needs n >= t + 1 >= 1")
    rng = random.Random(seed)
    first = tuple(range(t + 1))
    edges = [(i, j) for i in range(t + 1) for j in range(i + 1, t + 1)]
    bags = [frozenset(first)]
    tree_edges = []
    # every t-clique together with a bag node that contains it
    cliques = [(tuple(v for v in first if v != w), 0) for w in first]
    for v in range(t + 1, n):
        clique, node = cliques[rng.randrange(len(cliques))]
        edges.extend((u, v) for u in clique)
        bags.append(frozenset(clique + (v,)))
        x = len(bags) - 1
        tree_edges.append((node, x))
        for w in clique:
            cliques.append((tuple(sorted(set(clique) - {w})) + (v,), x))
    return Graph(n, edges), TreeDecomposition(Graph(len(bags), tree_edges), tuple(bags))
