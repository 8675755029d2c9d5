"""Immutable simple graphs, products and component utilities.

Vertices are the integers ``0..n-1``.  Edges are stored once, as a sorted
``(m, 2)`` integer array with ``u < v`` in every row, and the adjacency is
kept in CSR form so that neighbour lists come out sorted.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _cc

ROLES = ("plain", "dominant", "spine", "top", "apex")


@dataclass(frozen=True)
class VertexLabel:
    """Construction metadata attached to a vertex.

    ``coords`` is a tuple of ``(factor_id, factor_vertex)`` pairs, one per
    product factor the vertex came from.
    """

    role: str = "plain"
    coords: tuple = ()

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValueError(f"unknown vertex role {self.role!r}")


def _normalise_edges(n: int, edges) -> np.ndarray:
    arr = np.asarray(edges, dtype=np.int64)
    if arr.size == 0:
        return np.empty((0, 2), dtype=np.int64)
    arr = arr.reshape(-1, 2)
    if arr.min() < 0 or arr.max() >= n:
        raise ValueError("edge endpoint out of range")
    lo = np.minimum(arr[:, 0], arr[:, 1])
    hi = np.maximum(arr[:, 0], arr[:, 1])
    if np.any(lo == hi):
        raise ValueError("self-loops are not allowed")
    key = np.unique(lo * n + hi)
    out = np.empty((key.size, 2), dtype=np.int64)
    out[:, 0] = key // n
    out[:, 1] = key % n
    return out


class Graph:
    """A simple undirected graph on ``range(n)``.

    Duplicate edges are merged on construction; self-loops are rejected.
    Labels never take part in equality.
    """

    __slots__ = ("n", "edges", "labels", "_indptr", "_indices", "_adj")

    def __init__(self, n: int, edges: Iterable = (), labels: Sequence | None = None):
        n = int(n)
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        if not isinstance(edges, np.ndarray):
            edges = list(edges)
        self.n = n
        self.edges = _normalise_edges(n, edges)
        self.edges.flags.writeable = False
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != n:
                raise ValueError("need exactly one label per vertex")
        self.labels = labels
        self._indptr = None
        self._indices = None
        self._adj = None

    # -- basic accessors -------------------------------------------------
    @property
    def vertex_count(self) -> int:
        return self.n

    @property
    def edge_count(self) -> int:
        return int(self.edges.shape[0])

    def edge_list(self) -> list[tuple[int, int]]:
        return [(int(u), int(v)) for u, v in self.edges]

    def _csr(self):
        if self._indptr is None:
            u, v = self.edges[:, 0], self.edges[:, 1]
            src = np.concatenate([u, v])
            dst = np.concatenate([v, u])
            order = np.lexsort((dst, src))
            src, dst = src[order], dst[order]
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            np.add.at(indptr, src + 1, 1)
            self._indptr = np.cumsum(indptr)
            self._indices = dst
        return self._indptr, self._indices

    def neighbors(self, v: int) -> np.ndarray:
        indptr, indices = self._csr()
        return indices[indptr[v]:indptr[v + 1]]

    @property
    def adj(self) -> list[list[int]]:
        """Sorted neighbour lists as plain Python lists (cached)."""
        if self._adj is None:
            indptr, indices = self._csr()
            flat = indices.tolist()
            bounds = indptr.tolist()
            self._adj = [flat[bounds[i]:bounds[i + 1]] for i in range(self.n)]
        return self._adj

    def degrees(self) -> np.ndarray:
        indptr, _ = self._csr()
        return np.diff(indptr)

    def max_degree(self) -> int:
        return int(self.degrees().max()) if self.n else 0

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < nb.size and nb[i] == v)

    def role(self, v: int) -> str:
        return self.labels[v].role if self.labels is not None else "plain"

    def with_labels(self, labels) -> "Graph":
        g = Graph(self.n, self.edges, labels)
        return g

    # -- equality ----------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges, other.edges)

    def __hash__(self):
        return hash((self.n, self.edges.tobytes()))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.edge_count})"

    # -- serialisation -----------------------------------------------------
    def to_dict(self) -> dict:
        d = {"n": self.n, "edges": self.edges.tolist()}
        if self.labels is not None:
            d["labels"] = [
                {"role": lab.role, "coords": [list(c) for c in lab.coords]}
                for lab in self.labels
            ]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Graph":
        labels = d.get("labels")
        if labels is not None:
            labels = [
                VertexLabel(lab.get("role", "plain"),
                            tuple(tuple(c) for c in lab.get("coords", ())))
                for lab in labels
            ]
        return cls(d["n"], d.get("edges", []), labels)

    def to_dot(self, name: str = "G") -> str:
        lines = [f"graph {name} {{"]
        for v in range(self.n):
            role = self.role(v)
            attr = "" if role == "plain" else f' [label="{v}:{role}"]'
            lines.append(f"  {v}{attr};")
        for u, v in self.edges:
            lines.append(f"  {u} -- {v};")
        lines.append("}")
        return "\n".join(lines) + "\n"


# -- products ---------------------------------------------------------------

def _factor_coords(g: Graph, v: int, shift: int) -> tuple:
    if g.labels is not None and g.labels[v].coords:
        return tuple((fid + shift, x) for fid, x in g.labels[v].coords)
    return ((shift, v),)


def _product_labels(g1: Graph, g2: Graph) -> list[VertexLabel]:
    left = [_factor_coords(g1, u, 0) for u in range(g1.n)]
    width = max((len(c) for c in left), default=1)
    right = [_factor_coords(g2, v, width) for v in range(g2.n)]
    return [VertexLabel("plain", a + b) for a in left for v, b in enumerate(right)]


def _row_col_edges(g1: Graph, g2: Graph) -> list[np.ndarray]:
    n1, n2 = g1.n, g2.n
    e1, e2 = g1.edges, g2.edges
    parts = []
    if e2.size and n1:
        base = (np.arange(n1, dtype=np.int64) * n2)[:, None]
        parts.append(np.stack([(base + e2[:, 0]).ravel(), (base + e2[:, 1]).ravel()], 1))
    if e1.size and n2:
        col = np.arange(n2, dtype=np.int64)[None, :]
        parts.append(np.stack([(e1[:, 0:1] * n2 + col).ravel(),
                               (e1[:, 1:2] * n2 + col).ravel()], 1))
    return parts


def cartesian_product(g1: Graph, g2: Graph) -> Graph:
    """``g1 □ g2`` with vertex ``(u, v)`` at id ``u * |V(g2)| + v``."""
    parts = _row_col_edges(g1, g2)
    edges = np.concatenate(parts) if parts else np.empty((0, 2), dtype=np.int64)
    return Graph(g1.n * g2.n, edges, _product_labels(g1, g2))


def strong_product(g1: Graph, g2: Graph) -> Graph:
    """``g1 ⊠ g2`` with vertex ``(u, v)`` at id ``u * |V(g2)| + v`` (row-major)."""
    n2 = g2.n
    parts = _row_col_edges(g1, g2)
    e1, e2 = g1.edges, g2.edges
    if e1.size and e2.size:
        a, b = e1[:, 0:1] * n2, e1[:, 1:2] * n2
        x, y = e2[None, :, 0], e2[None, :, 1]
        parts.append(np.stack([(a + x).ravel(), (b + y).ravel()], 1))
        parts.append(np.stack([(a + y).ravel(), (b + x).ravel()], 1))
    edges = np.concatenate(parts) if parts else np.empty((0, 2), dtype=np.int64)
    return Graph(g1.n * n2, edges, _product_labels(g1, g2))


# -- components and subgraphs -------------------------------------------------

def _keep_mask(g: Graph, keep) -> np.ndarray:
    if keep is None:
        return np.ones(g.n, dtype=bool)
    if isinstance(keep, np.ndarray) and keep.dtype == bool:
        if keep.shape != (g.n,):
            raise ValueError("mask length must equal vertex count")
        return keep
    if callable(keep):
        return np.fromiter((bool(keep(v)) for v in range(g.n)), dtype=bool, count=g.n)
    mask = np.zeros(g.n, dtype=bool)
    idx = np.fromiter(keep, dtype=np.int64)
    mask[idx] = True
    return mask


def component_labels(n: int, edges: np.ndarray) -> np.ndarray:
    """Connected-component label per vertex of the graph ``(range(n), edges)``."""
    if n == 0:
        return np.empty(0, dtype=np.int64)
    m = edges.shape[0]
    mat = coo_matrix((np.ones(m, dtype=np.int8), (edges[:, 0], edges[:, 1])), shape=(n, n))
    _, labels = _cc(mat, directed=False)
    return labels


def connected_components(g: Graph, keep=None) -> list[list[int]]:
    """Components of the subgraph induced by the kept vertices.

    ``keep`` may be a predicate, a boolean mask, a vertex collection, or
    ``None`` for all vertices.  Components come back as sorted lists,
    ordered by their smallest vertex.
    """
    mask = _keep_mask(g, keep)
    e = g.edges
    sel = mask[e[:, 0]] & mask[e[:, 1]]
    labels = component_labels(g.n, e[sel])
    kept = np.flatnonzero(mask)
    if kept.size == 0:
        return []
    lab = labels[kept]
    order = np.lexsort((kept, lab))
    lab_sorted, kept_sorted = lab[order], kept[order]
    cuts = np.flatnonzero(np.diff(lab_sorted)) + 1
    comps = [c.tolist() for c in np.split(kept_sorted, cuts)]
    comps.sort(key=lambda c: c[0])
    return comps


def induced_subgraph(g: Graph, vs) -> tuple[Graph, np.ndarray]:
    """Subgraph induced by ``vs``, re-indexed densely in increasing id order.

    Returns ``(sub, old_ids)`` where ``old_ids[i]`` is the original id of new
    vertex ``i``.
    """
    old_ids = np.unique(np.fromiter(vs, dtype=np.int64)) if not isinstance(vs, np.ndarray) \
        else np.unique(vs.astype(np.int64))
    if old_ids.size and (old_ids[0] < 0 or old_ids[-1] >= g.n):
        raise ValueError("vertex id out of range")
    new_id = np.full(g.n, -1, dtype=np.int64)
    new_id[old_ids] = np.arange(old_ids.size)
    e = g.edges
    a, b = new_id[e[:, 0]], new_id[e[:, 1]]
    sel = (a >= 0) & (b >= 0)
    labels = None
    if g.labels is not None:
        labels = [g.labels[v] for v in old_ids.tolist()]
    sub = Graph(old_ids.size, np.stack([a[sel], b[sel]], 1), labels)
    return sub, old_ids


def disjoint_union(gs: Sequence[Graph]) -> tuple[Graph, list[int]]:
    """Disjoint union; ``offsets[i]`` is where copy ``i`` starts."""
    offsets = []
    total = 0
    parts = []
    labels = []
    any_labels = any(g.labels is not None for g in gs)
    for g in gs:
        offsets.append(total)
        parts.append(g.edges + total)
        if any_labels:
            labels.extend(g.labels if g.labels is not None else [VertexLabel()] * g.n)
        total += g.n
    edges = np.concatenate(parts) if parts else np.empty((0, 2), dtype=np.int64)
    return Graph(total, edges, labels if any_labels else None), offsets


def relabel(g: Graph, fn: Callable[[int, VertexLabel], VertexLabel]) -> Graph:
    labels = g.labels if g.labels is not None else [VertexLabel()] * g.n
    return Graph(g.n, g.edges, [fn(v, lab) for v, lab in enumerate(labels)])
