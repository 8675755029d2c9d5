"""Exact minimum-clustering search and the Hex-lemma path finder.

The engine is a depth-first branch-and-bound over vertices in a fixed order
(descending degree, then id).  Monochromatic components of the partial
assignment live in a union-find with an undo stack; each root also owns a
circular member list so a component can be walked after a merge.  A
partial component never shrinks, so any component reaching the current
limit cuts the branch.  The inner loop is compiled with numba.
"""
from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from numba import njit, objmode

from .colouring import Colouring, evaluate
from .families import FramedGrid
from .graph import Graph

EXACT, BOUND_ONLY, EXHAUSTED = "exact", "bound_only", "exhausted_budget"


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int = 20_000_000
    time_limit: float = 300.0
    symmetry: bool = True

    def __post_init__(self):
        if self.max_nodes <= 0 or self.time_limit <= 0:
            raise ValueError("budget limits must be positive")


@dataclass
class SearchOutcome:
    status: str
    min_clustering: int | None
    witness: Colouring | None
    nodes_explored: int
    lower_bound: int = 0
    upper_bound: int | None = None

    def to_dict(self) -> dict:
        return {"status": self.status, "min_clustering": self.min_clustering,
                "lower_bound": self.lower_bound, "upper_bound": self.upper_bound,
                "nodes_explored": self.nodes_explored,
                "witness": self.witness.to_dict() if self.witness else None}


class BudgetExceeded(Exception):
    pass


def branch_order(g: Graph) -> list[int]:
    deg = g.degrees().tolist()
    return sorted(range(g.n), key=lambda v: (-deg[v], v))


_FOUND, _NONE, _OVER = 1, 0, -1


@njit(cache=True)
def _find(parent, x):
    while parent[x] != x:
        x = parent[x]
    return x


@njit(cache=True)
def _viable(u, indptr, indices, colour, parent, size, c, top, limit, cost, rmark, stamp, out):
    """Colours in ``0..top-1`` that ``u`` can take without reaching ``limit``,
    cheapest first; returns how many were written to ``out``."""
    for x in range(c):
        cost[x] = 1
    stamp[0] += 1
    s = stamp[0]
    for k in range(indptr[u], indptr[u + 1]):
        w = indices[k]
        x = colour[w]
        if x >= 0:
            r = _find(parent, w)
            if rmark[r] != s:
                rmark[r] = s
                cost[x] += size[r]
    cnt = 0
    for x in range(top):
        if cost[x] < limit:
            # insertion by cost, ties by colour
            j = cnt
            while j > 0 and cost[out[j - 1]] > cost[x]:
                out[j] = out[j - 1]
                j -= 1
            out[j] = x
            cnt += 1
    return cnt


@njit(cache=True)
def _assign(u, x, indptr, indices, colour, parent, size, nxt, trail, tops, ma, mb):
    # tops: [trail top, merge top, colours in use]
    colour[u] = x
    trail[tops[0]] = u
    tops[0] += 1
    if x >= tops[2]:
        tops[2] = x + 1
    for k in range(indptr[u], indptr[u + 1]):
        w = indices[k]
        if colour[w] == x:
            a = _find(parent, w)
            b = _find(parent, u)
            if a != b:
                if size[a] > size[b]:
                    a, b = b, a
                parent[a] = b
                size[b] += size[a]
                t = nxt[a]
                nxt[a] = nxt[b]
                nxt[b] = t
                ma[tops[1]] = a
                mb[tops[1]] = b
                tops[1] += 1
    return _find(parent, u)


@njit(cache=True)
def _undo(tmark, mmark, used, colour, parent, size, nxt, trail, tops, ma, mb):
    while tops[1] > mmark:
        tops[1] -= 1
        a = ma[tops[1]]
        b = mb[tops[1]]
        size[b] -= size[a]
        parent[a] = a
        t = nxt[a]
        nxt[a] = nxt[b]
        nxt[b] = t
    while tops[0] > tmark:
        tops[0] -= 1
        colour[trail[tops[0]]] = -1
    tops[2] = used


@njit(cache=True)
def _decide(indptr, indices, n, c, limit, symmetry, max_nodes, deadline, nodes):
    """Is there a ``c``-colouring with every monochromatic component below
    ``limit``?  Returns (status, nodes, colours by position)."""
    colour = np.full(n, -1, np.int64)
    parent = np.arange(n)
    size = np.ones(n, np.int64)
    nxt = np.arange(n)
    trail = np.zeros(n, np.int64)
    ma = np.zeros(n, np.int64)
    mb = np.zeros(n, np.int64)
    tops = np.zeros(3, np.int64)
    cost = np.zeros(c, np.int64)
    rmark = np.zeros(n, np.int64)
    stamp = np.zeros(1, np.int64)
    chk = np.zeros(n, np.int64)
    chk_stamp = 0
    scratch = np.zeros(c, np.int64)
    pending = np.zeros(n + 1, np.int64)
    forced = np.zeros(n, np.int64)
    lv = np.zeros(n, np.int64)
    lt = np.zeros(n, np.int64)
    lm = np.zeros(n, np.int64)
    lu = np.zeros(n, np.int64)
    lk = np.zeros(n, np.int64)
    ln = np.zeros(n, np.int64)
    lopt = np.zeros((n, c), np.int64)

    d = 0
    start = 0
    while True:
        # open a branching level at the first unassigned vertex
        i = start
        while i < n and colour[i] >= 0:
            i += 1
        if i == n:
            return _FOUND, nodes, colour
        nodes += 1
        if nodes > max_nodes:
            return _OVER, nodes, colour
        if nodes & 4095 == 0:
            with objmode(now="float64"):
                now = time.monotonic()
            if now > deadline:
                return _OVER, nodes, colour
        top = min(c, tops[2] + 1) if symmetry else c
        k = _viable(i, indptr, indices, colour, parent, size, c, top, limit,
                    cost, rmark, stamp, scratch)
        lv[d] = i
        lt[d] = tops[0]
        lm[d] = tops[1]
        lu[d] = tops[2]
        lk[d] = 0
        ln[d] = k
        for j in range(k):
            lopt[d, j] = scratch[j]

        descended = False
        while not descended:
            if lk[d] == ln[d]:
                d -= 1
                if d < 0:
                    return _NONE, nodes, colour
                _undo(lt[d], lm[d], lu[d], colour, parent, size, nxt, trail, tops, ma, mb)
                continue
            x = lopt[d, lk[d]]
            lk[d] += 1
            root = _assign(lv[d], x, indptr, indices, colour, parent, size, nxt,
                           trail, tops, ma, mb)
            # settle: wipe-out check on the grown component's frontier, then
            # assign every vertex left with a single option
            ok = True
            pending[0] = root
            ptop = 1
            while ok and ptop > 0:
                ptop -= 1
                r = _find(parent, pending[ptop])
                chk_stamp += 1
                nf = 0
                m = r
                while True:
                    for q in range(indptr[m], indptr[m + 1]):
                        u = indices[q]
                        if colour[u] < 0 and chk[u] != chk_stamp:
                            chk[u] = chk_stamp
                            top = min(c, tops[2] + 1) if symmetry else c
                            kk = _viable(u, indptr, indices, colour, parent, size, c, top,
                                         limit, cost, rmark, stamp, scratch)
                            if kk == 0:
                                ok = False
                                break
                            if kk == 1:
                                forced[nf] = u
                                nf += 1
                    if not ok:
                        break
                    m = nxt[m]
                    if m == r:
                        break
                for f in range(nf):
                    if not ok:
                        break
                    u = forced[f]
                    if colour[u] >= 0:
                        continue
                    top = min(c, tops[2] + 1) if symmetry else c
                    kk = _viable(u, indptr, indices, colour, parent, size, c, top,
                                 limit, cost, rmark, stamp, scratch)
                    if kk == 0:
                        ok = False
                        break
                    pending[ptop] = _assign(u, scratch[0], indptr, indices, colour, parent,
                                            size, nxt, trail, tops, ma, mb)
                    ptop += 1
            if ok:
                start = lv[d] + 1
                d += 1
                descended = True
            else:
                _undo(lt[d], lm[d], lu[d], colour, parent, size, nxt, trail, tops, ma, mb)


class _Engine:
    """Decision search: is there a ``c``-colouring whose monochromatic
    components all have fewer than ``limit`` vertices?

    Branching follows :func:`branch_order`.  After each choice the unassigned
    neighbours of the grown component are checked: one with no colour left
    cuts the branch, one with a single colour left gets it immediately.
    """

    def __init__(self, g: Graph, c: int, budget: SearchBudget):
        self.g = g
        self.c = c
        self.budget = budget
        self.order = np.asarray(branch_order(g), dtype=np.int64)
        pos = np.empty(g.n, dtype=np.int64)
        pos[self.order] = np.arange(g.n)
        e = g.edges
        if g.n:
            a = sp.coo_matrix((np.ones(2 * len(e)), (np.r_[pos[e[:, 0]], pos[e[:, 1]]],
                                                       np.r_[pos[e[:, 1]], pos[e[:, 0]]])),
                              shape=(g.n, g.n)).tocsr()
            a.sort_indices()
            self.indptr = a.indptr.astype(np.int64)
            self.indices = a.indices.astype(np.int64)
        self.nodes = 0
        self.deadline = time.monotonic() + budget.time_limit

    def decide(self, limit: int) -> list[int] | None:
        """Colours by vertex, or ``None`` if no colouring beats ``limit``."""
        n = self.g.n
        if n == 0:
            return []
        if limit <= 1:
            return None
        status, self.nodes, colour = _decide(
            self.indptr, self.indices, n, self.c, limit, self.budget.symmetry,
            self.budget.max_nodes, self.deadline, self.nodes)
        if status == _OVER:
            raise BudgetExceeded
        if status == _NONE:
            return None
        out = np.empty(n, dtype=np.int64)
        out[self.order] = colour
        return out.tolist()


def _greedy(g: Graph, c: int) -> Colouring:
    """Assign each vertex (in branch order) the colour giving the smallest
    component so far."""
    order = branch_order(g)
    colour = [-1] * g.n
    parent = list(range(g.n))
    size = [1] * g.n

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    adj = g.adj
    for v in order:
        best = None
        for x in range(c):
            roots = {find(u) for u in adj[v] if colour[u] == x}
            total = 1 + sum(size[r] for r in roots)
            if best is None or total < best[0]:
                best = (total, x, roots)
        _, x, roots = best
        colour[v] = x
        for r in roots:
            a, b = find(v), r
            if a != b:
                parent[a] = b
                size[b] += size[a]
    return Colouring(c, tuple(colour))


def min_clustering(g: Graph, c: int, budget: SearchBudget | None = None) -> SearchOutcome:
    """Minimum clustering over all ``c``-colourings of ``g``.

    Limits are tried in increasing order, so a budget overrun still leaves a
    proven lower bound; a greedy colouring supplies the starting upper bound.
    """
    if c < 1:
        raise ValueError("need at least one colour")
    budget = budget or SearchBudget()
    if g.n == 0:
        return SearchOutcome(EXACT, 0, Colouring(c, ()), 0, 0, 0)
    engine = _Engine(g, c, budget)
    witness = _greedy(g, c)
    upper = evaluate(g, witness).clustering
    lower = 1
    try:
        for limit in range(2, upper + 1):
            found = engine.decide(limit)
            if found is not None:
                witness = Colouring(c, tuple(found))
                upper = evaluate(g, witness).clustering
                break
            lower = limit
    except BudgetExceeded:
        status = BOUND_ONLY if lower > 1 else EXHAUSTED
        return SearchOutcome(status, None, witness, engine.nodes, lower, upper)
    assert evaluate(g, witness).clustering == upper
    return SearchOutcome(EXACT, upper, witness, engine.nodes, upper, upper)


@dataclass
class BelowAnswer:
    """Answer to "is there a ``c``-colouring with clustering below ``k``?".

    ``answer`` is ``"yes"``, ``"no"`` or ``"exhausted"``.
    """

    answer: str
    witness: Colouring | None = None
    nodes_explored: int = 0

    def __bool__(self):
        return self.answer == "yes"


def exists_below(g: Graph, c: int, k: int, budget: SearchBudget | None = None) -> BelowAnswer:
    if k < 1:
        raise ValueError("k must be at least 1")
    budget = budget or SearchBudget()
    engine = _Engine(g, c, budget)
    try:
        found = engine.decide(k)
    except BudgetExceeded:
        return BelowAnswer("exhausted", None, engine.nodes)
    if found is None:
        return BelowAnswer("no", None, engine.nodes)
    witness = Colouring(c, tuple(found))
    if evaluate(g, witness).clustering >= k:
        raise AssertionError("search returned a witness that does not beat k")
    return BelowAnswer("yes", witness, engine.nodes)


# -- Hex lemma -----------------------------------------------------------------

class HexLemmaViolation(RuntimeError):
    """No monochromatic terminal path was found; the input or the code is broken."""


def _mono_path(g: Graph, colours, src: int, dst: int) -> list[int] | None:
    want = colours[src]
    if colours[dst] != want:
        return None
    back = {src: None}
    queue = deque([src])
    adj = g.adj
    while queue:
        x = queue.popleft()
        if x == dst:
            path = []
            while x is not None:
                path.append(x)
                x = back[x]
            return path[::-1]
        for y in adj[x]:
            if y not in back and colours[y] == want:
                back[y] = x
                queue.append(y)
    return None


def hex_check(fg: FramedGrid, col) -> tuple[str, list[int]]:
    """Monochromatic ``a``–``c`` path (tried first) or ``b``–``d`` path.

    Returns ``("ac", path)`` or ``("bd", path)``.
    """
    colours = col.assignment if isinstance(col, Colouring) else tuple(col)
    if len(colours) != fg.graph.n:
        raise ValueError("colouring must cover the framed grid")
    if not set(colours) <= {0, 1}:
        raise ValueError("hex_check needs a 2-colouring with colours 0 and 1")
    if colours[fg.a] != colours[fg.c] or colours[fg.b] != colours[fg.d]:
        raise ValueError("terminals must satisfy col(a)=col(c) and col(b)=col(d)")
    path = _mono_path(fg.graph, colours, fg.a, fg.c)
    if path is not None:
        return "ac", path
    path = _mono_path(fg.graph, colours, fg.b, fg.d)
    if path is not None:
        return "bd", path
    raise HexLemmaViolation("no monochromatic a-c or b-d path")


def framed_colouring(fg: FramedGrid, interior, ac: int, bd: int) -> Colouring:
    """Combine an interior 2-colouring with terminal colours."""
    colours = list(interior) + [0, 0, 0, 0]
    colours[fg.a] = colours[fg.c] = ac
    colours[fg.b] = colours[fg.d] = bd
    return Colouring(2, tuple(colours))
