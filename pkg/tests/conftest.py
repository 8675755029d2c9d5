"""Shared oracles and fixtures.

The reference implementations here are deliberately naive (plain BFS,
full enumeration) so they share no code with the library.
"""
from __future__ import annotations

import itertools
import random
from collections import deque

import pytest

from clusterprod.decomp import random_ktree
from clusterprod.families import fan, fan_decomposition, path, path_decomposition
from clusterprod.graph import Graph

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(criterion: int, ok: bool, detail: str = ""):
    ACCEPTANCE[criterion] = (bool(ok), detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


# -- naive references --------------------------------------------------------------

def naive_adj(n, edges):
    adj = [set() for _ in range(n)]
    for u, v in edges:
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    return adj


def naive_report(n, edges, colours, c):
    """(clustering, per-colour max, per-colour sorted sizes) by BFS."""
    adj = naive_adj(n, edges)
    seen = [False] * n
    census = [[] for _ in range(c)]
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        queue = deque([s])
        size = 0
        while queue:
            x = queue.popleft()
            size += 1
            for y in adj[x]:
                if not seen[y] and colours[y] == colours[s]:
                    seen[y] = True
                    queue.append(y)
        census[colours[s]].append(size)
    census = [tuple(sorted(sz, reverse=True)) for sz in census]
    per_max = tuple(sz[0] if sz else 0 for sz in census)
    return (max(per_max) if n else 0), per_max, tuple(census)


def naive_clustering(n, adj, colours):
    seen = [False] * n
    best = 0
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        stack = [s]
        size = 0
        while stack:
            x = stack.pop()
            size += 1
            for y in adj[x]:
                if not seen[y] and colours[y] == colours[s]:
                    seen[y] = True
                    stack.append(y)
        best = max(best, size)
    return best


def brute_min_clustering(g: Graph, c: int) -> int:
    """Minimum clustering by trying all ``c^n`` colourings."""
    if g.n == 0:
        return 0
    adj = naive_adj(g.n, g.edges.tolist())
    best = g.n
    for colours in itertools.product(range(c), repeat=g.n):
        best = min(best, naive_clustering(g.n, adj, colours))
        if best == 1:
            break
    return best


def naive_components(n, edges, keep):
    adj = naive_adj(n, edges)
    seen = set()
    comps = []
    for s in range(n):
        if s in seen or not keep[s]:
            continue
        seen.add(s)
        comp = [s]
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if keep[y] and y not in seen:
                    seen.add(y)
                    comp.append(y)
                    queue.append(y)
        comps.append(sorted(comp))
    return comps


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


# -- instance corpus ----------------------------------------------------------------

def build_corpus():
    """Factor pairs ``(label, g1, d1, g2, d2)`` with product size at most 5000."""
    corpus = []
    for t in (1, 2, 3):
        for n1, n2 in ((8, 8), (15, 12), (25, 25), (40, 35), (60, 50), (70, 70)):
            for seed in range(10):
                g1, d1 = random_ktree(n1, t, 1000 * t + 10 * seed)
                g2, d2 = random_ktree(n2, t, 1000 * t + 10 * seed + 1)
                corpus.append((f"ktree t={t} {n1}x{n2} s={seed}", g1, d1, g2, d2))
    for m in range(2, 14):
        corpus.append((f"fan({m * m})*P{m}", fan(m * m), fan_decomposition(m * m),
                       path(m), path_decomposition(m)))
    for a, b in ((3, 5), (10, 3), (30, 20), (50, 60), (99, 40), (200, 10), (7, 400)):
        corpus.append((f"fan({a})*P{b}", fan(a), fan_decomposition(a), path(b),
                       path_decomposition(b)))
    for a, b in ((2, 2), (3, 3), (4, 4), (5, 5), (6, 6), (8, 5), (10, 10), (12, 20),
                 (20, 20), (25, 30), (30, 30), (40, 40), (50, 50), (60, 60), (69, 69),
                 (3, 99), (100, 20)):
        corpus.append((f"fan({a})*fan({b})", fan(a), fan_decomposition(a), fan(b),
                       fan_decomposition(b)))
    return corpus


@pytest.fixture(scope="session")
def corpus():
    return build_corpus()
