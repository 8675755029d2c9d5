"""Acceptance criteria 1-10.  Each test records a PASS/FAIL line that is
printed in the terminal summary."""
from __future__ import annotations

import math
import random
import time

import numpy as np

from conftest import naive_report, random_graph, record

from clusterprod.cli import SweepSpec, hex_sweep, run_sweep
from clusterprod.colouring import Colouring, check_certificate, evaluate, grid_isoperimetry_audit
from clusterprod.decomp import balanced_separator
from clusterprod.families import cone, cycle, fan, path
from clusterprod.graph import Graph, cartesian_product, connected_components, strong_product
from clusterprod.search import SearchBudget, exists_below, min_clustering
from clusterprod.upper import (ProductInstance, c_colour_tw, clique_blowup, fanfan_four_colouring,
                               product_colouring, project_colouring, row_decomposition,
                               three_colour_product, two_colour_product)
from clusterprod.upper import GREEN


def test_1_fan_lower_bound():
    start = time.perf_counter()
    values = {}
    for n in range(1, 17):
        out = min_clustering(fan(n), 2)
        assert out.status == "exact"
        values[n] = out.min_clustering
    elapsed = time.perf_counter() - start
    ok = all(values[n] >= math.isqrt(n) for n in values) and elapsed < 10
    record(1, ok, f"min_clustering(F_n, 2) for n=1..16: {list(values.values())}, {elapsed:.2f}s")
    assert ok


def _corpus_runs(label, g1, d1, g2, d2):
    inst = ProductInstance(g1, d1, g2, d2)
    g = inst.product
    rd = row_decomposition(d1, g2.n)
    runs = [("two_colour_product", g, *two_colour_product(inst)),
            ("three_colour_product", g, *three_colour_product(inst))]
    for c in (2, 3):
        runs.append((f"c_colour_tw c={c} factor", g1, *c_colour_tw(g1, d1, c)))
        runs.append((f"c_colour_tw c={c} product", g, *c_colour_tw(g, rd, c)))
    for c in (4, 9):
        runs.append((f"product_colouring c={c}", g, *product_colouring(inst, c)))
    col1, _ = c_colour_tw(g1, d1, 2)
    runs.append(("project_colouring", g, *project_colouring(inst, col1)))
    for l in (2, 3):
        blown = strong_product(g1, Graph(l, [(i, j) for i in range(l) for j in range(i + 1, l)]))
        runs.append((f"clique_blowup l={l}", blown, *clique_blowup(g1, col1, l)))
    return runs


def test_2_certificate_compliance(corpus):
    assert len(corpus) >= 200
    bad = []
    total = 0
    for label, g1, d1, g2, d2 in corpus:
        assert g1.n * g2.n <= 5000
        for name, g, col, cert in _corpus_runs(label, g1, d1, g2, d2):
            total += 1
            check = check_certificate(evaluate(g, col), cert)
            if not (check.passed and cert.certified):
                bad.append((label, name, check.clustering, check.bound))
    record(2, not bad, f"{total} runs over {len(corpus)} instances, {len(bad)} violations")
    assert not bad


def test_3_balanced_separator(corpus):
    bad = []
    total = 0
    for label, g1, d1, g2, d2 in corpus:
        g = strong_product(g1, g2)
        for h, d in ((g1, d1), (g2, d2), (g, row_decomposition(d1, g2.n))):
            t = max(d.width, 0)
            for p in (math.sqrt(h.n), h.n ** (2 / 3)):
                if p < 1:
                    continue
                res = balanced_separator(h, d, p)
                total += 1
                # recompute components independently of the result object
                keep = np.ones(h.n, dtype=bool)
                keep[list(res.separator)] = False
                biggest = max((len(c) for c in connected_components(h, keep)), default=0)
                if len(res.separator) > math.floor(p) or biggest > (t + 1) * h.n / p:
                    bad.append((label, h.n, p))
    record(3, not bad, f"{total} separators, {len(bad)} violations")
    assert not bad


def test_4_explicit_four_colouring():
    values = {}
    greens = {}
    elapsed6 = None
    for n in range(2, 7):
        start = time.perf_counter()
        g, col = fanfan_four_colouring(n)
        rep = evaluate(g, col)
        if n == 6:
            elapsed6 = time.perf_counter() - start
        values[n] = rep.clustering
        greens[n] = rep.per_colour_max[GREEN]
    ok = (all(values[n] <= 7 * n * n for n in values)
          and all(greens[n] == (n + 2) ** 2 for n in (4, 5, 6))
          and elapsed6 < 30)
    record(4, ok, f"clustering {values}, green max {greens}, n=6 in {elapsed6:.2f}s")
    assert ok


def test_5_hex_exhaustive():
    # hex_sweep raises on any failure; it covers all four terminal choices
    a = hex_sweep(3, 3)
    b = hex_sweep(4, 3)
    ok = (a["interior_colourings"] == 512 and b["interior_colourings"] == 4096
          and a["failures"] == b["failures"] == 0
          and a["ac"] + a["bd"] == a["checks"] and b["ac"] + b["bd"] == b["checks"])
    record(5, ok, f"{a['checks'] + b['checks']} checks over 512 + 4096 interiors, 0 failures")
    assert ok


def test_6_product_lower_bounds():
    lines = []
    ok = True
    out = min_clustering(strong_product(fan(4), path(2)), 2)
    ok &= out.status == "exact" and out.min_clustering >= 2
    lines.append(f"F4*P2: {out.min_clustering}")
    for n in (4, 5, 6):
        out = min_clustering(strong_product(fan(n), fan(n)), 3)
        need = math.ceil((1 - 1 / math.sqrt(2)) * n)
        ok &= out.status == "exact" and out.min_clustering >= need
        lines.append(f"F{n}*F{n}: {out.min_clustering} >= {need} ({out.nodes_explored} nodes)")
    record(6, ok, "; ".join(lines))
    assert ok


def test_7_cone_composition():
    # H = C_5, c = 2, k = 2
    h = cycle(5)
    premise1 = exists_below(h, 2, 2).answer == "no"
    concl1 = exists_below(cone(1, h), 3, 2).answer == "no"
    # H = F_9, c = 2, k = 3: premise from the oracle, then cone(2 F_9)
    h2 = fan(9)
    premise2 = exists_below(h2, 2, 3).answer == "no"
    concl2 = exists_below(cone(2, h2), 3, 3).answer == "no"
    # not vacuous: one more colour does get below 3
    sharp2 = exists_below(cone(2, h2), 4, 3).answer == "yes"
    ok = premise1 and concl1 and premise2 and concl2 and sharp2
    record(7, ok, f"C5: premise {premise1}, cone {concl1}; F9,k=3: premise {premise2}, "
                  f"cone {concl2}")
    assert ok


def test_8_oracle_equivalences():
    rng = random.Random(8)
    mismatches = 0
    for _ in range(1000):
        n = rng.randint(0, 20)
        c = rng.randint(1, 4)
        g = random_graph(rng, n, rng.random())
        colours = [rng.randrange(c) for _ in range(n)]
        rep = evaluate(g, Colouring(c, colours))
        ref = naive_report(n, g.edges.tolist(), colours, c)
        if (rep.clustering, rep.per_colour_max, rep.component_census) != ref:
            mismatches += 1
    sym_diff = 0
    graphs = 0
    for _ in range(150):
        n = rng.randint(1, 12)
        g = random_graph(rng, n, rng.choice((0.2, 0.4, 0.6, 0.9)))
        for c in (1, 2, 3):
            a = min_clustering(g, c, SearchBudget(symmetry=True))
            b = min_clustering(g, c, SearchBudget(symmetry=False))
            graphs += 1
            if a.min_clustering != b.min_clustering or a.status != b.status:
                sym_diff += 1
    ok = mismatches == 0 and sym_diff == 0
    record(8, ok, f"evaluator: {mismatches}/1000 mismatches; symmetry: {sym_diff}/{graphs} differ")
    assert ok


def test_9_exponent_fits():
    sweeps = [
        SweepSpec(("fan:{m*m}", "path:{m}"), "two_colour_product", (2, 3, 4, 5, 6, 8, 10)),
        SweepSpec(("fan:{m*m}", "path:{m}"), "three_colour_product", (2, 3, 4, 5, 6, 8, 10), 3),
        SweepSpec(("ktree:n={40*m},t=2,seed=5",), "c_colour_tw", (1, 2, 4, 8, 16), 2),
        SweepSpec(("ktree:n={40*m},t=2,seed=5",), "c_colour_tw", (1, 2, 4, 8, 16), 3),
        SweepSpec(("ktree:n={10*m},t=1,seed=1", "ktree:n={10*m},t=1,seed=2"),
                  "product_colouring", (1, 2, 3, 4, 6), 4),
        SweepSpec(("ktree:n={10*m},t=1,seed=1", "ktree:n={10*m},t=1,seed=2"),
                  "product_colouring", (1, 2, 3, 4, 6), 9),
    ]
    details = []
    ok = True
    for spec in sweeps:
        res = run_sweep(spec)
        good = res.deviation is not None and res.deviation <= 0.01
        good &= all(r["clustering"] <= r["bound"] for r in res.rows)
        ok &= good
        details.append(f"{spec.algorithm}(c={spec.colours}) {res.exponent:.4f} vs {res.expected:.4f}")
    record(9, ok, "; ".join(details))
    assert ok


def test_10_grid_isoperimetry():
    n = 12
    grid = cartesian_product(path(n), path(n))
    rng = random.Random(10)
    applicable = failures = 0
    tries = 0
    while applicable < 500:
        tries += 1
        assert tries < 200_000, "sampler could not find enough applicable instances"
        density = rng.uniform(0.3, 0.5)
        S = [v for v in range(n * n) if rng.random() < density]
        keep = np.ones(n * n, dtype=bool)
        keep[S] = False
        k = max((len(c) for c in connected_components(grid, keep)), default=0)
        k = max(k, 1) + rng.choice((0, 0, 1, 3))
        verdict = grid_isoperimetry_audit(n, S, k)
        if verdict == "not-applicable":
            continue
        applicable += 1
        failures += verdict == "fail"
    ok = failures == 0
    record(10, ok, f"{applicable} applicable instances ({tries} sampled), {failures} failures")
    assert ok
