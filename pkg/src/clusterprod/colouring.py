"""Colourings, the clustering evaluator and bound certificates."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, cartesian_product, component_labels, connected_components

E2 = math.e ** 2


@dataclass(frozen=True)
class Colouring:
    """Assignment of colours ``0..colour_count-1``; unused colours are allowed."""

    colour_count: int
    assignment: tuple

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(int(x) for x in self.assignment))
        if self.colour_count < 1:
            raise ValueError("colour count must be at least 1")
        if any(not 0 <= x < self.colour_count for x in self.assignment):
            raise ValueError("colour out of range")

    @classmethod
    def from_array(cls, c: int, arr) -> "Colouring":
        return cls(c, tuple(np.asarray(arr).tolist()))

    def array(self) -> np.ndarray:
        return np.asarray(self.assignment, dtype=np.int64)

    def __len__(self):
        return len(self.assignment)

    def to_dict(self) -> dict:
        return {"c": self.colour_count, "colours": list(self.assignment)}

    @classmethod
    def from_dict(cls, d: dict) -> "Colouring":
        return cls(d["c"], tuple(d["colours"]))


@dataclass(frozen=True)
class ClusteringReport:
    clustering: int
    per_colour_max: tuple
    component_census: tuple  # per colour: component sizes, largest first

    def to_dict(self) -> dict:
        return {"clustering": self.clustering,
                "per_colour_max": list(self.per_colour_max),
                "component_census": [list(c) for c in self.component_census]}

    @classmethod
    def from_dict(cls, d: dict) -> "ClusteringReport":
        return cls(d["clustering"], tuple(d["per_colour_max"]),
                   tuple(tuple(c) for c in d["component_census"]))


def monochromatic_labels(g: Graph, col) -> np.ndarray:
    """Component label per vertex of the monochromatic-edge subgraph."""
    arr = col.array() if isinstance(col, Colouring) else np.asarray(col, dtype=np.int64)
    if arr.shape[0] != g.n:
        raise ValueError(f"colouring covers {arr.shape[0]} vertices, graph has {g.n}")
    e = g.edges
    same = arr[e[:, 0]] == arr[e[:, 1]]
    return component_labels(g.n, e[same])


def evaluate(g: Graph, col: Colouring) -> ClusteringReport:
    """Exact census of monochromatic components."""
    arr = col.array()
    labels = monochromatic_labels(g, col)
    c = col.colour_count
    if g.n == 0:
        return ClusteringReport(0, (0,) * c, ((),) * c)
    sizes = np.bincount(labels)
    comp_colour = np.zeros(sizes.size, dtype=np.int64)
    comp_colour[labels] = arr
    census = []
    for k in range(c):
        s = np.sort(sizes[comp_colour == k])[::-1]
        census.append(tuple(int(x) for x in s))
    per_max = tuple(s[0] if s else 0 for s in census)
    return ClusteringReport(max(per_max), per_max, tuple(census))


def clustering(g: Graph, col: Colouring) -> int:
    return evaluate(g, col).clustering


def largest_component(g: Graph, col: Colouring) -> tuple[int, list[int]]:
    """Colour and vertex list of a largest monochromatic component."""
    labels = monochromatic_labels(g, col)
    if g.n == 0:
        return 0, []
    sizes = np.bincount(labels)
    best = int(np.argmax(sizes))
    members = np.flatnonzero(labels == best).tolist()
    return col.assignment[members[0]], members


# -- certificates -----------------------------------------------------------

def _root(c):
    return math.isqrt(int(c))


def _pipeline(p):
    t, c, h, l, q = p["t"], p["c"], p["h"], p["l"], p["q"]
    branch = p["branch"]
    if branch == "projection":
        return (t + 1) ** ((c - 1) / c) * (h * l) ** (c / (c * c - c + 1)) * q
    if branch == "fallback":
        return (t + 1) ** ((c - 1) / c) * h ** (1 / c) * l * q
    if branch == "oracle":
        return p["kF"] * q
    raise ValueError(f"unknown pipeline branch {branch!r}")


def _project(p):
    if p["n2"] <= p["n1"]:
        return p["k"] * p["n"] ** 0.5
    return p["k"] * p["n2"]


def _int_params(p, keys):
    vals = [p[k] for k in keys]
    if all(isinstance(v, (int, np.integer)) and not isinstance(v, bool) for v in vals):
        return [int(v) for v in vals]
    return None


def _exact_two(k, p):
    v = _int_params(p, ("t", "n"))
    return None if v is None else k ** 3 <= 8 * ((v[0] + 1) * v[1]) ** 2


def _exact_three(k, p):
    v = _int_params(p, ("t", "n"))
    return None if v is None else k ** 7 <= 128 * (v[0] + 1) ** 6 * v[1] ** 4


def _exact_ctw(k, p):
    v = _int_params(p, ("t", "c", "n"))
    if v is None:
        return None
    t, c, n = v
    return k ** c <= (t + 1) ** (c - 1) * n


def _exact_product(k, p):
    v = _int_params(p, ("t", "c", "n"))
    if v is None:
        return None
    t, c, n = v
    s = math.isqrt(c)
    if s * s != c:
        return None
    return k ** s <= (t + 1) ** (2 * (s - 1)) * n


def _exact_project(k, p):
    v = _int_params(p, ("k", "n", "n1", "n2"))
    if v is None:
        return None
    kk, n, n1, n2 = v
    return k * k <= kk * kk * n if n2 <= n1 else k <= kk * n2


# name -> (required symbols, formula, exact test of "clustering <= bound" or None)
FORMULAS = {
    "two_colour_product": (("t", "n"), lambda p: 2 * ((p["t"] + 1) * p["n"]) ** (2 / 3),
                           _exact_two),
    "three_colour_product": (("t", "n"),
                             lambda p: 2 * (p["t"] + 1) ** (6 / 7) * p["n"] ** (4 / 7),
                             _exact_three),
    "c_colour_tw": (("t", "c", "n"),
                    lambda p: (p["t"] + 1) ** ((p["c"] - 1) / p["c"]) * p["n"] ** (1 / p["c"]),
                    _exact_ctw),
    "product_colouring": (("t", "c", "n"),
                          lambda p: (p["t"] + 1) ** (2 * (1 - 1 / math.sqrt(p["c"])))
                          * p["n"] ** (1 / _root(p["c"])), _exact_product),
    "project_colouring": (("k", "n", "n1", "n2"), _project, _exact_project),
    "clique_blowup": (("k", "l"), lambda p: p["k"] * p["l"], None),
    "bounded_degree_pipeline": (("t", "c", "h", "l", "q", "branch"), _pipeline, None),
    "fanfan_three_colouring": (("n",), lambda p: 3 * p["n"], None),
    "fanfan_four_colouring": (("n",), lambda p: 7 * p["n"] ** 2, None),
}


def within_bound(algorithm: str, params: dict, k: int) -> bool:
    """``k <= bound``, decided in integer arithmetic when the bound is a
    rational power of integer parameters (float roots can land just below
    an exact integer bound)."""
    bound = bound_formula(algorithm, params)
    exact = FORMULAS[algorithm][2]
    verdict = exact(int(k), params) if exact is not None else None
    return bool(k <= bound) if verdict is None else verdict


def pipeline_constant(t, c, delta) -> float:
    """Constant ``6^{c+1}(t+1)^2 Δ^c`` of the bounded-degree upper bound."""
    return 6 ** (c + 1) * (t + 1) ** 2 * delta ** c


def bound_formula(algorithm: str, params: dict) -> float:
    if algorithm not in FORMULAS:
        raise KeyError(f"unknown algorithm {algorithm!r}")
    required, fn, _ = FORMULAS[algorithm]
    missing = [s for s in required if s not in params]
    if missing:
        raise KeyError(f"{algorithm} certificate is missing {missing}")
    return float(fn(params))


@dataclass
class BoundCertificate:
    """Clustering bound claimed by an algorithm, with the parameters it was
    evaluated at.  ``certified`` is False when the run fell outside the
    hypotheses of the bound the algorithm aims for."""

    algorithm: str
    params: dict
    bound_value: float
    certified: bool = True
    notes: dict = field(default_factory=dict)

    @classmethod
    def make(cls, algorithm, params, certified=True, **notes) -> "BoundCertificate":
        return cls(algorithm, dict(params), bound_formula(algorithm, params), certified, notes)

    def to_dict(self) -> dict:
        return {"algorithm": self.algorithm, "params": dict(self.params),
                "bound_value": self.bound_value, "certified": self.certified}

    @classmethod
    def from_dict(cls, d: dict) -> "BoundCertificate":
        return cls(d["algorithm"], dict(d["params"]), float(d["bound_value"]),
                   bool(d.get("certified", True)))


@dataclass(frozen=True)
class CertificateCheck:
    passed: bool
    margin: float
    bound: float
    formula_ok: bool
    clustering: int

    def __bool__(self):
        return self.passed


def check_certificate(report: ClusteringReport, cert: BoundCertificate,
                      rel_tol: float = 1e-9) -> CertificateCheck:
    """Recompute the bound from ``cert.params`` and compare with the measured
    clustering.  A stored ``bound_value`` that disagrees with the formula
    fails the check."""
    recomputed = bound_formula(cert.algorithm, cert.params)
    formula_ok = math.isclose(recomputed, cert.bound_value, rel_tol=rel_tol, abs_tol=1e-12)
    margin = recomputed - report.clustering
    fits = within_bound(cert.algorithm, cert.params, report.clustering)
    return CertificateCheck(formula_ok and fits, margin,
                            recomputed, formula_ok, report.clustering)


# -- grid isoperimetry ----------------------------------------------------------

def grid_isoperimetry_audit(n: int, S, k: int) -> str:
    """Check ``n^2 <= 4|S| sqrt(k)`` for ``S`` in ``P_n □ P_n`` (row-major ids).

    Returns ``"not-applicable"`` unless ``|S| <= n^2/2``, ``k <= n^2/e^2`` and
    every component of the grid minus ``S`` has at most ``k`` vertices;
    otherwise ``"pass"`` or ``"fail"``.
    """
    S = {int(v) for v in S}
    if any(not 0 <= v < n * n for v in S):
        raise ValueError("S must lie in the n x n grid")
    if len(S) > n * n / 2 or k > n * n / E2:
        return "not-applicable"
    from .families import path

    grid = cartesian_product(path(n), path(n))
    keep = np.ones(n * n, dtype=bool)
    keep[list(S)] = False
    if any(len(comp) > k for comp in connected_components(grid, keep)):
        return "not-applicable"
    return "pass" if n * n <= 4 * len(S) * math.sqrt(k) else "fail"
