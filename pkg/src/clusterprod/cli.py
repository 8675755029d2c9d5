"""Command-line front-end: ``clusterprod {build,colour,verify,search,sweep,hex}``.

Exit codes are 0 on success, 1 when a colouring breaks its bound, 2 for bad
input.  JSON is written with sorted keys; CSV numbers use 6 significant digits.
"""
from __future__ import annotations

import argparse
import ast
import csv
import io
import itertools
import json
import math
import operator
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .colouring import (BoundCertificate, Colouring, check_certificate, evaluate,
                        monochromatic_labels)
from .decomp import TreeDecomposition, trivial_decomposition
from .families import FamilySpec, build_family, framed_grid, parse_family
from .graph import Graph, strong_product
from .search import SearchBudget, exists_below, framed_colouring, hex_check, min_clustering
from . import upper

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2
DEFAULT_VERTEX_CAP = 10 ** 6

ALGORITHMS = ("two_colour_product", "three_colour_product", "c_colour_tw",
              "product_colouring", "project_colouring", "clique_blowup",
              "bounded_degree_pipeline", "fanfan_three_colouring", "fanfan_four_colouring")

# exponent of n in each certificate bound, when it is a pure power law
EXPECTED_EXPONENT = {
    "two_colour_product": lambda c: 2 / 3,
    "three_colour_product": lambda c: 4 / 7,
    "c_colour_tw": lambda c: 1 / c,
    "product_colouring": lambda c: 1 / math.isqrt(c),
}


class InputError(Exception):
    """Bad arguments or unreadable files (exit code 2)."""


# -- building ---------------------------------------------------------------------

def _with_seed(spec: FamilySpec, seed: int | None) -> FamilySpec:
    if seed is None:
        return spec
    inner = tuple(_with_seed(s, seed) for s in spec.inner)
    params = dict(spec.params)
    if spec.kind == "ktree":
        params.setdefault("seed", seed)
    return replace(spec, params=params, inner=inner)


def _order(spec: FamilySpec) -> int:
    """Vertex count of a family, computed without building it."""
    p = spec.params
    k = spec.kind
    if k == "product":
        return math.prod(_order(s) for s in spec.inner)
    if k in ("path", "complete", "cycle", "ktree"):
        return p["n"]
    if k == "fan":
        return p["n"] + 1
    if k == "cone":
        return p["m"] * _order(spec.inner[0]) + 1
    if k == "h_tower":
        return p["n"] ** 2 * (p["n"] ** 4 + 1) + 1
    if k == "g_tower":
        from .families import g_tower_order
        return g_tower_order(p["c"], p["n"], p["k"])
    if k == "framed_grid":
        return p["rows"] * p["cols"] + 4
    return 0  # unknown: checked after building


def load_families(texts, seed=None, vertex_cap=DEFAULT_VERTEX_CAP
                  ) -> list[tuple[Graph, TreeDecomposition | None]]:
    """Parse and build each family string, refusing anything over ``vertex_cap``."""
    if not texts:
        raise InputError("at least one --family is required")
    specs = []
    for text in texts:
        try:
            specs.append(_with_seed(parse_family(text), seed))
        except (ValueError, KeyError) as exc:
            raise InputError(f"bad family {text!r}: {exc}") from exc
    total = math.prod(_order(s) for s in specs)
    if total > vertex_cap:
        raise InputError(f"instance has {total} vertices, over the cap of {vertex_cap}")
    built = []
    for text, spec in zip(texts, specs):
        try:
            g, d = build_family(spec)
        except ValueError as exc:
            raise InputError(f"cannot build {text!r}: {exc}") from exc
        if g.n > vertex_cap:
            raise InputError(f"{text!r} has {g.n} vertices, over the cap of {vertex_cap}")
        built.append((g, d))
    return built


def product_of(built) -> Graph:
    g = built[0][0]
    for h, _ in built[1:]:
        g = strong_product(g, h)
    return g


def _decomp(g: Graph, d: TreeDecomposition | None) -> TreeDecomposition:
    return d if d is not None else trivial_decomposition(g)


# -- running algorithms -----------------------------------------------------------------

def run_algorithm(algo: str, built, colours: int | None = None, blowup: int = 2,
                  n: int | None = None) -> tuple[Graph, Colouring, BoundCertificate]:
    """Run one upper-bound construction; returns the coloured graph and its certificate."""
    if algo not in ALGORITHMS:
        raise InputError(f"unknown algorithm {algo!r}")
    if algo in ("fanfan_three_colouring", "fanfan_four_colouring"):
        if n is None:
            raise InputError(f"{algo} needs --n")
        fn = getattr(upper, algo)
        g, col = fn(n)
        return g, col, BoundCertificate.make(algo, {"n": n})

    def needs(k):
        if len(built) != k:
            raise InputError(f"{algo} needs exactly {k} --family argument(s)")

    if algo in ("c_colour_tw", "clique_blowup"):
        needs(1)
        g, d = built[0]
        col, cert = upper.c_colour_tw(g, _decomp(g, d), colours or 2)
        if algo == "c_colour_tw":
            return g, col, cert
        blown, cert = upper.clique_blowup(g, col, blowup)
        return upper.blowup_graph(g, blowup), blown, cert

    needs(2)
    (g1, d1), (g2, d2) = built
    d1, d2 = _decomp(g1, d1), _decomp(g2, d2)
    if algo == "bounded_degree_pipeline":
        witness = upper.tree_partition_heuristic(g2)
        col, cert = upper.bounded_degree_pipeline(g1, d1, g2, witness, colours or 2)
        return strong_product(g1, g2), col, cert
    inst = upper.ProductInstance(g1, d1, g2, d2)
    if algo == "two_colour_product":
        col, cert = upper.two_colour_product(inst)
    elif algo == "three_colour_product":
        col, cert = upper.three_colour_product(inst)
    elif algo == "product_colouring":
        col, cert = upper.product_colouring(inst, colours or 4)
    else:
        col1, _ = upper.c_colour_tw(g1, d1, colours or 2)
        col, cert = upper.project_colouring(inst, col1)
    return inst.product, col, cert


# -- sweeps ------------------------------------------------------------------------

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.FloorDiv: operator.floordiv, ast.Pow: operator.pow, ast.Mod: operator.mod}


def _eval_size(expr: str, m: int) -> int:
    """Integer arithmetic on the size variable ``m``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.Name) and node.id == "m":
            return m
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand)
        raise InputError(f"unsupported size expression {expr!r}")

    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise InputError(f"bad size expression {expr!r}") from exc
    return int(ev(tree))


def instantiate(template: str, m: int) -> str:
    """Replace every ``{expr}`` in a family template by its value at ``m``."""
    out, rest = [], template
    while "{" in rest:
        head, _, tail = rest.partition("{")
        expr, sep, rest = tail.partition("}")
        if not sep:
            raise InputError(f"unbalanced braces in {template!r}")
        out.append(head)
        out.append(str(_eval_size(expr, m)))
    out.append(rest)
    return "".join(out)


@dataclass(frozen=True)
class SweepSpec:
    """Family templates in the size variable ``m`` (``"fan:{m*m}"``) and the
    sizes to run them at."""

    families: tuple
    algorithm: str
    sizes: tuple
    colours: int = 2
    out: str | None = None
    seed: int | None = None
    vertex_cap: int = DEFAULT_VERTEX_CAP

    def __post_init__(self):
        object.__setattr__(self, "families", tuple(self.families))
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        if len(self.sizes) < 2:
            raise ValueError("a sweep needs at least two sizes to fit an exponent")
        if any(b <= a for a, b in zip(self.sizes, self.sizes[1:])):
            raise ValueError("sweep sizes must be strictly increasing")


@dataclass
class SweepResult:
    rows: list = field(default_factory=list)
    exponent: float = math.nan
    expected: float | None = None

    @property
    def deviation(self) -> float | None:
        return None if self.expected is None else abs(self.exponent - self.expected)

    def to_dict(self) -> dict:
        return {"rows": self.rows, "exponent": self.exponent, "expected": self.expected,
                "deviation": self.deviation}

    def csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "n", "clustering", "bound", "certified"])
        for r in self.rows:
            w.writerow([r["m"], r["n"], r["clustering"], f"{r['bound']:.6g}", int(r["certified"])])
        w.writerow([])
        w.writerow(["exponent", f"{self.exponent:.6g}"])
        if self.expected is not None:
            w.writerow(["expected", f"{self.expected:.6g}"])
        return buf.getvalue()


def fit_exponent(ns, values) -> float:
    """Least-squares slope of ``log(values)`` against ``log(ns)``."""
    x = np.log(np.asarray(ns, dtype=float))
    y = np.log(np.asarray(values, dtype=float))
    if len(x) < 2 or np.ptp(x) == 0:
        raise ValueError("need at least two distinct sizes to fit an exponent")
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Run ``spec`` at every size.  One row per size, in size order."""
    rows = []
    for m in spec.sizes:
        texts = [instantiate(t, m) for t in spec.families]
        built = load_families(texts, spec.seed, spec.vertex_cap)
        g, col, cert = run_algorithm(spec.algorithm, built, spec.colours)
        report = evaluate(g, col)
        rows.append({"m": m, "n": g.n, "clustering": report.clustering,
                     "bound": cert.bound_value, "certified": cert.certified})
    expected_fn = EXPECTED_EXPONENT.get(spec.algorithm)
    result = SweepResult(rows, fit_exponent([r["n"] for r in rows], [r["bound"] for r in rows]),
                         expected_fn(spec.colours) if expected_fn else None)
    if spec.out:
        Path(spec.out).write_text(result.csv())
    return result


# -- verification ------------------------------------------------------------------

def _read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _graph_from(doc: dict) -> Graph:
    try:
        return Graph.from_dict(doc["graph"] if "graph" in doc else doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"not a graph document: {exc}") from exc


def verify_bundle(graph_file, colouring_file, certificate_file) -> tuple[int, dict]:
    """Re-check a saved run.  Returns ``(exit code, report)``; a failing
    report names the offending monochromatic component."""
    try:
        g = _graph_from(_read_json(graph_file))
        col = Colouring.from_dict(_read_json(colouring_file))
        cert = BoundCertificate.from_dict(_read_json(certificate_file))
    except InputError as exc:
        return EXIT_INPUT, {"status": "input-error", "reason": str(exc)}
    except (KeyError, TypeError, ValueError) as exc:
        return EXIT_INPUT, {"status": "input-error", "reason": f"malformed file: {exc}"}
    if len(col) != g.n:
        return EXIT_INPUT, {"status": "input-error",
                            "reason": f"colouring covers {len(col)} vertices, graph has {g.n}"}
    try:
        report = evaluate(g, col)
        check = check_certificate(report, cert)
    except (KeyError, ValueError) as exc:
        return EXIT_INPUT, {"status": "input-error", "reason": f"bad certificate: {exc}"}
    out = {"algorithm": cert.algorithm, "clustering": report.clustering, "bound": check.bound,
           "margin": check.margin, "certified": cert.certified}
    if not check.formula_ok:
        out.update(status="fail", reason="bound_value does not match the recomputed formula",
                   stored_bound=cert.bound_value)
        return EXIT_VIOLATION, out
    if not check.passed:
        labels = monochromatic_labels(g, col)
        sizes = np.bincount(labels)
        worst = int(np.argmax(sizes))
        members = np.flatnonzero(labels == worst).tolist()
        out.update(status="fail", reason="a monochromatic component exceeds the bound",
                   component={"colour": col.assignment[members[0]], "size": len(members),
                              "vertices": members})
        return EXIT_VIOLATION, out
    out["status"] = "pass"
    return EXIT_OK, out


# -- output helpers ---------------------------------------------------------------

def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        print(text, end="" if text.endswith("\n") else "\n")


def parse_budget(text: str | None) -> SearchBudget:
    """``nodes=N,time=S`` with either part optional."""
    if not text:
        return SearchBudget()
    kw = {}
    for item in text.split(","):
        key, sep, val = item.partition("=")
        key = key.strip()
        try:
            if key == "nodes" and sep:
                kw["max_nodes"] = int(float(val))
            elif key == "time" and sep:
                kw["time_limit"] = float(val)
            else:
                raise ValueError
        except ValueError:
            raise InputError(f"bad budget item {item!r}; expected nodes=N or time=S") from None
    try:
        return SearchBudget(**kw)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


# -- subcommands ------------------------------------------------------------------

def cmd_build(args) -> int:
    built = load_families(args.family, args.seed, args.vertex_cap)
    if len(built) == 1:
        g, d = built[0]
    else:
        g, d = product_of(built), None
    if args.format == "dot":
        _emit(g.to_dot(), args.out)
    elif args.format == "json":
        _emit(dumps({"graph": g.to_dict(), "decomposition": d.to_dict() if d else None}), args.out)
    else:
        raise InputError("build writes json or dot")
    return EXIT_OK


def cmd_colour(args) -> int:
    built = [] if args.algo.startswith("fanfan") else load_families(
        args.family, args.seed, args.vertex_cap)
    if args.algo.startswith("fanfan") and args.n is not None:
        m = args.n ** 3 + 1 if args.algo == "fanfan_four_colouring" else args.n + 1
        if m * m > args.vertex_cap:
            raise InputError(f"instance has {m * m} vertices, over the cap of {args.vertex_cap}")
    g, col, cert = run_algorithm(args.algo, built, args.colours, args.blowup, args.n)
    report = evaluate(g, col)
    check = check_certificate(report, cert)
    summary = {"algorithm": args.algo, "n": g.n, "clustering": report.clustering,
               "bound": cert.bound_value, "certified": cert.certified, "pass": check.passed}
    if args.format != "json":
        raise InputError("colour writes json")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "graph.json").write_text(dumps(g.to_dict()) + "\n")
        (out / "colouring.json").write_text(dumps(col.to_dict()) + "\n")
        (out / "certificate.json").write_text(dumps(cert.to_dict()) + "\n")
        (out / "report.json").write_text(dumps(report.to_dict()) + "\n")
        print(dumps(summary))
    else:
        print(dumps({"summary": summary, "graph": g.to_dict(), "colouring": col.to_dict(),
                     "certificate": cert.to_dict(), "report": report.to_dict()}))
    return EXIT_OK if check.passed else EXIT_VIOLATION


def cmd_verify(args) -> int:
    if args.bundle:
        b = Path(args.bundle)
        files = (b / "graph.json", b / "colouring.json", b / "certificate.json")
    elif args.graph and args.colouring and args.certificate:
        files = (args.graph, args.colouring, args.certificate)
    else:
        raise InputError("verify needs --bundle DIR or --graph, --colouring and --certificate")
    code, report = verify_bundle(*files)
    print(dumps(report))
    return code


def cmd_search(args) -> int:
    if args.graph:
        g = _graph_from(_read_json(args.graph))
    else:
        g = product_of(load_families(args.family, args.seed, args.vertex_cap))
    budget = parse_budget(args.budget)
    if args.no_symmetry:
        budget = replace(budget, symmetry=False)
    if args.colours < 1:
        raise InputError("--colours must be at least 1")
    if args.below is not None:
        if args.below < 1:
            raise InputError("--below must be at least 1")
        ans = exists_below(g, args.colours, args.below, budget)
        doc = {"answer": ans.answer, "k": args.below, "nodes_explored": ans.nodes_explored,
               "witness": ans.witness.to_dict() if ans.witness else None}
    else:
        doc = min_clustering(g, args.colours, budget).to_dict()
    _emit(dumps(doc), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    if not args.sizes:
        raise InputError("sweep needs --sizes")
    try:
        sizes = [int(s) for s in args.sizes.split(",")]
        spec = SweepSpec(tuple(args.family or ()), args.algo, tuple(sizes), args.colours or 2,
                         None, args.seed, args.vertex_cap)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    result = run_sweep(spec)
    if args.format == "csv":
        _emit(result.csv(), args.out)
    else:
        _emit(dumps(result.to_dict()), args.out)
    return EXIT_OK


def hex_sweep(rows: int, cols: int) -> dict:
    """Every interior 2-colouring of a framed grid, every terminal pattern."""
    fg = framed_grid(rows, cols)
    k = len(fg.interior)
    counts = {"ac": 0, "bd": 0}
    for bits in itertools.product((0, 1), repeat=k):
        for ac, bd in ((0, 1), (1, 0), (0, 0), (1, 1)):
            side, _ = hex_check(fg, framed_colouring(fg, bits, ac, bd))
            counts[side] += 1
    return {"rows": rows, "cols": cols, "interior_colourings": 2 ** k,
            "checks": 4 * 2 ** k, "ac": counts["ac"], "bd": counts["bd"], "failures": 0}


def cmd_hex(args) -> int:
    specs = args.family or ["framed:3x3"]
    if len(specs) != 1:
        raise InputError("hex takes one framed grid family")
    try:
        spec = parse_family(specs[0])
    except (ValueError, KeyError) as exc:
        raise InputError(f"bad family {specs[0]!r}: {exc}") from exc
    if spec.kind != "framed_grid":
        raise InputError("hex needs a framed grid, e.g. framed:3x3")
    rows, cols = spec.params["rows"], spec.params["cols"]
    if args.colouring:
        fg = framed_grid(rows, cols)
        try:
            col = Colouring.from_dict(_read_json(args.colouring))
            side, path = hex_check(fg, col)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        doc = {"side": side, "path": path}
    else:
        if rows * cols > 20:
            raise InputError("exhaustive hex sweep is limited to 20 interior vertices")
        doc = hex_sweep(rows, cols)
    _emit(dumps(doc), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="clusterprod",
                                description="Clustered colourings of strong products.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt=("json",)):
        sp.add_argument("--family", action="append",
                        help="family spec, repeat for a strong product (e.g. fan:9)")
        sp.add_argument("--seed", type=int, default=None, help="seed for random k-trees")
        sp.add_argument("--out", default=None)
        sp.add_argument("--format", choices=("json", "dot", "csv"), default=fmt[0])
        sp.add_argument("--vertex-cap", type=int, default=DEFAULT_VERTEX_CAP)

    sp = sub.add_parser("build", help="build a family, print JSON or DOT")
    common(sp)
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser("colour", help="run an upper-bound construction")
    common(sp)
    sp.add_argument("--algo", required=True, choices=ALGORITHMS)
    sp.add_argument("--colours", type=int, default=None)
    sp.add_argument("--blowup", type=int, default=2, help="clique size for clique_blowup")
    sp.add_argument("--n", type=int, default=None, help="size for the explicit fan colourings")
    sp.set_defaults(func=cmd_colour)

    sp = sub.add_parser("verify", help="re-check a saved colouring against its certificate")
    sp.add_argument("--bundle", help="directory written by 'colour --out'")
    sp.add_argument("--graph")
    sp.add_argument("--colouring")
    sp.add_argument("--certificate")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("search", help="exact minimum clustering")
    common(sp)
    sp.add_argument("--graph", help="graph JSON file instead of --family")
    sp.add_argument("--colours", type=int, required=True)
    sp.add_argument("--below", type=int, default=None,
                    help="only decide whether clustering below this value is possible")
    sp.add_argument("--budget", default=None, help="nodes=N,time=S")
    sp.add_argument("--no-symmetry", action="store_true")
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("sweep", help="size sweep with exponent fit")
    common(sp, fmt=("csv",))
    sp.add_argument("--algo", required=True, choices=ALGORITHMS)
    sp.add_argument("--colours", type=int, default=None)
    sp.add_argument("--sizes", help="comma-separated, strictly increasing values of m")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("hex", help="monochromatic crossing paths on framed grids")
    common(sp)
    sp.add_argument("--colouring", help="colouring JSON of the framed grid")
    sp.set_defaults(func=cmd_hex)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(dumps({"status": "input-error", "reason": str(exc)}), file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
