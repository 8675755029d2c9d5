import json

import pytest

from clusterprod.cli import (EXIT_INPUT, EXIT_OK, EXIT_VIOLATION, InputError, SweepSpec,
                             fit_exponent, instantiate, load_families, main, parse_budget,
                             run_sweep, verify_bundle)
from clusterprod.colouring import Colouring, evaluate
from clusterprod.decomp import TreeDecomposition
from clusterprod.graph import Graph


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_build_json_round_trip(capsys, tmp_path):
    target = tmp_path / "g.json"
    code, _, _ = run(capsys, "build", "--family", "cone:2,fan:3", "--out", str(target))
    assert code == EXIT_OK
    doc = json.loads(target.read_text())
    g = Graph.from_dict(doc["graph"])
    assert g.n == 9 and g.to_dict() == doc["graph"]
    assert TreeDecomposition.from_dict(doc["decomposition"]).to_dict() == doc["decomposition"]


def test_build_product_dot(capsys):
    code, out, _ = run(capsys, "build", "--family", "fan:2", "--family", "path:2",
                       "--format", "dot")
    assert code == EXIT_OK and out.startswith("graph G {") and out.count("--") == 15


def test_output_is_deterministic(capsys):
    a = run(capsys, "colour", "--family", "ktree:n=40,t=2", "--seed", "3", "--algo",
            "c_colour_tw", "--colours", "3")[1]
    b = run(capsys, "colour", "--family", "ktree:n=40,t=2", "--seed", "3", "--algo",
            "c_colour_tw", "--colours", "3")[1]
    assert a == b
    doc = json.loads(a)
    assert list(doc) == sorted(doc)


@pytest.fixture
def bundle(capsys, tmp_path):
    out = tmp_path / "run"
    code, text, _ = run(capsys, "colour", "--family", "fan:64", "--family", "path:8",
                        "--algo", "two_colour_product", "--out", str(out))
    assert code == EXIT_OK and json.loads(text)["pass"]
    return out


def test_verify_pass(capsys, bundle):
    code, out, _ = run(capsys, "verify", "--bundle", str(bundle))
    assert code == EXIT_OK and json.loads(out)["status"] == "pass"
    code, out, _ = run(capsys, "verify", "--graph", str(bundle / "graph.json"), "--colouring",
                       str(bundle / "colouring.json"), "--certificate",
                       str(bundle / "certificate.json"))
    assert code == EXIT_OK


def test_verify_tampered_colouring_names_component(bundle):
    g = Graph.from_dict(json.loads((bundle / "graph.json").read_text()))
    col = Colouring.from_dict(json.loads((bundle / "colouring.json").read_text()))
    bound = json.loads((bundle / "certificate.json").read_text())["bound_value"]
    colours = list(col.assignment)
    for v in range(g.n):
        trial = colours.copy()
        trial[v] = 1 - trial[v]
        if evaluate(g, Colouring(2, trial)).clustering > bound:
            break
    else:
        pytest.fail("no single recolouring breaks the bound")
    (bundle / "colouring.json").write_text(json.dumps(Colouring(2, trial).to_dict()))
    code, report = verify_bundle(bundle / "graph.json", bundle / "colouring.json",
                                 bundle / "certificate.json")
    assert code == EXIT_VIOLATION and report["status"] == "fail"
    comp = report["component"]
    assert v in comp["vertices"] and comp["size"] > bound and comp["colour"] == trial[v]


def test_verify_perturbed_bound(bundle):
    path = bundle / "certificate.json"
    cert = json.loads(path.read_text())
    cert["bound_value"] *= 1.001
    path.write_text(json.dumps(cert))
    code, report = verify_bundle(bundle / "graph.json", bundle / "colouring.json", path)
    assert code == EXIT_VIOLATION and "formula" in report["reason"]


def test_verify_input_errors(capsys, bundle, tmp_path):
    (tmp_path / "short.json").write_text(json.dumps({"c": 2, "colours": [0, 1]}))
    code, report = verify_bundle(bundle / "graph.json", tmp_path / "short.json",
                                 bundle / "certificate.json")
    assert code == EXIT_INPUT and "covers" in report["reason"]
    (tmp_path / "junk.json").write_text("{not json")
    code, _ = verify_bundle(tmp_path / "junk.json", bundle / "colouring.json",
                            bundle / "certificate.json")
    assert code == EXIT_INPUT
    code, _ = verify_bundle(tmp_path / "missing.json", bundle / "colouring.json",
                            bundle / "certificate.json")
    assert code == EXIT_INPUT
    assert run(capsys, "verify")[0] == EXIT_INPUT


def test_search_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "search", "--family", "fan:9", "--colours", "2")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["status"] == "exact" and doc["min_clustering"] == 3
    code, out, _ = run(capsys, "search", "--family", "cycle:5", "--colours", "2", "--below", "2")
    assert json.loads(out)["answer"] == "no"
    graph = tmp_path / "c6.json"
    graph.write_text(json.dumps({"n": 6, "edges": [[i, (i + 1) % 6] for i in range(6)]}))
    code, out, _ = run(capsys, "search", "--graph", str(graph), "--colours", "2", "--below", "2",
                       "--budget", "nodes=1000,time=5", "--no-symmetry")
    assert json.loads(out)["answer"] == "yes"
    code, out, _ = run(capsys, "search", "--family", "fan:5*fan:5", "--colours", "3",
                       "--budget", "nodes=20")
    assert json.loads(out)["status"] in ("bound_only", "exhausted_budget")


def test_parse_budget():
    b = parse_budget("nodes=1e4,time=2.5")
    assert b.max_nodes == 10_000 and b.time_limit == 2.5
    assert parse_budget(None).max_nodes == 20_000_000
    for bad in ("nodes", "speed=3", "nodes=-1", "time=abc"):
        with pytest.raises(InputError):
            parse_budget(bad)


def test_sweep_csv(capsys, tmp_path):
    out = tmp_path / "sweep.csv"
    code, _, _ = run(capsys, "sweep", "--family", "fan:{m*m}", "--family", "path:{m}",
                     "--algo", "two_colour_product", "--sizes", "2,3,4", "--out", str(out))
    assert code == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "m,n,clustering,bound,certified"
    assert lines[1] == "2,10,6,19.3098,1"
    assert lines[-2] == "exponent,0.666667"


def test_sweep_rejects_bad_sizes(capsys):
    code, _, err = run(capsys, "sweep", "--family", "fan:{m}", "--algo", "c_colour_tw",
                       "--sizes", "3")
    assert code == EXIT_INPUT and "two sizes" in err
    code, _, _ = run(capsys, "sweep", "--family", "fan:{m}", "--algo", "c_colour_tw",
                     "--sizes", "3,3")
    assert code == EXIT_INPUT
    with pytest.raises(ValueError):
        SweepSpec(("fan:{m}",), "c_colour_tw", (4,))


def test_sweep_vertex_cap():
    spec = SweepSpec(("fan:{m}",), "c_colour_tw", (10, 100), vertex_cap=50)
    with pytest.raises(InputError):
        run_sweep(spec)


def test_vertex_cap_on_build(capsys):
    code, _, err = run(capsys, "build", "--family", "fan:100", "--family", "fan:100",
                       "--vertex-cap", "1000")
    assert code == EXIT_INPUT and "cap" in err
    code, _, _ = run(capsys, "colour", "--algo", "fanfan_four_colouring", "--n", "6",
                     "--vertex-cap", "1000")
    assert code == EXIT_INPUT


def test_templates():
    assert instantiate("fan:{m*m}", 3) == "fan:9"
    assert instantiate("ktree:n={10*m+1},t=2", 4) == "ktree:n=41,t=2"
    with pytest.raises(InputError):
        instantiate("fan:{__import__('os')}", 2)
    with pytest.raises(InputError):
        instantiate("fan:{m", 2)


def test_fit_exponent():
    assert fit_exponent([1, 2, 4, 8], [3, 6, 12, 24]) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        fit_exponent([5, 5], [1, 2])


def test_colour_algorithms(capsys):
    cases = [
        ["--family", "fan:9", "--family", "path:3", "--algo", "three_colour_product"],
        ["--family", "ktree:n=30,t=1", "--family", "ktree:n=20,t=1", "--algo",
         "product_colouring", "--colours", "4"],
        ["--family", "fan:9", "--family", "path:3", "--algo", "project_colouring"],
        ["--family", "cycle:7", "--algo", "clique_blowup", "--blowup", "3"],
        ["--family", "fan:20", "--family", "path:4", "--algo", "bounded_degree_pipeline"],
        ["--algo", "fanfan_three_colouring", "--n", "4"],
        ["--algo", "fanfan_four_colouring", "--n", "2"],
    ]
    for argv in cases:
        code, out, _ = run(capsys, "colour", *argv)
        assert code == EXIT_OK, argv
        assert json.loads(out)["summary"]["pass"]


def test_colour_argument_errors(capsys):
    assert run(capsys, "colour", "--algo", "c_colour_tw")[0] == EXIT_INPUT
    assert run(capsys, "colour", "--family", "fan:3", "--algo", "two_colour_product")[0] == EXIT_INPUT
    assert run(capsys, "colour", "--algo", "fanfan_three_colouring")[0] == EXIT_INPUT
    assert run(capsys, "colour", "--family", "blob:3", "--algo", "c_colour_tw")[0] == EXIT_INPUT
    assert run(capsys, "colour", "--algo", "nope")[0] == EXIT_INPUT
    assert run(capsys)[0] == EXIT_INPUT


def test_hex_command(capsys, tmp_path):
    code, out, _ = run(capsys, "hex", "--family", "framed:2x3")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["checks"] == 4 * 64 and doc["failures"] == 0
    col = tmp_path / "col.json"
    col.write_text(json.dumps({"c": 2, "colours": [0] * 10}))
    code, out, _ = run(capsys, "hex", "--family", "framed:2x3", "--colouring", str(col))
    assert json.loads(out)["side"] == "ac"
    col.write_text(json.dumps({"c": 2, "colours": [0] * 9 + [1]}))
    assert run(capsys, "hex", "--family", "framed:2x3", "--colouring", str(col))[0] == EXIT_INPUT
    assert run(capsys, "hex", "--family", "fan:3")[0] == EXIT_INPUT
    assert run(capsys, "hex", "--family", "grid:3,3")[0] == EXIT_INPUT
    assert run(capsys, "hex", "--family", "framed:9x9")[0] == EXIT_INPUT


def test_seed_reaches_ktrees():
    (a, _), = load_families(["ktree:n=20,t=2"], seed=1)
    (b, _), = load_families(["ktree:n=20,t=2"], seed=2)
    (c, _), = load_families(["ktree:n=20,t=2,seed=1"], seed=2)
    assert a != b and a == c
