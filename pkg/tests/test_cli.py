import json
import subprocess
import sys

import pytest

from fatcoords import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def payload(out):
    data = json.loads(out)
    assert list(data)[0] == "format" and data["format"] == 1
    return data


def test_graph_info(capsys):
    code, out, _ = run(capsys, "graph", "info", "stock:genus2")
    assert code == 0
    data = payload(out)
    assert (data["genus"], data["holes"]) == (2, 1)


def test_file_graph(tmp_path, capsys):
    from fatcoords.fatgraph import stock

    path = tmp_path / "g.json"
    path.write_text(json.dumps(stock("theta").to_json()))
    code, out, _ = run(capsys, "graph", "info", f"file:{path}")
    assert code == 0 and payload(out)["holes"] == 3


@pytest.mark.parametrize("argv", [
    ["graph", "flip", "stock:torus1", "--edge", "x"],
    ["graph", "dual", "stock:theta"],
    ["graph", "cover", "stock:torus1", "--perm", "x=1,0"],
    ["lam", "flip", "stock:torus1", "--weights", "2,1,1", "--edge", "x"],
    ["lam", "flip", "stock:torus1", "--weights=-1,1,0", "--edge", "y", "--unbounded"],
    ["lam", "reconstruct", "stock:torus1", "--weights", "2,1,1"],
    ["lam", "reconstruct", "stock:theta", "--weights", "1,1,1", "--unbounded"],
    ["lam", "maps", "stock:theta", "--weights", "1,1,2"],
    ["lam", "normalize", "stock:torus1", "--weights", "1/2,0,0"],
    ["lam", "normalize", "stock:theta", "--weights=-1,1,1", "--positive"],
    ["teich", "flip", "stock:sphere4", "--weights", "1,2,3,4,5,6", "--edge", "a"],
    ["teich", "flip", "stock:sphere4", "--weights", "1,2,3,4,5,6", "--edge", "a", "--penner"],
    ["teich", "orient", "stock:theta", "--weights", "1,2,3", "--face", "1"],
    ["teich", "ip", "stock:torus1", "--weights", "1,2,3"],
    ["teich", "area", "stock:theta", "--weights", "1,2,3"],
    ["teich", "holes", "stock:theta", "--weights", "1,2,3"],
    ["length", "curve", "stock:torus1", "--weights", "0,0,0", "--path", "x+,y-"],
    ["pair", "tl", "stock:torus1", "--shear", "1,1,1", "--lam", "2,1,1"],
    ["pair", "lt", "stock:torus1", "--lam", "1,1,0", "--penner", "1,2,3"],
    ["pair", "ll", "stock:torus1", "--unbounded=-1,1,0", "--bounded", "1,1,0", "--allow-negative"],
    ["pair", "convexity", "stock:torus1", "--shear", "1,0.5,1", "--f1", "1,1,0", "--f2", "0,1,1"],
    ["pair", "asymptotic", "stock:torus1", "--shear", "1,0.5,-1", "--lam", "1,1,0"],
    ["poisson", "matrix", "stock:sphere5"],
    ["poisson", "casimir", "stock:genus2"],
    ["poisson", "flipcheck", "stock:sphere4", "--samples", "5"],
    ["quantum", "phi", "--x", "1.5", "--hbar", "0.7"],
    ["quantum", "presentation", "stock:torus1"],
    ["quantum", "duality", "stock:torus1", "--hbar", "2"],
    ["quantum", "flip", "stock:theta", "--edge", "0"],
    ["markov", "tree", "--depth", "4"],
    ["markov", "of", "2/5"],
    ["markov", "psi", "3/8"],
    ["markov", "decorated", "--start", "1,2,3", "--moves", "flip,rotate"],
])
def test_subcommands_succeed(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    payload(out)


def test_dot_outputs(capsys):
    code, out, _ = run(capsys, "graph", "dot", "stock:theta")
    assert code == 0 and "--" in out
    code, out, _ = run(capsys, "markov", "tree", "--depth", "2", "--format", "dot")
    assert code == 0 and out.startswith("graph markov")


def test_markov_values(capsys):
    for value, want in (("1/2", 2), ("2/5", 29), ("3/8", 433)):
        _, out, _ = run(capsys, "markov", "of", value)
        assert payload(out)["markov"] == want
    _, out, _ = run(capsys, "markov", "tree", "--depth", "6")
    assert 3276509 in payload(out)["rows"][6]


@pytest.mark.parametrize("argv", [
    ["graph", "info", "stock:nope"],
    ["graph", "info", "nothing"],
    ["graph", "info", "file:/definitely/missing.json"],
    ["graph", "flip", "stock:torus1", "--edge", "q"],
    ["lam", "reconstruct", "stock:torus1", "--weights", "a,b,c"],
    ["lam", "flip", "stock:torus1", "--weights", "1,1", "--edge", "x"],
    ["teich", "orient", "stock:torus1", "--weights", "1,2,3", "--face", "0"],
    ["length", "curve", "stock:torus1", "--path", "x+,x-"],
    ["pair", "lt", "stock:torus1", "--lam=-1,1,0", "--penner", "1,1,1"],
    ["markov", "of", "2/4"],
    ["lam", "normalize", "stock:torus1", "--weights=-1,0,0", "--positive", "--max-steps", "3"],
])
def test_validation_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["graph", "explode", "stock:theta"])
    assert exc.value.code == 2


def test_tolerance_failure_exit_3(capsys):
    code, out, err = run(capsys, "pair", "convexity", "stock:torus1", "--shear", "1,0.5,1",
                         "--f1", "1,1,0", "--f2", "0,1,1", "--tol=-1")
    assert code == 3 and "tolerance" in err


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest")
    items = payload(out)["items"]
    assert code == 0 and all(i["pass"] for i in items)
    names = {i["name"] for i in items}
    assert {"pentagon", "involutions", "casimirs", "markov_tree", "phi"} <= names


def test_selftest_fault_injection(capsys):
    code, out, _ = run(capsys, "selftest", "--inject", "casimir")
    items = {i["name"]: i["pass"] for i in payload(out)["items"]}
    assert code == 3
    assert items["casimirs"] is False
    assert all(v for k, v in items.items() if k != "casimirs")


def test_selftest_status_independent_of_seed(capsys):
    statuses = set()
    for seed in (0, 1, 7, 123):
        _, out, _ = run(capsys, "selftest", "--seed", str(seed))
        statuses.add(tuple(i["pass"] for i in payload(out)["items"]))
    assert len(statuses) == 1


def test_output_is_byte_identical(capsys):
    argv = ["poisson", "flipcheck", "stock:sphere5", "--samples", "4", "--seed", "3"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_float_formatting():
    assert cli._dump(0.1) == "0.10000000000000001"
    assert cli._dump(2.0) == "2.0"
    assert cli._dump({"b": 1, "a": [1.5, None, True]}) == '{"b": 1, "a": [1.5, null, true]}'


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "fatcoords", "markov", "of", "1/2"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["markov"] == 2
