import io
import json

import pytest

from eulercount import fixtures
from eulercount.cli import dispatch
from eulercount.config import RunConfig


def run(argv, config=None):
    out, err = io.StringIO(), io.StringIO()
    code = dispatch(argv, config or RunConfig(threads=1), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, make in [("4dipole", lambda: fixtures.dipole(4)), ("6dipole", lambda: fixtures.dipole(6)),
                       ("k5", lambda: fixtures.complete(5)), ("octahedron", fixtures.octahedron),
                       ("pdipole", fixtures.plane_dipole4)]:
        p = tmp_path / f"{name}.json"
        p.write_text(make().to_json())
        paths[name] = str(p)
    return paths


def test_count_et(files):
    code, out, _ = run(["count", "--mode", "et", files["4dipole"]])
    assert code == 0 and out.strip() == '{"count":"6","mode":"et"}'


def test_count_atrail(files):
    _, out, _ = run(["count", "--mode", "atrail", files["pdipole"]])
    assert json.loads(out)["count"] == "2"


def test_gadget_verify_xyy():
    code, out, _ = run(["gadget", "verify", "xyy", "--k", "3"])
    rep = json.loads(out)
    assert code == 0 and rep["pass"] and rep["got"] == ["12", "4", "4"]


def test_gadget_build_then_signature(tmp_path):
    path = tmp_path / "x.json"
    assert run(["gadget", "build", "xyy", "--k", "2", "--out", str(path)])[0] == 0
    _, out, _ = run(["sig", "of", str(path)])
    assert json.loads(out)["alpha"] == "1/2"


def test_gadget_build_stdout_is_map():
    _, out, _ = run(["gadget", "build", "shuffle", "--d", "2", "--layers", "2"])
    assert json.loads(out)["kind"] == "map"


def test_gadget_missing_param():
    code, _, err = run(["gadget", "verify", "oxy", "--p", "3"])
    assert code == 2 and "--k" in err


def test_region_alias():
    code, out, _ = run(["region", "0.34", "0.33", "0.33"])
    assert code == 0 and out.strip() == '{"class":"inside"}'


def test_sig_region_margin():
    _, out, _ = run(["sig", "region", "0.40", "0.59", "0.01", "--margin"])
    rep = json.loads(out)
    assert rep["class"] == "outside" and rep["margin"] < 0


def test_sig_glue_literals():
    _, out, _ = run(["sig", "glue", "1/3,1/3,1/3", "1/3,1/3,1/3"])
    assert json.loads(out)["signature"]["alpha"] == "1/2"


def test_synth_map(tmp_path):
    path = tmp_path / "g.json"
    code, out, _ = run(["sig", "synth-map", "2/5", "2/5", "1/5", "--out", str(path)])
    assert code == 0 and json.loads(out)["signature"]["gamma"] == "1/5"
    _, out, _ = run(["sig", "of", str(path)])
    assert json.loads(out)["gamma"] == "1/5"


def test_synth_graph_outside_is_domain_error():
    code, _, err = run(["sig", "synth-graph", "0.45", "0.35", "0.20", "--eps", "0.05"])
    assert code == 1 and "outside" in err


def test_kotzig(files):
    _, out, _ = run(["kotzig", files["octahedron"]])
    assert json.loads(out) == {"atrails": "16", "faces": 8, "genus": 0}


def test_kotzig_rejects_graph(files):
    assert run(["kotzig", files["4dipole"]])[0] == 1


def test_fixture_round_trip(tmp_path):
    path = str(tmp_path / "w4.json")
    code, out, _ = run(["fixture", "medial-w4", "--out", path])
    assert code == 0 and json.loads(out)["n_vertices"] == 8
    assert json.loads(run(["kotzig", path])[1])["atrails"] == "45"
    assert json.loads(run(["fixture", "k5"])[1])["kind"] == "graph"
    names = json.loads(run(["fixture", "list"])[1])["fixtures"]
    assert "k5plus" in names and "octahedron" in names


def test_fixture_unknown():
    code, _, err = run(["fixture", "nope"])
    assert code == 1 and "unknown fixture" in err


def test_reduce_crt(files):
    _, out, _ = run(["reduce", "to4regular", "--input", files["6dipole"], "--primes", "auto"])
    rep = json.loads(out)
    assert rep["count"] == "120" and rep["primes"] == [7, 11, 13]


def test_reduce_to4regular_map(files, tmp_path):
    path = tmp_path / "g4.json"
    _, out, _ = run(["reduce", "to4regular", "--input", files["6dipole"], "--p", "7", "--out", str(path)])
    manifest = json.loads(out)["manifest"]
    assert manifest["profile"] == {"6": 2}
    _, out, _ = run(["count", "--engine", "merge", "--modulus", "7", str(path)])
    assert json.loads(out)["count"] == str(120 * int(manifest["factor"]) % 7)


def test_reduce_planar(files):
    _, out, _ = run(["reduce", "planar", "--input", files["k5"], "--p", "3", "--count"])
    rep = json.loads(out)
    assert rep["count_mod_p"] == 132 % 3 and rep["manifest"]["n_crossings"] == 5


def test_reduce_atrails(files, tmp_path):
    path = tmp_path / "a.json"
    run(["reduce", "atrails", "--input", files["4dipole"], "--out", str(path)])
    _, out, _ = run(["count", "--mode", "atrail", "--engine", "merge", str(path)])
    assert json.loads(out)["count"] == "24"


def test_reduce_ap_estimate(files):
    _, out, _ = run(["reduce", "ap", "--input", files["4dipole"], "--eps", "0.5", "--estimate"])
    assert abs(json.loads(out)["estimate_float"] - 6) < 0.5


def test_chain_commands():
    _, out, _ = run(["chain", "--d", "4", "--layers", "3"])
    assert json.loads(out)["support"] > 0
    _, out, _ = run(["chain", "calibrate", "--d", "4", "--eps", "0.1"])
    rep = json.loads(out)
    assert rep["within_bound"] and rep["T"] >= rep["minimal_T"]


def test_experiments():
    _, out, _ = run(["experiment", "region-scan", "--n", "2"])
    assert json.loads(out)["classes"]["outside"] == 0
    _, out, _ = run(["experiment", "region-scan", "--n", "2", "--csv"])
    assert out.splitlines()[0] == "alpha,beta,gamma,class,vertices"
    _, out, _ = run(["experiment", "closure", "--trials", "50", "--seed", "1"])
    assert json.loads(out)["classes"]["outside"] == 0


def test_unknown_command():
    assert run(["bogus"])[0] == 2


def test_missing_file():
    code, _, err = run(["count", "/no/such/file.json"])
    assert code == 1 and "error" in err


def test_output_independent_of_threads(files):
    a = run(["count", files["k5"]], RunConfig(threads=1))[1]
    b = run(["count", files["k5"]], RunConfig(threads=4))[1]
    assert a == b


def test_seed_from_config():
    a = run(["experiment", "closure", "--trials", "20"], RunConfig(threads=1, seed=3))[1]
    b = run(["experiment", "closure", "--trials", "20", "--seed", "3"])[1]
    assert a == b
