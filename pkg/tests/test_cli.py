import json

import pytest

from mc_moduli import __version__, fixtures, io
from mc_moduli.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip().startswith("{") else out), err


@pytest.fixture
def descriptors(tmp_path):
    def write(name, field="Q"):
        doc, A, mu = fixtures.build(name, field)
        a, m = tmp_path / f"{name}.algebra.json", tmp_path / f"{name}.module.json"
        io.dump(doc, a)
        io.dump(io.cochain_to_dict(mu), m)
        return str(a), str(m)
    return write


def test_mc_check_fixture(capsys):
    code, rep, _ = run(capsys, "mc-check", "--fixture", "O_P1", "--no-timestamp")
    assert code == 0
    assert rep["result"]["isModule"] is True
    assert rep["version"] == __version__
    assert rep["parameters"]["fixture"] == "O_P1"


def test_mc_check_files(capsys, descriptors):
    a, m = descriptors("line")
    code, rep, _ = run(capsys, "mc-check", "--algebra", a, "--module", m, "--no-timestamp")
    assert code == 0 and rep["result"]["isModule"]
    assert rep["parameters"]["module"]["dims"] == [1, 2]


def test_stability_unstable(capsys, descriptors):
    a, m = descriptors("O_plus_O(-2)")
    code, rep, _ = run(capsys, "stability", "--algebra", a, "--module", m, "--character", "extremal",
                       "--fields", "2,3", "--no-timestamp")
    assert code == 0
    res = rep["result"]
    assert res["status"] == "Unstable"
    assert res["witness"]["profile"] == [1, 2, 3]
    assert rep["parameters"]["weights"] == [-4, 0, 1]


def test_stability_custom_character(capsys):
    code, rep, _ = run(capsys, "stability", "--fixture", "O_P1", "--character", "custom:-3,0,1",
                       "--fields", "2", "--mode", "exact-lift", "--no-timestamp")
    assert code == 0 and rep["result"]["status"] == "Stable"
    assert rep["result"]["generatedInLowestDegree"] is True


def test_deterministic_reports(capsys):
    argv = ["ext", "--fixture", "zero", "--no-timestamp"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    _, stamped, _ = run(capsys, "ext", "--fixture", "zero")
    assert "timestamp" in stamped and "timestamp" not in first


def test_malformed_json_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    code, _, err = run(capsys, "mc-check", "--algebra", str(bad), "--module", str(bad))
    assert code == 2
    assert "malformed JSON" in err


def test_schema_violation_exit_2(capsys, tmp_path, descriptors):
    a, m = descriptors("line")
    doc = json.loads(open(m).read())
    doc["unexpected"] = 1
    path = tmp_path / "m.json"
    path.write_text(json.dumps(doc))
    assert run(capsys, "mc-check", "--algebra", a, "--module", str(path))[0] == 2


def test_unknown_flag_exit_2(capsys):
    assert run(capsys, "mc-check", "--fixture", "line", "--frobnicate")[0] == 2
    assert run(capsys, "stability", "--fixture", "line", "--character", "weird")[0] == 2


def test_domain_error_exit_1(capsys, tmp_path, descriptors):
    a, m = descriptors("O_P1")
    doc = json.loads(open(m).read())
    doc["action"][0]["matrix"] = [[5], [0]]
    path = tmp_path / "m.json"
    path.write_text(json.dumps(doc))
    code, rep, err = run(capsys, "ext", "--algebra", a, "--module", str(path))
    assert code == 1 and "Maurer-Cartan" in err
    code, rep, _ = run(capsys, "mc-check", "--algebra", a, "--module", str(path), "--no-timestamp")
    assert code == 0 and rep["result"]["isModule"] is False


def test_dg_verify_text(capsys):
    code, out, _ = run(capsys, "dg-verify", "--fixture", "chain", "--format", "text", "--no-timestamp")
    assert code == 0
    assert "qSquaredZero: true" in out
    assert "L1[x^2](2<-0)[0,0] - L1[x](1<-0)[0,0]*L1[x](2<-1)[0,0]" in out


def test_ideal_with_dims(capsys, descriptors):
    a, _ = descriptors("chain")
    code, rep, _ = run(capsys, "ideal", "--algebra", a, "--window", "0", "2", "--dims", "1,1,1", "--no-timestamp")
    assert code == 0 and rep["result"]["count"] == 1


def test_scan_mc(capsys):
    code, rep, _ = run(capsys, "scan-mc", "--fixture", "chain", "--field", "Fp:2", "--orbits", "--no-timestamp")
    assert code == 0
    assert rep["result"]["mcPoints"] == rep["result"]["mcPointsByIdeal"] == 4
    assert run(capsys, "scan-mc", "--fixture", "chain", "--field", "Q")[0] == 1


def test_hilbert_subcommands(capsys):
    assert run(capsys, "hilbert", "macaulay", "--a", "5", "--t", "2", "--no-timestamp")[1]["result"]["bound"] == 7
    rep = run(capsys, "hilbert", "gotzmann", "--values", "1,2,5", "--no-timestamp")[1]
    assert rep["result"]["macaulayOK"] is False
    rep = run(capsys, "hilbert", "eval", "--coeffs", "1,1", "--at=-1,0,3", "--no-timestamp")[1]
    assert rep["result"]["values"] == {"-1": 0, "0": 1, "3": 4}
    assert run(capsys, "hilbert", "primitive", "--coeffs", "2,4", "--no-timestamp")[1]["result"]["primitive"] is False
    rep = run(capsys, "hilbert", "extend", "--fixture", "line", "--top", "5", "--no-timestamp")[1]
    assert rep["result"]["hilbertFunction"] == [1, 2, 3, 4, 5, 6]


def test_pipeline(capsys):
    code, rep, _ = run(capsys, "hilbert", "pipeline", "--fixture", "O_P1", "--p-prime", "1", "--top", "5",
                       "--no-timestamp")
    assert code == 0
    assert rep["result"]["combined"] == "Stable"
    assert rep["result"]["parameters"]["D"] == 5


def test_fixture_command(capsys, tmp_path):
    code, rep, _ = run(capsys, "fixture", "quadric", "--out-dir", str(tmp_path), "--no-timestamp")
    assert code == 0 and len(rep["result"]["written"]) == 2
    A = io.load_algebra(tmp_path / "quadric.algebra.json")
    assert A.dims()[:2] == [3, 5]
    assert run(capsys, "fixture", "--list", "--no-timestamp")[0] == 0


def test_out_file(capsys, tmp_path):
    out = tmp_path / "r.json"
    assert main(["ext", "--fixture", "simple", "--out", str(out), "--no-timestamp"]) == 0
    assert json.loads(out.read_text())["result"]["dims"] == [0, 1]
