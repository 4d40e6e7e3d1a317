import json

import pytest

from cubechains import corpus, jsonio
from cubechains.cli import main
from cubechains.cube_cat import gamma


@pytest.fixture
def files(tmp_path):
    sq = tmp_path / "square.json"
    jsonio.write_file(str(sq), jsonio.precubical_to_json(corpus.square()))
    g = tmp_path / "gamma.json"
    jsonio.write_file(str(g), jsonio.cubemap_to_json(gamma(1, 2)))
    return tmp_path


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_enum_and_infeasible(capsys):
    code, out, _ = run(capsys, "cubecat", "enum", "--cat", "hat_box_s", "--m", "2", "--n", "2")
    assert code == 0 and json.loads(out)["homs"]["2,2"]["size"] == 4
    code, _, err = run(capsys, "cubecat", "enum", "--cat", "hat_box", "--maxdim", "4")
    assert code == 3 and "infeasible" in err


def test_env_override(capsys, monkeypatch):
    monkeypatch.setenv("CUBECHAINS_MAXDIM", "2")
    code, out, _ = run(capsys, "cubecat", "enum", "--cat", "box")
    assert code == 0 and json.loads(out)["max_dim"] == 2
    monkeypatch.setenv("CUBECHAINS_MAXDIM", "nine")
    assert run(capsys, "cubecat", "enum", "--cat", "box")[0] == 2


def test_thick_check_exit_codes(capsys):
    assert run(capsys, "cubecat", "thick-check", "--cat", "hat_box")[0] == 0
    code, out, _ = run(capsys, "cubecat", "thick-check", "--cat", "non_thick_fixture")
    doc = json.loads(out)
    assert code == 1
    assert doc["counterexample"]["endo_factor"] == jsonio.cubemap_to_json(gamma(1, 2))


def test_factorize_and_metric(capsys, files):
    code, out, _ = run(capsys, "cubecat", "factorize", "--map", str(files / "gamma.json"))
    assert code == 0 and json.loads(out)["endo"]["table"] == [[0, 0], [1, 0], [1, 0], [1, 1]]
    code, out, _ = run(capsys, "metric", "t-eval", "--map", str(files / "gamma.json"),
                       "--point", "0.2,0.7")
    assert code == 0 and json.loads(out)["image"] == [0.7, 0.2]
    assert run(capsys, "metric", "t-eval", "--map", str(files / "gamma.json"),
               "--point", "0.2")[0] == 2
    code, out, _ = run(capsys, "metric", "check", "--dims", "2", "--samples", "50", "--seed", "1")
    assert code == 0 and json.loads(out)["ok"]


def test_aset_and_chains_pipeline(capsys, files):
    free = files / "free.json"
    cat = files / "cat.json"
    assert run(capsys, "aset", "free", "--base", str(files / "square.json"),
               "--cat", "hat_box_s", "--out", str(free))[0] == 0
    code, out, _ = run(capsys, "aset", "validate", "--aset", str(free))
    assert code == 0 and json.loads(out)["ok"]
    assert run(capsys, "chains", "build", "--aset", str(free), "--from", "00", "--to", "11",
               "--n", "2", "--out", str(cat))[0] == 0
    code, out, _ = run(capsys, "chains", "homology", "--cat", str(cat), "--maxdeg", "4")
    doc = json.loads(out)
    assert code == 0 and doc["pi0"] == 1 and doc["truncated_at"] == 4
    assert doc["H"]["0"] == {"betti": 1, "torsion": []}
    code, out, _ = run(capsys, "chains", "homology", "--cat", str(cat), "--no-shortcuts")
    assert code == 0 and json.loads(out)["components"][0]["method"] == "nerve"
    code, out, _ = run(capsys, "chains", "compare", "--base", str(files / "square.json"),
                       "--from", "00", "--to", "11", "--n", "2")
    assert code == 0 and json.loads(out)["agree"]
    assert run(capsys, "chains", "build", "--aset", str(free), "--from", "zz", "--to", "11",
               "--n", "2")[0] == 2


def test_cosk_command(capsys, files):
    sk = files / "skel.json"
    from cubechains.hda import labelled_cube_skeleton
    jsonio.write_file(str(sk), jsonio.skeleton_to_json(labelled_cube_skeleton(["a", "b"])))
    code, out, _ = run(capsys, "aset", "cosk", "--skeleton", str(sk), "--maxdim", "2")
    assert code == 0 and json.loads(out)["counts"] == [4, 4, 4]


def test_hda_compose(capsys, files):
    report = files / "out.json"
    code, _, _ = run(capsys, "hda", "compose", "--left", "a", "--right", "ā",
                     "--sync", "a~ā:tau", "--report", str(report))
    doc = json.loads(report.read_text())
    assert code == 0 and doc["models"]["coskeletal"]["aggregate"]["pi0"] == 2
    code, out, _ = run(capsys, "hda", "compose", "--left", "a,b", "--right", "c")
    assert code == 0 and json.loads(out)["agree"]
    assert run(capsys, "hda", "compose", "--left", "a,b", "--right", "c,d")[0] == 3
    assert run(capsys, "hda", "compose", "--left", "a", "--right", "b", "--sync", "a-b")[0] == 2


def test_usage_errors(capsys, files):
    assert run(capsys, "chains", "homology")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "aset", "validate", "--aset", str(files / "missing.json"))[0] == 2


def test_verify_paper_deterministic(capsys, files):
    a, b = files / "a.json", files / "b.json"
    assert run(capsys, "verify-paper", "--maxdim", "2", "--report", str(a))[0] == 0
    assert run(capsys, "verify-paper", "--maxdim", "2", "--report", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_paper_reports_fixture_counterexample(capsys):
    code, out, _ = run(capsys, "verify-paper", "--json", "--category", "non_thick_fixture")
    doc = json.loads(out)
    thick = doc["checks"][2]
    assert code == 1 and not thick["passed"]
    assert thick["counterexample"]["endo_factor"] == gamma(1, 2).key()


def test_verify_paper_vacuous_at_dimension_one(capsys):
    code, out, _ = run(capsys, "verify-paper", "--maxdim", "1")
    assert code == 0 and "10/10 checks passed" in out
