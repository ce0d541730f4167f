import json

import numpy as np
import pytest

from corona_lab.cli import main
from corona_lab.corpus import CorpusParams, gen_corpus, generate_instances
from corona_lab.errors import ParseError
from corona_lab.scenario import identity_suite, load_scenario, parse_scenario, run

WORKED = {
    "schema_version": 1,
    "kind": "solve-corona",
    "seed": 1,
    "ideal": {"zeros": [[[0.0, 0.0], 1]]},
    "tuple": {"entries": [[[0.8, 0.0], [0.1, 0.0]], [[0.5, 0.0]]]},
}
SMALL = {"entries": [[[0.7, 0.0], [0.1, 0.0]], [[0.5, 0.0]]]}


def write(path, obj):
    path.write_text(json.dumps(obj))
    return path


def test_worked_scenario_reproduces_solution():
    report = run(parse_scenario(WORKED))
    assert report.passed, report.checks
    u = report.solutions["transfer"]["solution"]
    u1 = u[0]["num"] if isinstance(u[0], dict) else u[0]
    u2 = u[1]["num"] if isinstance(u[1], dict) else u[1]
    assert abs(u1[0][0] - 0.8 / 0.89) < 1e-12
    assert abs(u2[0][0] - 0.5 / 0.89) < 1e-12 and abs(u2[1][0] + 0.16 / 0.89) < 1e-12
    assert set(report.to_json()) == {"schema_version", "scenario", "checks", "solutions",
                                     "seed", "wall_ms"}
    for c in report.checks:
        assert set(c) == {"name", "value", "bound", "pass"}


@pytest.mark.parametrize("kind,extra", [
    ("verify-lemma21", {"tuple": {"random": {"n": 5, "trials": 5, "seed": 2}}}),
    ("verify-lemma22", {"epsilon": 0.5, "tuple": SMALL}),
    ("solve-ideal", {"h": {"random": {"seed": 3, "max_degree": 2}}}),
    ("solve-wolff", {"h": [[0.2, 0.0], [0.02, 0.0]], "tuple": SMALL}),
    ("check-bounds", {"epsilon": 0.5}),
])
def test_each_kind_runs_and_passes(kind, extra):
    scen = dict(WORKED, kind=kind, **extra)
    report = run(parse_scenario(scen))
    assert report.passed, report.checks


def test_errors_become_failing_checks():
    scen = dict(WORKED, tuple={"entries": [[[0.0, 0.0], [1.0, 0.0]], [[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]]})
    report = run(parse_scenario(scen))
    assert not report.passed
    assert report.solutions["error"]["type"] == "CommonZeroInDisk"


@pytest.mark.parametrize("bad,field", [
    ({"schema_version": 1}, "kind"),
    (dict(WORKED, kind="nope"), "kind"),
    ({k: v for k, v in WORKED.items() if k != "ideal"}, "ideal"),
    (dict(WORKED, tolerances={"made_up": 1}), "tolerances"),
    (dict(WORKED, kind="solve-ideal"), "h"),
])
def test_parse_errors_name_the_field(bad, field):
    with pytest.raises(ParseError) as err:
        parse_scenario(bad)
    assert err.value.field == field


def test_malformed_json_reports_line(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n "kind": "solve-corona",\n "seed": ,\n}')
    with pytest.raises(ParseError) as err:
        load_scenario(path)
    assert err.value.line == 3


def test_tolerance_scale_env(monkeypatch):
    monkeypatch.setenv("CORONA_LAB_TOL_SCALE", "1e-30")
    report = run(parse_scenario(dict(WORKED, tuple={"entries": [[[0.8, 0.0], [0.1, 0.3]], [[0.5, 0.0]]]})))
    assert not report.passed
    monkeypatch.setenv("CORONA_LAB_TOL_SCALE", "abc")
    with pytest.raises(ParseError):
        parse_scenario(WORKED).tol("eq4")
    assert main(["verify-identities", "--trials", "1"]) == 2


def test_identity_suite_passes():
    assert all(c["pass"] for c in identity_suite(trials=30, seed=5))


def test_generated_instances_satisfy_subalgebra_metadata(tmp_path):
    paths = gen_corpus(tmp_path, 5, seed=11)
    for p in paths:
        scen = json.loads(p.read_text())
        meta = scen["metadata"]
        for g in meta["gramian_at_zeros"]:
            assert abs(g - meta["fc_norm_sq"]) <= 1e-12
        assert meta["fc_norm_sq"] <= 1
    insts = generate_instances(3, 11, CorpusParams())
    first = json.loads(paths[0].read_text())
    assert first["tuple"] == insts[0].F.tuple.to_json()


def test_cli_gen_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["gen", "--count", "4", "--seed", "9", "--out-dir", str(a)]) == 0
    assert main(["gen", "--count", "4", "--seed", "9", "--out-dir", str(b)]) == 0
    for pa in sorted(a.glob("*.json")):
        assert pa.read_text() == (b / pa.name).read_text()


def test_cli_run_exit_codes(tmp_path, capsys):
    good = write(tmp_path / "good.json", WORKED)
    out = tmp_path / "good.report.json"
    assert main(["run", "--scenario", str(good), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["checks"]

    failing = write(tmp_path / "fail.json", dict(WORKED, tolerances={"corona_residual": 0.0,
                                                                     "bezout": 0.0, "eq4": 0.0,
                                                                     "orthogonality": 0.0,
                                                                     "corona_constant": 0.0},
                                                 tuple={"entries": [[[0.3, 0.1], [0.2, 0.3], [0.1, -0.2]],
                                                                    [[0.5, 0.0], [0.0, 0.1]]]}))
    assert main(["run", "--scenario", str(failing)]) == 1

    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert main(["run", "--scenario", str(bad)]) == 2


def test_cli_run_directory_parallel_matches_serial(tmp_path):
    main(["gen", "--count", "4", "--seed", "3", "--out-dir", str(tmp_path / "c")])
    assert main(["run", "--scenario", str(tmp_path / "c"), "--out", str(tmp_path / "r1"),
                 "--jobs", "2"]) == 0
    assert main(["run", "--scenario", str(tmp_path / "c"), "--out", str(tmp_path / "r2")]) == 0
    for p in sorted((tmp_path / "r1").glob("*.json")):
        a = json.loads(p.read_text())
        b = json.loads((tmp_path / "r2" / p.name).read_text())
        a.pop("wall_ms"), b.pop("wall_ms")
        assert a == b


def test_cli_verify_identities(capsys):
    assert main(["verify-identities", "--n-max", "6", "--trials", "20", "--seed", "1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["seed"] == 1 and all(c["pass"] for c in out["checks"])


def test_dense_dump_for_constant_tuple():
    scen = {"schema_version": 1, "kind": "verify-lemma21",
            "tuple": {"entries": [[[1.0, 0.0]], [[2.0, 0.0]], [[3.0, 0.0]]]}}
    report = run(parse_scenario(scen))
    assert report.passed
    dense = np.array(report.solutions["q_dense"])
    assert dense.shape[:2] == (3, 3)
