import json
from pathlib import Path

import pytest

from quasibang.harness import cli
from quasibang.harness.config import DEFAULTS, ConfigError, load_config, load_schema, parse_config
from quasibang.harness.report import VerificationReport, report_csv, report_json
from quasibang.harness.runner import SuiteRuntimeError, run_suite
from quasibang.harness.suites import SUITE_DESCRIPTIONS, SUITE_NAMES, CheckRecord

CONFIGS = Path(__file__).parent / "configs"
BASE = {"generator": {"kind": "analytic", "C": 1.0}, "suites": ["envelope"]}


def test_defaults_filled():
    cfg = parse_config(BASE)
    assert cfg.J == DEFAULTS["J"]
    assert cfg.spacing == 1e-3
    assert cfg.random_sets == {"count": 100, "max_components": 4, "min_measure": 0.05}
    assert cfg.raw["seed"] == 0


def test_partial_nested_defaults_merge():
    cfg = parse_config({**BASE, "random_sets": {"count": 3}})
    assert cfg.random_sets["count"] == 3
    assert cfg.random_sets["max_components"] == 4


def test_unknown_suite_pointer():
    with pytest.raises(ConfigError) as exc:
        parse_config({**BASE, "suites": ["envelope", "theorem-c"]})
    assert exc.value.pointer == "/suites/1"


def test_unknown_key_rejected():
    with pytest.raises(ConfigError):
        parse_config({**BASE, "colour": "red"})


def test_non_monotone_table_is_generator_error():
    with pytest.raises(ConfigError, match="Generator invariant violated") as exc:
        parse_config({**BASE, "generator": {"kind": "tabulated", "values": [3.0, 1.0]}})
    assert exc.value.pointer == "/generator"


def test_bad_interval_set_pointer():
    with pytest.raises(ConfigError) as exc:
        parse_config({**BASE, "interval_sets": [{"intervals": [[0.5, 0.2]]}]})
    assert exc.value.pointer == "/interval_sets/0"


def test_schema_enum_matches_suites():
    enum = load_schema()["properties"]["suites"]["items"]["enum"]
    assert tuple(enum) == SUITE_NAMES
    assert set(SUITE_DESCRIPTIONS) == set(SUITE_NAMES)


def test_load_config_errors(tmp_path):
    p = tmp_path / "c.json"
    p.write_text("{not json")
    with pytest.raises(ConfigError, match="invalid JSON"):
        load_config(p)
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "missing.json")


def _report():
    recs = [
        CheckRecord("b", "2", "d2", 0.5, "pass", 0.1),
        CheckRecord("a", "1", "d1", "inf", "inconclusive", 0.2),
        CheckRecord("b", "1", "d3", None, "fail", 0.3),
    ]
    return VerificationReport(recs, seed=1, version="0", config_digest="x")


def test_report_sorted_and_summarized():
    rep = _report()
    assert [(r.suite, r.check_id) for r in rep.records] == [("a", "1"), ("b", "1"), ("b", "2")]
    assert rep.summary == {"pass": 1, "fail": 1, "inconclusive": 1}
    assert rep.failed
    d = json.loads(report_json(rep))
    assert d["schema_version"] == 1
    assert "wall_time" not in d["records"][0]


def test_report_csv_header_and_rows():
    lines = report_csv(_report()).splitlines()
    assert lines[0] == "suite,check_id,inputs_digest,residual,verdict"
    assert lines[1] == "a,1,d1,inf,inconclusive"
    assert lines[2] == "b,1,d3,,fail"
    assert len(lines) == 4


def test_run_suite_byte_stable():
    cfg = load_config(CONFIGS / "pass.json")
    assert report_json(run_suite(cfg)) == report_json(run_suite(cfg))


def test_seed_changes_random_suites():
    cfg = parse_config({**BASE, "suites": ["minorant"], "random_sequences": 5})
    other = parse_config({**BASE, "suites": ["minorant"], "random_sequences": 5, "seed": 1})
    a = [r.inputs_digest for r in run_suite(cfg).records]
    b = [r.inputs_digest for r in run_suite(other).records]
    assert a != b


def test_runtime_error_locates_suite():
    with pytest.raises(SuiteRuntimeError) as exc:
        run_suite(load_config(CONFIGS / "runtime.json"))
    assert exc.value.suite == "theorem-a"


@pytest.mark.parametrize("name,code", [("pass", 0), ("fail", 1), ("bad", 2), ("runtime", 3)])
def test_verify_exit_codes(name, code, tmp_path):
    assert cli.main(["verify", "--config", str(CONFIGS / f"{name}.json"), "--out", str(tmp_path / "r")]) == code


def test_seed_precedence(tmp_path, monkeypatch):
    out = tmp_path / "r.json"
    args = ["verify", "--config", str(CONFIGS / "pass.json"), "--out", str(out)]
    monkeypatch.setenv("QB_SEED", "11")
    cli.main(args)
    assert json.loads(out.read_text())["environment"]["seed"] == 11
    cli.main(args + ["--seed", "12"])
    assert json.loads(out.read_text())["environment"]["seed"] == 12
    monkeypatch.setenv("QB_SEED", "-4")
    assert cli.main(args) == 2


def test_verify_csv_and_timing(tmp_path):
    out = tmp_path / "r.csv"
    cfg = str(CONFIGS / "pass.json")
    assert cli.main(["verify", "--config", cfg, "--format", "csv", "--out", str(out), "--timing"]) == 0
    assert out.read_text().splitlines()[0].endswith(",verdict,wall_time")


def test_unwritable_report_is_runtime_error(tmp_path):
    cfg = str(CONFIGS / "pass.json")
    assert cli.main(["verify", "--config", cfg, "--out", str(tmp_path / "no" / "r.json")]) == 3


def test_degree_command(capsys):
    assert cli.main(["degree", "--generator", '{"kind":"analytic","C":1.0}', "--sup-norm", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["value"] == 8
    assert cli.main(["degree", "--generator", '{"kind":"analytic"', "--sup-norm", "1"]) == 2
    assert cli.main(["degree", "--generator", '{"kind":"analytic"}', "--sup-norm", "1", "--length", "3"]) == 3


def test_profile_command(tmp_path):
    out = tmp_path / "p.csv"
    rc = cli.main([
        "profile", "--function", '{"kind":"sinusoid","k":2}',
        "--generator", '{"kind":"constant_ratio","a":6.283185307179586}',
        "--grid", "11", "--out", str(out),
    ])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "x,B_f,L_f" and len(lines) == 12


def test_construct_command(capsys):
    assert cli.main(["construct", "nonextendable", "--C", "2", "--K", "400"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["passes"] and out["searched_C"] == 2.0
    assert cli.main(["construct", "nonextendable", "--C", "2", "--K", "7"]) == 2


def test_minorant_command(capsys):
    assert cli.main(["minorant", "--values", "[1, 5, 2, 3, 1, 8]"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["contact_set"] == [0, 4, 5]
    assert cli.main(["minorant", "--values", "[1, -2]"]) == 2


def test_help_lists_suites(capsys):
    with pytest.raises(SystemExit):
        cli.main(["verify", "--help"])
    text = capsys.readouterr().out
    assert all(name in text for name in SUITE_NAMES)
