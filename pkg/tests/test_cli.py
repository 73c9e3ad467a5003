import json

import pytest

from racbem import cli


def run(args, monkeypatch, tmp_path):
    monkeypatch.setenv(cli.OUT_DIR_ENV, str(tmp_path))
    return cli.main(args)


def test_generate_deterministic_bytes(tmp_path, monkeypatch):
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    assert run(["generate", "--n", "2", "--seed", "3", "--out", str(a)], monkeypatch, tmp_path) == 0
    assert run(["generate", "--n", "2", "--seed", "3", "--out", str(b)], monkeypatch, tmp_path) == 0
    assert a.read_bytes() == b.read_bytes()


def test_remez_then_phase_factors(tmp_path, monkeypatch):
    poly = tmp_path / "p.json"
    pf = tmp_path / "pf.json"
    code = run(
        ["remez", "--target", "inverse", "--kappa", "2", "--degree", "6",
         "--parity", "even", "--out", str(poly)],
        monkeypatch, tmp_path,
    )
    assert code == 0
    body = json.loads(poly.read_text())
    assert body["config"]["target"] == "inverse"
    assert body["sup_error"] > 0
    assert run(["phase-factors", "--poly", str(poly), "--out", str(pf)], monkeypatch, tmp_path) == 0
    out = json.loads(pf.read_text())
    assert out["residual"] < 1e-20
    assert len(out["phi"]) == 7 == len(out["varphi"])


def test_exact_mode_deterministic_output(tmp_path, monkeypatch):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    base = ["racbem-bench", "--n", "2", "--seed", "5", "--shots", "0", "--sigma", "0"]
    assert run(base + ["--out", str(a)], monkeypatch, tmp_path) == 0
    assert run(base + ["--out", str(b)], monkeypatch, tmp_path) == 0
    da, db = json.loads(a.read_text()), json.loads(b.read_text())
    del da["reports"][0]["wall_time"], db["reports"][0]["wall_time"]
    assert da == db
    assert da["config"]["shots"] == 0 and da["config"]["sigma"] == 0.0


def test_config_file_with_flag_override(tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 2, "seed": 9, "depth": 4}))
    out = tmp_path / "c.txt"
    code = run(
        ["generate", "--config", str(cfg), "--seed", "4", "--out", str(out)],
        monkeypatch, tmp_path,
    )
    assert code == 0
    text = out.read_text()
    assert "NAME racbem-4" in text  # flag wins over config seed
    assert text.count("LAYER") == 4  # depth from config


def test_exit_codes(tmp_path, monkeypatch):
    # missing required option -> schema (2)
    assert run(["generate", "--n", "2"], monkeypatch, tmp_path) == 2
    # unreadable input file -> io (3)
    assert run(["phase-factors", "--poly", str(tmp_path / "nope.json")], monkeypatch, tmp_path) == 3
    # module-level contract violation -> 4
    assert run(
        ["linpack", "--n", "2", "--seed", "1", "--kappa", "2", "--d", "5", "--exact"],
        monkeypatch, tmp_path,
    ) == 4
    # unknown config key -> schema (2)
    bad = tmp_path / "bad.json"
    bad.write_text('{"wat": 1}')
    assert run(["generate", "--config", str(bad), "--n", "2", "--seed", "1"], monkeypatch, tmp_path) == 2


def test_error_line_is_machine_parsable(tmp_path, monkeypatch, capsys):
    run(["generate", "--n", "2"], monkeypatch, tmp_path)
    err = capsys.readouterr().err.strip().splitlines()
    rec = json.loads(err[-1])
    assert rec["error"] == "schema"


def test_linpack_artifacts(tmp_path, monkeypatch):
    out = tmp_path / "lp.json"
    reports = tmp_path / "lp.jsonl"
    csv_path = tmp_path / "lp.csv"
    code = run(
        ["linpack", "--n", "2", "--seed", "11", "--kappa", "2", "--d", "6",
         "--exact", "--out", str(out), "--reports", str(reports), "--csv", str(csv_path)],
        monkeypatch, tmp_path,
    )
    assert code == 0
    body = json.loads(out.read_text())
    rep = body["report"]
    assert rep["relative_error"] <= rep["params"]["relative_error_bound"]
    line = json.loads(reports.read_text().splitlines()[0])
    assert line["task"] == "linpack"
    assert csv_path.exists()


def test_metts_cma_matches_estimate(tmp_path, monkeypatch):
    out = tmp_path / "m.json"
    cma = tmp_path / "m.csv"
    code = run(
        ["metts", "--n", "2", "--seed", "15", "--beta", "1", "--steps", "20",
         "--exact", "--out", str(out), "--cma", str(cma)],
        monkeypatch, tmp_path,
    )
    assert code == 0
    body = json.loads(out.read_text())
    last = cma.read_text().strip().splitlines()[-1].split(",")
    assert float(last[-1]) == pytest.approx(body["estimate"])


def test_default_out_dir_env(tmp_path, monkeypatch):
    assert run(["generate", "--n", "2", "--seed", "1"], monkeypatch, tmp_path) == 0
    assert (tmp_path / "racbem-n2-s1.txt").exists()


def test_sv_stats(tmp_path, monkeypatch):
    out = tmp_path / "sv.json"
    code = run(
        ["sv-stats", "--n", "2", "--seed", "5", "--samples", "10", "--out", str(out)],
        monkeypatch, tmp_path,
    )
    assert code == 0
    body = json.loads(out.read_text())
    assert body["samples"] == 10
    assert 0 < body["min"] <= body["max"] <= 1 + 1e-12


def test_spectral_artifact(tmp_path, monkeypatch):
    out = tmp_path / "sp.json"
    code = run(
        ["spectral", "--n", "2", "--seed", "3", "--exact", "--points", "3",
         "--length", "5", "--out", str(out)],
        monkeypatch, tmp_path,
    )
    assert code == 0
    body = json.loads(out.read_text())
    assert body["E"] == [0.0, 0.5, 1.0]
    assert all(s >= 0 for s in body["s"])


def test_timeseries_artifact(tmp_path, monkeypatch):
    out = tmp_path / "ts.json"
    code = run(
        ["timeseries", "--n", "2", "--seed", "3", "--exact", "--t-grid", "1",
         "--lengths-real", "3", "--lengths-imag", "3",
         "--etas-real", "1", "--etas-imag", "1", "--out", str(out)],
        monkeypatch, tmp_path,
    )
    assert code == 0
    body = json.loads(out.read_text())
    assert len(body["s"]) == 1 == len(body["s_exact"])
