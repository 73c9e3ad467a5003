import csv
import json
import math

import numpy as np
import pytest

from racbem import gates as G
from racbem.blockenc import BlockEncoding, extract_block
from racbem.tasks import (
    BenchmarkReport,
    MettsTrace,
    canonical_quadratic,
    generate_instance,
    linpack_run,
    measure_success,
    metts_run,
    racbem_benchmark,
    spectral_run,
    time_series_run,
    write_cma_csv,
    write_csv,
    write_jsonl,
)


def identity_ua(n):
    return BlockEncoding(G.QuantumCircuit(n + 1), n, m=1)


def test_canonical_quadratic_is_square():
    q = canonical_quadratic()
    xs = np.linspace(-1, 1, 11)
    assert np.allclose(q(xs), xs**2, atol=1e-12)


def test_report_relative_error():
    r = BenchmarkReport("t", 0, {}, 0.11, 0.10, {}, 0.0)
    assert r.relative_error == pytest.approx(0.1)
    z = BenchmarkReport("t", 0, {}, 0.0, 0.0, {}, 0.0)
    assert z.relative_error == 0.0
    inf = BenchmarkReport("t", 0, {}, 0.1, 0.0, {}, 0.0)
    assert math.isinf(inf.relative_error)


def test_writers(tmp_path):
    r = BenchmarkReport("t", 3, {"n": 2}, 0.5, 0.5, {"total": 4}, 0.01)
    jl = tmp_path / "r.jsonl"
    cv = tmp_path / "r.csv"
    write_jsonl([r], str(jl))
    rec = json.loads(jl.read_text())
    assert rec["params"]["n"] == 2 and rec["relative_error"] == 0.0
    write_csv([r], str(cv))
    rows = list(csv.DictReader(cv.open()))
    assert rows[0]["params.n"] == "2"
    assert rows[0]["gates.total"] == "4"


def test_generate_instance_deterministic():
    a = generate_instance(2, 7)
    b = generate_instance(2, 7)
    assert a.circuit == b.circuit
    assert a.circuit.depth == 7  # default depth rule for n = 2


def test_measure_success_modes():
    ua = generate_instance(2, 5)
    p_exact = measure_success(ua.circuit, 1, 0, None)
    assert 0.0 <= p_exact <= 1.0
    p_sampled = measure_success(ua.circuit, 1, 8192, np.random.default_rng(0))
    assert abs(p_sampled - p_exact) < 5 * np.sqrt(p_exact * (1 - p_exact) / 8192) + 1e-3
    with pytest.raises(ValueError):
        measure_success(ua.circuit, 1, 100, None)


def test_racbem_benchmark_exact_mode_is_exact():
    r = racbem_benchmark(2, 11, shots=0)
    assert r.p_measured == pytest.approx(r.p_exact, abs=1e-12)
    A = extract_block(generate_instance(2, 11))
    assert r.p_exact == pytest.approx(float(np.linalg.norm(A[:, 0]) ** 2))
    assert r.gate_counts["total"] > 0


def test_linpack_exact_bound_holds():
    r = linpack_run(2.0, 2, 6, seed=11, shots=0)
    assert r.relative_error <= r.params["relative_error_bound"]
    assert r.p_exact >= r.params["p_exact_floor"]
    assert r.params["p_exact_above_floor"]
    assert r.gate_counts["total"] <= r.params["gate_budget"]


def test_linpack_validation():
    with pytest.raises(ValueError):
        linpack_run(0.5, 2, 4, 0)
    with pytest.raises(ValueError):
        linpack_run(2.0, 2, 5, 0)  # odd degree


def test_time_series_identity_instance():
    # A = I: h(A) = I, so s(t) = e^{it} for any t
    res = time_series_run(
        2, 0, ts=(0.5, 1.0), lengths_real=(5, 5), lengths_imag=(5, 5),
        etas_real=(1.0, 1.0), etas_imag=(1.0, 1.0), ua=identity_ua(2),
    )
    for t, s, s_ref in zip(res.grid, res.values, res.exact):
        assert s_ref == pytest.approx(complex(np.cos(t), np.sin(t)), abs=1e-12)
        assert abs(s - s_ref) < 2e-2
    assert len(res.reports) == 4
    for r in res.reports:
        # p_measured carries the polynomial fit error, p_exact does not
        assert r.p_measured == pytest.approx(r.p_exact, abs=5e-3)


def test_time_series_parameter_validation():
    with pytest.raises(ValueError):
        time_series_run(2, 0, ts=(1.0,), lengths_real=(3, 3),
                        lengths_imag=(3,), etas_real=(1.0,), etas_imag=(1.0,))
    with pytest.raises(ValueError):
        time_series_run(2, 0, ts=(1.0,), lengths_real=(3,), lengths_imag=(3,),
                        etas_real=(0.5,), etas_imag=(1.0,))


def test_spectral_run_basics():
    res = spectral_run(2, 3, energies=(0.0, 0.5, 1.0), lengths=7)
    for s in res.values:
        assert s.real >= 0.0
    for s_ref in res.exact:
        assert s_ref.real > 0.0
    assert len(res.reports) == 3
    assert res.reports[0].params["length"] == 7


def test_metts_trace_validates_cma():
    with pytest.raises(ValueError):
        MettsTrace(
            states=(0, 1), energies=(1.0, 2.0), next_states=(1, 0),
            cma=(1.0, 1.0), estimate=1.0, exact=1.0, resamples=0, flagged=0,
        )


def test_metts_beta_zero_uniform_limit():
    trace, report = metts_run(0.0, 400, 2, seed=8, shots=0)
    # beta = 0: thermal energy is the eigenvalue mean, chain is uniform
    assert report.p_exact == pytest.approx(trace.exact)
    counts = np.bincount(trace.next_states, minlength=4)
    assert counts.min() > 0.5 * 100  # near-uniform visits over 4 states
    spread = max(trace.energies) - min(trace.energies)
    band = 4 * (spread / 2) / np.sqrt(400) + 1e-12
    assert abs(trace.estimate - trace.exact) < band + 0.05


def test_metts_exact_mode_deterministic():
    a, _ = metts_run(1.0, 50, 2, seed=15, shots=0)
    b, _ = metts_run(1.0, 50, 2, seed=15, shots=0)
    assert a.states == b.states
    assert a.energies == b.energies


def test_metts_validation():
    with pytest.raises(ValueError):
        metts_run(-1.0, 10, 2, 0)
    with pytest.raises(ValueError):
        metts_run(1.0, 0, 2, 0)
    with pytest.raises(ValueError):
        metts_run(1.0, 10, 2, 0, d_num=4)  # even numerator degree


def test_write_cma_csv(tmp_path):
    trace, _ = metts_run(1.0, 10, 2, seed=15, shots=0)
    path = tmp_path / "cma.csv"
    write_cma_csv(trace, str(path))
    rows = list(csv.DictReader(path.open()))
    assert len(rows) == 10
    assert float(rows[-1]["cma"]) == pytest.approx(trace.estimate)
    assert int(rows[0]["step"]) == 1
