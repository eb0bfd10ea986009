import numpy as np
import pytest

from ltft import (
    DigitalSignal,
    LtftParams,
    PhaseSpaceBox,
    bench_reconstruction,
    complexity_count,
    complexity_per_point_bound,
    dft,
    make_test_signal,
    scale_to_box,
)
from ltft.core import SampleSet, atom_support_length
from ltft.lds import generate_unit_points

RATE = 64.0


def test_test_signal_deterministic_and_normalized():
    a = make_test_signal(1024, RATE, seed=0)
    b = make_test_signal(1024, RATE, seed=0)
    assert np.array_equal(a.samples, b.samples)
    assert np.max(np.abs(a.samples)) == pytest.approx(1.0)
    c = make_test_signal(1024, RATE, seed=1)
    assert not np.array_equal(a.samples, c.samples)


def test_test_signal_band_limited(params):
    sig = make_test_signal(2048, RATE)
    spec = np.abs(dft(sig).bins)
    m = sig.m
    freqs = np.arange(m) * RATE / m
    # positive-frequency content concentrates inside [b0, b1] plus skirts
    band = (freqs >= params.b0 * 0.7) & (freqs <= params.b1 * 1.3)
    mirror = (freqs >= RATE - params.b1 * 1.3) & (freqs <= RATE - params.b0 * 0.7)
    inside = np.sum(spec[band | mirror] ** 2)
    total = np.sum(spec**2)
    assert inside / total > 0.999


def _box(m):
    half = m / (2.0 * RATE)
    return PhaseSpaceBox(t_lo=-half, t_hi=half, freq_hi=RATE)


def test_complexity_constant_branch(params):
    # all samples in the high band: every atom has the minimal support
    box = _box(256)
    pts = np.column_stack(
        [np.zeros(50), np.linspace(params.b1, RATE, 50), np.full(50, 0.5)]
    )
    samples = SampleSet(pts, box=box, generator="regular")
    c_actual, _ = complexity_count(samples, params, RATE)
    assert c_actual == 50 * round(RATE * params.gamma / params.b1)


def test_complexity_prediction_tracks_actual(params):
    n = 1 << 10
    samples = scale_to_box(generate_unit_points("hammersley", n, 3), _box(1024))
    c_actual, a_pred = complexity_count(samples, params, RATE)
    kappa = 10.0
    budget = kappa * RATE * (params.gamma / params.b0) * np.log(n) ** 2
    assert abs(c_actual - a_pred) <= budget


@pytest.mark.parametrize("log_n", [8, 10, 12, 14])
def test_complexity_per_point_bound(params, log_n):
    n = 1 << log_n
    samples = scale_to_box(generate_unit_points("hammersley", n, 3), _box(1024))
    c_actual, _ = complexity_count(samples, params, RATE)
    assert c_actual / n <= complexity_per_point_bound(params, RATE)


def test_per_point_bound_value(params):
    # gamma (1 + ln(C2/C1) + (1-C2)/C2) + 1 at the defaults
    expected = 6.0 * (1.0 + np.log(4.0) + 1.5) + 1.0
    assert complexity_per_point_bound(params, RATE) == pytest.approx(expected)


def test_bench_rows_monotone(params):
    signal = make_test_signal(256, RATE)
    rows = bench_reconstruction(
        signal, params, ["hammersley"], [1, 2, 4, 8], mc_seeds=range(3)
    )
    errs = [r.rel_error for r in rows]
    assert all(b <= 1.5 * a for a, b in zip(errs, errs[1:]))
    assert [r.n for r in rows] == [256, 512, 1024, 2048]


def test_bench_mc_rows_average(params):
    signal = make_test_signal(256, RATE)
    rows = bench_reconstruction(signal, params, ["mc"], [4], mc_seeds=range(3))
    assert rows[0].method == "mc"
    assert rows[0].rel_error_std > 0
