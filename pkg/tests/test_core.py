import numpy as np
import pytest

from ltft import (
    CoefficientVector,
    DigitalSignal,
    InvalidParameterError,
    LtftParams,
    PhaseSpaceBox,
    analyze,
    atom_support_length,
    dft,
    from_analytic,
    idft,
    ltft_atom_freq,
    ltft_atom_time,
    make_window,
    relative_error,
    synthesize,
    to_analytic,
)
from ltft.core import SampleSet
from ltft.lds import hammersley_set, scale_to_box
from ltft.processing import reconstruct, sample_phase_space

RATE = 64.0


# ---------------------------------------------------------------------------
# window
# ---------------------------------------------------------------------------


def test_window_vanishes_smoothly_at_edges():
    w = make_window()
    assert w.time(0.5) == 0.0 and w.time(-0.5) == 0.0
    # value and first two derivatives tend to zero approaching the edge
    h = 1e-4
    x = 0.5 - 2 * h
    assert abs(w.time(x)) < 1e-12
    d1 = (w.time(x + h) - w.time(x - h)) / (2 * h)
    d2 = (w.time(x + h) - 2 * w.time(x) + w.time(x - h)) / h**2
    assert abs(d1) < 1e-7
    assert abs(d2) < 1e-2  # third power of h remains in cos^4


def test_window_unit_energy_midpoint_quadrature():
    w = make_window()
    k = 1 << 14
    t = (np.arange(k) + 0.5) / k - 0.5
    assert abs(np.sum(w.time(t) ** 2) / k - 1.0) <= 1e-8


def test_window_peak_at_zero():
    w = make_window()
    t = np.linspace(-0.6, 0.6, 1201)
    assert w.time(0.0) == np.max(np.abs(w.time(t)))


def test_window_unknown_kind():
    with pytest.raises(InvalidParameterError):
        make_window("boxcar")


def test_window_spectrum_matches_cosine_sum():
    # Independent closed form: cos^4 is a 3-term cosine sum, so the
    # spectrum is a 6-term sinc sum.
    w = make_window()
    c = np.sqrt(128.0 / 35.0)

    def ref(nu):
        return c * (
            3.0 / 8.0 * np.sinc(nu)
            + 1.0 / 4.0 * (np.sinc(nu - 1) + np.sinc(nu + 1))
            + 1.0 / 16.0 * (np.sinc(nu - 2) + np.sinc(nu + 2))
        )

    nu = np.linspace(-30.0, 30.0, 4001)
    assert np.max(np.abs(w.freq(nu) - ref(nu))) < 5e-6


# ---------------------------------------------------------------------------
# signals, dft, analytic form
# ---------------------------------------------------------------------------


def test_signal_validation():
    with pytest.raises(InvalidParameterError):
        DigitalSignal(np.zeros(5), RATE)
    with pytest.raises(InvalidParameterError):
        DigitalSignal(np.zeros(2), RATE)
    with pytest.raises(InvalidParameterError):
        DigitalSignal(np.zeros(8), -1.0)


def test_dft_round_trip():
    rng = np.random.default_rng(3)
    sig = DigitalSignal(rng.standard_normal(128) + 1j * rng.standard_normal(128), RATE)
    back = idft(dft(sig))
    assert np.max(np.abs(back.samples - sig.samples)) < 1e-12
    spec = dft(sig)
    again = dft(idft(spec))
    assert np.max(np.abs(again.bins - spec.bins)) < 1e-12 * np.max(np.abs(spec.bins))


def test_dft_constant_signal():
    sig = DigitalSignal(np.full(64, 2.0), RATE)
    spec = dft(sig)
    assert np.argmax(np.abs(spec.bins)) == 0
    assert np.max(np.abs(spec.bins[1:])) < 1e-12


def test_dft_pure_tone_single_bin():
    m, k = 128, 11
    t = np.arange(-m // 2, m // 2) / RATE
    sig = DigitalSignal(np.exp(2j * np.pi * (k * RATE / m) * t), RATE)
    bins = dft(sig).bins
    assert abs(bins[k] - m / RATE) < 1e-10
    others = np.delete(np.abs(bins), k)
    assert others.max() < 1e-10


def test_analytic_round_trip_and_magnitude():
    m = 256
    t = np.arange(-m // 2, m // 2) / RATE
    s = DigitalSignal(np.cos(2 * np.pi * 12.0 * t + 0.4), RATE)
    analytic = to_analytic(s)
    back = from_analytic(analytic)
    assert np.max(np.abs(back.samples - s.samples)) < 1e-10
    # cosine becomes a unit-magnitude complex tone
    assert np.allclose(np.abs(analytic.samples), 1.0, atol=1e-10)
    zero = to_analytic(DigitalSignal(np.zeros(16), RATE))
    assert np.all(zero.samples == 0)


def test_to_analytic_rejects_complex():
    with pytest.raises(InvalidParameterError):
        to_analytic(DigitalSignal(np.full(8, 1j), RATE))


# ---------------------------------------------------------------------------
# atoms
# ---------------------------------------------------------------------------


def test_support_length_branches(params):
    g = params.gamma
    assert atom_support_length(params, params.b0 / 2) == pytest.approx(g / params.b0)
    assert atom_support_length(params, params.b1) == pytest.approx(g / params.b1)
    below = atom_support_length(params, params.b0 * (1 - 1e-9))
    above = atom_support_length(params, params.b0 * (1 + 1e-9))
    assert below == pytest.approx(above, rel=1e-6)
    with pytest.raises(InvalidParameterError):
        atom_support_length(params, -1.0)


@pytest.mark.parametrize("ratio,tol", [(4, 0.10), (8, 0.04), (16, 0.02)])
def test_atom_norm_tolerance_ladder(ratio, tol):
    rate = 64.0
    p = LtftParams.for_rate(rate, b0_frac=1.0 / (4 * ratio), b1_frac=1.0 / ratio)
    grid = DigitalSignal(np.zeros(4096), rate)
    for b in np.linspace(p.b0 / 2, rate / 2, 7):
        for c in (0.0, 0.5, 1.0):
            atom = ltft_atom_time(p, 0.0, float(b), c, grid)
            norm = np.sqrt(np.sum(np.abs(atom.values) ** 2) / rate)
            assert abs(norm - 1.0) <= tol


def test_atom_oscillation_count(params):
    # c = 0 wavelet atom: gamma cycles across the support, so the real
    # part crosses zero close to 2*gamma times.
    grid = DigitalSignal(np.zeros(4096), RATE)
    for b in (8.0, 12.0, 20.0):
        atom = ltft_atom_time(params, 0.0, b, 0.0, grid)
        signs = np.sign(np.real(atom.values))
        signs = signs[signs != 0]
        crossings = int(np.sum(signs[1:] != signs[:-1]))
        assert abs(crossings - 2 * params.gamma) <= 1


def test_atom_grid_shift_exact(params):
    grid = DigitalSignal(np.zeros(512), RATE)
    shift = 16 / RATE
    base = ltft_atom_time(params, 0.125, 14.0, 0.5, grid)
    moved = ltft_atom_time(params, 0.125 + shift, 14.0, 0.5, grid)
    assert moved.start - base.start == 16
    assert np.array_equal(moved.values, base.values)


def test_atom_outside_grid_is_empty(params):
    grid = DigitalSignal(np.zeros(64), RATE)
    atom = ltft_atom_time(params, 100.0, 12.0, 0.0, grid)
    assert atom.empty


def test_atom_freq_peak_and_parseval(params):
    m = 2048
    grid = DigitalSignal(np.zeros(m), RATE)
    freqs = np.arange(m) * (RATE / m)
    b, c = 14.0, 0.5
    spec = ltft_atom_freq(params, b, c, freqs)
    expected = ((params.xi / params.gamma) * c + 1.0) * b
    peak = freqs[np.argmax(np.abs(spec))]
    assert abs(peak - expected) <= RATE / m
    atom = ltft_atom_time(params, 0.0, b, c, grid).to_dense(m)
    direct = dft(DigitalSignal(atom, RATE)).bins
    time_energy = np.sum(np.abs(atom) ** 2) / RATE
    freq_energy = np.sum(np.abs(spec) ** 2) * (RATE / m)
    assert abs(freq_energy - time_energy) <= 0.01 * time_energy
    # the tabulated-spectrum atom matches the DFT of the sampled atom
    assert np.max(np.abs(np.abs(direct) - np.abs(spec))) < 0.02 * np.max(np.abs(spec))


def test_atom_freq_disjoint_support(params):
    b = params.b1 * 2.5  # far above b1 plus window bandwidth
    val = ltft_atom_freq(params, b, 0.0, np.array([0.0]))
    assert abs(val[0]) < 1e-12


# ---------------------------------------------------------------------------
# analysis / synthesis
# ---------------------------------------------------------------------------


def _toy_setup(params, m=512, n=256):
    sig = DigitalSignal(np.zeros(m), RATE)
    samples = sample_phase_space(sig, params, n)
    return sig, samples


def test_analyze_zero_signal(params):
    sig, samples = _toy_setup(params)
    coeffs = analyze(sig, samples, params)
    assert np.all(coeffs.values == 0)
    assert coeffs.weight == pytest.approx(samples.box.volume / samples.n)


def test_analyze_self_inner_product(params):
    m = 1024
    grid = DigitalSignal(np.zeros(m), RATE)
    point = (0.55, 13.0, 0.4)
    atom = ltft_atom_time(params, *point, grid).to_dense(m)
    sig = DigitalSignal(atom, RATE)
    box = PhaseSpaceBox.for_signal(sig, params)
    samples = SampleSet(np.array([point]), box=box, generator="regular")
    value = analyze(sig, samples, params).values[0]
    assert abs(value - 1.0) <= 0.02


def test_analyze_translation_covariance_bitexact(params):
    # Power-of-two rate and grid-aligned times keep every float operation
    # identical between the shifted and unshifted evaluations.
    m = 512
    rng = np.random.default_rng(11)
    bump = np.zeros(m)
    bump[180:260] = rng.standard_normal(80)
    sig = DigitalSignal(bump, RATE)
    shift_samples = 32
    delta = shift_samples / RATE
    shifted = DigitalSignal(np.roll(bump, shift_samples), RATE)
    box = PhaseSpaceBox.for_signal(sig, params)
    a0 = 0.25  # grid-aligned: 16/64
    pts = np.array([[a0, 12.0, 0.3], [a0, 22.0, 0.8], [a0, 3.0, 0.1]])
    pts_shifted = pts.copy()
    pts_shifted[:, 0] += delta
    base = analyze(
        sig, SampleSet(pts, box=box, generator="regular"), params
    ).values
    moved = analyze(
        shifted, SampleSet(pts_shifted, box=box, generator="regular"), params
    ).values
    assert np.array_equal(base, moved)


def test_analyze_linearity(params, tapered_tone):
    m = 512
    s1 = tapered_tone(m, freqs=(9.0,))
    s2 = tapered_tone(m, freqs=(17.0,))
    samples = sample_phase_space(s1, params, 400)
    alpha, beta = 1.7, -0.45 + 0.3j
    mix = DigitalSignal(alpha * s1.samples + beta * s2.samples, RATE)
    direct = analyze(mix, samples, params).values
    combo = alpha * analyze(s1, samples, params).values + beta * analyze(
        s2, samples, params
    ).values
    scale = np.max(np.abs(direct))
    assert np.max(np.abs(direct - combo)) <= 1e-12 * max(scale, 1.0)


def test_synthesize_zero_and_single_atom(params):
    sig, samples = _toy_setup(params, n=64)
    zeros = CoefficientVector(np.zeros(samples.n, complex), weight=samples.box.volume / samples.n)
    out = synthesize(zeros, samples, params, sig.m, RATE)
    assert np.all(out.samples == 0)

    box = samples.box
    one_point = SampleSet(np.array([[0.25, 14.0, 0.5]]), box=box, generator="regular")
    coeff = CoefficientVector(np.array([1.0 + 0j]), weight=box.volume / 1)
    out = synthesize(coeff, one_point, params, sig.m, RATE)
    atom = ltft_atom_time(params, 0.25, 14.0, 0.5, sig).to_dense(sig.m)
    assert np.max(np.abs(out.samples - box.volume * atom)) < 1e-12 * box.volume


def test_synthesize_linearity(params):
    sig, samples = _toy_setup(params, n=128)
    rng = np.random.default_rng(5)
    f = rng.standard_normal(samples.n) + 1j * rng.standard_normal(samples.n)
    g = rng.standard_normal(samples.n) + 1j * rng.standard_normal(samples.n)
    w = samples.box.volume / samples.n
    alpha, beta = 0.3 - 1.1j, 2.2
    direct = synthesize(
        CoefficientVector(alpha * f + beta * g, w), samples, params, sig.m, RATE
    ).samples
    combo = (
        alpha * synthesize(CoefficientVector(f, w), samples, params, sig.m, RATE).samples
        + beta * synthesize(CoefficientVector(g, w), samples, params, sig.m, RATE).samples
    )
    assert np.max(np.abs(direct - combo)) <= 1e-12 * np.max(np.abs(direct))


def test_adjointness_identity(params, tapered_tone):
    # <synthesize(F), s> = w * sum_n F_n * conj(analyze(s)_n)
    m = 512
    s = tapered_tone(m)
    samples = sample_phase_space(s, params, 300)
    rng = np.random.default_rng(9)
    f = rng.standard_normal(samples.n) + 1j * rng.standard_normal(samples.n)
    w = samples.box.volume / samples.n
    synth = synthesize(CoefficientVector(f, w), samples, params, m, RATE)
    lhs = np.sum(synth.samples * np.conj(s.samples)) / RATE
    rhs = w * np.sum(f * np.conj(analyze(s, samples, params).values))
    assert abs(lhs - rhs) <= 1e-10 * max(abs(lhs), 1.0)


def test_branch_continuity(params, tapered_tone):
    m = 512
    s = tapered_tone(m)
    box = PhaseSpaceBox.for_signal(s, params)

    def coeff(b):
        pts = np.array([[0.125, b, 0.5]])
        return analyze(s, SampleSet(pts, box=box, generator="regular"), params).values[0]

    for edge in (params.b0, params.b1):
        d3 = abs(coeff(edge + 1e-3) - coeff(edge - 1e-3))
        d6 = abs(coeff(edge + 1e-6) - coeff(edge - 1e-6))
        assert d6 < d3
        assert d6 <= 1e-4


def test_reconstruction_error_at_redundancy_16(params, tapered_tone):
    m = 1024
    s = tapered_tone(m)
    out = reconstruct(s, params, 16 * m, "hammersley")
    assert relative_error(out, s) <= 0.1


def test_analyze_box_rate_guard(params):
    sig = DigitalSignal(np.zeros(64), RATE)
    box = PhaseSpaceBox(t_lo=-0.5, t_hi=0.5, freq_hi=2 * RATE)
    samples = SampleSet(np.array([[0.0, 1.0, 0.0]]), box=box, generator="regular")
    with pytest.raises(InvalidParameterError):
        analyze(sig, samples, params)
