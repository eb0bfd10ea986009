"""Benchmark harness: test signals, error curves, and complexity accounting."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .core import (
    DigitalSignal,
    LtftParams,
    SampleSet,
    atom_support_length,
    relative_error,
)
from .errors import InvalidParameterError
from .processing import reconstruct

_NOISE_FLOOR_DB = -60.0


def make_test_signal(
    m: int, sample_rate: float, seed: int = 0, params: Optional[LtftParams] = None
) -> DigitalSignal:
    """Deterministic bench signal exercising both atom branches.

    Eight tones log-spaced across [2*b0, b1], two Gaussian-windowed chirps
    sweeping that band in opposite directions, and a seeded noise floor at
    -60 dB relative to the tone mix.
    """
    if params is None:
        params = LtftParams.for_rate(sample_rate)
    rng = np.random.default_rng(seed)
    t = np.arange(-m // 2, m // 2) / sample_rate
    lo, hi = 2.0 * params.b0, params.b1
    freqs = np.geomspace(lo, hi, 8)
    phases = rng.uniform(0.0, 2.0 * np.pi, freqs.size)
    sig = np.zeros(m)
    for f, ph in zip(freqs, phases):
        sig += np.cos(2.0 * np.pi * f * t + ph)

    span = m / sample_rate
    for center, f_start, f_end in (
        (-span / 4.0, lo, hi),
        (span / 4.0, hi, lo),
    ):
        width = span / 16.0
        u = t - center
        rate = (f_end - f_start) / span
        env = 2.0 * np.exp(-0.5 * (u / width) ** 2)
        sig += env * np.cos(2.0 * np.pi * (f_start * u + 0.5 * rate * u**2))

    noise = rng.standard_normal(m)
    noise *= 10.0 ** (_NOISE_FLOOR_DB / 20.0) * np.std(sig) / np.std(noise)
    sig += noise

    # Raised-cosine edge taper over one maximal atom support: truncating a
    # full-amplitude tone at the interval edge leaks across the whole
    # spectrum, which would break the band-limited premise of the benches.
    taper = int(round(params.s0 * sample_rate))
    if 0 < taper <= m // 2:
        ramp = 0.5 * (1.0 - np.cos(np.pi * np.arange(taper) / taper))
        sig[:taper] *= ramp
        sig[-taper:] *= ramp[::-1]
    return DigitalSignal(sig / np.max(np.abs(sig)), sample_rate)


@dataclass
class ErrorRow:
    method: str
    redundancy: float
    n: int
    rel_error: float
    rel_error_std: float = 0.0


def bench_reconstruction(
    signal: DigitalSignal,
    params: LtftParams,
    methods: Sequence[str],
    redundancies: Sequence[float],
    mc_seeds: Sequence[int] = tuple(range(10)),
    padded: bool = False,
) -> List[ErrorRow]:
    """Reconstruction error per method and redundancy.

    Error is the relative L2 distance between the input and the
    analyze/synthesize/inverse-frame output; Monte Carlo rows average over
    the given seeds and record the spread.
    """
    rows: List[ErrorRow] = []
    for method in methods:
        for a in redundancies:
            if a < 1:
                raise InvalidParameterError("redundancy must be >= 1")
            n = int(math.ceil(a * signal.m))
            if method == "mc":
                errs = [
                    relative_error(
                        reconstruct(signal, params, n, "mc", seed, padded), signal
                    )
                    for seed in mc_seeds
                ]
                rows.append(
                    ErrorRow("mc", a, n, float(np.mean(errs)), float(np.std(errs)))
                )
            else:
                out = reconstruct(signal, params, n, method, 0, padded)
                rows.append(ErrorRow(method, a, n, relative_error(out, signal)))
    return rows


def complexity_count(
    samples: SampleSet, params: LtftParams, sample_rate: float
):
    """Actual atom-sample total against the cubature prediction.

    Returns (C_actual, A_predicted) with C = sum round(L * S(b_n)) and
    A = gamma * N * (1 + ln(b1/b0) + (L - b1)/b1).
    """
    supports = atom_support_length(params, samples.b)
    c_actual = int(np.round(sample_rate * supports).sum())
    a_pred = (
        params.gamma
        * samples.n
        * (
            1.0
            + math.log(params.b1 / params.b0)
            + (sample_rate - params.b1) / params.b1
        )
    )
    return c_actual, a_pred


def complexity_per_point_bound(params: LtftParams, sample_rate: float) -> float:
    """Uniform bound on C/N from the per-band support maxima."""
    c1 = params.b0 / sample_rate
    c2 = params.b1 / sample_rate
    return params.gamma * (1.0 + math.log(c2 / c1) + (1.0 - c2) / c2) + 1.0
