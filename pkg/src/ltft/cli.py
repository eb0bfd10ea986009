"""Command-line front end: audio processing and benchmark subcommands.

Every subcommand is deterministic for a fixed configuration (seeds
included): CSV and WAV outputs are byte-identical across runs.  CSV files
carry a leading comment line recording the resolved configuration.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import bench as bench_mod
from .baselines import (
    coverage_queries,
    discrepancy_scaling,
    dwt_grid_with_size,
    funnel_coverage,
)
from .core import DigitalSignal, LtftParams, PhaseSpaceBox
from .errors import InvalidParameterError, LtftError
from .frame import frame_diagonal
from .lds import scale_to_box, generate_unit_points
from .processing import (
    VocoderJob,
    multiplier_apply,
    phase_vocoder,
    pointwise_nonlinearity,
    reconstruct,
    sample_phase_space,
    soft_threshold,
)
from .core import analyze, from_analytic, synthesize, to_analytic
from .frame import apply_inverse_frame
from .wavio import WavAudio, wav_read, wav_write

_BENCH_RATE = 64.0
_BENCH_M = 1 << 10


@dataclass
class RunConfig:
    """Resolved subcommand plus its option map (flags over config file)."""

    subcommand: str
    options: Dict[str, object]

    def get(self, key: str, default=None):
        return self.options.get(key, default)


def _params_from(options: Dict[str, object], sample_rate: float) -> LtftParams:
    return LtftParams.for_rate(
        sample_rate,
        b0_frac=float(options["b0_frac"]),
        b1_frac=float(options["b1_frac"]),
        gamma=float(options["gamma"]),
        xi=float(options["xi"]),
        window_kind=str(options["window"]),
    )


def _config_comment(config: RunConfig) -> str:
    parts = [f"subcommand={config.subcommand}"]
    for key in sorted(config.options):
        parts.append(f"{key}={config.options[key]}")
    return "# config: " + " ".join(parts)


def _open_csv(path: str, config: RunConfig):
    handle = open(path, "w", newline="")
    handle.write(_config_comment(config) + "\r\n")
    return handle, csv.writer(handle)


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _resolve_count(options: Dict[str, object], m: int, default_a: float) -> int:
    n = options.get("samples")
    a = options.get("redundancy")
    if n is not None and a is not None:
        raise InvalidParameterError("give either --samples or --redundancy, not both")
    if n is not None:
        return int(n)
    return int(math.ceil(float(a if a is not None else default_a) * m))


def _load_audio(options: Dict[str, object]) -> tuple:
    audio = wav_read(str(options["input"]))
    signal = audio.to_signal()
    params = _params_from(options, signal.sample_rate)
    return audio, signal, params


def _write_audio(path: str, signal: DigitalSignal, rate: int) -> None:
    wav_write(path, WavAudio(np.real(signal.samples), rate))


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_reconstruct(config: RunConfig) -> int:
    options = config.options
    audio, signal, params = _load_audio(options)
    n = _resolve_count(options, signal.m, default_a=16.0)
    out = reconstruct(
        signal,
        params,
        n,
        kind=str(options["sequence"]),
        seed=int(options["seed"]),
        padded=bool(options["padded"]),
    )
    _write_audio(str(options["output"]), out, audio.rate)
    return 0


def _cmd_vocoder(config: RunConfig) -> int:
    options = config.options
    audio, signal, params = _load_audio(options)
    job = VocoderJob(
        params=params,
        dilation=int(options["dilation"]),
        redundancy=(
            float(options["redundancy"]) if options.get("redundancy") is not None else None
        ),
        sequence=str(options["sequence"]),
        seed=int(options["seed"]),
        padded=bool(options["padded"]),
    )
    out = phase_vocoder(signal, job)
    _write_audio(str(options["output"]), out, audio.rate)
    return 0


def _analysis_pipeline(config: RunConfig, transform) -> int:
    # Shared analyze -> transform coefficients -> synthesize -> normalize.
    options = config.options
    audio, signal, params = _load_audio(options)
    n = _resolve_count(options, signal.m, default_a=16.0)
    analytic = to_analytic(signal)
    samples = sample_phase_space(
        signal,
        params,
        n,
        kind=str(options["sequence"]),
        seed=int(options["seed"]),
        padded=bool(options["padded"]),
    )
    coeffs = analyze(analytic, samples, params)
    coeffs = transform(coeffs, samples, params)
    raw = synthesize(coeffs, samples, params, signal.m, signal.sample_rate)
    hd = frame_diagonal(params, signal.sample_rate, signal.m, folded=True)
    out = from_analytic(apply_inverse_frame(raw, hd))
    _write_audio(str(options["output"]), out, audio.rate)
    return 0


def _cmd_denoise(config: RunConfig) -> int:
    options = config.options

    def transform(coeffs, samples, params):
        lam = float(options["threshold"])
        if str(options["threshold_mode"]) == "relative":
            lam *= float(np.max(np.abs(coeffs.values))) if coeffs.values.size else 0.0
        return pointwise_nonlinearity(coeffs, soft_threshold(lam))

    return _analysis_pipeline(config, transform)


def _cmd_multiplier(config: RunConfig) -> int:
    options = config.options
    low = options.get("low_pass")
    high = options.get("high_pass")
    if (low is None) == (high is None):
        raise InvalidParameterError("give exactly one of --low-pass or --high-pass")

    def transform(coeffs, samples, params):
        if low is not None:
            symbol = lambda a, b, c: (b < float(low)).astype(float)
        else:
            symbol = lambda a, b, c: (b >= float(high)).astype(float)
        return multiplier_apply(coeffs, samples, symbol)

    return _analysis_pipeline(config, transform)


def _cmd_bench_error(config: RunConfig) -> int:
    options = config.options
    m = int(options["resolution"])
    rate = float(options["rate"])
    params = _params_from(options, rate)
    signal = bench_mod.make_test_signal(m, rate, seed=int(options["seed"]), params=params)
    methods = [s.strip() for s in str(options["methods"]).split(",") if s.strip()]
    redundancies = [float(s) for s in str(options["redundancies"]).split(",")]
    rows = bench_mod.bench_reconstruction(
        signal, params, methods, redundancies, padded=bool(options["padded"])
    )
    handle, writer = _open_csv(str(options["csv"]), config)
    with handle:
        writer.writerow(["method", "redundancy", "n", "rel_error", "rel_error_std"])
        for row in rows:
            writer.writerow(
                [row.method, _fmt(row.redundancy), row.n, _fmt(row.rel_error), _fmt(row.rel_error_std)]
            )
    return 0


def _cmd_bench_discrepancy(config: RunConfig) -> int:
    options = config.options
    generators = [s.strip() for s in str(options["generators"]).split(",") if s.strip()]
    sizes = [int(s) for s in str(options["sizes"]).split(",")]
    handle, writer = _open_csv(str(options["csv"]), config)
    with handle:
        writer.writerow(["generator", "n", "d_star", "slope"])
        for gen in generators:
            rows, slope = discrepancy_scaling(gen, sizes, dim=2)
            for row in rows:
                writer.writerow([row.generator, row.n, _fmt(row.d_star), _fmt(slope)])
    return 0


def _cmd_bench_complexity(config: RunConfig) -> int:
    options = config.options
    rate = float(options["rate"])
    m = int(options["resolution"])
    params = _params_from(options, rate)
    sizes = [int(s) for s in str(options["sizes"]).split(",")]
    half = m / (2.0 * rate)
    box = PhaseSpaceBox(t_lo=-half, t_hi=half, freq_hi=rate)
    bound = bench_mod.complexity_per_point_bound(params, rate)
    handle, writer = _open_csv(str(options["csv"]), config)
    with handle:
        writer.writerow(["n", "c_actual", "a_predicted", "per_point_bound"])
        for n in sizes:
            samples = scale_to_box(
                generate_unit_points(str(options["sequence"]), n, 3, int(options["seed"])),
                box,
            )
            c_actual, a_pred = bench_mod.complexity_count(samples, params, rate)
            writer.writerow([n, c_actual, _fmt(a_pred), _fmt(bound)])
    return 0


def _cmd_frame_diag(config: RunConfig) -> int:
    options = config.options
    rate = float(options["rate"])
    m = int(options["resolution"])
    params = _params_from(options, rate)
    hd = frame_diagonal(params, rate, m)
    handle, writer = _open_csv(str(options["csv"]), config)
    with handle:
        writer.writerow(["omega", "h", "q0", "q1", "q2"])
        for row in zip(hd.omega, hd.h, hd.q0, hd.q1, hd.q2):
            writer.writerow([_fmt(float(v)) for v in row])
    return 0


def _cmd_coverage(config: RunConfig) -> int:
    options = config.options
    rate = float(options["rate"])
    m = int(options["resolution"])
    params = _params_from(options, rate)
    half = m / (2.0 * rate)
    box = PhaseSpaceBox(t_lo=-half, t_hi=half, freq_hi=rate)
    n = _resolve_count(options, m, default_a=16.0)
    kind = str(options["generator"])
    if kind == "dwt":
        samples = dwt_grid_with_size(n, params.b0, rate, m, gamma=params.gamma)
    else:
        samples = scale_to_box(generate_unit_points(kind, n, 3, int(options["seed"])), box)
    queries = coverage_queries(
        box, params, int(options["queries"]), seed=int(options["seed"])
    )
    report = funnel_coverage(samples, queries, params)
    handle, writer = _open_csv(str(options["csv"]), config)
    with handle:
        writer.writerow(["a", "b", "value", "flagged"])
        for q, v, f in zip(queries, report.values, report.flagged):
            writer.writerow([_fmt(float(q[0])), _fmt(float(q[1])), _fmt(float(v)), int(f)])
    print(f"coverage mean={report.mean:.6g} max/min={report.max_min_ratio:.6g}")
    return 0


_HANDLERS = {
    "reconstruct": _cmd_reconstruct,
    "vocoder": _cmd_vocoder,
    "denoise": _cmd_denoise,
    "multiplier": _cmd_multiplier,
    "bench-error": _cmd_bench_error,
    "bench-discrepancy": _cmd_bench_discrepancy,
    "bench-complexity": _cmd_bench_complexity,
    "frame-diag": _cmd_frame_diag,
    "coverage": _cmd_coverage,
}


# ---------------------------------------------------------------------------
# Argument parsing and config-file layering
# ---------------------------------------------------------------------------


def _add_param_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--b0-frac", dest="b0_frac", type=float, default=0.1)
    sp.add_argument("--b1-frac", dest="b1_frac", type=float, default=0.4)
    sp.add_argument("--gamma", type=float, default=6.0)
    sp.add_argument("--xi", type=float, default=6.0)
    sp.add_argument("--window", default="cos4")
    sp.add_argument("--padded", action="store_true", default=False,
                    help="pad the phase-space box time side by S0")
    sp.add_argument("--config", default=None, help="key=value config file")


def _add_sampling_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--sequence", choices=("hammersley", "halton", "mc"),
                    default="hammersley")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-N", "--samples", type=int, default=None)
    sp.add_argument("-A", "--redundancy", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ltft",
        description="Quasi-Monte Carlo time-frequency processing and benchmarks",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    for name in ("reconstruct", "vocoder", "denoise", "multiplier"):
        sp = sub.add_parser(name)
        _add_param_flags(sp)
        _add_sampling_flags(sp)
        if name == "vocoder":
            sp.add_argument("-D", "--dilation", type=int, default=2)
        if name == "denoise":
            sp.add_argument("--threshold", type=float, default=0.1)
            sp.add_argument("--threshold-mode", dest="threshold_mode",
                            choices=("relative", "absolute"), default="relative")
        if name == "multiplier":
            sp.add_argument("--low-pass", dest="low_pass", type=float, default=None)
            sp.add_argument("--high-pass", dest="high_pass", type=float, default=None)
        sp.add_argument("input")
        sp.add_argument("output")

    for name in ("bench-error", "bench-discrepancy", "bench-complexity",
                 "frame-diag", "coverage"):
        sp = sub.add_parser(name)
        _add_param_flags(sp)
        sp.add_argument("--csv", required=True)
        sp.add_argument("--rate", type=float, default=_BENCH_RATE)
        sp.add_argument("-M", "--resolution", type=int, default=_BENCH_M)
        if name == "bench-error":
            sp.add_argument("--methods", default="hammersley,mc")
            sp.add_argument("--redundancies", default="1,2,4,8,16,32,64")
            sp.add_argument("--seed", type=int, default=0)
        if name == "bench-discrepancy":
            sp.add_argument("--generators", default="hammersley,mc,dwt,regular")
            sp.add_argument("--sizes", default="8,16,32,64,128")
        if name == "bench-complexity":
            sp.add_argument("--sizes", default="256,1024,4096,16384")
            sp.add_argument("--sequence", choices=("hammersley", "halton", "mc"),
                            default="hammersley")
            sp.add_argument("--seed", type=int, default=0)
        if name == "coverage":
            sp.add_argument("--generator", choices=("hammersley", "halton", "mc", "dwt"),
                            default="hammersley")
            sp.add_argument("--queries", type=int, default=100)
            sp.add_argument("--seed", type=int, default=0)
            sp.add_argument("-N", "--samples", type=int, default=None)
            sp.add_argument("-A", "--redundancy", type=float, default=None)

    return parser


def _coerce(text: str, current) -> object:
    if isinstance(current, bool):
        return text.lower() in ("1", "true", "yes", "on")
    if isinstance(current, int) and not isinstance(current, bool):
        return int(text)
    if isinstance(current, float):
        return float(text)
    return text


def _read_config_file(path: str) -> Dict[str, str]:
    out: Dict[str, str] = {}
    with open(path) as handle:
        for line in handle:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise InvalidParameterError(f"bad config line (need key=value): {line!r}")
            key, value = line.split("=", 1)
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def parse_config(argv: Sequence[str]) -> RunConfig:
    """Parse argv into a RunConfig, layering: defaults < config file < flags."""
    parser = build_parser()
    args = vars(parser.parse_args(argv))
    subcommand = args.pop("subcommand")
    config_path = args.pop("config", None)
    if config_path:
        # Re-parse with suppressed defaults to learn which flags were given
        # explicitly; config values fill the remainder.
        probe = build_parser()
        for action_group in probe._subparsers._group_actions:
            for sp in action_group.choices.values():
                for action in sp._actions:
                    action.default = argparse.SUPPRESS
        explicit = vars(probe.parse_args(argv))
        explicit.pop("subcommand", None)
        file_values = _read_config_file(config_path)
        for key, text in file_values.items():
            if key in args and key not in explicit:
                args[key] = _coerce(text, args[key])
    env_threads = os.environ.get("LTFT_THREADS")
    if env_threads is not None:
        if not env_threads.isdigit() or int(env_threads) < 1:
            raise InvalidParameterError("LTFT_THREADS must be a positive integer")
        args["threads"] = int(env_threads)
    return RunConfig(subcommand=subcommand, options=args)


def run(config: RunConfig) -> int:
    """Dispatch a resolved configuration; returns the process exit code."""
    handler = _HANDLERS.get(config.subcommand)
    if handler is None:
        print(f"error: usage-error: unknown subcommand {config.subcommand!r}",
              file=sys.stderr)
        return 2
    return handler(config)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        config = parse_config(sys.argv[1:] if argv is None else list(argv))
        return run(config)
    except LtftError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: io-error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
