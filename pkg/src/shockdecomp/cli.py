"""Command-line front end: decompose, synth, analyze, classify.

Signals travel as two-column CSV (``time_s,accel_ms2``, header required).
Component tables travel as JSON whose rows use display units (Hz and ms)
while the library itself works in SI; conversion happens only at this
boundary.  All outputs are deterministic: identical inputs produce
byte-identical files (floats are written in shortest round-trip form, up to
17 significant digits).

Exit codes: 0 decomposition reached tolerance (or the command has no
tolerance notion), 1 malformed input or configuration, 2 component cap hit,
3 fitting failed.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from .decompose import Termination, decompose, signal_energy
from .fitting import Bounds
from .selection import select_components
from .spectral import band_pass, compare, dft_spectrum, octave_grid, srs
from .waveform import (InvalidParameterError, Signal, WaveformParams,
                       canonicalize, classify, evaluate_real, kappa)

__all__ = ["RunConfig", "main", "cmd_decompose", "cmd_synth", "cmd_analyze"]

log = logging.getLogger("shockdecomp")

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_MAX_COMPONENTS = 2
EXIT_FIT_FAILED = 3

_TERMINATION_EXIT = {
    Termination.TOLERANCE_MET: EXIT_OK,
    Termination.MAX_COMPONENTS: EXIT_MAX_COMPONENTS,
    Termination.FIT_FAILED: EXIT_FIT_FAILED,
}

_BOUNDS_KEYS = ("amplitude_ms2", "frequency_hz", "initial_time_ms",
                "peak_offset_ms", "damping_ratio", "phase_rad")


class CliInputError(ValueError):
    """Bad file, row or flag; maps to exit code 1."""


@dataclass
class RunConfig:
    """Settings shared by the subcommands; TOML config files map onto this 1:1."""

    input: str | None = None
    output_dir: str = "."
    sample_rate: float | None = None
    tolerance: float = 0.10
    max_components: int = 100
    bounds: dict = field(default_factory=dict)
    srs_grid: str | None = None
    srs_q: float = 10.0
    deterministic: bool = True  # no randomness exists anywhere in the pipeline

    def __post_init__(self):
        if not 0.0 < self.tolerance <= 1.0:
            raise CliInputError(f"tolerance must be in (0, 1], got {self.tolerance}")
        if not self.deterministic:
            raise CliInputError("deterministic mode cannot be disabled")


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    # shortest exact round-trip decimal (<= 17 significant digits)
    return repr(float(x))


def read_signal_csv(path: str, sample_rate: float = None) -> Signal:
    """Parse a ``time_s,accel_ms2`` CSV; raises CliInputError with line info."""
    times, accels = [], []
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise CliInputError(f"cannot open {path}: {exc}")
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise CliInputError(f"{path}: empty file")
        names = [h.strip() for h in header]
        if names[:2] != ["time_s", "accel_ms2"]:
            raise CliInputError(
                f"{path}: line 1: expected header 'time_s,accel_ms2', got {','.join(names)}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise CliInputError(f"{path}: line {lineno}: expected 2 columns, got {len(row)}")
            try:
                times.append(float(row[0]))
                accels.append(float(row[1]))
            except ValueError:
                raise CliInputError(f"{path}: line {lineno}: non-numeric value in {row}")
    if len(times) < 2:
        raise CliInputError(f"{path}: need at least 2 samples, got {len(times)}")
    try:
        if sample_rate is not None:
            return Signal(start_time=times[0], dt=1.0 / sample_rate,
                          samples=np.asarray(accels))
        return Signal.from_time_samples(times, accels)
    except ValueError as exc:
        raise CliInputError(f"{path}: {exc}")


def write_signal_csv(path: str, s: Signal) -> None:
    t = s.times()
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write("time_s,accel_ms2\n")
        for k in range(len(s)):
            fh.write(f"{_fmt(t[k])},{_fmt(s.samples[k])}\n")


def component_row(index: int, p: WaveformParams, eps_pct: float = None,
                  real_eps_pct: float = None, membership: str = "") -> dict:
    """JSON row in display units, mirroring the published table layout.

    ``energy_ratio_pct`` integrates the squared envelope |w|^2 (so a
    dominant oscillatory component can exceed 100); ``real_energy_ratio_pct``
    integrates the squared real trace and matches the residual bookkeeping.
    """
    row = {
        "component": index,
        "amplitude_ms2": p.amplitude,
        "frequency_hz": p.frequency_hz,
        "initial_time_ms": p.initial_time * 1e3,
        "peak_offset_ms": p.peak_offset * 1e3,
        "damping_ratio": p.damping_ratio,
        "phase_rad": canonicalize(p).phase,
        "kappa": kappa(p),
        "energy_ratio_pct": eps_pct,
        "real_energy_ratio_pct": real_eps_pct,
        "set": membership,
    }
    return row


def parse_component_row(row: dict, where: str) -> WaveformParams:
    try:
        return WaveformParams(
            amplitude=float(row["amplitude_ms2"]),
            angular_frequency=2.0 * math.pi * float(row["frequency_hz"]),
            damping_ratio=float(row["damping_ratio"]),
            peak_offset=float(row["peak_offset_ms"]) * 1e-3,
            phase=float(row["phase_rad"]),
            initial_time=float(row["initial_time_ms"]) * 1e-3,
        )
    except (KeyError, TypeError, ValueError, InvalidParameterError) as exc:
        raise CliInputError(f"{where}: invalid component row: {exc}")


def read_components_json(path: str):
    """Load a component table; returns (params list, selected 0-based indices).

    Accepts either the full report written by ``decompose`` or a bare list
    of rows.  Rows marked E or L form the selected set; if no row carries a
    marker, every component is selected.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliInputError(f"cannot read {path}: {exc}")
    rows = payload.get("components") if isinstance(payload, dict) else payload
    if not isinstance(rows, list) or not rows:
        raise CliInputError(f"{path}: expected a non-empty component list")
    params = [parse_component_row(r, f"{path}: component {i + 1}")
              for i, r in enumerate(rows)]
    selected = [i for i, r in enumerate(rows) if r.get("set") in ("E", "L")]
    if not selected:
        selected = list(range(len(rows)))
    return params, selected


def _write_json(path: str, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

def _load_toml(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise CliInputError(f"cannot read {path}: {exc}")


def resolve_bounds(spec: dict, signal: Signal) -> Bounds:
    """Merge a display-unit bounds mapping over the signal-derived defaults."""
    default = Bounds.default_for(signal)
    if not spec:
        return default
    unknown = sorted(set(spec) - set(_BOUNDS_KEYS))
    if unknown:
        raise CliInputError(f"unknown bounds keys {unknown}; expected {_BOUNDS_KEYS}")

    def pair(key, conv, fallback):
        if key not in spec:
            return fallback
        lo, hi = (float(v) for v in spec[key])
        return (conv(lo), conv(hi))

    try:
        return Bounds(
            amplitude=pair("amplitude_ms2", float, default.amplitude),
            angular_frequency=pair("frequency_hz", lambda f: 2 * math.pi * f,
                                   default.angular_frequency),
            initial_time=pair("initial_time_ms", lambda v: v * 1e-3,
                              default.initial_time),
            peak_offset=pair("peak_offset_ms", lambda v: v * 1e-3,
                             default.peak_offset),
            damping_ratio=pair("damping_ratio", float, default.damping_ratio),
            phase=pair("phase_rad", float, default.phase),
        )
    except ValueError as exc:
        raise CliInputError(f"invalid bounds: {exc}")


def parse_srs_grid(text: str, sample_rate: float) -> np.ndarray:
    """Parse 'lo:hi:points-per-octave'; default 100 Hz to fs/4 at 1/12 octave."""
    if text is None:
        return octave_grid(100.0, sample_rate / 4.0, 12)
    parts = text.split(":")
    if len(parts) != 3:
        raise CliInputError(f"--srs-grid wants lo:hi:points-per-octave, got {text!r}")
    try:
        lo, hi, per = float(parts[0]), float(parts[1]), int(parts[2])
        return octave_grid(lo, hi, per)
    except ValueError as exc:
        raise CliInputError(f"bad --srs-grid {text!r}: {exc}")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_decompose(cfg: RunConfig) -> int:
    sig = read_signal_csv(cfg.input, cfg.sample_rate)
    log.info("decomposing %s: %d samples at %.6g Hz, tolerance %g",
             cfg.input, len(sig), sig.sample_rate, cfg.tolerance)
    try:
        bounds = resolve_bounds(cfg.bounds, sig)
        dec = decompose(sig, tolerance=cfg.tolerance, bounds=bounds,
                        max_components=cfg.max_components)
    except ValueError as exc:
        raise CliInputError(str(exc))
    log.info("termination %s after %d components, residual ratio %.4g",
             dec.termination.value, len(dec.components),
             dec.residual_ratio_trace[-1])

    os.makedirs(cfg.output_dir, exist_ok=True)
    if dec.termination is Termination.TOLERANCE_MET:
        report = select_components(dec, sig, cfg.tolerance)
        eta = report.eta90
        selected = report.selected_set
        membership = {i: ("E" if i < eta else "L") for i in selected}
        rhat = report.reconstructed
        recon_ratio = report.residual_ratio_of_reconstruction
    else:
        eta = None
        selected = tuple(range(len(dec.components)))
        membership = {}
        t = sig.times()
        total = np.zeros(len(sig))
        for p in dec.components:
            total += evaluate_real(p, t)
        rhat = Signal(sig.start_time, sig.dt, total) if dec.components else None
        recon_ratio = dec.residual_ratio_trace[-1]

    rows = [component_row(i + 1, p, dec.energy_ratios[i] * 100.0,
                          dec.real_energy_ratios[i] * 100.0,
                          membership.get(i, ""))
            for i, p in enumerate(dec.components)]
    payload = {
        "termination": dec.termination.value,
        "tolerance": cfg.tolerance,
        "eta_90": eta,
        "original_energy": dec.original_energy,
        "final_residual_ratio": dec.residual_ratio_trace[-1],
        "reconstruction_residual_ratio": recon_ratio,
        "components": rows,
    }
    _write_json(os.path.join(cfg.output_dir, "components.json"), payload)

    with open(os.path.join(cfg.output_dir, "residual_trace.csv"), "w",
              encoding="utf-8") as fh:
        fh.write("components_subtracted,residual_energy_ratio\n")
        for k, ratio in enumerate(dec.residual_ratio_trace):
            fh.write(f"{k},{_fmt(ratio)}\n")

    if rhat is not None:
        write_signal_csv(os.path.join(cfg.output_dir, "reconstruction.csv"), rhat)

    lines = [
        f"input: {cfg.input}",
        f"samples: {len(sig)} at {_fmt(sig.sample_rate)} Hz",
        f"termination: {dec.termination.value}",
        f"components fitted: {len(dec.components)}",
        f"final residual energy ratio: {_fmt(dec.residual_ratio_trace[-1])}",
    ]
    if eta is not None:
        lines += [
            f"eta_90: {eta}",
            f"energy set size: {eta}",
            f"low-frequency set size: {len(selected) - eta}",
            f"reconstruction residual ratio: {_fmt(recon_ratio)}",
        ]
    if dec.components:
        k1 = kappa(dec.components[0])
        lines.append(f"dominant component: {_fmt(dec.components[0].frequency_hz)} Hz, "
                     f"kappa {_fmt(k1)} -> {classify(k1).value}")
    if dec.failed_iteration is not None:
        lines.append(f"fitting failed at component {dec.failed_iteration}")
    with open(os.path.join(cfg.output_dir, "report.txt"), "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")

    return _TERMINATION_EXIT[dec.termination]


def cmd_synth(cfg: RunConfig, components_path: str, fs: float, duration: float,
              start: float = 0.0) -> int:
    params, _ = read_components_json(components_path)
    if fs <= 0.0 or duration <= 0.0:
        raise CliInputError("sample rate and duration must be > 0")
    n = int(round(duration * fs))
    if n < 2:
        raise CliInputError("duration too short for the requested sample rate")
    t = start + np.arange(n) / fs
    total = np.zeros(n)
    for p in params:
        total += evaluate_real(p, t)
    os.makedirs(cfg.output_dir, exist_ok=True)
    write_signal_csv(os.path.join(cfg.output_dir, "signal.csv"),
                     Signal(start, 1.0 / fs, total))
    return EXIT_OK


def _component_bands(params, selected, nyquist):
    """Symmetric band around each selected carrier, half-width limited by
    the nearest selected neighbour (and by 0/nyquist)."""
    freqs = [params[i].frequency_hz for i in selected]
    bands = []
    for i, f in enumerate(freqs):
        others = [abs(g - f) for j, g in enumerate(freqs) if j != i]
        half = min(others) / 2.0 if others else f / 2.0
        half = min(half, f)
        lo = max(f - half, 0.0)
        hi = min(f + half, nyquist)
        bands.append((lo, hi))
    return bands


def cmd_analyze(cfg: RunConfig, components_path: str = None) -> int:
    sig = read_signal_csv(cfg.input, cfg.sample_rate)
    os.makedirs(cfg.output_dir, exist_ok=True)
    try:
        grid = parse_srs_grid(cfg.srs_grid, sig.sample_rate)
        spec = dft_spectrum(sig)
        srs_r = srs(sig, cfg.srs_q, grid)
    except ValueError as exc:
        raise CliInputError(str(exc))

    rhat = None
    params = selected = None
    if components_path is not None:
        params, selected = read_components_json(components_path)
        t = sig.times()
        total = np.zeros(len(sig))
        for i in selected:
            total += evaluate_real(params[i], t)
        rhat = Signal(sig.start_time, sig.dt, total)

    keep = spec.frequencies >= 0.0
    spec_hat = dft_spectrum(rhat) if rhat is not None else None
    with open(os.path.join(cfg.output_dir, "spectrum.csv"), "w",
              encoding="utf-8") as fh:
        cols = "frequency_hz,real,imag,magnitude"
        if spec_hat is not None:
            cols += ",magnitude_reconstruction"
        fh.write(cols + "\n")
        mags = spec.magnitude()
        mags_hat = spec_hat.magnitude() if spec_hat is not None else None
        for k in np.nonzero(keep)[0]:
            row = (f"{_fmt(spec.frequencies[k])},{_fmt(spec.values[k].real)},"
                   f"{_fmt(spec.values[k].imag)},{_fmt(mags[k])}")
            if mags_hat is not None:
                row += f",{_fmt(mags_hat[k])}"
            fh.write(row + "\n")

    srs_hat = srs(rhat, cfg.srs_q, grid) if rhat is not None else None
    with open(os.path.join(cfg.output_dir, "srs.csv"), "w", encoding="utf-8") as fh:
        cols = "frequency_hz,srs_ms2"
        if srs_hat is not None:
            cols += ",srs_reconstruction_ms2"
        fh.write(cols + "\n")
        for k in range(grid.size):
            row = f"{_fmt(grid[k])},{_fmt(srs_r.values[k])}"
            if srs_hat is not None:
                row += f",{_fmt(srs_hat.values[k])}"
            fh.write(row + "\n")

    if rhat is not None:
        rep = compare(sig, rhat, q=cfg.srs_q, srs_grid=grid)
        lines = [
            f"residual_energy_ratio: {_fmt(rep.residual_energy_ratio)}",
            f"ncc: {_fmt(rep.ncc)}",
            f"srs_max_abs_db_error: {_fmt(rep.srs_max_abs_db_error)}",
            f"spectrum_l2_error: {_fmt(rep.spectrum_l2_error)}",
        ]
        bands = _component_bands(params, selected, sig.sample_rate / 2.0)
        t = sig.times()
        for rank, (i, (lo, hi)) in enumerate(zip(selected, bands), start=1):
            banded = band_pass(sig, lo, hi)
            comp = evaluate_real(params[i], t)
            den = math.sqrt(float(banded.samples @ banded.samples)
                            * float(comp @ comp))
            ncc = float(banded.samples @ comp) / den if den > 0.0 else 0.0
            lines.append(f"band_{rank:03d}: component {i + 1}, "
                         f"{_fmt(lo)}..{_fmt(hi)} Hz, ncc {_fmt(ncc)}")
            out = os.path.join(cfg.output_dir, f"bandpass_{rank:03d}.csv")
            with open(out, "w", encoding="utf-8") as fh:
                fh.write("time_s,band_ms2,component_ms2\n")
                for k in range(len(sig)):
                    fh.write(f"{_fmt(t[k])},{_fmt(banded.samples[k])},"
                             f"{_fmt(comp[k])}\n")
        with open(os.path.join(cfg.output_dir, "compare.txt"), "w",
                  encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors share exit code 1
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT_ERROR, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    p = _Parser(prog="shockdecomp",
                description="Decompose, synthesise and analyse transient shock signals.")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decompose", help="fit waveform components to a CSV record")
    d.add_argument("input", help="time_s,accel_ms2 CSV file")
    d.add_argument("--out", default=None, help="output directory (default .)")
    d.add_argument("--tolerance", type=float, default=None,
                   help="residual energy ratio stop rule (default 0.10)")
    d.add_argument("--max-components", type=int, default=None)
    d.add_argument("--bounds", default=None, help="TOML file of parameter bounds")
    d.add_argument("--sample-rate", type=float, default=None,
                   help="override the sample rate inferred from timestamps (Hz)")
    d.add_argument("--config", default=None, help="TOML run configuration")

    s = sub.add_parser("synth", help="superpose a component table into a CSV signal")
    s.add_argument("components", help="components.json (or bare row list)")
    s.add_argument("--out", default=None, help="output directory (default .)")
    s.add_argument("--fs", type=float, required=True, help="sample rate (Hz)")
    s.add_argument("--duration", type=float, required=True, help="record length (s)")
    s.add_argument("--start", type=float, default=0.0, help="start time (s)")

    a = sub.add_parser("analyze", help="spectrum, SRS and reconstruction comparison")
    a.add_argument("input", help="time_s,accel_ms2 CSV file")
    a.add_argument("--out", default=None, help="output directory (default .)")
    a.add_argument("--components", default=None,
                   help="components.json for reconstruction comparison")
    a.add_argument("--srs-grid", default=None, help="lo:hi:points-per-octave")
    a.add_argument("--srs-q", type=float, default=None)
    a.add_argument("--sample-rate", type=float, default=None)
    a.add_argument("--config", default=None)

    c = sub.add_parser("classify", help="map a kappa value to its field category")
    c.add_argument("kappa", type=float)
    return p


def _config_from_args(args) -> RunConfig:
    base = {}
    if getattr(args, "config", None):
        base = _load_toml(args.config)
        unknown = sorted(set(base) - set(RunConfig.__dataclass_fields__))
        if unknown:
            raise CliInputError(f"unknown config keys {unknown}")
    if getattr(args, "bounds", None):
        base["bounds"] = _load_toml(args.bounds)
    overrides = {
        "input": getattr(args, "input", None),
        "output_dir": getattr(args, "out", None),
        "sample_rate": getattr(args, "sample_rate", None),
        "tolerance": getattr(args, "tolerance", None),
        "max_components": getattr(args, "max_components", None),
        "srs_grid": getattr(args, "srs_grid", None),
        "srs_q": getattr(args, "srs_q", None),
    }
    for key, val in overrides.items():
        if val is not None:
            base[key] = val
    try:
        return RunConfig(**base)
    except TypeError as exc:
        raise CliInputError(f"bad configuration: {exc}")


def main(argv=None) -> int:
    level = os.environ.get("SHOCKDECOMP_LOG", "WARNING").upper()
    if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
        level = "WARNING"
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:  # usage error or --help; keep main() returning
        return int(exc.code or 0)
    try:
        if args.command == "decompose":
            return cmd_decompose(_config_from_args(args))
        if args.command == "synth":
            cfg = RunConfig(output_dir=args.out or ".")
            return cmd_synth(cfg, args.components, args.fs, args.duration, args.start)
        if args.command == "analyze":
            return cmd_analyze(_config_from_args(args), args.components)
        if args.command == "classify":
            print(classify(args.kappa).value)
            return EXIT_OK
    except CliInputError as exc:
        print(f"shockdecomp: error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except ValueError as exc:
        print(f"shockdecomp: error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
