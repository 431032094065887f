"""Frequency-domain tooling: DFT spectra, brick-wall band-pass, SRS, metrics.

The discrete spectrum is the plain unwindowed DFT scaled by dt (plus the
start-time phase factor), so magnitudes approximate the continuous
transform of the sampled signal.  The band-pass filter is ideal: DFT bins
outside the requested band (and its negative-frequency mirror) are zeroed
and the signal inverse-transformed; bins whose centre lands exactly on a
band edge are kept.

The shock response spectrum follows the aerospace convention: maximax
absolute acceleration of a base-excited single-degree-of-freedom oscillator
per natural frequency, computed with the ramp-invariant (Smallwood)
recursive filter, Q = 10 by default on a 1/12-octave grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .decompose import signal_energy
from .waveform import Signal, WaveformParams

__all__ = [
    "Spectrum",
    "SrsCurve",
    "CompareReport",
    "dft_spectrum",
    "complex_dft_spectrum",
    "band_pass",
    "band_symmetry_error",
    "octave_grid",
    "srs",
    "compare",
]

DEFAULT_SRS_Q = 10.0
DEFAULT_SRS_POINTS_PER_OCTAVE = 12


@dataclass(frozen=True)
class Spectrum:
    """Complex DFT samples on an ascending frequency axis (Hz).

    Spacing is sample_rate/n; real inputs give Hermitian-symmetric values.
    """

    frequencies: np.ndarray
    values: np.ndarray
    dt: float
    n_samples: int

    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)


@dataclass(frozen=True)
class SrsCurve:
    """Maximax absolute-acceleration SRS on a strictly ascending Hz grid."""

    frequencies: np.ndarray
    values: np.ndarray
    q: float


@dataclass(frozen=True)
class CompareReport:
    residual_energy_ratio: float
    ncc: float
    srs_max_abs_db_error: float
    spectrum_l2_error: float


def dft_spectrum(s: Signal) -> Spectrum:
    """DFT scaled by dt, frequencies ascending (negative first).

    The start-time phase factor exp(-2j*pi*f*t0) is applied so complex
    values, not just magnitudes, approximate the continuous transform.
    """
    n = len(s)
    vals = np.fft.fft(np.asarray(s.samples)) * s.dt
    freqs = np.fft.fftfreq(n, s.dt)
    vals = vals * np.exp(-2j * np.pi * freqs * s.start_time)
    return Spectrum(frequencies=np.fft.fftshift(freqs),
                    values=np.fft.fftshift(vals), dt=s.dt, n_samples=n)


def complex_dft_spectrum(samples: np.ndarray, dt: float,
                         start_time: float = 0.0) -> Spectrum:
    """Same scaling for a complex-valued sample array (no Hermitian symmetry)."""
    samples = np.asarray(samples)
    n = samples.size
    vals = np.fft.fft(samples) * dt
    freqs = np.fft.fftfreq(n, dt)
    vals = vals * np.exp(-2j * np.pi * freqs * start_time)
    return Spectrum(frequencies=np.fft.fftshift(freqs),
                    values=np.fft.fftshift(vals), dt=dt, n_samples=n)


def band_pass(s: Signal, f_lo: float, f_hi: float) -> Signal:
    """Ideal band-pass: zero every DFT bin outside [f_lo, f_hi] (in Hz).

    Requires 0 <= f_lo < f_hi <= sample_rate/2.  Bins exactly at an edge are
    included (edge comparison carries a 1e-12 relative tolerance so a band
    limit written as sample_rate/2 still reaches the Nyquist bin, whose
    frequency is rounded through 1/(n*dt) rather than 1/dt).  Output is
    real on the same grid.
    """
    nyquist = s.sample_rate / 2.0
    if not (0.0 <= f_lo < f_hi <= nyquist * (1.0 + 1e-12)):
        raise ValueError(
            f"invalid band [{f_lo}, {f_hi}] Hz for Nyquist {nyquist} Hz")
    spec = np.fft.fft(s.samples)
    f_abs = np.abs(np.fft.fftfreq(len(s), s.dt))
    keep = (f_abs >= f_lo * (1.0 - 1e-12)) & (f_abs <= f_hi * (1.0 + 1e-12))
    spec[~keep] = 0.0
    return Signal(s.start_time, s.dt, np.fft.ifft(spec).real)


def band_symmetry_error(p: WaveformParams, f_lo: float, f_hi: float) -> float:
    """Relative offset of the component's carrier from the band centre.

    A well-chosen band brackets the component's spectral bell symmetrically,
    so its centre matches the carrier frequency and this error is ~0.
    """
    if not 0.0 <= f_lo < f_hi:
        raise ValueError(f"invalid band [{f_lo}, {f_hi}] Hz")
    centre = 2.0 * np.pi * 0.5 * (f_lo + f_hi)
    return abs(p.angular_frequency - centre) / p.angular_frequency


def octave_grid(f_lo: float, f_hi: float, points_per_octave: int) -> np.ndarray:
    """Fractional-octave grid from f_lo to f_hi with both endpoints exact."""
    if not (0.0 < f_lo < f_hi) or points_per_octave < 1:
        raise ValueError(f"invalid grid spec {f_lo}:{f_hi}:{points_per_octave}")
    n_oct = math.log2(f_hi / f_lo)
    m = int(math.floor(n_oct * points_per_octave + 1e-9))
    pts = f_lo * 2.0 ** (np.arange(m + 1) / points_per_octave)
    if pts[-1] >= f_hi * (1.0 - 1e-12):
        pts[-1] = f_hi
    else:
        pts = np.append(pts, f_hi)
    return pts


def _smallwood_coefficients(fn_hz: float, q: float, dt: float):
    # ramp-invariant absolute-acceleration filter (Smallwood)
    zeta = 1.0 / (2.0 * q)
    wn = 2.0 * np.pi * fn_hz
    wd = wn * math.sqrt(1.0 - zeta ** 2)
    E = math.exp(-zeta * wn * dt)
    K = wd * dt
    C = E * math.cos(K)
    S = E * math.sin(K)
    Sp = S / K
    b = (1.0 - Sp, 2.0 * (Sp - C), E ** 2 - Sp)
    a = (1.0, -2.0 * C, E ** 2)
    return b, a


def srs(s: Signal, q: float = DEFAULT_SRS_Q, grid=None) -> SrsCurve:
    """Maximax absolute-acceleration shock response spectrum.

    Parameters
    ----------
    s : Signal
        Base acceleration input.
    q : float
        Oscillator quality factor (> 0.5); damping is 1/(2*q).
    grid : array-like of Hz, optional
        Strictly ascending natural frequencies, each below the Nyquist
        frequency.  Default: 1/12-octave from 100 Hz to sample_rate/4.
    """
    if q <= 0.5:
        raise ValueError(f"q must exceed 0.5, got {q}")
    if grid is None:
        grid = octave_grid(100.0, s.sample_rate / 4.0,
                           DEFAULT_SRS_POINTS_PER_OCTAVE)
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0 or np.any(grid <= 0.0) or np.any(np.diff(grid) <= 0.0):
        raise ValueError("SRS grid must be strictly ascending and positive")
    if grid[-1] >= s.sample_rate / 2.0:
        raise ValueError(
            f"SRS grid reaches {grid[-1]} Hz, at or above Nyquist "
            f"{s.sample_rate / 2.0} Hz")
    out = np.empty(grid.size)
    for i, fn in enumerate(grid):
        b, a = _smallwood_coefficients(float(fn), q, s.dt)
        out[i] = float(np.max(np.abs(lfilter(b, a, s.samples))))
    return SrsCurve(frequencies=grid, values=out, q=q)


def _ncc(x: np.ndarray, y: np.ndarray) -> float:
    den = math.sqrt(float(x @ x) * float(y @ y))
    if den == 0.0:
        return 0.0
    return float(x @ y) / den


def compare(r: Signal, r_hat: Signal, q: float = DEFAULT_SRS_Q,
            srs_grid=None) -> CompareReport:
    """Four scalar fidelity metrics between a record and its reconstruction.

    residual_energy_ratio: energy of (r - r_hat) over energy of r;
    ncc: normalised cross-correlation sum(r*r_hat)/sqrt(sum r^2 * sum r_hat^2);
    srs_max_abs_db_error: worst 20*log10 ratio between the two SRS curves
    (1/12-octave, 100 Hz to min(10 kHz, fs/4) unless a grid is given);
    spectrum_l2_error: relative L2 distance between DFT magnitudes.
    """
    if (len(r) != len(r_hat) or r.dt != r_hat.dt
            or r.start_time != r_hat.start_time):
        raise ValueError("signals must share the same sample grid")
    diff = Signal(r.start_time, r.dt, r.samples - r_hat.samples)
    ratio = signal_energy(diff) / signal_energy(r)
    ncc = _ncc(r.samples, r_hat.samples)

    if srs_grid is None:
        srs_grid = octave_grid(100.0, min(10000.0, r.sample_rate / 4.0),
                               DEFAULT_SRS_POINTS_PER_OCTAVE)
    srs_r = srs(r, q, srs_grid).values
    srs_h = srs(r_hat, q, srs_grid).values
    with np.errstate(divide="ignore", invalid="ignore"):
        db = 20.0 * np.log10(srs_h / srs_r)
    db = np.where(np.isnan(db), 0.0, db)  # 0/0 at silent grid points
    srs_err = float(np.max(np.abs(db)))

    mag_r = dft_spectrum(r).magnitude()
    mag_h = dft_spectrum(r_hat).magnitude()
    spec_err = float(np.linalg.norm(mag_h - mag_r) / np.linalg.norm(mag_r))
    return CompareReport(residual_energy_ratio=ratio, ncc=ncc,
                         srs_max_abs_db_error=srs_err,
                         spectrum_l2_error=spec_err)
