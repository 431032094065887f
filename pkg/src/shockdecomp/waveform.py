"""Parametric shock waveform family: evaluation, envelope, spectrum, classification.

A shock waveform component is an amplitude-modulated, one-sided damped harmonic

    w(t) = A * (t'/tau)**n * exp(zeta*omega*(tau - t')) * exp(1j*(omega*t' + phi))

for t' = t - t0 >= 0 and w(t) = 0 before the onset t0, with order
n = zeta*omega*tau.  The modulation envelope |w| rises as a power law, peaks
with value |A| at t' = tau and decays exponentially afterwards.  Evaluation
uses the log form exp(n*(ln t' - ln tau) + ...) so that large n cannot
overflow; the real exponent is always <= 0 because x*exp(1-x) <= 1.

Degenerate corners are exact members of the family, not singular limits:

* n == 0 because zeta == 0: a pure harmonic switched on at t0 (tau is inert).
* n == 0 because tau == 0: a "Prony mode", A*exp(-zeta*omega*t')*exp(1j*...),
  whose envelope peaks at the onset itself.  The power term is taken as 1
  in both cases, so the value at t' = 0 is A*exp(1j*phi).
* n > 0: the value at the onset is exactly 0.

The peak offset normalised by the carrier period, kappa = tau*omega/(2*pi),
acts as a proxy for the dominant source distance in wavelengths and drives
the near/mid/far-field classification.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "InvalidParameterError",
    "DivergentSpectrumError",
    "WaveformParams",
    "Signal",
    "ComplexSpectrumPoint",
    "FieldCategory",
    "evaluate",
    "evaluate_real",
    "envelope",
    "peak_time",
    "kappa",
    "classify",
    "symmetric_phase",
    "translate",
    "canonicalize",
    "spectrum",
    "harmonic",
    "prony",
    "kern_hayes",
    "asymmetric_wavelet",
    "symmetric_wavelet",
    "make_special",
]

TWO_PI = 2.0 * math.pi

# Wavelet-shaped components require a peak offset of many carrier periods.
WAVELET_MIN_KAPPA = 10.0


class InvalidParameterError(ValueError):
    """A waveform parameter is non-finite or outside its admissible range."""


class DivergentSpectrumError(ValueError):
    """The requested Fourier transform does not exist as a finite function."""


@dataclass(frozen=True)
class WaveformParams:
    """Six-parameter description of one shock waveform component.

    Attributes
    ----------
    amplitude : float
        Envelope peak value A in m/s^2.  The sign is meaningful and is
        preserved everywhere (a negative amplitude is *not* folded into the
        phase).
    angular_frequency : float
        Carrier frequency omega in rad/s, > 0.
    damping_ratio : float
        Dimensionless zeta, >= 0.  Zero gives a pure harmonic.
    peak_offset : float
        Duration tau in seconds from the onset to the envelope peak, >= 0.
    phase : float
        Carrier phase phi in radians.  Canonical range is [0, 2*pi); use
        :func:`canonicalize` to reduce it.
    initial_time : float
        Onset time t0 in seconds.  May be negative (a component can be
        active before the start of the record).
    """

    amplitude: float
    angular_frequency: float
    damping_ratio: float
    peak_offset: float
    phase: float = 0.0
    initial_time: float = 0.0

    def __post_init__(self):
        vals = (self.amplitude, self.angular_frequency, self.damping_ratio,
                self.peak_offset, self.phase, self.initial_time)
        if not all(math.isfinite(v) for v in vals):
            raise InvalidParameterError(f"non-finite waveform parameter in {vals}")
        if self.angular_frequency <= 0.0:
            raise InvalidParameterError(
                f"angular_frequency must be > 0, got {self.angular_frequency}")
        if self.damping_ratio < 0.0:
            raise InvalidParameterError(
                f"damping_ratio must be >= 0, got {self.damping_ratio}")
        if self.peak_offset < 0.0:
            raise InvalidParameterError(
                f"peak_offset must be >= 0, got {self.peak_offset}")

    @property
    def order(self) -> float:
        """Power-law order n = zeta * omega * tau (finite, >= 0)."""
        return self.damping_ratio * self.angular_frequency * self.peak_offset

    @property
    def frequency_hz(self) -> float:
        return self.angular_frequency / TWO_PI

    def as_vector(self) -> np.ndarray:
        """Parameter vector in fitting order (A, omega, t0, tau, zeta, phi)."""
        return np.array([self.amplitude, self.angular_frequency,
                         self.initial_time, self.peak_offset,
                         self.damping_ratio, self.phase])

    @classmethod
    def from_vector(cls, x) -> "WaveformParams":
        a, w, t0, tau, zeta, phi = (float(v) for v in x)
        return cls(amplitude=a, angular_frequency=w, damping_ratio=zeta,
                   peak_offset=tau, phase=phi, initial_time=t0)


@dataclass(frozen=True)
class Signal:
    """Uniformly sampled real acceleration time history (m/s^2)."""

    start_time: float
    dt: float
    samples: np.ndarray

    def __post_init__(self):
        arr = np.array(self.samples, dtype=float)
        if arr.ndim != 1 or arr.size < 2:
            raise ValueError("signal needs a 1-D sample array of length >= 2")
        if not (math.isfinite(self.start_time) and math.isfinite(self.dt)
                and self.dt > 0.0):
            raise ValueError(f"invalid time base start={self.start_time} dt={self.dt}")
        if not np.isfinite(arr).all():
            raise ValueError("signal samples must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "samples", arr)

    def __len__(self) -> int:
        return self.samples.size

    @property
    def sample_rate(self) -> float:
        return 1.0 / self.dt

    @property
    def duration(self) -> float:
        """Record length n*dt (rectangle-rule window)."""
        return self.samples.size * self.dt

    def times(self) -> np.ndarray:
        return self.start_time + self.dt * np.arange(self.samples.size)

    @classmethod
    def from_time_samples(cls, time, accel, rel_jitter: float = 1e-6) -> "Signal":
        """Build a Signal from explicit timestamps, checking uniformity.

        Raises ValueError if the sample spacing deviates from its median by
        more than ``rel_jitter`` relative.
        """
        time = np.asarray(time, dtype=float)
        accel = np.asarray(accel, dtype=float)
        if time.size != accel.size or time.size < 2:
            raise ValueError("time and acceleration columns must match, length >= 2")
        steps = np.diff(time)
        dt = float(np.median(steps))
        if dt <= 0.0:
            raise ValueError("timestamps must be strictly increasing")
        if np.max(np.abs(steps - dt)) > rel_jitter * dt:
            k = int(np.argmax(np.abs(steps - dt)))
            raise ValueError(
                f"non-uniform sampling: step {k} is {steps[k]:.9g} s vs median {dt:.9g} s")
        return cls(start_time=float(time[0]), dt=dt, samples=accel)


@dataclass(frozen=True)
class ComplexSpectrumPoint:
    """One point of the continuous spectrum: angular frequency xi (rad/s) and value."""

    angular_frequency: float
    value: complex


class FieldCategory(enum.Enum):
    """Dominant shock-distance category derived from kappa."""

    NEAR_FIELD = "near-field"
    MID_FIELD = "mid-field"
    FAR_FIELD = "far-field"


# ---------------------------------------------------------------------------
# evaluation kernel
# ---------------------------------------------------------------------------

def values_matrix(x, t) -> np.ndarray:
    """Waveform values for a batch of parameter rows on a shared time grid.

    ``x`` is (m, 6) in fitting order (A, omega, t0, tau, zeta, phi); ``t`` is
    (k,) in seconds.  Returns complex (m, k).  Rows must satisfy omega > 0,
    zeta >= 0, tau >= 0.  Used directly by the fitter so one call evaluates
    the model and all its finite-difference perturbations together.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    t = np.atleast_1d(np.asarray(t, dtype=float))
    amp = x[:, 0:1]
    omega = x[:, 1:2]
    tau = x[:, 3:4]
    zeta = x[:, 4:5]
    phi = x[:, 5:6]

    tp = t[None, :] - x[:, 2:3]
    order = zeta * omega * tau
    pos = tp > 0.0
    # value is nonzero strictly after onset, and at the onset itself when n == 0
    alive = pos | ((tp == 0.0) & (order == 0.0))

    ln_tp = np.log(np.where(pos, tp, 1.0))
    ln_tau = np.log(np.where(tau > 0.0, tau, 1.0))
    power = np.where(pos & (order > 0.0), order * (ln_tp - ln_tau), 0.0)
    exponent = np.where(alive, power + zeta * omega * (tau - tp), -np.inf)
    return amp * np.exp(exponent + 1j * (omega * tp + phi))


def _scalar_or_array(out, t):
    if np.ndim(t) == 0:
        return out[0, 0]
    return out[0]


def evaluate(p: WaveformParams, t):
    """Complex waveform value at time(s) ``t``; exactly 0 before the onset."""
    return _scalar_or_array(values_matrix(p.as_vector(), t), t)


def evaluate_real(p: WaveformParams, t):
    """Real part of :func:`evaluate`; the physical acceleration trace."""
    return np.real(_scalar_or_array(values_matrix(p.as_vector(), t), t))


def envelope(p: WaveformParams, t):
    """Modulation envelope |A|*(t'/tau)**n * exp(zeta*omega*(tau-t')).

    Equals ``abs(evaluate(p, t))`` everywhere and peaks with value
    ``abs(p.amplitude)`` at ``peak_time(p)``.
    """
    return np.abs(_scalar_or_array(values_matrix(p.as_vector(), t), t))


def peak_time(p: WaveformParams) -> float:
    """Time of the envelope maximum, t0 + tau."""
    return p.initial_time + p.peak_offset


def kappa(p: WaveformParams) -> float:
    """Peak offset normalised by the carrier period: tau*omega/(2*pi)."""
    return p.peak_offset * p.angular_frequency / TWO_PI


def classify(kappa_value: float) -> FieldCategory:
    """Map kappa to the near/mid/far-field category.

    [0, 1) is near-field, [1, 10) mid-field, [10, inf) far-field; boundaries
    belong to the upper category.
    """
    if not math.isfinite(kappa_value) or kappa_value < 0.0:
        raise ValueError(f"kappa must be finite and >= 0, got {kappa_value}")
    if kappa_value < 1.0:
        return FieldCategory.NEAR_FIELD
    if kappa_value < 10.0:
        return FieldCategory.MID_FIELD
    return FieldCategory.FAR_FIELD


def symmetric_phase(angular_frequency: float, peak_offset: float) -> float:
    """Phase that aligns a carrier extremum with the envelope peak.

    With phi = -(tau*omega - pi*floor(tau*omega/pi)) the absolute maximum of
    the real waveform equals |A| (up to grid resolution when sampled).
    """
    if angular_frequency <= 0.0 or peak_offset < 0.0:
        raise InvalidParameterError("need angular_frequency > 0 and peak_offset >= 0")
    x = peak_offset * angular_frequency
    return -(x - math.pi * math.floor(x / math.pi))


def envelope_decay_time(p: WaveformParams, amplitude_ratio: float = 1e-6) -> float:
    """Time after the peak at which the envelope falls to ratio*|A|.

    Returns the absolute time t (>= peak_time) solving
    n*(ln x + 1 - x) = ln(ratio) with x = t'/tau.  For large n the power-law
    growth offsets the exponential decay, so the envelope persists far past
    tau + k/(zeta*omega); use this, not a pure exponential rule, to size
    records that must capture the tail.  Requires zeta > 0.
    """
    if not 0.0 < amplitude_ratio < 1.0:
        raise ValueError(f"amplitude_ratio must be in (0, 1), got {amplitude_ratio}")
    if p.damping_ratio <= 0.0:
        raise InvalidParameterError("an undamped waveform never decays")
    drop = -math.log(amplitude_ratio)
    rate = p.damping_ratio * p.angular_frequency
    n = p.order
    if n == 0.0:  # Prony mode: plain exponential decay from the onset
        return p.initial_time + drop / rate
    lo, hi = 1.0, 1.0 + max(1.0, 4.0 * drop / n)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if n * (math.log(mid) + 1.0 - mid) > -drop:
            lo = mid
        else:
            hi = mid
    return p.initial_time + p.peak_offset * hi


def translate(p: WaveformParams, new_initial_time: float) -> WaveformParams:
    """Return ``p`` moved so its onset sits at ``new_initial_time``."""
    return replace(p, initial_time=float(new_initial_time))


def canonicalize(p: WaveformParams) -> WaveformParams:
    """Reduce the phase into [0, 2*pi) without changing the waveform.

    The amplitude sign is preserved: a negative A is equivalent to phi + pi,
    but the two are reported as distinct parameterisations.
    """
    phi = p.phase % TWO_PI
    if phi >= TWO_PI:  # rounding can land exactly on 2*pi for tiny negatives
        phi = 0.0
    return replace(p, phase=phi)


def spectrum(p: WaveformParams, xi):
    """Closed-form Fourier transform of the waveform at angular frequency xi.

    f(xi) = A * tau**(-n) * (zeta*omega + 1j*(xi - omega))**(-n-1)
              * Gamma(n+1) * exp(n + 1j*phi) * exp(-1j*xi*t0)

    with n = zeta*omega*tau, computed through log-gamma so that large n
    cannot overflow.  The magnitude is symmetric about xi = omega and peaks
    there.  A translated waveform (t0 != 0) contributes the phase factor
    exp(-1j*xi*t0).

    Raises DivergentSpectrumError for zeta == 0: the harmonic has no finite
    transform (the bell degenerates to a line at omega).
    """
    if p.damping_ratio == 0.0:
        raise DivergentSpectrumError(
            "zeta = 0 has no finite spectrum (divergent at xi = omega)")
    xi_arr = np.atleast_1d(np.asarray(xi, dtype=float))
    n = p.order
    const = n + math.lgamma(n + 1.0)
    if n > 0.0:
        const -= n * math.log(p.peak_offset)
    if p.amplitude != 0.0:
        const += math.log(abs(p.amplitude))
        sign = math.copysign(1.0, p.amplitude)
    else:
        const = -np.inf
        sign = 0.0
    pole = p.damping_ratio * p.angular_frequency + 1j * (xi_arr - p.angular_frequency)
    log_vals = const - (n + 1.0) * np.log(pole) \
        + 1j * (p.phase - xi_arr * p.initial_time)
    out = sign * np.exp(log_vals)
    if np.ndim(xi) == 0:
        return complex(out[0])
    return out


# ---------------------------------------------------------------------------
# special-case constructors
# ---------------------------------------------------------------------------

def harmonic(amplitude: float, angular_frequency: float, phase: float = 0.0,
             initial_time: float = 0.0) -> WaveformParams:
    """Undamped carrier switched on at the onset (zeta = 0, tau = 0)."""
    return WaveformParams(amplitude, angular_frequency, 0.0, 0.0,
                          phase, initial_time)


def prony(amplitude: float, angular_frequency: float, damping_ratio: float,
          phase: float = 0.0, initial_time: float = 0.0) -> WaveformParams:
    """Ordinary damped harmonic: peak at the onset itself (tau = 0)."""
    if damping_ratio <= 0.0:
        raise InvalidParameterError("Prony mode needs damping_ratio > 0")
    return WaveformParams(amplitude, angular_frequency, damping_ratio, 0.0,
                          phase, initial_time)


def kern_hayes(amplitude: float, angular_frequency: float, damping_ratio: float,
               phase: float = 0.0, initial_time: float = 0.0) -> WaveformParams:
    """Linear-onset damped harmonic t*exp(...): order n = 1, so tau = 1/(zeta*omega)."""
    if damping_ratio <= 0.0:
        raise InvalidParameterError("Kern-Hayes waveform needs damping_ratio > 0")
    tau = 1.0 / (damping_ratio * angular_frequency)
    return WaveformParams(amplitude, angular_frequency, damping_ratio, tau,
                          phase, initial_time)


def asymmetric_wavelet(amplitude: float, angular_frequency: float,
                       damping_ratio: float, peak_offset: float,
                       phase: float = 0.0, initial_time: float = 0.0) -> WaveformParams:
    """Far-field wavelet shape: requires zeta > 0 and kappa >= 10."""
    if damping_ratio <= 0.0:
        raise InvalidParameterError("wavelet shapes need damping_ratio > 0")
    p = WaveformParams(amplitude, angular_frequency, damping_ratio, peak_offset,
                       phase, initial_time)
    if kappa(p) < WAVELET_MIN_KAPPA:
        raise InvalidParameterError(
            f"wavelet shapes need kappa >= {WAVELET_MIN_KAPPA}, got {kappa(p):.3g}")
    return p


def symmetric_wavelet(amplitude: float, angular_frequency: float,
                      damping_ratio: float, peak_offset: float,
                      initial_time: float = 0.0) -> WaveformParams:
    """Asymmetric wavelet with the phase locked so max|Re w| = |A|."""
    phase = symmetric_phase(angular_frequency, peak_offset)
    return asymmetric_wavelet(amplitude, angular_frequency, damping_ratio,
                              peak_offset, phase, initial_time)


_SPECIAL_KINDS = {
    "harmonic": harmonic,
    "prony": prony,
    "kern_hayes": kern_hayes,
    "asymmetric_wavelet": asymmetric_wavelet,
    "symmetric_wavelet": symmetric_wavelet,
}


def make_special(kind: str, **params) -> WaveformParams:
    """Dispatch to one of the named special-case constructors.

    ``kind`` is one of "harmonic", "prony", "kern_hayes",
    "asymmetric_wavelet", "symmetric_wavelet".
    """
    try:
        ctor = _SPECIAL_KINDS[kind]
    except KeyError:
        raise InvalidParameterError(
            f"unknown special kind {kind!r}; choose from {sorted(_SPECIAL_KINDS)}")
    return ctor(**params)
