"""Reference signal generators rooted in the waveform family's mechanics.

Three generators live here:

* :func:`mdof_response` superposes the free-vibration modes of a narrow-band
  multi-degree-of-freedom system, sum_j Re(c_j * exp((-zeta + 1j)*w_j*t)).
  Two nearly-identical modes with cancelling weights produce a response
  whose early-time envelope grows linearly, i.e. the order-1 member of the
  waveform family, which is what motivates the power-law onset.
* :func:`taylor_term` is that building block directly: C * t**n * exp(lam*t)
  with lam = (-zeta + 1j)*w_mean.  Normalising by its envelope peak
  (:func:`taylor_peak_magnitude`) maps it exactly onto a WaveformParams with
  tau = n/(zeta*w_mean).
* :func:`advanced_prony` evaluates the closed form of a damped harmonic
  convolved with a Gaussian pulse, which involves the complex-argument
  error function.  The closed form is used while the erf arguments stay
  inside the double-precision envelope (|imag| <= 25, i.e.
  sigma*tau*omega <= 25*sqrt(2)); outside it, or on a non-finite result,
  evaluation falls back to direct numerical convolution automatically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad, trapezoid
from scipy.special import erf

from .waveform import InvalidParameterError, Signal

__all__ = [
    "ModalSystem",
    "AdvancedPronyParams",
    "mdof_response",
    "taylor_term",
    "taylor_peak_magnitude",
    "advanced_prony",
    "velocity_change",
]

ERF_IMAG_LIMIT = 25.0


@dataclass(frozen=True)
class ModalSystem:
    """Narrow-band cluster of free-vibration modes seen at one coordinate.

    ``frequencies`` are the modal natural frequencies (rad/s), assumed close
    to their mean; ``weights`` are the complex modal participation factors
    collapsed to the observed coordinate.  One damping ratio is shared.
    """

    frequencies: tuple
    damping_ratio: float
    weights: tuple
    max_relative_spread: float = 0.1

    def __post_init__(self):
        freqs = tuple(float(f) for f in self.frequencies)
        weights = tuple(complex(c) for c in self.weights)
        if len(freqs) == 0 or len(freqs) != len(weights):
            raise InvalidParameterError("need matching, non-empty frequency/weight lists")
        if any(f <= 0.0 for f in freqs):
            raise InvalidParameterError("modal frequencies must be > 0")
        if self.damping_ratio < 0.0:
            raise InvalidParameterError("damping_ratio must be >= 0")
        mean = sum(freqs) / len(freqs)
        spread = max(abs(f - mean) for f in freqs) / mean
        if spread > self.max_relative_spread:
            raise InvalidParameterError(
                f"modal spread {spread:.3g} exceeds the narrow-band limit "
                f"{self.max_relative_spread}")
        object.__setattr__(self, "frequencies", freqs)
        object.__setattr__(self, "weights", weights)

    @property
    def mean_frequency(self) -> float:
        return sum(self.frequencies) / len(self.frequencies)


def mdof_response(system: ModalSystem, times) -> Signal:
    """Exact modal superposition of the free-vibration response.

    ``times`` must be a uniform grid; the response is zero before t = 0.
    """
    t = np.asarray(times, dtype=float)
    if t.size < 2:
        raise ValueError("need at least two time samples")
    steps = np.diff(t)
    dt = float(np.median(steps))
    if dt <= 0.0 or np.max(np.abs(steps - dt)) > 1e-9 * dt:
        raise ValueError("time grid must be uniform and increasing")
    lam = np.array([(-system.damping_ratio + 1j) * w for w in system.frequencies])
    c = np.array(system.weights)
    vals = (c[:, None] * np.exp(lam[:, None] * t[None, :])).real.sum(axis=0)
    vals = np.where(t >= 0.0, vals, 0.0)
    return Signal(start_time=float(t[0]), dt=dt, samples=vals)


def taylor_term(order: int, coefficient: complex, mean_frequency: float,
                damping_ratio: float, t):
    """C * t**n * exp((-zeta + 1j)*w_mean*t) for t >= 0, zero before.

    This is the unnormalised waveform of order n; its envelope peaks at
    t = n/(zeta*w_mean) with magnitude |C|*taylor_peak_magnitude(...).
    """
    if order < 0 or int(order) != order:
        raise InvalidParameterError(f"order must be a non-negative integer, got {order}")
    if mean_frequency <= 0.0:
        raise InvalidParameterError("mean_frequency must be > 0")
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    lam = (-damping_ratio + 1j) * mean_frequency
    vals = coefficient * t_arr ** order * np.exp(lam * t_arr)
    vals = np.where(t_arr >= 0.0, vals, 0.0)
    if np.ndim(t) == 0:
        return complex(vals[0])
    return vals


def taylor_peak_magnitude(order: int, mean_frequency: float,
                          damping_ratio: float) -> float:
    """Envelope maximum of t**n * exp(-zeta*w_mean*t): tau**n * exp(-n) at tau = n/(zeta*w).

    This is the normalisation constant linking :func:`taylor_term` to the
    unit-peak waveform family.  Order 0 gives 1.
    """
    if order == 0:
        return 1.0
    if damping_ratio <= 0.0 or mean_frequency <= 0.0:
        raise InvalidParameterError("positive damping and frequency needed for order > 0")
    tau = order / (damping_ratio * mean_frequency)
    return tau ** order * math.exp(-order)


@dataclass(frozen=True)
class AdvancedPronyParams:
    """Damped harmonic convolved with a Gaussian pulse.

    The Gaussian exp(-(t - tau)^2 / (2*sigma^2*tau^2)) peaks at ``gauss_peak_time``
    tau > 0 with relative width ``gauss_width`` sigma > 0.
    """

    amplitude: float
    angular_frequency: float
    damping_ratio: float
    phase: float
    gauss_peak_time: float
    gauss_width: float

    def __post_init__(self):
        vals = (self.amplitude, self.angular_frequency, self.damping_ratio,
                self.phase, self.gauss_peak_time, self.gauss_width)
        if not all(math.isfinite(v) for v in vals):
            raise InvalidParameterError(f"non-finite parameter in {vals}")
        if self.angular_frequency <= 0.0:
            raise InvalidParameterError("angular_frequency must be > 0")
        if self.gauss_peak_time <= 0.0 or self.gauss_width <= 0.0:
            raise InvalidParameterError("gauss_peak_time and gauss_width must be > 0")


def _advanced_prony_closed(p: AdvancedPronyParams, t: float) -> complex:
    beta = (p.damping_ratio - 1j) * p.angular_frequency
    sig, tau = p.gauss_width, p.gauss_peak_time
    a0 = (1.0 + beta * sig ** 2 * tau) / (math.sqrt(2.0) * sig)
    a_t = t / (math.sqrt(2.0) * sig * tau) - a0
    bracket = erf(a0) + erf(a_t)
    expo = beta * (tau - t) + 0.5 * (sig * tau * beta) ** 2 + 1j * p.phase
    return (p.amplitude * math.sqrt(math.pi / 2.0) * sig * tau
            * bracket * np.exp(expo))


def _advanced_prony_quad(p: AdvancedPronyParams, t: float) -> complex:
    sig, tau = p.gauss_width, p.gauss_peak_time

    def integrand(x, part):
        g = math.exp(-((x - tau) ** 2) / (2.0 * sig ** 2 * tau ** 2))
        ph = (p.angular_frequency * (t - x) + p.phase)
        decay = math.exp(-p.damping_ratio * p.angular_frequency * (t - x))
        val = p.amplitude * decay * g
        return val * (math.cos(ph) if part == "re" else math.sin(ph))

    re = quad(integrand, 0.0, t, args=("re",), limit=200, epsabs=1e-14,
              epsrel=1e-10)[0]
    im = quad(integrand, 0.0, t, args=("im",), limit=200, epsabs=1e-14,
              epsrel=1e-10)[0]
    return complex(re, im)


def advanced_prony(p: AdvancedPronyParams, t):
    """Closed-form Gaussian-convolved damped harmonic; exactly 0 for t <= 0.

    Falls back to numerical convolution when the erf arguments leave the
    accurate envelope or the closed form returns a non-finite value.
    """
    imag_scale = (p.gauss_width * p.gauss_peak_time * p.angular_frequency
                  / math.sqrt(2.0))
    use_closed = imag_scale <= ERF_IMAG_LIMIT

    def one(tv: float) -> complex:
        if tv <= 0.0:
            return 0.0 + 0.0j
        if use_closed:
            val = _advanced_prony_closed(p, tv)
            if np.isfinite(val.real) and np.isfinite(val.imag):
                return val
        return _advanced_prony_quad(p, tv)

    if np.ndim(t) == 0:
        return one(float(t))
    return np.array([one(float(tv)) for tv in np.asarray(t, dtype=float)])


def velocity_change(s: Signal) -> float:
    """Net velocity change: trapezoidal integral of acceleration over the record.

    A physically plausible shock acceleration integrates to ~0.
    """
    return float(trapezoid(s.samples, dx=s.dt))
