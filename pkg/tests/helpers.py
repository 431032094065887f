"""Independent reference computations used as test oracles.

Everything here deliberately avoids the code paths it is used to check:
the SRS oracle integrates the oscillator ODE directly, the convolution
oracle uses fixed-order Gauss-Legendre panels (not scipy.integrate.quad,
which the library's own fallback uses), and the spectrum oracle is a plain
scaled DFT of the sampled waveform.
"""

import math

import numpy as np

from shockdecomp import Signal


def ncc(a, b) -> float:
    den = math.sqrt(float(a @ a) * float(b @ b))
    return float(a @ b) / den if den > 0.0 else 0.0


def srs_sdof_rk4(sig: Signal, fn_hz: float, q: float = 10.0,
                 substeps: int = 8) -> float:
    """Maximax |absolute acceleration| of a base-excited SDOF oscillator.

    Integrates z'' + 2*zeta*wn*z' + wn^2*z = -a(t) with RK4 over the same
    piecewise-linear acceleration a ramp-invariant filter assumes (the
    record ramps up from zero one sample before its first value), sampling
    the response at the record instants.
    """
    zeta = 1.0 / (2.0 * q)
    wn = 2.0 * math.pi * fn_hz
    a = np.concatenate(([0.0], sig.samples))
    h = sig.dt / substeps
    z = v = 0.0
    peak = 0.0
    for k in range(len(a) - 1):
        a0, a1 = a[k], a[k + 1]
        for s in range(substeps):
            f0 = a0 + (a1 - a0) * (s / substeps)
            fm = a0 + (a1 - a0) * ((s + 0.5) / substeps)
            f1 = a0 + (a1 - a0) * ((s + 1) / substeps)
            k1z, k1v = v, -2 * zeta * wn * v - wn * wn * z - f0
            k2z = v + 0.5 * h * k1v
            k2v = -2 * zeta * wn * k2z - wn * wn * (z + 0.5 * h * k1z) - fm
            k3z = v + 0.5 * h * k2v
            k3v = -2 * zeta * wn * k3z - wn * wn * (z + 0.5 * h * k2z) - fm
            k4z = v + h * k3v
            k4v = -2 * zeta * wn * k4z - wn * wn * (z + h * k3z) - f1
            z += h / 6 * (k1z + 2 * k2z + 2 * k3z + k4z)
            v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v)
        peak = max(peak, abs(2 * zeta * wn * v + wn * wn * z))
    return peak


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(48)


def gauss_legendre_complex(f, a: float, b: float, panels: int = 8) -> complex:
    """Composite 48-point Gauss-Legendre quadrature of a complex integrand."""
    total = 0.0 + 0.0j
    edges = np.linspace(a, b, panels + 1)
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        x = mid + half * _GL_NODES
        total += half * np.sum(_GL_WEIGHTS * f(x))
    return total


def gaussian_prony_convolution(p, t: float, panels: int = 12) -> complex:
    """Brute-force convolution of the Gaussian pulse with the damped harmonic."""
    if t <= 0.0:
        return 0.0 + 0.0j
    sig, tau = p.gauss_width, p.gauss_peak_time
    beta = (p.damping_ratio - 1j) * p.angular_frequency

    def integrand(x):
        gauss = np.exp(-((x - tau) ** 2) / (2.0 * sig ** 2 * tau ** 2))
        resp = np.exp(-beta * (t - x) + 1j * p.phase)
        return p.amplitude * gauss * resp

    return gauss_legendre_complex(integrand, 0.0, t, panels)
