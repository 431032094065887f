"""Bundled synthetic shock fixtures.

The measured shock records that motivated this library are not
redistributable, so demos, CLI smoke runs and the verification suite work
against synthetic shocks built from known components.  Each generator
returns both the sampled signal and the exact component list, so round
trips can be checked against ground truth.  Everything here is
deterministic: amplitudes are solved at run time from target energy shares
on the actual sample grid.
"""

from __future__ import annotations

import math

import numpy as np

from .waveform import Signal, WaveformParams, evaluate_real, symmetric_phase

__all__ = [
    "three_component_shock",
    "separated_bells_shock",
    "random_mixture_shock",
]


def _assemble(templates, shares, fs, duration, start_time, peak_accel):
    """Scale unit components to the requested energy shares and peak level."""
    n = int(round(duration * fs))
    t = start_time + np.arange(n) / fs
    dt = 1.0 / fs
    units = [evaluate_real(p, t) for p in templates]
    amps = [math.sqrt(share / (float(u @ u) * dt))
            for share, u in zip(shares, units)]
    total = sum(a * u for a, u in zip(amps, units))
    scale = peak_accel / float(np.max(np.abs(total)))
    params = tuple(
        WaveformParams(amplitude=a * scale,
                       angular_frequency=p.angular_frequency,
                       damping_ratio=p.damping_ratio,
                       peak_offset=p.peak_offset,
                       phase=p.phase,
                       initial_time=p.initial_time)
        for a, p in zip(amps, templates))
    return Signal(start_time, dt, total * scale), params


def three_component_shock(fs: float = 100_000.0, duration: float = 0.020,
                          peak_accel: float = 3000.0):
    """Round-trip fixture: three octave-separated components at 500/2000/8000 Hz.

    Real-trace energy shares are close to 0.60/0.29/0.11, with the third
    share deliberately above the 10% stop tolerance so the greedy loop must
    extract all three components before terminating.
    """
    templates = (
        WaveformParams(1.0, 2 * math.pi * 500.0, 0.060, 3.0e-3,
                       phase=1.0, initial_time=0.8e-3),
        WaveformParams(1.0, 2 * math.pi * 2000.0, 0.030, 1.2e-3,
                       phase=4.2, initial_time=0.4e-3),
        WaveformParams(1.0, 2 * math.pi * 8000.0, 0.015, 0.5e-3,
                       phase=2.6, initial_time=0.15e-3),
    )
    shares = (0.60, 0.29, 0.11)
    return _assemble(templates, shares, fs, duration, 0.0, peak_accel)


def separated_bells_shock(fs: float = 50_000.0, duration: float = 0.120,
                          peak_accel: float = 1500.0):
    """Far-field fixture whose spectral bells are cleanly separated.

    Three symmetric-wavelet components (kappa = 12) at 500/2000/8000 Hz; the
    spectrum shows three disjoint bells, so an ideal band-pass around each
    bell should reproduce the matching time-domain component.
    """
    specs = ((500.0, 24.0e-3, 2.0e-3), (2000.0, 6.0e-3, 1.0e-3),
             (8000.0, 1.5e-3, 0.5e-3))
    zeta = 0.015
    templates = tuple(
        WaveformParams(1.0, 2 * math.pi * f, zeta, tau,
                       phase=symmetric_phase(2 * math.pi * f, tau),
                       initial_time=t0)
        for f, tau, t0 in specs)
    shares = (0.50, 0.30, 0.20)
    return _assemble(templates, shares, fs, duration, 0.0, peak_accel)


def random_mixture_shock(seed: int, fs: float = 40_000.0,
                         duration: float = 0.010, peak_accel: float = 2000.0):
    """Seeded random mixture of 2-4 octave-separated components.

    Energy shares decay geometrically (consecutive ratio >= ~1.8) so the
    greedy extraction order is unambiguous, which is what the
    descending-energy diagnostic assumes.
    """
    rng = np.random.default_rng(seed)
    n_comp = int(rng.integers(2, 5))
    f0 = float(rng.uniform(400.0, 700.0))
    gain = float(rng.uniform(0.35, 0.55))
    shares = gain ** np.arange(n_comp)
    shares /= shares.sum()
    templates = []
    for k in range(n_comp):
        f = f0 * 2.0 ** k
        omega = 2 * math.pi * f
        kap = float(rng.uniform(0.3, 2.0))
        templates.append(WaveformParams(
            amplitude=1.0,
            angular_frequency=omega,
            damping_ratio=float(rng.uniform(0.02, 0.08)),
            peak_offset=kap * 2 * math.pi / omega,
            phase=float(rng.uniform(0.0, 2 * math.pi)),
            initial_time=float(rng.uniform(0.2e-3, 1.0e-3)),
        ))
    return _assemble(tuple(templates), tuple(shares), fs, duration, 0.0,
                     peak_accel)
