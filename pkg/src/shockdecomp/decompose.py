"""Greedy shock decomposition: fit a component, subtract it, repeat.

Starting from the measured record r1 = r, each pass fits the single best
waveform component to the current residual and subtracts its real trace on
the exact sample grid:

    r_{i+1} = r_i - Re w_i  =  r - sum_{j<=i} Re w_j

The loop stops once the residual holds no more than ``tolerance`` of the
original signal energy (default 10%), or when the component cap is reached,
or when fitting stops making progress.  A fit that fails to shave at least
1e-6 of the residual energy triggers one deterministic escalation with the
densified start grid before the run is declared failed.

Energy bookkeeping follows two conventions side by side: the per-component
weight epsilon_wi integrates the squared complex modulus |w|^2 (the
envelope energy) over the analysis window, while the residual trace and the
fitting objective use the real trace.  Both are recorded.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .fitting import Bounds, FitResult, FittingFailedError, fit_component, generate_starts
from .waveform import Signal, WaveformParams, canonicalize, evaluate_real, values_matrix

__all__ = [
    "Termination",
    "Decomposition",
    "signal_energy",
    "energy_ratio",
    "decompose",
    "goodness_check",
]

# a fitted component must shave at least this relative energy to be accepted
MIN_RELATIVE_REDUCTION = 1e-6


class Termination(enum.Enum):
    TOLERANCE_MET = "tolerance-met"
    MAX_COMPONENTS = "max-components"
    FIT_FAILED = "fit-failed"


@dataclass(frozen=True)
class Decomposition:
    """Result of the greedy extraction loop.

    ``residual_ratio_trace`` starts at 1.0 (nothing subtracted yet), so entry
    k is the residual energy fraction after k components and its index equals
    the component count needed to reach it.  ``energy_ratios`` holds the
    complex-modulus weights epsilon_wi; ``real_energy_ratios`` the real-trace
    variant.  ``fits`` keeps per-component solver provenance.
    """

    components: tuple
    energy_ratios: tuple
    real_energy_ratios: tuple
    residual_ratio_trace: tuple
    termination: Termination
    original_energy: float
    fits: tuple = ()
    failed_iteration: int | None = None


def signal_energy(s: Signal) -> float:
    """Rectangle-rule signal energy sum(s^2)*dt in (m/s^2)^2*s."""
    return float(s.samples @ s.samples) * s.dt


def energy_ratio(p: WaveformParams, reference_energy: float, window: Signal) -> float:
    """Component weight: integral of |w|^2 over the window, over the reference.

    The squared complex modulus is the squared envelope, so this measures the
    component's full modulated energy rather than the oscillating real trace.
    """
    if reference_energy <= 0.0:
        raise ValueError(f"reference energy must be > 0, got {reference_energy}")
    vals = values_matrix(p.as_vector(), window.times())[0]
    mag2 = vals.real ** 2 + vals.imag ** 2
    return float(np.sum(mag2)) * window.dt / reference_energy


def _real_energy_ratio(p, reference_energy, window):
    w = evaluate_real(p, window.times())
    return float(w @ w) * window.dt / reference_energy


def decompose(r: Signal, tolerance: float = 0.10, bounds: Bounds = None,
              max_components: int = 100) -> Decomposition:
    """Decompose ``r`` into waveform components until the residual is small.

    Raises ValueError for a zero-energy input.  Note the boundary semantics:
    with tolerance = 1.0 the initial residual ratio (1.0) already satisfies
    the stop rule and the decomposition is empty.
    """
    if not 0.0 < tolerance <= 1.0:
        raise ValueError(f"tolerance must be in (0, 1], got {tolerance}")
    if max_components < 1:
        raise ValueError(f"max_components must be >= 1, got {max_components}")
    e_orig = signal_energy(r)
    if e_orig <= 0.0:
        raise ValueError("cannot decompose a zero-energy signal")
    if bounds is None:
        bounds = Bounds.default_for(r)

    times = r.times()
    residual = r
    e_res = e_orig
    components = []
    fits = []
    eps_w = []
    eps_w_real = []
    trace = [1.0]
    termination = Termination.MAX_COMPONENTS
    failed_iteration = None

    while trace[-1] > tolerance and len(components) < max_components:
        fit = _fit_with_escalation(residual, bounds, e_res)
        if fit is None:
            termination = Termination.FIT_FAILED
            failed_iteration = len(components) + 1
            break
        p = canonicalize(fit.params)
        residual = Signal(r.start_time, r.dt,
                          residual.samples - evaluate_real(p, times))
        e_res = signal_energy(residual)
        components.append(p)
        fits.append(fit)
        eps_w.append(energy_ratio(p, e_orig, r))
        eps_w_real.append(_real_energy_ratio(p, e_orig, r))
        trace.append(e_res / e_orig)
    else:
        if trace[-1] <= tolerance:
            termination = Termination.TOLERANCE_MET

    return Decomposition(
        components=tuple(components),
        energy_ratios=tuple(eps_w),
        real_energy_ratios=tuple(eps_w_real),
        residual_ratio_trace=tuple(trace),
        termination=termination,
        original_energy=e_orig,
        fits=tuple(fits),
        failed_iteration=failed_iteration,
    )


def _fit_with_escalation(residual, bounds, e_res) -> FitResult | None:
    """Fit one component; retry once on the dense grid if progress stalls."""
    for dense in (False, True):
        try:
            fit = fit_component(residual, bounds,
                                starts=generate_starts(residual, bounds, dense=dense))
        except FittingFailedError:
            continue
        if fit.residual_energy <= e_res * (1.0 - MIN_RELATIVE_REDUCTION):
            return fit
    return None


def goodness_check(d: Decomposition) -> list:
    """Indices of components that break the descending-energy property.

    Component i is flagged when its weight fails to stay strictly below the
    previous one's (epsilon_{i-1} <= epsilon_i).  An empty list indicates the
    start grid was adequate; violations suggest enlarging it.
    """
    eps = d.energy_ratios
    return [i for i in range(1, len(eps)) if eps[i - 1] <= eps[i]]
