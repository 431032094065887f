"""Characteristic-component selection and reconstruction.

Least-squares extraction concentrates on high-energy (usually
high-frequency) components, which can bury low-frequency content that
matters for structural response.  Two sets fix that:

* the energy set: the first eta_90 components in fit order, where eta_90 is
  the least count after which the residual holds <= 10% of the original
  energy (the shock-complexity index);
* the low-frequency set: every later component whose carrier frequency is
  strictly below that of *all* earlier components, scanned in fit order so
  each admission raises the bar for the next.

Their union drives the simplified reconstruction r_hat.  All indices here
are 0-based positions in the decomposition's fit order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .decompose import Decomposition, Termination, signal_energy
from .waveform import Signal, evaluate_real

__all__ = [
    "ToleranceNotMetError",
    "SelectionReport",
    "eta_90",
    "low_freq_set",
    "reconstruct",
    "select_components",
]


class ToleranceNotMetError(ValueError):
    """The residual trace never reaches the requested tolerance."""


@dataclass(frozen=True)
class SelectionReport:
    eta90: int
    energy_set: tuple
    low_freq_set: tuple
    selected_set: tuple
    reconstructed: Signal
    residual_ratio_of_reconstruction: float


def eta_90(d: Decomposition, tolerance: float = 0.10) -> int:
    """Least number of components after which the residual ratio is <= tolerance."""
    if d.termination is not Termination.TOLERANCE_MET:
        raise ToleranceNotMetError(
            f"decomposition terminated with {d.termination.value}, "
            "so no component count reaches the tolerance")
    for count, ratio in enumerate(d.residual_ratio_trace):
        if ratio <= tolerance:
            return count
    raise ToleranceNotMetError(
        f"residual trace never reaches tolerance {tolerance}")


def low_freq_set(d: Decomposition, eta90: int) -> tuple:
    """Indices past the energy set whose frequency undercuts all predecessors."""
    if not 0 <= eta90 <= len(d.components):
        raise ValueError(f"eta90 {eta90} out of range for "
                         f"{len(d.components)} components")
    freqs = [p.angular_frequency for p in d.components]
    bar = min(freqs[:eta90], default=np.inf)
    picked = []
    for i in range(eta90, len(freqs)):
        if freqs[i] < bar:
            picked.append(i)
        bar = min(bar, freqs[i])
    return tuple(picked)


def reconstruct(d: Decomposition, indices, reference: Signal) -> Signal:
    """Superpose the chosen components on the reference grid.

    An empty index set gives the zero signal (same grid), not an error.
    """
    idx = list(indices)
    if any(i < 0 or i >= len(d.components) for i in idx):
        raise ValueError(f"component index out of range in {idx}")
    t = reference.times()
    total = np.zeros(t.size)
    for i in idx:
        total += evaluate_real(d.components[i], t)
    return Signal(reference.start_time, reference.dt, total)


def select_components(d: Decomposition, reference: Signal,
                      tolerance: float = 0.10) -> SelectionReport:
    """Assemble energy set, low-frequency set, their union and r_hat."""
    eta = eta_90(d, tolerance)
    energy = tuple(range(eta))
    low = low_freq_set(d, eta)
    selected = energy + low  # fit order is preserved: low indices all exceed eta
    rhat = reconstruct(d, selected, reference)
    diff = Signal(reference.start_time, reference.dt,
                  reference.samples - rhat.samples)
    ratio = signal_energy(diff) / signal_energy(reference)
    return SelectionReport(eta90=eta, energy_set=energy, low_freq_set=low,
                           selected_set=selected, reconstructed=rhat,
                           residual_ratio_of_reconstruction=ratio)
