"""Parametric decomposition and classification of transient shock signals.

The package represents pyroshock/ballistic-style acceleration records as a
superposition of six-parameter modulated damped harmonics, fits the
components greedily with a deterministic multistart least-squares search,
selects the characteristic subset (energy-dominant plus low-frequency),
and provides the supporting frequency-domain tooling (closed-form spectra,
ideal band-pass, shock response spectra) and reference generators.
"""

from .waveform import (
    InvalidParameterError,
    DivergentSpectrumError,
    WaveformParams,
    Signal,
    ComplexSpectrumPoint,
    FieldCategory,
    evaluate,
    evaluate_real,
    envelope,
    peak_time,
    kappa,
    classify,
    symmetric_phase,
    translate,
    canonicalize,
    spectrum,
    harmonic,
    prony,
    kern_hayes,
    asymmetric_wavelet,
    symmetric_wavelet,
    make_special,
)
from .fitting import (
    Bounds,
    StartPoint,
    FitResult,
    FittingFailedError,
    generate_starts,
    fit_single,
    fit_component,
)
from .decompose import (
    Termination,
    Decomposition,
    signal_energy,
    energy_ratio,
    decompose,
    goodness_check,
)
from .selection import (
    ToleranceNotMetError,
    SelectionReport,
    eta_90,
    low_freq_set,
    reconstruct,
    select_components,
)
from .spectral import (
    Spectrum,
    SrsCurve,
    CompareReport,
    dft_spectrum,
    complex_dft_spectrum,
    band_pass,
    band_symmetry_error,
    octave_grid,
    srs,
    compare,
)
from .synthetic import (
    ModalSystem,
    AdvancedPronyParams,
    mdof_response,
    taylor_term,
    taylor_peak_magnitude,
    advanced_prony,
    velocity_change,
)
from . import fixtures

__version__ = "0.1.0"

__all__ = [
    "InvalidParameterError", "DivergentSpectrumError", "WaveformParams",
    "Signal", "ComplexSpectrumPoint", "FieldCategory", "evaluate",
    "evaluate_real", "envelope", "peak_time", "kappa", "classify",
    "symmetric_phase", "translate", "canonicalize", "spectrum", "harmonic",
    "prony", "kern_hayes", "asymmetric_wavelet", "symmetric_wavelet",
    "make_special",
    "Bounds", "StartPoint", "FitResult", "FittingFailedError",
    "generate_starts", "fit_single", "fit_component",
    "Termination", "Decomposition", "signal_energy", "energy_ratio",
    "decompose", "goodness_check",
    "ToleranceNotMetError", "SelectionReport", "eta_90", "low_freq_set",
    "reconstruct", "select_components",
    "Spectrum", "SrsCurve", "CompareReport", "dft_spectrum",
    "complex_dft_spectrum", "band_pass", "band_symmetry_error",
    "octave_grid", "srs", "compare",
    "ModalSystem", "AdvancedPronyParams", "mdof_response", "taylor_term",
    "taylor_peak_magnitude", "advanced_prony", "velocity_change",
    "fixtures",
]
