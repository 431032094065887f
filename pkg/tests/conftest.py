import math
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # reference_tables / helpers

import shockdecomp as sd
from shockdecomp import cli, fitting


def write_bounds_toml(path, f_lo, f_hi, amp=30000.0, t_span=0.02, tau_hi=0.04):
    path.write_text(
        f"amplitude_ms2 = [{-amp}, {amp}]\n"
        f"frequency_hz = [{f_lo}, {f_hi}]\n"
        f"initial_time_ms = [{-t_span * 1e3}, {t_span * 1e3}]\n"
        f"peak_offset_ms = [0.0, {tau_hi * 1e3}]\n"
        "damping_ratio = [0.0, 1e4]\n"
        f"phase_rad = [{-2 * math.pi}, {4 * math.pi}]\n",
        encoding="utf-8")


@pytest.fixture(scope="session")
def roundtrip_truth():
    """Canonical 3-component fixture: (signal, true params)."""
    return sd.fixtures.three_component_shock()


@pytest.fixture(scope="session")
def roundtrip_cli_runs(tmp_path_factory, roundtrip_truth):
    """Two identical CLI decompose runs on the canonical fixture.

    Shared by the round-trip, energy-ordering, SRS-fidelity and determinism
    checks so the expensive multistart decomposition happens exactly twice
    (the minimum the byte-identity check needs).
    """
    base = tmp_path_factory.mktemp("roundtrip")
    sig, _ = roundtrip_truth
    csv_path = base / "input.csv"
    cli.write_signal_csv(str(csv_path), sig)
    bounds_path = base / "bounds.toml"
    write_bounds_toml(bounds_path, 300.0, 9600.0)

    elapsed = []
    outs = []
    for run in (1, 2):
        out = base / f"run{run}"
        t0 = time.perf_counter()
        code = cli.main(["decompose", str(csv_path),
                         "--out", str(out),
                         "--bounds", str(bounds_path),
                         "--tolerance", "0.10"])
        elapsed.append(time.perf_counter() - t0)
        assert code == 0, f"decompose run {run} exited {code}"
        outs.append(out)
    return {"input_csv": csv_path, "outs": outs, "elapsed": elapsed}


@pytest.fixture(scope="session")
def small_shock():
    """Cheap 2-component mixture for unit-level decomposition tests."""
    return sd.fixtures.random_mixture_shock(seed=2026, fs=32768.0,
                                            duration=0.008)


@pytest.fixture(scope="session")
def small_bounds():
    return fitting.Bounds(
        amplitude=(-30000.0, 30000.0),
        angular_frequency=(2 * math.pi * 250.0, 2 * math.pi * 8000.0),
        initial_time=(-0.01, 0.01),
        peak_offset=(0.0, 0.02),
        damping_ratio=(0.0, 1e4),
        phase=(-2 * math.pi, 4 * math.pi),
    )


@pytest.fixture(scope="session")
def small_decomposition(small_shock, small_bounds):
    sig, _ = small_shock
    return sd.decompose(sig, tolerance=0.10, bounds=small_bounds,
                        max_components=8)
