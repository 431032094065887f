"""Frequency-domain view: spectral bells, ideal band-pass, and SRS.

A far-field style shock with three cleanly separated spectral bells shows
the band-pass/component equivalence: brick-wall filtering the record around
one bell reproduces the matching time-domain component.  The script also
compares the shock response spectrum of the full record against a
reduced-component reconstruction.
"""

import csv
import math
import pathlib

import numpy as np

import shockdecomp as sd

OUT = pathlib.Path(__file__).parent / "demo_output"
OUT.mkdir(exist_ok=True)


def write_csv(name, header, columns):
    with open(OUT / name, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in zip(*columns):
            w.writerow([repr(float(v)) for v in row])


def main():
    sig, truth = sd.fixtures.separated_bells_shock()
    t = sig.times()
    print(f"far-field fixture: {len(sig)} samples, three bells at "
          f"{', '.join(f'{p.frequency_hz:.0f}' for p in truth)} Hz "
          f"(kappa = {sd.kappa(truth[0]):.0f})")

    spec = sd.dft_spectrum(sig)
    pos = spec.frequencies > 0.0
    write_csv("bells_spectrum.csv", ["frequency_hz", "magnitude"],
              [spec.frequencies[pos], spec.magnitude()[pos]])

    print("\nband-pass vs component (normalised cross-correlation):")
    bands = ((250.0, 750.0), (1500.0, 2500.0), (6000.0, 10000.0))
    for p, (lo, hi) in zip(truth, bands):
        banded = sd.band_pass(sig, lo, hi)
        comp = sd.evaluate_real(p, t)
        den = math.sqrt(float(banded.samples @ banded.samples)
                        * float(comp @ comp))
        corr = float(banded.samples @ comp) / den
        sym = sd.band_symmetry_error(p, lo, hi)
        print(f"  {p.frequency_hz:6.0f} Hz bell, band [{lo:.0f}, {hi:.0f}] Hz: "
              f"ncc={corr:.4f}, centre offset {sym:.2%}")
        write_csv(f"bells_band_{p.frequency_hz:.0f}hz.csv",
                  ["time_s", "band_ms2", "component_ms2"],
                  [t, banded.samples, comp])

    # keep only the two dominant components and compare SRS curves
    partial = sd.Signal(sig.start_time, sig.dt,
                        sd.evaluate_real(truth[0], t) + sd.evaluate_real(truth[1], t))
    grid = sd.octave_grid(100.0, 10_000.0, 12)
    full = sd.srs(sig, 10.0, grid)
    reduced = sd.srs(partial, 10.0, grid)
    write_csv("bells_srs.csv", ["frequency_hz", "srs_full", "srs_two_components"],
              [grid, full.values, reduced.values])
    db = 20.0 * np.log10(reduced.values / full.values)
    print(f"\nSRS with only 2 of 3 components: deviation spans "
          f"{db.min():.1f} .. {db.max():.1f} dB (the dropped 8 kHz bell shows up)")
    print(f"\nCSV outputs in {OUT}")


if __name__ == "__main__":
    main()
