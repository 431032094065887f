"""Tour of the shock waveform family.

Builds the named special cases (harmonic, damped harmonic, unit-order
linear-onset, wavelets), samples them, reports kappa and field category for
a few published-style parameter sets, and writes plot-ready CSVs of the
time traces and closed-form spectra into demo_output/.
"""

import csv
import math
import pathlib

import numpy as np

import shockdecomp as sd

OUT = pathlib.Path(__file__).parent / "demo_output"
OUT.mkdir(exist_ok=True)

TWO_PI = 2.0 * math.pi
F_CARRIER = 1000.0
OMEGA = TWO_PI * F_CARRIER


def write_csv(name, header, columns):
    with open(OUT / name, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in zip(*columns):
            w.writerow([repr(float(v)) for v in row])


def main():
    cases = {
        "harmonic": sd.harmonic(1.0, OMEGA),
        "damped_harmonic": sd.prony(1.0, OMEGA, 0.05),
        "linear_onset": sd.kern_hayes(1.0, OMEGA, 0.05),
        "asymmetric_wavelet": sd.asymmetric_wavelet(1.0, OMEGA, 0.02, 15.0 / F_CARRIER),
        "symmetric_wavelet": sd.symmetric_wavelet(1.0, OMEGA, 0.02, 15.0 / F_CARRIER),
    }
    t = np.linspace(0.0, 60e-3, 6001)
    print("waveform family members (carrier 1 kHz):")
    for name, p in cases.items():
        trace = sd.evaluate_real(p, t)
        env = sd.envelope(p, t)
        write_csv(f"waveform_{name}.csv",
                  ["time_s", "accel_ms2", "envelope_ms2"], [t, trace, env])
        kap = sd.kappa(p)
        print(f"  {name:20s} order n={p.order:7.3f}  kappa={kap:6.2f}  "
              f"peak at {sd.peak_time(p) * 1e3:6.2f} ms")

    print("\nclosed-form spectra (bell shapes around the carrier):")
    xi = TWO_PI * np.linspace(F_CARRIER / 4, 4 * F_CARRIER, 1500)
    for name, p in cases.items():
        if p.damping_ratio == 0.0:
            print(f"  {name:20s} spectrum divergent (undamped carrier)")
            continue
        mags = np.abs(sd.spectrum(p, xi))
        write_csv(f"spectrum_{name}.csv", ["frequency_hz", "magnitude"],
                  [xi / TWO_PI, mags])
        peak_f = xi[int(np.argmax(mags))] / TWO_PI
        print(f"  {name:20s} bell peak at {peak_f:7.1f} Hz")

    print("\nfield classification by kappa = tau * f:")
    for tau_ms, f_hz in ((0.15, 2077.0), (1.30, 4683.0), (5.73, 4437.0)):
        p = sd.WaveformParams(1.0, TWO_PI * f_hz, 0.05, tau_ms * 1e-3)
        kap = sd.kappa(p)
        print(f"  tau={tau_ms:5.2f} ms, f={f_hz:7.0f} Hz -> kappa={kap:6.2f} "
              f"-> {sd.classify(kap).value}")
    print(f"\nCSV outputs in {OUT}")


if __name__ == "__main__":
    main()
