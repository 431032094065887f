import math

import numpy as np
import pytest

import shockdecomp as sd
from shockdecomp import waveform
from shockdecomp.spectral import complex_dft_spectrum

from reference_tables import FFS_ROWS, MFS_ROWS, NFS_ROWS, row_params

TWO_PI = 2.0 * math.pi


def random_params(rng, allow_negative_onset=True):
    kind = rng.integers(0, 4)
    zeta = 0.0 if kind == 0 else float(rng.uniform(0.005, 5.0))
    tau = 0.0 if kind == 1 else float(rng.uniform(0.0, 10e-3))
    return sd.WaveformParams(
        amplitude=float(rng.uniform(0.2, 5000.0)) * (-1 if rng.random() < 0.3 else 1),
        angular_frequency=TWO_PI * float(rng.uniform(20.0, 20000.0)),
        damping_ratio=zeta,
        peak_offset=tau,
        phase=float(rng.uniform(-7.0, 13.0)),
        initial_time=float(rng.uniform(-5e-3, 5e-3)) if allow_negative_onset else 0.0,
    )


class TestEvaluate:
    def test_harmonic_at_onset(self):
        p = sd.harmonic(1.0, TWO_PI * 100.0)
        assert sd.evaluate(p, 0.0) == 1.0 + 0.0j

    def test_prony_at_onset(self):
        p = sd.prony(1.0, TWO_PI * 440.0, 0.05)
        assert sd.evaluate(p, 0.0) == 1.0 + 0.0j

    def test_zero_before_onset(self):
        p = sd.WaveformParams(3.0, TWO_PI * 500.0, 0.05, 2e-3, 0.3, 1e-3)
        t = np.array([-1.0, 0.0, 1e-3 - 1e-12])
        assert np.array_equal(sd.evaluate(p, t), np.zeros(3, dtype=complex))

    def test_zero_at_onset_for_positive_order(self):
        p = sd.WaveformParams(3.0, TWO_PI * 500.0, 0.05, 2e-3)
        assert sd.evaluate(p, 0.0) == 0.0 + 0.0j

    def test_envelope_peak_equals_amplitude(self):
        # phase chosen so the carrier extremum meets the envelope peak
        omega, tau = TWO_PI * 500.0, 2e-3
        p = sd.WaveformParams(3.0, omega, 0.05, tau,
                              phase=sd.symmetric_phase(omega, tau))
        assert abs(abs(sd.evaluate(p, tau)) - 3.0) < 1e-12
        # dense sampling never exceeds the envelope peak
        t = np.linspace(0.0, 20e-3, 40001)
        assert np.max(np.abs(sd.evaluate(p, t))) <= 3.0 + 1e-12

    def test_harmonic_real_values(self):
        p = sd.harmonic(1.0, TWO_PI * 100.0)
        assert sd.evaluate_real(p, 0.0) == 1.0
        quarter = 0.25 / 100.0  # omega*t = pi/2
        assert abs(sd.evaluate_real(p, quarter)) < 1e-12

    def test_prony_real_after_one_period(self):
        p = sd.prony(1.0, TWO_PI * 50.0, 0.1)
        expected = math.exp(-TWO_PI * 0.1)  # 0.53349 by direct formula
        assert sd.evaluate_real(p, 1.0 / 50.0) == pytest.approx(expected, rel=1e-12)

    def test_invalid_parameters_raise(self):
        with pytest.raises(sd.InvalidParameterError):
            sd.WaveformParams(1.0, 0.0, 0.0, 0.0)
        with pytest.raises(sd.InvalidParameterError):
            sd.WaveformParams(1.0, 1.0, -0.1, 0.0)
        with pytest.raises(sd.InvalidParameterError):
            sd.WaveformParams(1.0, 1.0, 0.1, -1e-6)
        with pytest.raises(sd.InvalidParameterError):
            sd.WaveformParams(math.nan, 1.0, 0.1, 0.0)

    def test_huge_order_does_not_overflow(self):
        p = row_params(NFS_ROWS[6])  # zeta ~ 19, order ~ 2644
        assert p.order > 2000.0
        t = np.linspace(-5e-3, 20e-3, 5000)
        vals = sd.evaluate(p, t)
        assert np.all(np.isfinite(vals))
        assert abs(sd.envelope(p, sd.peak_time(p)) - abs(p.amplitude)) < 1e-9 * abs(p.amplitude)


class TestEnvelope:
    def test_peak_value(self):
        p = sd.WaveformParams(-7.5, TWO_PI * 1200.0, 0.08, 3e-3, 1.1, 0.5e-3)
        assert sd.envelope(p, sd.peak_time(p)) == pytest.approx(7.5, rel=1e-12)

    def test_zero_before_onset(self):
        p = sd.WaveformParams(1.0, TWO_PI * 100.0, 0.05, 1e-3)
        assert sd.envelope(p, -1e-9) == 0.0

    def test_two_tau_ratio_matches_formula(self):
        # envelope(t0 + 2*tau)/|A| = 2**n * exp(-n)
        p = sd.WaveformParams(1.0, TWO_PI * 1000.0, 0.05, 1e-3)
        n = p.order
        expected = 2.0 ** n * math.exp(-n)  # 0.908100 at n = 0.31416
        assert sd.envelope(p, 2e-3) == pytest.approx(expected, rel=1e-12)
        # cross-check against the sampled maximum of |evaluate|
        t = np.linspace(0.0, 10e-3, 100001)
        assert np.max(np.abs(sd.evaluate(p, t))) == pytest.approx(1.0, abs=1e-6)

    def test_envelope_equals_abs_evaluate_randomized(self):
        rng = np.random.default_rng(11)
        t = np.linspace(-5e-3, 25e-3, 2001)
        for _ in range(100):
            p = random_params(rng)
            env = sd.envelope(p, t)
            mag = np.abs(sd.evaluate(p, t))
            assert np.max(np.abs(env - mag)) <= 1e-12 * max(abs(p.amplitude), 1.0)

    def test_argmax_on_dense_grid_randomized(self):
        rng = np.random.default_rng(12)
        for _ in range(25):
            p = random_params(rng)
            if p.damping_ratio == 0.0:
                continue  # flat envelope: no interior peak
            dt = p.peak_offset / 2000.0 if p.peak_offset > 0 else 1e-7
            t = p.initial_time + dt * np.arange(4001)
            k = int(np.argmax(sd.envelope(p, t)))
            assert abs(t[k] - sd.peak_time(p)) <= dt + 1e-15


class TestPeakTimeKappaClassify:
    def test_peak_time_sum(self):
        p = sd.WaveformParams(1.0, TWO_PI * 100.0, 0.05, 2e-3, 0.0, 1e-3)
        assert sd.peak_time(p) == pytest.approx(3e-3, rel=1e-15)

    def test_prony_peaks_at_onset(self):
        p = sd.prony(1.0, TWO_PI * 100.0, 0.05, initial_time=0.7e-3)
        assert sd.peak_time(p) == pytest.approx(0.7e-3)

    def test_far_field_row_peak_time(self):
        p = row_params(FFS_ROWS[0])  # tau 5.73 ms after onset 0.22 ms
        assert sd.peak_time(p) == pytest.approx(5.95e-3, rel=1e-12)
        dt = 1e-6
        t = np.arange(-1e-3, 30e-3, dt)
        k = int(np.argmax(sd.envelope(p, t)))
        assert abs(t[k] - 5.95e-3) <= dt

    def test_kappa_values(self):
        assert sd.kappa(row_params(FFS_ROWS[0])) == pytest.approx(25.424, abs=5e-4)
        assert sd.kappa(row_params(NFS_ROWS[4])) == pytest.approx(51.95, abs=5e-3)
        assert sd.kappa(sd.prony(1.0, TWO_PI * 999.0, 0.3)) == 0.0

    def test_classify_boundaries(self):
        assert sd.classify(0.0) is sd.FieldCategory.NEAR_FIELD
        assert sd.classify(0.9999) is sd.FieldCategory.NEAR_FIELD
        assert sd.classify(1.0) is sd.FieldCategory.MID_FIELD
        assert sd.classify(9.9999) is sd.FieldCategory.MID_FIELD
        assert sd.classify(10.0) is sd.FieldCategory.FAR_FIELD
        assert sd.classify(1e6) is sd.FieldCategory.FAR_FIELD
        with pytest.raises(ValueError):
            sd.classify(-1e-9)

    def test_classify_scale_invariance(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            p = random_params(rng)
            c = float(rng.uniform(0.01, 100.0))
            scaled = sd.WaveformParams(
                p.amplitude, p.angular_frequency / c, p.damping_ratio,
                p.peak_offset * c, p.phase, p.initial_time * c)
            assert sd.kappa(scaled) == pytest.approx(sd.kappa(p), rel=1e-12)
            assert sd.classify(sd.kappa(scaled)) is sd.classify(sd.kappa(p))


class TestSymmetricPhase:
    def test_full_turn(self):
        omega, tau = TWO_PI * 1000.0, 1e-3  # tau*omega = 2*pi
        assert sd.symmetric_phase(omega, tau) == pytest.approx(0.0, abs=1e-12)

    def test_quarter_turn(self):
        omega = TWO_PI * 1000.0
        tau = (math.pi / 2.0) / omega
        assert sd.symmetric_phase(omega, tau) == pytest.approx(-math.pi / 2.0)

    def test_generic_value_and_peak_alignment(self):
        omega = TWO_PI * 1000.0
        tau = 7.3 / omega
        phi = sd.symmetric_phase(omega, tau)
        assert phi == pytest.approx(-(7.3 - TWO_PI), abs=1e-12)
        p = sd.WaveformParams(2.0, omega, 0.4, tau, phase=phi)
        t = np.linspace(0.0, 10 * tau, 200001)
        assert np.max(np.abs(sd.evaluate_real(p, t))) == pytest.approx(2.0, rel=1e-3)


class TestTranslateCanonicalize:
    def test_translate_identity_and_inverse(self):
        p = sd.WaveformParams(2.0, TWO_PI * 900.0, 0.1, 1e-3, 0.7, 2e-3)
        assert sd.translate(p, 2e-3) == p
        assert sd.translate(sd.translate(p, 9e-3), p.initial_time) == p

    def test_translate_is_time_shift(self):
        p = sd.WaveformParams(2.0, TWO_PI * 900.0, 0.1, 1e-3, 0.7, 0.0)
        t = np.linspace(-2e-3, 10e-3, 1000)
        shifted = sd.translate(p, 3e-3)
        assert np.allclose(sd.evaluate(shifted, t), sd.evaluate(p, t - 3e-3),
                           rtol=0, atol=1e-15)

    def test_negative_onset_accepted(self):
        p = row_params(NFS_ROWS[4])  # onset -10.89 ms
        assert p.initial_time == pytest.approx(-10.89e-3)

    def test_phase_reduction(self):
        p = sd.WaveformParams(1.0, 1.0, 0.0, 0.0, phase=TWO_PI + 0.5)
        assert sd.canonicalize(p).phase == pytest.approx(0.5, rel=1e-12)
        p = sd.WaveformParams(1.0, 1.0, 0.0, 0.0, phase=-math.pi / 2.0)
        assert sd.canonicalize(p).phase == pytest.approx(3 * math.pi / 2.0)
        tiny = sd.canonicalize(sd.WaveformParams(1.0, 1.0, 0.0, 0.0, phase=-1e-18))
        assert 0.0 <= tiny.phase < TWO_PI

    def test_negative_amplitude_preserved(self):
        p = row_params(MFS_ROWS[9])
        assert sd.canonicalize(p).amplitude == p.amplitude == -693.35

    def test_canonicalize_never_changes_waveform(self):
        rng = np.random.default_rng(7)
        t = np.linspace(-2e-3, 15e-3, 1501)
        for _ in range(100):
            p = random_params(rng)
            q = sd.canonicalize(p)
            assert 0.0 <= q.phase < TWO_PI
            a, b = sd.evaluate(p, t), sd.evaluate(q, t)
            assert np.max(np.abs(a - b)) <= 1e-12 * max(abs(p.amplitude), 1.0)


class TestSpectrum:
    def test_harmonic_raises(self):
        p = sd.harmonic(1.0, TWO_PI * 100.0)
        with pytest.raises(sd.DivergentSpectrumError):
            sd.spectrum(p, TWO_PI * 100.0)

    def test_prony_peak_magnitude(self):
        omega = TWO_PI * 100.0
        p = sd.prony(1.0, omega, 0.05)
        # one-sided damped-exponential transform peaks at 1/(zeta*omega)
        assert abs(sd.spectrum(p, omega)) == pytest.approx(
            1.0 / (0.05 * omega), rel=1e-12)
        off = sd.spectrum(p, omega * 1.5)
        assert abs(off) == pytest.approx(
            1.0 / math.hypot(0.05 * omega, 0.5 * omega), rel=1e-12)

    def test_symmetry_and_peak_location(self):
        rng = np.random.default_rng(21)
        for _ in range(40):
            p = random_params(rng)
            if p.damping_ratio == 0.0:
                continue
            omega = p.angular_frequency
            deltas = omega * rng.uniform(0.01, 3.0, size=8)
            hi = np.abs(sd.spectrum(p, omega + deltas))
            lo = np.abs(sd.spectrum(p, omega - deltas))
            assert np.allclose(hi, lo, rtol=1e-10)
            xi = np.linspace(0.2 * omega, 3.0 * omega, 301)
            mags = np.abs(sd.spectrum(p, xi))
            assert abs(xi[int(np.argmax(mags))] - omega) <= xi[1] - xi[0]

    def test_translation_phase_factor(self):
        p = sd.WaveformParams(2.0, TWO_PI * 500.0, 0.05, 2e-3, 0.4, 0.0)
        q = sd.translate(p, 1.5e-3)
        xi = TWO_PI * np.array([300.0, 500.0, 800.0])
        expected = sd.spectrum(p, xi) * np.exp(-1j * xi * 1.5e-3)
        assert np.allclose(sd.spectrum(q, xi), expected, rtol=1e-12)

    def test_point_record(self):
        p = sd.prony(1.0, TWO_PI * 100.0, 0.05)
        xi = TWO_PI * 120.0
        point = sd.ComplexSpectrumPoint(xi, sd.spectrum(p, xi))
        assert point.angular_frequency == xi
        assert np.isfinite(point.value)

    @pytest.mark.parametrize("zeta,kap", [
        (0.005, 0.0), (0.005, 1.0), (0.005, 50.0),
        (0.05, 5.0), (0.5, 10.0), (2.0, 0.0), (2.0, 50.0),
    ])
    def test_matches_sampled_transform(self, zeta, kap):
        f_c = 1000.0
        omega = TWO_PI * f_c
        tau = kap / f_c
        p = sd.WaveformParams(1.0, omega, zeta, tau, phase=0.7)
        fs = 2048.0 * f_c
        t_end = waveform.envelope_decay_time(p, 1e-7)
        t = np.arange(int(t_end * fs)) / fs
        spec = complex_dft_spectrum(sd.evaluate(p, t), 1.0 / fs)
        mask = (spec.frequencies >= f_c / 4) & (spec.frequencies <= 4 * f_c)
        closed = sd.spectrum(p, TWO_PI * spec.frequencies[mask])
        err = np.linalg.norm(spec.values[mask] - closed) / np.linalg.norm(closed)
        assert err < 0.01


class TestSpecialCases:
    def test_prony_constructor(self):
        p = sd.make_special("prony", amplitude=1.0,
                            angular_frequency=TWO_PI * 100.0, damping_ratio=0.05)
        assert p.peak_offset == 0.0
        assert sd.kappa(p) == 0.0
        with pytest.raises(sd.InvalidParameterError):
            sd.prony(1.0, TWO_PI * 100.0, 0.0)

    def test_harmonic_constructor(self):
        p = sd.make_special("harmonic", amplitude=2.0,
                            angular_frequency=TWO_PI * 50.0)
        assert p.damping_ratio == 0.0
        t = np.linspace(0.0, 1.0, 5000)
        assert np.max(np.abs(np.abs(sd.evaluate(p, t)) - 2.0)) < 1e-12

    def test_kern_hayes_unit_order(self):
        p = sd.kern_hayes(1.0, TWO_PI * 1000.0, 0.05)
        assert p.peak_offset == pytest.approx(3.1831e-3, rel=1e-4)
        assert p.order == pytest.approx(1.0, rel=1e-14)

    def test_wavelet_kappa_gate(self):
        with pytest.raises(sd.InvalidParameterError):
            sd.asymmetric_wavelet(1.0, TWO_PI * 1000.0, 0.01, 5e-3)  # kappa 5
        p = sd.asymmetric_wavelet(1.0, TWO_PI * 1000.0, 0.01, 12e-3)
        assert sd.kappa(p) >= 10.0

    def test_symmetric_wavelet_peak(self):
        omega = TWO_PI * 1000.0
        p = sd.symmetric_wavelet(4.0, omega, 0.01, 25.0 / 1000.0)
        t = np.linspace(0.0, 0.2, 400001)
        assert np.max(np.abs(sd.evaluate_real(p, t))) == pytest.approx(4.0, rel=1e-3)

    def test_unknown_kind(self):
        with pytest.raises(sd.InvalidParameterError):
            sd.make_special("wavsyn", amplitude=1.0)


class TestSignal:
    def test_validation(self):
        with pytest.raises(ValueError):
            sd.Signal(0.0, 0.0, np.zeros(4))
        with pytest.raises(ValueError):
            sd.Signal(0.0, 1e-3, np.array([1.0]))
        with pytest.raises(ValueError):
            sd.Signal(0.0, 1e-3, np.array([1.0, math.inf]))

    def test_from_time_samples_uniformity(self):
        t = np.array([0.0, 1e-3, 2e-3, 3.5e-3])
        with pytest.raises(ValueError):
            sd.Signal.from_time_samples(t, np.zeros(4))
        t = np.arange(100) * 1e-3
        s = sd.Signal.from_time_samples(t, np.ones(100))
        assert s.dt == pytest.approx(1e-3)

    def test_samples_read_only(self):
        s = sd.Signal(0.0, 1e-3, np.zeros(8))
        with pytest.raises(ValueError):
            s.samples[0] = 1.0
