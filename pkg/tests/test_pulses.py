import numpy as np
import pytest
from scipy.integrate import quad

from ifdsim.dynamics import DriveHamiltonianSpec, operator_distance_2norm, propagate_schrodinger
from ifdsim.pulses import (
    PulseEnvelope,
    PulseGeometry,
    amplitude_for_beamsplitter,
    amplitude_for_bpulse,
    duration_for_theta,
    effective_area,
    envelope_value,
    geometry_for_n,
    sample_waveform,
)
from ifdsim.su3 import b_pulse, beam_splitter

TAU = 14e-9
TAU_C = 28e-9


def test_envelope_values():
    p = PulseEnvelope(omega0=2.0e8, tau=TAU, tau_c=TAU_C)
    assert envelope_value(p, 0.0) == pytest.approx(2.0e8)
    assert envelope_value(p, TAU) == pytest.approx(2.0e8 * np.exp(-0.5))
    assert envelope_value(p, 1.5 * TAU_C) == 0.0
    ts = np.linspace(-TAU_C, TAU_C, 57)
    assert np.allclose(envelope_value(p, ts), envelope_value(p, -ts))


def test_envelope_validation():
    with pytest.raises(ValueError):
        PulseEnvelope(omega0=1.0, tau=-1e-9, tau_c=TAU_C)
    with pytest.raises(ValueError):
        PulseEnvelope(omega0=-1.0, tau=TAU, tau_c=TAU_C)
    with pytest.raises(ValueError):
        PulseEnvelope(omega0=1.0, tau=TAU, tau_c=TAU_C, transition="02")


def test_effective_area_reference_values():
    area = effective_area(TAU, TAU_C)
    assert area == pytest.approx(30.18e-9, abs=0.02e-9)
    oracle, _ = quad(lambda t: np.exp(-0.5 * (t / TAU) ** 4), -TAU_C, TAU_C, epsabs=1e-18)
    assert area == pytest.approx(oracle, rel=1e-6)
    assert effective_area(28e-9, 56e-9) == pytest.approx(60.36e-9, abs=0.04e-9)
    assert effective_area(TAU, 0.0) == 0.0


def test_effective_area_converged_and_linear():
    coarse = effective_area(TAU, TAU_C, dt=TAU / 128)
    fine = effective_area(TAU, TAU_C, dt=TAU / 256)
    assert abs(coarse - fine) / fine < 1e-4
    # linear in tau at fixed tau_c / tau
    a1 = effective_area(TAU, 2 * TAU)
    a2 = effective_area(3 * TAU, 6 * TAU)
    assert a2 / a1 == pytest.approx(3.0, rel=1e-4)


def test_effective_area_rejects_coarse_grid():
    with pytest.raises(ValueError):
        effective_area(TAU, TAU_C, dt=1e-9)  # tau/100 = 0.14 ns
    with pytest.raises(ValueError):
        effective_area(-TAU, TAU_C)


def test_amplitude_calibration():
    area = effective_area(TAU, TAU_C)
    amp = amplitude_for_bpulse(np.pi, area)
    assert amp == pytest.approx(np.pi / 30.18e-9, rel=1e-3)
    assert amplitude_for_bpulse(0.0, area) == 0.0
    assert amplitude_for_bpulse(2 * np.pi, area) == pytest.approx(2 * amp)
    assert amplitude_for_beamsplitter(1, area) == pytest.approx(np.pi / (2 * area))
    assert amplitude_for_beamsplitter(24, area) == pytest.approx(np.pi / (25 * area))
    with pytest.raises(ValueError):
        amplitude_for_bpulse(np.pi, 0.0)
    with pytest.raises(ValueError):
        amplitude_for_beamsplitter(0, area)


@pytest.mark.parametrize("n", [1, 2, 7, 24])
def test_beamsplitter_amplitude_propagates_to_target_rotation(n):
    area = effective_area(TAU, TAU_C)
    amp = amplitude_for_beamsplitter(n, area)
    wf = sample_waveform(PulseEnvelope(omega0=amp, tau=TAU, tau_c=TAU_C, transition="01"))
    u = propagate_schrodinger(DriveHamiltonianSpec(wave01=wf))
    # an angle error delta shows up as a 2-norm distance ~ delta / 2
    assert operator_distance_2norm(u, beam_splitter(n)) < 2e-3


def test_sample_waveform_grid():
    p = PulseEnvelope(omega0=1.0e8, tau=TAU, tau_c=TAU_C)
    wf = sample_waveform(p, sampling_rate=1e9)
    assert len(wf.samples) == 57
    assert wf.samples[28] == pytest.approx(1.0e8)  # grid contains t = 0
    assert wf.t_start == pytest.approx(-TAU_C)
    zero = sample_waveform(PulseEnvelope(omega0=0.0, tau=TAU, tau_c=TAU_C))
    assert np.all(zero.samples == 0.0)
    with pytest.raises(ValueError):
        sample_waveform(p, sampling_rate=1e8)  # fewer than 8 samples


def test_waveform_interpolation():
    p = PulseEnvelope(omega0=1.0e8, tau=TAU, tau_c=TAU_C)
    wf = sample_waveform(p)
    assert wf.value_at(0.0) == pytest.approx(1.0e8)
    assert wf.value_at(TAU_C + 1e-9) == 0.0
    mid = wf.value_at(0.5e-9)
    assert mid == pytest.approx(0.5 * (wf.samples[28] + wf.samples[29]))


def test_duration_for_theta_table():
    assert duration_for_theta(np.pi) == pytest.approx((14e-9, 28e-9))
    assert duration_for_theta(3.38 * np.pi) == pytest.approx((14e-9, 28e-9))
    assert duration_for_theta(4 * np.pi) == pytest.approx((61e-9 / 4, 61e-9 / 2))
    tau, tau_c = duration_for_theta(3.5 * np.pi)
    assert tau * 4 * 1e9 == pytest.approx(57) or tau * 4 * 1e9 == pytest.approx(58)
    assert tau_c == pytest.approx(2 * tau)
    with pytest.raises(ValueError):
        duration_for_theta(-0.1)
    with pytest.raises(ValueError):
        duration_for_theta(4.01 * np.pi)


def test_duration_stretch_lowers_amplitude():
    # stretching must never demand more amplitude than the unstretched
    # 56 ns pulse would, and the 61 ns endpoint bounds the whole table
    area_56 = effective_area(14e-9, 28e-9)
    ceiling = amplitude_for_bpulse(4 * np.pi, effective_area(61e-9 / 4, 61e-9 / 2))
    for theta in np.linspace(3.39 * np.pi, 4 * np.pi, 12):
        tau, tau_c = duration_for_theta(theta)
        amp = amplitude_for_bpulse(theta, effective_area(tau, tau_c))
        assert amp <= amplitude_for_bpulse(theta, area_56)
        assert amp <= ceiling * 1.0001


@pytest.mark.parametrize("theta_pi", [0.25, 1.0, 2.0, 3.0, 3.9])
def test_calibration_round_trip(theta_pi):
    theta = theta_pi * np.pi
    tau, tau_c = duration_for_theta(theta)
    area = effective_area(tau, tau_c)
    wf = sample_waveform(
        PulseEnvelope(omega0=amplitude_for_bpulse(theta, area), tau=tau, tau_c=tau_c, transition="12")
    )
    u = propagate_schrodinger(DriveHamiltonianSpec(wave12=wf))
    assert operator_distance_2norm(u, b_pulse(theta)) < 0.02


def test_geometry_defaults():
    assert geometry_for_n(2).b_duration == pytest.approx(56e-9)
    assert geometry_for_n(3).b_duration == pytest.approx(112e-9)
    geo = PulseGeometry()
    assert geo.s_shape() == (14e-9, 28e-9)
    # the 112 ns family never stretches
    long = PulseGeometry(b_duration=112e-9)
    assert long.b_shape(3.9 * np.pi) == (28e-9, 56e-9)
    assert geo.b_shape(3.9 * np.pi)[0] > 14e-9


def test_total_duration():
    geo = PulseGeometry(b_duration=112e-9)
    assert geo.total_duration(25, [np.pi] * 25) == pytest.approx(26 * 56e-9 + 25 * 112e-9)
