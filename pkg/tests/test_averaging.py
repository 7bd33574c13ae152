import math

import numpy as np
import pytest
from scipy.optimize import brentq

from swapsim.averaging import (
    AverageScheme,
    AverageSpec,
    average_linear_entropy,
    entangling_power,
    entangling_power_estimate,
)
from swapsim.dynamics import SystemParams, amplitude_pair, survival_amplitude
from swapsim.errors import InvalidParameterError
from swapsim.swap_protocol import BellChannel, concurrence_integrand

REFERENCE = AverageSpec(nodes=64, angle_nodes=64)
COARSE = AverageSpec(nodes=16, angle_nodes=16)
MONTECARLO = AverageSpec(scheme=AverageScheme.MONTECARLO, samples=200_000, seed=42)


# =========================
# Settings
# =========================

def test_average_spec_validation():
    with pytest.raises(InvalidParameterError):
        AverageSpec(nodes=4)
    with pytest.raises(InvalidParameterError):
        AverageSpec(angle_nodes=2)
    with pytest.raises(InvalidParameterError):
        AverageSpec(scheme=AverageScheme.MONTECARLO, samples=500)
    # node counts are irrelevant for Monte Carlo
    AverageSpec(scheme=AverageScheme.MONTECARLO, nodes=1)


def test_scheme_parsing():
    assert AverageScheme.parse("mc") is AverageScheme.MONTECARLO
    assert AverageScheme.parse("Quadrature") is AverageScheme.QUADRATURE
    assert AverageScheme.parse("quad") is AverageScheme.QUADRATURE
    with pytest.raises(InvalidParameterError):
        AverageScheme.parse("grid")


# =========================
# Linear entropy
# =========================

def test_average_entropy_vanishes_at_start():
    for params in (SystemParams.from_ratio(10.0), SystemParams.from_ratio(0.1, 1.5)):
        assert average_linear_entropy(params, 0.0) == 0.0
        assert average_linear_entropy(params, 0.0, COARSE) == pytest.approx(0.0, abs=1e-15)


def test_average_entropy_quadrature_matches_closed_form():
    rng = np.random.default_rng(17)
    spec = AverageSpec(nodes=32, angle_nodes=8)
    for _ in range(20):
        params = SystemParams.from_ratio(rng.uniform(0.05, 20.0), rng.uniform(-20.0, 20.0))
        t = rng.uniform(0.0, 10.0)
        assert abs(average_linear_entropy(params, t, spec) - average_linear_entropy(params, t)) < 1e-9


def test_average_entropy_montecarlo_within_error():
    params = SystemParams.from_ratio(10.0, 15.0)
    spec = AverageSpec(scheme=AverageScheme.MONTECARLO, samples=100_000, seed=3)
    closed = average_linear_entropy(params, 0.4)
    assert abs(average_linear_entropy(params, 0.4, spec) - closed) < 0.01 * closed + 1e-3


def test_average_entropy_peak_at_half_population():
    params = SystemParams.from_ratio(0.1)
    half = brentq(lambda t: abs(survival_amplitude(params, t)) ** 2 - 0.5, 0.0, 100.0, xtol=1e-12)
    assert average_linear_entropy(params, half) == pytest.approx(1.0 / 6.0, abs=1e-10)


def test_average_entropy_curve_shapes():
    strong = SystemParams.from_ratio(10.0)
    tau = np.arange(0.0, 3.0 + 1e-9, 0.001)
    strong_curve = np.array([average_linear_entropy(strong, t) for t in tau])
    assert strong_curve.max() <= 1.0 / 6.0 + 1e-12
    assert strong_curve.max() == pytest.approx(1.0 / 6.0, abs=1e-4)

    weak = SystemParams.from_ratio(0.1)
    tau = np.arange(0.0, 100.0 + 1e-9, 0.5)
    weak_curve = np.array([average_linear_entropy(weak, t) for t in tau])
    peak = weak_curve.argmax()
    assert 0 < peak < len(tau) - 1
    assert np.all(np.diff(weak_curve[: peak + 1]) > 0)
    assert np.all(np.diff(weak_curve[peak:]) < 0)


# =========================
# Entangling power
# =========================

def test_phi_plus_entangling_power_vanishes_at_start():
    for params in (SystemParams.from_ratio(10.0), SystemParams.from_ratio(0.1, 1.5)):
        assert entangling_power(BellChannel.PHI_PLUS, params, 0.0, COARSE) == 0.0


def test_psi_minus_entangling_power_at_start():
    params = SystemParams.from_ratio(10.0)
    value = entangling_power(BellChannel.PSI_MINUS, params, 0.0, REFERENCE)
    assert value == pytest.approx(0.4456372, abs=1e-6)
    finer = entangling_power(BellChannel.PSI_MINUS, params, 0.0, AverageSpec(nodes=128, angle_nodes=128))
    assert abs(finer - value) < 1e-6


@pytest.mark.parametrize("r,delta", [(10.0, 0.0), (0.1, 1.5)])
@pytest.mark.parametrize("t", [0.1, 0.5, 1.0])
@pytest.mark.parametrize("channel", [BellChannel.PSI_MINUS, BellChannel.PHI_PLUS])
def test_montecarlo_agrees_with_quadrature(r, delta, t, channel):
    params = SystemParams.from_ratio(r, delta)
    reference, exact_error = entangling_power_estimate(channel, params, t, REFERENCE)
    estimate, stderr = entangling_power_estimate(channel, params, t, MONTECARLO)
    assert exact_error == 0.0
    assert stderr > 0.0
    assert abs(estimate - reference) < 3 * stderr


def test_entangling_power_in_unit_interval():
    params = SystemParams.from_ratio(2.0, 1.0)
    for channel in BellChannel:
        for t in (0.0, 0.3, 2.0, 8.0):
            assert 0.0 <= entangling_power(channel, params, t, COARSE) <= 1.0


def test_integrands_symmetric_under_qubit_exchange():
    rng = np.random.default_rng(23)
    theta1, theta2 = rng.uniform(0.0, math.pi, (2, 500))
    phi1, phi2 = rng.uniform(0.0, 2 * math.pi, (2, 500))
    pair = amplitude_pair(SystemParams.from_ratio(10.0, 15.0), 0.7)
    for channel in BellChannel:
        f = concurrence_integrand(channel, pair.survival, pair.gamma)
        assert np.max(np.abs(f(theta1, phi1, theta2, phi2) - f(theta2, phi2, theta1, phi1))) < 1e-12


def test_psi_minus_integrand_depends_on_phase_difference_only():
    pair = amplitude_pair(SystemParams.from_ratio(10.0, 15.0), 0.7)
    psi = concurrence_integrand(BellChannel.PSI_MINUS, pair.survival, pair.gamma)
    phi = concurrence_integrand(BellChannel.PHI_PLUS, pair.survival, pair.gamma)
    shift = np.linspace(0.0, 2.0, 21)
    psi_values = psi(1.0, 0.4 + shift, 2.0, 0.1 + shift)
    phi_values = phi(1.0, 0.4 + shift, 2.0, 0.1 + shift)
    assert np.ptp(psi_values) < 1e-12
    assert np.ptp(phi_values) > 1e-3


def test_psi_minus_power_collapses_where_amplitude_vanishes():
    params = SystemParams.from_ratio(10.0)
    zero = brentq(lambda t: survival_amplitude(params, t).real, 0.1, 0.2, xtol=1e-14)
    assert entangling_power(BellChannel.PSI_MINUS, params, zero, COARSE) < 1e-3


def test_psi_minus_power_stays_finite_off_resonance():
    params = SystemParams.from_ratio(10.0, 15.0)
    values = [entangling_power(BellChannel.PSI_MINUS, params, t, COARSE) for t in np.linspace(0.0, 3.0, 16)]
    assert min(values) > 1e-2
