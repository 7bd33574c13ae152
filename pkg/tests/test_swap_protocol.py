import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from swapsim.dynamics import SystemParams, gamma_amplitude, survival_amplitude
from swapsim.errors import InvalidParameterError, ZeroProbabilityOutcomeError
from swapsim.oracles import GridSpec, solve_volterra_amplitude
from swapsim.qubit_algebra import concurrence_pure, concurrence_wootters, projector
from swapsim.swap_protocol import (
    BellChannel,
    PairInit,
    bsm_amplitudes,
    concurrence_phi_plus,
    concurrence_psi_minus,
    maximal_entanglement_times,
    post_bsm_state,
    swapped_concurrence,
)

SQRT_HALF = 1.0 / math.sqrt(2.0)
STRONG = SystemParams.from_ratio(10.0)
PEAK_TIMES = [(2 * n * math.pi + math.pi / 4) / 10 for n in range(3)]

angles_theta = st.floats(0.0, math.pi)
angles_phi = st.floats(0.0, 6.28)


def random_configuration(rng: np.random.Generator):
    params = SystemParams.from_ratio(rng.uniform(0.05, 20.0), rng.uniform(-20.0, 20.0))
    init = PairInit(
        rng.uniform(0.0, math.pi), rng.uniform(0.0, 2 * math.pi),
        rng.uniform(0.0, math.pi), rng.uniform(0.0, 2 * math.pi),
    )
    return params, init, rng.uniform(0.0, 10.0)


def same_ray(first, second) -> float:
    return abs(abs(np.vdot(first.as_vector(), second.as_vector())) - 1.0)


# =========================
# Types
# =========================

def test_channel_parsing():
    assert BellChannel.parse("PsiMinus") is BellChannel.PSI_MINUS
    assert BellChannel.parse("phi-plus") is BellChannel.PHI_PLUS
    assert BellChannel.parse("PHI_MINUS") is BellChannel.PHI_MINUS
    assert BellChannel.parse("psiplus") is BellChannel.PSI_PLUS
    with pytest.raises(InvalidParameterError):
        BellChannel.parse("chi")


def test_pair_init_ranges():
    with pytest.raises(InvalidParameterError):
        PairInit(0.0, 0.0, -0.1, 0.0)
    init = PairInit(0.1, 0.2, 0.3, 0.4)
    assert init.swapped() == PairInit(0.3, 0.4, 0.1, 0.2)
    assert init.second.theta == 0.3


# =========================
# Conditional states
# =========================

def test_psi_minus_identical_inits_give_singlet():
    state = post_bsm_state(BellChannel.PSI_MINUS, STRONG, PairInit.identical(1.1, 0.4), 0.3)
    singlet = np.array([0, SQRT_HALF, -SQRT_HALF, 0])
    assert abs(abs(np.vdot(singlet, state.as_vector())) - 1.0) < 1e-12


def test_phi_plus_lossless_quarter_period():
    params = SystemParams.ideal()
    gt = math.pi / 4
    state = post_bsm_state(BellChannel.PHI_PLUS, params, PairInit.identical(0.0), gt)
    expected = np.array([math.cos(gt) ** 2, 0, 0, -math.sin(gt) ** 2])
    expected = expected / np.linalg.norm(expected)
    assert abs(abs(np.vdot(expected, state.as_vector())) - 1.0) < 1e-12
    assert concurrence_pure(state) == pytest.approx(1.0, abs=1e-12)
    assert concurrence_phi_plus(params, PairInit.identical(0.0), gt) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("t", [0.0, 0.2, 1.0, 5.0])
def test_phi_plus_both_ground_stays_separable(t):
    init = PairInit(math.pi, 0.3, math.pi, 1.2)
    state = post_bsm_state(BellChannel.PHI_PLUS, STRONG, init, t)
    assert abs(state.d) == pytest.approx(1.0, abs=1e-12)
    assert concurrence_pure(state) == pytest.approx(0.0, abs=1e-15)
    assert concurrence_phi_plus(STRONG, init, t) == pytest.approx(0.0, abs=1e-15)


def test_psi_outcomes_vanish_for_both_ground():
    init = PairInit(math.pi, 0.0, math.pi, 0.0)
    for channel in (BellChannel.PSI_MINUS, BellChannel.PSI_PLUS):
        with pytest.raises(ZeroProbabilityOutcomeError):
            post_bsm_state(channel, STRONG, init, 0.5)
    with pytest.raises(ZeroProbabilityOutcomeError):
        concurrence_psi_minus(STRONG, init, 0.5)


def test_psi_minus_vanishes_when_amplitude_hits_zero():
    params = SystemParams.ideal()
    init = PairInit.identical(math.pi / 3, 0.5)
    with pytest.raises(ZeroProbabilityOutcomeError):
        post_bsm_state(BellChannel.PSI_MINUS, params, init, math.pi / 2)
    with pytest.raises(ZeroProbabilityOutcomeError):
        concurrence_psi_minus(params, init, math.pi / 2)


def test_phi_plus_vanishing_outcome():
    params = SystemParams.ideal()
    init = PairInit.identical(math.pi / 2, 0.0)
    with pytest.raises(ZeroProbabilityOutcomeError):
        post_bsm_state(BellChannel.PHI_PLUS, params, init, math.pi / 2)
    with pytest.raises(ZeroProbabilityOutcomeError):
        concurrence_phi_plus(params, init, math.pi / 2)
    # the opposite sign survives
    assert swapped_concurrence(BellChannel.PHI_MINUS, params, init, math.pi / 2) == pytest.approx(0.0, abs=1e-12)


def test_overlap_factor_only_changes_global_phase():
    params = SystemParams.from_ratio(10.0, 15.0)
    init = PairInit(0.7, 1.0, 2.1, 4.0)
    for t in (0.05, 0.4, 1.7):
        plain = post_bsm_state(BellChannel.PSI_MINUS, params, init, t)
        weighted = post_bsm_state(BellChannel.PSI_MINUS, params, init, t, overlap=gamma_amplitude(params, t))
        assert same_ray(plain, weighted) < 1e-12
    with pytest.raises(InvalidParameterError):
        post_bsm_state(BellChannel.PSI_MINUS, params, init, 0.4, overlap=0.0)


def test_bsm_amplitudes_scale_with_overlap():
    params = SystemParams.from_ratio(2.0, 1.0)
    init = PairInit(0.7, 1.0, 2.1, 4.0)
    plain = bsm_amplitudes(BellChannel.PHI_PLUS, params, init, 0.8)
    scaled = bsm_amplitudes(BellChannel.PHI_PLUS, params, init, 0.8, overlap=0.5j)
    assert np.allclose(scaled, 0.5j * plain, atol=1e-15)


# =========================
# Closed-form concurrence
# =========================

def test_psi_minus_closed_form_examples():
    assert concurrence_psi_minus(STRONG, PairInit(0.0, 0.0, math.pi, 0.0), 0.7) == pytest.approx(0.0, abs=1e-15)

    t = 0.05
    oracle = solve_volterra_amplitude(STRONG, GridSpec(t, 50))[-1]
    eps = abs(oracle) ** 2
    value = concurrence_psi_minus(STRONG, PairInit(math.pi / 2, 0.0, math.pi / 2, math.pi), t)
    assert value == pytest.approx((eps / 2) / (eps / 2 + 1), abs=1e-7)


def test_psi_minus_stationary_for_identical_inits():
    params = SystemParams.from_ratio(10.0, 15.0)
    init = PairInit.identical(math.pi / 3, 0.9)
    values = np.array([concurrence_psi_minus(params, init, t) for t in np.linspace(0.0, 10.0, 1000)])
    assert np.all(values == 1.0)
    assert np.var(values) < 1e-20


def test_closed_forms_match_constructed_states():
    rng = np.random.default_rng(2024)
    worst = {channel: 0.0 for channel in BellChannel}
    for _ in range(1000):
        params, init, t = random_configuration(rng)
        for channel in BellChannel:
            constructed = concurrence_pure(post_bsm_state(channel, params, init, t))
            closed = swapped_concurrence(channel, params, init, t)
            worst[channel] = max(worst[channel], abs(constructed - closed))
    assert max(worst.values()) < 1e-10


def test_constructed_states_agree_with_wootters():
    rng = np.random.default_rng(5)
    for _ in range(100):
        params, init, t = random_configuration(rng)
        state = post_bsm_state(BellChannel.PHI_PLUS, params, init, t)
        assert abs(concurrence_wootters(projector(state)) - concurrence_pure(state)) < 1e-8


@settings(max_examples=200, deadline=None)
@given(st.floats(0.05, 20.0), st.floats(-20.0, 20.0), st.floats(0.0, 10.0),
       angles_theta, angles_phi, angles_theta, angles_phi)
def test_concurrences_in_unit_interval(r, delta, t, theta1, phi1, theta2, phi2):
    params = SystemParams.from_ratio(r, delta)
    init = PairInit(theta1, phi1, theta2, phi2)
    for channel in BellChannel:
        try:
            value = swapped_concurrence(channel, params, init, t)
        except ZeroProbabilityOutcomeError:
            continue
        assert 0.0 <= value <= 1.0


def test_phi_plus_vanishes_at_start():
    rng = np.random.default_rng(9)
    for _ in range(50):
        params, init, _ = random_configuration(rng)
        assert concurrence_phi_plus(params, init, 0.0) == 0.0


def test_phi_plus_excited_pair_characterization():
    tau = np.linspace(0.01, 3.0, 600)
    both_excited = PairInit.identical(0.0)
    for t in tau:
        survival = abs(survival_amplitude(STRONG, t))
        gamma = abs(gamma_amplitude(STRONG, t))
        x = (gamma / survival) ** 2
        value = concurrence_phi_plus(STRONG, both_excited, t)
        assert value == pytest.approx(2 * x / (1 + x ** 2), abs=1e-12)
        if abs(survival - gamma) > 1e-3:
            assert value < 1.0 - 1e-12


# =========================
# Maximal entanglement
# =========================

def test_peak_times_resonant_strong_coupling():
    messages = []
    roots = maximal_entanglement_times(STRONG, 2.0, log_callback=messages.append)
    both_excited = PairInit.identical(0.0)
    for tau_n in PEAK_TIMES:
        nearest = min(roots, key=lambda root: abs(root - tau_n))
        assert abs(nearest - tau_n) < 2e-2
        assert concurrence_phi_plus(STRONG, both_excited, nearest) >= 0.99
        # |Omega| is sqrt(399), not 20, so each true peak lies slightly after tau_n
        assert concurrence_phi_plus(STRONG, both_excited, tau_n) >= 0.985
    for root in roots:
        assert concurrence_phi_plus(STRONG, both_excited, root) >= 1.0 - 1e-9
    assert roots == sorted(roots)
    assert not any("WARNING" in message for message in messages)


def test_no_peaks_in_weak_coupling():
    assert maximal_entanglement_times(SystemParams.from_ratio(0.1), 20.0) == []


def test_lossless_peaks_are_exact():
    roots = maximal_entanglement_times(SystemParams.ideal(), 10.0)
    expected = [math.pi / 4 + n * math.pi / 2 for n in range(6)]
    assert len(roots) == len(expected)
    assert np.max(np.abs(np.array(roots) - expected)) < 1e-9


def test_peak_search_needs_positive_bound():
    with pytest.raises(InvalidParameterError):
        maximal_entanglement_times(STRONG, 0.0)
