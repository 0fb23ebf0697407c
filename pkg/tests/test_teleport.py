"""Tests for two-copy teleportation and fidelity."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import sqrtm

from src.engine.dynamics import asymptotic_state, evolve, initial_density
from src.engine.hamiltonian import numeric_spectrum
from src.engine.models import (
    EvolutionParams,
    Family,
    InitialStateSpec,
    InputState,
    ModelParams,
    Variant,
)
from src.engine.numerics import dagger, pure_density
from src.engine.teleport import (
    BELL_STATES,
    CLASSICAL_FIDELITY_LIMIT,
    CorrectionPairing,
    bell_projectors,
    channel_probs,
    classical_threshold_exceeded,
    correction_operators,
    fidelity,
    input_density,
    output_concurrence,
    teleport_output,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)

MIXED = np.eye(4) / 4


def make_channel(index: int) -> np.ndarray:
    """Helper to create a Bell-state channel |psi^index>."""
    return pure_density(BELL_STATES[index])


def make_density(seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = g @ dagger(g)
    return rho / np.trace(rho).real


def teleported_fidelity(channel: np.ndarray, state: InputState, pairing=CorrectionPairing.SINGLET_REFERENCE) -> float:
    return fidelity(input_density(state), teleport_output(channel, channel, state, pairing))


class TestBellMeasurement:
    """Test the Bell projectors and channel probabilities."""

    def test_complete(self):
        assert bell_projectors().completeness_error() <= 1e-15

    def test_projectors_are_rank_one(self):
        for e in bell_projectors().projectors:
            np.testing.assert_allclose(e @ e, e, atol=1e-15)
            assert np.trace(e).real == pytest.approx(1.0)

    def test_outcome_order(self):
        # E^1 is |psi^3>, E^3 is |psi^1>
        np.testing.assert_allclose(channel_probs(make_channel(3)), [0, 1, 0, 0], atol=1e-15)
        np.testing.assert_allclose(channel_probs(make_channel(1)), [0, 0, 0, 1], atol=1e-15)

    def test_probabilities_sum_to_one(self):
        probs = channel_probs(make_density(3))
        assert np.all(probs >= 0)
        assert probs.sum() == pytest.approx(1.0, abs=1e-12)

    @settings(max_examples=50, deadline=None)
    @given(seed=seeds)
    def test_joint_outcomes_sum_to_one(self, seed):
        joint = np.outer(channel_probs(make_density(seed)), channel_probs(make_density(seed + 1)))
        assert np.all(joint >= 0)
        assert joint.sum() == pytest.approx(1.0, abs=1e-12)

    def test_pairings_differ(self):
        default = correction_operators()
        listed = correction_operators(CorrectionPairing.LISTED)
        assert not np.allclose(default[0], listed[0])
        np.testing.assert_array_equal(default[3], listed[3])


class TestTeleportOutput:
    """Test the Pauli channel acting on the input."""

    @pytest.mark.parametrize("index", [1, 2])
    @pytest.mark.parametrize("theta,phi", [(0.0, 0.0), (math.pi / 3, 0.4), (math.pi / 2, 5.0)])
    def test_perfect_channels(self, index, theta, phi):
        state = InputState(theta, phi)
        assert teleported_fidelity(make_channel(index), state) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("index", [0, 3])
    @pytest.mark.parametrize("theta,phi", [(0.0, 0.0), (math.pi / 3, 0.4), (math.pi / 2, 0.0)])
    def test_swapping_channels(self, index, theta, phi):
        state = InputState(theta, phi)
        expected = math.sin(theta) ** 2 * math.cos(phi) ** 2
        assert teleported_fidelity(make_channel(index), state) == pytest.approx(expected, abs=1e-12)

    @settings(max_examples=50, deadline=None)
    @given(seed=seeds, theta=st.floats(0.0, math.pi), phi=st.floats(0.0, 6.28))
    def test_random_channel_pairs_give_valid_state(self, seed, theta, phi):
        rho_out = teleport_output(make_density(seed), make_density(seed + 1), InputState(theta, phi))
        assert np.trace(rho_out).real == pytest.approx(1.0, abs=1e-12)
        assert np.min(np.linalg.eigvalsh(rho_out)) >= -1e-12

    @pytest.mark.parametrize("variant", list(Variant))
    def test_equal_copies_in_either_order(self, variant):
        model = ModelParams(variant, J=1.0, gamma=0.2, Jz=1.0, D=2.0)
        rho0 = initial_density(InitialStateSpec(Family.ANTIPARALLEL, math.pi / 3))
        spectrum = numeric_spectrum(model)
        rho_a = evolve(spectrum, rho0, EvolutionParams(0.02, 4.0))
        rho_b = evolve(spectrum, rho0, EvolutionParams(0.02, 4.0))
        state = InputState(math.pi / 3, 0.7)
        forward = fidelity(input_density(state), teleport_output(rho_a, rho_b, state))
        backward = fidelity(input_density(state), teleport_output(rho_b, rho_a, state))
        assert forward == pytest.approx(backward, abs=1e-12)

    @pytest.mark.parametrize("t_a,t_b", [(0.5, 3.0), (2.0, 40.0)])
    def test_dz_block_channels_commute(self, t_a, t_b):
        # on span{|01>, |10>} sigma_z (x) I equals -(I (x) sigma_z)
        model = ModelParams(Variant.DZ, J=1.0, gamma=0.2, Jz=1.0, D=2.0)
        rho0 = initial_density(InitialStateSpec(Family.ANTIPARALLEL, math.pi / 3))
        spectrum = numeric_spectrum(model)
        rho_a = evolve(spectrum, rho0, EvolutionParams(0.02, t_a))
        rho_b = evolve(spectrum, rho0, EvolutionParams(0.02, t_b))
        state = InputState(math.pi / 4, 1.1)
        np.testing.assert_allclose(
            teleport_output(rho_a, rho_b, state), teleport_output(rho_b, rho_a, state), atol=1e-12
        )

    def test_maximally_mixed_channel(self):
        state = InputState(math.pi / 4, 1.0)
        rho_out = teleport_output(MIXED, MIXED, state)
        np.testing.assert_allclose(rho_out, MIXED, atol=1e-15)
        assert fidelity(input_density(state), rho_out) == pytest.approx(0.25)

    def test_listed_pairing_swaps_singlet_channel(self):
        state = InputState(math.pi / 3, 0.4)
        listed = teleported_fidelity(make_channel(2), state, CorrectionPairing.LISTED)
        assert listed == pytest.approx(0.75 * math.cos(0.4) ** 2, abs=1e-12)

    def test_output_concurrence(self):
        bell_input = InputState(math.pi / 2, 0.0)
        assert output_concurrence(make_channel(2), make_channel(2), bell_input) == pytest.approx(1.0, abs=1e-12)
        assert output_concurrence(MIXED, MIXED, bell_input) == 0.0

    @pytest.mark.parametrize("alpha", [0.2, math.pi / 3, 2.0])
    @pytest.mark.parametrize("theta", [0.0, math.pi / 4, math.pi / 2])
    def test_dz_asymptotic_fidelity(self, alpha, theta):
        model = ModelParams(Variant.DZ, J=1.0, gamma=0.8, Jz=2.0, D=2.0)
        rho0 = initial_density(InitialStateSpec(Family.ANTIPARALLEL, alpha))
        channel = asymptotic_state(numeric_spectrum(model), rho0)
        probs = channel_probs(channel)
        q1, q2 = probs[3], probs[2]
        expected = q1**2 + q2**2 + 2 * q1 * q2 * math.cos(theta) ** 2

        state = InputState(theta, 0.0)
        assert teleported_fidelity(channel, state) == pytest.approx(expected, abs=1e-10)


class TestFidelity:
    """Test the Jozsa fidelity."""

    def test_identical_pure_states(self):
        rho = input_density(InputState(1.0, 2.0))
        assert fidelity(rho, rho) == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal_pure_states(self):
        assert fidelity(make_channel(1), make_channel(2)) == pytest.approx(0.0, abs=1e-12)

    @settings(max_examples=30, deadline=None)
    @given(seed=seeds)
    def test_symmetric_and_bounded(self, seed):
        a, b = make_density(seed), make_density(seed + 1)
        forward = fidelity(a, b)
        assert 0.0 <= forward <= 1.0
        assert forward == pytest.approx(fidelity(b, a), abs=1e-9)

    def test_matches_scipy(self):
        a, b = make_density(5), make_density(6)
        root = sqrtm(a)
        expected = np.trace(sqrtm(root @ b @ root)).real ** 2
        assert fidelity(a, b) == pytest.approx(expected, abs=1e-9)


class TestClassicalThreshold:
    """Test the 2/3 classical limit."""

    def test_strictly_above(self):
        assert classical_threshold_exceeded(0.6667)
        assert not classical_threshold_exceeded(CLASSICAL_FIDELITY_LIMIT)
        assert not classical_threshold_exceeded(0.25)
