"""Tests for Wootters concurrence."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import unitary_group

from src.engine.dynamics import evolve, initial_density
from src.engine.entanglement import (
    concurrence,
    concurrence_dz_closed,
    spin_flip,
    wootters_lambdas,
)
from src.engine.hamiltonian import numeric_spectrum
from src.engine.models import (
    EvolutionParams,
    Family,
    InitialStateSpec,
    ModelParams,
    Variant,
)
from src.engine.numerics import dagger, pure_density, tensor2
from src.engine.teleport import BELL_STATES

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def make_werner(p: float) -> np.ndarray:
    """Helper to mix a Bell state with white noise."""
    bell = pure_density(BELL_STATES[1])
    return p * bell + (1 - p) * np.eye(4) / 4


def make_density(seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = g @ dagger(g)
    return rho / np.trace(rho).real


def make_entangled(seed: int, weight: float = 0.7) -> np.ndarray:
    """Helper to mix a Bell state, chosen by seed, with a random full-rank state."""
    bell = pure_density(BELL_STATES[seed % 4])
    return weight * bell + (1 - weight) * make_density(seed)



class TestConcurrence:
    """Test concurrence on states with known entanglement."""

    @pytest.mark.parametrize("index", range(4))
    def test_bell_states_maximal(self, index):
        assert concurrence(pure_density(BELL_STATES[index])) == pytest.approx(1.0, abs=1e-12)

    def test_product_state_zero(self):
        assert concurrence(pure_density([0, 0, 1, 0])) == pytest.approx(0.0, abs=1e-12)

    def test_maximally_mixed_zero(self):
        assert concurrence(np.eye(4) / 4) == 0.0

    @pytest.mark.parametrize("p", [0.0, 0.2, 1 / 3, 0.5, 0.8, 1.0])
    def test_werner_states(self, p):
        assert concurrence(make_werner(p)) == pytest.approx(max(0.0, (3 * p - 1) / 2), abs=1e-12)

    @pytest.mark.parametrize("alpha", [0.0, math.pi / 8, math.pi / 4, 1.2])
    def test_pure_family_state(self, alpha):
        rho = initial_density(InitialStateSpec(Family.PARALLEL, alpha))
        assert concurrence(rho) == pytest.approx(abs(math.sin(2 * alpha)), abs=1e-12)

    @pytest.mark.parametrize("alpha", [0.0, math.pi / 8, math.pi / 3, math.pi / 2, 2.0])
    def test_antiparallel_family_state(self, alpha):
        rho = initial_density(InitialStateSpec(Family.ANTIPARALLEL, alpha))
        assert concurrence(rho) == pytest.approx(abs(math.sin(2 * alpha)), abs=1e-12)

    @settings(max_examples=50, deadline=None)
    @given(seed=seeds)
    def test_invariant_under_local_unitaries(self, seed):
        rho = make_entangled(seed)
        local = tensor2(
            unitary_group.rvs(2, random_state=seed),
            unitary_group.rvs(2, random_state=seed ^ 0x5A5A5A5A),
        )
        rotated = local @ rho @ dagger(local)
        assert concurrence(rotated) == pytest.approx(concurrence(rho), abs=1e-9)

    @settings(max_examples=50, deadline=None)
    @given(seed=seeds, p=st.floats(0.0, 1.0))
    def test_convex(self, seed, p):
        rho, sigma = make_entangled(seed), make_entangled(seed + 1)
        mixed = p * rho + (1 - p) * sigma
        assert concurrence(mixed) <= p * concurrence(rho) + (1 - p) * concurrence(sigma) + 1e-10

    def test_spin_flip_of_singlet_is_singlet(self):
        singlet = pure_density(BELL_STATES[2])
        np.testing.assert_allclose(spin_flip(singlet), singlet, atol=1e-15)

    @settings(max_examples=50, deadline=None)
    @given(seed=seeds)
    def test_lambdas_match_non_hermitian_route(self, seed):
        rho = make_density(seed)
        eigenvalues = np.linalg.eigvals(rho @ spin_flip(rho)).real
        expected = np.sort(np.sqrt(np.clip(eigenvalues, 0.0, None)))
        np.testing.assert_allclose(np.sort(wootters_lambdas(rho)), expected, atol=1e-7)

    @settings(max_examples=50, deadline=None)
    @given(seed=seeds)
    def test_bounded(self, seed):
        assert 0.0 <= concurrence(make_density(seed)) <= 1.0


class TestDzClosedForm:
    """Test the block-state closed form against the general route."""

    @pytest.mark.parametrize("t", [0.0, 1.0, 7.5, 40.0])
    @pytest.mark.parametrize("alpha", [math.pi / 8, math.pi / 3, 2.5])
    def test_matches_general_concurrence(self, t, alpha):
        model = ModelParams(Variant.DZ, J=1.0, gamma=0.2, Jz=2.0, D=0.5)
        rho0 = initial_density(InitialStateSpec(Family.ANTIPARALLEL, alpha))
        rho = evolve(numeric_spectrum(model), rho0, EvolutionParams(0.02, t))
        assert concurrence_dz_closed(rho) == pytest.approx(concurrence(rho), abs=1e-10)

    def test_rejects_state_outside_block(self):
        with pytest.raises(ValueError, match="not confined"):
            concurrence_dz_closed(pure_density(BELL_STATES[0]))
