"""Tests for Hamiltonian construction and spectra."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.engine.hamiltonian import (
    analytic_spectrum,
    build_hamiltonian,
    chi,
    eigen_residual,
    mixing_angles,
    numeric_spectrum,
)
from src.engine.models import ModelParams, Variant
from src.engine.numerics import is_hermitian

couplings = st.floats(min_value=-2.0, max_value=2.0, allow_nan=False)


def make_model(variant: Variant = Variant.DZ, J=1.0, gamma=0.2, Jz=1.0, D=2.0) -> ModelParams:
    """Helper to create model parameters (fig1 recipe couplings by default)."""
    return ModelParams(variant=variant, J=J, gamma=gamma, Jz=Jz, D=D)


class TestBuildHamiltonian:
    """Test the Pauli-term Hamiltonian builder."""

    @pytest.mark.parametrize("variant", list(Variant))
    def test_hermitian(self, variant):
        assert is_hermitian(build_hamiltonian(make_model(variant)))

    def test_dz_block_coupling(self):
        h = build_hamiltonian(make_model(J=1.5, D=0.5))
        assert h[1, 2] == pytest.approx(2 * 1.5 + 2j * 0.5)
        assert h[0, 3] == pytest.approx(2 * 1.5 * 0.2)

    def test_dz_keeps_blocks_separate(self):
        h = build_hamiltonian(make_model())
        assert np.all(h[[0, 0, 3, 3], [1, 2, 1, 2]] == 0)

    def test_dx_bell_state_is_eigenvector(self):
        model = make_model(Variant.DX, J=0.7, gamma=0.3, Jz=-1.2, D=1.1)
        bell = np.array([0, 1, 1, 0], dtype=complex) / math.sqrt(2)
        h = build_hamiltonian(model)
        np.testing.assert_allclose(h @ bell, (2 * model.J - model.Jz) * bell, atol=1e-14)

    def test_non_finite_coupling_rejected(self):
        with pytest.raises(ValueError, match="finite"):
            make_model(J=float("nan"))


class TestChiAndAngles:
    """Test the closed-form helpers."""

    def test_chi_unit_modulus(self):
        assert abs(chi(1.0, 2.0)) == pytest.approx(1.0)
        assert chi(1.0, 2.0) == pytest.approx(complex(1, -2) / math.sqrt(5))

    def test_chi_degenerate_limit(self):
        assert chi(0.0, 0.0) == 1.0

    def test_mixing_angles_without_dm(self):
        phi1, phi2 = mixing_angles(make_model(Variant.DX, J=1.0, gamma=0.0, Jz=1.0, D=0.0))
        assert phi1 == pytest.approx(math.pi / 2)
        assert phi2 == pytest.approx(0.0)

    def test_mixing_angles_fully_degenerate(self):
        # J(1 - gamma) + Jz = 0 and D = 0
        assert mixing_angles(make_model(Variant.DX, J=1.0, gamma=0.0, Jz=-1.0, D=0.0)) == (math.pi / 2, 0.0)

    def test_mixing_angles_satisfy_eigen_equation(self):
        model = make_model(Variant.DX, J=1.0, gamma=0.6, Jz=1.5, D=2.0)
        d = model.J * (1 - model.gamma) + model.Jz
        R = math.hypot(d, 2 * model.D)
        phi1, phi2 = mixing_angles(model)
        assert math.tan(phi1) == pytest.approx(2 * model.D / (R - d))
        assert math.tan(phi2) == pytest.approx(2 * model.D / (R + d))


class TestSpectra:
    """Test analytic against numeric spectra."""

    def test_dz_known_energies(self):
        spectrum = numeric_spectrum(make_model())
        root5 = math.sqrt(5.0)
        np.testing.assert_allclose(
            spectrum.energies, [-1 - 2 * root5, 0.6, 1.4, -1 + 2 * root5], atol=1e-12
        )

    def test_analytic_order_follows_labels(self):
        spectrum = analytic_spectrum(make_model(Variant.DX))
        assert spectrum.energies[0] == pytest.approx(2 * 1.0 - 1.0)

    @settings(max_examples=200, deadline=None)
    @given(
        variant=st.sampled_from(list(Variant)),
        J=couplings, gamma=couplings, Jz=couplings, D=couplings,
    )
    def test_analytic_matches_numeric(self, variant, J, gamma, Jz, D):
        model = ModelParams(variant=variant, J=J, gamma=gamma, Jz=Jz, D=D)
        h = build_hamiltonian(model)
        analytic = analytic_spectrum(model)
        numeric = numeric_spectrum(model)

        np.testing.assert_allclose(np.sort(analytic.energies), numeric.energies, atol=1e-10)
        assert eigen_residual(h, analytic) <= 1e-10
        assert eigen_residual(h, numeric) <= 1e-10
        assert analytic.orthonormality_error() <= 1e-10

    @pytest.mark.parametrize("variant", list(Variant))
    def test_all_couplings_zero(self, variant):
        model = make_model(variant, J=0.0, gamma=0.0, Jz=0.0, D=0.0)
        analytic = analytic_spectrum(model)
        assert np.all(analytic.energies == 0.0)
        assert analytic.orthonormality_error() <= 1e-12
