"""Hamiltonians H_z / H_x of the two-qubit XYZ chain and their spectra."""

import math
from typing import Tuple

import numpy as np

from src.engine.models import ModelParams, Spectrum, Variant
from src.engine.numerics import PAULI_X, PAULI_Y, PAULI_Z, herm_eig, tensor2

_SQRT_HALF = 1.0 / math.sqrt(2.0)

XX = tensor2(PAULI_X, PAULI_X)
YY = tensor2(PAULI_Y, PAULI_Y)
ZZ = tensor2(PAULI_Z, PAULI_Z)
XY = tensor2(PAULI_X, PAULI_Y)
YX = tensor2(PAULI_Y, PAULI_X)
YZ = tensor2(PAULI_Y, PAULI_Z)
ZY = tensor2(PAULI_Z, PAULI_Y)


def build_hamiltonian(p: ModelParams) -> np.ndarray:
    """
    Assemble the 4x4 Hamiltonian from Pauli tensor terms.

    Dz: J(1+g) XX + J(1-g) YY + Jz ZZ + D (XY - YX)
    Dx: J(1+g) XX + J(1-g) YY + Jz ZZ + D (YZ - ZY)
    """
    h = p.J * (1 + p.gamma) * XX + p.J * (1 - p.gamma) * YY + p.Jz * ZZ
    if p.variant is Variant.DZ:
        h = h + p.D * (XY - YX)
    else:
        h = h + p.D * (YZ - ZY)
    return h


def numeric_spectrum(p: ModelParams) -> Spectrum:
    """Jacobi spectrum of build_hamiltonian(p), energies ascending."""
    return herm_eig(build_hamiltonian(p))


def chi(J: float, D: float) -> complex:
    """Phase (J - iD)/sqrt(J^2 + D^2); the J = D = 0 limit is taken as 1."""
    r = math.hypot(J, D)
    if r == 0.0:
        return 1.0 + 0.0j
    return complex(J, -D) / r


def mixing_angles(p: ModelParams) -> Tuple[float, float]:
    """
    Angles phi_1, phi_2 of the Dx eigenvectors psi_x3, psi_x4.

    With d = J(1-g) + Jz and R = sqrt(d^2 + 4D^2) the eigen-equation gives
    tan(phi_1) = 2D / (R - d) and tan(phi_2) = 2D / (R + d). The smaller
    denominator is rewritten via (R - d)(R + d) = 4D^2 to avoid cancellation.
    """
    d = p.J * (1 - p.gamma) + p.Jz
    R = math.hypot(d, 2 * p.D)
    if R == 0.0:
        # fully degenerate block; any orthonormal pair will do
        return math.pi / 2, 0.0

    if d >= 0:
        phi2 = math.atan(2 * p.D / (R + d))
        phi1 = math.atan((R + d) / (2 * p.D)) if p.D != 0 else math.pi / 2
    else:
        phi1 = math.atan(2 * p.D / (R - d))
        phi2 = math.atan((R - d) / (2 * p.D)) if p.D != 0 else math.pi / 2
    return phi1, phi2


def _basis_state(*amplitudes: complex) -> np.ndarray:
    return np.array(amplitudes, dtype=complex) * _SQRT_HALF


def _analytic_dz(p: ModelParams) -> Spectrum:
    r = math.hypot(p.J, p.D)
    x = chi(p.J, p.D)
    energies = [
        p.Jz + 2 * p.J * p.gamma,
        p.Jz - 2 * p.J * p.gamma,
        -p.Jz + 2 * r,
        -p.Jz - 2 * r,
    ]
    vectors = [
        _basis_state(1, 0, 0, 1),
        _basis_state(1, 0, 0, -1),
        _basis_state(0, 1, x, 0),
        _basis_state(0, 1, -x, 0),
    ]
    return Spectrum(energies=np.array(energies), vectors=np.column_stack(vectors))


def _analytic_dx(p: ModelParams) -> Spectrum:
    d = p.J * (1 - p.gamma) + p.Jz
    R = math.hypot(d, 2 * p.D)
    phi1, phi2 = mixing_angles(p)
    s1, c1 = math.sin(phi1), math.cos(phi1)
    s2, c2 = math.sin(phi2), math.cos(phi2)
    energies = [
        2 * p.J - p.Jz,
        2 * p.J * p.gamma + p.Jz,
        -p.J * (1 + p.gamma) + R,
        -p.J * (1 + p.gamma) - R,
    ]
    vectors = [
        _basis_state(0, 1, 1, 0),
        _basis_state(1, 0, 0, 1),
        _basis_state(s1, -1j * c1, 1j * c1, -s1),
        _basis_state(s2, 1j * c2, -1j * c2, -s2),
    ]
    return Spectrum(energies=np.array(energies), vectors=np.column_stack(vectors))


def analytic_spectrum(p: ModelParams) -> Spectrum:
    """
    Closed-form eigenpairs in the E1..E4 labelling of the model.

    Degenerate limits: chi -> 1 when J = D = 0 (Dz); an undefined Dx mixing
    angle (0/0) becomes pi/2.
    """
    if p.variant is Variant.DZ:
        return _analytic_dz(p)
    return _analytic_dx(p)


def eigen_residual(h: np.ndarray, spectrum: Spectrum) -> float:
    """Largest ||H psi_m - E_m psi_m|| over the spectrum."""
    residuals = h @ spectrum.vectors - spectrum.vectors * spectrum.energies
    return float(np.max(np.linalg.norm(residuals, axis=0)))
