"""
Dense complex linear algebra for two-qubit operators.

Matrices are numpy complex128 arrays over the computational basis
(|00>, |01>, |10>, |11>). Eigendecomposition uses cyclic complex Jacobi
rotations, which are unconditionally stable for these small Hermitian matrices.
"""

import math
from typing import List

import numpy as np

from src.engine.models import NumericalInvariantError, Spectrum

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_CLIP_TOL = 1e-9
# PSD eigenvalues at or below this (relative to max(1, largest)) are rounding noise.
NUMERICAL_ZERO = 1e-14
JACOBI_REL_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100
DEGENERACY_TOL = 1e-10
NORM_TOL = 1e-10

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

_SUPPORTED_SIZES = (2, 4)


def as_matrix(m) -> np.ndarray:
    """
    Coerce input to a finite complex 2x2 or 4x4 array.

    Raises:
        ValueError: On wrong shape or NaN/Inf entries.
    """
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] not in _SUPPORTED_SIZES:
        raise ValueError(f"Expected a 2x2 or 4x4 matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("Matrix contains NaN or Inf entries")
    return arr


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.conj(m).T


def hermiticity_error(m: np.ndarray) -> float:
    """Largest entry of |M - M^H|."""
    return float(np.max(np.abs(m - dagger(m))))


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    return hermiticity_error(as_matrix(m)) <= tol


def tensor2(a, b) -> np.ndarray:
    """Kronecker product of two single-qubit operators (first factor = qubit 1)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise ValueError(f"tensor2 expects two 2x2 matrices, got {a.shape} and {b.shape}")
    return np.kron(a, b)


def _off_diagonal_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Annihilate a[p, q] in place with one complex Jacobi rotation."""
    apq = a[p, q]
    magnitude = abs(apq)
    if magnitude == 0.0:
        return

    # Phase shift makes the pivot real, then a real rotation zeroes it.
    phase = apq / magnitude
    theta = (a[q, q].real - a[p, p].real) / (2.0 * magnitude)
    if theta == 0.0:
        t = 1.0
    elif abs(theta) > 1e150:
        t = 0.5 / theta
    else:
        t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c

    g = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
    idx = [p, q]
    a[:, idx] = a[:, idx] @ g
    a[idx, :] = dagger(g) @ a[idx, :]
    v[:, idx] = v[:, idx] @ g

    a[p, q] = a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real


def _normalize_phase(vec: np.ndarray) -> np.ndarray:
    """Make the first non-negligible component real and positive."""
    for component in vec:
        magnitude = abs(component)
        if magnitude > 1e-12:
            return vec * (magnitude / component)
    return vec


def _lexicographic_key(vec: np.ndarray) -> tuple:
    parts = np.round(np.column_stack([vec.real, vec.imag]).ravel(), 12) + 0.0
    return tuple(parts.tolist())


def _ordered_spectrum(energies: np.ndarray, vectors: np.ndarray) -> Spectrum:
    """Ascending energies; degenerate clusters ordered by phase-normalised vectors."""
    n = energies.shape[0]
    vectors = np.column_stack([_normalize_phase(vectors[:, k]) for k in range(n)])
    order = [int(k) for k in np.argsort(energies, kind="stable")]
    tol = DEGENERACY_TOL * max(1.0, float(np.max(np.abs(energies))))

    ordered: List[int] = []
    cluster = [order[0]]
    for idx in order[1:]:
        if energies[idx] - energies[cluster[0]] <= tol:
            cluster.append(idx)
            continue
        ordered.extend(sorted(cluster, key=lambda k: _lexicographic_key(vectors[:, k])))
        cluster = [idx]
    ordered.extend(sorted(cluster, key=lambda k: _lexicographic_key(vectors[:, k])))

    return Spectrum(energies=energies[ordered], vectors=vectors[:, ordered])


def herm_eig(m) -> Spectrum:
    """
    Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi sweeps.

    Args:
        m: Hermitian 2x2 or 4x4 matrix.

    Returns:
        Spectrum with ascending energies and orthonormal eigenvector columns.

    Raises:
        ValueError: If the input is not Hermitian within HERMITIAN_TOL.
        NumericalInvariantError: If JACOBI_MAX_SWEEPS sweeps do not converge.
    """
    a = as_matrix(m)
    error = hermiticity_error(a)
    if error > HERMITIAN_TOL:
        raise ValueError(f"herm_eig requires a Hermitian matrix (|M - M^H| = {error:.3e})")

    a = 0.5 * (a + dagger(a))
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    threshold = JACOBI_REL_TOL * float(np.linalg.norm(a))

    for _ in range(JACOBI_MAX_SWEEPS):
        if _off_diagonal_norm(a) <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                _rotate(a, v, p, q)
    else:
        residual = _off_diagonal_norm(a)
        if residual > threshold:
            raise NumericalInvariantError(
                f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps "
                f"(off-diagonal norm {residual:.3e})"
            )

    return _ordered_spectrum(np.diag(a).real.copy(), v)


def clip_psd_eigenvalues(energies: np.ndarray) -> np.ndarray:
    """
    Clip the spectrum of a PSD operator.

    Values down to -PSD_CLIP_TOL are rounding noise and become 0, as do
    positive values under the NUMERICAL_ZERO floor.

    Raises:
        NumericalInvariantError: If an eigenvalue lies below -PSD_CLIP_TOL.
    """
    lowest = float(np.min(energies))
    if lowest < -PSD_CLIP_TOL:
        raise NumericalInvariantError(
            f"Operator is not positive semidefinite (eigenvalue {lowest:.3e})"
        )
    floor = NUMERICAL_ZERO * max(1.0, float(np.max(np.abs(energies))))
    return np.where(energies <= floor, 0.0, energies)


def psd_sqrt(m) -> np.ndarray:
    """
    Principal square root of a positive semidefinite Hermitian matrix.

    Raises:
        NumericalInvariantError: If an eigenvalue lies below -PSD_CLIP_TOL.
    """
    spectrum = herm_eig(m)
    roots = np.sqrt(clip_psd_eigenvalues(spectrum.energies))
    r = (spectrum.vectors * roots) @ dagger(spectrum.vectors)
    return 0.5 * (r + dagger(r))


def density_matrix(m) -> np.ndarray:
    """
    Validate a 4x4 density matrix and return a read-only copy.

    Tiny negative eigenvalues (>= -PSD_CLIP_TOL) are clipped to zero and the
    trace renormalised.

    Raises:
        ValueError: On wrong shape or non-finite entries.
        NumericalInvariantError: If Hermiticity, unit trace or positivity fail.
    """
    rho = as_matrix(m)
    if rho.shape != (4, 4):
        raise ValueError(f"A two-qubit density matrix is 4x4, got {rho.shape}")

    error = hermiticity_error(rho)
    if error > HERMITIAN_TOL:
        raise NumericalInvariantError(f"Density matrix is not Hermitian ({error:.3e})")
    rho = 0.5 * (rho + dagger(rho))

    trace = float(np.trace(rho).real)
    if abs(trace - 1.0) > TRACE_TOL:
        raise NumericalInvariantError(f"Density matrix trace is {trace!r}, expected 1")

    spectrum = herm_eig(rho)
    lowest = float(np.min(spectrum.energies))
    if lowest < -PSD_CLIP_TOL:
        raise NumericalInvariantError(
            f"Density matrix is not positive semidefinite (eigenvalue {lowest:.3e})"
        )
    if lowest < 0.0:
        weights = np.clip(spectrum.energies, 0.0, None)
        rho = (spectrum.vectors * weights) @ dagger(spectrum.vectors)
        rho = 0.5 * (rho + dagger(rho))
        rho = rho / np.trace(rho).real

    rho.flags.writeable = False
    return rho


def pure_density(vector) -> np.ndarray:
    """|v><v| for a unit-norm four-component state vector."""
    vec = np.asarray(vector, dtype=complex)
    if vec.shape != (4,):
        raise ValueError(f"Expected a 4-component state vector, got shape {vec.shape}")
    norm = float(np.linalg.norm(vec))
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"State vector must have unit norm, got {norm!r}")
    return density_matrix(np.outer(vec, vec.conj()))
