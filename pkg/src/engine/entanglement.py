"""Wootters concurrence of two-qubit density matrices."""

import numpy as np

from src.engine.numerics import (
    PAULI_Y,
    clip_psd_eigenvalues,
    dagger,
    herm_eig,
    psd_sqrt,
    tensor2,
)

SPIN_FLIP = tensor2(PAULI_Y, PAULI_Y)
BLOCK_TOL = 1e-10

# Rows/columns of |00> and |11>.
_OUTER_INDICES = (0, 3)


def spin_flip(rho: np.ndarray) -> np.ndarray:
    """S rho* S with S = sigma_y (x) sigma_y."""
    return SPIN_FLIP @ np.conj(rho) @ SPIN_FLIP


def wootters_lambdas(rho: np.ndarray) -> np.ndarray:
    """
    Square roots of the eigenvalues of rho * spin_flip(rho).

    Evaluated through the Hermitian matrix sqrt(rho) rho~ sqrt(rho), which has
    the same eigenvalues, so only the Jacobi solver is needed.
    """
    root = psd_sqrt(rho)
    product = root @ spin_flip(rho) @ root
    product = 0.5 * (product + dagger(product))
    return np.sqrt(clip_psd_eigenvalues(herm_eig(product).energies))


def _from_lambdas(lambdas: np.ndarray) -> float:
    value = 2.0 * float(np.max(lambdas)) - float(np.sum(lambdas))
    return min(1.0, max(0.0, value))


def concurrence(rho: np.ndarray) -> float:
    """C = max[0, 2 max(lambda) - sum(lambda)], clamped to [0, 1]."""
    return _from_lambdas(wootters_lambdas(rho))


def concurrence_dz_closed(rho: np.ndarray) -> float:
    """
    Closed-form concurrence for states confined to the {|01>, |10>} block.

    lambda_1 = lambda_2 = 0 and
    lambda_{3,4} = sqrt|r22 r33 + r23 r32 +/- 2 sqrt(r23 r32 r22 r33)|.

    Raises:
        ValueError: If rho has weight outside the {|01>, |10>} block.
    """
    rho = np.asarray(rho, dtype=complex)
    outside = max(
        float(np.max(np.abs(rho[list(_OUTER_INDICES), :]))),
        float(np.max(np.abs(rho[:, list(_OUTER_INDICES)]))),
    )
    if outside > BLOCK_TOL:
        raise ValueError(
            f"State is not confined to the {{|01>, |10>}} block (outside weight {outside:.3e})"
        )

    r22, r33, r23, r32 = rho[1, 1], rho[2, 2], rho[1, 2], rho[2, 1]
    cross = 2 * np.sqrt(r23 * r32 * r22 * r33)
    lambda3 = np.sqrt(abs(r22 * r33 + r23 * r32 + cross))
    lambda4 = np.sqrt(abs(r22 * r33 + r23 * r32 - cross))
    return _from_lambdas(np.array([0.0, 0.0, lambda3, lambda4]))
