"""Data models for the two-qubit decoherence engine."""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


class NumericalInvariantError(ArithmeticError):
    """A numerical invariant was violated (signals a bug, not bad input)."""


class Variant(Enum):
    """Direction of the Dzyaloshinskii-Moriya coupling."""
    DZ = "Dz"
    DX = "Dx"


class Family(Enum):
    """Initial channel state family, parameterised by the angle alpha."""
    ANTIPARALLEL = "antiparallel"  # cos a |01> + sin a |10>
    PARALLEL = "parallel"          # cos a |00> + sin a |11>


def _require_finite(**values: float) -> None:
    for name, value in values.items():
        if not math.isfinite(value):
            raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless couplings of the XYZ chain with DM interaction."""
    variant: Variant
    J: float
    gamma: float
    Jz: float
    D: float

    def __post_init__(self) -> None:
        _require_finite(J=self.J, gamma=self.gamma, Jz=self.Jz, D=self.D)


@dataclass(frozen=True)
class EvolutionParams:
    """Intrinsic decoherence rate and evolution time."""
    Gamma: float
    t: float

    def __post_init__(self) -> None:
        _require_finite(Gamma=self.Gamma, t=self.t)
        if self.Gamma < 0:
            raise ValueError(f"Gamma must be non-negative, got {self.Gamma}")
        if self.t < 0:
            raise ValueError(f"t must be non-negative, got {self.t}")


@dataclass(frozen=True)
class InitialStateSpec:
    """Alpha-parameterised pure initial state of the channel."""
    family: Family
    alpha: float

    def __post_init__(self) -> None:
        _require_finite(alpha=self.alpha)

    def vector(self) -> np.ndarray:
        """State vector in the (|00>, |01>, |10>, |11>) basis."""
        c, s = math.cos(self.alpha), math.sin(self.alpha)
        vec = np.zeros(4, dtype=complex)
        if self.family is Family.ANTIPARALLEL:
            vec[1], vec[2] = c, s
        else:
            vec[0], vec[3] = c, s
        return vec


@dataclass(frozen=True)
class InputState:
    """Two-qubit state fed into the teleportation protocol."""
    theta: float
    phi: float

    def __post_init__(self) -> None:
        _require_finite(theta=self.theta, phi=self.phi)
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi < 2 * math.pi:
            raise ValueError(f"phi must lie in [0, 2*pi), got {self.phi}")

    def vector(self) -> np.ndarray:
        """cos(theta/2)|10> + exp(i phi) sin(theta/2)|01>."""
        vec = np.zeros(4, dtype=complex)
        vec[2] = math.cos(self.theta / 2)
        vec[1] = complex(math.cos(self.phi), math.sin(self.phi)) * math.sin(self.theta / 2)
        return vec


@dataclass(frozen=True, eq=False)
class Spectrum:
    """
    Energies paired with eigenvectors.

    ``vectors`` holds the eigenvectors as columns, so ``vectors[:, m]`` belongs
    to ``energies[m]``. Order is whatever the producer chose: ascending for the
    Jacobi solver, the E1..E4 labelling for the analytic spectra.
    """
    energies: np.ndarray
    vectors: np.ndarray

    def __post_init__(self) -> None:
        energies = np.array(self.energies, dtype=float)
        vectors = np.array(self.vectors, dtype=complex)
        n = energies.shape[0]
        if energies.ndim != 1 or vectors.shape != (n, n):
            raise ValueError(
                f"Spectrum needs n energies and an n x n vector matrix, "
                f"got {energies.shape} and {vectors.shape}"
            )
        if not (np.all(np.isfinite(energies)) and np.all(np.isfinite(vectors))):
            raise ValueError("Spectrum contains non-finite entries")
        energies.flags.writeable = False
        vectors.flags.writeable = False
        object.__setattr__(self, "energies", energies)
        object.__setattr__(self, "vectors", vectors)

    def __len__(self) -> int:
        return self.energies.shape[0]

    def vector(self, m: int) -> np.ndarray:
        """Eigenvector belonging to energies[m]."""
        return self.vectors[:, m]

    def orthonormality_error(self) -> float:
        """Largest entry of |V^H V - I|."""
        gram = self.vectors.conj().T @ self.vectors
        return float(np.max(np.abs(gram - np.eye(len(self)))))

    def check_orthonormal(self, tol: float = 1e-10) -> None:
        """
        Raise if the eigenvectors are not orthonormal.

        Raises:
            NumericalInvariantError: If V^H V deviates from I by more than tol.
        """
        error = self.orthonormality_error()
        if error > tol:
            raise NumericalInvariantError(
                f"Spectrum vectors are not orthonormal (max deviation {error:.3e})"
            )

    def reconstruct(self) -> np.ndarray:
        """Sum of E_m |psi_m><psi_m|."""
        return (self.vectors * self.energies) @ self.vectors.conj().T
