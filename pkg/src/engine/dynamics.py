"""
Density-matrix evolution under Milburn intrinsic decoherence.

The spectral propagator (``evolve``) is the reference evolution. The
fixed-step RK4 integration of the master equation (``evolve_ode_oracle``) is
an independent check on it, and ``closed_form_dz`` reproduces the commonly quoted
closed-form D_z density matrix verbatim so its discrepancy can be asserted.
"""

import math
from typing import Optional, Sequence

import numpy as np

from src.engine.hamiltonian import chi
from src.engine.models import (
    EvolutionParams,
    InitialStateSpec,
    ModelParams,
    Spectrum,
    Variant,
)
from src.engine.numerics import dagger, density_matrix, pure_density

DEFAULT_ODE_STEP_CAP = 10**7
DEGENERACY_REL_TOL = 1e-9
COHERENCE_THRESHOLD = 1e-6


def initial_density(initial: InitialStateSpec) -> np.ndarray:
    """Density matrix of the alpha-parameterised initial state."""
    return pure_density(initial.vector())


def purity(rho: np.ndarray) -> float:
    """tr(rho^2)."""
    return float(np.real(np.trace(rho @ rho)))


def coherence_factors(energies: np.ndarray, ev: EvolutionParams) -> np.ndarray:
    """Matrix exp[-(Gamma t / 2)(E_m - E_n)^2 - i (E_m - E_n) t]."""
    gaps = energies[:, None] - energies[None, :]
    return np.exp(-0.5 * ev.Gamma * ev.t * gaps**2 - 1j * gaps * ev.t)


def _eigenbasis_coefficients(spectrum: Spectrum, rho0: np.ndarray) -> np.ndarray:
    """<psi_m|rho0|psi_n> for all m, n."""
    return dagger(spectrum.vectors) @ rho0 @ spectrum.vectors


def evolve(spectrum: Spectrum, rho0: np.ndarray, ev: EvolutionParams) -> np.ndarray:
    """
    Evolve rho0 for time ev.t with decoherence rate ev.Gamma.

    Args:
        spectrum: Eigenpairs of the governing Hamiltonian.
        rho0: Initial density matrix.
        ev: Decoherence rate and time.

    Returns:
        The validated density matrix rho(t).

    Raises:
        NumericalInvariantError: If the spectrum is not orthonormal.
    """
    spectrum.check_orthonormal()
    coefficients = _eigenbasis_coefficients(spectrum, rho0)
    coefficients = coefficients * coherence_factors(spectrum.energies, ev)
    rho = spectrum.vectors @ coefficients @ dagger(spectrum.vectors)
    return density_matrix(rho)


def evolve_trajectory(
    spectrum: Spectrum,
    rho0: np.ndarray,
    Gamma: float,
    times: Sequence[float],
) -> np.ndarray:
    """
    Vectorised evolution over a whole time axis.

    Returns a (len(times), 4, 4) array. Entries are not individually
    validated; use ``evolve`` when a checked DensityMatrix is needed.
    """
    spectrum.check_orthonormal()
    times = np.asarray(times, dtype=float)
    gaps = spectrum.energies[:, None] - spectrum.energies[None, :]
    factors = np.exp(
        -0.5 * Gamma * times[:, None, None] * gaps**2 - 1j * times[:, None, None] * gaps
    )
    coefficients = _eigenbasis_coefficients(spectrum, rho0)[None, :, :] * factors
    v = spectrum.vectors
    return np.einsum("ij,tjk,lk->til", v, coefficients, v.conj())


def liouvillian(h: np.ndarray, Gamma: float) -> np.ndarray:
    """
    Superoperator L of d rho/dt = -i[H, rho] - (Gamma/2)[H, [H, rho]].

    Acts on row-major flattened density matrices: vec(A rho B) = (A kron B^T) vec(rho).
    """
    n = h.shape[0]
    eye = np.eye(n, dtype=complex)
    h2 = h @ h
    commutator = np.kron(h, eye) - np.kron(eye, h.T)
    double_commutator = np.kron(h2, eye) - 2 * np.kron(h, h.T) + np.kron(eye, h2.T)
    return -1j * commutator - 0.5 * Gamma * double_commutator


def evolve_ode_oracle(
    h: np.ndarray,
    rho0: np.ndarray,
    ev: EvolutionParams,
    dt: float,
    max_steps: int = DEFAULT_ODE_STEP_CAP,
) -> np.ndarray:
    """
    Integrate the master equation with classic fixed-step RK4.

    The step is shrunk to t / ceil(t / dt) so the integration lands on t.

    Raises:
        ValueError: If dt is not positive, dt > t, or the step cap is exceeded.
    """
    if ev.t == 0.0:
        return density_matrix(rho0)
    if not dt > 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    if dt > ev.t:
        raise ValueError(f"dt ({dt}) must not exceed t ({ev.t})")

    steps = math.ceil(ev.t / dt - 1e-9)
    if steps > max_steps:
        raise ValueError(f"ODE integration needs {steps} steps, cap is {max_steps}")
    step = ev.t / steps

    generator = liouvillian(np.asarray(h, dtype=complex), ev.Gamma)
    state = np.asarray(rho0, dtype=complex).reshape(-1)
    for _ in range(steps):
        k1 = generator @ state
        k2 = generator @ (state + 0.5 * step * k1)
        k3 = generator @ (state + 0.5 * step * k2)
        k4 = generator @ (state + step * k3)
        state = state + (step / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)

    return density_matrix(state.reshape(rho0.shape))


def closed_form_dz(p: ModelParams, alpha: float, ev: EvolutionParams) -> np.ndarray:
    """
    The commonly quoted closed-form D_z density matrix, entry for entry.

    Kept to document an erratum: the quoted entries give a complex rho_11 and
    support outside span{|01>, |10>}, which ``evolve`` never produces. The
    result is deliberately not validated as a density matrix.

    Raises:
        ValueError: If p is not a D_z model.
    """
    if p.variant is not Variant.DZ:
        raise ValueError("closed_form_dz is only defined for the Dz variant")

    x = chi(p.J, p.D)
    r = math.hypot(p.J, p.D)
    gap = (-p.Jz + 2 * r) - (-p.Jz - 2 * r)
    eta = np.exp(-ev.t * gap * (ev.Gamma * gap + 2j) / 2)
    xi = np.exp(-ev.t * gap * (ev.Gamma * gap - 2j) / 2)
    c, s = math.cos(alpha), math.sin(alpha)
    mix = c + x * s

    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = x**2 / 4 * c**2
    rho[1, 1] = x**2 / 4 * mix**2
    rho[2, 2] = (c * mix * (2 + eta + xi) + x**2 * s**2) / 4
    rho[1, 0] = -(x**2) * eta / 4 * c * mix
    rho[2, 0] = -x * c / 4 * (c + eta * x * s + eta * c)
    rho[0, 1] = -xi * x**2 * c / 4 * mix
    rho[0, 2] = -x * c / 4 * (c + xi * x * s + xi * c)
    rho[2, 1] = x / 4 * mix * (mix + xi * c)
    rho[1, 2] = x / 4 * mix * (mix + eta * c)
    return rho


def default_degeneracy_tol(spectrum: Spectrum) -> float:
    scale = float(np.max(np.abs(spectrum.energies)))
    return DEGENERACY_REL_TOL * scale if scale > 0 else DEGENERACY_REL_TOL


def asymptotic_state(
    spectrum: Spectrum,
    rho0: np.ndarray,
    degeneracy_tol: Optional[float] = None,
) -> np.ndarray:
    """
    Long-time limit of ``evolve`` for any Gamma > 0.

    Coherences between eigenvectors with distinct energies vanish; those
    inside a degenerate eigenspace (|E_m - E_n| <= degeneracy_tol) survive.
    """
    if degeneracy_tol is None:
        degeneracy_tol = default_degeneracy_tol(spectrum)
    if not degeneracy_tol > 0:
        raise ValueError(f"degeneracy_tol must be positive, got {degeneracy_tol}")

    spectrum.check_orthonormal()
    gaps = np.abs(spectrum.energies[:, None] - spectrum.energies[None, :])
    coefficients = np.where(gaps <= degeneracy_tol, _eigenbasis_coefficients(spectrum, rho0), 0.0)
    return density_matrix(spectrum.vectors @ coefficients @ dagger(spectrum.vectors))


def decoherence_time(spectrum: Spectrum, Gamma: float, threshold: float = COHERENCE_THRESHOLD) -> float:
    """
    Time after which every decaying coherence factor is below ``threshold``.

    t* = -ln(threshold) / (Gamma * min (E_m - E_n)^2 / 2) over non-degenerate
    pairs; infinite when Gamma = 0 or the spectrum is fully degenerate.
    """
    gaps = np.abs(spectrum.energies[:, None] - spectrum.energies[None, :])
    distinct = gaps[gaps > default_degeneracy_tol(spectrum)]
    if Gamma <= 0 or distinct.size == 0:
        return math.inf
    return -2.0 * math.log(threshold) / (Gamma * float(np.min(distinct)) ** 2)
