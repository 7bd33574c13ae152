"""
Qubit Algebra
State containers, reduced single-qubit density matrix, linear entropy and
two-qubit concurrence.

Basis order is fixed everywhere: |ee>, |eg>, |ge>, |gg> for two qubits and
|e>, |g> for one.
"""

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .dynamics import SystemParams, survival_amplitude
from .errors import InvalidParameterError, InvalidStateError

STATE_TOL = 1e-12
EIGEN_ERROR_TOL = 1e-8

# sigma_y (x) sigma_y in the |ee>, |eg>, |ge>, |gg> basis
SIGMA_YY = np.array(
    [
        [0, 0, 0, -1],
        [0, 0, 1, 0],
        [0, 1, 0, 0],
        [-1, 0, 0, 0],
    ],
    dtype=complex,
)


# =========================
# States
# =========================

def check_bloch_angles(theta: float, phi: float) -> None:
    if not (0.0 <= theta <= math.pi):
        raise InvalidParameterError(f"theta must lie in [0, pi], got {theta}")
    if not (0.0 <= phi < 2.0 * math.pi):
        raise InvalidParameterError(f"phi must lie in [0, 2pi), got {phi}")


@dataclass(frozen=True)
class QubitInit:
    """Initial pure state cos(theta/2)|e> + sin(theta/2) e^{i phi}|g>."""
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        check_bloch_angles(self.theta, self.phi)

    @property
    def excited(self) -> float:
        return math.cos(self.theta / 2.0)

    @property
    def ground(self) -> complex:
        return math.sin(self.theta / 2.0) * complex(math.cos(self.phi), math.sin(self.phi))


@dataclass(frozen=True)
class PureTwoQubitState:
    """Normalized amplitudes on |ee>, |eg>, |ge>, |gg>."""
    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        norm = abs(self.a) ** 2 + abs(self.b) ** 2 + abs(self.c) ** 2 + abs(self.d) ** 2
        if abs(norm - 1.0) > STATE_TOL:
            raise InvalidStateError(f"State is not normalized: |psi|^2 = {norm!r}")

    @classmethod
    def from_vector(cls, vector) -> "PureTwoQubitState":
        a, b, c, d = (complex(x) for x in np.asarray(vector, dtype=complex))
        return cls(a, b, c, d)

    def as_vector(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c, self.d], dtype=complex)


def random_pure_state(rng: np.random.Generator) -> PureTwoQubitState:
    """Haar-random two-qubit pure state (normalized complex Gaussian vector)."""
    vector = rng.normal(size=4) + 1j * rng.normal(size=4)
    return PureTwoQubitState.from_vector(vector / np.linalg.norm(vector))


class _DensityMatrix:
    dim = 0

    def __init__(self, matrix):
        rho = np.array(matrix, dtype=complex)
        if rho.shape != (self.dim, self.dim):
            raise InvalidStateError(f"Expected a {self.dim}x{self.dim} matrix, got shape {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T)) > STATE_TOL:
            raise InvalidStateError("Density matrix is not Hermitian")
        trace = np.trace(rho)
        if abs(trace - 1.0) > STATE_TOL:
            raise InvalidStateError(f"Density matrix trace is {trace!r}, expected 1")
        smallest = np.linalg.eigvalsh(rho).min()
        if smallest < -STATE_TOL:
            raise InvalidStateError(f"Density matrix has negative eigenvalue {smallest!r}")
        rho.setflags(write=False)
        self.matrix = rho

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.matrix!r})"


class DensityMatrix2(_DensityMatrix):
    """Single-qubit density matrix on |e>, |g>."""
    dim = 2


class DensityMatrix4(_DensityMatrix):
    """Two-qubit density matrix on |ee>, |eg>, |ge>, |gg>."""
    dim = 4


def projector(state: PureTwoQubitState) -> DensityMatrix4:
    vector = state.as_vector()
    return DensityMatrix4(np.outer(vector, vector.conj()))


# =========================
# Single qubit
# =========================

def qubit_reduced_density(params: SystemParams, init: QubitInit, t: float) -> DensityMatrix2:
    """
    Qubit state after tracing out its cavity and bath.

    With C = cos(theta/2) E(tau) and D = sin(theta/2) e^{i phi} (the ground
    amplitude never evolves):

        rho = [[|C|^2,   C D*       ],
               [C* D,    1 - |C|^2  ]]

    Raises:
        InvalidParameterError: If tau < 0 or the angles are out of range
    """
    check_bloch_angles(init.theta, init.phi)
    excited = init.excited * survival_amplitude(params, t)
    ground = init.ground
    population = abs(excited) ** 2
    coherence = excited * ground.conjugate()
    return DensityMatrix2([
        [population, coherence],
        [coherence.conjugate(), 1.0 - population],
    ])


def linear_entropy(rho: Union[DensityMatrix2, np.ndarray]) -> float:
    """
    Linear entropy 1 - Tr(rho^2), between 0 (pure) and 1/2 (maximally mixed).

    Raises:
        InvalidStateError: If rho is not a valid qubit density matrix
    """
    if not isinstance(rho, DensityMatrix2):
        rho = DensityMatrix2(rho)
    return min(0.5, max(0.0, 1.0 - rho.purity()))


def linear_entropy_closed_form(epsilon, theta):
    """2 cos^4(theta/2) eps (1 - eps) with eps = |E|^2; vectorized."""
    x = np.cos(np.asarray(theta, dtype=float) / 2.0) ** 2
    eps = np.asarray(epsilon, dtype=float)
    return 2.0 * x * x * eps * (1.0 - eps)


# =========================
# Concurrence
# =========================

def concurrence_pure(state: PureTwoQubitState) -> float:
    """2|ad - bc| for a normalized pure state."""
    if not isinstance(state, PureTwoQubitState):
        state = PureTwoQubitState.from_vector(state)
    return min(1.0, 2.0 * abs(state.a * state.d - state.b * state.c))


def spin_flip(rho: Union[DensityMatrix4, np.ndarray]) -> np.ndarray:
    """(sigma_y x sigma_y) rho* (sigma_y x sigma_y)."""
    matrix = rho.matrix if isinstance(rho, DensityMatrix4) else np.asarray(rho, dtype=complex)
    return SIGMA_YY @ matrix.conj() @ SIGMA_YY


def spin_flip_eigenvalues(rho: Union[DensityMatrix4, np.ndarray]) -> np.ndarray:
    """
    Eigenvalues of rho * rho_tilde in decreasing order.

    These are real and non-negative for a physical state. Round-off below
    the error threshold is clamped; anything larger means the input is not
    a density matrix.

    Raises:
        InvalidStateError: If an eigenvalue has an imaginary part or a
            negative real part beyond 1e-8
    """
    matrix = rho.matrix if isinstance(rho, DensityMatrix4) else np.asarray(rho, dtype=complex)
    eigenvalues = np.linalg.eigvals(matrix @ spin_flip(matrix))

    worst_imag = np.max(np.abs(eigenvalues.imag))
    if worst_imag > EIGEN_ERROR_TOL:
        raise InvalidStateError(f"rho*rho_tilde has a complex eigenvalue (imag part {worst_imag:.3e})")
    lowest = np.min(eigenvalues.real)
    if lowest < -EIGEN_ERROR_TOL:
        raise InvalidStateError(f"rho*rho_tilde has a negative eigenvalue ({lowest:.3e})")

    return np.sort(np.maximum(eigenvalues.real, 0.0))[::-1]


def _psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    values, vectors = np.linalg.eigh(matrix)
    # eigenvalues at round-off level are zero; their square roots are not small
    values = np.where(values > STATE_TOL, values, 0.0)
    return (vectors * np.sqrt(values)) @ vectors.conj().T


def concurrence_wootters(rho: Union[DensityMatrix4, np.ndarray]) -> float:
    """
    Wootters concurrence max{0, r1 - r2 - r3 - r4}.

    The r_i = sqrt(lambda_i) are taken as the singular values of
    sqrt(rho) sqrt(rho_tilde), whose squares are exactly the eigenvalues of
    rho * rho_tilde. This keeps rank-deficient (pure) inputs accurate, where
    square roots of tiny eigenvalues would otherwise amplify round-off.

    Raises:
        InvalidStateError: If rho is not a valid two-qubit density matrix
    """
    if not isinstance(rho, DensityMatrix4):
        rho = DensityMatrix4(rho)
    spin_flip_eigenvalues(rho)

    root = _psd_sqrt(rho.matrix)
    flipped_root = SIGMA_YY @ root.conj() @ SIGMA_YY
    r = np.linalg.svd(root @ flipped_root, compute_uv=False)
    r = np.sort(r)[::-1]
    return float(min(1.0, max(0.0, r[0] - r[1] - r[2] - r[3])))
