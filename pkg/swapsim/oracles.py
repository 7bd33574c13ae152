"""
Oracle Suite
Brute-force solvers that validate the closed forms independently:
  - the amplitude integro-differential equation (ODE reduction and direct
    trapezoidal memory sums),
  - Gamma by adaptive Simpson quadrature,
  - the Lorentzian spectrum against the memory kernel,
  - Haar averages over pairs of Bloch spheres (product quadrature and
    seeded Monte Carlo).

The Haar integrators double as the averaging engines in swapsim.averaging;
the amplitude and Gamma solvers are test-only.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad

from .dynamics import SystemParams, rate_constants, spectral_density, survival_amplitude
from .errors import InvalidParameterError, StepSizeError

MAX_STABLE_STEP = 0.1  # largest allowed |Omega| * h

HaarIntegrand = Callable[[np.ndarray, np.ndarray, np.ndarray, np.ndarray], np.ndarray]


class GridMethod(Enum):
    ODE_REDUCTION = "ode-reduction"
    TRAPEZOID_VOLTERRA = "trapezoid-volterra"


@dataclass(frozen=True)
class GridSpec:
    t_max: float
    steps: int
    method: GridMethod = GridMethod.ODE_REDUCTION

    def __post_init__(self):
        if self.steps < 10:
            raise InvalidParameterError(f"Grid needs at least 10 steps, got {self.steps}")
        if not math.isfinite(self.t_max) or self.t_max <= 0:
            raise InvalidParameterError(f"Grid t_max must be positive, got {self.t_max}")

    @property
    def h(self) -> float:
        return self.t_max / self.steps

    def times(self) -> np.ndarray:
        return self.h * np.arange(self.steps + 1)


# =========================
# Amplitude equation
# =========================

def solve_volterra_amplitude(params: SystemParams, grid: GridSpec) -> np.ndarray:
    """
    Solve C'(tau) = -int_0^tau f(tau - u) C(u) du with C(0) = 1 on a uniform grid.

    Args:
        params: System parameters
        grid: Time grid and solution method

    Returns:
        Complex array C(tau_k) for k = 0..steps

    Raises:
        StepSizeError: If |Omega| h > 0.1
    """
    omega = rate_constants(params).omega
    if abs(omega) * grid.h > MAX_STABLE_STEP:
        raise StepSizeError(
            f"Step h={grid.h:.3e} too coarse: |Omega| h = {abs(omega) * grid.h:.3f} > {MAX_STABLE_STEP}"
        )
    if grid.method is GridMethod.ODE_REDUCTION:
        return _solve_ode_reduction(params, grid.h, grid.steps)
    return _solve_trapezoid_richardson(params, grid.h, grid.steps)


def _solve_ode_reduction(params: SystemParams, h: float, steps: int) -> np.ndarray:
    # the exponential kernel makes y = int f(tau-u) C(u) du obey y' = g^2 C - s y
    g2 = params.g ** 2
    s = params.s

    def rhs(c: complex, y: complex) -> Tuple[complex, complex]:
        return -y, g2 * c - s * y

    out = np.empty(steps + 1, dtype=complex)
    c, y = 1.0 + 0j, 0j
    out[0] = c
    for k in range(steps):
        k1c, k1y = rhs(c, y)
        k2c, k2y = rhs(c + 0.5 * h * k1c, y + 0.5 * h * k1y)
        k3c, k3y = rhs(c + 0.5 * h * k2c, y + 0.5 * h * k2y)
        k4c, k4y = rhs(c + h * k3c, y + h * k3y)
        c = c + h * (k1c + 2 * k2c + 2 * k3c + k4c) / 6.0
        y = y + h * (k1y + 2 * k2y + 2 * k3y + k4y) / 6.0
        out[k + 1] = c
    return out


def _integrated_kernel(params: SystemParams, u: np.ndarray) -> np.ndarray:
    """K(u) = int_0^u f, so that C(tau) = 1 - int_0^tau K(tau - u) C(u) du."""
    s = params.s
    if s == 0:
        return params.g ** 2 * u + 0j
    return params.g ** 2 * (1.0 - np.exp(-s * u)) / s


def _solve_trapezoid(params: SystemParams, h: float, steps: int) -> np.ndarray:
    kernel = _integrated_kernel(params, h * np.arange(steps + 1))
    out = np.empty(steps + 1, dtype=complex)
    out[0] = 1.0
    # K(0) = 0, so the newest point drops out of its own memory sum
    for n in range(1, steps + 1):
        lagged = kernel[n:0:-1]  # K(tau_n - tau_j), j = 0..n-1
        memory = np.dot(lagged[1:], out[1:n]) + 0.5 * lagged[0] * out[0]
        out[n] = 1.0 - h * memory
    return out


def _solve_trapezoid_richardson(params: SystemParams, h: float, steps: int) -> np.ndarray:
    # one Richardson step removes the h^2 term of the trapezoid error
    coarse = _solve_trapezoid(params, h, steps)
    fine = _solve_trapezoid(params, h / 2.0, 2 * steps)
    return (4.0 * fine[::2] - coarse) / 3.0


# =========================
# Gamma
# =========================

def adaptive_simpson(
    f: Callable[[float], complex],
    a: float,
    b: float,
    tol: float = 1e-9,
    max_depth: int = 50,
    min_depth: int = 2,
) -> complex:
    """
    Adaptive Simpson quadrature of a complex-valued function on [a, b].

    Iterative (explicit stack), with the usual |S2 - S1| <= 15 tol acceptance
    and one Richardson correction per accepted panel.
    """
    if b == a:
        return 0j
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    total = 0j
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    while stack:
        lo, hi, flo, fmid, fhi, estimate, eps, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        left_mid = 0.5 * (lo + mid)
        right_mid = 0.5 * (mid + hi)
        fl = f(left_mid)
        fr = f(right_mid)
        left = (mid - lo) / 6.0 * (flo + 4.0 * fl + fmid)
        right = (hi - mid) / 6.0 * (fmid + 4.0 * fr + fhi)
        correction = left + right - estimate
        if depth >= max_depth or (depth >= min_depth and abs(correction) <= 15.0 * eps):
            total += left + right + correction / 15.0
        else:
            stack.append((mid, hi, fmid, fr, fhi, right, eps / 2.0, depth + 1))
            stack.append((lo, mid, flo, fl, fmid, left, eps / 2.0, depth + 1))
    return total


def gamma_by_quadrature(params: SystemParams, t, tol: float = 1e-9):
    """
    Gamma(tau) = -i g int_0^tau E(u) e^{-s (tau - u)} du by adaptive Simpson.

    For an array of non-decreasing times the integral is accumulated panel
    by panel with Gamma(tau_{k+1}) = e^{-s h_k} Gamma(tau_k) - i g int_{tau_k}^{tau_{k+1}} ...

    Raises:
        InvalidParameterError: For the lossless cavity, negative or unsorted times
    """
    if params.ideal_cavity:
        raise InvalidParameterError("gamma_by_quadrature needs kappa > 0")
    times = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(times < 0) or not np.all(np.isfinite(times)):
        raise InvalidParameterError("Times must be finite and >= 0")
    if np.any(np.diff(times) < 0):
        raise InvalidParameterError("Times must be non-decreasing")

    s = params.s
    g = params.g
    out = np.empty(times.shape, dtype=complex)
    value = 0j
    previous = 0.0
    for k, end in enumerate(times):
        start = previous

        def integrand(u: float, end=end) -> complex:
            return survival_amplitude(params, u) * np.exp(-s * (end - u))

        panel = adaptive_simpson(integrand, start, float(end), tol=tol)
        value = np.exp(-s * (end - start)) * value - 1j * g * panel
        out[k] = value
        previous = float(end)

    if np.ndim(t) == 0:
        return complex(out[0])
    return out


# =========================
# Spectrum
# =========================

def kernel_by_fourier_quadrature(params: SystemParams, s: float) -> complex:
    """
    Memory kernel rebuilt from the spectrum: int J(w) e^{-i (delta + w) s} dw.

    J is even in the offset w, so the transform reduces to a cosine-weighted
    integral on [0, inf).
    """
    if s < 0:
        raise InvalidParameterError(f"s must be >= 0, got {s}")

    def density(w: float) -> float:
        return spectral_density(params, w)

    if s == 0:
        body, _ = quad(density, -np.inf, np.inf, epsabs=1e-12, epsrel=1e-12)
    else:
        half, _ = quad(density, 0.0, np.inf, weight="cos", wvar=s, epsabs=1e-12, limlst=100)
        body = 2.0 * half
    return complex(body * np.exp(-1j * params.delta * s))


def spectral_weight(params: SystemParams, half_width: Optional[float] = None) -> float:
    """
    Total spectral weight int J over [-W, W] (whole line when half_width is None).

    Equals g^2 on the whole line.
    """
    def density(w: float) -> float:
        return spectral_density(params, w)

    if half_width is None:
        half, _ = quad(density, 0.0, np.inf, epsabs=1e-13, epsrel=1e-12, limit=200)
        return 2.0 * half

    width = float(half_width)
    if width <= 0:
        raise InvalidParameterError(f"half_width must be positive, got {width}")
    # breakpoints at multiples of kappa keep the peak resolved on wide windows
    breaks = [b * params.kappa for b in (1.0, 10.0, 100.0, 1000.0) if b * params.kappa < width]
    half, _ = quad(density, 0.0, width, points=breaks or None, epsabs=1e-13, epsrel=1e-12, limit=200)
    return 2.0 * half


# =========================
# Haar averages
# =========================

def bloch_nodes(nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Gauss-Legendre nodes in x = cos^2(theta/2), uniform on [0, 1] under the Haar measure.

    Returns:
        theta nodes and weights summing to 1
    """
    x, w = leggauss(nodes)
    x = 0.5 * (x + 1.0)
    theta = 2.0 * np.arccos(np.sqrt(x))
    return theta, 0.5 * w


def haar_average_quadrature(f: HaarIntegrand, nodes: int, angle_nodes: int = 64) -> float:
    """
    Average of f(theta1, phi1, theta2, phi2) over two independent Bloch spheres.

    Tensor-product rule: Gauss-Legendre in x_i = cos^2(theta_i/2) and periodic
    trapezoid in phi1 - phi2 and phi2 (together these fix phi1 + phi2).
    f must accept broadcastable numpy arrays.

    Args:
        f: Integrand
        nodes: Gauss-Legendre points per x variable
        angle_nodes: Trapezoid points per angle variable
    """
    if nodes < 1 or angle_nodes < 1:
        raise InvalidParameterError("Quadrature needs at least one node per variable")
    theta, weights = bloch_nodes(nodes)
    angles = 2.0 * math.pi * np.arange(angle_nodes) / angle_nodes

    theta2 = theta[:, None, None]
    relative = angles[None, :, None]
    phi2 = angles[None, None, :]
    phi1 = np.mod(phi2 + relative, 2.0 * math.pi)
    theta2, phi1, phi2 = np.broadcast_arrays(theta2, phi1, phi2)

    total = 0.0
    # one theta1 slice at a time bounds memory at nodes * angle_nodes^2
    for theta1, weight1 in zip(theta, weights):
        theta1_grid = np.full(theta2.shape, theta1)
        values = np.asarray(f(theta1_grid, phi1, theta2, phi2), dtype=float)
        values = np.broadcast_to(values, theta2.shape)
        per_theta2 = values.mean(axis=(1, 2))
        total += weight1 * float(np.dot(weights, per_theta2))
    return total


def haar_average_montecarlo(f: HaarIntegrand, samples: int, seed: int) -> Tuple[float, float]:
    """
    Monte Carlo average of f over two Bloch spheres.

    x_i uniform on [0, 1] gives theta_i = 2 arccos(sqrt(x_i)); phi_i uniform on
    [0, 2pi). Draw order is fixed (x1, phi1, x2, phi2), so a given seed always
    produces the same mean.

    Returns:
        (mean, standard error of the mean)
    """
    if samples < 100:
        raise InvalidParameterError(f"Monte Carlo needs at least 100 samples, got {samples}")
    rng = np.random.default_rng(seed)
    x1 = rng.random(samples)
    phi1 = 2.0 * math.pi * rng.random(samples)
    x2 = rng.random(samples)
    phi2 = 2.0 * math.pi * rng.random(samples)
    theta1 = 2.0 * np.arccos(np.sqrt(x1))
    theta2 = 2.0 * np.arccos(np.sqrt(x2))

    values = np.broadcast_to(np.asarray(f(theta1, phi1, theta2, phi2), dtype=float), (samples,))
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(samples))
    return mean, stderr
