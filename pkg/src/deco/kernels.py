"""Continuum bath kernels over the Gaussian-cutoff ohmic spectral density.

All quantities are dimensionless: frequencies in units of the bath cutoff,
times in units of the inverse cutoff.  The spectral weight is
omega * exp(-omega^2), angularly averaged over isotropic 3D modes, which turns
the two-qubit interference factor 1 +- cos(k.L) into the weight
1 +- sinc(omega*s) with s the separation timescale.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from math import ceil, inf, pi

import numpy as np

#: separation timescale at or above which the sinc weight is dropped
#: (bounded by 1/(omega*s) < 1e-4 of the remaining integrand weight)
SINC_DROP_THRESHOLD = 1e5

_GL_ORDER = 16
_MAX_REFINEMENTS = 12


def _legendre_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights in extended precision.

    float64 seeds are polished with Newton steps on the Legendre recurrence;
    extended-precision nodes matter for oscillatory integrals whose value
    sits many orders below the L1 mass of the integrand.
    """
    x = np.polynomial.legendre.leggauss(n)[0].astype(np.longdouble)
    for _ in range(3):
        p_prev = np.ones_like(x)
        p = x.copy()
        for k in range(2, n + 1):
            p, p_prev = ((2 * k - 1) * x * p - (k - 1) * p_prev) / k, p
        dp = n * (x * p - p_prev) / (x * x - 1.0)
        x = x - p / dp
    p_prev = np.ones_like(x)
    p = x.copy()
    for k in range(2, n + 1):
        p, p_prev = ((2 * k - 1) * x * p - (k - 1) * p_prev) / k, p
    dp = n * (x * p - p_prev) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    return x, w


_GL_NODES_LD, _GL_WEIGHTS_LD = _legendre_rule(_GL_ORDER)
_GL_NODES = _GL_NODES_LD.astype(float)
_GL_WEIGHTS = _GL_WEIGHTS_LD.astype(float)


class KernelWeight(Enum):
    """Interference weight w(omega): 1, 1 + sinc(omega s), or 1 - sinc(omega s)."""

    FLAT = "flat"
    PLUS = "plus"
    MINUS = "minus"


class QuadratureError(RuntimeError):
    """Quadrature refinement did not reach the requested tolerance."""

    def __init__(self, message: str, achieved: float):
        super().__init__(f"{message} (achieved relative change {achieved:.3e})")
        self.achieved = achieved


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless physical parameters.

    alpha: effective coupling strength scaling every kernel linearly
        (alpha = 0 is the decoupled limit, all kernels vanish).
    beta: inverse temperature in cutoff units.
    omega0: qubit splitting in cutoff units.
    s: bath-mediated qubit separation timescale in inverse-cutoff units.
    """

    alpha: float = 1.0
    beta: float = 1.0
    omega0: float = 1.0
    s: float = 1.0

    def __post_init__(self) -> None:
        if self.alpha < 0.0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if self.beta <= 0.0:
            raise ValueError(f"beta must be > 0, got {self.beta}")
        if self.omega0 < 0.0:
            raise ValueError(f"omega0 must be >= 0, got {self.omega0}")
        if self.s < 0.0:
            raise ValueError(f"s must be >= 0, got {self.s}")


@dataclass(frozen=True)
class QuadratureConfig:
    """Controls for the semi-infinite frequency integrals.

    omega_max >= 6 keeps the Gaussian tail below 3e-16; rel_tol is the
    refinement agreement target; min_nodes_per_period caps the panel width
    against the fastest oscillation max(t, s).
    """

    omega_max: float = 8.0
    rel_tol: float = 1e-9
    min_nodes_per_period: int = 10

    def __post_init__(self) -> None:
        if self.omega_max < 6.0:
            raise ValueError(f"omega_max must be >= 6, got {self.omega_max}")
        if not 0.0 < self.rel_tol <= 1e-4:
            raise ValueError(f"rel_tol must lie in (0, 1e-4], got {self.rel_tol}")
        if self.min_nodes_per_period < 2:
            raise ValueError(
                f"min_nodes_per_period must be >= 2, got {self.min_nodes_per_period}"
            )


DEFAULT_QUADRATURE = QuadratureConfig()


def _sinc_term(omega: np.ndarray, s: float) -> np.ndarray | float:
    if s == 0.0:
        return 1.0
    if s >= SINC_DROP_THRESHOLD:
        return 0.0
    return np.sinc(omega * (s / pi))


def weight_values(w: KernelWeight, omega: np.ndarray, s: float) -> np.ndarray:
    """Evaluate the interference weight w(omega); always within [0, 2]."""
    omega = np.asarray(omega)
    if omega.dtype.kind != "f":
        omega = omega.astype(float)
    base = np.ones_like(omega)
    if w is KernelWeight.FLAT:
        return base
    term = _sinc_term(omega, s)
    return base + term if w is KernelWeight.PLUS else base - term


def _oscillation_scale(t: float, s: float) -> float:
    s_eff = s if 0.0 < s < SINC_DROP_THRESHOLD else 0.0
    return max(t, s_eff, 1.0)


def _integrate(integrand, q: QuadratureConfig, oscillation: float,
               extended: bool = False) -> float:
    """Composite Gauss-Legendre on [0, omega_max] with global panel halving.

    Converged when two successive refinement levels agree to rel_tol
    (relative, with an absolute floor tied to the L1 size of the integrand).
    With ``extended`` the sum runs in longdouble, needed where heavy
    oscillatory cancellation pushes the value far below the L1 mass.
    """
    nodes = _GL_NODES_LD if extended else _GL_NODES
    base_weights = _GL_WEIGHTS_LD if extended else _GL_WEIGHTS
    dtype = np.longdouble if extended else np.float64
    eps = float(np.finfo(dtype).eps)

    width_cap = 2.0 * pi / (q.min_nodes_per_period * max(oscillation, 1.0))
    panels = max(4, ceil(q.omega_max / width_cap))
    prev = None
    achieved = inf
    for _ in range(_MAX_REFINEMENTS):
        edges = np.linspace(dtype(0.0), dtype(q.omega_max), panels + 1, dtype=dtype)
        half = dtype(0.5) * (edges[1] - edges[0])
        centers = dtype(0.5) * (edges[:-1] + edges[1:])
        x = (centers[:, None] + half * nodes[None, :]).ravel()
        wts = np.tile(base_weights * half, panels)
        fx = integrand(x)
        val = float(fx @ wts)
        scale = float(np.abs(fx) @ wts)
        if prev is not None:
            # absolute floor: round-off plateau of the panel sums
            floor = 16.0 * eps * scale + 1e-300
            achieved = abs(val - prev) / max(abs(val), floor)
            if abs(val - prev) <= q.rel_tol * abs(val) + floor:
                return val
        prev = val
        panels *= 2
    raise QuadratureError("frequency integral did not converge", achieved)


def _coth(x: np.ndarray) -> np.ndarray:
    # safe for all x > 0: tanh saturates at 1, and 1/tanh(x) -> 1/x as x -> 0
    return 1.0 / np.tanh(x)


@lru_cache(maxsize=262144)
def _decay_cached(w: KernelWeight, t: float, p: ModelParams, q: QuadratureConfig) -> float:
    if p.alpha == 0.0 or t == 0.0:
        return 0.0

    def f(om):
        return (om * np.exp(-om * om) * weight_values(w, om, p.s)
                * np.sin(0.5 * om * t) ** 2 * _coth(0.5 * p.beta * om))

    return p.alpha * _integrate(f, q, _oscillation_scale(t, p.s))


@lru_cache(maxsize=262144)
def _phase_cached(w: KernelWeight, t: float, p: ModelParams, q: QuadratureConfig) -> float:
    if p.alpha == 0.0 or t == 0.0:
        return 0.0

    def f(om):
        return om * np.exp(-om * om) * weight_values(w, om, p.s) * np.sin(om * t)

    # extended precision: the Gaussian suppression e^(-t^2/4) of the result
    # sits far below the integrand's L1 mass at large t
    return 0.5 * p.alpha * _integrate(f, q, _oscillation_scale(t, p.s), extended=True)


@lru_cache(maxsize=65536)
def _lambda_cached(w: KernelWeight, p: ModelParams, q: QuadratureConfig) -> float:
    if p.alpha == 0.0:
        return 0.0

    def f(om):
        return om * om * np.exp(-om * om) * weight_values(w, om, p.s)

    return 0.25 * p.alpha * p.beta * _integrate(f, q, _oscillation_scale(0.0, p.s))


@lru_cache(maxsize=65536)
def _saturation_cached(w: KernelWeight, p: ModelParams, q: QuadratureConfig) -> float:
    if p.alpha == 0.0:
        return 0.0

    def f(om):
        return (om * np.exp(-om * om) * weight_values(w, om, p.s)
                * _coth(0.5 * p.beta * om))

    return 0.5 * p.alpha * _integrate(f, q, _oscillation_scale(0.0, p.s))


def decay_kernel(w: KernelWeight, t: float, p: ModelParams,
                 q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Decay exponent D[w](t) = alpha * int_0^inf w e^(-w^2) W(w) sin^2(wt/2) coth(beta w/2) dw.

    Nonnegative, vanishing at t = 0; the omega -> 0 endpoint is finite
    because omega * coth(beta omega / 2) -> 2 / beta.
    """
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    return _decay_cached(w, float(t), p, q)


def phase_kernel(w: KernelWeight, t: float, p: ModelParams,
                 q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Phase kernel P[w](t) = (alpha/2) * int_0^inf w e^(-w^2) W(w) sin(wt) dw.

    Temperature independent.  The collective dephasing phase of the main
    dynamics is 2 * P[Plus](t).
    """
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    return _phase_cached(w, float(t), p, q)


def lambda_weight(w: KernelWeight, p: ModelParams,
                  q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Thermal preparation exponent lambda_+- = (alpha beta / 4) * int w^2 e^(-w^2) (1 +- sinc(ws)) dw."""
    if w is KernelWeight.FLAT:
        raise ValueError("lambda_weight is defined for the Plus and Minus weights only")
    return _lambda_cached(w, p, q)


def gamma(t: float, p: ModelParams, q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Collective decoherence exponent, alias for decay_kernel with the Plus weight."""
    return decay_kernel(KernelWeight.PLUS, t, p, q)


def gamma0_of_phi(phi: float, beta_omega0: float) -> float:
    """Preparation-correlation exponent -0.5 * log(cos^2 phi + sin^2 phi * tanh^2(beta omega0)).

    Stable at large beta_omega0 (returns exactly 0 once sech^2 underflows).
    """
    x = abs(beta_omega0)
    emx = np.exp(-x)
    sech = 2.0 * emx / (1.0 + emx * emx)
    return float(-0.5 * np.log1p(-np.sin(phi) ** 2 * sech * sech))


def gamma0(t: float, p: ModelParams, q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Decoherence exponent contributed by the correlated thermal preparation.

    Vanishes at t = 0 and decays to zero with the phase kernel; bounded by
    2 * exp(-2 beta omega0), hence negligible at low temperature.
    """
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    if p.beta * p.omega0 <= 0.0:
        raise ValueError("gamma0 requires beta * omega0 > 0")
    phi = 2.0 * phase_kernel(KernelWeight.PLUS, t, p, q)
    return gamma0_of_phi(phi, p.beta * p.omega0)


def gamma_saturation(w: KernelWeight, p: ModelParams,
                     q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Long-time limit of decay_kernel: sin^2 replaced by its mean 1/2."""
    return _saturation_cached(w, p, q)


def clear_kernel_cache() -> None:
    """Drop all memoized kernel values (mainly for benchmarking and tests)."""
    _decay_cached.cache_clear()
    _phase_cached.cache_clear()
    _lambda_cached.cache_clear()
    _saturation_cached.cache_clear()
