"""Time-evolved reduced density matrix of two dephasing qubits in a shared bath.

Pure dephasing keeps the populations fixed; each off-diagonal entry of the
initial projector is multiplied by a complex dressing factor.  With a
correlated thermal preparation the dressing is a preparation-weighted average
of phase factors times a decay envelope; the weights carry the qubit Boltzmann
factors e^(-+ beta omega0) and the bath displacement exponents e^(lambda_+-).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import exp, inf, log, sqrt

import numpy as np

from .core import Amplitudes, concurrence, l1_coherence
from .kernels import (
    DEFAULT_QUADRATURE,
    KernelWeight,
    ModelParams,
    QuadratureConfig,
    decay_kernel,
    gamma,
    gamma0,
    gamma0_of_phi,
    lambda_weight,
    phase_kernel,
)

_GHZ_FAMILY_TOL = 1e-14
_COHERENCE_IDENTITY_TOL = 1e-10


class EvolutionMode(Enum):
    CORRELATED_THERMAL = "correlated"
    UNCORRELATED_THERMAL = "uncorrelated"


@dataclass(frozen=True)
class CoherenceFunctions:
    """The six complex dressing factors of the off-diagonal entries at one time.

    Ordered against the upper triangle: (1,2) phi, (1,3) zeta, (1,4) kappa,
    (2,3) kappa_bar, (2,4) zeta_bar, (3,4) phi_bar.  All six equal 1 at t = 0
    and have magnitude at most 1 at all times.
    """

    phi: complex
    zeta: complex
    kappa: complex
    kappa_bar: complex
    zeta_bar: complex
    phi_bar: complex

    def as_tuple(self) -> tuple[complex, ...]:
        return (self.phi, self.zeta, self.kappa, self.kappa_bar,
                self.zeta_bar, self.phi_bar)

    def magnitudes(self) -> np.ndarray:
        return np.abs(np.array(self.as_tuple()))


@dataclass(frozen=True)
class SeriesRow:
    t: float
    gamma: float
    gamma0: float
    phi: float
    concurrence: float
    l1_coherence: float


def _log_weights(probs: np.ndarray, beta_omega0: float,
                 lam_plus: float, lam_minus: float) -> np.ndarray:
    """Log preparation weights for the |00>, |01>, |10>, |11> sectors."""
    shifts = np.array([-beta_omega0 + lam_plus, lam_minus, lam_minus,
                       beta_omega0 + lam_plus])
    out = np.full(4, -inf)
    for i, p2 in enumerate(probs):
        if p2 > 0.0:
            out[i] = log(p2) + shifts[i]
    return out


def log_partition_zprime(psi: Amplitudes, p: ModelParams,
                         q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """log of the system-dependent part of the joint thermal partition function."""
    lw = _log_weights(psi.probabilities(), p.beta * p.omega0,
                      lambda_weight(KernelWeight.PLUS, p, q),
                      lambda_weight(KernelWeight.MINUS, p, q))
    m = lw.max()
    return float(m + np.log(np.exp(lw - m).sum()))


def partition_zprime(psi: Amplitudes, p: ModelParams,
                     q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """z' = (|a|^2 e^(-beta w0) + |d|^2 e^(beta w0)) e^(lambda_+) + (|b|^2+|c|^2) e^(lambda_-).

    Evaluated in the log domain, so intermediate Boltzmann factors never
    overflow; the result saturates to inf only when the value itself
    exceeds the float range (use log_partition_zprime then).
    """
    try:
        return exp(log_partition_zprime(psi, p, q))
    except OverflowError:
        return inf


def assemble_dressings(probs: np.ndarray, beta_omega0: float,
                       phi_plus: float, phi_minus: float, chi: float,
                       ising_phase: float, decay_single: float,
                       decay_super: float, decay_sub: float,
                       lam_plus: float, lam_minus: float) -> CoherenceFunctions:
    """Assemble the six dressing factors from phase and decay exponents.

    probs are the initial populations (|a|^2, |b|^2, |c|^2, |d|^2).
    phi_plus / phi_minus are the collective and relative phase kernels, chi
    the interference phase (zero after isotropic angular averaging),
    ising_phase the bath-induced qubit-qubit phase that acts on elements
    connecting the aligned (|00>, |11>) and anti-aligned (|01>, |10>)
    sectors.  decay_single damps the four single-flip elements, decay_super
    the superdecoherent |00><11| corner, decay_sub the subdecoherent
    |01><10| element.  lam_plus / lam_minus weight the preparation average.

    Weights are normalized in the log domain, so beta_omega0 and lambda
    exponents of order 10^3 are safe.
    """
    lw = _log_weights(np.asarray(probs, dtype=float), beta_omega0,
                      lam_plus, lam_minus)
    m = lw.max()
    w = np.exp(lw - m)
    weights = w / w.sum()

    pp, pm, ch, xi = phi_plus, phi_minus, chi, ising_phase

    def avg(thetas: tuple[float, float, float, float], decay: float) -> complex:
        phases = np.exp(1j * np.asarray(thetas))
        return complex(np.dot(weights, phases) * exp(-decay))

    return CoherenceFunctions(
        phi=avg((xi + pp, xi - pm, xi + pm - 2 * ch, xi - pp - 2 * ch), decay_single),
        zeta=avg((xi + pp, xi + pm + 2 * ch, xi - pm, xi - pp + 2 * ch), decay_single),
        kappa=avg((2 * pp, 2 * ch, -2 * ch, -2 * pp), decay_super),
        kappa_bar=avg((-2 * ch, 2 * pm, -2 * pm, 2 * ch), decay_sub),
        zeta_bar=avg((-xi + pp - 2 * ch, -xi + pm, -xi - pm - 2 * ch, -xi - pp), decay_single),
        phi_bar=avg((-xi + pp + 2 * ch, -xi - pm + 2 * ch, -xi + pm, -xi - pp), decay_single),
    )


def coherence_functions(t: float, psi: Amplitudes, p: ModelParams,
                        q: QuadratureConfig = DEFAULT_QUADRATURE) -> CoherenceFunctions:
    """Dressing factors for the correlated thermal preparation at time t.

    Continuum limit: the interference phase chi averages to zero over
    isotropic bath directions and the bath-induced qubit-qubit phase is
    dropped with it, so the four single-flip elements mix only the
    collective and relative phase kernels.
    """
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    dp = decay_kernel(KernelWeight.PLUS, t, p, q)
    dm = decay_kernel(KernelWeight.MINUS, t, p, q)
    return assemble_dressings(
        psi.probabilities(), p.beta * p.omega0,
        phi_plus=phase_kernel(KernelWeight.PLUS, t, p, q),
        phi_minus=phase_kernel(KernelWeight.MINUS, t, p, q),
        chi=0.0,
        ising_phase=0.0,
        # the halved sum equals the flat decay exactly and keeps the
        # dressing matrix positive semidefinite to round-off
        decay_single=0.5 * (dp + dm),
        decay_super=dp,
        decay_sub=dm,
        lam_plus=lambda_weight(KernelWeight.PLUS, p, q),
        lam_minus=lambda_weight(KernelWeight.MINUS, p, q),
    )


def uncorrelated_dressings(t: float, p: ModelParams,
                           q: QuadratureConfig = DEFAULT_QUADRATURE) -> CoherenceFunctions:
    """State-independent baseline dressings for an uncorrelated thermal bath.

    Defined as the beta * omega0 -> infinity limit of the correlated
    average: each element keeps a single pure phase and the same decay
    envelope, which makes the correlated/uncorrelated concurrence ratio on
    the diagonal family exactly exp(-gamma0).
    """
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    pp = phase_kernel(KernelWeight.PLUS, t, p, q)
    dp = decay_kernel(KernelWeight.PLUS, t, p, q)
    dm = decay_kernel(KernelWeight.MINUS, t, p, q)
    single = complex(np.exp(-1j * pp) * exp(-0.5 * (dp + dm)))
    return CoherenceFunctions(
        phi=single,
        zeta=single,
        kappa=complex(np.exp(-2j * pp) * exp(-dp)),
        kappa_bar=complex(exp(-dm)),
        zeta_bar=single,
        phi_bar=single,
    )


def matrix_from_dressings(psi: Amplitudes, cf: CoherenceFunctions) -> np.ndarray:
    """Hermitian 4x4 matrix with fixed populations and dressed off-diagonals."""
    v = psi.vector()
    rho = np.diag(psi.probabilities()).astype(complex)
    pairs = ((0, 1, cf.phi), (0, 2, cf.zeta), (0, 3, cf.kappa),
             (1, 2, cf.kappa_bar), (1, 3, cf.zeta_bar), (2, 3, cf.phi_bar))
    for i, j, f in pairs:
        val = v[i] * np.conj(v[j]) * f
        rho[i, j] = val
        rho[j, i] = np.conj(val)
    return rho


def density_matrix(t: float, psi: Amplitudes, p: ModelParams,
                   q: QuadratureConfig = DEFAULT_QUADRATURE,
                   mode: EvolutionMode = EvolutionMode.CORRELATED_THERMAL) -> np.ndarray:
    """Reduced two-qubit state at time t for the chosen preparation mode."""
    if mode is EvolutionMode.CORRELATED_THERMAL:
        cf = coherence_functions(t, psi, p, q)
    else:
        cf = uncorrelated_dressings(t, p, q)
    return matrix_from_dressings(psi, cf)


def closed_form_concurrence(t: float, pvalue: float, p: ModelParams,
                            q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Concurrence of sqrt(p)|00> + sqrt(1-p)|11> without building the matrix.

    C(t) = 2 sqrt(p(1-p)) sqrt(cos^2 Phi + w^2 sin^2 Phi) e^(-gamma(t)) with
    Phi = 2 P[Plus](t) and thermal weight w = tanh(beta omega0 +
    log((1-p)/p)/2).  At p = 1/2 the weight reduces to tanh(beta omega0) and
    the prefactor to exp(-gamma0(t)).
    """
    if not 0.0 <= pvalue <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {pvalue}")
    if pvalue == 0.0 or pvalue == 1.0:
        return 0.0
    phi = 2.0 * phase_kernel(KernelWeight.PLUS, t, p, q)
    shifted = p.beta * p.omega0 + 0.5 * log((1.0 - pvalue) / pvalue)
    suppression = exp(-gamma0_of_phi(phi, shifted))
    return 2.0 * sqrt(pvalue * (1.0 - pvalue)) * suppression * exp(-gamma(t, p, q))


def correlation_ratio(t: float, p: ModelParams,
                      q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """exp(-gamma0(t)): correlated over uncorrelated concurrence on the Bell state.

    Equals 1 identically in the low-temperature limit and returns to 1 at
    long times as the phase kernel dies out.
    """
    return exp(-gamma0(t, p, q))


def _is_ghz_family(probs: np.ndarray) -> bool:
    diag = probs[1] < _GHZ_FAMILY_TOL and probs[2] < _GHZ_FAMILY_TOL
    anti = probs[0] < _GHZ_FAMILY_TOL and probs[3] < _GHZ_FAMILY_TOL
    return diag or anti


def series(psi: Amplitudes, p: ModelParams, q: QuadratureConfig,
           mode: EvolutionMode, t_grid) -> list[SeriesRow]:
    """Evaluate kernels, concurrence, and coherence over a strictly increasing grid.

    On the two-amplitude families the l1 coherence equals the concurrence;
    this identity is checked on every row before it is emitted.
    """
    ts = [float(t) for t in t_grid]
    if not ts or ts[0] < 0.0:
        raise ValueError("t_grid must be nonempty with t[0] >= 0")
    if any(b <= a for a, b in zip(ts, ts[1:])):
        raise ValueError("t_grid must be strictly increasing")

    ghz = _is_ghz_family(psi.probabilities())
    rows = []
    for t in ts:
        rho = density_matrix(t, psi, p, q, mode)
        conc = concurrence(rho)
        coh = l1_coherence(rho)
        if ghz and abs(coh - conc) > _COHERENCE_IDENTITY_TOL:
            raise RuntimeError(
                f"coherence/concurrence identity violated at t={t}: "
                f"C={conc!r}, N={coh!r}"
            )
        rows.append(SeriesRow(
            t=t,
            gamma=gamma(t, p, q),
            gamma0=gamma0(t, p, q),
            phi=2.0 * phase_kernel(KernelWeight.PLUS, t, p, q),
            concurrence=conc,
            l1_coherence=coh,
        ))
    return rows
