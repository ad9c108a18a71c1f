"""Brute-force verification path on explicit finite-mode baths.

Two independent evaluations of the same reduced dynamics:

* closed-form discrete sums fed into the shared dressing algebra, and
* full diagonalization of the joint Hamiltonian on a truncated Fock space,
  including the correlated thermal preparation.

Agreement between the two validates every phase, decay, and thermal-weight
expression end to end.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import cos, exp, lgamma, log, sin
from typing import NamedTuple

import numpy as np

from .core import Amplitudes
from .dynamics import assemble_dressings, matrix_from_dressings

HILBERT_DIM_LIMIT = 16384
TRUNCATION_GATE = 1e-8


class TruncationError(RuntimeError):
    """Fock truncation too small for a faithful oracle run."""

    def __init__(self, indicator: float):
        super().__init__(
            f"truncation indicator {indicator:.3e} exceeds the gate {TRUNCATION_GATE:.0e}"
        )
        self.indicator = indicator


@dataclass(frozen=True)
class DiscreteMode:
    """One bath mode: frequency, coupling amplitude, and the two qubit phases k.r_i."""

    omega: float
    g: complex
    phase1: float
    phase2: float

    def __post_init__(self) -> None:
        if self.omega <= 0.0:
            raise ValueError(f"mode frequency must be > 0, got {self.omega}")

    @property
    def delta(self) -> float:
        return self.phase1 - self.phase2


@dataclass(frozen=True)
class DiscreteBath:
    """Finite list of modes with a per-mode Fock truncation 0..n_max."""

    modes: tuple[DiscreteMode, ...]
    n_max: int

    def __post_init__(self) -> None:
        if not 1 <= len(self.modes) <= 4:
            raise ValueError(f"bath must hold 1..4 modes, got {len(self.modes)}")
        if self.n_max < 2:
            raise ValueError(f"n_max must be >= 2, got {self.n_max}")
        if self.dimension > HILBERT_DIM_LIMIT:
            raise ValueError(
                f"total Hilbert dimension {self.dimension} exceeds {HILBERT_DIM_LIMIT}"
            )

    @property
    def dimension(self) -> int:
        return 4 * (self.n_max + 1) ** len(self.modes)


class DiscreteSums(NamedTuple):
    """Exact finite-mode sums feeding the element algebra."""

    phi_plus: float
    phi_minus: float
    chi: float
    lam_plus: float
    lam_minus: float
    d_flat: float
    d_plus: float
    d_minus: float


def discrete_sums(bath: DiscreteBath, t: float, beta: float) -> DiscreteSums:
    """Closed-form mode sums: phases, preparation exponents, and decay sums.

    phi_+- = 4 sum |g|^2 sin(wt) (1 +- cos D) / w^2
    chi    = 4 sum |g|^2 sin(D) (1 - cos(wt)) / w^2
    lam_+- = 2 beta sum |g|^2 (1 +- cos D) / w
    D_w    = 4 sum |g|^2 w_tilde (1 - cos(wt)) coth(beta w / 2) / w^2
    with D = phase1 - phase2 and w_tilde in {1, 1 +- cos D}.
    """
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    pp = pm = ch = lp = lm = df = dp = dm = 0.0
    for mode in bath.modes:
        g2 = abs(mode.g) ** 2
        w = mode.omega
        cd = cos(mode.delta)
        sd = sin(mode.delta)
        swt = sin(w * t)
        one_minus_cwt = 1.0 - cos(w * t)
        coth = 1.0 / np.tanh(0.5 * beta * w)
        pp += 4.0 * g2 * swt * (1.0 + cd) / w**2
        pm += 4.0 * g2 * swt * (1.0 - cd) / w**2
        ch += 4.0 * g2 * sd * one_minus_cwt / w**2
        lp += 2.0 * beta * g2 * (1.0 + cd) / w
        lm += 2.0 * beta * g2 * (1.0 - cd) / w
        decay = 4.0 * g2 * one_minus_cwt * coth / w**2
        df += decay
        dp += decay * (1.0 + cd)
        dm += decay * (1.0 - cd)
    return DiscreteSums(pp, pm, ch, lp, lm, df, dp, dm)


def ising_phase_sum(bath: DiscreteBath, t: float) -> float:
    """Bath-induced qubit-qubit phase 4 sum |g|^2 cos(D) (wt - sin(wt)) / w^2.

    Phase difference between the aligned and anti-aligned qubit sectors; it
    dresses the four single-flip off-diagonal elements.
    """
    return sum(
        4.0 * abs(m.g) ** 2 * cos(m.delta) * (m.omega * t - sin(m.omega * t)) / m.omega**2
        for m in bath.modes
    )


def discrete_density_matrix(bath: DiscreteBath, t: float, psi: Amplitudes,
                            beta: float, omega0: float) -> np.ndarray:
    """Reduced state from the closed-form sums and the shared dressing algebra.

    The interference phase chi and the induced qubit-qubit phase are kept
    (no angular averaging here), and the double-flip decays carry twice the
    weighted sums: the |00>-|11> sector pair displaces the bath with twice
    the collective amplitude.
    """
    sums = discrete_sums(bath, t, beta)
    cf = assemble_dressings(
        psi.probabilities(), beta * omega0,
        phi_plus=sums.phi_plus,
        phi_minus=sums.phi_minus,
        chi=sums.chi,
        ising_phase=ising_phase_sum(bath, t),
        decay_single=sums.d_flat,
        decay_super=2.0 * sums.d_plus,
        decay_sub=2.0 * sums.d_minus,
        lam_plus=sums.lam_plus,
        lam_minus=sums.lam_minus,
    )
    return matrix_from_dressings(psi, cf)


def _log_laguerre_negative(n: int, x: float) -> float:
    """log L_n(-x) for x >= 0; all series terms are positive."""
    if x == 0.0:
        return 0.0
    logx = log(x)
    log_nfac = lgamma(n + 1)
    terms = [log_nfac - lgamma(k + 1) - lgamma(n - k + 1) + k * logx - lgamma(k + 1)
             for k in range(n + 1)]
    top = max(terms)
    return top + log(sum(exp(t - top) for t in terms))


def truncation_indicator(bath: DiscreteBath, beta: float) -> float:
    """Worst-mode population of the top Fock level, thermal plus displacement.

    Uses the exact displaced-thermal occupation distribution with
    displacement proxy 2|g|/omega, evaluated in the log domain; callers
    require the result below 1e-8 before trusting a Fock run.
    """
    worst = 0.0
    n = bath.n_max
    for mode in bath.modes:
        arg = beta * mode.omega
        nbar = 0.0 if arg > 700.0 else 1.0 / np.expm1(arg)
        delta2 = (2.0 * abs(mode.g) / mode.omega) ** 2
        if nbar <= 0.0:
            # cold enough that expm1 overflowed: pure displaced-vacuum tail
            p = 0.0 if delta2 == 0.0 else exp(-delta2 + n * log(delta2) - lgamma(n + 1))
        else:
            logp = (n * (log(nbar) - np.log1p(nbar)) - np.log1p(nbar)
                    - delta2 / (nbar + 1.0)
                    + _log_laguerre_negative(n, delta2 / (nbar * (nbar + 1.0))))
            p = exp(logp) if logp > -745.0 else 0.0
        worst = max(worst, float(p))
    return worst


def _mode_operator(op: np.ndarray, index: int, count: int, levels: int) -> np.ndarray:
    out = np.eye(1)
    eye = np.eye(levels)
    for j in range(count):
        out = np.kron(out, op if j == index else eye)
    return out


def _build_hamiltonian(bath: DiscreteBath, omega0: float) -> tuple[np.ndarray, np.ndarray]:
    """Dense joint Hamiltonian and the diagonal of the qubit part."""
    levels = bath.n_max + 1
    count = len(bath.modes)
    lower = np.diag(np.sqrt(np.arange(1, levels)), 1)
    nb = levels**count

    sz = np.array([1.0, -1.0])
    s1 = np.repeat(sz, 2)           # sigma_z of qubit 1 on the 4-level diagonal
    s2 = np.tile(sz, 2)             # sigma_z of qubit 2
    hs_diag = 0.5 * omega0 * (s1 + s2)

    h = np.kron(np.diag(hs_diag), np.eye(nb)).astype(complex)
    for k, mode in enumerate(bath.modes):
        b = _mode_operator(lower, k, count, levels)
        h += mode.omega * np.kron(np.eye(4), b.conj().T @ b)
        for s_diag, phase in ((s1, mode.phase1), (s2, mode.phase2)):
            g = mode.g * np.exp(-1j * phase)
            coupling = g * b + np.conj(g) * b.conj().T
            h += np.kron(np.diag(s_diag), coupling)
    return h, hs_diag


def fock_evolution(bath: DiscreteBath, psi: Amplitudes, beta: float,
                   omega0: float, times) -> list[np.ndarray]:
    """Interaction-picture reduced states at the requested times.

    One Hermitian eigendecomposition serves the thermal preparation and
    every propagation time.  The preparation projects the joint Gibbs state
    onto psi, the evolution is exact on the truncated space, and the final
    rotation by the qubit free evolution moves the result to the interaction
    picture (the bath free rotation drops under the partial trace).
    """
    indicator = truncation_indicator(bath, beta)
    if indicator >= TRUNCATION_GATE:
        raise TruncationError(indicator)

    h, hs_diag = _build_hamiltonian(bath, omega0)
    nb = h.shape[0] // 4
    evals, vecs = np.linalg.eigh(h)

    # e^(-beta (H - E0)); the shift cancels in the normalized preparation
    gibbs = (vecs * np.exp(-beta * (evals - evals.min()))) @ vecs.conj().T
    v = psi.vector()
    rho_bath = np.einsum("a,aibj,b->ij", v.conj(), gibbs.reshape(4, nb, 4, nb), v)
    rho_bath /= np.trace(rho_bath)
    rho0 = np.kron(np.outer(v, v.conj()), rho_bath)

    out = []
    for t in times:
        propagator = (vecs * np.exp(-1j * evals * float(t))) @ vecs.conj().T
        rho_t = propagator @ rho0 @ propagator.conj().T
        reduced = np.einsum("aibi->ab", rho_t.reshape(4, nb, 4, nb))
        rotation = np.exp(1j * hs_diag * float(t))
        out.append(reduced * np.outer(rotation, rotation.conj()))
    return out


def fock_oracle(bath: DiscreteBath, t: float, psi: Amplitudes,
                beta: float, omega0: float) -> np.ndarray:
    """Single-time Fock-space oracle; see fock_evolution."""
    return fock_evolution(bath, psi, beta, omega0, [t])[0]


def compare(a: np.ndarray, b: np.ndarray) -> float:
    """Maximum entrywise absolute deviation."""
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))
