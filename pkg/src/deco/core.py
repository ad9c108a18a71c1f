"""Two-qubit state representation, concurrence, and l1-norm coherence."""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

NORMALIZATION_TOL = 1e-12
HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
MIN_EIGENVALUE_FLOOR = -1e-9

# sigma_y (x) sigma_y in the ordered basis |00>, |01>, |10>, |11>
_SY_SY = np.array(
    [[0, 0, 0, -1],
     [0, 0, 1, 0],
     [0, 1, 0, 0],
     [-1, 0, 0, 0]],
    dtype=complex,
)


class NormalizationError(ValueError):
    """Amplitudes do not carry unit total probability."""


class ValidationError(ValueError):
    """Matrix fails density-matrix validation."""


@dataclass(frozen=True)
class Amplitudes:
    """Pure two-qubit state a|00> + b|01> + c|10> + d|11>, normalized."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self) -> None:
        norm2 = abs(self.a) ** 2 + abs(self.b) ** 2 + abs(self.c) ** 2 + abs(self.d) ** 2
        if abs(norm2 - 1.0) > NORMALIZATION_TOL:
            raise NormalizationError(
                f"amplitudes have squared norm {norm2!r}, expected 1 within {NORMALIZATION_TOL}"
            )

    @classmethod
    def normalized(cls, a: complex, b: complex, c: complex, d: complex) -> "Amplitudes":
        """Build from unnormalized amplitudes by rescaling."""
        norm = sqrt(abs(a) ** 2 + abs(b) ** 2 + abs(c) ** 2 + abs(d) ** 2)
        if norm == 0.0:
            raise NormalizationError("cannot normalize the zero vector")
        return cls(a / norm, b / norm, c / norm, d / norm)

    @classmethod
    def diag_family(cls, p: float) -> "Amplitudes":
        """sqrt(p)|00> + sqrt(1-p)|11>."""
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {p}")
        return cls(sqrt(p), 0.0, 0.0, sqrt(1.0 - p))

    @classmethod
    def anti_family(cls, p: float) -> "Amplitudes":
        """sqrt(p)|01> + sqrt(1-p)|10>."""
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {p}")
        return cls(0.0, sqrt(p), sqrt(1.0 - p), 0.0)

    @classmethod
    def bell(cls) -> "Amplitudes":
        return cls.diag_family(0.5)

    def vector(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c, self.d], dtype=complex)

    def probabilities(self) -> np.ndarray:
        v = self.vector()
        return (v.conj() * v).real


@dataclass(frozen=True)
class ValidationReport:
    """Residuals of the density-matrix invariants, with pass/fail flags."""

    hermiticity_residual: float
    trace_residual: float
    min_eigenvalue: float

    @property
    def hermitian_ok(self) -> bool:
        return self.hermiticity_residual <= HERMITICITY_TOL

    @property
    def trace_ok(self) -> bool:
        return self.trace_residual <= TRACE_TOL

    @property
    def positive_ok(self) -> bool:
        return self.min_eigenvalue >= MIN_EIGENVALUE_FLOOR

    @property
    def ok(self) -> bool:
        return self.hermitian_ok and self.trace_ok and self.positive_ok


def pure_state_density(psi: Amplitudes) -> np.ndarray:
    """Rank-1 projector |psi><psi| as a 4x4 complex matrix."""
    v = psi.vector()
    return np.outer(v, v.conj())


def validate(rho: np.ndarray) -> ValidationReport:
    """Report Hermiticity, trace, and positivity residuals of a 4x4 matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValidationError(f"expected a 4x4 matrix, got shape {rho.shape}")
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    tr = float(abs(np.trace(rho) - 1.0))
    # eigenvalues of the Hermitian part; the Hermiticity residual is reported separately
    eigs = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    return ValidationReport(herm, tr, float(eigs.min()))


def require_valid(rho: np.ndarray) -> np.ndarray:
    """Validate and return rho, raising ValidationError on any violated invariant."""
    rho = np.asarray(rho, dtype=complex)
    report = validate(rho)
    if not report.ok:
        raise ValidationError(
            "invalid density matrix: "
            f"hermiticity residual {report.hermiticity_residual:.3e}, "
            f"trace residual {report.trace_residual:.3e}, "
            f"min eigenvalue {report.min_eigenvalue:.3e}"
        )
    return rho


def _spin_flipped(rho: np.ndarray) -> np.ndarray:
    return _SY_SY @ rho.conj() @ _SY_SY


def _sqrt_psd(rho: np.ndarray) -> np.ndarray:
    evals, vecs = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    # eigenvalues at round-off scale are numerically zero; keeping them would
    # leak sqrt(eps)-sized noise into the root
    cut = 16.0 * np.finfo(float).eps * max(float(evals.max()), 0.0)
    evals = np.where(evals < cut, 0.0, evals)
    return (vecs * np.sqrt(evals)) @ vecs.conj().T


def concurrence(rho: np.ndarray) -> float:
    """Two-qubit concurrence, normalized so a Bell state gives exactly 1.

    C = max(0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)) with l_i the
    descending eigenvalues of rho @ rho_tilde, rho_tilde the spin-flipped
    conjugate.  Evaluated through the equivalent Hermitian form: the
    sqrt(l_i) are the singular values of sqrt(rho_tilde) sqrt(rho), which
    avoids the square-root noise amplification of near-zero eigenvalues.
    """
    rho = require_valid(rho)
    product = _sqrt_psd(_spin_flipped(rho)) @ _sqrt_psd(rho)
    roots = np.linalg.svd(product, compute_uv=False)
    c = roots[0] - roots[1] - roots[2] - roots[3]
    return float(min(max(c, 0.0), 1.0))


def concurrence_eigvals(rho: np.ndarray) -> float:
    """Concurrence from a general complex eigensolver applied to rho @ rho_tilde.

    Cross-check route: agrees with concurrence() up to the square-root
    amplification of eigenvalue round-off (about 1e-8 near rank deficiency).
    """
    rho = require_valid(rho)
    evals = np.linalg.eigvals(rho @ _spin_flipped(rho))
    if float(np.max(np.abs(evals.imag))) > 1e-10:
        raise ValidationError("eigenvalues of rho @ rho_tilde are not numerically real")
    lam = np.sort(np.clip(evals.real, 0.0, None))[::-1]
    roots = np.sqrt(lam)
    c = roots[0] - roots[1] - roots[2] - roots[3]
    return float(min(max(c, 0.0), 1.0))


def l1_coherence(rho: np.ndarray) -> float:
    """Sum of the absolute values of all 12 off-diagonal entries."""
    rho = require_valid(rho)
    mags = np.abs(rho)
    return float(mags.sum() - np.trace(mags))
