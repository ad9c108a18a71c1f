import numpy as np
import pytest
import scipy.integrate
import scipy.special

from deco import (
    KernelWeight,
    ModelParams,
    QuadratureConfig,
    QuadratureError,
    decay_kernel,
    gamma,
    gamma0,
    gamma0_of_phi,
    gamma_saturation,
    lambda_weight,
    phase_kernel,
)
from deco.kernels import clear_kernel_cache, weight_values

FLAT, PLUS, MINUS = KernelWeight.FLAT, KernelWeight.PLUS, KernelWeight.MINUS

# frozen closed-form reference values (independently re-derived by the
# adaptive-quadrature oracle tests below)
DECAY_FLAT_T2_COLD = 0.2690397534563842       # (t/4) * dawson(t/2) at t = 2
PHASE_FLAT_T2 = 0.16301233304332305           # (1/2)(sqrt(pi) t/4) e^(-t^2/4) at t = 2
PHASE_MAIN_T2 = 0.3260246660866461            # twice the previous
LAMBDA_PLUS_LARGE_S = 0.11077836568159474     # (1/4) * sqrt(pi)/4


def sinc_weight(w, omega, s):
    if w is FLAT:
        return np.ones_like(omega)
    term = np.sinc(omega * s / np.pi) if s > 0 else np.ones_like(omega)
    return 1.0 + term if w is PLUS else 1.0 - term


def quad_decay(w, t, alpha, beta, s):
    """Independent adaptive-quadrature oracle (QUADPACK)."""
    def f(om):
        return (om * np.exp(-om * om) * sinc_weight(w, om, s)
                * np.sin(0.5 * om * t) ** 2 / np.tanh(0.5 * beta * om))
    val, _ = scipy.integrate.quad(f, 0.0, 12.0, limit=400)
    return alpha * val


def quad_phase(w, t, alpha, s):
    def f(om):
        return om * np.exp(-om * om) * sinc_weight(w, om, s) * np.sin(om * t)
    val, _ = scipy.integrate.quad(f, 0.0, 12.0, limit=400)
    return 0.5 * alpha * val


class TestClosedForms:
    def test_decay_flat_zero_temperature_dawson(self):
        # oracle first: QUADPACK agrees with the Dawson closed form
        assert quad_decay(FLAT, 2.0, 1.0, 1e6, 0.0) == pytest.approx(DECAY_FLAT_T2_COLD, abs=1e-12)
        assert (2.0 / 4.0) * scipy.special.dawsn(1.0) == pytest.approx(DECAY_FLAT_T2_COLD, abs=1e-15)
        p = ModelParams(alpha=1.0, beta=1e6, s=0.0)
        assert decay_kernel(FLAT, 2.0, p) == pytest.approx(DECAY_FLAT_T2_COLD, rel=1e-10)

    def test_phase_flat_gaussian_moment(self):
        assert quad_phase(FLAT, 2.0, 1.0, 0.0) == pytest.approx(PHASE_FLAT_T2, abs=1e-12)
        p = ModelParams(alpha=1.0, beta=1.0, s=0.0)
        assert phase_kernel(FLAT, 2.0, p) == pytest.approx(PHASE_FLAT_T2, rel=1e-10)

    def test_main_text_phase_large_separation(self):
        p = ModelParams(alpha=1.0, beta=1.0, s=1e6)
        assert 2.0 * phase_kernel(PLUS, 2.0, p) == pytest.approx(PHASE_MAIN_T2, rel=1e-10)

    def test_phase_flat_closed_form_on_grid(self):
        p = ModelParams(alpha=1.0, beta=1.0, s=0.0)
        for t in np.arange(0.5, 10.5, 0.5):
            want = 0.5 * (np.sqrt(np.pi) * t / 4.0) * np.exp(-t * t / 4.0)
            assert phase_kernel(FLAT, t, p) == pytest.approx(want, rel=1e-8)


class TestDecayKernel:
    def test_zero_at_t0(self):
        p = ModelParams(alpha=1.3, beta=2.0, s=1.0)
        for w in (FLAT, PLUS, MINUS):
            assert decay_kernel(w, 0.0, p) == 0.0

    def test_plus_at_s0_doubles_flat(self):
        p = ModelParams(alpha=1.0, beta=2.0, s=0.0)
        d_plus = decay_kernel(PLUS, 1.7, p)
        d_flat = decay_kernel(FLAT, 1.7, p)
        assert d_plus == pytest.approx(2.0 * d_flat, rel=1e-13)

    def test_rejects_negative_time(self):
        with pytest.raises(ValueError):
            decay_kernel(FLAT, -0.1, ModelParams())

    def test_matches_adaptive_oracle(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            t = rng.uniform(0.2, 6.0)
            beta = rng.uniform(0.3, 20.0)
            s = rng.uniform(0.0, 4.0)
            alpha = rng.uniform(0.3, 2.0)
            p = ModelParams(alpha=alpha, beta=beta, s=s)
            want = quad_decay(PLUS, t, alpha, beta, s)
            assert decay_kernel(PLUS, t, p) == pytest.approx(want, rel=1e-7, abs=1e-11)


class TestGamma:
    def test_cold_s0_value(self):
        p = ModelParams(alpha=1.0, beta=1e6, s=0.0)
        assert gamma(2.0, p) == pytest.approx(2.0 * DECAY_FLAT_T2_COLD, rel=1e-9)

    def test_saturates_at_long_times(self):
        for beta, s in ((10.0, 1.0), (0.5, 2.0)):
            p = ModelParams(alpha=1.0, beta=beta, s=s)
            sat = gamma_saturation(PLUS, p)
            assert abs(gamma(30.0, p) - sat) < 1e-6


class TestGamma0:
    def test_zero_at_t0(self):
        assert gamma0(0.0, ModelParams(beta=2.0)) == 0.0

    def test_negligible_at_low_temperature(self):
        p = ModelParams(alpha=1.0, beta=20.0, omega0=1.0, s=1.0)
        for t in (0.3, 1.0, 2.0, 5.0):
            assert gamma0(t, p) < 1e-12

    def test_helper_collapses_to_log_tanh(self):
        beta_omega0 = np.arctanh(0.5)
        assert gamma0_of_phi(np.pi / 2.0, beta_omega0) == pytest.approx(np.log(2.0), rel=1e-12)

    def test_nonnegative(self):
        p = ModelParams(alpha=1.0, beta=0.3, omega0=1.0, s=0.5)
        for t in np.linspace(0.1, 8.0, 17):
            assert gamma0(t, p) >= 0.0

    def test_rejects_zero_splitting(self):
        with pytest.raises(ValueError):
            gamma0(1.0, ModelParams(omega0=0.0))


class TestLambdaWeight:
    def test_large_separation_value(self):
        p = ModelParams(alpha=1.0, beta=1.0, s=1e6)
        assert lambda_weight(PLUS, p) == pytest.approx(LAMBDA_PLUS_LARGE_S, rel=1e-10)

    def test_s0_doubles(self):
        p = ModelParams(alpha=1.0, beta=1.0, s=0.0)
        assert lambda_weight(PLUS, p) == pytest.approx(2.0 * LAMBDA_PLUS_LARGE_S, rel=1e-10)

    def test_minus_vanishes_at_s0(self):
        p = ModelParams(alpha=1.0, beta=1.0, s=0.0)
        assert lambda_weight(MINUS, p) == 0.0

    def test_flat_rejected(self):
        with pytest.raises(ValueError):
            lambda_weight(FLAT, ModelParams())


class TestGammaSaturation:
    def test_flat_cold(self):
        p = ModelParams(alpha=1.0, beta=1e6, s=0.0)
        assert gamma_saturation(FLAT, p) == pytest.approx(0.25, rel=1e-10)

    def test_plus_s0_cold(self):
        p = ModelParams(alpha=1.0, beta=1e6, s=0.0)
        assert gamma_saturation(PLUS, p) == pytest.approx(0.5, rel=1e-10)

    def test_decreases_with_separation(self):
        lo = gamma_saturation(PLUS, ModelParams(beta=10.0, s=0.5))
        hi = gamma_saturation(PLUS, ModelParams(beta=10.0, s=5.0))
        assert hi < lo


class TestInvariantsAndProperties:
    def test_kernels_vanish_at_t0_and_decay_nonnegative(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            p = ModelParams(alpha=rng.uniform(0.2, 2.0), beta=rng.uniform(0.2, 30.0),
                            s=rng.uniform(0.0, 6.0))
            w = (FLAT, PLUS, MINUS)[rng.integers(3)]
            t = rng.uniform(0.0, 10.0)
            assert decay_kernel(w, t, p) >= 0.0
            assert decay_kernel(w, 0.0, p) == 0.0
            assert phase_kernel(w, 0.0, p) == 0.0

    def test_linearity_identities(self):
        rng = np.random.default_rng(9)
        for _ in range(25):
            p = ModelParams(alpha=rng.uniform(0.2, 2.0), beta=rng.uniform(0.2, 30.0),
                            s=rng.uniform(0.05, 6.0))
            t = rng.uniform(0.05, 8.0)
            q = QuadratureConfig()
            tol = 2.0 * q.rel_tol
            d_sum = decay_kernel(PLUS, t, p, q) + decay_kernel(MINUS, t, p, q)
            d_flat = decay_kernel(FLAT, t, p, q)
            assert d_sum == pytest.approx(2.0 * d_flat, rel=tol, abs=1e-13)
            p_sum = phase_kernel(PLUS, t, p, q) + phase_kernel(MINUS, t, p, q)
            p_flat = phase_kernel(FLAT, t, p, q)
            assert p_sum == pytest.approx(2.0 * p_flat, rel=tol, abs=1e-13)
            lam_sum = lambda_weight(PLUS, p, q) + lambda_weight(MINUS, p, q)
            lam_flat = 0.25 * p.alpha * p.beta * np.sqrt(np.pi) / 4.0
            assert lam_sum == pytest.approx(2.0 * lam_flat, rel=tol, abs=1e-13)

    def test_decay_monotone_in_temperature(self):
        betas = (0.2, 0.5, 1.0, 3.0, 10.0, 50.0)
        for s in (0.0, 1.0, 3.0):
            for t in (0.5, 2.0, 6.0):
                vals = [decay_kernel(PLUS, t, ModelParams(beta=b, s=s)) for b in betas]
                assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))

    def test_phase_is_temperature_independent(self):
        for t in (0.7, 2.0, 5.0):
            cold = phase_kernel(PLUS, t, ModelParams(beta=100.0, s=1.0))
            hot = phase_kernel(PLUS, t, ModelParams(beta=0.1, s=1.0))
            assert abs(cold - hot) < 1e-12

    def test_phase_flat_bounded_by_closed_form(self):
        p = ModelParams(alpha=1.0, beta=1.0, s=0.0)
        q = QuadratureConfig()
        for t in np.linspace(0.1, 12.0, 40):
            bound = 0.5 * (np.sqrt(np.pi) * t / 4.0) * np.exp(-t * t / 4.0) + q.rel_tol
            assert abs(phase_kernel(FLAT, t, p, q)) <= bound

    def test_refinement_self_consistency(self):
        # doubling the baseline panel density changes nothing beyond rel_tol
        coarse = QuadratureConfig(min_nodes_per_period=10)
        fine = QuadratureConfig(min_nodes_per_period=20)
        p = ModelParams(alpha=1.0, beta=2.0, s=1.3)
        for t in (0.9, 4.1, 11.7):
            a = decay_kernel(PLUS, t, p, coarse)
            b = decay_kernel(PLUS, t, p, fine)
            assert a == pytest.approx(b, rel=coarse.rel_tol, abs=1e-13)

    def test_weight_range(self):
        rng = np.random.default_rng(4)
        omega = rng.uniform(0.0, 10.0, size=200)
        for s in (0.0, 0.3, 2.0, 70.0, 1e6):
            for w in (FLAT, PLUS, MINUS):
                vals = weight_values(w, omega, s)
                assert np.all(vals >= -1e-15)
                assert np.all(vals <= 2.0 + 1e-15)


class TestConfigValidation:
    def test_model_params_invariants(self):
        with pytest.raises(ValueError):
            ModelParams(alpha=-0.1)
        with pytest.raises(ValueError):
            ModelParams(beta=0.0)
        with pytest.raises(ValueError):
            ModelParams(omega0=-1.0)
        with pytest.raises(ValueError):
            ModelParams(s=-0.5)

    def test_quadrature_invariants(self):
        with pytest.raises(ValueError):
            QuadratureConfig(omega_max=4.0)
        with pytest.raises(ValueError):
            QuadratureConfig(rel_tol=1e-3)
        with pytest.raises(ValueError):
            QuadratureConfig(rel_tol=0.0)

    def test_nonconvergence_raises_with_achieved_tolerance(self, monkeypatch):
        import deco.kernels as kernels
        monkeypatch.setattr(kernels, "_MAX_REFINEMENTS", 1)
        clear_kernel_cache()
        with pytest.raises(QuadratureError) as err:
            decay_kernel(PLUS, 2.5, ModelParams(beta=2.0, s=1.0))
        assert err.value.achieved > 0.0
        clear_kernel_cache()
