"""Weight recipes, square-free expansion, moments and the diagonal ratio."""

import math
import warnings

import numpy as np
import pytest

from extrema import resonator
from extrema.lfunc import dirichlet_spec, euler_roots_spec, zeta_spec
from extrema.primes import sieve_primes
from extrema.resonator import (
    DegenerateWindowError,
    SmoothingBump,
    bump,
    diagonal_ratio,
    diagonal_ratio_factored,
    expand,
    flat_recipe,
    growth_constant,
    moment1,
    plan_weights,
    predicted_lower,
    resonator_power,
    theta_exponent,
)

ZETA = zeta_spec()


def random_spec(rng):
    kind = rng.integers(0, 3)
    if kind == 0:
        return ZETA
    if kind == 1:
        return dirichlet_spec(4, 1)
    roots = {}
    for p in sieve_primes(300):
        z = rng.uniform(0.2, 1.0, 1)[0] * np.exp(2j * np.pi * rng.uniform())
        roots[int(p)] = (complex(z),)
    return euler_roots_spec("rand", roots, m=1, degree_dL=1, kappa=1)


class TestPlanWeights:
    def test_example_constants(self):
        # frozen closed forms: c = 3^(2/3), ell = 0.5 c^(1/2) * 20
        rec = plan_weights(ZETA, 0.75, round(math.e**20))
        assert rec.c == pytest.approx(2.0800838230519041, abs=1e-10)
        assert rec.ell == pytest.approx(14.422495703074084, rel=1e-4)

    def test_half_branch_has_no_c(self):
        rec = plan_weights(ZETA, 0.5, 10**5)
        assert rec.c is None
        p = 31.0
        assert rec.weight(p) == pytest.approx(
            math.sqrt(rec.ell) / (math.sqrt(p) * math.log(p))
        )

    def test_weight_formula_sigma_above_half(self):
        rec = plan_weights(ZETA, 0.75, 10**5)
        p = float(sieve_primes(int(rec.support_hi))[-1])
        assert rec.weight(p) == pytest.approx((rec.ell / p) ** 0.75)
        assert rec.weight(rec.support_lo - 1) == 0.0
        assert rec.weight(rec.support_hi + 1) == 0.0

    def test_degenerate_near_half(self):
        # just above 1/2 the derived ell collapses below e at desk N
        with pytest.raises(DegenerateWindowError):
            plan_weights(ZETA, 0.51, 10**4)

    def test_requires_desk_minimum(self):
        with pytest.raises(ValueError):
            plan_weights(ZETA, 0.75, 999)

    def test_window_ratio_reaches_four_asymptotically(self):
        # the ratio dips below 4 for some desk N and recovers for huge N
        rec = plan_weights(ZETA, 0.75, 10**130)
        assert rec.window_ratio >= 4.0
        rec_half = plan_weights(ZETA, 0.5, 10**60)
        assert rec_half.window_ratio >= 4.0

    def test_weight_bound_on_support(self):
        # f(p)^2 |a(p)|^2 <= c^(-2 sigma) m^2 over all support primes
        for sigma in (0.6, 0.75, 0.9):
            rec = plan_weights(ZETA, sigma, 10**5)
            for p in sieve_primes(int(rec.support_hi)):
                if p < rec.support_lo:
                    continue
                f2 = rec.weight(float(p)) ** 2
                assert f2 <= rec.c ** (-2 * sigma) + 1e-12


class TestExpand:
    def test_squarefree_keys_23(self):
        plan = expand(ZETA, flat_recipe(2, 3), 10)
        assert list(plan.ns) == [1, 2, 3, 6]

    def test_single_prime_below_window(self):
        plan = expand(ZETA, flat_recipe(7, 7), 5)
        assert list(plan.ns) == [1]

    def test_hand_enumeration_235(self):
        plan = expand(ZETA, flat_recipe(2, 5), 30)
        assert list(plan.ns) == [1, 2, 3, 5, 6, 10, 15, 30]
        assert np.allclose(plan.rs, 1.0)

    def test_empty_support_errors(self):
        with pytest.raises(ValueError, match="empty support"):
            expand(ZETA, flat_recipe(24, 28), 100)

    def test_truncation_keeps_largest(self):
        plan = expand(ZETA, flat_recipe(2, 7), 210, term_budget=5)
        assert plan.truncated
        assert len(plan.ns) == 5
        assert 1 in plan.ns  # |r| ties resolve toward smaller n

    def test_multiplicative_r_sampled(self):
        rng = np.random.default_rng(3)
        spec = random_spec(rng)
        rec = plan_weights(spec, 0.7, 10**4)
        plan = expand(spec, rec, 10**4)
        from extrema.lfunc import coeff

        terms = plan.terms
        for n, r in list(terms.items())[:50]:
            expect = 1.0 + 0.0j
            m = n
            for p in plan.support_primes:
                if m % int(p) == 0:
                    expect *= coeff(spec, int(p)) * rec.weight(float(p))
                    m //= int(p)
            if m == 1:
                assert r == pytest.approx(expect, rel=1e-12, abs=1e-12)

    def test_weights_nonnegative(self):
        rec = plan_weights(ZETA, 0.75, 10**4)
        ps = sieve_primes(int(rec.support_hi))
        assert all(rec.weight(float(p)) >= 0 for p in ps)


class TestBump:
    def test_plateau_and_support(self):
        b = bump()
        assert b.phi(np.array([1.5]))[0] == 1.0
        assert b.phi(np.array([1.3]))[0] == 1.0
        assert b.phi(np.array([0.9]))[0] == 0.0
        assert b.phi(np.array([2.1]))[0] == 0.0
        vals = b.phi(np.linspace(0.5, 2.5, 401))
        assert np.all(vals >= 0) and np.all(vals <= 1)

    def test_fhat0_between_plateau_and_support(self):
        b = bump()
        assert 0.5 < b.fhat0 < 1.0

    def test_fhat_decay_fitted_constants(self):
        b = bump()
        ys = np.logspace(0.5, 1.8, 12)
        for v in (2, 3):
            kv = max(abs(b.fhat(float(y))) * y**v for y in ys)
            assert np.isfinite(kv)
            for y in ys:
                assert abs(b.fhat(float(y))) <= kv / y**v + 1e-12

    def test_fhat_at_zero_matches_quadrature(self):
        b = bump()
        assert b.fhat(0.0) == pytest.approx(b.fhat0)


class TestMoment1:
    def test_product_formula(self):
        plan = expand(ZETA, flat_recipe(2, 7), 210)  # sum |r|^2 = 16
        phi = SmoothingBump(phi=lambda t: t, fhat0=0.5)
        assert plan.sum_r_squared() == pytest.approx(16.0)
        assert moment1(plan, 1e4, phi) == pytest.approx(0.5 * 1e4 * 16.0)

    def test_too_long_resonator(self):
        plan = expand(ZETA, flat_recipe(2, 7), 210)
        with pytest.raises(ValueError, match="resonator too long"):
            moment1(plan, 250.0, bump())

    def test_matches_quadrature(self):
        # oracle: Simpson integral of |R(t)|^2 Phi(t/T) over [T, 2T]
        b = bump()
        T = 1e4
        rec = plan_weights(ZETA, 0.75, 2000)
        plan = expand(ZETA, rec, 2000)
        main = moment1(plan, T, b)
        n = 1 << 17
        ts = np.linspace(T, 2 * T, n + 1)
        vals = resonator_power(plan, ts) * b.phi(ts / T)
        h = ts[1] - ts[0]
        simpson = h / 3 * (vals[0] + vals[-1] + 4 * vals[1:-1:2].sum() + 2 * vals[2:-1:2].sum())
        assert simpson == pytest.approx(main, rel=0.01)


class TestDiagonalRatio:
    def test_hand_case_23(self):
        # frozen: (1*4 + 1/2*2 + 1/3*2 + 1/6*1)/4 = 35/24
        plan = expand(ZETA, flat_recipe(2, 3, sigma=1.0), 6)
        assert diagonal_ratio(ZETA, plan) == pytest.approx(35 / 24, abs=1e-9)

    def test_support_one_gives_one(self):
        plan = expand(ZETA, flat_recipe(5, 5), 4)
        assert diagonal_ratio(ZETA, plan) == pytest.approx(1.0)

    def test_double_equals_factored(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            spec = random_spec(rng)
            sigma = float(rng.uniform(0.65, 0.95)) if rng.uniform() < 0.8 else 0.5
            N = int(rng.integers(2000, 100_000))
            try:
                rec = plan_weights(spec, sigma, N)
            except DegenerateWindowError:
                continue
            plan = expand(spec, rec, N, term_budget=500_000)
            assert not plan.truncated
            a = diagonal_ratio(spec, plan)
            b = diagonal_ratio_factored(spec, plan)
            assert abs(a - b) <= 1e-9 * max(abs(a), abs(b))

    def test_ratio_at_least_one(self):
        rng = np.random.default_rng(11)
        for _ in range(5):
            spec = random_spec(rng)
            rec = plan_weights(spec, 0.75, 20_000)
            plan = expand(spec, rec, 20_000)
            assert diagonal_ratio(spec, plan) >= 1.0 - 1e-12

    def test_nonnegative_diagonal_products(self):
        from extrema.lfunc import coeff

        rng = np.random.default_rng(13)
        spec = random_spec(rng)
        rec = plan_weights(spec, 0.8, 30_000)
        plan = expand(spec, rec, 30_000)
        terms = plan.terms
        ns = sorted(terms)
        for n in ns:
            for m in ns:
                if n % m:
                    continue
                k = n // m  # square-free n makes gcd(m, k) = 1 automatic
                prod = coeff(spec, k) * terms[m] * terms[n].conjugate()
                assert prod.real >= -1e-12
                assert abs(prod.imag) <= 1e-9 * (abs(prod) + 1)

    def test_truncated_plan_warns(self):
        plan = expand(ZETA, flat_recipe(2, 7), 210, term_budget=5)
        with pytest.warns(UserWarning, match="inexact"):
            diagonal_ratio(ZETA, plan)

    def test_growth_proxy_desk_scale(self):
        # log ratio / ((log N)^(1-sigma) / (log log N)^theta) in [0.2 C, 3 C]
        sigma = 0.75
        C = growth_constant(sigma, 1, 1)
        for N in (10**4, 10**5, 10**6):
            rec = plan_weights(ZETA, sigma, N)
            plan = expand(ZETA, rec, N, term_budget=500_000)
            ratio = diagonal_ratio(ZETA, plan)
            scale = math.log(N) ** (1 - sigma) / math.log(math.log(N)) ** theta_exponent(sigma)
            proxy = math.log(ratio) / scale
            assert 0.2 * C <= proxy <= 3 * C


class TestPredictedLower:
    def test_frozen_value(self):
        # frozen: exp(C(3/4) (log 1e6)^(1/4) / loglog 1e6) with C = 0.9584146564
        assert predicted_lower(ZETA, 0.75, 1e6) == pytest.approx(2.0212086281165407, abs=1e-9)
        assert predicted_lower(ZETA, 0.75, 1e6) == pytest.approx(2.0215, abs=1e-3)

    def test_sigma_half_constants(self):
        assert growth_constant(0.5, 1, 1) == 1.0
        assert growth_constant(0.5, 4, 1) == 2.0
        assert theta_exponent(0.5) == 0.5
        assert theta_exponent(0.75) == 1.0

    def test_increasing_in_T(self):
        # at sigma = 1/2 the exponent grows from small T onward; at 3/4 the
        # turnover sits near T = exp(e^4), so monotonicity is asymptotic
        vals = [predicted_lower(ZETA, 0.5, T) for T in (1e4, 1e6, 1e8, 1e10)]
        assert all(b > a for a, b in zip(vals, vals[1:]))
        vals = [predicted_lower(ZETA, 0.75, T) for T in (1e25, 1e30, 1e40, 1e60)]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_range_errors(self):
        with pytest.raises(ValueError):
            growth_constant(1.0, 1, 1)
        with pytest.raises(ValueError):
            predicted_lower(ZETA, 0.75, 50.0)
