"""Coefficients, smoothed evaluation, the reference oracle and prime sums.

Expected values marked "frozen" were computed with independent
high-precision routes (mpmath zeta/polylog/atan, exact rationals, direct
enumeration) before being pinned here.
"""

import math

import numpy as np
import pytest

from extrema import lfunc
from extrema.lfunc import (
    BudgetExceededError,
    InsufficientEulerDataError,
    SmoothingWindow,
    coeff,
    coeff_block,
    dirichlet_spec,
    euler_roots_spec,
    load_spec,
    prime_sum_stats,
    reference_zeta,
    reference_zeta_grid,
    save_spec,
    smoothed_value,
    tent_sum,
    zeta_spec,
)

ZETA = zeta_spec()
CHI4 = dirichlet_spec(4, 1)

# frozen via mpmath
ZETA_AT = {
    (2.0, 0.0): complex(1.6449340668482264, 0.0),
    (0.5, 0.0): complex(-1.4603545088095868, 0.0),
    (3.0, 0.0): complex(1.2020569031595943, 0.0),
    (0.5, 1e3): complex(0.35633436719439606, 0.93199783123299367),
    (0.75, 1e3): complex(0.83371313000315203, 0.29162342463359249),
    (1.0, 1e3): complex(0.94093686829275331, 0.045226652072095099),
    (0.5, 1e4): complex(-0.33937380263883446, -0.037091505973206031),
    (0.75, 1e4): complex(0.16401904470520564, -0.61468752965828038),
    (1.0, 1e4): complex(0.49732792297163084, -0.58782382431940098),
    (0.5, 123456.0): complex(0.73533879398089941, 0.072710702439948057),
    (3.0, 5.0): complex(0.91252658899897131, 0.050842871074571362),
}


def divisor_spec(bound=200):
    """Euler roots all 1 with m = 2: coefficients are the divisor function."""
    from extrema.primes import sieve_primes

    roots = {int(p): (1 + 0j, 1 + 0j) for p in sieve_primes(bound)}
    return euler_roots_spec("divisor", roots, m=2, degree_dL=2.0, kappa=2.0)


class TestCoeff:
    def test_zeta_all_ones(self):
        assert coeff(ZETA, 360) == 1
        assert coeff(ZETA, 1) == 1

    def test_mod4_character(self):
        assert coeff(CHI4, 3) == pytest.approx(-1)
        assert coeff(CHI4, 2) == 0
        assert coeff(CHI4, 5) == pytest.approx(1)
        assert coeff(CHI4, 15) == pytest.approx(-1)

    def test_divisor_from_double_roots(self):
        spec = divisor_spec()
        # oracle: coefficients of (1-x)^-2 at p^k are k+1
        for k in range(7):
            assert coeff(spec, 2**k) == pytest.approx(k + 1)
        # d(60) = 12
        assert coeff(spec, 60) == pytest.approx(12)

    def test_multiplicativity_random_coprime(self):
        rng = np.random.default_rng(0)
        spec = divisor_spec(1009)
        for _ in range(200):
            m = int(rng.integers(1, 1000))
            n = int(rng.integers(1, 1000))
            if math.gcd(m, n) != 1:
                continue
            lhs = coeff(spec, m * n)
            rhs = coeff(spec, m) * coeff(spec, n)
            assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)

    def test_missing_root_tuple_names_prime(self):
        spec = euler_roots_spec("tiny", {2: (0.5 + 0j,)}, m=1, degree_dL=1, kappa=1)
        with pytest.raises(InsufficientEulerDataError, match="prime 3"):
            coeff(spec, 6)

    def test_ramanujan_sanity(self):
        # |a(n)| <= d(n)^m when every |alpha| <= 1
        rng = np.random.default_rng(1)
        from extrema.primes import sieve_primes

        roots = {}
        for p in sieve_primes(400):
            z = rng.uniform(0, 1, 2) * np.exp(2j * np.pi * rng.uniform(0, 1, 2))
            roots[int(p)] = (complex(z[0]), complex(z[1]))
        spec = euler_roots_spec("rand", roots, m=2, degree_dL=2, kappa=1)
        div = divisor_spec(400)
        for n in list(range(1, 200)) + [2**10, 3 * 5 * 7, 128 * 81]:
            d = coeff(div, n).real
            assert abs(coeff(spec, n)) <= d**2 + 1e-9

    def test_coeff_block_matches_pointwise(self):
        spec = divisor_spec(500)
        block = coeff_block(spec, 500)
        for n in (1, 2, 17, 128, 360, 499):
            assert block[n] == pytest.approx(coeff(spec, n))

    def test_block_beyond_roots_errors(self):
        spec = euler_roots_spec("tiny", {2: (1 + 0j,)}, m=1, degree_dL=1, kappa=1)
        with pytest.raises(InsufficientEulerDataError):
            coeff_block(spec, 100)

    def test_zeta_constants_pinned(self):
        with pytest.raises(ValueError):
            lfunc.LFunctionSpec(name="bad", coeff_kind="zeta", kappa=2.0)


class TestSmoothingWindow:
    def test_cutoff_and_floor(self):
        w = SmoothingWindow(1e6)
        assert w.cutoff == 13815511
        assert w.cutoff >= w.X
        with pytest.raises(ValueError):
            SmoothingWindow(15.0)

    @pytest.mark.parametrize("X", [16.0, 100.0, 1e4, 1e6])
    def test_tail_terms_below_power_bound(self, X):
        # beyond the cutoff the smoothing factor is below n^(-2/3)
        w = SmoothingWindow(X)
        for n in (w.cutoff + 1, 2 * w.cutoff):
            assert math.exp(-n / X) <= n ** (-2 / 3)


class TestSmoothedValue:
    def test_zeta2_smoothed(self):
        # frozen: mpmath polylog(2, e^(-1/X)); truncation tail < 5e-15.
        # Note |value - pi^2/6| = 1.48e-5: the smoothing deficit itself.
        v = smoothed_value(ZETA, 2.0, 0.0, SmoothingWindow(1e6))
        assert v.real == pytest.approx(1.6449192513374185, abs=5e-12)
        assert abs(v.imag) < 1e-12
        assert abs(v - math.pi**2 / 6) < 2e-5

    def test_zeta2_monotone_toward_pi2_over_6(self):
        vals = [smoothed_value(ZETA, 2.0, 0.0, SmoothingWindow(X)).real
                for X in (1e3, 1e4, 1e5, 1e6)]
        assert all(b > a for a, b in zip(vals, vals[1:]))
        assert vals[-1] < math.pi**2 / 6

    def test_mod4_leibniz(self):
        # frozen: mpmath atan(e^(-1/X)); pi/4 within 1e-4
        v = smoothed_value(CHI4, 1.0, 0.0, SmoothingWindow(1e6))
        assert v.real == pytest.approx(0.7853976633974483, abs=1e-10)
        assert v.real == pytest.approx(math.pi / 4, abs=1e-4)

    def test_budget_error_reports_requirement(self):
        with pytest.raises(BudgetExceededError, match="budget exceeded"):
            smoothed_value(CHI4, 1.0, 0.0, SmoothingWindow(1e9), term_budget=10**6)

    def test_sigma_range(self):
        with pytest.raises(ValueError):
            smoothed_value(ZETA, 3.5, 0.0, SmoothingWindow(100.0))

    @pytest.mark.parametrize("sigma,t,X", [
        (0.5, 0.0, 2e3), (2.0, 0.0, 5e3), (0.5, 50.0, 2e3), (0.75, 300.0, 1e4),
    ])
    def test_analytic_route_agrees_with_direct(self, sigma, t, X):
        w = SmoothingWindow(X)
        direct = lfunc._direct_smoothed(ZETA, sigma, t, X, w.cutoff)
        analytic = lfunc._analytic_smoothed(sigma, t, X, w.cutoff)
        assert analytic == pytest.approx(direct, abs=1e-11)

    def test_deterministic(self):
        w = SmoothingWindow(1e5)
        a = smoothed_value(ZETA, 0.6, 777.7, w)
        b = smoothed_value(ZETA, 0.6, 777.7, w)
        assert a == b


class TestReferenceZeta:
    @pytest.mark.parametrize("key", sorted(ZETA_AT))
    def test_pinned_values(self, key):
        sigma, t = key
        want = ZETA_AT[key]
        got = reference_zeta(sigma, t)
        assert got == pytest.approx(want, abs=1e-9 * max(1.0, abs(want)))

    def test_conjugate_symmetry(self):
        a = reference_zeta(0.8, 300.0)
        b = reference_zeta(0.8, -300.0)
        assert b == pytest.approx(a.conjugate(), rel=1e-12)

    def test_range_errors(self):
        with pytest.raises(ValueError):
            reference_zeta(0.4, 10.0)
        with pytest.raises(ValueError):
            reference_zeta(1.0, 2e9)
        with pytest.raises(ValueError):
            reference_zeta(1.0, 0.0)

    def test_grid_matches_scalar(self):
        ts = np.array([1e3, 1234.5, 5e3])
        grid = reference_zeta_grid(0.75, ts)
        for i, t in enumerate(ts):
            scalar = reference_zeta(0.75, float(t))
            assert grid[i] == pytest.approx(scalar, rel=1e-10)


class TestSmoothedVsReference:
    """The truncated smoothed polynomial tracks zeta on the line."""

    @pytest.mark.parametrize("sigma", [0.5, 0.75, 1.0])
    @pytest.mark.parametrize("t", [1e3, 1e4])
    def test_order_one_window(self, sigma, t):
        v = smoothed_value(ZETA, sigma, t, SmoothingWindow(t**2))
        z = reference_zeta(sigma, t)
        assert abs(v - z) <= 2.0

    @pytest.mark.parametrize("sigma", [0.5, 1.0])
    def test_cubic_window(self, sigma):
        t = 1e3
        v = smoothed_value(ZETA, sigma, t, SmoothingWindow(t**3))
        z = reference_zeta(sigma, t)
        assert abs(v - z) <= 1e-3


class TestPrimeSums:
    def test_zeta_counts(self):
        assert prime_sum_stats(ZETA, 100, 2) == 25
        assert prime_sum_stats(ZETA, 10, 1) == 4

    def test_zero_roots(self):
        spec = euler_roots_spec(
            "null", {p: (0j,) for p in (2, 3, 5, 7, 11, 13)}, m=1, degree_dL=1, kappa=1
        )
        assert prime_sum_stats(spec, 13, 2) == 0

    @pytest.mark.parametrize("x", [1e3, 1e5, 1e7])
    def test_normality_ratio_desk_scale(self, x):
        ratio = prime_sum_stats(ZETA, x, 2) / (x / math.log(x))
        assert 0.9 <= ratio <= 1.3


class TestTentSum:
    def test_zeta_value_equals_delta_at_t0(self):
        value, delta = tent_sum(ZETA, 0.6, 0.0, 25.0)
        assert value == pytest.approx(delta, rel=1e-15)

    def test_frozen_delta_x10(self):
        # frozen: direct enumeration over p in {5,7,11,13,17,19,23}
        _, delta = tent_sum(ZETA, 0.5, 0.0, 10.0)
        assert delta == pytest.approx(1.0885849365583926, abs=1e-12)

    def test_empty_window(self):
        spec = euler_roots_spec(
            "null", {p: (0j,) for p in (2, 3, 5, 7, 11, 13, 17, 19, 23)},
            m=1, degree_dL=1, kappa=1,
        )
        value, delta = tent_sum(spec, 0.5, 0.0, 10.0)
        assert value == 0.0 and delta == 0.0

    def test_theta_pi_negates_for_zeta(self):
        v0, _ = tent_sum(ZETA, 0.5, 137.0, 10.0, theta=0.0)
        vpi, _ = tent_sum(ZETA, 0.5, 137.0, 10.0, theta=math.pi)
        assert vpi == pytest.approx(-v0, rel=1e-12)


class TestSpecFiles:
    def test_roundtrip_dirichlet(self, tmp_path):
        path = tmp_path / "chi4.spec"
        save_spec(CHI4, path)
        back = load_spec(path)
        assert back.q == 4 and back.char_index == 1
        assert coeff(back, 3) == pytest.approx(-1)

    def test_roundtrip_euler_roots(self, tmp_path):
        spec = euler_roots_spec(
            "two", {2: (0.5 + 0.1j, -0.25 + 0j), 3: (1j, -1j)},
            m=2, degree_dL=2, kappa=1.5, delta=0.1,
        )
        path = tmp_path / "two.spec"
        save_spec(spec, path)
        back = load_spec(path)
        assert back.m == 2 and back.kappa == 1.5 and back.delta == 0.1
        assert coeff(back, 12) == pytest.approx(coeff(spec, 12))

    def test_zeta_file(self, tmp_path):
        path = tmp_path / "z.spec"
        path.write_text("name=zeta\nkind=zeta\n")
        assert load_spec(path).coeff_kind == "zeta"
