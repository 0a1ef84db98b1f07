"""End-to-end hunts for large L-values, plus the predicted envelope curves.

Three hunt styles:

* resonance: build a resonator, locate its |R(t)|^2 peaks over [T, 2T] and
  evaluate the smoothed polynomial there; the reported maximum is compared
  against exp(C(sigma) (log T)^(1-sigma)/(log log T)^theta).

* diophantine: tent-weighted prime phases near x = B log T are aligned by
  searching a T^mu-length block with the l^2 approximation machinery; when
  the block is long enough that M^n/(4 pi Lambda (T2-T1)) <= 1/100 (the
  "condition" verdict) the aligned cosine sum should clear 0.51 * Delta.

* theorem3 (the sigma -> 1+ hunt): box bound M = ceil(sqrt(logloglog T)),
  window x = log T / (2 sqrt(logloglog T)), sigma = 1 + log 2 / log x, all
  primes p <= x; predicted level is kappa * logloglog T.

The logarithmic-integral helpers expose the series
li(xi) = C + log(-log xi) + sum_j (log xi)^j/(j! j), 0 < xi < 1, with C
fitted once (it lands on the Euler-Mascheroni constant) against direct
quadrature of the defining integral.
"""

from __future__ import annotations

import math
import cmath
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.integrate import quad

from . import diophantine as dio
from . import lfunc, resonator
from .parallel import chunk_ranges, chunked_map
from .primes import primes_in_range, sieve_primes

__all__ = [
    "HuntReport",
    "EnvelopeCurve",
    "ENVELOPE_KINDS",
    "c_kappa_eta",
    "envelope",
    "hunt_resonance",
    "hunt_diophantine",
    "hunt_theorem3",
    "theorem3_plan",
    "li_quadrature",
    "li_series",
    "dense_grid_max",
    "write_reports",
]


@dataclass
class HuntReport:
    method: str
    sigma: float
    T: float
    best_t: float
    measured: float
    predicted: float
    delta_big: float | None = None
    verdict: str = "ok"
    diagnostics: dict[str, float] = field(default_factory=dict)

    def csv_row(self) -> str:
        db = "" if self.delta_big is None else f"{self.delta_big:.17g}"
        return (
            f"{self.method},{self.sigma:.17g},{self.T:.17g},{self.best_t:.17g},"
            f"{self.measured:.17g},{self.predicted:.17g},{db},{self.verdict}"
        )


REPORT_HEADER = "method,sigma,T,best_t,measured,predicted,delta_big,verdict"


def write_reports(path: str | Path, reports: list[HuntReport]) -> None:
    """Report CSV plus a sidecar key=value diagnostics file."""
    path = Path(path)
    lines = [REPORT_HEADER] + [r.csv_row() for r in reports]
    path.write_text("\n".join(lines) + "\n")
    diag_lines = []
    for i, r in enumerate(reports):
        for key in sorted(r.diagnostics):
            diag_lines.append(f"row{i}.{key}={r.diagnostics[key]:.17g}")
    Path(str(path) + ".diag").write_text("\n".join(diag_lines) + "\n")


# ---------------------------------------------------------------------------
# Envelope curves
# ---------------------------------------------------------------------------

ENVELOPE_KINDS = ("lower-thm1", "lower-thm2", "upper-prop1-strip", "upper-prop1-line1")


def c_kappa_eta(kappa: float, eta: float, sigma: float) -> float:
    """(1 - e^-1) kappa / 4 * (eta / (4 sqrt(e)))^(1 - sigma)."""
    return (1 - math.exp(-1)) * kappa / 4 * (eta / (4 * math.sqrt(math.e))) ** (1 - sigma)


@dataclass(frozen=True)
class EnvelopeCurve:
    kind: str
    kappa: float = 1.0
    m: int = 1
    sigma: float = 0.5
    eta: float = 1.0
    c: float = 1.0
    theta_override: float | None = None  # documents the conjectured theta -> sigma gap

    def __post_init__(self):
        if self.kind not in ENVELOPE_KINDS:
            raise ValueError(f"unknown envelope kind {self.kind!r}")
        if self.kind in ("lower-thm1", "lower-thm2", "upper-prop1-strip"):
            if not 0.5 <= self.sigma < 1:
                raise ValueError("sigma must lie in [1/2, 1) for this kind")


def envelope(curve: EnvelopeCurve, T: float) -> float:
    """Closed-form predicted bound at height T (positive, growing in T)."""
    if T < 100:
        raise ValueError("T must be >= 100")
    logT = math.log(T)
    loglogT = math.log(logT)
    if curve.kind == "lower-thm1":
        theta = curve.theta_override
        if theta is None:
            theta = resonator.theta_exponent(curve.sigma)
        C = resonator.growth_constant(curve.sigma, curve.kappa, curve.m)
        return math.exp(C * logT ** (1 - curve.sigma) / loglogT**theta)
    if curve.kind == "lower-thm2":
        return c_kappa_eta(curve.kappa, curve.eta, curve.sigma) * logT ** (1 - curve.sigma) / loglogT
    if curve.kind == "upper-prop1-strip":
        return math.exp(curve.c * logT ** (2 - 2 * curve.sigma) / loglogT)
    return loglogT**curve.kappa  # upper-prop1-line1


# ---------------------------------------------------------------------------
# Logarithmic integral helpers
# ---------------------------------------------------------------------------

def li_quadrature(xi: float) -> float:
    """li(xi) = integral_0^xi dt/log t for 0 < xi < 1 (integrand is smooth)."""
    if not 0 < xi < 1:
        raise ValueError("xi must lie in (0, 1)")
    val, _ = quad(lambda u: 1.0 / math.log(u) if u > 0 else 0.0, 0.0, xi,
                  epsabs=1e-12, epsrel=1e-12, limit=200)
    return val


def li_series(xi: float, C: float, terms: int = 30) -> float:
    """C + log(-log xi) + sum_{j<=terms} (log xi)^j / (j! j)."""
    if not 0 < xi < 1:
        raise ValueError("xi must lie in (0, 1)")
    lx = math.log(xi)
    acc = C + math.log(-lx)
    term = 1.0
    for j in range(1, terms + 1):
        term *= lx / j
        acc += term / j
    return acc


def fit_li_constant(xi: float = 2.0 ** -0.1, terms: int = 30) -> float:
    """The single constant C of the series, fitted once against quadrature."""
    return li_quadrature(xi) - (li_series(xi, 0.0, terms))


# ---------------------------------------------------------------------------
# Resonance hunt
# ---------------------------------------------------------------------------

def _auto_window(spec: lfunc.LFunctionSpec, T: float,
                 term_budget: int) -> lfunc.SmoothingWindow:
    """Smoothing scale for |L| evaluation at heights up to 2T.

    Zeta-like coefficients afford X = (2T)^2 (any cutoff); otherwise the
    largest X whose cutoff fits the direct budget.
    """
    if spec.coeff_kind == "zeta":
        return lfunc.SmoothingWindow(max(256.0, (2 * T) ** 2))
    x = max(16.0, term_budget / max(math.log(term_budget), 1.0) / 1.2)
    while math.ceil(x * math.log(x)) > term_budget:
        x *= 0.95
    return lfunc.SmoothingWindow(x)


def _local_max_indices(vals: np.ndarray) -> np.ndarray:
    if vals.size < 3:
        return np.arange(vals.size)
    left = vals[1:-1] >= vals[:-2]
    right = vals[1:-1] > vals[2:]
    return np.nonzero(left & right)[0] + 1


def hunt_resonance(
    spec: lfunc.LFunctionSpec,
    sigma: float,
    T: float,
    N: int,
    grid_step: float | None = None,
    top_k: int = 64,
    term_budget: int = 200_000,
    eval_budget: int = lfunc.DIRECT_TERM_BUDGET,
    threads: int = 1,
) -> HuntReport:
    """Resonator-guided maximum of |L(sigma + it)| over [T, 2T]."""
    if N > T**resonator.EXPONENT_CAP:
        raise ValueError(
            f"resonator too long: N = {N} exceeds T^{resonator.EXPONENT_CAP}"
        )
    recipe = resonator.plan_weights(spec, sigma, N)
    plan = resonator.expand(spec, recipe, N, term_budget)
    if grid_step is None:
        grid_step = math.pi / math.log(N)
    n_pts = int(T / grid_step) + 1

    chunk = 1 << 20
    spans = chunk_ranges(n_pts, chunk)

    def peaks_of(span: tuple[int, int]) -> list[tuple[float, float]]:
        lo, hi = span
        # one-point overlap so chunk-edge maxima are not lost
        lo_pad = max(0, lo - 1)
        hi_pad = min(n_pts, hi + 1)
        ts = T + grid_step * np.arange(lo_pad, hi_pad, dtype=np.float64)
        vals = resonator.resonator_power(plan, ts)
        idx = _local_max_indices(vals)
        idx = idx[(idx >= lo - lo_pad) & (idx < hi - lo_pad)]
        return [(float(vals[i]), float(ts[i])) for i in idx]

    all_peaks: list[tuple[float, float]] = []
    for part in chunked_map(peaks_of, spans, threads):
        all_peaks.extend(part)
    if not all_peaks:  # flat |R|^2: degenerate uniform sampling
        ts = T + grid_step * np.arange(min(n_pts, top_k), dtype=np.float64)
        all_peaks = [(1.0, float(t)) for t in ts]
    all_peaks.sort(key=lambda vt: (-vt[0], vt[1]))
    chosen = [t for _, t in all_peaks[:top_k]]

    window = _auto_window(spec, T, eval_budget)
    best_t, best_val = chosen[0], -1.0
    for t in chosen:
        val = abs(lfunc.smoothed_value(spec, sigma, t, window, eval_budget))
        if val > best_val or (val == best_val and t < best_t):
            best_val, best_t = val, t
    predicted = resonator.predicted_lower(spec, sigma, T)
    diag = {
        "ell": recipe.ell,
        "c": recipe.c if recipe.c is not None else 0.0,
        "M_res": recipe.M_res,
        "window_ratio": recipe.window_ratio,
        "C_L": resonator.growth_constant(sigma, spec.kappa, spec.m),
        "X": window.X,
        "grid_step": grid_step,
        "top_k": float(top_k),
        "n_terms": float(len(plan.ns)),
        "truncated": float(plan.truncated),
        "N": float(N),
    }
    return HuntReport("resonance", sigma, T, best_t, best_val, predicted,
                      diagnostics=diag)


def dense_grid_max(sigma: float, T: float, n_points: int = 10_000,
                   threads: int = 1) -> float:
    """Oracle: max |zeta(sigma+it)| over n_points uniform heights in [T, 2T]."""
    ts = np.linspace(T, 2 * T, n_points)
    spans = chunk_ranges(len(ts), 2048)

    def block(span: tuple[int, int]) -> float:
        lo, hi = span
        return float(np.max(np.abs(lfunc.reference_zeta_grid(sigma, ts[lo:hi]))))

    return max(chunked_map(block, spans, threads))


# ---------------------------------------------------------------------------
# Diophantine hunt
# ---------------------------------------------------------------------------

def hunt_diophantine(
    spec: lfunc.LFunctionSpec,
    sigma: float,
    T: float,
    B: float,
    M: int = 4,
    theta: float = 0.0,
    eta: float = 0.1,
    mu: float = 0.05,
    grid_step: float | None = None,
    refine_iters: int = 60,
    lambda_budget: int = 1_000_000,
    threads: int = 1,
) -> HuntReport:
    """Tent-sum alignment hunt inside the first T^mu-length block of [T, 2T].

    x = B log T; primes in [x/e, e x] carry weights
    delta_j = (|a(p)|/p^sigma) (1 - |log(p/x)|) and targets
    beta_j = (omega_p - theta)/(2 pi).  The verdict records whether
    M^n / (4 pi Lambda (T2 - T1)) <= 1/100 held for the block searched.
    """
    x = B * math.log(T)
    if x <= 2:
        raise ValueError("B log T must exceed 2 so the prime window is nonempty")
    ps, betas, deltas = [], [], []
    for p in primes_in_range(x / math.e, math.e * x):
        w = 1.0 - abs(math.log(p / x))
        if w < 0:
            continue
        ap = lfunc.coeff(spec, int(p))
        if abs(ap) == 0.0:
            continue
        omega = cmath.phase(ap)
        ps.append(int(p))
        betas.append((omega - theta) / (2 * math.pi))
        deltas.append(abs(ap) * p ** (-sigma) * w)
    if not ps:
        raise ValueError(f"no primes in the tent window around x = {x:.3g}")

    block_len = T**mu
    T1, T2 = T, min(2 * T, T + block_len)
    inst = dio.instance_from_primes(ps, betas, deltas, M, T1, T2)

    lam_kind = "exact"
    try:
        lam = dio.lambda_exact(ps, M, lambda_budget)
    except ValueError:
        lam = dio.lambda_analytic(ps, M)
        lam_kind = "analytic"

    condition = math.exp(
        inst.n * math.log(M) - math.log(4 * math.pi) - math.log(lam)
        - math.log(T2 - T1)
    )
    verdict = "condition-passed" if condition <= 0.01 else "condition-failed"

    best_t, best_obj = dio.search_t(inst, grid_step, refine_iters)
    measured, delta_big = lfunc.tent_sum(spec, sigma, best_t, x, theta)
    predicted = envelope(EnvelopeCurve("lower-thm2", kappa=spec.kappa,
                                       sigma=sigma, eta=eta), T)
    diag = {
        "x": x,
        "B": B,
        "M": float(M),
        "n": float(inst.n),
        "Lambda": lam,
        "Lambda_exact": float(lam_kind == "exact"),
        "condition_lhs": condition,
        "block_len": T2 - T1,
        "eta": eta,
        "mu": mu,
        "theta": theta,
        "best_objective": best_obj,
        "chen_bound": dio.chen_bound(inst, lam),
        "power_error_bound": x ** (2 * spec.delta - 2 * sigma + 0.5) * math.log(x),
    }
    return HuntReport("diophantine", sigma, T, best_t, measured, predicted,
                      delta_big=delta_big, verdict=verdict, diagnostics=diag)


# ---------------------------------------------------------------------------
# The sigma -> 1+ hunt
# ---------------------------------------------------------------------------

def theorem3_plan(T: float) -> dict[str, float]:
    """Derived constants: M, B, x, sigma for the sigma -> 1+ hunt at height T."""
    if T < 1e6:
        raise ValueError("T must be >= 1e6")
    lll = math.log(math.log(math.log(T)))
    if lll <= 0:
        raise ValueError("log log log T must be positive")
    root = math.sqrt(lll)
    M = math.ceil(root)
    x = math.log(T) / (2 * root)
    if x <= 2:
        raise ValueError("window x = log T / (2 sqrt(logloglog T)) must exceed 2")
    sigma = 1 + math.log(2) / math.log(x)
    return {"M": float(M), "B": 1.0 / (2 * M), "x": x, "sigma": sigma,
            "logloglogT": lll}


def hunt_theorem3(
    spec: lfunc.LFunctionSpec,
    T: float,
    theta: float = 0.0,
    grid_step: float | None = None,
    refine_iters: int = 80,
    threads: int = 1,
) -> HuntReport:
    """Align all primes p <= x over [T, 2T]; measured is the cosine sum at
    the best height, predicted is kappa * logloglog T."""
    plan = theorem3_plan(T)
    x, sigma, M = plan["x"], plan["sigma"], int(plan["M"])
    ps, betas, deltas = [], [], []
    for p in sieve_primes(int(math.floor(x))):
        ap = lfunc.coeff(spec, int(p))
        if abs(ap) == 0.0:
            continue
        ps.append(int(p))
        betas.append((cmath.phase(ap) - theta) / (2 * math.pi))
        deltas.append(abs(ap) * p ** (-sigma))
    inst = dio.instance_from_primes(ps, betas, deltas, M, T, 2 * T)
    max_lam = max(inst.lambdas)
    if grid_step is None:
        grid_step = 1.0 / (64.0 * max_lam)
    best_t, best_obj = dio.search_t(inst, grid_step, refine_iters,
                                    refine_cells=16)
    measured = 0.0
    for p, beta, d in zip(ps, betas, deltas):
        measured += d * math.cos(best_t * math.log(p) - 2 * math.pi * beta)
    predicted = spec.kappa * plan["logloglogT"]
    tail_bound = x ** (1 - sigma) / ((sigma - 1) * math.log(x))
    diag = {
        "x": x,
        "sigma": sigma,
        "M": float(M),
        "B": plan["B"],
        "n": float(inst.n),
        "theta": theta,
        "best_objective": best_obj,
        "tail_bound": tail_bound,
        "delta_sum": inst.delta_total,
    }
    return HuntReport("theorem3", sigma, T, best_t, measured, predicted,
                      delta_big=inst.delta_total, diagnostics=diag)
