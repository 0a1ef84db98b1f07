"""Resonator construction and moment bookkeeping.

A resonator is a Dirichlet polynomial R(t) = sum_{n <= N} r(n) n^{-it} whose
square amplifies |L| inside a weighted mean: with a smooth bump Phi,

    M1 = integral |R(t)|^2 Phi(t/T) dt ~ T Phihat(0) sum |r(n)|^2,

and the diagonal part of integral L |R|^2 Phi produces the ratio

    sum_{mk = n <= N} a(k) r(m) conj(r(n)) / k^sigma  /  sum |r(n)|^2,

which is real and >= 1 for the weights built here (every diagonal product
equals |a(k)|^2 |a(m)|^2 f(m)^2 f(k) >= 0).  Choosing r(n) = a(n) f(n) with
f supported on square-free products of a sliding prime window gives the
growth constant

    C(sigma) = kappa^sigma m^(1-2 sigma) (3-2 sigma)^(3/2-sigma)
               / (2 (2 sigma - 1)^(1/2)),       1/2 < sigma < 1,
    C(1/2) = sqrt(kappa),

entering the predicted lower envelope
exp(C(sigma) (log T)^(1-sigma) / (log log T)^theta(sigma)) with
theta(1/2) = 1/2 and theta = 1 otherwise.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .lfunc import LFunctionSpec, coeff
from .primes import primes_in_range

__all__ = [
    "WeightRecipe",
    "ResonatorPlan",
    "SmoothingBump",
    "DegenerateWindowError",
    "growth_constant",
    "theta_exponent",
    "plan_weights",
    "flat_recipe",
    "expand",
    "bump",
    "moment1",
    "diagonal_ratio",
    "diagonal_ratio_factored",
    "predicted_lower",
    "resonator_power",
    "dump_recipe",
    "dump_plan",
]

EXPONENT_CAP = 0.95  # enforced cap on log N / log T ("resonator well below T")


class DegenerateWindowError(ValueError):
    """The prime window of a weight recipe collapsed; use a larger N."""


def theta_exponent(sigma: float) -> float:
    return 0.5 if sigma == 0.5 else 1.0


def growth_constant(sigma: float, kappa: float, m: int) -> float:
    """C(sigma) of the predicted lower envelope."""
    if not 0.5 <= sigma < 1:
        raise ValueError("sigma must lie in [1/2, 1)")
    if sigma == 0.5:
        return math.sqrt(kappa)
    return (
        kappa**sigma
        * m ** (1 - 2 * sigma)
        * (3 - 2 * sigma) ** (1.5 - sigma)
        / (2 * math.sqrt(2 * sigma - 1))
    )


@dataclass(frozen=True)
class WeightRecipe:
    """Multiplicative weight f on a prime window.

    sigma > 1/2: f(p) = (ell/p)^sigma on [c ell, M_res],
    sigma = 1/2: f(p) = sqrt(ell) / (sqrt(p) log p) on [ell, M_res].
    `flat` is a testing hook: f(p) = 1 on the window.
    The window ratio support_hi/support_lo reaches 4 only at astronomically
    large N; it is recorded, not enforced (see window_ratio).
    """

    sigma: float
    ell: float
    c: float | None
    support_lo: float
    support_hi: float
    M_res: float
    flat: bool = False

    def __post_init__(self):
        if not 0.5 <= self.sigma < 1 and not self.flat:
            raise ValueError("sigma must lie in [1/2, 1)")
        if self.support_hi < self.support_lo:
            raise DegenerateWindowError(
                f"degenerate window [{self.support_lo}, {self.support_hi}]; "
                "increase N"
            )

    @property
    def window_ratio(self) -> float:
        return self.support_hi / self.support_lo

    def weight(self, p: float) -> float:
        """f(p); zero off the window, non-negative on it."""
        if p < self.support_lo or p > self.support_hi:
            return 0.0
        if self.flat:
            return 1.0
        if self.sigma == 0.5:
            return math.sqrt(self.ell) / (math.sqrt(p) * math.log(p))
        return (self.ell / p) ** self.sigma


def plan_weights(spec: LFunctionSpec, sigma: float, N: int) -> WeightRecipe:
    """Weight recipe for a length-N resonator at this sigma.

    sigma > 1/2: c = (m^2 (3-2 sigma)/(2 sigma-1))^(1/(2 sigma)),
                 ell = (2 sigma - 1) c^(2 sigma - 1) log N / kappa,
                 M_res = ell (log ell / log log ell)^(1/(2 sigma - 1)).
    sigma = 1/2: ell = log N log log N / kappa,  M_res = ell log ell.
    """
    if N < 1000:
        raise ValueError("N must be >= 1000")
    if not 0.5 <= sigma < 1:
        raise ValueError("sigma must lie in [1/2, 1)")
    logN = math.log(N)
    if sigma == 0.5:
        ell = logN * math.log(logN) / spec.kappa
        if ell <= math.e:
            raise DegenerateWindowError("degenerate window: ell <= e; increase N")
        M_res = ell * math.log(ell)
        return WeightRecipe(sigma=sigma, ell=ell, c=None,
                            support_lo=ell, support_hi=M_res, M_res=M_res)
    c = (spec.m**2 * (3 - 2 * sigma) / (2 * sigma - 1)) ** (1 / (2 * sigma))
    ell = (2 * sigma - 1) * c ** (2 * sigma - 1) * logN / spec.kappa
    if ell <= math.e * 1.000001:
        raise DegenerateWindowError(
            f"degenerate window: ell = {ell:.3f} <= e at this sigma; increase N"
        )
    g = math.log(ell) / math.log(math.log(ell))
    M_res = ell * g ** (1 / (2 * sigma - 1))
    lo = c * ell
    if M_res <= lo:
        raise DegenerateWindowError(
            f"degenerate window: c*ell = {lo:.3f} >= M_res = {M_res:.3f}; increase N"
        )
    return WeightRecipe(sigma=sigma, ell=ell, c=c,
                        support_lo=lo, support_hi=M_res, M_res=M_res)


def flat_recipe(support_lo: float, support_hi: float, sigma: float = 1.0) -> WeightRecipe:
    """f identically 1 on [support_lo, support_hi]; for hand-checkable plans."""
    return WeightRecipe(sigma=sigma, ell=1.0, c=None, support_lo=support_lo,
                        support_hi=support_hi, M_res=support_hi, flat=True)


@dataclass(frozen=True)
class ResonatorPlan:
    """Expanded resonator: square-free support products n <= N with r(n).

    ns is ascending; masks[i] is the bitmask of support-prime indices of
    ns[i], so gcd(ns[i], ns[j]) == 1 iff masks[i] & masks[j] == 0.
    """

    recipe: WeightRecipe
    N: int
    support_primes: np.ndarray
    ns: np.ndarray
    rs: np.ndarray
    masks: np.ndarray
    truncated: bool = False
    spec_name: str = ""

    @property
    def terms(self) -> dict[int, complex]:
        return {int(n): complex(r) for n, r in zip(self.ns, self.rs)}

    def sum_r_squared(self) -> float:
        return float(np.sum(np.abs(self.rs) ** 2))


_ENUM_HARD_CAP = 5_000_000


def expand(spec: LFunctionSpec, recipe: WeightRecipe, N: int,
           term_budget: int = 200_000) -> ResonatorPlan:
    """Enumerate square-free products of window primes up to N, r(n) = a(n) f(n).

    Complete when the product count fits the budget; otherwise the largest
    |r(n)| are kept (ties to smaller n) and the plan is marked truncated.
    """
    if term_budget < 1:
        raise ValueError("term_budget must be >= 1")
    ps = primes_in_range(recipe.support_lo, recipe.support_hi)
    if len(ps) == 0:
        raise ValueError("empty support: no primes in the recipe window")
    fs = np.array([recipe.weight(float(p)) for p in ps])
    aps = np.array([coeff(spec, int(p)) for p in ps])
    rp = aps * fs

    found: list[tuple[int, complex, int]] = [(1, 1.0 + 0.0j, 0)]

    def dfs(prod: int, rval: complex, mask: int, start: int) -> None:
        if len(found) > _ENUM_HARD_CAP:
            raise ValueError(
                f"budget exceeded: support enumeration passed {_ENUM_HARD_CAP} terms"
            )
        for i in range(start, len(ps)):
            nxt = prod * int(ps[i])
            if nxt > N:
                break
            nr = rval * rp[i]
            found.append((nxt, nr, mask | (1 << i)))
            dfs(nxt, nr, mask | (1 << i), i + 1)

    dfs(1, 1.0 + 0.0j, 0, 0)
    truncated = len(found) > term_budget
    if truncated:
        found.sort(key=lambda item: (-abs(item[1]), item[0]))
        found = found[:term_budget]
    found.sort(key=lambda item: item[0])
    ns = np.array([f[0] for f in found], dtype=np.int64)
    rs = np.array([f[1] for f in found], dtype=np.complex128)
    masks = np.array([f[2] for f in found], dtype=np.uint64)
    return ResonatorPlan(recipe=recipe, N=N, support_primes=ps, ns=ns, rs=rs,
                         masks=masks, truncated=truncated, spec_name=spec.name)


# ---------------------------------------------------------------------------
# Smooth compactly supported bump on [1, 2], identically 1 on (5/4, 7/4)
# ---------------------------------------------------------------------------

def _ramp(x: np.ndarray) -> np.ndarray:
    """C-infinity 0 -> 1 transition on [0, 1] from the e^(-1/x) mollifier."""
    x = np.clip(x, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(x > 0, np.exp(-1.0 / np.maximum(x, 1e-300)), 0.0)
        b = np.where(x < 1, np.exp(-1.0 / np.maximum(1.0 - x, 1e-300)), 0.0)
    return a / (a + b)


@dataclass(frozen=True)
class SmoothingBump:
    phi: Callable[[np.ndarray], np.ndarray]
    fhat0: float

    def fhat(self, y: float) -> complex:
        """Phihat(y) = integral Phi(t) e^(-ity) dt by oscillatory quadrature."""
        if y == 0.0:
            return complex(self.fhat0)
        f = lambda u: float(self.phi(np.array([u]))[0])
        re, _ = quad(f, 1.0, 2.0, weight="cos", wvar=y, limit=400)
        im, _ = quad(f, 1.0, 2.0, weight="sin", wvar=y, limit=400)
        return complex(re, -im)


def _phi_standard(ts: np.ndarray) -> np.ndarray:
    ts = np.asarray(ts, dtype=np.float64)
    up = _ramp((ts - 1.0) * 4.0)
    down = _ramp((2.0 - ts) * 4.0)
    out = np.where((ts >= 1.0) & (ts <= 2.0), np.minimum(up, down), 0.0)
    return out


def bump() -> SmoothingBump:
    """The standard bump: support [1,2], plateau (5/4, 7/4), 0 <= Phi <= 1."""
    val, _ = quad(lambda u: float(_phi_standard(np.array([u]))[0]), 1.0, 2.0,
                  epsabs=1e-10, limit=400)
    return SmoothingBump(phi=_phi_standard, fhat0=float(val))


def moment1(plan: ResonatorPlan, T: float, phi: SmoothingBump) -> float:
    """Main term T Phihat(0) sum |r(n)|^2 of integral |R|^2 Phi(t/T) dt."""
    if plan.N > T**EXPONENT_CAP:
        raise ValueError(
            f"resonator too long: N = {plan.N} exceeds T^{EXPONENT_CAP} = "
            f"{T**EXPONENT_CAP:.6g}"
        )
    return T * phi.fhat0 * plan.sum_r_squared()


# ---------------------------------------------------------------------------
# Diagonal ratio, two routes
# ---------------------------------------------------------------------------

def diagonal_ratio(spec: LFunctionSpec, plan: ResonatorPlan) -> float:
    """sum_{mk=n<=N} a(k) r(m) conj(r(n)) / k^sigma   /  sum |r(n)|^2.

    Double enumeration over every key n and every divisor split n = m k,
    compensated with math.fsum.  Exact only for complete plans.
    """
    if plan.truncated:
        warnings.warn("diagonal_ratio on a truncated plan is inexact", stacklevel=2)
    sigma = plan.recipe.sigma
    ps = plan.support_primes
    ap = {int(p): coeff(spec, int(p)) for p in ps}
    index = {int(n): i for i, n in enumerate(plan.ns)}
    re_parts: list[float] = []
    im_parts: list[float] = []
    for i, n in enumerate(plan.ns):
        mask = int(plan.masks[i])
        rn_conj = complex(plan.rs[i]).conjugate()
        idxs = [j for j in range(len(ps)) if mask >> j & 1]
        # every divisor m of the square-free n: subsets of its prime indices
        for sub in range(1 << len(idxs)):
            m = 1
            a_k = 1.0 + 0.0j
            for b, j in enumerate(idxs):
                if sub >> b & 1:
                    m *= int(ps[j])
                else:
                    a_k *= ap[int(ps[j])]  # prime goes to the k side
            k = int(n) // m
            jm = index.get(m)
            if jm is None:
                continue  # only possible on truncated plans
            term = a_k * complex(plan.rs[jm]) * rn_conj / k**sigma
            re_parts.append(term.real)
            im_parts.append(term.imag)
    num = complex(math.fsum(re_parts), math.fsum(im_parts))
    den = math.fsum(abs(complex(r)) ** 2 for r in plan.rs)
    if abs(num.imag) > 1e-9 * (abs(num.real) + 1):
        warnings.warn(f"diagonal sum has imaginary part {num.imag:.3g}", stacklevel=2)
    return num.real / den


def diagonal_ratio_factored(spec: LFunctionSpec, plan: ResonatorPlan) -> float:
    """Same ratio via sum_k f(k)|a(k)|^2 k^-sigma sum_{m <= N/k, (m,k)=1} f(m)^2 |a(m)|^2."""
    if plan.truncated:
        warnings.warn("diagonal_ratio on a truncated plan is inexact", stacklevel=2)
    sigma = plan.recipe.sigma
    ns = plan.ns.astype(np.float64)
    w2 = np.abs(plan.rs) ** 2  # f(m)^2 |a(m)|^2
    masks = plan.masks
    abs_r = np.abs(plan.rs)  # f(k) |a(k)|
    a_abs = np.ones(len(ns))
    for i, n in enumerate(plan.ns):
        a_abs[i] = abs(coeff(spec, int(n)))
    fk = np.where(a_abs > 0, abs_r / np.where(a_abs > 0, a_abs, 1.0), 0.0)
    total = 0.0
    for i, n in enumerate(plan.ns):
        if fk[i] == 0.0 or a_abs[i] == 0.0:
            continue
        limit = plan.N / float(n)
        hi = np.searchsorted(ns, limit, side="right")
        sel = (masks[:hi] & masks[i]) == 0
        s = float(np.sum(w2[:hi][sel]))
        total += fk[i] * a_abs[i] ** 2 / float(n) ** sigma * s
    return total / float(np.sum(w2))


def predicted_lower(spec: LFunctionSpec, sigma: float, T: float) -> float:
    """exp(C(sigma) (log T)^(1-sigma) / (log log T)^theta(sigma))."""
    if T < 100:
        raise ValueError("T must be >= 100")
    C = growth_constant(sigma, spec.kappa, spec.m)
    logT = math.log(T)
    return math.exp(C * logT ** (1 - sigma) / math.log(logT) ** theta_exponent(sigma))


def resonator_power(plan: ResonatorPlan, ts: np.ndarray) -> np.ndarray:
    """|R(t)|^2 on a grid of heights, vectorised per term."""
    ts = np.asarray(ts, dtype=np.float64)
    acc = np.zeros(ts.shape, dtype=np.complex128)
    for n, r in zip(plan.ns, plan.rs):
        acc += r * np.exp(-1j * math.log(int(n)) * ts)
    return np.abs(acc) ** 2


# ---------------------------------------------------------------------------
# Dumps
# ---------------------------------------------------------------------------

def dump_recipe(recipe: WeightRecipe, spec: LFunctionSpec, path: str | Path) -> None:
    """Key=value dump with all derived constants."""
    lines = [
        f"sigma={recipe.sigma:.17g}",
        f"ell={recipe.ell:.17g}",
        f"c={'' if recipe.c is None else format(recipe.c, '.17g')}",
        f"support_lo={recipe.support_lo:.17g}",
        f"support_hi={recipe.support_hi:.17g}",
        f"M_res={recipe.M_res:.17g}",
        f"window_ratio={recipe.window_ratio:.17g}",
        f"C_L={growth_constant(recipe.sigma, spec.kappa, spec.m):.17g}",
        f"theta={theta_exponent(recipe.sigma):.17g}",
    ]
    Path(path).write_text("\n".join(lines) + "\n")


def dump_plan(plan: ResonatorPlan, path: str | Path) -> None:
    """CSV n,re_r,im_r."""
    with open(path, "w", newline="") as fh:
        fh.write("n,re_r,im_r\n")
        for n, r in zip(plan.ns, plan.rs):
            fh.write(f"{int(n)},{r.real:.17g},{r.imag:.17g}\n")
