"""Inhomogeneous Diophantine approximation in the l^2 sense.

For frequencies lambda_j, targets beta_j, weights delta_j > 0 and a box
bound M on integer combinations, the guaranteed bound on the best weighted
squared distance inside a window [T1, T2) is

    inf_t sum_j delta_j ||lambda_j t - beta_j||^2
        <= (Delta/4) sin^2(pi / (2(M+1))) + Delta M^n / (4 pi Lambda (T2-T1)),

where Delta = sum delta_j, ||.|| is the distance to the nearest integer and
Lambda is the smallest nonzero |sum u_j lambda_j| over integer u with
|u_j| <= M.  For lambda_j = log(p_j)/(2 pi) with distinct primes, Lambda is
attained (unique factorization) and is computed exactly by big-integer
enumeration; the cheap analytic floor log(1 + P^-M)/(2 pi), P = prod p_j,
never exceeds it.

search_t realises the infimum numerically: a grid scan at a quarter of the
fastest phase period followed by golden-section refinement of the best
cells, with ties always resolved toward smaller t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from pathlib import Path

import numpy as np

__all__ = [
    "ChenInstance",
    "chen_bound",
    "lambda_exact",
    "lambda_analytic",
    "objective",
    "objective_grid",
    "search_t",
    "cos_floor",
    "instance_from_primes",
    "save_instance",
    "load_instance",
]

TWO_PI = 2.0 * math.pi
ENUMERATION_BUDGET = 100_000_000


@dataclass(frozen=True)
class ChenInstance:
    lambdas: tuple[float, ...]
    betas: tuple[float, ...]
    deltas: tuple[float, ...]
    M: int
    T1: float
    T2: float
    primes: tuple[int, ...] = field(default=())

    def __post_init__(self):
        n = len(self.lambdas)
        if len(self.betas) != n or len(self.deltas) != n:
            raise ValueError("lambdas, betas, deltas must have equal lengths")
        if n == 0:
            raise ValueError("instance must have at least one phase")
        if any(l <= 0 for l in self.lambdas):
            raise ValueError("lambdas must be positive")
        if any(d < 0 for d in self.deltas):
            raise ValueError("deltas must be non-negative")
        if self.M < 1:
            raise ValueError("M must be >= 1")
        if not self.T1 < self.T2:
            raise ValueError("need T1 < T2")

    @property
    def n(self) -> int:
        return len(self.lambdas)

    @property
    def delta_total(self) -> float:
        return math.fsum(self.deltas)


def instance_from_primes(primes: list[int], betas, deltas, M: int,
                         T1: float, T2: float) -> ChenInstance:
    """lambda_j = log(p_j) / (2 pi) for distinct primes p_j."""
    ps = list(primes)
    if len(set(ps)) != len(ps):
        raise ValueError("primes must be distinct")
    lams = tuple(math.log(p) / TWO_PI for p in ps)
    return ChenInstance(lams, tuple(betas), tuple(deltas), M, T1, T2,
                        primes=tuple(ps))


def chen_bound(inst: ChenInstance, lam: float) -> float:
    """(Delta/4) sin^2(pi/(2(M+1))) + Delta M^n / (4 pi Lambda (T2-T1)).

    The M^n factor is taken through log-space so huge n cannot overflow.
    """
    if lam <= 0:
        raise ValueError("Lambda must be positive")
    delta = inst.delta_total
    if delta == 0:
        return 0.0
    main = 0.25 * delta * math.sin(math.pi / (2 * (inst.M + 1))) ** 2
    log_second = (
        inst.n * math.log(inst.M)
        - math.log(4 * math.pi)
        - math.log(lam)
        - math.log(inst.T2 - inst.T1)
    )
    second = delta * (math.exp(log_second) if log_second < 700 else math.inf)
    return main + second


def lambda_exact(primes: list[int], M: int,
                 budget: int = ENUMERATION_BUDGET) -> float:
    """Exact min of |sum u_j log p_j| / (2 pi) over nonzero u, |u_j| <= M.

    Candidates are compared as exact big-integer ratios prod p^u = a/b; the
    final logarithm is log1p((a-b)/b) so nearly-equal a, b lose no accuracy.
    """
    ps = list(primes)
    n = len(ps)
    if n == 0:
        raise ValueError("need at least one prime")
    if len(set(ps)) != n:
        raise ValueError("primes must be distinct")
    if M < 1:
        raise ValueError("M must be >= 1")
    if (2 * M + 1) ** n > budget:
        raise ValueError(
            f"budget exceeded: (2M+1)^n = {(2*M+1)**n} > {budget}; "
            "use lambda_analytic instead"
        )
    best: tuple[int, int] | None = None  # (a, b) with a > b, minimal a/b
    for u in product(range(-M, M + 1), repeat=n):
        if all(v == 0 for v in u):
            continue
        if next(v for v in u if v != 0) < 0:
            continue  # symmetry u -> -u
        a = b = 1
        for p, v in zip(ps, u):
            if v > 0:
                a *= p**v
            elif v < 0:
                b *= p ** (-v)
        if a < b:
            a, b = b, a
        # a == b impossible: distinct prime factorizations
        if best is None or a * best[1] < best[0] * b:
            best = (a, b)
    a, b = best
    return math.log1p(float(Fraction(a - b, b))) / TWO_PI


def lambda_analytic(primes: list[int], M: int) -> float:
    """Floor log(1 + P^-M) / (2 pi), P = prod p_j; always <= lambda_exact."""
    ps = list(primes)
    if len(ps) == 0:
        raise ValueError("need at least one prime")
    log_p = math.fsum(math.log(p) for p in ps)
    return math.log1p(math.exp(-M * log_p)) / TWO_PI


def _dist_to_int(y: np.ndarray) -> np.ndarray:
    return np.abs(y - np.rint(y))


def objective(inst: ChenInstance, t: float) -> float:
    """sum_j delta_j ||lambda_j t - beta_j||^2; lies in [0, Delta/4]."""
    total = 0.0
    for lam, beta, d in zip(inst.lambdas, inst.betas, inst.deltas):
        y = lam * t - beta
        y -= round(y)  # now |y| <= 1/2, the distance to the nearest integer
        total += d * y * y
    return total


def objective_grid(inst: ChenInstance, ts: np.ndarray) -> np.ndarray:
    ts = np.asarray(ts, dtype=np.float64)
    total = np.zeros(ts.shape)
    for lam, beta, d in zip(inst.lambdas, inst.betas, inst.deltas):
        total += d * _dist_to_int(lam * ts - beta) ** 2
    return total


_INV_GOLD = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_min(f, a: float, b: float, iters: int) -> tuple[float, float]:
    c = b - _INV_GOLD * (b - a)
    d = a + _INV_GOLD * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc <= fd:  # tie toward smaller t
            b, d, fd = d, c, fc
            c = b - _INV_GOLD * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_GOLD * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def search_t(inst: ChenInstance, grid_step: float | None = None,
             refine_iters: int = 60, refine_cells: int = 8,
             chunk: int = 1 << 20) -> tuple[float, float]:
    """Best found (t, objective(t)) over [T1, T2).

    Grid scan at grid_step (default, and at most, a quarter period of the
    fastest phase), then golden-section refinement around the best cells.
    The returned value never exceeds the raw grid minimum; ties break
    toward smaller t deterministically.
    """
    max_lam = max(inst.lambdas)
    step_cap = 1.0 / (4.0 * max_lam)
    if grid_step is None:
        grid_step = step_cap / 2.0
    if grid_step > step_cap * (1 + 1e-12):
        raise ValueError(f"grid_step must be <= 1/(4 max lambda) = {step_cap:.6g}")
    span = inst.T2 - inst.T1
    n_pts = int(span / grid_step) + 1
    if n_pts <= 1:
        return inst.T1, objective(inst, inst.T1)

    best_cells: list[tuple[float, float]] = []  # (value, t), kept sorted
    for lo in range(0, n_pts, chunk):
        hi = min(n_pts, lo + chunk)
        ts = inst.T1 + grid_step * np.arange(lo, hi, dtype=np.float64)
        ts = ts[ts < inst.T2]
        if ts.size == 0:
            continue
        vals = objective_grid(inst, ts)
        take = min(refine_cells, ts.size)
        idx = np.argpartition(vals, take - 1)[:take]
        idx = idx[np.lexsort((ts[idx], vals[idx]))]  # value, then smaller t
        best_cells.extend((float(vals[i]), float(ts[i])) for i in idx)
    best_cells.sort()
    best_cells = best_cells[:refine_cells]

    best_v, best_t = best_cells[0]
    if refine_iters > 0:
        f = lambda t: objective(inst, t)
        for v0, t0 in best_cells:
            a = max(inst.T1, t0 - grid_step)
            b = min(inst.T2, t0 + grid_step)
            t_ref, v_ref = _golden_min(f, a, b, refine_iters)
            if v_ref < best_v or (v_ref == best_v and t_ref < best_t):
                best_v, best_t = v_ref, t_ref
    return best_t, best_v


def cos_floor(y: float) -> float:
    """1 - 2 pi^2 ||y / 2 pi||^2, a global lower bound for cos(y)."""
    frac = y / TWO_PI
    frac -= round(frac)
    return 1.0 - 2.0 * math.pi**2 * frac * frac


# ---------------------------------------------------------------------------
# Instance files: header "M=..,T1=..,T2=.." then CSV lambda,beta,delta
# ---------------------------------------------------------------------------

def save_instance(inst: ChenInstance, path: str | Path) -> None:
    lines = [f"M={inst.M},T1={inst.T1:.17g},T2={inst.T2:.17g}", "lambda,beta,delta"]
    for lam, beta, d in zip(inst.lambdas, inst.betas, inst.deltas):
        lines.append(f"{lam:.17g},{beta:.17g},{d:.17g}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_instance(path: str | Path) -> ChenInstance:
    lines = Path(path).read_text().splitlines()
    head = dict(part.split("=") for part in lines[0].split(","))
    lams, betas, deltas = [], [], []
    for line in lines[2:]:
        if not line.strip():
            continue
        a, b, c = line.split(",")
        lams.append(float(a))
        betas.append(float(b))
        deltas.append(float(c))
    return ChenInstance(tuple(lams), tuple(betas), tuple(deltas),
                        int(head["M"]), float(head["T1"]), float(head["T2"]))
