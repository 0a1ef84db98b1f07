"""Selberg-class L-functions with polynomial Euler product.

An L-function is described by its local data at primes: either the trivial
case a(n) = 1 (zeta), a Dirichlet character table, or an explicit table of
Euler roots alpha_1(p), ..., alpha_m(p).  Coefficients at prime powers are
the complete homogeneous symmetric polynomials of the roots,

    a(p^b) = h_b(alpha_1(p), ..., alpha_m(p)),

extended multiplicatively.  The Ramanujan bound corresponds to
|alpha_j(p)| <= 1, which forces |a(p)| <= m.

Evaluation on a vertical line uses the smoothed, truncated polynomial

    S(sigma + it; X) = sum_{n <= ceil(X log X)} a(n) n^{-sigma-it} e^{-n/X},

which tracks L(sigma+it) once X is a sufficiently large power of t.  For
zeta-like coefficients (a(n) identically 1) the truncated sum is also
computed for cutoffs far beyond any summation budget, by Euler-Maclaurin
over the smooth summand plus a Filon-Legendre oscillatory integral; the two
routes agree to ~1e-12 where both apply.

An independent Euler-Maclaurin evaluator for zeta itself (reference_zeta)
serves as the cross-validation oracle and never shares code with the
smoothed polynomial.
"""

from __future__ import annotations

import csv
import math
import cmath
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import bernoulli, spherical_jn

from .primes import factorize, primes_in_range, sieve_primes, smallest_prime_factor

__all__ = [
    "LFunctionSpec",
    "SmoothingWindow",
    "TentSum",
    "InsufficientEulerDataError",
    "BudgetExceededError",
    "zeta_spec",
    "dirichlet_spec",
    "euler_roots_spec",
    "coeff",
    "coeff_block",
    "smoothed_value",
    "reference_zeta",
    "reference_zeta_grid",
    "prime_sum_stats",
    "tent_sum",
    "load_spec",
    "save_spec",
]

DIRECT_TERM_BUDGET = 1 << 24  # largest cutoff summed term by term


class InsufficientEulerDataError(ValueError):
    """A coefficient was requested at a prime with no stored Euler roots."""


class BudgetExceededError(ValueError):
    """The smoothing cutoff exceeds the configured term budget."""


# ---------------------------------------------------------------------------
# Dirichlet characters mod q, indexed through the generator decomposition of
# (Z/qZ)*.  Index 0 is the principal character; for cyclic groups index k
# sends the generator to exp(2 pi i k / ord).
# ---------------------------------------------------------------------------

def _primitive_root_mod_prime_power(p: int, e: int) -> int:
    phi = p - 1
    fac = [f for f, _ in factorize(phi)]
    g = 2
    while True:
        if all(pow(g, phi // f, p) != 1 for f in fac):
            break
        g += 1
    if e == 1:
        return g
    # lift: g generates mod p^e unless g^(p-1) == 1 mod p^2
    if pow(g, p - 1, p * p) == 1:
        g += p
    return g


def _unit_group_generators(q: int) -> list[tuple[int, int]]:
    """Generators of (Z/qZ)* as [(g, order)], combined via CRT."""
    parts = []  # (modulus, [(gen mod modulus, order)])
    for p, e in factorize(q):
        pe = p**e
        if p == 2:
            if e == 1:
                parts.append((2, []))
            elif e == 2:
                parts.append((4, [(3, 2)]))
            else:
                parts.append((pe, [(pe - 1, 2), (3, 2 ** (e - 2))]))
        else:
            g = _primitive_root_mod_prime_power(p, e)
            parts.append((pe, [(g, pe // p * (p - 1))]))
    gens = []
    for modulus, local in parts:
        other = q // modulus
        for g, order in local:
            # lift to x = g mod modulus, x = 1 mod other
            if other == 1:
                gens.append((g % q, order))
            else:
                inv = pow(modulus, -1, other)
                x = (g + modulus * ((1 - g) * inv % other)) % q
                gens.append((x, order))
    return gens


def character_table(q: int, index: int) -> np.ndarray:
    """Value table chi[n mod q] of the Dirichlet character with this index."""
    if q < 1:
        raise ValueError("modulus must be >= 1")
    if q == 1:
        if index != 0:
            raise ValueError("only character index 0 exists mod 1")
        return np.ones(1, dtype=np.complex128)
    gens = _unit_group_generators(q)
    n_chars = math.prod(o for _, o in gens) if gens else 1
    if not 0 <= index < n_chars:
        raise ValueError(f"character index {index} out of range [0, {n_chars}) mod {q}")
    ks = []
    rem = index
    for _, order in gens:
        ks.append(rem % order)
        rem //= order
    table = np.zeros(q, dtype=np.complex128)
    # enumerate the unit group as products of generator powers
    residues = [1]
    values = [1.0 + 0.0j]
    for (g, order), k in zip(gens, ks):
        root = cmath.exp(2j * math.pi * k / order)
        new_r, new_v = [], []
        ge, val = 1, 1.0 + 0.0j
        for _ in range(order):
            for r, v in zip(residues, values):
                new_r.append(r * ge % q)
                new_v.append(v * val)
            ge = ge * g % q
            val *= root
        residues, values = new_r, new_v
    table[np.array(residues)] = np.array(values)
    return table


# ---------------------------------------------------------------------------
# L-function specs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LFunctionSpec:
    """Coefficient source plus the constants (d_L, kappa, m) of an L-function.

    coeff_kind is one of "zeta", "dirichlet-character", "euler-roots".
    For euler-roots, `roots` maps p -> tuple of m complex roots and
    `roots_bound` declares the largest prime covered; asking for a
    coefficient that needs a prime beyond the table is an error, never a
    silent zero.  `delta` is the prime-power coefficient growth exponent
    used only in reported diagnostic bounds.
    """

    name: str
    coeff_kind: str
    degree_dL: float = 1.0
    kappa: float = 1.0
    m: int = 1
    q: int = 0
    char_index: int = 0
    roots: dict[int, tuple[complex, ...]] = field(default_factory=dict)
    roots_bound: int = 0
    delta: float = 0.0

    def __post_init__(self):
        if self.coeff_kind not in ("zeta", "dirichlet-character", "euler-roots"):
            raise ValueError(f"unknown coeff_kind {self.coeff_kind!r}")
        if self.degree_dL <= 0 or self.kappa <= 0 or self.m < 1:
            raise ValueError("degree_dL, kappa must be positive and m >= 1")
        if self.coeff_kind == "zeta" and (self.degree_dL != 1 or self.kappa != 1 or self.m != 1):
            raise ValueError("zeta requires d_L = 1, kappa = 1, m = 1")
        if self.coeff_kind == "euler-roots":
            for p, al in self.roots.items():
                if len(al) != self.m:
                    raise ValueError(f"root tuple at p={p} has length {len(al)} != m={self.m}")
                if any(abs(a) > 1 + 1e-12 for a in al):
                    raise ValueError(f"|alpha_j({p})| > 1 violates the Ramanujan bound")
        if self.coeff_kind == "dirichlet-character":
            character_table(self.q, self.char_index)  # validates q, index
        # |a(p)| <= m with tolerance; zeta and characters attain equality.
        for p in (2, 3, 5, 7):
            try:
                ap = coeff(self, p)
            except InsufficientEulerDataError:
                continue
            if abs(ap) > self.m + 1e-9:
                raise ValueError(f"|a({p})| = {abs(ap)} exceeds m = {self.m}")

    def character(self) -> np.ndarray:
        return character_table(self.q, self.char_index)


def zeta_spec() -> LFunctionSpec:
    return LFunctionSpec(name="zeta", coeff_kind="zeta")


def dirichlet_spec(q: int, char_index: int, name: str | None = None) -> LFunctionSpec:
    return LFunctionSpec(
        name=name or f"dirichlet-{q}-{char_index}",
        coeff_kind="dirichlet-character",
        q=q,
        char_index=char_index,
    )


def euler_roots_spec(
    name: str,
    roots: dict[int, tuple[complex, ...]],
    m: int,
    degree_dL: float,
    kappa: float,
    delta: float = 0.0,
) -> LFunctionSpec:
    bound = max(roots) if roots else 0
    return LFunctionSpec(
        name=name,
        coeff_kind="euler-roots",
        degree_dL=degree_dL,
        kappa=kappa,
        m=m,
        roots=dict(roots),
        roots_bound=bound,
        delta=delta,
    )


# ---------------------------------------------------------------------------
# Coefficients
# ---------------------------------------------------------------------------

def _local_coeffs(roots: tuple[complex, ...], max_exp: int) -> np.ndarray:
    """a(p^b) for b = 0..max_exp from the roots: series of prod 1/(1 - alpha x)."""
    m = len(roots)
    # elementary symmetric e_k via expansion of prod (1 - alpha x)
    e = np.zeros(m + 1, dtype=np.complex128)
    e[0] = 1.0
    for a in roots:
        e[1:] = e[1:] - a * e[:-1]
    h = np.zeros(max_exp + 1, dtype=np.complex128)
    h[0] = 1.0
    for b in range(1, max_exp + 1):
        acc = 0.0 + 0.0j
        for k in range(1, min(b, m) + 1):
            acc -= e[k] * h[b - k]
        h[b] = acc
    return h


def _roots_at(spec: LFunctionSpec, p: int) -> tuple[complex, ...]:
    try:
        return spec.roots[p]
    except KeyError:
        raise InsufficientEulerDataError(
            f"insufficient Euler data: no roots stored for prime {p} "
            f"(table covers primes <= {spec.roots_bound})"
        ) from None


def coeff(spec: LFunctionSpec, n: int) -> complex:
    """Dirichlet coefficient a(n); multiplicative, a(1) = 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if spec.coeff_kind == "zeta":
        return 1.0 + 0.0j
    if spec.coeff_kind == "dirichlet-character":
        return complex(spec.character()[n % spec.q]) if spec.q > 1 else 1.0 + 0.0j
    out = 1.0 + 0.0j
    for p, b in factorize(n):
        out *= _local_coeffs(_roots_at(spec, p), b)[b]
    return out


def coeff_block(spec: LFunctionSpec, n_max: int) -> np.ndarray:
    """a(1..n_max) as a complex array (index 0 unused)."""
    if spec.coeff_kind == "zeta":
        out = np.ones(n_max + 1, dtype=np.complex128)
        out[0] = 0.0
        return out
    if spec.coeff_kind == "dirichlet-character":
        table = spec.character()
        reps = np.tile(table, n_max // spec.q + 1)
        out = np.empty(n_max + 1, dtype=np.complex128)
        out[: n_max + 1] = reps[: n_max + 1]
        out[0] = 0.0
        return out
    spf = smallest_prime_factor(n_max)
    local: dict[int, np.ndarray] = {}
    out = np.zeros(n_max + 1, dtype=np.complex128)
    out[1] = 1.0
    for n in range(2, n_max + 1):
        p = int(spf[n])
        m, b = n, 0
        while m % p == 0:
            m //= p
            b += 1
        lc = local.get(p)
        if lc is None or len(lc) <= b:
            lc = _local_coeffs(_roots_at(spec, p), max(b, 8))
            local[p] = lc
        out[n] = out[m] * lc[b]
    return out


# ---------------------------------------------------------------------------
# Smoothing window and the truncated smoothed polynomial
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SmoothingWindow:
    """Exponential smoothing scale X with cutoff ceil(X log X)."""

    X: float

    def __post_init__(self):
        if self.X < 16:
            raise ValueError("smoothing scale X must be >= 16")

    @property
    def cutoff(self) -> int:
        return math.ceil(self.X * math.log(self.X))


_GL_NODES, _GL_W = leggauss(24)
_LEG_DEG = 20
_LEG_P = np.zeros((_LEG_DEG + 1, len(_GL_NODES)))
_LEG_P[0] = 1.0
_LEG_P[1] = _GL_NODES
for _j in range(1, _LEG_DEG):
    _LEG_P[_j + 1] = ((2 * _j + 1) * _GL_NODES * _LEG_P[_j] - _j * _LEG_P[_j - 1]) / (_j + 1)
_BERN = bernoulli(40)
_EM_ORDER = 12


def _direct_smoothed(spec: LFunctionSpec, sigma: float, t: float, X: float, n_hi: int,
                     n_lo: int = 1) -> complex:
    """sum_{n_lo <= n <= n_hi} a(n) n^(-sigma-it) e^(-n/X), ascending chunks."""
    total = 0.0 + 0.0j
    chunk = 1 << 21
    need_coeffs = spec.coeff_kind != "zeta"
    coeffs = coeff_block(spec, n_hi) if need_coeffs else None
    for lo in range(n_lo, n_hi + 1, chunk):
        hi = min(n_hi, lo + chunk - 1)
        n = np.arange(lo, hi + 1, dtype=np.float64)
        ln = np.log(n)
        terms = np.exp(-sigma * ln - n / X) * np.exp(-1j * t * ln)
        if need_coeffs:
            terms = terms * coeffs[lo : hi + 1]
        total += np.sum(terms)
    return complex(total)


def _filon_integral(sigma: float, t: float, X: float, a: float, b: float) -> complex:
    """integral_{e^a}^{e^b} y^(-sigma-it) e^(-y/X) dy.

    Substituting u = log y gives a smooth positive envelope
    E(u) = exp((1-sigma) u - e^u / X) against the pure tone e^{-itu}; each
    panel expands E in Legendre polynomials and integrates the tone exactly
    through spherical Bessel moments.
    """
    total = 0.0 + 0.0j
    js = np.arange(_LEG_DEG + 1)
    phase_j = (-1j) ** js
    u0 = a
    while u0 < b:
        slope = abs((1.0 - sigma) - math.exp(u0) / X)
        u1 = min(b, u0 + min(2.0, 3.0 / (1.0 + slope)))
        hw = 0.5 * (u1 - u0)
        uc = 0.5 * (u1 + u0)
        u = uc + hw * _GL_NODES
        env = np.exp((1.0 - sigma) * u - np.exp(u) / X)
        cj = (2 * js + 1) / 2.0 * (_LEG_P @ (_GL_W * env))
        moments = 2.0 * phase_j * spherical_jn(js, t * hw)
        total += hw * cmath.exp(-1j * t * uc) * np.dot(cj, moments)
        u0 = u1
    return total


def _summand_taylor(sigma: float, t: float, X: float, y: float, order: int) -> np.ndarray:
    """Taylor coefficients G_r of g(y) = y^(-s) e^(-y/X); g^(r) = r! G_r."""
    s = complex(sigma, t)
    ly = math.log(y)
    H = np.zeros(order + 1, dtype=np.complex128)
    H[1] = -s / y - 1.0 / X
    for r in range(2, order + 1):
        e = -r * ly
        H[r] = ((-1) ** r) * s * (math.exp(e) if e > -700 else 0.0) / r
    G = np.zeros(order + 1, dtype=np.complex128)
    G[0] = math.exp(-sigma * ly - y / X) * cmath.exp(-1j * t * ly)
    for r in range(1, order + 1):
        G[r] = sum(j * H[j] * G[r - j] for j in range(1, r + 1)) / r
    return G


def _analytic_smoothed(sigma: float, t: float, X: float, cutoff: int) -> complex:
    """Truncated smoothed sum with a(n) = 1, any cutoff: Euler-Maclaurin tail."""
    spec = zeta_spec()
    n0 = max(64, math.ceil(abs(t)))
    if n0 >= cutoff:
        return _direct_smoothed(spec, sigma, t, X, cutoff)
    direct = _direct_smoothed(spec, sigma, t, X, n0)
    integral = _filon_integral(sigma, t, X, math.log(n0), math.log(cutoff))
    g_lo = _summand_taylor(sigma, t, X, float(n0), 2 * _EM_ORDER)
    g_hi = _summand_taylor(sigma, t, X, float(cutoff), 2 * _EM_ORDER)
    tail = integral + 0.5 * (g_lo[0] + g_hi[0])
    for k in range(1, _EM_ORDER + 1):
        tail += (_BERN[2 * k] / (2 * k)) * (g_hi[2 * k - 1] - g_lo[2 * k - 1])
    return direct + tail - g_lo[0]


def smoothed_value(
    spec: LFunctionSpec,
    sigma: float,
    t: float,
    window: SmoothingWindow,
    term_budget: int = DIRECT_TERM_BUDGET,
) -> complex:
    """Truncated smoothed polynomial sum_{n <= cutoff} a(n) n^(-sigma-it) e^(-n/X).

    Deterministic for fixed inputs.  Cutoffs within the term budget are
    summed directly in ascending chunks; for a(n) identically 1 any cutoff
    is handled by the Euler-Maclaurin route (validated against the direct
    route to ~1e-12 where both apply).
    """
    if not 0 < sigma <= 3:
        raise ValueError("sigma must lie in (0, 3]")
    cutoff = window.cutoff
    if cutoff <= term_budget:
        return _direct_smoothed(spec, sigma, t, window.X, cutoff)
    if spec.coeff_kind == "zeta":
        return _analytic_smoothed(sigma, t, window.X, cutoff)
    raise BudgetExceededError(
        f"budget exceeded: cutoff {cutoff} needs a term budget of at least "
        f"{cutoff} (have {term_budget})"
    )


# ---------------------------------------------------------------------------
# Independent reference evaluator for zeta (Euler-Maclaurin on zeta itself)
# ---------------------------------------------------------------------------

_REF_ORDER = 18


def _zeta_em_tail(s: complex, N: int, pow_term: complex) -> complex:
    """- N^-s/2 + N^(1-s)/(s-1) + Bernoulli corrections, given pow_term = N^-s."""
    total = -0.5 * pow_term + pow_term * N / (s - 1)
    term = (_BERN[2] / 2.0) * s * pow_term / N
    total += term
    for k in range(2, _REF_ORDER + 1):
        term *= (_BERN[2 * k] / _BERN[2 * k - 2]) * (s + 2 * k - 3) * (s + 2 * k - 2) / (
            (2 * k) * (2 * k - 1) * N * N
        )
        total += term
    return total


def reference_zeta(sigma: float, t: float) -> complex:
    """zeta(sigma + it) by Euler-Maclaurin; ~1e-9 relative over the range.

    Main sum length max(50, ceil(0.32 |t|)) keeps |s|/(2 pi N) below ~0.5 so
    the order-18 correction tail converges; the shorter 10 sqrt|t| rule
    diverges already near |t| = 1e4.
    """
    if not 0.5 <= sigma <= 3:
        raise ValueError("sigma must lie in [1/2, 3]")
    if abs(t) > 1e9:
        raise ValueError("|t| must be <= 1e9")
    s = complex(sigma, t)
    if abs(s - 1) < 1e-12:
        raise ValueError("zeta has a pole at s = 1")
    N = max(50, math.ceil(0.32 * abs(t)))
    n = np.arange(1, N + 1, dtype=np.float64)
    ln = np.log(n)
    main = complex(np.sum(np.exp(-sigma * ln) * np.exp(-1j * t * ln)))
    pow_term = cmath.exp(-s * math.log(N))
    return main + _zeta_em_tail(s, N, pow_term)


def reference_zeta_grid(sigma: float, ts: np.ndarray) -> np.ndarray:
    """reference_zeta at many heights with one shared main-sum length."""
    ts = np.asarray(ts, dtype=np.float64)
    if not 0.5 <= sigma <= 3:
        raise ValueError("sigma must lie in [1/2, 3]")
    t_max = float(np.max(np.abs(ts))) if ts.size else 0.0
    if t_max > 1e9:
        raise ValueError("|t| must be <= 1e9")
    N = max(50, math.ceil(0.32 * t_max))
    n = np.arange(1, N + 1, dtype=np.float64)
    ln = np.log(n)
    npow = np.exp(-sigma * ln)
    out = np.empty(ts.shape, dtype=np.complex128)
    lnN = math.log(N)
    for i, t in enumerate(ts):
        s = complex(sigma, t)
        main = complex(np.sum(npow * np.exp(-1j * t * ln)))
        out[i] = main + _zeta_em_tail(s, N, cmath.exp(-s * lnN))
    return out


# ---------------------------------------------------------------------------
# Prime sums
# ---------------------------------------------------------------------------

def prime_sum_stats(spec: LFunctionSpec, x: float, power: int) -> float:
    """sum_{p <= x} |a(p)|^power over sieve primes; compare to kappa x / log x."""
    if x < 2:
        raise ValueError("x must be >= 2")
    if power not in (1, 2):
        raise ValueError("power must be 1 or 2")
    ps = sieve_primes(int(math.floor(x)))
    if spec.coeff_kind == "zeta":
        return float(len(ps))
    total = 0.0
    for p in ps:
        total += abs(coeff(spec, int(p))) ** power
    return total


class TentSum(NamedTuple):
    value: float
    delta: float


def tent_sum(spec: LFunctionSpec, sigma: float, t0: float, x: float, theta: float = 0.0) -> TentSum:
    """Tent-weighted prime cosine sum near x, plus its weight total Delta.

    value = sum_{|log(p/x)| <= 1} (|a(p)|/p^sigma) cos(t0 log p + theta - omega_p)
            * (1 - |log(p/x)|),      omega_p = arg a(p) (0 if a(p) = 0)
    delta = the same sum with the cosine replaced by 1.
    """
    if x <= 2:
        raise ValueError("x must be > 2")
    ps = primes_in_range(x / math.e, math.e * x)
    value = 0.0
    delta = 0.0
    for p in ps:
        w = 1.0 - abs(math.log(p / x))
        if w < 0:
            continue
        ap = coeff(spec, int(p))
        mag = abs(ap)
        if mag == 0.0:
            continue
        omega = cmath.phase(ap)
        amp = mag * p ** (-sigma) * w
        value += amp * math.cos(t0 * math.log(p) + theta - omega)
        delta += amp
    return TentSum(value, delta)


# ---------------------------------------------------------------------------
# Spec files: one key=value per line; euler-roots tables as CSV
# p,re_alpha_1,im_alpha_1,...
# ---------------------------------------------------------------------------

def save_spec(spec: LFunctionSpec, path: str | Path) -> None:
    path = Path(path)
    lines = [f"name={spec.name}", f"kind={spec.coeff_kind}"]
    if spec.coeff_kind == "dirichlet-character":
        lines += [f"q={spec.q}", f"char_index={spec.char_index}"]
    lines += [f"kappa={spec.kappa:.17g}", f"m={spec.m}", f"dL={spec.degree_dL:.17g}",
              f"delta={spec.delta:.17g}"]
    if spec.coeff_kind == "euler-roots":
        roots_path = path.with_suffix(".roots.csv")
        lines.append(f"roots={roots_path.name}")
        with open(roots_path, "w", newline="") as fh:
            w = csv.writer(fh)
            for p in sorted(spec.roots):
                row = [p]
                for a in spec.roots[p]:
                    row += [f"{a.real:.17g}", f"{a.imag:.17g}"]
                w.writerow(row)
    path.write_text("\n".join(lines) + "\n")


def load_spec(path: str | Path) -> LFunctionSpec:
    path = Path(path)
    kv: dict[str, str] = {}
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, val = line.partition("=")
        kv[key.strip()] = val.strip()
    kind = kv.get("kind", "zeta")
    name = kv.get("name", path.stem)
    kappa = float(kv.get("kappa", "1"))
    m = int(kv.get("m", "1"))
    dL = float(kv.get("dL", "1"))
    delta = float(kv.get("delta", "0"))
    if kind == "zeta":
        return zeta_spec()
    if kind == "dirichlet-character":
        return LFunctionSpec(
            name=name, coeff_kind=kind, degree_dL=dL, kappa=kappa, m=m,
            q=int(kv["q"]), char_index=int(kv.get("char_index", "0")), delta=delta,
        )
    if kind == "euler-roots":
        roots_file = path.parent / kv["roots"]
        roots: dict[int, tuple[complex, ...]] = {}
        with open(roots_file, newline="") as fh:
            for row in csv.reader(fh):
                if not row:
                    continue
                p = int(row[0])
                vals = [float(v) for v in row[1:]]
                roots[p] = tuple(complex(vals[2 * j], vals[2 * j + 1]) for j in range(len(vals) // 2))
        return euler_roots_spec(name, roots, m=m, degree_dL=dL, kappa=kappa, delta=delta)
    raise ValueError(f"unknown kind {kind!r} in {path}")
