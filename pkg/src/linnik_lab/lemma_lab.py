"""Brute-force sifted sums compared with their sieve main terms.

The lemmas these checks target hold only for y astronomically large, so the
error envelopes carry configurable constants (``envelope_constant`` and the
decay constant standing in for kappa / lambda) instead of asserted ones.
Reports also expose ``implied_constant``: the multiplier the envelope would
need to cover the observed error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb
from typing import Callable

import numpy as np

from .errors import DomainError
from .residues import DirichletCharacter, euler_phi
from .sieve import mertens_product, rough_residues, rough_segments, small_primes

J_CAP = 12
DEFAULT_DECAY = 0.1

LEMMA_CSV_COLUMNS = ("kind", "q", "target", "x", "y", "j", "actual", "main", "abs_err", "rel_err", "envelope")


@dataclass
class SiftedSumReport:
    kind: str
    q: int
    target: str
    x: float
    y: float
    j: int
    actual: complex | float
    main_term: complex | float
    abs_error: float
    rel_error: float | None
    envelope: float
    envelope_constant: float
    decay_constant: float
    implied_constant: float

    def as_row(self) -> dict:
        return {"kind": self.kind, "q": self.q, "target": self.target, "x": self.x, "y": self.y, "j": self.j,
                "actual": self.actual, "main": self.main_term, "abs_err": self.abs_error,
                "rel_err": self.rel_error, "envelope": self.envelope}


def _check_j(j: int) -> None:
    if not 0 <= j <= J_CAP:
        raise DomainError(f"j must lie in 0..{J_CAP}")


def sifted_char_sum(x: float, y: float, chi: DirichletCharacter, j: int = 0, t: float = 0.0) -> complex:
    """Sum of chi(n) (log n)^j n^{it} over y-rough n <= x (n = 1 included)."""
    if y < 1 or x < 1:
        return 0j
    _check_j(j)
    re_parts, im_parts = [], []
    for n in rough_segments(x, y):
        w = chi.values(n)
        logn = np.log(n.astype(float))
        if j:
            w = w * logn**j
        if t:
            w = w * np.exp(1j * t * logn)
        total = complex(w.sum())
        re_parts.append(total.real)
        im_parts.append(total.imag)
    return complex(math.fsum(re_parts), math.fsum(im_parts))


def sifted_ap_sum(x: float, y: float, q: int, a: int, j: int = 0) -> float:
    """Sum of (log n)^j over y-rough n <= x with n = a mod q."""
    if math.gcd(a, q) != 1:
        raise DomainError(f"gcd({a}, {q}) > 1")
    _check_j(j)
    if x < 1:
        return 0.0
    return float(rough_residues(x, y, q, j)[a % q])


def adaptive_simpson(f: Callable[[float], float], a: float, b: float, rel_tol: float = 1e-12,
                     max_depth: int = 60) -> float:
    """Adaptive Simpson quadrature with Richardson correction."""
    if a == b:
        return 0.0
    # coarse pass fixes the absolute target
    n0 = 16
    xs = np.linspace(a, b, 2 * n0 + 1)
    fx = [f(v) for v in xs]
    h = (b - a) / (2 * n0)
    coarse = h / 3 * (fx[0] + fx[-1] + 4 * sum(fx[1:-1:2]) + 2 * sum(fx[2:-1:2]))
    target = rel_tol * abs(coarse) or rel_tol
    parts = []
    stack = []
    for i in range(n0):
        lo, hi = xs[2 * i], xs[2 * i + 2]
        fl, fm, fh = fx[2 * i], fx[2 * i + 1], fx[2 * i + 2]
        stack.append((lo, hi, fl, fm, fh, (hi - lo) / 6 * (fl + 4 * fm + fh), target / n0, 0))
    while stack:
        lo, hi, fl, fm, fh, whole, eps, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = f(lm), f(rm)
        left = (mid - lo) / 6 * (fl + 4 * flm + fm)
        right = (hi - mid) / 6 * (fm + 4 * frm + fh)
        delta = left + right - whole
        if abs(delta) <= 15 * eps or depth >= max_depth:
            parts.append(left + right + delta / 15)
        else:
            stack.append((lo, mid, fl, flm, fm, left, eps / 2, depth + 1))
            stack.append((mid, hi, fm, frm, fh, right, eps / 2, depth + 1))
    return math.fsum(parts)


def log_power_integral(y: float, x: float, j: int) -> float:
    """Integral of (log t)^j over [y, x], done in v = log t so the integrand is v^j e^v."""
    if x <= y:
        return 0.0
    return adaptive_simpson(lambda v: v**j * math.exp(v), math.log(y), math.log(x))


def verify_sifted_lemma(kind: str, x: float, y: float, q: int, target, j: int = 0,
                        envelope_constant: float = 1.0, decay_constant: float = DEFAULT_DECAY) -> SiftedSumReport:
    """Compare a brute-force sifted sum with its main term and envelope.

    ``kind="character"`` takes a character as ``target``; ``kind="ap"`` takes
    a residue class ``a`` and requires y >= 2q.
    """
    if not x >= y > 1:
        raise DomainError("need x >= y > 1")
    integral = log_power_integral(y, x, j)
    shape = (math.log(x) ** j) * x ** (1 - decay_constant / math.log(y)) / math.log(y)
    if kind == "character":
        chi: DirichletCharacter = target
        q = chi.modulus
        actual = sifted_char_sum(x, y, chi, j)
        main = integral * mertens_product(y) if chi.is_principal else 0.0
        label = chi.label
    elif kind == "ap":
        if y < 2 * q:
            raise DomainError("the progression lemma needs y >= 2q")
        a = int(target)
        actual = sifted_ap_sum(x, y, q, a, j)
        phi = euler_phi(q)
        main = integral * mertens_product(y) / phi
        shape /= phi
        label = str(a)
    else:
        raise DomainError(f"unknown lemma kind {kind!r}")
    abs_error = abs(actual - main)
    rel_error = abs_error / abs(main) if main != 0 else None
    return SiftedSumReport(kind, q, label, x, y, j, actual, main, abs_error, rel_error,
                           envelope_constant * shape, envelope_constant, decay_constant, abs_error / shape)


def divisor_count_bound(m: int, k: np.ndarray) -> np.ndarray:
    """tau_m(p^k) = C(k + m - 1, m - 1)."""
    return np.array([comb(int(kk) + m - 1, m - 1) for kk in np.atleast_1d(k)], dtype=float)


@dataclass(frozen=True)
class ShiuSpec:
    """A multiplicative f with 0 <= f <= tau_m, given by its values on prime powers.

    ``prime_power_value(p, k)`` receives integer arrays and returns f(p^k).
    """

    m: int
    prime_power_value: Callable[[np.ndarray, np.ndarray], np.ndarray]
    label: str = "f"

    def __call__(self, p, k) -> np.ndarray:
        p = np.atleast_1d(np.asarray(p, dtype=np.int64))
        k = np.atleast_1d(np.asarray(k, dtype=np.int64))
        vals = np.broadcast_to(np.asarray(self.prime_power_value(p, k), dtype=float), p.shape)
        if len(vals):
            bound = divisor_count_bound(self.m, np.unique(k))[np.searchsorted(np.unique(k), k)]
            if np.any(vals < 0) or np.any(vals > bound + 1e-12):
                raise DomainError(f"{self.label} violates 0 <= f <= tau_{self.m} on a supplied prime power")
        return vals

    @classmethod
    def constant_one(cls) -> "ShiuSpec":
        return cls(1, lambda p, k: np.ones(len(p)), "one")

    @classmethod
    def rough_indicator(cls, y: float) -> "ShiuSpec":
        return cls(1, lambda p, k: (p > y).astype(float), f"rough[{y:g}]")

    @classmethod
    def divisor(cls, m: int) -> "ShiuSpec":
        return cls(m, lambda p, k: divisor_count_bound(m, k), f"tau_{m}")


def multiplicative_window(spec: ShiuSpec, lo: int, hi: int) -> np.ndarray:
    """f(n) for every n in [lo, hi], by sieving the window with primes <= sqrt(hi)."""
    n = np.arange(lo, hi + 1, dtype=np.int64)
    rest = n.copy()
    vals = np.ones(len(n))
    for p in small_primes(math.isqrt(hi)).tolist():
        start = -(-lo // p) * p
        if start > hi:
            continue
        idx = np.arange(start - lo, len(n), p)
        k = np.zeros(len(idx), dtype=np.int64)
        sub = rest[idx]
        while True:
            div = sub % p == 0
            if not div.any():
                break
            sub = np.where(div, sub // p, sub)
            k += div
        rest[idx] = sub
        vals[idx] *= spec(np.full(len(idx), p), k)
    big = rest > 1
    if big.any():
        vals[big] *= spec(rest[big], np.ones(int(big.sum()), dtype=np.int64))
    return vals


@dataclass
class ShiuRatio:
    label: str
    x: float
    window: float
    q: int
    a: int
    lhs: float
    rhs: float
    ratio: float

    def as_row(self) -> dict:
        return dict(self.__dict__)


def shiu_ratio(spec: ShiuSpec, x: float, window: float, q: int, a: int, epsilon: float = 0.1) -> ShiuRatio:
    """Short-interval AP sum of f against (window/q) exp(sum_{p <= x, p !| q} (f(p) - 1)/p)."""
    if math.gcd(a, q) != 1:
        raise DomainError(f"gcd({a}, {q}) > 1")
    if not 1 <= window <= x:
        raise DomainError("need 1 <= window <= x")
    if window / q < x**epsilon:
        raise DomainError(f"window/q = {window / q:.4g} is below x^eps = {x ** epsilon:.4g}")
    hi = int(math.floor(x))
    lo = int(math.floor(x - window)) + 1
    vals = multiplicative_window(spec, lo, hi)
    n = np.arange(lo, hi + 1)
    lhs = math.fsum(vals[n % q == a % q].tolist())
    p = small_primes(hi)
    p = p[q % p != 0] if q > 1 else p
    fp = spec(p, np.ones(len(p), dtype=np.int64))
    rhs = window / q * math.exp(math.fsum(((fp - 1) / p).tolist()))
    return ShiuRatio(spec.label, x, window, q, a, lhs, rhs, lhs / rhs)
