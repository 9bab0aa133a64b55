"""Mean values of finite Dirichlet polynomials and the K/N derivative sandwich."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy.special import gamma, gammaincc

from .errors import ConditioningError, DomainError
from .residues import euler_phi
from .sieve import von_mangoldt_segments

GL_LOW, GL_HIGH = 16, 24
_NODE_CHUNK = 256
_TERM_CHUNK = 1 << 15
# panels advanced by the phase recurrence before the phases are recomputed exactly
_REANCHOR = 16


@dataclass(frozen=True, eq=False)
class DirichletPolynomial:
    """A(s) = sum a_n n^{-s} over a finite support of positive integers."""

    n: np.ndarray
    a: np.ndarray
    label: str = ""
    _logn: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n = np.asarray(self.n, dtype=np.int64)
        a = np.asarray(self.a, dtype=complex)
        if n.shape != a.shape or n.ndim != 1:
            raise DomainError("support and coefficients must be 1-d arrays of equal length")
        if len(n) and n.min() < 1:
            raise DomainError("support must be positive integers")
        order = np.argsort(n, kind="stable")
        n, a = n[order], a[order]
        if len(n) > 1 and np.any(np.diff(n) == 0):
            raise DomainError("repeated support entries")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "_logn", np.log(n.astype(float)))

    @classmethod
    def from_mapping(cls, coefficients: Mapping[int, complex], label: str = "") -> "DirichletPolynomial":
        items = sorted(coefficients.items())
        return cls(np.array([k for k, _ in items], dtype=np.int64), np.array([v for _, v in items], dtype=complex), label)

    def __len__(self) -> int:
        return len(self.n)

    @property
    def max_support(self) -> int:
        return int(self.n.max()) if len(self.n) else 1

    def coefficient(self, m: int) -> complex:
        i = np.searchsorted(self.n, m)
        return complex(self.a[i]) if i < len(self.n) and self.n[i] == m else 0j

    def at_line(self, sigma: float, t) -> np.ndarray:
        """A(sigma + i t) for an array of t."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        c = self.a * np.exp(-sigma * self._logn)
        out = np.empty(len(t), dtype=complex)
        for i in range(0, len(t), _NODE_CHUNK):
            phase = np.outer(t[i : i + _NODE_CHUNK], self._logn)
            out[i : i + _NODE_CHUNK] = np.cos(phase) @ c - 1j * (np.sin(phase) @ c)
        return out

    def on_panels(self, sigma: float, lo: float, width: float, panels: int, x: np.ndarray) -> np.ndarray:
        """A(sigma + it) at t = lo + (p + 1/2 + x/2) width for every panel p, shape (panels, len(x)).

        Moving one panel to the right multiplies each n^{-it} by n^{-i width}, so
        most panels cost complex products instead of fresh cosines and sines.
        """
        out = np.zeros((panels, len(x)), dtype=complex)
        offsets = 0.5 * width * (1.0 + np.asarray(x, dtype=float))
        for k in range(0, len(self.n), _TERM_CHUNK):
            logn = self._logn[k : k + _TERM_CHUNK]
            c = self.a[k : k + _TERM_CHUNK] * np.exp(-sigma * logn)
            step = np.exp(-1j * width * logn)
            for p in range(panels):
                if p % _REANCHOR == 0:
                    phase = np.exp(-1j * np.outer(lo + p * width + offsets, logn))
                else:
                    phase *= step
                out[p] += phase @ c
        return out

    def __call__(self, s: complex) -> complex:
        s = complex(s)
        return complex(self.at_line(s.real, s.imag)[0])

    def derivatives(self, s: complex, k: int) -> np.ndarray:
        """A^{(j)}(s) for j = 0..k, by term-by-term differentiation."""
        base = self.a * np.exp(-complex(s) * self._logn)
        return np.array([np.sum(base * (-self._logn) ** j) for j in range(k + 1)])


def _gl_panels(f, lo: float, hi: float, panels: int, order: int, on_panels=None) -> float:
    x, w = np.polynomial.legendre.leggauss(order)
    if on_panels is not None:
        width = (hi - lo) / panels
        vals = on_panels(lo, width, panels, x)
        half = np.full(panels, 0.5 * width)
    else:
        edges = np.linspace(lo, hi, panels + 1)
        half = 0.5 * np.diff(edges)
        mids = 0.5 * (edges[1:] + edges[:-1])
        nodes = (mids[:, None] + half[:, None] * x[None, :]).ravel()
        vals = f(nodes).reshape(panels, order)
    return math.fsum((vals @ w * half).tolist())


def integrate_oscillatory(f, lo: float, hi: float, max_frequency: float, rel_tol: float = 1e-9,
                          max_panels: int = 1 << 16, on_panels=None) -> float:
    """Composite Gauss-Legendre with panel width <= 2 pi / max_frequency, refined by panel doubling.

    Each pass compares orders 16 and 24 on the same panels. ``on_panels(lo,
    width, panels, x)``, when given, replaces ``f`` and returns the integrand
    on the whole node grid at once as a (panels, len(x)) array.
    """
    if hi <= lo:
        return 0.0
    width = 2 * math.pi / max_frequency if max_frequency > 0 else hi - lo
    panels = max(1, math.ceil((hi - lo) / width))
    while True:
        low = _gl_panels(f, lo, hi, panels, GL_LOW, on_panels)
        high = _gl_panels(f, lo, hi, panels, GL_HIGH, on_panels)
        if abs(high - low) <= rel_tol * abs(high) or panels >= max_panels:
            return high
        panels *= 2


def mean_square_window(P: DirichletPolynomial, sigma: float, T1: float, T2: float, weight: str = "flat",
                       rel_tol: float = 1e-9) -> float:
    """Integral over [T1, T2] of |P(sigma + it)|^2 w(t), w = 1 or 1/t^2."""
    if not T1 < T2:
        raise DomainError("need T1 < T2")
    if sigma <= 0:
        raise DomainError("need sigma > 0")
    if len(P) == 0:
        return 0.0
    if weight == "flat":
        def f(t):
            return np.abs(P.at_line(sigma, t)) ** 2

        def grid(lo, width, panels, x):
            return np.abs(P.on_panels(sigma, lo, width, panels, x)) ** 2
    elif weight == "inverse-t-squared":
        if T1 <= 0 <= T2:
            raise DomainError("the 1/t^2 weight needs a window avoiding t = 0")

        def f(t):
            return np.abs(P.at_line(sigma, t)) ** 2 / t**2

        def grid(lo, width, panels, x):
            t = lo + width * (np.arange(panels)[:, None] + 0.5 + 0.5 * np.asarray(x)[None, :])
            return np.abs(P.on_panels(sigma, lo, width, panels, x)) ** 2 / t**2
    else:
        raise DomainError(f"unknown weight {weight!r}")
    return integrate_oscillatory(f, T1, T2, math.log(P.max_support), rel_tol, on_panels=grid)


@dataclass
class MontgomeryCheck:
    lhs: float
    b_integral: float
    rhs: float
    passed: bool

    def as_row(self) -> dict:
        return {"lhs": self.lhs, "b_integral": self.b_integral, "rhs": self.rhs, "pass": self.passed}


def montgomery_check(A: DirichletPolynomial, B: DirichletPolynomial, sigma: float, T: float) -> MontgomeryCheck:
    """Check int_{-T}^{T} |A|^2 <= 3 int_{-T}^{T} |B|^2 when |a_n| <= b_n."""
    if sigma <= 1:
        raise DomainError("need sigma > 1")
    if T < 0:
        raise DomainError("need T >= 0")
    if np.any(B.a.imag != 0) or np.any(B.a.real < 0):
        raise DomainError("b_n must be real and non-negative")
    b_on_a = np.array([B.coefficient(int(m)).real for m in A.n])
    # one ulp of slack: a_n = b_n e^{i theta} can round to |a_n| slightly above b_n
    if np.any(np.abs(A.a) > b_on_a * (1 + 1e-12)):
        raise DomainError("|a_n| <= b_n fails somewhere on the support")
    if T == 0:
        return MontgomeryCheck(0.0, 0.0, 0.0, True)
    lhs = mean_square_window(A, sigma, -T, T)
    b_int = mean_square_window(B, sigma, -T, T)
    rhs = 3 * b_int
    return MontgomeryCheck(lhs, b_int, rhs, lhs <= rhs + 1e-9)


def rough_progression_polynomial(q: int, a: int, y: float, j: int, n_max: int) -> DirichletPolynomial:
    """Coefficients Lambda(n) (log n)^j on n <= n_max, n = a mod q, P^-(n) > y."""
    ns, ws = [], []
    for n, w in von_mangoldt_segments(n_max):
        base = np.rint(np.exp(w)).astype(np.int64)
        keep = (n % q == a % q) & (base > y)
        ns.append(n[keep])
        ws.append(w[keep] * np.log(n[keep].astype(float)) ** j)
    n = np.concatenate(ns) if ns else np.zeros(0, dtype=np.int64)
    w = np.concatenate(ws) if ws else np.zeros(0)
    return DirichletPolynomial(n, w.astype(complex), f"rough-AP q={q} a={a} y={y:g} j={j}")


def log_power_tail(N: float, sigma: float, power: int) -> float:
    """int_N^infinity (log u)^power u^{-sigma} du = Gamma(power+1, (sigma-1) log N)/(sigma-1)^{power+1}."""
    z = (sigma - 1) * math.log(N)
    return float(gammaincc(power + 1, z) * gamma(power + 1)) / (sigma - 1) ** (power + 1)


@dataclass
class MVTProbe:
    q: int
    a: int
    y: float
    sigma: float
    j: int
    T: float
    T_max: float
    N_trunc: int
    terms: int
    lhs_truncated: float
    rhs_bound: float
    ratio: float
    tail_bound: float

    def as_row(self) -> dict:
        return dict(self.__dict__)


def mvt_rhs(q: int, sigma: float, j: int, T: float) -> float:
    return math.log(4) ** j * math.factorial(2 * j) / (euler_phi(q) ** 2 * (sigma - 1) ** (2 * j + 1) * T)


def mvt_probe(q: int, a: int, y: float, sigma: float, j: int, T: float, T_max: float | None = None,
              N_trunc: int = 10**6) -> MVTProbe:
    """Truncated |t| > T mean square (weight 1/t^2) of the rough progression series."""
    if y < 16 * q * q:
        raise DomainError("need y >= 16 q^2")
    if not 1 < sigma < 2:
        raise DomainError("need 1 < sigma < 2")
    if T < 1:
        raise DomainError("need T >= 1")
    if math.gcd(a, q) != 1:
        raise DomainError(f"gcd({a}, {q}) > 1")
    T_max = 10 * T if T_max is None else T_max
    if T_max <= T:
        raise DomainError("need T_max > T")
    P = rough_progression_polynomial(q, a, y, j, N_trunc)
    # real coefficients: |P(sigma - it)| = |P(sigma + it)|, so fold the two half-lines
    lhs = 2 * mean_square_window(P, sigma, T, T_max, "inverse-t-squared") if len(P) else 0.0
    rhs = mvt_rhs(q, sigma, j, T)
    tail = log_power_tail(N_trunc, sigma, j + 1)
    return MVTProbe(q, a, y, sigma, j, T, T_max, N_trunc, len(P), lhs, rhs, lhs / rhs, tail)


@dataclass
class KNRecord:
    k: int
    K: float
    N: float
    taylor: tuple[complex, ...]

    @property
    def ratio(self) -> float:
        return self.N / self.K if self.K else math.nan

    def as_row(self) -> dict:
        return {"k": self.k, "K": self.K, "N": self.N, "ratio": self.ratio}


F_FLOOR = 1e-6


def taylor_log_deriv_KN(F: DirichletPolynomial, s: complex, k: int) -> KNRecord:
    """K from F^{(j)}/F and N from (F'/F)^{(j-1)}, j = 1..k, via power-series division."""
    if k < 1:
        raise DomainError("need k >= 1")
    d = F.derivatives(s, k)
    if abs(d[0]) < F_FLOOR:
        raise ConditioningError(f"|F(s)| = {abs(d[0]):.3g} is below {F_FLOOR}")
    f = np.array([d[j] / math.factorial(j) for j in range(k + 1)])
    # Taylor coefficients of F' and of G = F'/F
    fp = np.array([(i + 1) * f[i + 1] for i in range(k)])
    g = np.zeros(k, dtype=complex)
    for i in range(k):
        g[i] = (fp[i] - np.dot(f[1 : i + 1], g[i - 1 :: -1][:i])) / f[0] if i else fp[0] / f[0]
    K = max(abs(f[j] / f[0]) ** (1 / j) for j in range(1, k + 1))
    # (F'/F)^{(j-1)}/j! = (j-1)! g_{j-1} / j! = g_{j-1}/j
    N = max((abs(g[j - 1]) / j) ** (1 / j) for j in range(1, k + 1))
    return KNRecord(k, float(K), float(N), tuple(complex(v) for v in f))
