"""Dirichlet L-functions, y-rough L-series, exceptional characters and real zeros.

L(s, chi) is evaluated through the Hurwitz decomposition
``L(s, chi) = q^{-s} sum_{a=1}^{q} chi(a) zeta(s, a/q)`` with zeta(s, alpha)
computed by direct summation plus an Euler-Maclaurin tail.  For non-principal
characters the 1/(s-1) pole of each Hurwitz term cancels, so only the regular
part ``zeta(s, alpha) - 1/(s-1)`` is ever summed; that keeps s = 1 (where
L_q(1, chi) lives) free of cancellation.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.special import bernoulli

from .errors import DomainError, ImaginaryResidueWarning, PoleError, PrecisionWarning
from .residues import DirichletCharacter, build_unit_group, enumerate_characters, real_nonprincipal
from .sieve import small_primes

BERNOULLI_TERMS = 12
IMAG_TOLERANCE = 1e-12


@lru_cache(maxsize=None)
def _bernoulli_coefficients(m: int) -> np.ndarray:
    # B_{2k} / (2k)!, k = 1..m
    b = bernoulli(2 * m)
    return np.array([b[2 * k] / math.factorial(2 * k) for k in range(1, m + 1)])


def _phi1(z: np.ndarray) -> np.ndarray:
    """(e^z - 1)/z, accurate near 0."""
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    small = np.abs(z) < 0.1
    zs = z[small]
    acc = np.ones_like(zs)
    term = np.ones_like(zs)
    for k in range(2, 13):
        term = term * zs / k
        acc = acc + term
    out[small] = acc
    zb = z[~small]
    out[~small] = np.expm1(zb) / zb
    return out


def default_cutoff(t_max: float) -> int:
    return int(max(50, math.ceil(10 * (abs(t_max) + 1))))


def hurwitz_regular(s, alphas, n_terms: int | None = None, bernoulli_terms: int = BERNOULLI_TERMS) -> np.ndarray:
    """zeta(s, alpha) - 1/(s - 1) on the grid ``s`` x ``alphas``; finite at s = 1.

    Returns an array of shape ``(len(s), len(alphas))`` (scalars are promoted).
    """
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    alphas = np.atleast_1d(np.asarray(alphas, dtype=float))
    if np.any(s.real <= 0):
        raise DomainError("Hurwitz evaluation needs Re(s) > 0")
    if np.any(alphas <= 0) or np.any(alphas > 1):
        raise DomainError("alpha must lie in (0, 1]")
    N = n_terms or default_cutoff(np.max(np.abs(s.imag)))
    logs = np.log(np.arange(N)[None, :] + alphas[:, None])  # (A, N)
    ss = s[:, None, None]
    head = np.exp(-ss * logs[None, :, :]).sum(axis=2)  # (S, A)
    logw = np.log(N + alphas)[None, :]
    w = N + alphas[None, :]
    sv = s[:, None]
    # w^{1-s}/(s-1) - 1/(s-1) = -log(w) * phi1((1-s) log w)
    tail = -logw * _phi1((1 - sv) * logw) + 0.5 * np.exp(-sv * logw)
    coeffs = _bernoulli_coefficients(bernoulli_terms)
    rising = sv.copy()  # s (s+1) ... (s+2k-2)
    power = np.exp(-(sv + 1) * logw)  # w^{-s-1}
    for k in range(1, bernoulli_terms + 1):
        tail = tail + coeffs[k - 1] * rising * power
        rising = rising * (sv + 2 * k - 1) * (sv + 2 * k)
        power = power / (w * w)
    return head + tail


def hurwitz_zeta(s: complex, alpha: float, **kwargs) -> complex:
    """zeta(s, alpha) = sum_{n >= 0} (n + alpha)^{-s} for Re(s) > 0, s != 1, 0 < alpha <= 1."""
    if s == 1:
        raise PoleError("zeta(s, alpha) has a pole at s = 1")
    return complex(hurwitz_regular(s, [alpha], **kwargs)[0, 0] + 1 / (complex(s) - 1))


def _l_values(s, chi: DirichletCharacter, **kwargs) -> np.ndarray:
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    q = chi.modulus
    a = np.arange(1, q + 1)
    weights = chi.values(a)
    keep = weights != 0
    a, weights = a[keep], weights[keep]
    reg = hurwitz_regular(s, a / q, **kwargs) @ weights
    if chi.is_principal:
        if np.any(s == 1):
            raise PoleError("L(s, chi0) has a pole at s = 1")
        reg = reg + len(a) / (s - 1)
    return np.exp(-s * math.log(q)) * reg


def dirichlet_l(s: complex, chi: DirichletCharacter, **kwargs) -> complex:
    """L(s, chi) by analytic continuation, Re(s) > 0."""
    return complex(_l_values(s, chi, **kwargs)[0])


def _euler_factor(s: np.ndarray, chi: DirichletCharacter, y: float) -> np.ndarray:
    if y < 2:
        return np.ones(len(s), dtype=complex)
    p = small_primes(int(y))
    cp = chi.values(p)
    keep = cp != 0
    p, cp = p[keep], cp[keep]
    if len(p) == 0:
        return np.ones(len(s), dtype=complex)
    terms = 1 - cp[None, :] * np.exp(-s[:, None] * np.log(p.astype(float))[None, :])
    return np.prod(terms, axis=1)


def l_rough_values(s, chi: DirichletCharacter, y: float, **kwargs) -> np.ndarray:
    """Vectorised L_y(s, chi) over an array of s."""
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    return _l_values(s, chi, **kwargs) * _euler_factor(s, chi, y)


def l_rough(s: complex, chi: DirichletCharacter, y: float, **kwargs) -> complex:
    """L_y(s, chi) = L(s, chi) prod_{p <= y} (1 - chi(p) p^{-s})."""
    if y < 1:
        raise DomainError("y must be >= 1")
    return complex(l_rough_values(s, chi, y, **kwargs)[0])


@dataclass(frozen=True)
class RoughSeriesHandle:
    """L_y(., chi) with its evaluation parameters bundled."""

    chi: DirichletCharacter
    y: float
    n_terms: int | None = None
    bernoulli_terms: int = BERNOULLI_TERMS
    tolerance: float = 1e-12

    def __post_init__(self):
        if self.tolerance <= 0:
            raise DomainError("tolerance must be positive")
        if self.n_terms is not None and self.n_terms < 10:
            raise DomainError("Euler-Maclaurin cutoff must be >= 10")

    def _kw(self):
        return {"n_terms": self.n_terms, "bernoulli_terms": self.bernoulli_terms}

    def __call__(self, s) -> np.ndarray:
        return l_rough_values(s, self.chi, self.y, **self._kw())

    def value(self, s: complex) -> complex:
        return complex(self(s)[0])

    def derivative(self, s: complex, k: int) -> "DerivativeResult":
        return cauchy_derivative(self, s, k)


class DerivativeResult(NamedTuple):
    value: complex
    radius: float
    nodes: int
    rel_change: float
    warning: str | None


def _cauchy_taylor(f: Callable[[np.ndarray], np.ndarray], s: complex, r: float, nodes: int, k_max: int) -> np.ndarray:
    """Taylor coefficients c_k = f^{(k)}(s)/k!, k <= k_max, from the trapezoid rule on |z - s| = r."""
    theta = 2 * np.pi * np.arange(nodes) / nodes
    vals = f(s + r * np.exp(1j * theta))
    return np.fft.fft(vals)[: k_max + 1] / nodes / r ** np.arange(k_max + 1)


def cauchy_radius(s: complex) -> float:
    return min(0.1, (complex(s).real - 1) / 2)


def cauchy_taylor(f, s: complex, k_max: int, *, nodes: int = 256, tol: float = 1e-9,
                  max_nodes: int = 8192) -> tuple[np.ndarray, float, int, float, str | None]:
    """Taylor coefficients up to order k_max by Cauchy's formula with node doubling."""
    r = cauchy_radius(s)
    if r <= 0:
        raise DomainError("Cauchy circle needs Re(s) > 1")
    prev = _cauchy_taylor(f, s, r, nodes, k_max)
    change = math.inf
    while nodes < max_nodes:
        nodes *= 2
        cur = _cauchy_taylor(f, s, r, nodes, k_max)
        scale = np.maximum(np.abs(cur), 1e-13 * float(np.max(np.abs(cur))) + 1e-300)
        change = float(np.max(np.abs(cur - prev) / scale))
        prev = cur
        if change <= tol:
            break
    warning = None
    if r < 1e-3:
        warning = f"Cauchy radius {r:.3g} is close to the line Re(s) = 1"
    elif change > tol:
        warning = f"derivative not converged (relative change {change:.3g})"
    # roundoff floor: k!/r^k amplification of unit-roundoff errors
    amplification = max(1.0, float(r) ** -k_max) * 1e-16 * float(np.max(np.abs(f(np.array([s])))))
    if warning is None and k_max > 0 and amplification > 1e-6 * max(float(np.abs(prev[k_max])), 1e-300):
        warning = f"roundoff may dominate order {k_max} at radius {r:.3g}"
    return prev, r, nodes, change, warning


def cauchy_derivative(f, s: complex, k: int, **kwargs) -> DerivativeResult:
    if k < 0:
        raise DomainError("k must be >= 0")
    coeffs, r, nodes, change, warning = cauchy_taylor(f, s, k, **kwargs)
    if warning:
        warnings.warn(warning, PrecisionWarning, stacklevel=3)
    return DerivativeResult(complex(coeffs[k] * math.factorial(k)), r, nodes, change, warning)


def l_rough_deriv(s: complex, chi: DirichletCharacter, y: float, k: int, **kwargs) -> DerivativeResult:
    """k-th derivative of L_y(s, chi) for Re(s) > 1 via a Cauchy circle."""
    if complex(s).real <= 1:
        raise DomainError("l_rough_deriv needs Re(s) > 1")
    return cauchy_derivative(RoughSeriesHandle(chi, y), s, k, **kwargs)


def _realify(value: complex, chi: DirichletCharacter, what: str):
    if not chi.is_real:
        return value
    if abs(value.imag) > IMAG_TOLERANCE * max(1.0, abs(value.real)):
        warnings.warn(f"{what} for real character {chi.label} has imaginary part {value.imag:.3g}",
                      ImaginaryResidueWarning, stacklevel=3)
        return value
    return value.real


def l_q_one(chi: DirichletCharacter):
    """L_q(1, chi) = L(1, chi) prod_{p <= q} (1 - chi(p)/p); a float for real chi."""
    if chi.is_principal:
        raise PoleError("L_q(1, chi0) is undefined (pole at s = 1)")
    value = complex(l_rough_values(1.0, chi, chi.modulus)[0])
    return _realify(value, chi, "L_q(1, chi)")


@dataclass
class SiegelScan:
    q: int
    window: tuple[float, float]
    grid: int
    zeros: list[float]
    anomaly: bool
    beta: float | None
    beta_hat: float
    l_q_one: float
    ratio: float

    def as_row(self) -> dict:
        return {"q": self.q, "window_lo": self.window[0], "window_hi": self.window[1], "grid": self.grid,
                "zeros": ";".join(f"{z:.12g}" for z in self.zeros), "anomaly": self.anomaly,
                "beta": self.beta, "beta_hat": self.beta_hat, "l_q_one": self.l_q_one, "ratio": self.ratio}


@dataclass
class ExceptionalReport:
    q: int
    psi: DirichletCharacter | None
    value: float | None
    all_values: dict[str, float] = field(default_factory=dict)
    beta: float | None = None
    beta_window: tuple[float, float] | None = None
    scan: SiegelScan | None = None

    def as_row(self) -> dict:
        return {"q": self.q, "psi": self.psi.label if self.psi else None, "l_q_one": self.value,
                "n_real_characters": len(self.all_values), "beta": self.beta,
                "beta_window": None if self.beta_window is None else f"{self.beta_window[0]}:{self.beta_window[1]}"}


DEFAULT_BETA_WINDOW = (0.85, 1.0)


def find_exceptional(q: int, *, scan: bool = True, window: tuple[float, float] = DEFAULT_BETA_WINDOW,
                     grid: int = 512) -> ExceptionalReport:
    """Select psi minimising L_q(1, chi) over the real non-principal characters mod q.

    Ties go to the lexicographically smallest exponent tuple.  psi is absent
    when there is no real non-principal character (q <= 2).
    """
    group = build_unit_group(q)
    best, best_value, values = None, None, {}
    for chi in real_nonprincipal(group):
        v = l_q_one(chi)
        values[chi.label] = v
        if best is None or v < best_value:
            best, best_value = chi, v
    report = ExceptionalReport(q, best, best_value, values)
    if best is not None and scan:
        result = _scan(best, window, grid, best_value)
        report.scan = result
        report.beta = result.beta
        report.beta_window = window
    return report


def _bisect(f, lo: float, hi: float, flo: float, tol: float = 1e-10) -> float:
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _scan(psi: DirichletCharacter, window, grid, lq1) -> SiegelScan:
    lo, hi = window
    if not 0 < lo < hi <= 1:
        raise DomainError("window must satisfy 0 < lo < hi <= 1")
    sig = np.linspace(lo, hi, grid, endpoint=False)
    vals = _l_values(sig, psi).real

    def f(x):
        return float(_l_values(x, psi)[0].real)

    zeros = []
    for i in range(grid):
        if vals[i] == 0:
            zeros.append(float(sig[i]))
        elif i + 1 < grid and vals[i] * vals[i + 1] < 0:
            zeros.append(_bisect(f, float(sig[i]), float(sig[i + 1]), float(vals[i])))
    # right endpoint: sign change between the last sample and s -> hi
    if hi < 1:
        v_end = f(hi)
        if vals[-1] * v_end < 0:
            zeros.append(_bisect(f, float(sig[-1]), hi, float(vals[-1])))
    beta = zeros[-1] if zeros else None
    beta_hat = beta if beta is not None else lo
    q = psi.modulus
    ratio = lq1 / ((1 - beta_hat) * math.log(q))
    return SiegelScan(q, (lo, hi), grid, zeros, len(zeros) > 1, beta, beta_hat, lq1, ratio)


def siegel_zero_scan(q: int, window: tuple[float, float] = DEFAULT_BETA_WINDOW, grid: int = 512) -> SiegelScan:
    """Look for a real zero of L(sigma, psi) on ``window`` by sign changes on a grid."""
    report = find_exceptional(q, scan=False)
    if report.psi is None:
        raise DomainError(f"no real non-principal character mod {q}")
    return _scan(report.psi, window, grid, report.value)


def v_cutoff_log(t: float) -> float:
    """log V_t = 100 (log(3+|t|))^{2/3} (log log(3+|t|))^{1/3}."""
    L = math.log(3 + abs(t))
    return 100 * L ** (2 / 3) * math.log(L) ** (1 / 3)


LBOUNDS_HEADER = ("measured constants only: the hypothesis y >= q V_t needs log y >= "
                  "log q + log V_t, and log V_0 = {v0:.4g}, so no desk-scale y satisfies it")


@dataclass
class LBoundsTable:
    q: int
    y: float
    header: str
    rows: list[dict]
    summary: dict[str, dict]


def measure_lseries_bounds(q: int, y: float, sigma_grid: Sequence[float], t_grid: Sequence[float],
                           j_max: int = 6) -> LBoundsTable:
    """Grid measurements of |L_y| and normalised derivatives |L_y^{(j)}| / (j! (log y)^j).

    Characters are grouped as ``nonreal``, ``real`` (R_q) and ``C_q`` (all
    characters other than chi0 and psi); a character can sit in two groups.
    """
    if y < q or y < 2:
        raise DomainError("need y >= max(q, 2)")
    if any(not 1 < s <= 2 for s in sigma_grid):
        raise DomainError("sigma grid must lie in (1, 2]")
    group = build_unit_group(q)
    psi = find_exceptional(q, scan=False).psi
    logy = math.log(y)
    rows, summary = [], {}
    for chi in enumerate_characters(group)[1:]:
        classes = ["real" if chi.is_real else "nonreal"]
        if psi is None or chi != psi:
            classes.append("C_q")
        handle = RoughSeriesHandle(chi, y)
        min_abs, max_ratio = math.inf, 0.0
        for sigma in sigma_grid:
            for t in t_grid:
                s = complex(sigma, t)
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", PrecisionWarning)
                    coeffs = cauchy_taylor(handle, s, j_max)[0]
                min_abs = min(min_abs, abs(coeffs[0]))
                for c in classes:
                    rows.append({"class": c, "chi": chi.label, "sigma": sigma, "t": t, "j": 0, "value": abs(coeffs[0])})
                for j in range(1, j_max + 1):
                    ratio = abs(coeffs[j]) / logy**j  # coeffs already carry the 1/j!
                    max_ratio = max(max_ratio, ratio)
                    for c in classes:
                        rows.append({"class": c, "chi": chi.label, "sigma": sigma, "t": t, "j": j, "value": ratio})
        for c in classes:
            entry = summary.setdefault(c, {"min_abs": math.inf, "max_deriv_ratio": 0.0})
            entry["min_abs"] = min(entry["min_abs"], min_abs)
            entry["max_deriv_ratio"] = max(entry["max_deriv_ratio"], max_ratio)
        if chi.is_real:
            entry = summary["real"]
            entry.setdefault("l_y_at_1", {})[chi.label] = complex(l_rough_values(1.0, chi, y)[0]).real
    return LBoundsTable(q, y, LBOUNDS_HEADER.format(v0=v_cutoff_log(0)), rows, summary)
