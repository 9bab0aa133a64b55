"""Discrepancy functionals for sifted progressions, their exact identities, and the error probe.

Everything here is measured at desk scale.  The sieving parameter that the
asymptotic argument wants, y = (10q)^100 V_T, is far beyond any sieve, so
each computation runs at an override y (default 16 q^2, the smallest value
admitted throughout) and every record carries a ``feasible`` flag saying so.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ConfigurationError, DomainError
from .lseries import find_exceptional, v_cutoff_log
from .residues import DirichletCharacter, build_unit_group, enumerate_characters, euler_phi
from .sieve import (DEFAULT_RANGE_CAP, chebyshev_residues, prime_count, rough_segments, small_primes,
                    von_mangoldt_segments)

DEFAULT_B = 4.0
DEFAULT_L_CONST = 1.0
DEFAULT_M_PRIME = 4.0
DEFAULT_ENVELOPE = 0.1


def _fsum_complex(values) -> complex:
    values = np.asarray(values, dtype=complex)
    return complex(math.fsum(values.real.tolist()), math.fsum(values.imag.tolist()))


def resolve_psi(q: int) -> DirichletCharacter | None:
    return find_exceptional(q, scan=False).psi


@dataclass(frozen=True)
class DeltaInput:
    u: float
    y: float
    q: int
    b: int
    psi: DirichletCharacter | None

    def __post_init__(self):
        if self.y < 16 * self.q**2:
            raise DomainError(f"y = {self.y} is below 16 q^2 = {16 * self.q ** 2}")
        if math.gcd(self.b, self.q) != 1:
            raise DomainError(f"gcd({self.b}, {self.q}) > 1")
        if self.psi is not None and self.psi.modulus != self.q:
            raise DomainError("psi has the wrong modulus")

    @classmethod
    def resolve(cls, u: float, y: float, q: int, b: int) -> "DeltaInput":
        return cls(u, y, q, b, resolve_psi(q))


class RoughTable:
    """y-rough integers and y-rough prime powers up to X, indexed for prefix sums.

    Prefix sums are available per residue class mod q and twisted by any
    character mod q, so sums over l <= u for many u cost a binary search each.
    """

    def __init__(self, X: float, y: float, q: int):
        self.X, self.y, self.q = int(X), y, q
        self.group = build_unit_group(q)
        self.phi = self.group.phi
        if self.X >= 1:
            self.rough = np.concatenate(list(rough_segments(self.X, y)))
        else:
            self.rough = np.zeros(0, dtype=np.int64)
        ells, lams = [], []
        if self.X >= 2:
            for n, w in von_mangoldt_segments(self.X):
                keep = np.rint(np.exp(w)) > y
                ells.append(n[keep])
                lams.append(w[keep])
        self.ell = np.concatenate(ells) if ells else np.zeros(0, dtype=np.int64)
        self.lam = np.concatenate(lams) if lams else np.zeros(0)
        self._ell_by_res = self._split(self.ell, self.lam)
        self._rough_by_res = self._split(self.rough, np.ones(len(self.rough)))
        self._twisted: dict = {}

    def _split(self, n: np.ndarray, w: np.ndarray) -> dict[int, tuple[np.ndarray, np.ndarray]]:
        res = n % self.q
        out = {}
        for r in np.unique(res).tolist():
            sel = res == r
            out[r] = (n[sel], np.concatenate([[0.0], np.cumsum(w[sel])]))
        return out

    def _check(self, u: float) -> int:
        u = int(math.floor(u))
        if u > self.X:
            raise DomainError(f"u = {u} beyond table size {self.X}")
        return u

    @staticmethod
    def _prefix(entry, u: int) -> float:
        if entry is None:
            return 0.0
        n, cum = entry
        return float(cum[np.searchsorted(n, u, side="right")])

    def lambda_in_class(self, u: float, b: int) -> float:
        """Sum of Lambda(l) over rough l <= u, l = b mod q."""
        return self._prefix(self._ell_by_res.get(b % self.q), self._check(u))

    def count_in_class(self, u: float, b: int) -> float:
        return self._prefix(self._rough_by_res.get(b % self.q), self._check(u))

    def _twist(self, kind: str, chi: DirichletCharacter):
        key = (kind, chi.label)
        if key not in self._twisted:
            n, w = (self.ell, self.lam) if kind == "lambda" else (self.rough, np.ones(len(self.rough)))
            self._twisted[key] = (n, np.concatenate([[0j], np.cumsum(w * chi.values(n))]))
        return self._twisted[key]

    def lambda_twisted(self, u: float, chi: DirichletCharacter) -> complex:
        """Sum of Lambda(l) chi(l) over rough l <= u."""
        n, cum = self._twist("lambda", chi)
        return complex(cum[np.searchsorted(n, self._check(u), side="right")])

    def count_twisted(self, u: float, chi: DirichletCharacter) -> complex:
        n, cum = self._twist("count", chi)
        return complex(cum[np.searchsorted(n, self._check(u), side="right")])

    @cached_property
    def principal(self) -> DirichletCharacter:
        return enumerate_characters(self.group)[0]

    def delta(self, u: float, b: int, psi: DirichletCharacter | None) -> float:
        if u < 1:
            return 0.0
        value = self.lambda_in_class(u, b) - self.lambda_twisted(u, self.principal).real / self.phi
        if psi is not None:
            value -= psi.value_table[b % self.q].real * self.lambda_twisted(u, psi).real / self.phi
        return float(value)

    def delta_star(self, u: float, b: int, psi: DirichletCharacter | None) -> float:
        if u < 1:
            return 0.0
        value = self.count_in_class(u, b) - self.count_twisted(u, self.principal).real / self.phi
        if psi is not None:
            value -= psi.value_table[b % self.q].real * self.count_twisted(u, psi).real / self.phi
        return float(value)


def delta(inp: DeltaInput, table: RoughTable | None = None) -> float:
    """Lambda-weighted sifted discrepancy at u, with the chi0 and psi projections removed."""
    if inp.u < 1:
        return 0.0
    table = table or RoughTable(inp.u, inp.y, inp.q)
    return table.delta(inp.u, inp.b, inp.psi)


def delta_star(inp: DeltaInput, table: RoughTable | None = None) -> float:
    """As :func:`delta` with unit weights in place of Lambda."""
    if inp.u < 1:
        return 0.0
    table = table or RoughTable(inp.u, inp.y, inp.q)
    return table.delta_star(inp.u, inp.b, inp.psi)


def _check_split(x: float, q: int, a: int, y: float) -> int:
    if y < 16 * q * q:
        raise DomainError(f"y = {y} is below 16 q^2")
    if math.gcd(a, q) != 1:
        raise DomainError(f"gcd({a}, {q}) > 1")
    root = math.isqrt(int(x))
    if root < y:
        raise DomainError(f"sqrt(x) = {math.sqrt(x):.6g} < y = {y}: the bilinear split is empty")
    return root


@dataclass
class IdentityResidual:
    x: float
    q: int
    a: int
    y: float
    lhs: float
    rhs: float
    residual: float
    relative: float
    character_residuals: dict[str, float] = field(default_factory=dict)

    def as_row(self) -> dict:
        row = {k: v for k, v in self.__dict__.items() if k != "character_residuals"}
        row.update({f"rel_residual[{k}]": v for k, v in self.character_residuals.items()})
        return row


def hybrid_identity_residual(x: float, q: int, a: int, y: float, table: RoughTable | None = None) -> IdentityResidual:
    """Both sides of log = Lambda * 1 split at sqrt(x), over rough n = a mod q, plus the chi0 / psi twists.

    The identity is exact; the residuals are pure rounding noise.
    """
    root = _check_split(x, q, a, y)
    x = int(x)
    table = table or RoughTable(x, y, q)
    R = table.rough
    in_class = R[R % q == a % q]
    lhs = math.fsum(np.log(in_class.astype(float)).tolist())
    small_m = R[R <= root]
    small_l = table.ell[table.ell <= root]
    small_lam = table.lam[table.ell <= root]
    first = [table.lambda_in_class(x // m, a * pow(int(m), -1, q)) for m in small_m.tolist()]
    second = [w * (table.count_in_class(x // l, a * pow(int(l), -1, q)) - table.count_in_class(root, a * pow(int(l), -1, q)))
              for l, w in zip(small_l.tolist(), small_lam.tolist())]
    rhs = math.fsum(first + second)
    residual = abs(lhs - rhs)
    out = IdentityResidual(x, q, a, y, lhs, rhs, residual, residual / abs(lhs) if lhs else residual)

    psi = resolve_psi(q)
    for chi in [table.principal] + ([psi] if psi is not None else []):
        c_lhs = _fsum_complex(chi.values(R) * np.log(R.astype(float)))
        terms = [complex(chi.values(m)) * table.lambda_twisted(x // m, chi) for m in small_m.tolist()]
        terms += [w * complex(chi.values(l)) * (table.count_twisted(x // l, chi) - table.count_twisted(root, chi))
                  for l, w in zip(small_l.tolist(), small_lam.tolist())]
        c_rhs = _fsum_complex(terms)
        out.character_residuals[chi.label] = abs(c_lhs - c_rhs) / max(abs(c_lhs), 1e-300)
    return out


@dataclass
class RecursionResidual:
    x: float
    q: int
    a: int
    y: float
    c2: float
    delta_x: float
    neighbor_sum: float
    residual: float
    normalized: float
    neighbors: int

    def as_row(self) -> dict:
        return dict(self.__dict__)


def recursion_residual(x: float, q: int, a: int, y: float, c2: float = DEFAULT_ENVELOPE,
                       table: RoughTable | None = None) -> RecursionResidual:
    """Delta(x; a) + sum over rough 1 < m <= sqrt(x) of Delta(x/m; a m^{-1}), and its normalisation."""
    root = _check_split(x, q, a, y)
    x = int(x)
    table = table or RoughTable(x, y, q)
    psi = resolve_psi(q)
    d0 = table.delta(x, a, psi)
    ms = table.rough[(table.rough > 1) & (table.rough <= root)]
    neigh = math.fsum(table.delta(x / m, a * pow(int(m), -1, q), psi) for m in ms.tolist())
    residual = d0 + neigh
    normalized = abs(residual) * table.phi / x ** (1 - c2 / math.log(y))
    return RecursionResidual(x, q, a, y, c2, d0, neigh, residual, normalized, len(ms))


@dataclass
class TheoremSchedule:
    x: float
    q: int
    L_const: float
    M_prime: float
    delta: float
    T: float
    log_V_T: float
    V_T: float
    log_y_paper: float
    y: float
    D: float
    ell: int
    c: float
    feasible: bool
    x_ge_q_B: bool

    def as_row(self) -> dict:
        return dict(self.__dict__)


def parameter_schedule(x: float, q: int, L_const: float = DEFAULT_L_CONST, M_prime: float = DEFAULT_M_PRIME,
                       y_override: float | None = None, sieve_cap: float = DEFAULT_RANGE_CAP,
                       B: float = DEFAULT_B) -> TheoremSchedule:
    """The parameter choices of the argument: T, V_T, y, D, delta, ell and c, for given x and q."""
    if q < 1 or x < q * q or x <= math.e:
        raise DomainError("need x >= q^2 and x > e")
    if L_const <= 0 or M_prime <= 0:
        raise DomainError("L_const and M_prime must be positive")
    logx = math.log(x)
    loglogx = math.log(logx)
    log_T = 2 * L_const * logx**0.6 * loglogx**0.4
    T = math.exp(log_T) if log_T < 700 else math.inf
    log_V_T = v_cutoff_log(T) if math.isfinite(T) else math.inf
    log_y_paper = 100 * math.log(10 * q) + log_V_T
    feasible = log_y_paper <= math.log(sieve_cap)
    if feasible:
        y = math.exp(log_y_paper)
    elif y_override is None:
        raise ConfigurationError(f"log y = {log_y_paper:.4g} exceeds the sieve cap; y_override is required")
    else:
        y = float(y_override)
    logy = math.log(y)
    delta = 1 / (5 * math.e * M_prime)
    D = x ** (1 - delta / logy)
    ell = max(1, math.floor(logx / (math.e * M_prime * logy)))
    V_T = math.exp(log_V_T) if log_V_T < 700 else math.inf
    return TheoremSchedule(x, q, L_const, M_prime, delta, T, log_V_T, V_T, log_y_paper, y, D, ell,
                           1 + 1 / logx, feasible, logx >= B * math.log(q) if q > 1 else True)


@dataclass
class TheoremProbeReport:
    x: float
    q: int
    a: int
    y: float
    feasible: bool
    psi: str | None
    psi_ap_value: float
    main: float
    psi_term: float
    E: float
    normalized: float
    psi_char_sum: float
    envelope_1: float
    envelope_2: float
    C1: float
    C2: float
    l_q_one_psi: float | None
    eq12_bound: float | None
    c_prime: float
    c_dprime: float
    sifted_psi_ap: float
    sifted_gap: float
    gap_bound: float
    schedule: TheoremSchedule = field(repr=False)

    def as_row(self) -> dict:
        row = {k: v for k, v in self.__dict__.items() if k != "schedule"}
        row.update({"L_const": self.schedule.L_const, "M_prime": self.schedule.M_prime})
        return row


PROBE_COLUMNS = ("q", "a", "x", "y", "feasible", "psi", "psi_ap_value", "main", "psi_term", "E", "normalized",
                 "psi_char_sum", "envelope_1", "envelope_2", "C1", "C2", "l_q_one_psi", "eq12_bound",
                 "c_prime", "c_dprime", "sifted_psi_ap", "sifted_gap", "gap_bound", "L_const", "M_prime")


def sifted_gap(x: float, q: int, a: int, y: float) -> float:
    """Sum of Lambda(n) over n <= x, n = a mod q, whose prime base is <= y."""
    parts = []
    for p in small_primes(int(min(y, x))).tolist():
        v = p
        while v <= x:
            if v % q == a % q:
                parts.append(math.log(p))
            v *= p
    return math.fsum(parts)


def theorem_probe(x: float, q: int, a: int, y_override: float | None = None, *, C1: float = DEFAULT_ENVELOPE,
                  C2: float = DEFAULT_ENVELOPE, c_prime: float = DEFAULT_ENVELOPE, c_dprime: float = DEFAULT_ENVELOPE,
                  L_const: float = DEFAULT_L_CONST, M_prime: float = DEFAULT_M_PRIME,
                  threads: int | None = None) -> TheoremProbeReport:
    """Error E(x; q, a) left after removing x/phi(q) and the psi-character term from psi(x; q, a)."""
    if q < 1 or x < q * q:
        raise DomainError("need x >= q^2")
    if math.gcd(a, q) != 1:
        raise DomainError(f"gcd({a}, {q}) > 1")
    if y_override is None:
        y_override = max(16 * q * q, 2)
    schedule = parameter_schedule(max(x, 3), q, L_const, M_prime, y_override)
    phi = euler_phi(q)
    table = chebyshev_residues(x, q, threads=threads)
    psi_ap_value = float(table[a % q])
    main = x / phi
    ex = find_exceptional(q, scan=False)
    if ex.psi is not None:
        psi_vals = ex.psi.value_table.real
        psi_char_sum = math.fsum((psi_vals * table).tolist())
        psi_term = float(psi_vals[a % q]) / phi * psi_char_sum
    else:
        psi_char_sum, psi_term = 0.0, 0.0
    E = psi_ap_value - main - psi_term
    logx = math.log(x) if x > 1 else 0.0
    env1 = x ** (1 - C1 / math.log(2 * q)) / phi
    env2 = x * math.exp(-C2 * logx**0.6 * math.log(logx) ** -0.6) / phi if logx > 1 else math.nan
    eq12 = None
    if ex.psi is not None:
        eq12 = x ** (1 - c_prime * ex.value / math.log(2 * q)) + x * math.exp(-c_dprime * math.sqrt(logx))
    y = schedule.y
    gap = sifted_gap(x, q, a, y)
    return TheoremProbeReport(x, q, a, y, schedule.feasible, ex.psi.label if ex.psi else None, psi_ap_value, main,
                              psi_term, E, phi * abs(E) / x, psi_char_sum, env1, env2, C1, C2, ex.value, eq12,
                              c_prime, c_dprime, psi_ap_value - gap, gap, prime_count(y) * logx, schedule)


@dataclass
class ExponentFit:
    slope: float
    intercept: float
    points: list[tuple[float, float]]
    dropped: list[float]

    def as_row(self) -> dict:
        return {"slope": self.slope, "intercept": self.intercept,
                "points": ";".join(f"{x:.12g}:{e:.12g}" for x, e in self.points),
                "dropped": ";".join(f"{x:.12g}" for x in self.dropped)}


def fit_power_law(xs, errors) -> ExponentFit:
    """Least-squares slope of log|E| against log x; zero errors are dropped."""
    xs = list(map(float, xs))
    if len(xs) < 3 or any(b <= a for a, b in zip(xs, xs[1:])):
        raise DomainError("need at least 3 increasing x values")
    points = [(x, float(e)) for x, e in zip(xs, errors) if e != 0]
    dropped = [x for x, e in zip(xs, errors) if e == 0]
    if len(points) < 3:
        raise DomainError(f"only {len(points)} usable points after dropping zero errors")
    lx = np.log([p[0] for p in points])
    le = np.log([abs(p[1]) for p in points])
    slope, intercept = np.polyfit(lx, le, 1)
    return ExponentFit(float(slope), float(intercept), points, dropped)


def exponent_fit(xs, q: int, a: int, **probe_kwargs) -> ExponentFit:
    return fit_power_law(xs, [theorem_probe(x, q, a, **probe_kwargs).E for x in xs])
