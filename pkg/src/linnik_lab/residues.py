"""Dirichlet characters modulo q, built from an explicit cyclic decomposition of (Z/qZ)*.

Characters are stored as exponent tuples against fixed generators, and their
values are kept as exact rationals k/m standing for e^{2 pi i k/m}.  Floating
complex numbers only appear through :meth:`DirichletCharacter.values` and the
``complex()`` conversion of a :class:`CharacterValue`.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import CapacityError, DomainError

DEFAULT_MODULUS_CAP = 10**6


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorisation of ``n`` by trial division, as ``[(p, k), ...]`` ascending."""
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out.append((p, k))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def euler_phi(n: int) -> int:
    result = n
    for p, _ in factorize(n):
        result -= result // p
    return result


def _smallest_primitive_root(m: int, order: int) -> int:
    prime_divisors = [r for r, _ in factorize(order)]
    for g in range(2, m):
        if math.gcd(g, m) != 1:
            continue
        if all(pow(g, order // r, m) != 1 for r in prime_divisors):
            return g
    raise AssertionError(f"no primitive root mod {m}")  # pragma: no cover


def _local_components(p: int, k: int) -> list[tuple[int, int, np.ndarray]]:
    """Generators, orders and local dlog tables for (Z/p^kZ)*.

    Each table has length p^k and holds -1 at non-units.
    """
    m = p**k
    if p == 2:
        if k == 1:
            return []
        if k == 2:
            tab = np.full(4, -1, dtype=np.int64)
            tab[1], tab[3] = 0, 1
            return [(3, 2, tab)]
        # (Z/2^kZ)* = <-1> x <5>
        half = 1 << (k - 2)
        sign = np.full(m, -1, dtype=np.int64)
        five = np.full(m, -1, dtype=np.int64)
        t = 1
        for i in range(half):
            sign[t], five[t] = 0, i
            sign[m - t], five[m - t] = 1, i
            t = t * 5 % m
        return [(m - 1, 2, sign), (5, half, five)]
    order = m - m // p
    g = _smallest_primitive_root(m, order)
    tab = np.full(m, -1, dtype=np.int64)
    t = 1
    for i in range(order):
        tab[t] = i
        t = t * g % m
    return [(g, order, tab)]


@dataclass(frozen=True, eq=False)
class UnitGroupStructure:
    """(Z/qZ)* as a product of cyclic groups with a full discrete-log table.

    ``dlog[r]`` is the exponent vector of the residue ``r`` against
    ``generators``; rows of non-units are filled with -1.
    """

    modulus: int
    generators: tuple[int, ...]
    orders: tuple[int, ...]
    phi: int
    dlog: np.ndarray = field(repr=False)

    @property
    def components(self) -> tuple[tuple[int, int], ...]:
        return tuple(zip(self.generators, self.orders))

    @cached_property
    def unit_mask(self) -> np.ndarray:
        if not self.orders:
            mask = np.gcd(np.arange(self.modulus), self.modulus) == 1
        else:
            mask = self.dlog[:, 0] >= 0
        mask.flags.writeable = False
        return mask

    @cached_property
    def units(self) -> np.ndarray:
        return np.flatnonzero(self.unit_mask)

    def log(self, n: int) -> tuple[int, ...] | None:
        r = n % self.modulus
        if not self.unit_mask[r]:
            return None
        return tuple(int(e) for e in self.dlog[r])

    def exp(self, exponents: Sequence[int]) -> int:
        out = 1 % self.modulus
        for g, e in zip(self.generators, exponents):
            out = out * pow(g, int(e), self.modulus) % self.modulus
        return out


def build_unit_group(q: int, cap: int = DEFAULT_MODULUS_CAP) -> UnitGroupStructure:
    """Decompose (Z/qZ)* and tabulate discrete logarithms.

    Odd prime powers use their smallest primitive root; 2^k with k >= 3 uses
    the pair (-1, 5).  Generators are lifted to residues mod q by CRT so they
    are 1 modulo every other prime-power factor.
    """
    if not isinstance(q, (int, np.integer)) or q < 1 or q > cap:
        raise CapacityError(f"modulus {q} outside 1..{cap}")
    q = int(q)
    residues = np.arange(q, dtype=np.int64)
    gens, orders, columns = [], [], []
    for p, k in factorize(q) if q > 1 else []:
        m = p**k
        rest = q // m
        for g, order, tab in _local_components(p, k):
            # g mod m, 1 mod rest
            lifted = (g * rest * pow(rest, -1, m) + m * pow(m, -1, rest)) % q if rest > 1 else g % q
            gens.append(int(lifted))
            orders.append(order)
            columns.append(tab[residues % m])
    # a factor 2^1 contributes no component, so units are decided by gcd, not by the columns
    coprime = np.gcd(residues, q) == 1
    if columns:
        dlog = np.stack(columns, axis=1)
        dlog[~coprime] = -1
    else:
        dlog = np.zeros((q, 0), dtype=np.int64)
    dlog.flags.writeable = False
    return UnitGroupStructure(q, tuple(gens), tuple(orders), euler_phi(q), dlog)


@dataclass(frozen=True)
class CharacterValue:
    """Exact character value: zero, or e^{2 pi i k/m} with 0 <= k < m, k/m reduced.

    The zero value is encoded as ``denominator == 0``.
    """

    numerator: int
    denominator: int

    @classmethod
    def root(cls, k: int, m: int) -> "CharacterValue":
        k %= m
        g = math.gcd(k, m)
        return cls(k // g, m // g)

    @property
    def is_zero(self) -> bool:
        return self.denominator == 0

    def conjugate(self) -> "CharacterValue":
        if self.is_zero:
            return self
        return CharacterValue.root(-self.numerator, self.denominator)

    def __mul__(self, other: "CharacterValue") -> "CharacterValue":
        if self.is_zero or other.is_zero:
            return ZERO
        m1, m2 = self.denominator, other.denominator
        return CharacterValue.root(self.numerator * m2 + other.numerator * m1, m1 * m2)

    def __complex__(self) -> complex:
        if self.is_zero:
            return 0j
        k, m = self.numerator, self.denominator
        if 4 % m == 0:
            return (1 + 0j, 1j, -1 + 0j, -1j)[k * (4 // m)]
        return cmath.exp(2j * math.pi * k / m)


ZERO = CharacterValue(0, 0)
ONE = CharacterValue(0, 1)


@lru_cache(maxsize=None)
def _cyclotomic(m: int) -> tuple[int, ...]:
    """Coefficients of the m-th cyclotomic polynomial, lowest degree first."""
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num = _poly_divmod(num, list(_cyclotomic(d)))[0]
    return tuple(num)


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # den is monic
    num = list(num)
    dq = len(den) - 1
    quot = [0] * max(len(num) - dq, 1)
    for i in range(len(num) - 1, dq - 1, -1):
        c = num[i]
        if c:
            quot[i - dq] = c
            for j, dc in enumerate(den):
                num[i - dq + j] -= c * dc
    return quot, num[:dq]


def exact_sum(values: Iterable[CharacterValue]) -> tuple[int, tuple[int, ...]]:
    """Sum roots of unity exactly in Z[zeta_m].

    Returns ``(m, coefficients)`` where the coefficients express the sum in the
    power basis 1, zeta_m, ..., zeta_m^{phi(m)-1}.  The sum is zero iff every
    coefficient is zero.
    """
    values = [v for v in values if not v.is_zero]
    if not values:
        return 1, (0,)
    m = math.lcm(*(v.denominator for v in values))
    counts = [0] * m
    for v in values:
        counts[v.numerator * (m // v.denominator)] += 1
    _, rem = _poly_divmod(counts, list(_cyclotomic(m)))
    return m, tuple(rem) if rem else (0,)


class CharacterClass(NamedTuple):
    is_principal: bool
    is_real: bool
    order: int


@dataclass(frozen=True)
class DirichletCharacter:
    """A character mod q given by exponents against the group generators.

    chi(g_i) = e^{2 pi i e_i / o_i} where ``o_i`` is the order of the i-th
    generator.
    """

    group: UnitGroupStructure = field(repr=False, compare=False, hash=False)
    exponents: tuple[int, ...]
    modulus: int = field(init=False)

    def __post_init__(self):
        if len(self.exponents) != len(self.group.orders):
            raise DomainError("exponent tuple does not match the group")
        reduced = tuple(int(e) % o for e, o in zip(self.exponents, self.group.orders))
        object.__setattr__(self, "exponents", reduced)
        object.__setattr__(self, "modulus", self.group.modulus)

    @property
    def order(self) -> int:
        return math.lcm(1, *(o // math.gcd(e, o) for e, o in zip(self.exponents, self.group.orders)))

    @property
    def is_principal(self) -> bool:
        return not any(self.exponents)

    @property
    def is_real(self) -> bool:
        return all(2 * e % o == 0 for e, o in zip(self.exponents, self.group.orders))

    @property
    def label(self) -> str:
        return f"{self.modulus}:" + ".".join(map(str, self.exponents)) if self.exponents else f"{self.modulus}:0"

    def conjugate(self) -> "DirichletCharacter":
        return DirichletCharacter(self.group, tuple(-e for e in self.exponents))

    @cached_property
    def _weights(self) -> np.ndarray:
        order = self.order
        return np.array([e * order // o for e, o in zip(self.exponents, self.group.orders)], dtype=np.int64)

    @cached_property
    def numerator_table(self) -> np.ndarray:
        """k such that chi(r) = e^{2 pi i k/order} per residue r; -1 off the units."""
        if self.group.orders:
            tab = (self.group.dlog @ self._weights) % self.order
        else:
            tab = np.zeros(self.modulus, dtype=np.int64)
        tab = np.where(self.group.unit_mask, tab, -1)
        tab.flags.writeable = False
        return tab

    @cached_property
    def value_table(self) -> np.ndarray:
        """chi(r) as complex floats for r = 0..q-1."""
        num = self.numerator_table
        order = self.order
        if order <= 2:
            vals = np.where(num == 1, -1.0, 1.0).astype(complex)
        else:
            k = np.where(num < 0, 0, num)
            # snap quarter-turns so real/imaginary zeros are exact
            angle = 2 * np.pi * k / order
            vals = np.exp(1j * angle)
            quarter = (4 * k) % order == 0
            vals[quarter] = np.array([1, 1j, -1, -1j])[(4 * k[quarter] // order) % 4]
        vals[num < 0] = 0
        vals.flags.writeable = False
        return vals

    def values(self, n) -> np.ndarray:
        """Vectorised floating evaluation at integer array ``n``."""
        return self.value_table[np.asarray(n, dtype=np.int64) % self.modulus]

    def __call__(self, n: int) -> CharacterValue:
        return char_eval(self, n)


def enumerate_characters(group: UnitGroupStructure) -> list[DirichletCharacter]:
    """All phi(q) characters in lexicographic exponent order, principal first."""
    return [DirichletCharacter(group, e) for e in itertools.product(*(range(o) for o in group.orders))]


def char_eval(chi: DirichletCharacter, n: int) -> CharacterValue:
    num = int(chi.numerator_table[int(n) % chi.modulus])
    if num < 0:
        return ZERO
    return CharacterValue.root(num, chi.order)


def classify_character(chi: DirichletCharacter) -> CharacterClass:
    return CharacterClass(chi.is_principal, chi.is_real, chi.order)


def principal_character(group: UnitGroupStructure) -> DirichletCharacter:
    return DirichletCharacter(group, (0,) * len(group.orders))


def real_nonprincipal(group: UnitGroupStructure) -> list[DirichletCharacter]:
    """The set R_q, in lexicographic exponent order."""
    halves = [(0, o // 2) if o % 2 == 0 else (0,) for o in group.orders]
    return [DirichletCharacter(group, e) for e in itertools.product(*halves) if any(e)]
