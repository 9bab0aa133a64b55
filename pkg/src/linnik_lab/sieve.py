"""Segmented sieving: primes, the von Mangoldt function and y-rough integers.

Every bulk routine works segment by segment so memory stays bounded by the
segment length.  Reductions compute one partial result per segment and merge
them in segment order with correctly rounded summation (``math.fsum``), so the
outcome does not depend on how many worker threads produced the partials.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator, NamedTuple, Sequence, TypeVar

import numpy as np

from .errors import CapacityError, DomainError

DEFAULT_SEGMENT_LENGTH = 1 << 20
DEFAULT_RANGE_CAP = 10**10
THREADS_ENV = "LINNIK_LAB_THREADS"

T = TypeVar("T")


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class SegmentPlan:
    lo: int
    hi: int
    segment_length: int = DEFAULT_SEGMENT_LENGTH

    def __post_init__(self):
        if not 1 <= self.lo <= self.hi:
            raise DomainError(f"bad range [{self.lo}, {self.hi}]")
        if self.segment_length < 64:
            raise DomainError("segment_length must be at least 64")

    def segments(self) -> list[tuple[int, int]]:
        step = self.segment_length
        return [(a, min(a + step - 1, self.hi)) for a in range(self.lo, self.hi + 1, step)]


class WeightedPoint(NamedTuple):
    n: int
    weight: float


def _check_range(hi: int, cap: int) -> None:
    if hi > cap:
        raise CapacityError(f"range end {hi} exceeds sieve cap {cap}")


@lru_cache(maxsize=8)
def small_primes(n: int) -> np.ndarray:
    """All primes <= n from a plain (unsegmented) sieve; meant for n up to ~10^7."""
    n = int(n)
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    is_p[4::2] = False
    for p in range(3, math.isqrt(n) + 1, 2):
        if is_p[p]:
            is_p[p * p :: 2 * p] = False
    out = np.flatnonzero(is_p).astype(np.int64)
    out.flags.writeable = False
    return out


def _prime_segment(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    flags = np.ones(hi - lo + 1, dtype=bool)
    for p in base.tolist():
        pp = p * p
        if pp > hi:
            break
        start = max(pp, -(-lo // p) * p)
        flags[start - lo :: p] = False
    if lo <= 1:
        flags[: 2 - lo] = False
    return np.flatnonzero(flags).astype(np.int64) + lo


def _ordered_map(fn: Callable[[tuple[int, int]], T], segments: Sequence[tuple[int, int]], threads: int | None) -> list[T]:
    threads = default_threads() if threads is None else threads
    if threads <= 1 or len(segments) <= 1:
        return [fn(seg) for seg in segments]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, segments))


def prime_segments(lo: int, hi: int, *, segment_length: int = DEFAULT_SEGMENT_LENGTH,
                   cap: int = DEFAULT_RANGE_CAP) -> Iterator[np.ndarray]:
    """Yield the primes in [lo, hi] one segment (numpy array) at a time."""
    lo, hi = int(lo), int(hi)
    _check_range(hi, cap)
    base = small_primes(math.isqrt(hi))
    for a, b in SegmentPlan(lo, hi, segment_length).segments():
        yield _prime_segment(a, b, base)


def primes_in(lo: int, hi: int, **kwargs) -> Iterator[int]:
    """Stream the primes in [lo, hi] in ascending order."""
    for seg in prime_segments(lo, hi, **kwargs):
        yield from seg.tolist()


def prime_count(x: float) -> int:
    x = int(x)
    if x < 2:
        return 0
    return sum(len(s) for s in prime_segments(1, x))


@lru_cache(maxsize=16)
def _prime_powers(x: int) -> tuple[np.ndarray, np.ndarray]:
    """Proper prime powers p^k <= x (k >= 2), ascending, with their base p."""
    ns, bases = [], []
    for p in small_primes(math.isqrt(x)).tolist():
        v = p * p
        while v <= x:
            ns.append(v)
            bases.append(p)
            v *= p
    order = np.argsort(ns, kind="stable")
    return np.asarray(ns, dtype=np.int64)[order], np.asarray(bases, dtype=np.int64)[order]


def _lambda_segment(lo: int, hi: int, base: np.ndarray, pp_n: np.ndarray, pp_p: np.ndarray):
    primes = _prime_segment(lo, hi, base)
    i, j = np.searchsorted(pp_n, [lo, hi + 1])
    if i == j:
        return primes, np.log(primes.astype(float))
    n = np.concatenate([primes, pp_n[i:j]])
    p = np.concatenate([primes, pp_p[i:j]])
    order = np.argsort(n, kind="stable")
    return n[order], np.log(p[order].astype(float))


def von_mangoldt_segments(x: float, *, lo: int = 1, segment_length: int = DEFAULT_SEGMENT_LENGTH,
                          cap: int = DEFAULT_RANGE_CAP) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield ``(n, Lambda(n))`` arrays over [lo, x], skipping every n with Lambda(n) = 0."""
    x = int(x)
    if x < max(lo, 2):
        return
    _check_range(x, cap)
    base = small_primes(math.isqrt(x))
    pp_n, pp_p = _prime_powers(x)
    for a, b in SegmentPlan(lo, x, segment_length).segments():
        yield _lambda_segment(a, b, base, pp_n, pp_p)


def von_mangoldt_stream(x: float, **kwargs) -> Iterator[WeightedPoint]:
    for n, w in von_mangoldt_segments(x, **kwargs):
        for pair in zip(n.tolist(), w.tolist()):
            yield WeightedPoint(*pair)


def _rough_segment(lo: int, hi: int, sieving_primes: np.ndarray) -> np.ndarray:
    flags = np.ones(hi - lo + 1, dtype=bool)
    for p in sieving_primes.tolist():
        if p > hi:
            break
        start = -(-lo // p) * p
        flags[start - lo :: p] = False
    return np.flatnonzero(flags).astype(np.int64) + lo


def rough_segments(x: float, y: float, *, lo: int = 1, segment_length: int = DEFAULT_SEGMENT_LENGTH,
                   cap: int = DEFAULT_RANGE_CAP) -> Iterator[np.ndarray]:
    """Yield the n in [lo, x] with no prime factor <= y, one segment at a time.

    Only primes <= y are used for sieving; n = 1 is always included.
    """
    x = int(x)
    if x < lo:
        return
    _check_range(x, cap)
    sp = small_primes(int(min(y, x)))
    for a, b in SegmentPlan(lo, x, segment_length).segments():
        yield _rough_segment(a, b, sp)


def rough_stream(x: float, y: float, **kwargs) -> Iterator[int]:
    if x < 1 or y < 1:
        raise DomainError("rough_stream needs x >= 1 and y >= 1")
    for seg in rough_segments(x, y, **kwargs):
        yield from seg.tolist()


def mertens_product(y: float) -> float:
    """prod_{p <= y} (1 - 1/p), summed in log space with exact rounding."""
    if y < 2:
        return 1.0
    p = small_primes(int(y)).astype(float)
    return math.exp(math.fsum(np.log1p(-1.0 / p).tolist()))


def _fsum_columns(parts: Sequence[np.ndarray]) -> np.ndarray:
    if not parts:
        return np.zeros(0)
    stacked = np.vstack(parts)
    return np.array([math.fsum(col) for col in stacked.T.tolist()])


_VALUE_CACHE: dict = {}


def clear_caches() -> None:
    """Drop memoised residue tables (forces recomputation, e.g. for determinism checks)."""
    _VALUE_CACHE.clear()


def _chebyshev_residues(x: int, q: int, segment_length: int, threads: int) -> np.ndarray:
    base = small_primes(math.isqrt(x))
    segs = SegmentPlan(2, x, segment_length).segments()

    def partial(seg):
        primes = _prime_segment(seg[0], seg[1], base)
        return np.bincount(primes % q, weights=np.log(primes.astype(float)), minlength=q)

    parts = _ordered_map(partial, segs, threads)
    pp_n, pp_p = _prime_powers(x)
    parts.append(np.bincount(pp_n % q, weights=np.log(pp_p.astype(float)), minlength=q))
    return _fsum_columns(parts)


def chebyshev_residues(x: float, q: int, *, segment_length: int = DEFAULT_SEGMENT_LENGTH,
                       threads: int | None = None, cap: int = DEFAULT_RANGE_CAP) -> np.ndarray:
    """Array whose entry r is the sum of Lambda(n) over n <= x with n = r mod q."""
    x = int(x)
    if q < 1:
        raise DomainError("q must be positive")
    if x < 2:
        return np.zeros(q)
    _check_range(x, cap)
    threads = default_threads() if threads is None else threads
    # the thread count never changes the value, so it stays out of the key
    key = ("psi", x, int(q), segment_length)
    if key not in _VALUE_CACHE:
        out = _chebyshev_residues(x, int(q), segment_length, threads)
        out.flags.writeable = False
        _VALUE_CACHE[key] = out
    return _VALUE_CACHE[key]


def psi_ap(x: float, q: int, a: int, **kwargs) -> float:
    """Chebyshev's psi(x; q, a) = sum of Lambda(n) over n <= x, n = a mod q."""
    if math.gcd(a, q) != 1:
        raise DomainError(f"gcd({a}, {q}) > 1")
    if x < 2:
        return 0.0
    return float(chebyshev_residues(x, q, **kwargs)[a % q])


def _rough_residues(x: int, y: int, q: int, j: int, segment_length: int, threads: int) -> np.ndarray:
    sp = small_primes(min(y, x))
    segs = SegmentPlan(1, x, segment_length).segments()

    def partial(seg):
        n = _rough_segment(seg[0], seg[1], sp)
        w = None if j == 0 else np.log(n.astype(float)) ** j
        return np.bincount(n % q, weights=w, minlength=q).astype(float)

    return _fsum_columns(_ordered_map(partial, segs, threads))


def rough_residues(x: float, y: float, q: int, j: int = 0, *, segment_length: int = DEFAULT_SEGMENT_LENGTH,
                   threads: int | None = None, cap: int = DEFAULT_RANGE_CAP) -> np.ndarray:
    """Entry r: sum of (log n)^j over y-rough n <= x with n = r mod q."""
    x, y = int(x), int(math.floor(y))
    if x < 1:
        return np.zeros(q)
    _check_range(x, cap)
    threads = default_threads() if threads is None else threads
    key = ("rough", x, y, int(q), int(j), segment_length)
    if key not in _VALUE_CACHE:
        out = _rough_residues(x, y, int(q), int(j), segment_length, threads)
        out.flags.writeable = False
        _VALUE_CACHE[key] = out
    return _VALUE_CACHE[key]
