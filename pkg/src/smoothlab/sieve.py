"""Segmented sieves for per-integer arithmetic data.

A sieved segment records, for every n in [lo, hi]: the smallest and largest
prime factor, the Euler totient phi(n), and the Moebius value mu(n).  The
sieve marks multiples of every prime p <= sqrt(hi) with vectorized strides,
divides prime powers out of a running remainder, and resolves the (at most
one) prime factor > sqrt(hi) from what is left.  Results are independent of
how a range is split into segments.

Conventions: spf(1) = lpf(1) = 1, phi(1) = 1, mu(1) = 1, so that 1 counts as
smooth for every bound.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CapacityError, DomainError

#: Largest number of entries a single segment may hold.
DEFAULT_SEGMENT_CAPACITY = 1 << 22

#: Values above this are rejected; counts and totients stay comfortably in int64.
MAX_SIEVE_BOUND = 1 << 52


@dataclass(frozen=True)
class ArithTable:
    """Immutable per-integer arithmetic data for a contiguous range.

    Attributes:
        lo: First value covered (inclusive, >= 1).
        hi: Last value covered (inclusive).
        spf: int64 array, spf[i] = smallest prime factor of lo + i.
        lpf: int64 array, lpf[i] = largest prime factor of lo + i.
        phi: int64 array of Euler totient values.
        mu: int8 array of Moebius values in {-1, 0, 1}.
    """

    lo: int
    hi: int
    spf: np.ndarray
    lpf: np.ndarray
    phi: np.ndarray
    mu: np.ndarray

    def __len__(self):
        return self.hi - self.lo + 1

    def index(self, n: int) -> int:
        if not self.lo <= n <= self.hi:
            raise DomainError(f"{n} outside sieved range [{self.lo}, {self.hi}]")
        return int(n) - self.lo

    def spf_of(self, n: int) -> int:
        return int(self.spf[self.index(n)])

    def lpf_of(self, n: int) -> int:
        return int(self.lpf[self.index(n)])

    def phi_of(self, n: int) -> int:
        return int(self.phi[self.index(n)])

    def mu_of(self, n: int) -> int:
        return int(self.mu[self.index(n)])

    def smooth_mask(self, y: float) -> np.ndarray:
        """Boolean array marking entries whose largest prime factor is <= y."""
        return self.lpf <= y


def primes_upto(n: int) -> np.ndarray:
    """All primes <= n as an int64 array (Eratosthenes)."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    mask = np.ones(n + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.nonzero(mask)[0].astype(np.int64)


def segment_bounds(lo: int, hi: int, capacity: int | None = None):
    """Split [lo, hi] into inclusive chunks of at most ``capacity`` entries."""
    cap = DEFAULT_SEGMENT_CAPACITY if capacity is None else int(capacity)
    if cap < 1:
        raise DomainError("segment capacity must be >= 1")
    s = int(lo)
    hi = int(hi)
    while s <= hi:
        e = min(s + cap - 1, hi)
        yield s, e
        s = e + 1


def sieve_range(lo: int, hi: int, capacity: int | None = None) -> ArithTable:
    """Sieve every integer in [lo, hi] into an :class:`ArithTable`.

    Deterministic and independent of any surrounding segmentation.  Raises
    :class:`DomainError` for lo < 1 or out-of-range bounds and
    :class:`CapacityError` when the span exceeds the segment capacity.
    """
    lo, hi = int(lo), int(hi)
    cap = DEFAULT_SEGMENT_CAPACITY if capacity is None else int(capacity)
    if lo < 1:
        raise DomainError(f"sieve range must start at 1 or above, got lo={lo}")
    if hi < lo:
        raise DomainError(f"empty sieve range [{lo}, {hi}]")
    if hi > MAX_SIEVE_BOUND:
        raise DomainError(f"hi={hi} exceeds supported bound 2^52")
    if hi - lo + 1 > cap:
        raise CapacityError(
            f"segment [{lo}, {hi}] has {hi - lo + 1} entries, capacity is {cap}"
        )
    return _sieve_segment(lo, hi)


@lru_cache(maxsize=6)
def _sieve_segment(lo: int, hi: int) -> ArithTable:
    size = hi - lo + 1
    values = np.arange(lo, hi + 1, dtype=np.int64)
    rem = values.copy()
    phi = values.copy()
    mu = np.ones(size, dtype=np.int8)
    spf = np.zeros(size, dtype=np.int64)
    lpf = np.zeros(size, dtype=np.int64)

    for p in primes_upto(math.isqrt(hi)):
        p = int(p)
        start = (-lo) % p
        if start >= size:
            continue
        sl = slice(start, size, p)

        # One totient factor (1 - 1/p) per distinct prime; exact in integers
        # because the running product still contains every power of p.
        phi_view = phi[sl]
        phi_view -= phi_view // p

        mu[sl] *= -1
        start_sq = (-lo) % (p * p)
        if start_sq < size:
            mu[start_sq :: p * p] = 0

        spf_view = spf[sl]
        spf_view[spf_view == 0] = p
        lpf[sl] = p  # ascending p, so the last write is the largest

        # Strip p from the remainder: once for every multiple, then once more
        # per higher power level p^k.
        rem_view = rem[sl]
        rem_view //= p
        pk = p * p
        while pk <= hi:
            start_k = (-lo) % pk
            if start_k >= size:
                break
            rem[start_k::pk] //= p
            pk *= p

    big = rem > 1  # exactly one prime > sqrt(hi) left, exponent 1
    phi[big] = phi[big] // rem[big] * (rem[big] - 1)
    mu[big] = -mu[big]
    lpf[big] = rem[big]
    unset = (spf == 0) & big
    spf[unset] = rem[unset]
    if lo == 1:
        spf[0] = 1
        lpf[0] = 1

    for arr in (spf, lpf, phi, mu):
        arr.setflags(write=False)
    return ArithTable(lo=lo, hi=hi, spf=spf, lpf=lpf, phi=phi, mu=mu)


def is_smooth(n: int, y: float) -> bool:
    """True iff every prime factor of n is <= y; n = 1 is vacuously smooth."""
    n = int(n)
    if n < 1:
        raise DomainError(f"smoothness is defined for n >= 1, got {n}")
    if n == 1:
        return True
    return largest_prime_factor(n) <= y


def largest_prime_factor(n: int) -> int:
    """Largest prime factor by trial division; returns 1 for n = 1."""
    n = int(n)
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    largest = 1
    d = 2
    while d * d <= n:
        while n % d == 0:
            largest = d
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        largest = n
    return largest


def factorize(n: int) -> list[tuple[int, int]]:
    """(prime, exponent) pairs of n in increasing prime order."""
    n = int(n)
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    out = []
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            e += 1
            n //= d
        if e:
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def phi_int(n: int) -> int:
    """Euler totient of a single integer via factorization."""
    result = int(n)
    for p, _ in factorize(n):
        result -= result // p
    return result


def mu_int(n: int) -> int:
    """Moebius value of a single integer via factorization."""
    fac = factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def tau_omega_range(lo: int, hi: int, capacity: int | None = None):
    """Divisor counts tau(n) and distinct-prime counts omega(n) on [lo, hi].

    Returns a pair of int64 arrays aligned with the range.  Uses the same
    stride marking as :func:`sieve_range` but tracks exponents so that
    tau(n) = prod (e_i + 1).
    """
    lo, hi = int(lo), int(hi)
    cap = DEFAULT_SEGMENT_CAPACITY if capacity is None else int(capacity)
    if lo < 1:
        raise DomainError(f"range must start at 1 or above, got lo={lo}")
    if hi < lo:
        raise DomainError(f"empty range [{lo}, {hi}]")
    if hi - lo + 1 > cap:
        raise CapacityError(f"range [{lo}, {hi}] exceeds capacity {cap}")

    size = hi - lo + 1
    rem = np.arange(lo, hi + 1, dtype=np.int64)
    tau = np.ones(size, dtype=np.int64)
    omega = np.zeros(size, dtype=np.int64)

    for p in primes_upto(math.isqrt(hi)):
        p = int(p)
        start = (-lo) % p
        if start >= size:
            continue
        idx = np.arange(start, size, p)
        exp = np.ones(idx.size, dtype=np.int64)
        pk = p * p
        while pk <= hi:
            start_k = (-lo) % pk
            if start_k >= size:
                break
            # Positions inside idx hit by the p^k stride.
            first = (start_k - start) // p % (pk // p)
            exp[first :: pk // p] += 1
            pk *= p
        tau[idx] *= exp + 1
        omega[idx] += 1
        rem[idx] //= p ** exp

    big = rem > 1
    tau[big] *= 2
    omega[big] += 1
    return tau, omega
