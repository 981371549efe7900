"""Shared brute-force oracles for the test suite.

Everything here factors integers one at a time by trial division and sums
with exact rationals; none of it touches the package's sieve or table
machinery, so these are independent references, not shortcuts.
"""

from fractions import Fraction

import pytest


def oracle_factorize(n: int) -> list[tuple[int, int]]:
    assert n >= 1
    out = []
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            e += 1
            n //= d
        if e:
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def oracle_phi(n: int) -> int:
    result = n
    for p, _ in oracle_factorize(n):
        result -= result // p
    return result


def oracle_mu(n: int) -> int:
    fac = oracle_factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def oracle_lpf(n: int) -> int:
    fac = oracle_factorize(n)
    return fac[-1][0] if fac else 1


def oracle_spf(n: int) -> int:
    fac = oracle_factorize(n)
    return fac[0][0] if fac else 1


def oracle_is_smooth(n: int, y: float) -> bool:
    return oracle_lpf(n) <= y


def oracle_smooth_list(lo: int, hi: int, y: float) -> list[int]:
    """Smooth integers in (lo, hi] by per-integer factorization."""
    return [n for n in range(max(lo, 0) + 1, hi + 1) if oracle_is_smooth(n, y)]


def oracle_t(x: int, y: float, a: int) -> Fraction:
    total = Fraction(0)
    for n in oracle_smooth_list(max(a, 0), x, y):
        total += Fraction(oracle_phi(n - a), n - a)
    return total


def oracle_v(x: int, y: float, a: int) -> Fraction:
    psi = len(oracle_smooth_list(0, x, y))
    total = sum(oracle_phi(n - a) for n in oracle_smooth_list(max(a, 0), x, y))
    return Fraction(total, psi)


def oracle_mobius_split(x: int, y: float, a: int, delta: float):
    """Exact (sigma1, sigma2) of the truncated Moebius expansion by loops."""
    smooth = oracle_smooth_list(max(a, 0), x, y)
    d_max = x - min(a, 0)
    s1, s2 = Fraction(0), Fraction(0)
    for d in range(1, d_max + 1):
        m = oracle_mu(d)
        if m == 0:
            continue
        count = sum(1 for n in smooth if (n - a) % d == 0)
        term = Fraction(m * count, d)
        if d <= delta:
            s1 += term
        else:
            s2 += term
    return s1, s2


def oracle_tau(n: int) -> int:
    t = 1
    for _, e in oracle_factorize(n):
        t *= e + 1
    return t


def oracle_omega(n: int) -> int:
    return len(oracle_factorize(n))


@pytest.fixture(scope="session")
def rho_table():
    from smoothlab import build_rho_table

    return build_rho_table(u_max=32.0)
