"""Shifted-totient sums over smooth numbers and their identity cross-checks.

For a nonzero integer shift a, the two quantities of interest are

    T(x, y) = sum of phi(n - a) / (n - a)   over smooth n in (max(a,0), floor(x)]
    V(x, y) = (1 / Psi(x, y)) * sum of phi(n - a)   over the same n,

together with three independent evaluation routes used to cross-check them:
a truncated Moebius expansion of T (phi(k)/k = sum over d | k of mu(d)/d),
a partial-summation identity for V built from cumulative T at integer cut
points, and the quadrature integral I(x, y) = integral of t * rho(log t /
log y) with its leading-term comparator x^2 rho(u) / 2.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np
from scipy.integrate import quad

from .census import SmoothRange, psi, psi_progression
from .dickman import RhoTable, rho
from .errors import AccuracyError, DomainError
from .sieve import segment_bounds, sieve_range, tau_omega_range

#: 6 / pi^2, the reciprocal of zeta(2), from the double-precision pi literal.
ZETA2_INV = 6.0 / (math.pi * math.pi)

#: Ceiling for the exact-rational summation mode.
RATIONAL_MODE_LIMIT = 10**4

_E = math.e
_E_E = math.exp(math.e)


@dataclass(frozen=True)
class ShiftedSumQuery:
    """(x, y, a) naming a shifted sum; the summation range is (a, x]."""

    x: float
    y: float
    a: int

    def __post_init__(self):
        if self.a == 0:
            raise DomainError("shift a must be nonzero")
        if self.y < 2:
            raise DomainError(f"query needs y >= 2, got {self.y}")
        if self.x < self.y:
            raise DomainError(f"query needs x >= y, got x={self.x}, y={self.y}")

    @property
    def u(self) -> float:
        return math.log(self.x) / math.log(self.y)


def _check_shift(a) -> int:
    a = int(a)
    if a == 0:
        raise DomainError("shift a must be nonzero")
    return a


def _shifted_segments(x: float, a: int, capacity=None):
    """Yield (seg_table, shift_table, seg_lo, seg_hi) covering (max(a,0), floor(x)].

    shift_table covers the same segment displaced by -a, so phi(n - a) is a
    straight aligned lookup.
    """
    top = math.floor(x)
    lo = max(a, 0)
    for s, e in segment_bounds(lo + 1, top, capacity):
        yield sieve_range(s, e, capacity), sieve_range(s - a, e - a, capacity), s, e


def t_exact(x: float, y: float, a: int, capacity=None) -> float:
    """T(x, y): sum of phi(n - a)/(n - a) over smooth n in (max(a,0), floor(x)].

    Terms are accumulated with exact compensated summation (math.fsum), so
    the result is within 1e-12 relative of the exact rational value.
    """
    a = _check_shift(a)
    if math.floor(x) <= max(a, 0):
        return 0.0
    partials = []
    for table, shifted, s, _e in _shifted_segments(x, a, capacity):
        idx = np.nonzero(table.smooth_mask(y))[0]
        if idx.size:
            den = (idx + (s - a)).astype(np.float64)
            partials.append(shifted.phi[idx] / den)
    if not partials:
        return 0.0
    return math.fsum(np.concatenate(partials))


def _tree_sum(fractions: list[Fraction]) -> Fraction:
    # Pairwise reduction keeps intermediate denominators small.
    while len(fractions) > 1:
        fractions = [
            fractions[i] + fractions[i + 1] if i + 1 < len(fractions) else fractions[i]
            for i in range(0, len(fractions), 2)
        ]
    return fractions[0] if fractions else Fraction(0)


def t_exact_fraction(x: float, y: float, a: int) -> Fraction:
    """Exact rational T(x, y), for pinning the float path at small x."""
    a = _check_shift(a)
    top = math.floor(x)
    if top > RATIONAL_MODE_LIMIT:
        raise DomainError(f"rational mode limited to x <= {RATIONAL_MODE_LIMIT}")
    if top <= max(a, 0):
        return Fraction(0)
    terms = []
    for table, shifted, s, _e in _shifted_segments(x, a):
        for i in np.nonzero(table.smooth_mask(y))[0]:
            terms.append(Fraction(int(shifted.phi[i]), int(i) + s - a))
    return _tree_sum(terms)


@dataclass(frozen=True)
class MobiusSplit:
    """Truncated Moebius expansion of T at cutoff delta.

    sigma1 collects moduli d <= delta, sigma2 the tail above; their sum
    equals T(x, y) whenever the tail range covers every divisor of n - a.
    """

    sigma1: float
    sigma2: float
    delta_used: float

    @property
    def total(self) -> float:
        return self.sigma1 + self.sigma2


def t_via_mobius(x: float, y: float, a: int, delta: float, capacity=None) -> MobiusSplit:
    """Evaluate T through progression counts: sum over d of mu(d)/d * #{n = a mod d}.

    Moduli run to floor(x) for positive shifts (counts vanish above x - a
    anyway) and to floor(x) - a for negative shifts, where divisors of n - a
    genuinely exceed x.
    """
    a = _check_shift(a)
    delta = float(delta)
    if delta < 1:
        raise DomainError(f"cutoff must be >= 1, got {delta}")
    top = math.floor(x)
    lo = max(a, 0)
    if top <= lo:
        return MobiusSplit(0.0, 0.0, delta)
    d_max = top - min(a, 0)
    rng = SmoothRange(lo + 1, top, y, capacity)
    mu_parts = [
        sieve_range(s, e, capacity).mu for s, e in segment_bounds(1, d_max, capacity)
    ]
    mu = mu_parts[0] if len(mu_parts) == 1 else np.concatenate(mu_parts)
    head, tail = [], []
    for d in range(1, d_max + 1):
        m = int(mu[d - 1])
        if m == 0:
            continue
        c = psi_progression(lo, top, y, a, d, capacity, within=rng)
        if c == 0:
            continue
        (head if d <= delta else tail).append(m * c / d)
    return MobiusSplit(math.fsum(head), math.fsum(tail), delta)


def mobius_split_fraction(x: float, y: float, a: int, delta: float):
    """Exact rational (sigma1, sigma2) of the Moebius split, small x only."""
    a = _check_shift(a)
    top = math.floor(x)
    if top > RATIONAL_MODE_LIMIT:
        raise DomainError(f"rational mode limited to x <= {RATIONAL_MODE_LIMIT}")
    lo = max(a, 0)
    if top <= lo:
        return Fraction(0), Fraction(0)
    d_max = top - min(a, 0)
    rng = SmoothRange(lo + 1, top, y)
    mu = sieve_range(1, d_max).mu
    head, tail = [], []
    for d in range(1, d_max + 1):
        m = int(mu[d - 1])
        if m == 0:
            continue
        c = psi_progression(lo, top, y, a, d, within=rng)
        if c == 0:
            continue
        (head if d <= delta else tail).append(Fraction(m * c, d))
    return _tree_sum(head), _tree_sum(tail)


def v_exact(x: float, y: float, a: int, capacity=None) -> float:
    """V(x, y): the Psi-normalized average of phi(n - a) over smooth n.

    The numerator is an exact integer sum; only the final division rounds.
    """
    a = _check_shift(a)
    psi_value = psi(x, y, capacity)
    top = math.floor(x)
    if top <= max(a, 0):
        return 0.0
    numerator = 0
    for table, shifted, _s, _e in _shifted_segments(x, a, capacity):
        mask = table.smooth_mask(y)
        numerator += int(shifted.phi[mask].sum())
    return numerator / psi_value


def v_exact_fraction(x: float, y: float, a: int, capacity=None) -> Fraction:
    """Exact rational V(x, y)."""
    a = _check_shift(a)
    psi_value = psi(x, y, capacity)
    top = math.floor(x)
    if top <= max(a, 0):
        return Fraction(0)
    numerator = 0
    for table, shifted, _s, _e in _shifted_segments(x, a, capacity):
        mask = table.smooth_mask(y)
        numerator += int(shifted.phi[mask].sum())
    return Fraction(numerator, psi_value)


def v_via_abel(x: float, y: float, a: int, capacity=None) -> float:
    """V(x, y) through partial summation.

    Uses V * Psi = T(x, y) * (x - a) - integral_1^x T(t, y) dt, where T(., y)
    is a step function in its first argument; the integral is the exact sum
    of T(k) over integer k < floor(x) plus the fractional top piece.
    """
    a = _check_shift(a)
    psi_value = psi(x, y, capacity)
    top = math.floor(x)
    if top <= max(a, 0):
        return 0.0
    running_t = 0.0
    integral_parts = []
    for table, shifted, s, e in _shifted_segments(x, a, capacity):
        terms = np.zeros(e - s + 1)
        idx = np.nonzero(table.smooth_mask(y))[0]
        if idx.size:
            terms[idx] = shifted.phi[idx] / (idx + (s - a)).astype(np.float64)
        cumulative = running_t + np.cumsum(terms)
        upper = min(e, top - 1)
        if upper >= s:
            integral_parts.append(float(np.sum(cumulative[: upper - s + 1])))
        running_t = float(cumulative[-1])
    t_at_x = running_t
    integral = math.fsum(integral_parts) + (x - top) * t_at_x
    return (t_at_x * (x - a) - integral) / psi_value


@dataclass(frozen=True)
class MainTerms:
    """Leading-order predictions for T and V with their shared error scale."""

    t_main: float
    v_main: float
    err_scale: float
    zeta2_inv: float = ZETA2_INV


def main_terms(x: float, y: float, psi_value: float) -> MainTerms:
    """6/pi^2 * Psi and 3x/pi^2, plus the error scale loglog x loglog y / log y.

    The error scale needs x > e and y > e; outside that it is reported as
    nan rather than a negative or undefined number.
    """
    if psi_value <= 0:
        raise DomainError(f"psi_value must be positive, got {psi_value}")
    x, y = float(x), float(y)
    if x > _E and y > _E:
        err_scale = math.log(math.log(x)) * math.log(math.log(y)) / math.log(y)
    else:
        err_scale = math.nan
    return MainTerms(
        t_main=ZETA2_INV * psi_value,
        v_main=3.0 * x / (math.pi * math.pi),
        err_scale=err_scale,
    )


@dataclass(frozen=True)
class DeltaPolicy:
    """Cutoff rule for the Moebius-split truncation.

    delta(x, y, a) = min{ exp(gamma * log y * loglog y / logloglog y),
                          sqrt(x/|a|) / (log(x/|a|))^delta_exp },
    clamped to >= 1.  The first branch needs logloglog y > 0, i.e. y above
    e^e (about 15.2); below that only the second branch applies.  gamma,
    delta_exp and strength A are configuration values.
    """

    gamma: float = 1.0
    delta_exp: float = 1.0
    A: float = 1.0

    def cutoff(self, x: float, y: float, a: int) -> float:
        a = _check_shift(a)
        r = float(x) / abs(a)
        if r <= 1.0:
            raise DomainError(f"cutoff needs x > |a|, got x={x}, a={a}")
        log_r = math.log(r)
        second = math.sqrt(r) / log_r**self.delta_exp
        if y > _E_E:
            exponent = (
                self.gamma
                * math.log(y)
                * math.log(math.log(y))
                / math.log(math.log(math.log(y)))
            )
            first = math.exp(exponent) if exponent < 700 else math.inf
        else:
            first = math.inf
        return max(1.0, min(first, second))


class AuxAverages(NamedTuple):
    tau_avg: float
    omega_avg: float


def aux_averages(x: float, y: float, a: int, capacity=None) -> AuxAverages:
    """Psi-normalized averages of tau(n - a) and omega(n - a) over smooth n."""
    a = _check_shift(a)
    psi_value = psi(x, y, capacity)
    top = math.floor(x)
    if top <= max(a, 0):
        return AuxAverages(0.0, 0.0)
    tau_sum = 0
    omega_sum = 0
    lo = max(a, 0)
    for s, e in segment_bounds(lo + 1, top, capacity):
        table = sieve_range(s, e, capacity)
        tau, omega = tau_omega_range(s - a, e - a, capacity)
        mask = table.smooth_mask(y)
        tau_sum += int(tau[mask].sum())
        omega_sum += int(omega[mask].sum())
    return AuxAverages(tau_sum / psi_value, omega_sum / psi_value)


@dataclass(frozen=True)
class IntegralResult:
    """Quadrature value of integral_1^x t rho(log t / log y) dt.

    comparator holds the integration-by-parts leading term x^2 rho(u) / 2;
    error_estimate is the accumulated quadrature error bound.
    """

    value: float
    comparator: float
    error_estimate: float


def i_integral(x: float, y: float, table: RhoTable, rel_tol: float = 1e-8) -> IntegralResult:
    """Adaptive quadrature of t * rho(log t / log y) over [1, x].

    The integrand is split at powers of y, where rho's argument crosses the
    integer kinks of the delay relation.  Raises AccuracyError (carrying the
    achieved estimate) if the accumulated error bound exceeds rel_tol.
    """
    x, y = float(x), float(y)
    if x < 1:
        raise DomainError(f"integral needs x >= 1, got {x}")
    if y < 2:
        raise DomainError(f"integral needs y >= 2, got {y}")
    u = math.log(x) / math.log(y)
    if u > table.u_max:
        raise DomainError(f"u={u:.6g} beyond table range {table.u_max}")
    comparator = 0.5 * x * x * rho(table, u)
    if x == 1.0:
        return IntegralResult(0.0, comparator, 0.0)

    def integrand(t: float) -> float:
        return t * rho(table, math.log(t) / math.log(y))

    cuts = [1.0]
    k = 1
    while y**k < x:
        cuts.append(float(y**k))
        k += 1
    cuts.append(x)
    value = 0.0
    err = 0.0
    for t0, t1 in zip(cuts[:-1], cuts[1:]):
        piece, piece_err = quad(integrand, t0, t1, epsrel=1e-10, limit=200)
        value += piece
        err += piece_err
    if err > rel_tol * max(abs(value), 1e-300):
        raise AccuracyError(
            f"quadrature error {err:.3g} above {rel_tol:.1g} relative", estimate=value
        )
    return IntegralResult(value, comparator, err)
