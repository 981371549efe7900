"""Numerical evaluation of the Dickman-de Bruijn function rho(u).

rho solves the delay relation rho(u) = 1 - integral_1^u rho(v-1)/v dv with
rho = 1 on [0, 1]; the closed forms rho = 1 on [0, 1] and rho = 1 - log u
on [1, 2] seed everything.

The solution decays roughly like u^(-u), so any scheme that steps
rho(K+1) = rho(K) - (increment) multiplies inherited relative error by
rho(K)/rho(K+1) per unit interval and loses all precision by u of about 11.
The builder therefore represents rho on each unit interval [K, K+1] as a
power series about the midpoint: the differentiated delay relation
rho'(u) = -rho(u-1)/u turns the previous unit's coefficients into the
current ones, and the constant term is anchored through the equivalent
integral identity u rho(u) = integral of rho over [u-1, u], whose terms are
cancellation-free.  Per-unit log scaling keeps every stored number O(1), so
the table is accurate to near machine precision in relative terms at any
depth, with values below exp(-700) reported as 0 in the linear domain.

Integers are kink points of rho (jumps in successively higher derivatives);
series pieces live strictly inside the unit intervals, and the stored knot
grid aligns integers with knots.
"""

import csv
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import AccuracyError, DomainError, NonDifferentiableError
from .formats import format_sig12

#: Below this log-value, rho underflows to an exact 0.0.
LOG_UNDERFLOW = -700.0

MAX_STEP = 1.0 / 64.0

#: Series degree per unit interval; terms decay at least like 3^-i.
SERIES_DEGREE = 48


@dataclass(frozen=True)
class RhoTable:
    """rho on [0, units] as per-unit midpoint series plus a dense knot grid.

    Attributes:
        u_max: Largest u the caller asked to cover.
        step: Knot spacing 1/m (snapped so integers are knots).
        steps_per_unit: m, knots per unit interval.
        units: Integer upper end of the covered range.
        u: Knot locations k/m.
        log_rho: log rho at the knots.
        rho_values: rho at the knots (0.0 below the underflow cutoff).
        coeffs: coeffs[K] holds the series for rho(K + 1/2 + s) / scale_K,
            normalized so its constant term is 1; entries for K = 1 ..
            units - 1.
        scale_logs: log of scale_K per unit (nan for the unused index 0).
    """

    u_max: float
    step: float
    steps_per_unit: int
    units: int
    u: np.ndarray
    log_rho: np.ndarray
    rho_values: np.ndarray
    coeffs: tuple
    scale_logs: np.ndarray


def build_rho_table(u_max: float = 64.0, h: float = 1.0 / 256.0) -> RhoTable:
    """Tabulate rho on [0, ceil(u_max)] with knot spacing at most h.

    h is snapped to 1/m with m = ceil(1/h) so that every integer is a knot;
    h > 1/64 is refused as too coarse a grid to be worth storing.
    """
    if u_max < 1:
        raise DomainError(f"u_max must be >= 1, got {u_max}")
    if h <= 0:
        raise DomainError(f"step must be positive, got {h}")
    if h > MAX_STEP:
        raise AccuracyError(f"step {h} too coarse; need h <= 1/64")
    m = math.ceil(1.0 / h)
    units = math.ceil(u_max)
    return _build(units, m, float(u_max))


def _advance_unit(b: np.ndarray, K: int) -> np.ndarray:
    """Series for unit [K, K+1] from the previous unit's series b.

    Both series are about their unit midpoints; b is normalized (b[0] = 1)
    and the result is in the same scale as b.
    """
    a = K + 0.5
    degree = len(b) - 1
    c = np.zeros_like(b)
    # rho'(a + s) = -rho_prev(s) / (a + s) fixes every coefficient but the
    # constant one; the m = 1 case drops the c term entirely.
    c[1] = -b[0] / a
    for mth in range(2, degree + 1):
        c[mth] = ((1 - mth) * c[mth - 1] - b[mth - 1]) / (a * mth)
    # Constant term from the integral identity u rho(u) = integral of rho
    # over [u-1, u], evaluated at the unit start; its terms never cancel
    # catastrophically, unlike stepping rho(K) - increment.
    i = np.arange(degree + 1)
    w = 1.0 / (2.0 ** (i + 1) * (i + 1))
    signed = w * (-1.0) ** i
    c[0] = math.fsum((b * w).tolist() + (c[1:] * signed[1:]).tolist()) / K
    return c


@lru_cache(maxsize=8)
def _build(units: int, m: int, u_max: float) -> RhoTable:
    h = 1.0 / m
    n_knots = units * m + 1
    log_rho = np.zeros(n_knots)

    # Exact closed form on (1, 2].
    for k in range(m + 1, min(2 * m, n_knots - 1) + 1):
        log_rho[k] = math.log1p(-math.log(k * h))

    coeffs: list = [None] * max(units, 2)
    scale_logs = np.full(max(units, 2), math.nan)

    if units >= 2:
        # Seed unit [1, 2]: rho(1.5 + s) = 1 - log 1.5 - log(1 + s/1.5).
        i = np.arange(1, SERIES_DEGREE + 1, dtype=np.float64)
        seed = np.concatenate(([1.0 - math.log(1.5)], (-1.0 / 1.5) ** i / i))
        scale_logs[1] = math.log(seed[0])
        coeffs[1] = seed / seed[0]
        for K in range(2, units):
            c = _advance_unit(coeffs[K - 1], K)
            scale_logs[K] = scale_logs[K - 1] + math.log(c[0])
            coeffs[K] = c / c[0]
            # Fill this unit's knots from the series.
            s = (np.arange(K * m + 1, K * m + m + 1) * h) - (K + 0.5)
            vals = np.polynomial.polynomial.polyval(s, coeffs[K])
            log_rho[K * m + 1 : K * m + m + 1] = scale_logs[K] + np.log(vals)

    for arr in coeffs[1:units]:
        if arr is not None:
            arr.setflags(write=False)
    u = np.arange(n_knots) * h
    with np.errstate(under="ignore"):
        rho_values = np.where(log_rho < LOG_UNDERFLOW, 0.0, np.exp(log_rho))
    for arr in (u, log_rho, rho_values, scale_logs):
        arr.setflags(write=False)
    return RhoTable(
        u_max=u_max,
        step=h,
        steps_per_unit=m,
        units=units,
        u=u,
        log_rho=log_rho,
        rho_values=rho_values,
        coeffs=tuple(coeffs),
        scale_logs=scale_logs,
    )


def rho_log(table: RhoTable, u: float) -> float:
    """log rho(u), stable for arbitrarily small rho."""
    u = float(u)
    if u < 0 or u > table.u_max:
        raise DomainError(f"u={u} outside table range [0, {table.u_max}]")
    if u <= 1.0:
        return 0.0
    if u <= 2.0:
        return math.log1p(-math.log(u))
    K = min(int(math.floor(u)), table.units - 1)
    s = u - (K + 0.5)
    c = table.coeffs[K]
    val = 0.0
    for coef in c[::-1]:
        val = val * s + coef
    return float(table.scale_logs[K]) + math.log(val)


def rho(table: RhoTable, u: float) -> float:
    """rho(u); exact closed forms on [0, 2], series elsewhere."""
    lv = rho_log(table, u)
    if lv < LOG_UNDERFLOW:
        return 0.0
    return math.exp(lv)


def rho_prime(table: RhoTable, u: float) -> float:
    """rho'(u) from the delay relation: -rho(u-1)/u for u > 1, 0 on (0, 1)."""
    u = float(u)
    if u <= 0:
        raise DomainError(f"derivative needs u > 0, got {u}")
    if u == 1.0:
        raise NonDifferentiableError("rho is not differentiable at u = 1")
    if u < 1.0:
        return 0.0
    if u > table.u_max:
        raise DomainError(f"u={u} outside table range [0, {table.u_max}]")
    return -rho(table, u - 1.0) / u


def rho_asymptotic(u: float) -> float:
    """Leading-order comparator exp(-u log u).

    Drops the lower-order corrections entirely, so this tracks the order of
    magnitude of rho(u), not its value.
    """
    u = float(u)
    if u <= 0:
        raise DomainError(f"comparator needs u > 0, got {u}")
    return math.exp(-u * math.log(u))


@dataclass(frozen=True)
class PsiEstimate:
    """A smooth-count estimate together with its nominal error scale."""

    value: float
    method: str
    error_scale: float


def psi_estimate(
    x: float, y: float, method: str = "rho", table: RhoTable | None = None
) -> PsiEstimate:
    """Estimate the number of y-smooth integers up to x.

    method "rho" returns x * rho(u) with error scale log(u+1)/log y; method
    "cep" returns the cruder x * u^(-u) order-of-magnitude comparator (its
    o(u) exponent correction is dropped; error scale reported as 0).
    """
    x, y = float(x), float(y)
    if y < 2 or x < y:
        raise DomainError(f"estimate needs x >= y >= 2, got x={x}, y={y}")
    u = math.log(x) / math.log(y)
    if method == "rho":
        if table is None:
            table = build_rho_table(u_max=max(2.0, math.ceil(u)))
        value = x * rho(table, u)
        scale = math.log(u + 1.0) / math.log(y)
        return PsiEstimate(value=value, method="rho", error_scale=scale)
    if method == "cep":
        return PsiEstimate(
            value=x * math.exp(-u * math.log(u)), method="cep", error_scale=0.0
        )
    raise DomainError(f"unknown estimate method {method!r}")


def write_rho_csv(table: RhoTable, path) -> None:
    """Dump the knot grid as CSV with columns u, rho, log_rho."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["u", "rho", "log_rho"])
        for uk, rk, lk in zip(table.u, table.rho_values, table.log_rho):
            w.writerow([format_sig12(float(uk)), format_sig12(float(rk)), format_sig12(float(lk))])
