"""Integer-order special functions used by the closed-form design formulas.

Everything here works on plain Python floats. The antenna count is always an
integer, so the incomplete gamma function reduces to a finite Poisson sum and
the digamma function to a harmonic number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError

EULER_GAMMA = 0.57721566490153286060651209008240243
_INV_E = math.exp(-1.0)


@dataclass(frozen=True)
class SpecfunTolerance:
    series_rel_tol: float = 1e-14
    root_abs_tol: float = 1e-12
    max_iterations: int = 200

    def __post_init__(self):
        if self.series_rel_tol <= 0 or self.root_abs_tol <= 0:
            raise DomainError("tolerances must be strictly positive")
        if self.max_iterations < 10:
            raise DomainError("max_iterations must be at least 10")


DEFAULT_TOLERANCE = SpecfunTolerance()


def _check_order(n, lowest=1):
    if int(n) != n or n < lowest:
        raise DomainError(f"order must be an integer >= {lowest}, got {n!r}")


def log_reg_upper_gamma(n: int, x: float) -> float:
    """Natural log of the regularized upper incomplete gamma function.

    Evaluated as ``-x + log(sum_k x**k / k!)`` with the sum rescaled by its
    largest term, so neither ``exp(-x)`` nor ``x**k`` can under/overflow.
    """
    _check_order(n)
    if x < 0 or math.isnan(x):
        raise DomainError(f"x must be >= 0, got {x!r}")
    if x == 0:
        return 0.0
    if math.isinf(x):
        return -math.inf
    lx = math.log(x)
    if x < n:
        # bulk of the distribution: Q = 1 - P with P from its own series,
        # which keeps Q accurate (and monotone) when it is close to 1
        return math.log1p(-_reg_lower_gamma(int(n), x, lx))
    logs = [k * lx - math.lgamma(k + 1) for k in range(int(n))]
    top = max(logs)
    return -x + top + math.log(math.fsum(math.exp(t - top) for t in logs))


def _reg_lower_gamma(n, x, lx):
    # P(n, x) = e^-x x^n / n! * sum_k x^k / ((n+1)...(n+k)), valid for x < n
    term, terms = 1.0, [1.0]
    k = 1
    while term > 1e-17:  # the sum is >= 1
        term *= x / (n + k)
        terms.append(term)
        k += 1
    return math.exp(n * lx - x - math.lgamma(n + 1)) * math.fsum(terms)


def reg_upper_gamma(n: int, x: float) -> float:
    """Regularized upper incomplete gamma Q(n, x) for integer ``n >= 1``.

    Equals ``Pr(X > x)`` for ``X ~ Gamma(n, 1)``.
    """
    return min(1.0, math.exp(log_reg_upper_gamma(n, x)))


def inv_reg_upper_gamma(n: int, p: float, tol: SpecfunTolerance = DEFAULT_TOLERANCE) -> float:
    """Return ``x >= 0`` with ``reg_upper_gamma(n, x) == p``.

    Safeguarded Newton iteration inside a bisection bracket.
    """
    _check_order(n)
    if not 0 < p <= 1:
        raise DomainError(f"p must lie in (0, 1], got {p!r}")
    if p == 1:
        return 0.0
    lo, hi = 0.0, float(n)
    while reg_upper_gamma(n, hi) > p:
        lo, hi = hi, 2 * hi
    log_norm = math.lgamma(n)
    x = 0.5 * (lo + hi)
    for _ in range(tol.max_iterations):
        f = reg_upper_gamma(n, x) - p
        if f > 0:
            lo = x
        else:
            hi = x
        # d/dx Q(n, x) = -x^(n-1) e^-x / (n-1)!
        slope = -math.exp((n - 1) * math.log(x) - x - log_norm) if x > 0 else 0.0
        step = f / slope if slope != 0 else math.inf
        candidate = x - step
        if not lo < candidate < hi:
            candidate = 0.5 * (lo + hi)
        if abs(candidate - x) <= tol.root_abs_tol or hi - lo <= tol.root_abs_tol:
            return candidate
        x = candidate
    raise ConvergenceError(f"inverse gamma did not converge for n={n}, p={p}")


def _halley_w0(x, w, tol):
    for _ in range(tol.max_iterations):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        if wp1 == 0.0:
            return w
        step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w -= step
        if abs(step) <= tol.root_abs_tol * max(1.0, abs(w)):
            return w
    raise ConvergenceError(f"Lambert W did not converge at x={x}")


def lambert_w0(x: float, tol: SpecfunTolerance = DEFAULT_TOLERANCE) -> float:
    """Principal branch W0 of the Lambert W function, ``w * exp(w) == x``."""
    if x < -_INV_E:
        # allow the rounding slop of -1/e itself
        if x < -_INV_E * (1 + 1e-15):
            raise DomainError(f"lambert_w0 defined for x >= -1/e, got {x!r}")
        return -1.0
    if x == 0:
        return 0.0
    if x == -_INV_E:
        return -1.0
    if x > math.e:
        lx = math.log(x)
        w = lx - math.log(lx)
    elif x < -0.25:
        # branch-point series in p = sqrt(2(ex + 1))
        p = math.sqrt(max(0.0, 2.0 * (math.e * x + 1.0)))
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p ** 3
    else:
        w = math.log1p(x)
    return _halley_w0(x, w, tol)


def lambert_w0_of_exp(log_x: float, tol: SpecfunTolerance = DEFAULT_TOLERANCE) -> float:
    """W0(exp(log_x)) without forming ``exp(log_x)``.

    For large arguments solves ``w + log(w) = log_x`` by Newton's method.
    """
    if log_x < 1.0:
        return lambert_w0(math.exp(log_x), tol)
    w = log_x - math.log(log_x)
    for _ in range(tol.max_iterations):
        step = (w + math.log(w) - log_x) / (1.0 + 1.0 / w)
        w -= step
        if abs(step) <= tol.root_abs_tol * max(1.0, abs(w)):
            return w
    raise ConvergenceError(f"Lambert W did not converge at log(x)={log_x}")


def digamma_int(n: int) -> float:
    """Digamma at a positive integer: ``-gamma + H_{n-1}``."""
    _check_order(n)
    return math.fsum([-EULER_GAMMA] + [1.0 / k for k in range(1, int(n))])


def hyp2f2_nn(n: int, x: float, tol: SpecfunTolerance = DEFAULT_TOLERANCE) -> float:
    """2F2(n, n; n+1, n+1; -x) by its power series.

    The term ratio is ``(n+k)^2 / (n+k+1)^2 * (-x) / (k+1)``. Summation stops
    once a term drops below ``series_rel_tol`` times the running sum; running
    out of iterations raises instead of truncating silently.
    """
    _check_order(n, lowest=2)
    if x < 0:
        raise DomainError(f"x must be >= 0, got {x!r}")
    term = 1.0
    terms = [term]
    for k in range(tol.max_iterations):
        ratio = (n + k) / (n + k + 1)
        term *= ratio * ratio * (-x) / (k + 1)
        terms.append(term)
        total = math.fsum(terms)
        if abs(term) <= tol.series_rel_tol * abs(total):
            return total
    raise ConvergenceError(f"2F2 series did not converge for n={n}, x={x}")
