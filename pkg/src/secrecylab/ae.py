"""Adaptive encoding: power split and both code rates follow each channel draw.

Every transmission meets the secrecy budget with equality, and Alice stays
silent whenever ``||h||^2 <= lam / P`` since no positive secret rate is
possible there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .channel import RngStream, sample_intended_channel
from .errors import DomainError, QuadratureError
from .nae import HighSnrThroughput, secrecy_loss
from .quadrature import integrate
from .secrecy import LN2, SecrecyBudget, SystemConfig, WiretapRates, capacity_bob
from .specfun import digamma_int, hyp2f2_nn, reg_upper_gamma

_QUAD_TOL = 1e-9
_TAIL_TOL = 1e-12


def _check(budget, config):
    if budget.n_antennas != config.n_antennas:
        raise DomainError(
            f"budget is for N={budget.n_antennas} but config has N={config.n_antennas}"
        )


def adaptive_rates(h2, lam, power):
    """Vectorised optimum for effective gains ``h2``.

    Returns ``(transmitting, phi, rate_codeword, rate_message)`` arrays.

    Both closed forms are used in their rationalised shape,
        phi = (tau - lam) / (sqrt(tau lam (tau - lam + 1)) + tau)
        R_s = 2 log2((tau + 1) / (sqrt(lam tau) + sqrt(tau - lam + 1)))
    with ``tau = P h2``. This removes the division by ``lam - 1`` (so
    ``lam == 1`` needs no special case) and the cancellation between the two
    square roots at high power. ``lam == 0`` gives ``phi = 1`` and
    ``R_s = R_b = log2(1 + tau)`` exactly.
    """
    h2 = np.asarray(h2, dtype=float)
    tau = power * h2
    transmitting = h2 > lam / power
    t = np.where(transmitting, tau, lam + 1.0)
    root = np.sqrt(t - lam + 1.0)
    phi = (t - lam) / (np.sqrt(t * lam) * root + t)
    rs = 2.0 * np.log2((t + 1.0) / (np.sqrt(lam * t) + root))
    phi = np.where(transmitting, phi, 0.0)
    rs = np.where(transmitting, np.maximum(rs, 0.0), 0.0)
    rb = np.where(transmitting, capacity_bob(power, np.where(transmitting, phi, 1.0), h2), 0.0)
    rs = np.minimum(rs, rb)
    return transmitting, phi, rb, rs


@dataclass(frozen=True)
class AeDesignPoint:
    effective_gain: float
    effective_snr: float
    phi: float
    rates: WiretapRates
    transmitting: bool


def adapt_design(h2: float, budget: SecrecyBudget, config: SystemConfig) -> AeDesignPoint:
    """Best power split and code rates for one effective channel gain ``h2``.

    A silent slot is reported with ``phi = 0`` and both rates zero.
    """
    _check(budget, config)
    if not h2 >= 0:
        raise DomainError(f"effective gain must be >= 0, got {h2!r}")
    tx, phi, rb, rs = adaptive_rates(h2, budget.lam, config.power_linear)
    return AeDesignPoint(
        effective_gain=float(h2),
        effective_snr=config.power_linear * h2,
        phi=float(phi),
        rates=WiretapRates(float(rb), float(rs)),
        transmitting=bool(tx),
    )


def _gamma_pdf(r, n):
    r = np.asarray(r, dtype=float)
    with np.errstate(divide="ignore"):
        return np.exp((n - 1) * np.log(r) - r - math.lgamma(n))


def throughput_exact(budget: SecrecyBudget, config: SystemConfig) -> float:
    """Average adaptive message rate over ``||h||^2 ~ Gamma(N, 1)``.

    Adaptive Gauss-Kronrod on ``(lam/P, lam/P + 50 + 10N]``. The discarded
    tail is bounded using ``R_s <= log2(1 + P r) <= log2(1 + P) + r / ln 2``:
        tail <= log2(1+P) Q(N, b) + N Q(N+1, b) / ln 2,
    and the upper limit is pushed out until that bound is below 1e-12.
    """
    _check(budget, config)
    lam, power, n = budget.lam, config.power_linear, config.n_antennas
    lower = lam / power
    upper = lower + 50.0 + 10.0 * n

    def tail_bound(b):
        return math.log2(1.0 + power) * reg_upper_gamma(n, b) + n * reg_upper_gamma(n + 1, b) / LN2

    while tail_bound(upper) > _TAIL_TOL:
        upper *= 2.0

    def integrand(r):
        return adaptive_rates(r, lam, power)[3] * _gamma_pdf(r, n)

    value, err = integrate(integrand, lower, upper, abs_tol=_QUAD_TOL)
    if err > _QUAD_TOL:
        raise QuadratureError(f"AE throughput error estimate {err:.3g} above {_QUAD_TOL}")
    return value


def throughput_monte_carlo(budget: SecrecyBudget, config: SystemConfig, trials: int, seed=None):
    """Sample mean of the adaptive message rate over vector channel draws.

    Returns ``(mean, half_width)`` with a 95% normal-approximation interval.
    """
    _check(budget, config)
    seed = config.rng_seed if seed is None else seed
    h = sample_intended_channel(RngStream(seed, 0), config.n_antennas, size=trials)
    h2 = np.sum(np.abs(h) ** 2, axis=1)
    rs = adaptive_rates(h2, budget.lam, config.power_linear)[3]
    return float(rs.mean()), float(1.96 * rs.std(ddof=1) / math.sqrt(trials))


def throughput_approx_full(budget: SecrecyBudget, config: SystemConfig) -> float:
    """High-power AE throughput keeping the threshold and 2F2 correction terms."""
    _check(budget, config)
    if budget.unconstrained:
        raise DomainError("full approximation is undefined at epsilon = 1; use throughput_approx_simple")
    lam, p, n = budget.lam, config.power_linear, config.n_antennas
    x = lam / p
    sl = math.sqrt(lam)
    return (
        math.log2(p / lam)
        + digamma_int(n) / LN2
        + 2.0 * math.log2(sl / (sl + 1.0)) * reg_upper_gamma(n, x)
        + math.exp(n * math.log(x) - 2 * math.log(n) - math.lgamma(n)) / LN2 * hyp2f2_nn(n, x)
    )


def throughput_approx_simple(budget: SecrecyBudget, config: SystemConfig) -> HighSnrThroughput:
    """``log2 P + psi(N)/ln 2`` minus the secrecy loss."""
    _check(budget, config)
    p, n = config.power_linear, config.n_antennas
    if p <= 1:
        raise DomainError(f"high-SNR approximation needs P > 1, got {p!r}")
    free = math.log2(p) + digamma_int(n) / LN2
    loss = secrecy_loss(budget.lam)
    return HighSnrThroughput(free - loss, free, loss)


def throughput_gain_approx(config: SystemConfig) -> float:
    """High-power gain of adaptive over non-adaptive encoding (independent of epsilon)."""
    p, n = config.power_linear, config.n_antennas
    if p <= 1:
        raise DomainError(f"gain approximation needs P > 1, got {p!r}")
    return math.log2(math.log(p)) / n + digamma_int(n) / LN2 - math.lgamma(n) / (n * LN2)


class AeThroughputReport(NamedTuple):
    exact_quadrature: float
    exact_monte_carlo: float
    monte_carlo_half_width: float
    approx_full: float
    approx_simple: float
    loss: float


def throughput_report(budget: SecrecyBudget, config: SystemConfig, trials=100_000) -> AeThroughputReport:
    simple = throughput_approx_simple(budget, config)
    mc, hw = throughput_monte_carlo(budget, config, trials)
    full = math.nan if budget.unconstrained else throughput_approx_full(budget, config)
    return AeThroughputReport(
        throughput_exact(budget, config), mc, hw, full, simple.eta, simple.eta_loss
    )
