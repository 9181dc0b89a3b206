"""Non-adaptive encoding: one codebook and one power split for every transmission.

For a target message rate the delay-optimal design (largest transmit
probability meeting the secrecy budget) is closed form; the throughput
``R_s * p_tx(R_s)`` is then maximised over ``R_s`` numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DomainError, SearchFailure
from .secrecy import LN2, SecrecyBudget, SystemConfig, WiretapRates, lambda_quantity
from .specfun import inv_reg_upper_gamma, lambert_w0_of_exp, log_reg_upper_gamma, reg_upper_gamma

# largest plausible effective gain when bounding the R_s search
_GAIN_CAP = 1e3
_FD_STEP = 1e-6
_RATE_TOL = 1e-8
_RATE_FLOOR = 1e-200


@dataclass(frozen=True)
class NaeDesign:
    rates: WiretapRates
    phi: float
    threshold: float
    p_tx: float
    throughput: float


def _check(budget: SecrecyBudget, config: SystemConfig):
    if budget.n_antennas != config.n_antennas:
        raise DomainError(
            f"budget is for N={budget.n_antennas} but config has N={config.n_antennas}"
        )


def _gain_threshold(rs, lam, power):
    """``(sqrt(2^Rs lam) + sqrt(2^Rs - 1))^2 / P``: the threshold at the optimal split."""
    x = 2.0 ** rs
    return (math.sqrt(x * lam) + math.sqrt(math.expm1(rs * LN2))) ** 2 / power


def delay_optimal_design(rs: float, budget: SecrecyBudget, config: SystemConfig) -> NaeDesign:
    """Maximise the transmit probability for a fixed message rate ``rs``.

    The secrecy constraint is met with equality, the codeword rate equals
    Bob's capacity at the threshold, and the split balances the two.
    ``phi`` and ``R_b`` do not depend on the power.
    """
    _check(budget, config)
    if not rs > 0:
        raise DomainError(f"message rate must be > 0, got {rs!r}")
    lam, power, n = budget.lam, config.power_linear, config.n_antennas
    x = 2.0 ** rs
    xm1 = math.expm1(rs * LN2)
    if budget.unconstrained:
        phi, rb = 1.0, rs
        mu = xm1 / power
    else:
        phi = math.sqrt(xm1) / (math.sqrt(x * lam) + math.sqrt(xm1))
        rb = rs + math.log2(math.sqrt(-math.expm1(-rs * LN2) * lam) + 1.0)
        mu = math.expm1(rb * LN2) / (power * phi)
    p_tx = reg_upper_gamma(n, _gain_threshold(rs, lam, power))
    return NaeDesign(WiretapRates(rb, rs), phi, mu, p_tx, p_tx * rs)


def throughput(rs: float, budget: SecrecyBudget, config: SystemConfig) -> float:
    """``R_s * p_tx_max(R_s)``."""
    if not rs > 0:
        raise DomainError(f"message rate must be > 0, got {rs!r}")
    return rs * reg_upper_gamma(config.n_antennas, _gain_threshold(rs, budget.lam, config.power_linear))


def log_throughput(rs, budget, config):
    # same sign of derivative as the throughput, but immune to p_tx underflow
    return math.log(rs) + log_reg_upper_gamma(
        config.n_antennas, _gain_threshold(rs, budget.lam, config.power_linear)
    )


def throughput_slope_sign(rs, budget, config):
    """Sign of d(throughput)/dR_s by central differences on the log throughput."""
    h = _FD_STEP * rs
    d = log_throughput(rs + h, budget, config) - log_throughput(rs - h, budget, config)
    return (d > 0) - (d < 0)


def optimal_message_rate(budget: SecrecyBudget, config: SystemConfig):
    """Throughput-maximising message rate and its design.

    The throughput rises then falls in ``R_s``, so the single sign change of
    its derivative is bracketed by doubling or halving from 1 bit, then
    bisected to 1e-8 bits (relative, for optima below 1 bit).

    Returns
    -------
    (rs_star, NaeDesign)
    """
    _check(budget, config)
    ceiling = math.log2(1.0 + config.power_linear * _GAIN_CAP) + 2.0 * math.log2(
        math.sqrt(budget.lam) + 1.0
    )
    lo = hi = 1.0
    if throughput_slope_sign(1.0, budget, config) > 0:
        while throughput_slope_sign(hi, budget, config) > 0:
            lo, hi = hi, 2.0 * hi
            if lo > ceiling:
                raise SearchFailure(f"no sign change of the throughput slope below {ceiling:.3g} bits")
    else:
        while throughput_slope_sign(lo, budget, config) <= 0:
            lo, hi = 0.5 * lo, lo
            if lo < _RATE_FLOOR:
                raise SearchFailure(f"throughput slope is not positive above {_RATE_FLOOR:g} bits")
    while hi - lo > _RATE_TOL * min(1.0, hi):
        mid = 0.5 * (lo + hi)
        if throughput_slope_sign(mid, budget, config) > 0:
            lo = mid
        else:
            hi = mid
    rs = 0.5 * (lo + hi)
    return rs, delay_optimal_design(rs, budget, config)


def _log_lambert_argument(budget, config):
    # log of e * N! * P^N / (sqrt(lam) + 1)^(2N)
    n = config.n_antennas
    return (
        1.0
        + math.lgamma(n + 1)
        + n * math.log(config.power_linear)
        - 2 * n * math.log(math.sqrt(budget.lam) + 1.0)
    )


def rs_high_snr_approx(budget: SecrecyBudget, config: SystemConfig) -> float:
    """Lambert-W approximation of the optimal message rate at high power."""
    _check(budget, config)
    w = lambert_w0_of_exp(_log_lambert_argument(budget, config))
    return (w - 1.0) / (config.n_antennas * LN2)


class HighSnrThroughput(NamedTuple):
    eta: float
    eta_unconstrained: float
    eta_loss: float


def secrecy_loss(lam):
    """Throughput loss ``2 log2(sqrt(lam) + 1)`` shared by both schemes."""
    return 2.0 * math.log2(math.sqrt(lam) + 1.0)


def throughput_high_snr_approx(budget: SecrecyBudget, config: SystemConfig) -> HighSnrThroughput:
    _check(budget, config)
    p, n = config.power_linear, config.n_antennas
    if p <= 1:
        raise DomainError(f"high-SNR approximation needs P > 1, got {p!r}")
    free = math.log2(p) - math.log2(math.log(p)) / n + math.lgamma(n) / (n * LN2)
    loss = secrecy_loss(budget.lam)
    return HighSnrThroughput(free - loss, free, loss)


class PowerCost(NamedTuple):
    approx_db: float
    branch: str
    exact_form_db: float


def power_cost_db(eps1: float, eps2: float, n: int) -> PowerCost:
    """Extra power (dB) to tighten the budget from ``eps1`` to ``eps2`` at fixed throughput.

    ``approx_db`` uses the closed form for imposing a budget (``eps1 == 1``)
    or the small-epsilon form otherwise; ``exact_form_db`` is the difference
    of the secrecy-loss terms without the small-epsilon step.
    """
    if not 0 < eps2 <= eps1 <= 1:
        raise DomainError(f"need 0 < eps2 <= eps1 <= 1, got eps1={eps1!r}, eps2={eps2!r}")
    lam1, lam2 = lambda_quantity(eps1, n), lambda_quantity(eps2, n)
    exact = 20.0 * math.log10((math.sqrt(lam2) + 1.0) / (math.sqrt(lam1) + 1.0))
    if eps1 == 1:
        return PowerCost(20.0 * math.log10(math.sqrt(lam2) + 1.0), "impose", exact)
    return PowerCost(10.0 / (n - 1) * math.log10(eps1 / eps2), "small_epsilon", exact)


def min_power(rs: float, budget: SecrecyBudget, delta: float) -> float:
    """Least power meeting both the secrecy budget and ``p_tx >= delta``."""
    if not rs > 0:
        raise DomainError(f"message rate must be > 0, got {rs!r}")
    if not 0 < delta < 1:
        raise DomainError(f"delta must lie in (0, 1), got {delta!r}")
    return _gain_threshold(rs, budget.lam, 1.0) / inv_reg_upper_gamma(budget.n_antennas, delta)
