"""Secrecy-outage formulas shared by both encoding schemes.

Eve is assumed noiseless (the worst case), so her SNR is the ratio
``|g1|^2 / ||g2||^2`` scaled by the power split and is independent of both the
total power and her channel variance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .specfun import reg_upper_gamma

LN2 = math.log(2.0)


def db_to_linear(db):
    out = np.power(10.0, np.asarray(db, dtype=float) / 10.0)
    return float(out) if out.ndim == 0 else out


def linear_to_db(x):
    out = 10.0 * np.log10(np.asarray(x, dtype=float))
    return float(out) if out.ndim == 0 else out


def _check_antennas(n):
    if int(n) != n or n < 2:
        raise DomainError(f"need an integer number of antennas N >= 2, got {n!r}")


def _check_epsilon(epsilon):
    if not 0 < epsilon <= 1:
        raise DomainError(f"epsilon must lie in (0, 1], got {epsilon!r}")


@dataclass(frozen=True)
class SystemConfig:
    """Global run context.

    ``eve_variance`` does not enter any closed form; it only scales the
    simulated Eve channel, and cancels out of her SNR unless a nonzero Eve
    noise floor is simulated.
    """

    n_antennas: int
    power_linear: float
    eve_variance: float = 1.0
    rng_seed: int = 0

    def __post_init__(self):
        _check_antennas(self.n_antennas)
        if not self.power_linear > 0:
            raise DomainError(f"power must be > 0, got {self.power_linear!r}")
        if not self.eve_variance > 0:
            raise DomainError(f"Eve channel variance must be > 0, got {self.eve_variance!r}")
        if not 0 <= self.rng_seed < 2 ** 64:
            raise DomainError("rng_seed must be a 64-bit unsigned integer")

    @classmethod
    def from_db(cls, n_antennas, power_db, **kwargs):
        return cls(n_antennas, 10.0 ** (power_db / 10.0), **kwargs)

    @property
    def power_db(self):
        return 10.0 * math.log10(self.power_linear)


def lambda_quantity(epsilon: float, n: int) -> float:
    """Secrecy budget term ``(N-1)(eps^(1/(1-N)) - 1)``; zero iff ``eps == 1``."""
    _check_epsilon(epsilon)
    _check_antennas(n)
    # expm1 keeps precision when eps is close to 1
    return (n - 1) * math.expm1(math.log(epsilon) / (1 - n))


@dataclass(frozen=True)
class SecrecyBudget:
    epsilon: float
    n_antennas: int
    lam: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "lam", lambda_quantity(self.epsilon, self.n_antennas))

    @property
    def unconstrained(self):
        return self.epsilon == 1


@dataclass(frozen=True)
class WiretapRates:
    """Codeword rate ``rate_codeword`` and secret message rate ``rate_message`` (bits/use)."""

    rate_codeword: float
    rate_message: float

    def __post_init__(self):
        if self.rate_message < 0 or self.rate_codeword < self.rate_message:
            raise DomainError(
                f"need 0 <= R_s <= R_b, got R_b={self.rate_codeword!r}, R_s={self.rate_message!r}"
            )

    @property
    def rate_redundancy(self):
        return self.rate_codeword - self.rate_message


def eve_snr_ccdf(gamma, phi: float, n: int):
    """Pr(gamma_e > gamma) for power split ``phi`` and ``n`` antennas.

    Accepts scalars or arrays for ``gamma``.
    """
    _check_antennas(n)
    if not 0 < phi < 1:
        raise DomainError(f"phi must lie in (0, 1), got {phi!r}")
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0):
        raise DomainError("gamma must be >= 0")
    out = np.exp((1 - n) * np.log1p(g * (1.0 / phi - 1.0) / (n - 1)))
    return float(out) if out.ndim == 0 else out


def secrecy_outage_probability(rates: WiretapRates, phi: float, n: int) -> float:
    """Probability that Eve's capacity exceeds the rate redundancy.

    With ``phi == 1`` no artificial noise is sent and a noiseless Eve has
    infinite SNR, so the outage is certain regardless of redundancy.
    """
    _check_antennas(n)
    if not 0 < phi <= 1:
        raise DomainError(f"phi must lie in (0, 1], got {phi!r}")
    if phi == 1:
        return 1.0
    gap = math.expm1(rates.rate_redundancy * LN2)
    return math.exp((1 - n) * math.log1p(gap * (1.0 / phi - 1.0) / (n - 1)))


def transmit_probability(mu: float, n: int) -> float:
    """Pr(||h||^2 > mu) for the on-off rule."""
    _check_antennas(n)
    if mu < 0:
        raise DomainError(f"threshold must be >= 0, got {mu!r}")
    return reg_upper_gamma(n, mu)


def capacity_bob(p, phi, h2):
    """``log2(1 + P * phi * ||h||^2)``; vectorises over numpy inputs."""
    scalar = not (np.ndim(p) or np.ndim(phi) or np.ndim(h2))
    if scalar and (not p > 0 or not 0 < phi <= 1 or h2 < 0):
        raise DomainError(f"invalid capacity arguments P={p!r}, phi={phi!r}, h2={h2!r}")
    # one code path for scalars and arrays so simulated and designed rates agree bitwise
    out = np.log1p(np.multiply(np.multiply(p, phi), h2)) / LN2
    return float(out) if scalar else out
