"""Monte Carlo execution of the full on-off protocol.

Each trial draws Bob's and Eve's vector channels, applies the on-off rule,
picks the design (fixed for NAE, per-draw for AE), projects Eve's channel on
the beamforming basis and books a secrecy outage when
``log2(1 + gamma_e) > R_b - R_s`` and a decoding failure when ``R_b > C_b``.

Trials are cut into fixed-size blocks and block ``k`` always uses RNG
stream ``(seed, k)``. Workers take blocks round-robin and the per-block
tallies are merged in block order, so reports do not depend on the number
of workers.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np

from .ae import adaptive_rates
from .channel import (
    RngStream,
    householder,
    eve_snr_from_gains,
    project_eve_channel,
    sample_eve_channel,
    sample_intended_channel,
)
from .errors import DomainError
from .nae import NaeDesign
from .secrecy import LN2, SecrecyBudget, SystemConfig, capacity_bob, eve_snr_ccdf

THREADS_ENV = "SECRECYLAB_THREADS"
DEFAULT_BLOCK = 1 << 15


def thread_cap():
    """Worker cap from ``SECRECYLAB_THREADS``, else the CPU count."""
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise DomainError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
        if value < 1:
            raise DomainError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
        return value
    return os.cpu_count() or 1


@dataclass(frozen=True)
class CampaignSpec:
    """What to simulate.

    ``scheme`` is a fixed :class:`NaeDesign` or, for adaptive encoding, the
    :class:`SecrecyBudget` the per-draw designs must meet.
    """

    scheme: Union[NaeDesign, SecrecyBudget]
    trials: int
    config: SystemConfig
    worker_streams: int = 1
    block_size: int = DEFAULT_BLOCK
    eve_noise_variance: float = 0.0
    gain_bin_edges: Optional[Sequence[float]] = None

    def __post_init__(self):
        if self.trials < 1:
            raise DomainError(f"trials must be >= 1, got {self.trials}")
        if self.worker_streams < 1:
            raise DomainError(f"worker_streams must be >= 1, got {self.worker_streams}")
        if self.block_size < 1:
            raise DomainError("block_size must be >= 1")
        if self.eve_noise_variance < 0:
            raise DomainError("eve_noise_variance must be >= 0")
        if isinstance(self.scheme, SecrecyBudget):
            if self.scheme.n_antennas != self.config.n_antennas:
                raise DomainError("budget and config disagree on N")
        elif not isinstance(self.scheme, NaeDesign):
            raise DomainError(f"unknown scheme {type(self.scheme).__name__}")

    @property
    def scheme_name(self):
        return "AE" if isinstance(self.scheme, SecrecyBudget) else "NAE"


class Estimate(NamedTuple):
    value: float
    half_width: float

    def contains(self, x, sigmas=1.96):
        return abs(x - self.value) <= self.half_width * sigmas / 1.96


@dataclass(frozen=True)
class SimulationReport:
    trials: int
    transmissions: int
    secrecy_outages: int
    decode_failures: int
    empirical_p_tx: Estimate
    empirical_p_so: Estimate
    empirical_throughput: Estimate
    bin_transmissions: tuple = ()
    bin_outages: tuple = ()


class _BlockTally(NamedTuple):
    transmissions: int
    outages: int
    decode_failures: int
    rs_sum: float
    rs_sumsq: float
    bin_tx: np.ndarray
    bin_out: np.ndarray


def _run_block(spec: CampaignSpec, index: int, size: int) -> _BlockTally:
    cfg = spec.config
    n, power = cfg.n_antennas, cfg.power_linear
    rng = RngStream(cfg.rng_seed, index)
    h = sample_intended_channel(rng, n, size=size)
    g = sample_eve_channel(rng, n, cfg.eve_variance, size=size)
    h2 = np.sum(np.abs(h) ** 2, axis=1)

    if isinstance(spec.scheme, NaeDesign):
        d = spec.scheme
        tx = h2 > d.threshold
        phi = np.full(size, d.phi)
        rb = np.full(size, d.rates.rate_codeword)
        rs = np.full(size, d.rates.rate_message)
    else:
        tx, phi, rb, rs = adaptive_rates(h2, spec.scheme.lam, power)

    idx = np.flatnonzero(tx)
    outage = np.zeros(idx.size, dtype=bool)
    failure = np.zeros(idx.size, dtype=bool)
    if idx.size:
        g1, g2 = project_eve_channel(h[idx], g[idx])
        p_t = phi[idx]
        snr = eve_snr_from_gains(
            np.abs(g1) ** 2,
            np.sum(np.abs(g2) ** 2, axis=1),
            p_t,
            n,
            power=power,
            eve_noise=spec.eve_noise_variance,
        )
        eve_capacity = np.log1p(snr) / LN2
        outage = eve_capacity > rb[idx] - rs[idx]
        failure = rb[idx] > capacity_bob(power, p_t, h2[idx])

    earned = np.where(tx, rs, 0.0)
    if spec.gain_bin_edges is not None:
        edges = np.asarray(spec.gain_bin_edges, dtype=float)
        which = np.searchsorted(edges, h2[idx], side="right") - 1
        nbins = len(edges) - 1
        ok = (which >= 0) & (which < nbins)
        bin_tx = np.bincount(which[ok], minlength=nbins)
        bin_out = np.bincount(which[ok], weights=outage[ok], minlength=nbins).astype(np.int64)
    else:
        bin_tx = bin_out = np.zeros(0, dtype=np.int64)
    return _BlockTally(
        int(idx.size),
        int(outage.sum()),
        int(failure.sum()),
        float(earned.sum()),
        float(np.dot(earned, earned)),
        bin_tx,
        bin_out,
    )


def _blocks(trials, block_size):
    count = -(-trials // block_size)
    return [(k, min(block_size, trials - k * block_size)) for k in range(count)]


def _binomial(successes, total):
    if total == 0:
        return Estimate(math.nan, math.nan)
    p = successes / total
    return Estimate(p, 1.96 * math.sqrt(p * (1 - p) / total))


def simulate_campaign(spec: CampaignSpec) -> SimulationReport:
    """Run a seeded campaign and tally empirical rates with 95% intervals."""
    blocks = _blocks(spec.trials, spec.block_size)
    workers = max(1, min(spec.worker_streams, thread_cap(), len(blocks)))

    def worker(w):
        return [(k, _run_block(spec, k, size)) for k, size in blocks[w::workers]]

    if workers == 1:
        results = worker(0)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = [item for chunk in pool.map(worker, range(workers)) for item in chunk]
    tallies = [t for _, t in sorted(results, key=lambda item: item[0])]

    m = spec.trials
    tx = sum(t.transmissions for t in tallies)
    outages = sum(t.outages for t in tallies)
    failures = sum(t.decode_failures for t in tallies)
    rs_sum = math.fsum(t.rs_sum for t in tallies)
    rs_sumsq = math.fsum(t.rs_sumsq for t in tallies)
    mean = rs_sum / m
    var = max(0.0, rs_sumsq / m - mean * mean) * m / (m - 1) if m > 1 else 0.0

    if spec.gain_bin_edges is not None:
        bin_tx = tuple(int(x) for x in np.sum([t.bin_tx for t in tallies], axis=0))
        bin_out = tuple(int(x) for x in np.sum([t.bin_out for t in tallies], axis=0))
    else:
        bin_tx = bin_out = ()

    return SimulationReport(
        trials=m,
        transmissions=tx,
        secrecy_outages=outages,
        decode_failures=failures,
        empirical_p_tx=_binomial(tx, m),
        empirical_p_so=_binomial(outages, tx),
        empirical_throughput=Estimate(mean, 1.96 * math.sqrt(var / m)),
        bin_transmissions=bin_tx,
        bin_outages=bin_out,
    )


def sample_eve_snr(phi: float, n: int, samples: int, rng_seed: int, chunk_elements=1 << 20):
    """Eve SNR samples produced through the beamforming basis.

    Eve's SNR distribution does not depend on Bob's channel (the projected
    Eve channel is i.i.d. Gaussian for every unitary basis), so one Bob draw
    is shared by each chunk of samples to keep large-N runs affordable.
    ``W`` is unitary, so ``||g2||^2 = ||g||^2 - |g1|^2``.
    """
    if not 0 < phi < 1:
        raise DomainError(f"phi must lie in (0, 1), got {phi!r}")
    per_chunk = max(1, chunk_elements // n)
    out = np.empty(samples)
    for k, start in enumerate(range(0, samples, per_chunk)):
        size = min(per_chunk, samples - start)
        rng = RngStream(rng_seed, k)
        h = sample_intended_channel(rng, n)
        g = sample_eve_channel(rng, n, size=size)
        v, phase = householder(h)
        g1 = -phase[0] * (g[:, 0] - 2.0 * (g @ v) * np.conj(v[0]) / np.vdot(v, v).real)
        flat = g.view(np.float64)
        g1_gain = np.abs(g1) ** 2
        g2_gain = np.einsum("ij,ij->i", flat, flat) - g1_gain
        out[start:start + size] = eve_snr_from_gains(g1_gain, g2_gain, phi, n)
    return out


def ccdf_deviations(phi: float, n: int, samples: int, rng_seed: int):
    """Max c.c.d.f. gaps of one sample set against the exact law and its large-N limit.

    The grid has 200 points spanning the 0.001 to 0.999 quantiles of the
    closed form. Returns ``(exact_gap, exponential_gap)``.
    """
    if samples < 10_000:
        raise DomainError(f"need at least 10^4 samples, got {samples}")
    tail = np.linspace(0.999, 0.001, 200)
    grid = (tail ** (1.0 / (1 - n)) - 1.0) * (n - 1) / (1.0 / phi - 1.0)
    snr = np.sort(sample_eve_snr(phi, n, samples, rng_seed))
    empirical = 1.0 - np.searchsorted(snr, grid, side="right") / samples
    exact = eve_snr_ccdf(grid, phi, n)
    limit = np.exp(-grid * (1.0 - phi) / phi)
    return float(np.max(np.abs(empirical - exact))), float(np.max(np.abs(empirical - limit)))


def validate_eve_ccdf(phi: float, n: int, samples: int, rng_seed: int, reference="exact") -> float:
    """Largest gap between the empirical and closed-form Eve SNR c.c.d.f.

    ``reference="exponential"`` compares with the large-N limit
    ``exp(-gamma (1 - phi) / phi)`` instead of the exact law.
    """
    if reference not in ("exact", "exponential"):
        raise DomainError(f"unknown reference {reference!r}")
    exact, limit = ccdf_deviations(phi, n, samples, rng_seed)
    return exact if reference == "exact" else limit
