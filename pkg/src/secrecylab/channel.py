"""Vector channel sampling and artificial-noise beamforming.

Alice beamforms along ``w1 = conj(h) / ||h||`` and spreads artificial noise
over the remaining columns ``W2`` of a unitary completion ``W = [w1 W2]``.
The completion is a Householder reflection, so it can be applied to a batch
of Eve channels in O(N) per draw without forming the N x N matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateChannelError, DomainError

_MIN_NORM = 1e-30


class RngStream:
    """Counter-based random stream identified by ``(seed, stream)``.

    Backed by Philox with the pair as its key, so stream ``k`` of a given
    seed is the same sequence no matter which worker consumes it.
    """

    def __init__(self, seed: int, stream: int = 0):
        self.seed = int(seed)
        self.stream = int(stream)
        self._gen = np.random.Generator(np.random.Philox(key=[self.seed, self.stream]))

    def complex_normal(self, shape, variance=1.0):
        """Circular complex Gaussians with ``E|z|^2 == variance``."""
        shape = (shape,) if np.isscalar(shape) else tuple(shape)
        x = self._gen.standard_normal(shape + (2,))
        z = x.view(np.complex128)[..., 0]
        return z * np.sqrt(0.5 * variance)


def sample_intended_channel(rng: RngStream, n: int, size=None):
    """Bob's channel: ``n`` i.i.d. unit-variance complex Gaussians.

    With ``size`` given, returns a ``(size, n)`` batch.
    """
    if n < 2:
        raise DomainError(f"need N >= 2, got {n}")
    return rng.complex_normal(n if size is None else (size, n))


def sample_eve_channel(rng: RngStream, n: int, variance=1.0, size=None):
    return rng.complex_normal(n if size is None else (size, n), variance)


def householder(h):
    """Householder data for a batch ``h`` of shape (..., N).

    Returns ``(v, phase)`` such that ``W = -phase * (I - 2 v v^H / v^H v)``
    has first column ``conj(h)/||h||``.
    """
    norm = np.linalg.norm(h, axis=-1, keepdims=True)
    if np.any(norm < _MIN_NORM):
        raise DegenerateChannelError("||h|| is below 1e-30; beam direction undefined")
    u = np.conj(h) / norm
    a = u[..., :1]
    mag = np.abs(a)
    phase = np.where(mag > 0, a / np.where(mag > 0, mag, 1.0), 1.0)
    # rotate u so its first entry is real >= 0, then reflect e1 -> -u'.
    # v = e1 + u' has |v|^2 = 2(1 + |u1|) >= 2, so it never degenerates.
    v = u / phase
    v[..., 0] += 1.0
    return v, phase


def null_space_basis(h) -> np.ndarray:
    """Unitary ``W = [w1 W2]`` with ``w1 = conj(h)/||h||`` and ``h^T W2 = 0``."""
    h = np.asarray(h, dtype=complex)
    v, phase = householder(h)
    n = h.shape[-1]
    reflect = np.eye(n, dtype=complex) - 2.0 * np.outer(v, v.conj()) / np.vdot(v, v).real
    return -phase[0] * reflect


def project_eve_channel(h, g):
    """Row-wise ``g^T W`` for batches of shape (M, N); returns ``(g1, g2)``."""
    v, phase = householder(h)
    vv = np.sum(np.abs(v) ** 2, axis=-1, keepdims=True)
    # g^T H = g^T - 2 (g^T v) v^H / (v^H v)
    gv = np.sum(g * v, axis=-1, keepdims=True)
    proj = -phase * (g - 2.0 * gv * v.conj() / vv)
    return proj[..., 0], proj[..., 1:]


@dataclass(frozen=True)
class NoiseSplit:
    """Signal power ``P * phi``; the rest is spread evenly over N-1 noise dimensions."""

    phi: float
    power: float
    n_antennas: int

    def __post_init__(self):
        if not 0 < self.phi <= 1:
            raise DomainError(f"phi must lie in (0, 1], got {self.phi!r}")
        if not self.power > 0:
            raise DomainError("power must be > 0")

    @property
    def signal_variance(self):
        return self.power * self.phi

    @property
    def an_variance_per_dim(self):
        return self.power * (1.0 - self.phi) / (self.n_antennas - 1)


@dataclass(frozen=True)
class ChannelDraw:
    h: np.ndarray
    g: np.ndarray
    basis: np.ndarray
    effective_gain: float
    g1_gain: float
    g2_gain: float

    @classmethod
    def from_channels(cls, h, g):
        h = np.asarray(h, dtype=complex)
        g = np.asarray(g, dtype=complex)
        basis = null_space_basis(h)
        proj = g @ basis
        return cls(
            h=h,
            g=g,
            basis=basis,
            effective_gain=float(np.sum(np.abs(h) ** 2)),
            g1_gain=float(np.abs(proj[0]) ** 2),
            g2_gain=float(np.sum(np.abs(proj[1:]) ** 2)),
        )

    @classmethod
    def sample(cls, rng: RngStream, n: int, eve_variance=1.0):
        h = sample_intended_channel(rng, n)
        g = sample_eve_channel(rng, n, eve_variance)
        return cls.from_channels(h, g)


def eve_snr_from_gains(g1_gain, g2_gain, phi, n, power=None, eve_noise=0.0):
    """Eve's SNR from projected gains ``|g1|^2`` and ``||g2||^2``.

    ``phi`` may be per-draw. Draws with ``phi == 1`` carry no artificial
    noise and give ``inf``. With ``eve_noise == 0`` only the gain ratio
    matters; a positive noise floor also needs the total ``power``.
    """
    g1_gain, g2_gain, phi = np.broadcast_arrays(
        np.asarray(g1_gain, dtype=float), np.asarray(g2_gain, dtype=float), np.asarray(phi, dtype=float)
    )
    silent_noise = phi == 1
    p = np.where(silent_noise, 0.5, phi)
    with np.errstate(divide="ignore"):
        if eve_noise == 0:
            out = (n - 1) / (1.0 / p - 1.0) * (g1_gain / g2_gain)
        else:
            sigma_v2 = power * (1.0 - p) / (n - 1)
            out = power * p * g1_gain / (sigma_v2 * g2_gain + eve_noise)
    out = np.where(silent_noise, np.inf, out)
    return float(out) if out.ndim == 0 else out


def eve_snr_sample(draw: ChannelDraw, split: NoiseSplit) -> float:
    """Instantaneous noiseless-Eve SNR; ``inf`` when no artificial noise is sent."""
    return eve_snr_from_gains(draw.g1_gain, draw.g2_gain, split.phi, split.n_antennas)
