"""Per-link stochastic channels.

Large-scale log-distance path loss with lognormal shadowing, clustered
Rician multi-tap small-scale fading collapsed to a flat-equivalent scalar
gain per frame, and AR(1) frame-to-frame evolution of the scattered
components. All randomness comes from deterministic substreams derived by
hashing (master_seed, link id, candidate key), so any link of any candidate
can be re-realized bit-identically, in any order, on any worker.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from .scenario import Point2D, ScenarioConfig, SmallScaleParams, distance

# Node-pair identifiers; also the substream labels.
LINK_IDS = ("bs_bob", "bs_eve", "bs_target", "bs_ris",
            "ris_bob", "ris_eve", "ris_target")

# Direct links that a BlockageSpec flag can attenuate.
_BLOCKABLE = {"bs_bob": "bs_bob", "bs_eve": "bs_eve", "bs_target": "bs_target"}

_MIN_DISTANCE_M = 1.0

_clamp_warnings = 0


def clamp_warning_count() -> int:
    """Number of times a sub-reference-distance d was clamped to 1 m."""
    return _clamp_warnings


def reset_clamp_warnings() -> None:
    global _clamp_warnings
    _clamp_warnings = 0


def derive_seed(master_seed: int, *parts) -> int:
    """Stable 64-bit substream seed from a master seed and labels.

    Labels are joined into a canonical string and hashed with SHA-256, so
    the derivation is order-independent across workers and identical on
    every platform and run.
    """
    key = "|".join([str(master_seed), *[str(p) for p in parts]])
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big", signed=False)


def derive_stream(master_seed: int, *parts) -> np.random.Generator:
    """Deterministic generator for the substream named by ``parts``."""
    return np.random.default_rng(derive_seed(master_seed, *parts))


def complex_normal(rng: np.random.Generator, size) -> np.ndarray:
    """Circularly-symmetric complex Gaussian samples with unit total variance."""
    return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / math.sqrt(2.0)


def path_loss_db(d: float, params, shadow_db: float = 0.0) -> float:
    """Log-distance path loss in dB at distance ``d`` meters.

    d below the 1 m model reference is clamped to 1 m (far-field model);
    each clamp increments a module-level warning counter.
    """
    global _clamp_warnings
    if d < _MIN_DISTANCE_M:
        _clamp_warnings += 1
        d = _MIN_DISTANCE_M
    return params.pl_1m_db + 10.0 * params.exponent * math.log10(d) + shadow_db


@dataclass(frozen=True, eq=False)
class TapSet:
    """One realization of the L complex tap gains (unit expected total power)."""

    taps: np.ndarray


@dataclass(frozen=True, eq=False)
class LinkSeries:
    """Flat-equivalent complex channel gain per frame for one node pair."""

    frames: np.ndarray
    path_loss_db: float
    link_id: str


def _small_scale_profile(params: SmallScaleParams):
    """LoS amplitude and per-tap scatter standard deviations.

    The LoS component carries power K/(K+1) in tap 0; the remaining
    1/(K+1) scatter power is split across all taps with exponentially
    decaying weights normalized to sum to one.
    """
    k_lin = 10.0 ** (params.rician_k_db / 10.0)
    los_amp = math.sqrt(k_lin / (k_lin + 1.0))
    weights = params.decay_factor ** np.arange(params.num_taps, dtype=float)
    weights /= weights.sum()
    scatter_std = np.sqrt(weights / (k_lin + 1.0))
    return los_amp, scatter_std


def draw_taps(rng: np.random.Generator, params: SmallScaleParams) -> TapSet:
    """Draw one tap-set realization: fixed-phase LoS in tap 0 plus scatter.

    Stream consumption order: LoS phase, then the scatter vector.
    """
    los_amp, scatter_std = _small_scale_profile(params)
    phase = rng.uniform(0.0, 2.0 * math.pi)
    taps = scatter_std * complex_normal(rng, params.num_taps)
    taps = taps.astype(complex)
    taps[0] += los_amp * np.exp(1j * phase)
    return TapSet(taps)


def _ar_step(prev: np.ndarray, rho: float, innovation: np.ndarray) -> np.ndarray:
    return rho * prev + math.sqrt(1.0 - rho * rho) * innovation


def ar_advance(prev: np.ndarray, rho: float, rng: np.random.Generator) -> np.ndarray:
    """One AR(1) update of a normalized (unit-variance) scatter state.

    The innovation is a fresh unit-variance complex Gaussian, so the
    stationary variance of the state is preserved for any rho in [0, 1].
    """
    if not 0.0 <= rho <= 1.0:
        raise ValueError("rho must be in [0, 1]")
    return _ar_step(prev, rho, complex_normal(rng, np.shape(prev)))


def is_blocked(link_id: str, blockage) -> bool:
    """Whether ``link_id`` is flagged as obstructed in the BlockageSpec."""
    flag = _BLOCKABLE.get(link_id)
    return bool(flag) and bool(getattr(blockage, flag))


def realize_link(cfg: ScenarioConfig, a: Point2D, b: Point2D, link_id: str,
                 stream: np.random.Generator) -> LinkSeries:
    """Realize one node pair's channel over the configured frame count.

    Draws a single shadowing sample (held fixed across frames), the initial
    tap set, and per-frame AR(1) innovations from ``stream``, in that order.
    Returns the coherent tap sum per frame scaled by the amplitude path
    loss, including blockage attenuation when the link is flagged.
    """
    d = distance(a, b)
    if d == 0.0:
        raise ValueError(f"link '{link_id}': endpoints coincide")

    shadow = stream.normal(0.0, cfg.path_loss.shadow_sigma_db)
    pl_db = path_loss_db(d, cfg.path_loss, shadow)
    if is_blocked(link_id, cfg.blockage):
        pl_db += cfg.blockage.blockage_loss_db
    amplitude = 10.0 ** (-pl_db / 20.0)

    ss = cfg.small_scale
    num_frames = cfg.temporal.num_frames
    rho = cfg.temporal.rho
    los_amp, scatter_std = _small_scale_profile(ss)
    phase = stream.uniform(0.0, 2.0 * math.pi)
    los = np.zeros(ss.num_taps, dtype=complex)
    los[0] = los_amp * np.exp(1j * phase)

    # Frame 0 state is a stationary draw; the rest are innovations.
    draws = complex_normal(stream, (num_frames, ss.num_taps))
    state = draws[0]
    frames = np.empty(num_frames, dtype=complex)
    frames[0] = np.sum(los + scatter_std * state)
    for t in range(1, num_frames):
        state = _ar_step(state, rho, draws[t])
        frames[t] = np.sum(los + scatter_std * state)

    return LinkSeries(frames=frames * amplitude, path_loss_db=pl_db, link_id=link_id)
