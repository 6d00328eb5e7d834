"""Two-level power delay profile model and the fading self-interference channel.

The model has one direct tap of power ``p_direct`` followed by ``t_r - 1``
reflected taps of power ``p_reflected``. Its stochastic version makes tap 0
Rician (line-of-sight amplitude ``sqrt(p_direct)`` with a uniformly random
phase plus CN(0, p_reflected) scatter) and the remaining taps Rayleigh.

Random draws are addressed by ``(master_seed, draw_index)``: each draw owns a
generator seeded from that pair, so a Monte Carlo result never depends on how
draws were split between workers or in what order they were evaluated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ingest import SweepTable
from .metrics import PowerDelayProfile, delay_stats


@dataclass(frozen=True)
class TwoLevelPdp:
    p_direct: float
    p_reflected: float
    t_r: int
    delay_step_s: float = 1.0

    def __post_init__(self):
        if self.p_direct < 0 or self.p_reflected < 0:
            raise ValueError("tap powers must be non-negative")
        if self.p_direct == 0 and self.p_reflected == 0:
            raise ValueError("direct and reflected power cannot both be zero")
        if int(self.t_r) != self.t_r or self.t_r < 1:
            raise ValueError(f"t_r must be a positive integer, got {self.t_r}")
        if not self.delay_step_s > 0:
            raise ValueError("delay_step_s must be positive")

    @property
    def drr_db(self) -> float:
        """Direct-to-reflected ratio in dB (per-tap powers)."""
        with np.errstate(divide="ignore"):
            return float(10 * np.log10(self.p_direct) - 10 * np.log10(self.p_reflected))


@dataclass(frozen=True)
class FadingModel:
    """Statistics of the self-interference taps and the signal-of-interest tap.

    ``p_direct``/``p_reflected`` may both be zero here (no self-interference);
    that is the configuration the ideal full-duplex capacity corresponds to.
    """

    p_direct: float
    p_reflected: float
    t_r: int
    p_signal: float

    def __post_init__(self):
        if self.p_direct < 0 or self.p_reflected < 0:
            raise ValueError("tap powers must be non-negative")
        if int(self.t_r) != self.t_r or self.t_r < 1:
            raise ValueError(f"t_r must be a positive integer, got {self.t_r}")
        if not self.p_signal > 0:
            raise ValueError("p_signal must be positive")

    @property
    def kappa(self) -> float:
        return self.p_direct / self.p_reflected if self.p_reflected > 0 else float("inf")


@dataclass(frozen=True, eq=False)
class ChannelDraw:
    h_i: np.ndarray
    h_s: complex

    def __post_init__(self):
        h = np.asarray(self.h_i, dtype=complex).ravel()
        if h.size == 0 or not np.all(np.isfinite(h)) or not np.isfinite(self.h_s):
            raise ValueError("channel taps must be finite and non-empty")
        object.__setattr__(self, "h_i", h)
        object.__setattr__(self, "h_s", complex(self.h_s))


def two_level_pdp(model: TwoLevelPdp) -> PowerDelayProfile:
    powers = np.full(model.t_r, float(model.p_reflected))
    powers[0] = model.p_direct
    return PowerDelayProfile(powers, model.delay_step_s)


def drr_sweep(t_r_list, drr_grid_db, delay_step_s: float = 1.0) -> SweepTable:
    """RMS delay spread and coherence bandwidth versus DRR for several ``t_r``.

    Reflected per-tap power is pinned to 1; only the ratio matters.
    """
    drr = np.asarray(drr_grid_db, dtype=float).ravel()
    t_rs = [int(t) for t in t_r_list]
    if drr.size == 0 or not t_rs:
        raise ValueError("drr_sweep needs a non-empty DRR grid and T_R list")
    cols = [("DRR_dB", drr)]
    for t_r in t_rs:
        sig = np.empty(drr.size)
        bc = np.empty(drr.size)
        for i, d in enumerate(drr):
            st = delay_stats(two_level_pdp(TwoLevelPdp(10.0 ** (d / 10.0), 1.0, t_r, delay_step_s)))
            sig[i] = st.rms_delay_spread_s
            bc[i] = st.coherence_bw_hz
        cols.append((f"sigma_tau_T{t_r}", sig))
        cols.append((f"B_C_T{t_r}", bc))
    return SweepTable(tuple(cols))


def _unit_variates(master_seed: int, draw_index: int, t_r: int):
    """Scale-free randomness of one draw: (signal tap, LOS phase, scatter taps).

    The signal tap is drawn first so it does not depend on ``t_r``.
    """
    rng = np.random.default_rng([int(master_seed), int(draw_index)])
    s = rng.standard_normal(2)
    theta = 2.0 * np.pi * rng.random()
    z = rng.standard_normal((2, t_r))
    sqrt_half = np.sqrt(0.5)
    return (complex(s[0], s[1]) * sqrt_half, theta,
            (z[0] + 1j * z[1]) * sqrt_half)


def _assemble(model: FadingModel, w, theta, z):
    h_i = np.sqrt(model.p_reflected) * z
    h_i[..., 0] += np.sqrt(model.p_direct) * np.exp(1j * theta)
    h_s = np.sqrt(model.p_signal) * w
    return h_i, h_s


def draw_channel(model: FadingModel, draw_index: int, master_seed: int = 0) -> ChannelDraw:
    w, theta, z = _unit_variates(master_seed, draw_index, model.t_r)
    h_i, h_s = _assemble(model, w, theta, z)
    return ChannelDraw(h_i, h_s)


def draw_block(model: FadingModel, start: int, stop: int, master_seed: int = 0):
    """Draws ``start..stop-1`` stacked: ``h_i`` of shape (n, t_r), ``h_s`` of shape (n,).

    Row ``k`` is identical to ``draw_channel(model, start + k, master_seed)``.
    """
    n = stop - start
    w = np.empty(n, dtype=complex)
    theta = np.empty(n)
    z = np.empty((n, model.t_r), dtype=complex)
    for k in range(n):
        w[k], theta[k], z[k] = _unit_variates(master_seed, start + k, model.t_r)
    return _assemble(model, w, theta, z)


def channel_total_gain(draw: ChannelDraw) -> float:
    """Total tap energy ``sum |h_i[m]|**2``."""
    h = draw.h_i
    return float(np.sum(h.real ** 2 + h.imag ** 2))
