"""Ergodic full-duplex uplink capacity with water-filling, plus baselines.

Within one fade the known part of the self-interference is subtracted and
what is left is transmitter noise shaped by the self-interference channel
plus receiver noise, a colored Gaussian noise channel. Its capacity is
obtained by water-filling the received signal power ``|h_S|**2 * P_T`` over
``n_bins`` equally weighted frequency bins; the ergodic capacity is the Monte
Carlo mean over fades.

All powers are linear, in mW (or mW-normalized) units. Frequency integrals
are replaced by means over bins, so the flat-noise case reduces exactly to
``log2(1 + SNR)``.
"""

from __future__ import annotations

import math
from concurrent.futures import Executor, ProcessPoolExecutor
from contextlib import nullcontext
from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateChannel, NegativePower
from .ingest import SweepTable
from .pdp_model import ChannelDraw, FadingModel, draw_block

PSD_MODES = ("sum", "literal")

#: Draws per work unit. Fixed so per-draw arithmetic never depends on the worker count.
BLOCK_SIZE = 1024


def db_to_lin(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


def lin_to_db(x):
    return 10.0 * np.log10(x)


@dataclass(frozen=True)
class LinkBudgetParams:
    p_t: float
    n_t: float
    n_r: float
    fading: FadingModel
    n_bins: int = 128
    n_draws: int = 10_000
    master_seed: int = 0
    psd_mode: str = "sum"

    def __post_init__(self):
        if not self.p_t > 0:
            raise ValueError("p_t must be positive")
        if self.n_t < 0:
            raise ValueError("n_t must be non-negative")
        if not self.n_r > 0:
            raise ValueError("n_r must be positive")
        if self.n_bins < self.fading.t_r:
            raise ValueError(f"n_bins ({self.n_bins}) must be >= t_r ({self.fading.t_r})")
        if self.n_draws < 1:
            raise ValueError("n_draws must be >= 1")
        if self.psd_mode not in PSD_MODES:
            raise ValueError(f"psd_mode must be one of {PSD_MODES}")

    def with_fading(self, **kw) -> "LinkBudgetParams":
        return replace(self, fading=replace(self.fading, **kw))


def default_link_budget(p_d_db: float = -60.0, p_r_db: float = -60.0, **kw) -> LinkBudgetParams:
    """WiFi-like operating point: P_T 0 dBm, N_T -30 dBm, N_R -90 dBm, P_S -60 dB, T_R 32."""
    fading = FadingModel(p_direct=float(db_to_lin(p_d_db)), p_reflected=float(db_to_lin(p_r_db)),
                         t_r=kw.pop("t_r", 32), p_signal=float(db_to_lin(kw.pop("p_s_db", -60.0))))
    return LinkBudgetParams(p_t=1.0, n_t=1e-3, n_r=1e-9, fading=fading, **kw)


@dataclass(frozen=True)
class CapacityEstimate:
    mean_bits_per_s_per_hz: float
    std_error: float
    n_draws: int

    @classmethod
    def from_samples(cls, x: np.ndarray) -> "CapacityEstimate":
        n = x.size
        se = float(np.std(x, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
        return cls(float(np.mean(x)), se, n)


@dataclass(frozen=True, eq=False)
class NoisePsd:
    values: np.ndarray
    mode: str = "sum"


@dataclass(frozen=True, eq=False)
class WaterfillResult:
    nu: float
    allocation: np.ndarray
    capacity: float


# -- noise spectrum ---------------------------------------------------------

def _psd_rows(h_i: np.ndarray, n_t: float, n_r: float, n_bins: int, mode: str) -> np.ndarray:
    h_i = np.atleast_2d(h_i)
    if h_i.shape[1] > n_bins:
        raise ValueError(f"n_bins ({n_bins}) must be >= tap count ({h_i.shape[1]})")
    H = np.fft.fft(h_i, n=n_bins, axis=1)
    if mode == "sum":
        return n_t * (H.real ** 2 + H.imag ** 2) + n_r
    if mode == "literal":
        a = math.sqrt(n_t) * H + math.sqrt(n_r)
        return a.real ** 2 + a.imag ** 2
    raise ValueError(f"unknown psd mode {mode!r}; expected one of {PSD_MODES}")


def noise_psd(h_i, n_t: float, n_r: float, n_bins: int = 128, mode: str = "sum") -> NoisePsd:
    """Residual noise spectrum on ``n_bins`` uniform frequencies.

    ``mode="sum"`` adds transmitter and receiver noise in power,
    ``N_T |H_I(f)|^2 + N_R``. ``mode="literal"`` adds them in amplitude,
    ``|sqrt(N_T) H_I(f) + sqrt(N_R)|^2``.
    """
    h = np.asarray(h_i, dtype=complex).ravel()
    return NoisePsd(_psd_rows(h, n_t, n_r, n_bins, mode)[0], mode)


# -- water-filling ------------------------------------------------------------

def _waterfill_rows(S: np.ndarray, power: np.ndarray):
    """Exact water level per row of ``S`` for mean-allocation budgets ``power``.

    Sorting the bins, the active set is the ``k`` cheapest bins for the
    largest ``k`` whose level ``(n*P + sum of k cheapest)/k`` lies above the
    k-th cheapest noise value.
    """
    S = np.atleast_2d(S)
    m, n = S.shape
    power = np.broadcast_to(np.asarray(power, dtype=float), (m,))
    s = np.sort(S, axis=1)
    k = np.arange(1, n + 1)
    levels = (n * power[:, None] + np.cumsum(s, axis=1)) / k
    n_active = np.sum(levels > s, axis=1)
    nu = np.where(n_active > 0,
                  levels[np.arange(m), np.maximum(n_active - 1, 0)],
                  s[:, 0])
    alloc = np.maximum(nu[:, None] - S, 0.0)
    cap = np.mean(np.log2(1.0 + alloc / S), axis=1)
    return nu, alloc, cap


def waterfill(psd, power: float) -> WaterfillResult:
    """Water-fill ``power`` (mean over bins) against the noise spectrum ``psd``.

    Returns the water level ``nu``, the per-bin allocation ``(nu - S)^+`` and
    the capacity ``mean(log2(1 + allocation / S))`` in bits/s/Hz.
    """
    if power < 0:
        raise NegativePower(f"power must be >= 0, got {power}")
    S = np.asarray(psd.values if isinstance(psd, NoisePsd) else psd, dtype=float).ravel()
    if S.size == 0 or np.any(~(S > 0)):
        raise ValueError("noise spectrum must be positive")
    nu, alloc, cap = _waterfill_rows(S[None, :], power)
    return WaterfillResult(float(nu[0]), alloc[0], float(cap[0]))


# -- per-draw quantities ----------------------------------------------------------

def fd_capacity_draw(draw: ChannelDraw, p_t: float, n_t: float, n_r: float,
                     n_bins: int = 128, mode: str = "sum") -> float:
    """Full-duplex capacity of a single fade."""
    S = _psd_rows(draw.h_i, n_t, n_r, n_bins, mode)
    return float(_waterfill_rows(S, abs(draw.h_s) ** 2 * p_t)[2][0])


def hd_capacity_draw(draw: ChannelDraw, p_t: float, n_r: float) -> float:
    return 0.5 * math.log2(1.0 + 2.0 * abs(draw.h_s) ** 2 * p_t / n_r)


def ideal_fd_capacity_draw(draw: ChannelDraw, p_t: float, n_r: float) -> float:
    return math.log2(1.0 + abs(draw.h_s) ** 2 * p_t / n_r)


def _tap_power(h):
    return h.real ** 2 + h.imag ** 2


def _block_values(metric: str, params: LinkBudgetParams, start: int, stop: int, arg):
    h_i, h_s = draw_block(params.fading, start, stop, params.master_seed)
    g_s = _tap_power(h_s)
    if metric == "fd":
        S = _psd_rows(h_i, params.n_t, params.n_r, params.n_bins, params.psd_mode)
        return _waterfill_rows(S, g_s * params.p_t)[2]
    if metric == "hd":
        return 0.5 * np.log2(1.0 + 2.0 * g_s * params.p_t / params.n_r)
    if metric == "ideal":
        return np.log2(1.0 + g_s * params.p_t / params.n_r)
    tap = _tap_power(h_i)
    total = np.sum(tap, axis=1)
    if metric == "passive":
        if np.any(total == 0):
            raise DegenerateChannel("a draw has zero self-interference gain")
        return 1.0 / total
    if metric == "active":
        if np.any(total == 0):
            raise DegenerateChannel("a draw has zero self-interference gain")
        # ratio rewritten with the uncancelled fraction; identical to the
        # textbook form and exactly 1 at n_tap == 0
        frac = np.sum(tap[:, arg:], axis=1) / total
        return (params.p_t + params.n_t) / (frac * params.p_t + params.n_t)
    raise ValueError(f"unknown metric {metric!r}")


def _block_task(job):
    return _block_values(*job)


def per_draw_values(metric: str, params: LinkBudgetParams, arg=None, *,
                    workers: int = 1, executor: Executor | None = None) -> np.ndarray:
    """Per-draw samples of ``metric`` for draws ``0..n_draws-1``, in index order.

    ``metric`` is one of ``fd``, ``hd``, ``ideal``, ``passive`` (1/|h_I|^2)
    or ``active`` (cancellation ratio, ``arg`` = canceler taps).
    """
    jobs = [(metric, params, a, min(a + BLOCK_SIZE, params.n_draws), arg)
            for a in range(0, params.n_draws, BLOCK_SIZE)]
    if executor is None and workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_block_task, jobs))
    elif executor is not None:
        parts = list(executor.map(_block_task, jobs))
    else:
        parts = [_block_task(j) for j in jobs]
    return np.concatenate(parts)


def _pool(workers: int):
    return ProcessPoolExecutor(max_workers=workers) if workers > 1 else nullcontext(None)


# -- Monte Carlo estimators -----------------------------------------------------

def fd_uplink_capacity(params: LinkBudgetParams, **kw) -> CapacityEstimate:
    return CapacityEstimate.from_samples(per_draw_values("fd", params, **kw))


def hd_uplink_capacity(params: LinkBudgetParams, **kw) -> CapacityEstimate:
    """Half-duplex: half the time at twice the power."""
    return CapacityEstimate.from_samples(per_draw_values("hd", params, **kw))


def ideal_fd_capacity(params: LinkBudgetParams, **kw) -> CapacityEstimate:
    return CapacityEstimate.from_samples(per_draw_values("ideal", params, **kw))


def passive_suppression_mc(params: LinkBudgetParams, **kw) -> float:
    """Average passive suppression ``E[1/sum|h_I|^2]`` in dB."""
    return float(lin_to_db(np.mean(per_draw_values("passive", params, **kw))))


def active_cancellation_mc(params: LinkBudgetParams, n_tap: int, **kw) -> float:
    """Average cancellation (dB) of an ``n_tap``-tap canceler.

    The residual is the uncancelled tail of the known signal plus transmitter
    noise through the whole channel.
    """
    if not 0 <= n_tap <= params.fading.t_r:
        raise ValueError(f"n_tap must be in [0, {params.fading.t_r}]")
    return float(lin_to_db(np.mean(per_draw_values("active", params, int(n_tap), **kw))))


def _pr_label(p_r_db: float) -> str:
    return f"PR{p_r_db:g}"


def capacity_sweep(params: LinkBudgetParams, p_d_grid_db, p_r_list_db, *,
                   workers: int = 1, with_std_error: bool = False) -> SweepTable:
    """FD capacity versus direct-path strength for each reflected level, plus HD and ideal FD.

    Every grid point reuses the same draw indices, so curves are smooth in P_D.
    """
    p_d = np.asarray(p_d_grid_db, dtype=float).ravel()
    cols = [("P_D_dB", p_d)]
    with _pool(workers) as ex:
        for p_r_db in p_r_list_db:
            est = [fd_uplink_capacity(params.with_fading(p_direct=float(db_to_lin(d)),
                                                         p_reflected=float(db_to_lin(p_r_db))),
                                      executor=ex)
                   for d in p_d]
            cols.append((f"FD_{_pr_label(p_r_db)}", [e.mean_bits_per_s_per_hz for e in est]))
            if with_std_error:
                cols.append((f"FD_{_pr_label(p_r_db)}_se", [e.std_error for e in est]))
        hd = hd_uplink_capacity(params, executor=ex)
        ideal = ideal_fd_capacity(params, executor=ex)
    cols.append(("HD", np.full(p_d.size, hd.mean_bits_per_s_per_hz)))
    cols.append(("IdealFD", np.full(p_d.size, ideal.mean_bits_per_s_per_hz)))
    if with_std_error:
        cols.append(("HD_se", np.full(p_d.size, hd.std_error)))
        cols.append(("IdealFD_se", np.full(p_d.size, ideal.std_error)))
    return SweepTable(tuple(cols))


def cancel_sweep(params: LinkBudgetParams, p_d_grid_db, n_tap_list, *,
                 workers: int = 1) -> SweepTable:
    """Passive suppression and finite-tap active cancellation versus P_D (dB columns)."""
    p_d = np.asarray(p_d_grid_db, dtype=float).ravel()
    passive = np.empty(p_d.size)
    active = {int(n): np.empty(p_d.size) for n in n_tap_list}
    with _pool(workers) as ex:
        for i, d in enumerate(p_d):
            p = params.with_fading(p_direct=float(db_to_lin(d)))
            passive[i] = passive_suppression_mc(p, executor=ex)
            for n, col in active.items():
                col[i] = active_cancellation_mc(p, n, executor=ex)
    cols = [("P_D_dB", p_d), ("alpha_P_dB", passive)]
    cols += [(f"alpha_A_N{n}", col) for n, col in active.items()]
    return SweepTable(tuple(cols))
