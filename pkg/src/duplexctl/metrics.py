"""Self-interference channel metrics computed from a measured frequency response.

The power delay profile comes from an inverse DFT that carries the ``1/N``
factor, so mean ``|H(f)|**2`` over the band equals the summed tap power and the
average passive suppression is simply the reciprocal of that sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    AllZeroResponse,
    NonPositiveBandwidth,
    ZeroTotalPower,
    ZeroWindowPower,
)
from .ingest import FrequencyResponse

#: Coherence bandwidth (90 % correlation) ~= COHERENCE_FACTOR / rms delay spread.
COHERENCE_FACTOR = 0.02

DEFAULT_SIGNAL_BW_HZ = 20e6
DEFAULT_FLOOR_MARGIN_DB = 6.0
DEFAULT_WINDOW_TAPS = 4


@dataclass(frozen=True, eq=False)
class PowerDelayProfile:
    powers: np.ndarray
    delay_step_s: float

    def __post_init__(self):
        p = np.asarray(self.powers, dtype=float).ravel()
        if p.size == 0:
            raise ValueError("empty power delay profile")
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise ValueError("tap powers must be finite and non-negative")
        if not (self.delay_step_s > 0 and math.isfinite(self.delay_step_s)):
            raise ValueError(f"delay_step_s must be positive, got {self.delay_step_s}")
        p.setflags(write=False)
        object.__setattr__(self, "powers", p)
        object.__setattr__(self, "delay_step_s", float(self.delay_step_s))

    @property
    def delays_s(self) -> np.ndarray:
        return np.arange(self.powers.size) * self.delay_step_s

    def __len__(self):
        return self.powers.size


@dataclass(frozen=True)
class DelayStats:
    mean_delay_s: float
    rms_delay_spread_s: float
    coherence_bw_hz: float


@dataclass(frozen=True)
class SuppressionReport:
    avg_suppression_db: float
    direct_path_suppression_db: float
    delay_stats: DelayStats
    required_taps: int
    analysis_bandwidth_hz: float
    signal_bandwidth_hz: float


def avg_passive_suppression(resp: FrequencyResponse) -> tuple[float, float]:
    """Return ``(ratio, ratio_db)``: the inverse of the band-averaged ``|H|**2``."""
    mean_power = float(np.mean(np.abs(resp.values) ** 2))
    if mean_power == 0.0:
        raise AllZeroResponse("frequency response is identically zero")
    ratio = 1.0 / mean_power
    return ratio, 10.0 * math.log10(ratio)


def to_pdp(resp: FrequencyResponse, n_taps: int | None = None) -> PowerDelayProfile:
    """Power delay profile ``|ifft(H)|**2`` with delay step ``1/(N*df)``."""
    n = len(resp)
    if n_taps is None:
        n_taps = n
    if not 1 <= n_taps <= n:
        raise ValueError(f"n_taps must be in [1, {n}], got {n_taps}")
    h = np.fft.ifft(resp.values)
    powers = (h.real ** 2 + h.imag ** 2)[:n_taps]
    return PowerDelayProfile(powers, 1.0 / (n * resp.df_hz))


def noise_floor(pdp: PowerDelayProfile) -> float:
    """Median power of the last 10 % of taps (at least one tap)."""
    n_tail = max(1, pdp.powers.size // 10)
    return float(np.median(pdp.powers[-n_tail:]))


def denoise_pdp(pdp: PowerDelayProfile, floor_margin_db: float = DEFAULT_FLOOR_MARGIN_DB
                ) -> PowerDelayProfile:
    """Zero every tap weaker than the tail noise floor plus ``floor_margin_db``.

    The strongest tap (lowest index on ties) is always kept, so the result
    never has zero total power unless the input did.
    """
    if floor_margin_db < 0:
        raise ValueError("floor_margin_db must be >= 0")
    threshold = noise_floor(pdp) * 10.0 ** (floor_margin_db / 10.0)
    powers = pdp.powers.copy()
    keep = powers >= threshold
    keep[int(np.argmax(powers))] = True
    powers[~keep] = 0.0
    return PowerDelayProfile(powers, pdp.delay_step_s)


def coherence_bandwidth(rms_delay_spread_s: float) -> float:
    if rms_delay_spread_s == 0.0:
        return math.inf
    return COHERENCE_FACTOR / rms_delay_spread_s


def delay_stats(pdp: PowerDelayProfile) -> DelayStats:
    """Mean delay, RMS delay spread and approximate coherence bandwidth."""
    total = float(np.sum(pdp.powers))
    if total <= 0.0:
        raise ZeroTotalPower("power delay profile has zero total power")
    w = pdp.powers / total
    tau = pdp.delays_s
    mu = float(np.dot(tau, w))
    var = float(np.dot((tau - mu) ** 2, w))
    sigma = math.sqrt(max(var, 0.0))
    return DelayStats(mu, sigma, coherence_bandwidth(sigma))


def direct_path_suppression(pdp: PowerDelayProfile,
                            window_taps: int = DEFAULT_WINDOW_TAPS) -> float:
    """Suppression (dB) of the strongest tap among the first ``window_taps``."""
    if window_taps < 1:
        raise ValueError("window_taps must be >= 1")
    peak = float(np.max(pdp.powers[:window_taps]))
    if peak <= 0.0:
        raise ZeroWindowPower(f"no power in the first {window_taps} taps")
    return -10.0 * math.log10(peak)


def required_taps(coherence_bw_hz: float, signal_bandwidth_hz: float) -> int:
    """Canceler taps needed to span ``signal_bandwidth_hz``: ``ceil(B / B_C)``, at least 1."""
    if not signal_bandwidth_hz > 0 or not coherence_bw_hz > 0:
        raise NonPositiveBandwidth(
            f"bandwidths must be positive (B_C={coherence_bw_hz}, B={signal_bandwidth_hz})")
    if math.isinf(coherence_bw_hz):
        return 1
    ratio = signal_bandwidth_hz / coherence_bw_hz
    # absorb float noise so exact integer ratios do not round up
    return max(1, math.ceil(ratio * (1.0 - 1e-12)))


def analyze(resp: FrequencyResponse,
            signal_bandwidth_hz: float = DEFAULT_SIGNAL_BW_HZ,
            floor_margin_db: float = DEFAULT_FLOOR_MARGIN_DB,
            window_taps: int = DEFAULT_WINDOW_TAPS) -> SuppressionReport:
    _, avg_db = avg_passive_suppression(resp)
    pdp = to_pdp(resp)
    stats = delay_stats(denoise_pdp(pdp, floor_margin_db))
    return SuppressionReport(
        avg_suppression_db=avg_db,
        direct_path_suppression_db=direct_path_suppression(pdp, window_taps),
        delay_stats=stats,
        required_taps=required_taps(stats.coherence_bw_hz, signal_bandwidth_hz),
        analysis_bandwidth_hz=1.0 / pdp.delay_step_s,
        signal_bandwidth_hz=float(signal_bandwidth_hz),
    )
