"""Full-duplex self-interference channel analysis.

Metrics from measured frequency responses (passive suppression, power delay
profile, delay spread, coherence bandwidth, canceler taps), the two-level
reflection model and its fading counterpart, water-filling capacity of the
full-duplex uplink, and rate estimates from EVM logs.
"""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .ingest import (FrequencyResponse, SweepTable, check_uniform_grid, parse_csv,
                     parse_dat, parse_touchstone, write_csv, write_dat)
from .metrics import (DelayStats, PowerDelayProfile, SuppressionReport, analyze,
                      avg_passive_suppression, delay_stats, denoise_pdp,
                      direct_path_suppression, required_taps, to_pdp)
from .pdp_model import (ChannelDraw, FadingModel, TwoLevelPdp, channel_total_gain,
                        draw_block, draw_channel, drr_sweep, two_level_pdp)
from .capacity import (CapacityEstimate, LinkBudgetParams, NoisePsd, WaterfillResult,
                       active_cancellation_mc, cancel_sweep, capacity_sweep,
                       fd_capacity_draw, fd_uplink_capacity, hd_capacity_draw,
                       hd_uplink_capacity, ideal_fd_capacity, ideal_fd_capacity_draw,
                       noise_psd, default_link_budget, passive_suppression_mc,
                       per_draw_values, waterfill)
from .rates import (PacketLog, evm_to_snr, fd_rate, hd_rate, parse_evm_csv,
                    percent_improvement)
