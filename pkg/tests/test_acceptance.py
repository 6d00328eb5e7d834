"""Acceptance criteria, one test per criterion, each with its own time budget.

A PASS/FAIL line per criterion is printed in the pytest terminal summary.
"""

import math
import time
from contextlib import contextmanager

import numpy as np
import pytest
from scipy.special import exp1

from duplexctl import (
    ChannelDraw,
    FrequencyResponse,
    PacketLog,
    active_cancellation_mc,
    avg_passive_suppression,
    delay_stats,
    drr_sweep,
    evm_to_snr,
    fd_capacity_draw,
    fd_rate,
    fd_uplink_capacity,
    hd_capacity_draw,
    hd_rate,
    hd_uplink_capacity,
    ideal_fd_capacity,
    default_link_budget,
    passive_suppression_mc,
    percent_improvement,
    required_taps,
    to_pdp,
    two_level_pdp,
    TwoLevelPdp,
    waterfill,
)
from duplexctl.cli import main

from conftest import ACCEPTANCE_LINES
from oracles import dft_forward, grid_best_capacity, moments_exact


@contextmanager
def criterion(label, budget_s):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        within = elapsed < budget_s
        status = "PASS" if ok and within else "FAIL"
        note = "" if within else f" (over budget {budget_s:g} s)"
        ACCEPTANCE_LINES.append(f"{status}  {label}  [{elapsed:.2f} s]{note}")
        print(f"{status}  {label}  [{elapsed:.2f} s]")
    assert within, f"{label}: {elapsed:.2f} s exceeds {budget_s} s"


def test_c01_waterfilling_oracle():
    with criterion("C1 water-filling oracle", 1.0):
        assert abs(waterfill([1.0, 3.0], 2.0).capacity - 1.20752) <= 1e-9 + 5e-6  # printed to 5 decimals
        assert abs(waterfill([1.0, 3.0], 2.0).capacity
                   - (0.5 * math.log2(4) + 0.5 * math.log2(4 / 3))) <= 1e-9
        assert abs(waterfill([1.0, 10.0], 1.0).capacity - 0.5 * math.log2(3)) <= 1e-9
        assert abs(waterfill([1.0, 10.0], 1.0).capacity - 0.79248) <= 1e-9 + 5e-6
        rng = np.random.default_rng(2024)
        for _ in range(100):
            n = int(rng.integers(1, 5))
            noise = list(rng.integers(1, 33, n) / 8.0)
            power = float(rng.integers(1, 33) / 8.0)
            assert grid_best_capacity(noise, power) <= waterfill(noise, power).capacity + 1e-6


def test_c02_flat_noise_reductions():
    with criterion("C2 flat-noise reductions", 1.0):
        rng = np.random.default_rng(7)
        p_t, n_t, n_r = 1.0, 1e-3, 1e-9
        for _ in range(100):
            g = 10 ** rng.uniform(-6, -1) * np.exp(2j * np.pi * rng.random())
            hs = 10 ** rng.uniform(-5, -1)
            d = ChannelDraw([g], hs)
            expected = math.log2(1 + hs ** 2 * p_t / (n_t * abs(g) ** 2 + n_r))
            assert abs(fd_capacity_draw(d, p_t, n_t, n_r) - expected) <= 1e-9
        d = ChannelDraw(np.zeros(32), 1e-3)
        snr = 1e-6 * p_t / n_r
        assert abs(hd_capacity_draw(d, p_t, n_r) - 0.5 * math.log2(1 + 2 * snr)) <= 1e-9


def test_c03_delay_spread_oracle():
    with criterion("C3a delay-spread oracle (sigma values, T_R=2 peak)", 5.0):
        pdp = two_level_pdp(TwoLevelPdp(10 ** 2.5, 10 ** 0.5, 20, 1.0))
        sigma = delay_stats(pdp).rms_delay_spread_s
        assert abs(sigma - moments_exact(pdp.powers)[1]) <= 1e-12
        assert abs(sigma - 4.27) <= 0.01
        s_low = drr_sweep([20], [-60.0])["sigma_tau_T20"][0]
        assert abs(s_low - 5.477) <= 0.005
        grid = np.arange(-60.0, 61.0, 1.0)
        assert grid[np.argmax(drr_sweep([2], grid)["sigma_tau_T2"])] == 0.0


def test_c03_argmax_at_total_reflected_power():
    """Peak of sigma_tau within one 1 dB step of 10*log10(T_R - 1)."""
    with criterion("C3b sigma_tau argmax within 1 dB of 10log10(T_R-1), T_R in {5,10,20,40}", 5.0):
        grid = np.arange(-60.0, 61.0, 1.0)
        misses = []
        for t_r in (5, 10, 20, 40):
            sig = drr_sweep([t_r], grid)[f"sigma_tau_T{t_r}"]
            target = 10 * math.log10(t_r - 1)
            if abs(grid[np.argmax(sig)] - target) > 1.0:
                misses.append((t_r, float(grid[np.argmax(sig)]), round(target, 2)))
        assert not misses, f"argmax (T_R, found dB, expected dB): {misses}"


def test_c04_parseval_round_trip():
    with criterion("C4 Parseval / forward-inverse round trip", 10.0):
        rng = np.random.default_rng(4)
        for _ in range(1000):
            n = int(rng.integers(2, 2048))
            H = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) * 10 ** rng.uniform(-6, 0)
            resp = FrequencyResponse(2.4e9 + 1e5 * np.arange(n), H)
            ratio, _ = avg_passive_suppression(resp)
            assert abs(ratio * to_pdp(resp).powers.sum() - 1) <= 1e-9
        for _ in range(20):
            n = int(rng.integers(16, 256))
            a, b = rng.uniform(0.1, 1, 2)
            d = int(rng.integers(1, n))
            resp = FrequencyResponse(np.arange(n) * 1e6 + 1e9, dft_forward([a] + [0] * (d - 1) + [b], n))
            expected = np.zeros(n)
            expected[0], expected[d] = a * a, b * b
            assert np.max(np.abs(to_pdp(resp).powers - expected)) <= 1e-12


def test_c05_capacity_trend():
    with criterion("C5 FD capacity vs P_D (reference operating points, saturation)", 300.0):
        fd45 = fd_uplink_capacity(default_link_budget(-45, -80, n_draws=10_000))
        fd74 = fd_uplink_capacity(default_link_budget(-74, -80, n_draws=10_000))
        print(f"   FD(-45 dB) = {fd45.mean_bits_per_s_per_hz:.3f}, FD(-74 dB) = {fd74.mean_bits_per_s_per_hz:.3f}")
        assert abs(fd45.mean_bits_per_s_per_hz - 4.7) <= 0.15 * 4.7
        assert abs(fd74.mean_bits_per_s_per_hz - 7.9) <= 0.15 * 7.9
        for p_r in (-40, -60, -80):
            grid = np.arange(p_r - 10, -100 - 1, -5)
            est = [fd_uplink_capacity(default_link_budget(float(d), p_r, n_draws=10_000)) for d in grid]
            for a, b in zip(est, est[1:]):
                se = max(a.std_error, b.std_error)
                assert abs(b.mean_bits_per_s_per_hz - a.mean_bits_per_s_per_hz) < 2 * se


def test_c06_hd_ideal_baselines():
    with criterion("C6 HD / ideal-FD vs exponential-integral oracle", 30.0):
        p = default_link_budget(-60, -60, n_draws=100_000)
        p_s, p_t, n_r = p.fading.p_signal, p.p_t, p.n_r
        a = 2 * p_s * p_t / n_r
        hd_oracle = math.exp(1 / a) * exp1(1 / a) / (2 * math.log(2))
        a = p_s * p_t / n_r
        ideal_oracle = math.exp(1 / a) * exp1(1 / a) / math.log(2)
        hd, ideal = hd_uplink_capacity(p), ideal_fd_capacity(p)
        print(f"   HD {hd.mean_bits_per_s_per_hz:.4f} vs {hd_oracle:.4f}; "
              f"ideal {ideal.mean_bits_per_s_per_hz:.4f} vs {ideal_oracle:.4f}")
        assert abs(hd.mean_bits_per_s_per_hz - hd_oracle) <= 3 * hd.std_error
        assert abs(ideal.mean_bits_per_s_per_hz - ideal_oracle) <= 3 * ideal.std_error


def test_c07_cancellation_metrics():
    with criterion("C7 passive suppression / active cancellation", 120.0):
        full = 10 * math.log10((1.0 + 1e-3) / 1e-3)
        p = default_link_budget(-40, -60, n_draws=10_000)
        assert active_cancellation_mc(p, 0) == 0.0
        single = default_link_budget(-40, float("-inf"), t_r=1, n_draws=100)
        assert abs(active_cancellation_mc(single, 1) - full) <= 1e-6
        assert abs(full - 30.004) < 5e-4
        sat = passive_suppression_mc(default_link_budget(float("-inf"), -60, n_draws=10_000))
        closed = 10 * math.log10(1 / (31 * 1e-6))
        print(f"   alpha_P saturation {sat:.3f} dB (closed form {closed:.3f} dB)")
        assert abs(sat - 45.2) <= 0.3
        assert abs(sat - closed) <= 0.3
        grid = np.arange(-20.0, -101.0, -5.0)
        a32 = [active_cancellation_mc(default_link_budget(d, -60, n_draws=10_000), 32) for d in grid]
        a1 = [active_cancellation_mc(default_link_budget(d, -60, n_draws=10_000), 1) for d in grid]
        assert max(abs(x - full) for x in a32) <= 1.0
        print(f"   alpha_A(N=1): {a1[0]:.2f} dB at -20 dB -> {a1[-1]:.2f} dB at -100 dB")
        assert a1[0] - a1[-1] > 10.0


def test_c08_required_taps():
    with criterion("C8 required canceler taps", 1.0):
        assert required_taps(0.7e6, 20e6) == 29
        for bc in (20e6, 25e6, 1e9, math.inf):
            assert required_taps(bc, 20e6) == 1


def test_c09_rate_arithmetic():
    with criterion("C9 rate arithmetic", 1.0):
        assert abs(evm_to_snr(0.0316227766) - 1000.0) <= 1e-6 * 1000
        assert abs(fd_rate(PacketLog([0.1])) - math.log2(101)) <= 1e-9
        assert abs(fd_rate(PacketLog([0.1, 0.2])) - 0.5 * (math.log2(101) + math.log2(26))) <= 1e-9
        assert abs(fd_rate(PacketLog([1, 1, 1])) - 1.0) <= 1e-9
        assert abs(hd_rate(PacketLog([0.1])) - 0.5 * math.log2(101)) <= 1e-9
        assert abs(hd_rate(PacketLog([1.0])) - 0.5) <= 1e-9
        assert abs(percent_improvement(5.58, 3.0) - 86.0) <= 1e-9
        for h in np.random.default_rng(9).uniform(1e-3, 1e3, 1000):
            assert percent_improvement(2 * h, h) == 100.0


@pytest.mark.parametrize("cmd,extra", [
    ("capacity-sweep", []),
    ("cancel-sweep", []),
])
def test_c10_determinism(cmd, extra, tmp_path):
    with criterion(f"C10 byte-identical {cmd} output (workers 1, 1, 8)", 120.0):
        outputs = []
        for i, workers in enumerate((1, 1, 8)):
            out = tmp_path / f"{i}.dat"
            code = main([cmd, "--draws", "2000", "--seed", "17", "--workers", str(workers),
                         "--out", str(out), *extra])
            assert code == 0
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1] == outputs[2]
