"""Passive suppression and multi-tap active cancellation.

A canceler with N taps removes the first N taps of the self-interference
channel. Short cancelers only help while the direct path dominates.
"""
import numpy as np

from duplexctl import active_cancellation_mc, cancel_sweep, default_link_budget, passive_suppression_mc, required_taps

params = default_link_budget(p_d_db=-40.0, n_draws=2000)
for n in (0, 1, 4, 16, 32):
    print(f"alpha_A with {n:2d} taps: {active_cancellation_mc(params, n):7.3f} dB")

# passive suppression when only reflections remain (P_D -> 0)
floor = passive_suppression_mc(default_link_budget(float("-inf"), -60.0, n_draws=5000))
print(f"passive suppression, reflections only: {floor:.2f} dB "
      f"(closed form {10 * np.log10(1 / (31 * 1e-6)):.2f} dB)")

table = cancel_sweep(default_link_budget(n_draws=1000), np.arange(-20.0, -101.0, -20.0), [1, 24, 32])
print("".join(f"{n:>13s}" for n in table.names))
for i in range(table.n_rows):
    print("".join(f"{table[n][i]:13.3f}" for n in table.names))

print("taps for B_C = 0.7 MHz at 20 MHz:", required_taps(0.7e6, 20e6))
