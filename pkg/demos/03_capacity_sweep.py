"""Ergodic uplink capacity versus direct-path strength.

Each draw gives a fading self-interference channel. Its spectrum colours the
receiver noise and the uplink power is water-filled across frequency bins.
Half-duplex and interference-free full-duplex are shown for reference.
"""
import numpy as np

from duplexctl import capacity_sweep, default_link_budget, waterfill

# the water-filling step on its own
res = waterfill([1.0, 3.0], 2.0)
print(f"two-bin example: level {res.nu:.3f}, allocation {res.allocation}, "
      f"capacity {res.capacity:.5f} b/s/Hz")

params = default_link_budget(n_draws=2000, master_seed=3)
grid = np.arange(-100.0, -19.0, 10.0)
table = capacity_sweep(params, grid, [-40.0, -60.0, -80.0], with_std_error=True)

names = [n for n in table.names if not n.endswith("_se")]
print("".join(f"{n:>11s}" for n in names))
for i in range(table.n_rows):
    print("".join(f"{table[n][i]:11.3f}" for n in names))

# saturation: once P_D is well below P_R the reflected taps set the floor
print("FD_PR-40 spread below -50 dB:",
      f"{np.ptp(table['FD_PR-40'][grid <= -50]):.3f} b/s/Hz")
