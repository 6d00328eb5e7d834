"""Passive suppression, PDP and required canceler taps from a frequency sweep.

A synthetic self-interference response is built from a handful of delayed
reflections, written out as a Touchstone file, read back, and analysed.
"""
import numpy as np

from duplexctl import analyze, denoise_pdp, parse_touchstone, to_pdp

rng = np.random.default_rng(1)

# 80 MHz sweep around 2.44 GHz with 401 points
n = 401
freqs = np.linspace(2.40e9, 2.48e9, n)
df = freqs[1] - freqs[0]

# direct path 40 dB down, then a few weaker echoes
delays_ns = np.array([0.0, 12.5, 37.5, 75.0, 150.0])
gains = np.array([1e-2, 2e-3, 1e-3, 5e-4, 2e-4]) * np.exp(2j * np.pi * rng.random(5))
H = (gains[None, :] * np.exp(-2j * np.pi * np.outer(freqs - freqs[0], delays_ns * 1e-9))).sum(axis=1)
H += 1e-6 * (rng.standard_normal(n) + 1j * rng.standard_normal(n))

rows = [f"{float(f) / 1e9!r} 0 0 {float(h.real)!r} {float(h.imag)!r} 0 0 0 0" for f, h in zip(freqs, H)]
text = "! synthetic sweep\n# GHz S RI R 50\n" + "\n".join(rows) + "\n"
resp = parse_touchstone(text)
print(f"{len(resp)} points, df = {resp.df_hz / 1e3:.1f} kHz")

pdp = to_pdp(resp)
print(f"delay step {pdp.delay_step_s * 1e9:.3f} ns")
strongest = np.argsort(pdp.powers)[::-1][:5]
for k in sorted(strongest):
    print(f"  tap {k:3d}  {pdp.delays_s[k] * 1e9:7.2f} ns  {10 * np.log10(pdp.powers[k]):7.2f} dB")

kept = denoise_pdp(pdp)
print(f"taps above the noise floor: {np.count_nonzero(kept.powers)}")

rep = analyze(resp, signal_bandwidth_hz=20e6)
print(f"average passive suppression {rep.avg_suppression_db:.2f} dB")
print(f"direct-path suppression     {rep.direct_path_suppression_db:.2f} dB")
print(f"rms delay spread            {rep.delay_stats.rms_delay_spread_s * 1e9:.2f} ns")
print(f"coherence bandwidth         {rep.delay_stats.coherence_bw_hz / 1e6:.2f} MHz")
print(f"required canceler taps      {rep.required_taps}")
