"""Achievable rates from per-packet EVM logs.

Full duplex gets the whole airtime, half duplex gets half, so the FD rate
wins whenever residual self-interference costs less than a factor of two.
"""
import numpy as np

from duplexctl import PacketLog, evm_to_snr, fd_rate, hd_rate, parse_evm_csv, percent_improvement

rng = np.random.default_rng(5)
hd_evm = 10 ** (-rng.normal(30, 2, 500) / 20)    # about 30 dB SNR
fd_evm = 10 ** (-rng.normal(27, 3, 500) / 20)    # a few dB of residual SI

hd_log = parse_evm_csv("evm\n" + "\n".join(repr(float(e)) for e in hd_evm), "hd")
fd_log = PacketLog(fd_evm, "fd")

print(f"median SNR: HD {10 * np.log10(np.median(evm_to_snr(hd_log.evm))):.1f} dB, "
      f"FD {10 * np.log10(np.median(evm_to_snr(fd_log.evm))):.1f} dB")
r_fd, r_hd = fd_rate(fd_log), hd_rate(hd_log)
print(f"R_FD = {r_fd:.3f}, R_HD = {r_hd:.3f} b/s/Hz, improvement {percent_improvement(r_fd, r_hd):.1f}%")
