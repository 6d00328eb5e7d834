"""Achievable-rate estimates from per-packet EVM logs."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import BadHeader, MalformedRow, NonPositiveEvm


@dataclass(frozen=True, eq=False)
class PacketLog:
    evm: np.ndarray
    label: str = ""

    def __post_init__(self):
        e = np.asarray(self.evm, dtype=float).ravel()
        if e.size == 0:
            raise MalformedRow("packet log is empty")
        if not np.all(np.isfinite(e)) or np.any(e <= 0):
            raise NonPositiveEvm("EVM values must be finite and > 0")
        object.__setattr__(self, "evm", e)


def evm_to_snr(evm):
    """Effective SNR (linear) from average EVM: ``1 / EVM**2``."""
    e = np.asarray(evm, dtype=float)
    if np.any(~(e > 0)):
        raise NonPositiveEvm(f"EVM must be > 0, got {evm!r}")
    snr = 1.0 / e ** 2
    return float(snr) if snr.ndim == 0 else snr


def fd_rate(log: PacketLog) -> float:
    """Mean per-packet ``log2(1 + SSINR)``."""
    return float(np.mean(np.log2(1.0 + evm_to_snr(log.evm))))


def hd_rate(log: PacketLog) -> float:
    """Mean per-packet ``0.5 * log2(1 + SNR)`` (uplink gets half the airtime)."""
    return float(np.mean(0.5 * np.log2(1.0 + evm_to_snr(log.evm))))


def percent_improvement(fd: float, hd: float) -> float:
    if not hd > 0:
        raise ValueError(f"half-duplex rate must be > 0, got {hd}")
    return 100.0 * ((fd - hd) / hd)


def parse_evm_csv(text: str, label: str = "") -> PacketLog:
    """Read a one-column CSV with header ``evm``."""
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r and any(c.strip() for c in r)]
    if not rows or [c.strip().lower() for c in rows[0]] != ["evm"]:
        raise BadHeader(f"expected header 'evm', got {rows[0] if rows else None!r}")
    vals = []
    for i, r in enumerate(rows[1:], start=2):
        if len(r) != 1:
            raise MalformedRow(f"row {i}: expected one field, got {len(r)}")
        try:
            vals.append(float(r[0]))
        except ValueError:
            raise MalformedRow(f"row {i}: non-numeric EVM {r[0]!r}") from None
    if not vals:
        raise MalformedRow("EVM log has no rows")
    if any(not (v > 0 and math.isfinite(v)) for v in vals):
        raise NonPositiveEvm("EVM values must be finite and > 0")
    return PacketLog(np.array(vals), label)
