"""Reading measured channel data and writing plot tables.

Two input formats are understood:

* a Touchstone v1 two-port (``.s2p``) subset, from which only S21 (the
  transmit-to-receive coupling) is kept;
* a three-column CSV, ``freq_hz,real,imag``.

Output tables are whitespace-separated ``.dat`` files with a single header
row, the layout pgfplots and gnuplot read directly.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BadHeader,
    MalformedRow,
    MissingOptionLine,
    NonUniformGrid,
    UnsupportedParameter,
)

#: Maximum relative deviation of any frequency step from the mean step.
GRID_RTOL = 1e-6

_FREQ_SCALE = {"HZ": 1.0, "KHZ": 1e3, "MHZ": 1e6, "GHZ": 1e9}


@dataclass(frozen=True, eq=False)
class FrequencyResponse:
    """Complex channel samples on a uniform frequency grid."""

    freqs_hz: np.ndarray
    values: np.ndarray
    meta: str = ""

    def __post_init__(self):
        f = np.asarray(self.freqs_hz, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        if f.ndim != 1 or v.shape != f.shape:
            raise MalformedRow(
                f"frequency/value length mismatch: {f.shape} vs {v.shape}")
        if f.size < 2:
            raise MalformedRow(f"need at least 2 frequency points, got {f.size}")
        if not (np.all(np.isfinite(f)) and np.all(np.isfinite(v))):
            raise MalformedRow("non-finite frequency or channel value")
        check_uniform_grid(f)
        f.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "freqs_hz", f)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.freqs_hz.size

    @property
    def df_hz(self) -> float:
        """Mean frequency step."""
        return float((self.freqs_hz[-1] - self.freqs_hz[0]) / (self.freqs_hz.size - 1))

    @property
    def f_min(self) -> float:
        return float(self.freqs_hz[0])

    @property
    def f_max(self) -> float:
        return float(self.freqs_hz[-1])


def check_uniform_grid(freqs_hz, rtol: float = GRID_RTOL) -> None:
    """Raise :class:`NonUniformGrid` unless ``freqs_hz`` is increasing and evenly spaced."""
    steps = np.diff(np.asarray(freqs_hz, dtype=float))
    if np.any(steps <= 0):
        raise NonUniformGrid("frequencies are not strictly increasing")
    mean = steps.mean()
    dev = np.max(np.abs(steps - mean)) / mean
    if dev > rtol:
        raise NonUniformGrid(
            f"frequency spacing deviates by {dev:.3g} (relative) from uniform; limit {rtol:g}")


@dataclass(frozen=True, eq=False)
class SweepTable:
    """Ordered named columns of equal length."""

    columns: tuple = field(default_factory=tuple)

    def __post_init__(self):
        cols = []
        for name, data in self.columns:
            name = str(name)
            if not name or any(c.isspace() for c in name):
                raise ValueError(f"invalid column name {name!r}")
            cols.append((name, np.asarray(data, dtype=float).ravel()))
        names = [n for n, _ in cols]
        if not names:
            raise ValueError("a SweepTable needs at least one column")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate column names in {names}")
        if len({d.size for _, d in cols}) > 1:
            raise ValueError("columns differ in length")
        object.__setattr__(self, "columns", tuple(cols))

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.columns]

    @property
    def n_rows(self) -> int:
        return self.columns[0][1].size

    def __getitem__(self, name: str) -> np.ndarray:
        for n, d in self.columns:
            if n == name:
                return d
        raise KeyError(name)


def _to_complex(a: float, b: float, fmt: str) -> complex:
    if fmt == "RI":
        return complex(a, b)
    if fmt == "MA":
        mag = a
    else:  # DB
        mag = 10.0 ** (a / 20.0)
    ang = math.radians(b)
    return complex(mag * math.cos(ang), mag * math.sin(ang))


def _parse_option_line(line: str) -> tuple[float, str]:
    tokens = line[1:].upper().split()
    scale, fmt = 1e9, "MA"  # Touchstone v1 defaults
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok in _FREQ_SCALE:
            scale = _FREQ_SCALE[tok]
        elif tok in ("RI", "MA", "DB"):
            fmt = tok
        elif tok == "R":
            i += 1
            if i >= len(tokens):
                raise MalformedRow(f"option line is missing the reference impedance: {line!r}")
            try:
                float(tokens[i])
            except ValueError:
                raise MalformedRow(f"bad reference impedance in option line: {line!r}") from None
        elif tok == "S":
            pass
        elif tok in ("Y", "Z", "H", "G"):
            raise UnsupportedParameter(f"only S-parameters are supported, got {tok!r}")
        else:
            raise MalformedRow(f"unknown token {tok!r} in option line")
        i += 1
    return scale, fmt


def parse_touchstone(text: str, meta: str = "touchstone") -> FrequencyResponse:
    """Parse a two-port Touchstone v1 file and return its S21 column.

    S11, S12 and S22 are checked for being numeric and then dropped.
    """
    option = None
    freqs, s21 = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("!", 1)[0].strip()
        if not line:
            continue
        if line.startswith("#"):
            if option is not None:
                raise MalformedRow(f"line {lineno}: second option line")
            option = _parse_option_line(line)
            continue
        if option is None:
            raise MissingOptionLine(f"line {lineno}: data row before any '#' option line")
        fields = line.split()
        if len(fields) != 9:
            raise MalformedRow(f"line {lineno}: expected 9 fields, got {len(fields)}")
        try:
            nums = [float(x) for x in fields]
        except ValueError:
            raise MalformedRow(f"line {lineno}: non-numeric field in {line!r}") from None
        scale, fmt = option
        freqs.append(nums[0] * scale)
        # row-major pair order: S11, S21, S12, S22
        s21.append(_to_complex(nums[3], nums[4], fmt))
    if option is None:
        raise MissingOptionLine("no '#' option line found")
    if not freqs:
        raise MalformedRow("no data rows")
    return FrequencyResponse(np.array(freqs), np.array(s21), meta)


def parse_csv(text: str, meta: str = "csv") -> FrequencyResponse:
    """Parse ``freq_hz,real,imag`` CSV text."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or [h.strip().lower() for h in header] != ["freq_hz", "real", "imag"]:
        raise BadHeader(f"expected header 'freq_hz,real,imag', got {header!r}")
    freqs, vals = [], []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 3:
            raise MalformedRow(f"line {lineno}: expected 3 fields, got {len(row)}")
        try:
            f, re, im = (float(c) for c in row)
        except ValueError:
            raise MalformedRow(f"line {lineno}: non-numeric field in {row!r}") from None
        freqs.append(f)
        vals.append(complex(re, im))
    if not freqs:
        raise MalformedRow("CSV has no data rows")
    return FrequencyResponse(np.array(freqs), np.array(vals), meta)


def write_csv(resp: FrequencyResponse) -> str:
    """Serialize a response in the format read by :func:`parse_csv`."""
    lines = ["freq_hz,real,imag"]
    for f, v in zip(resp.freqs_hz, resp.values):
        lines.append(f"{float(f)!r},{float(v.real)!r},{float(v.imag)!r}")
    return "\n".join(lines) + "\n"


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def write_dat(table: SweepTable, comments: Iterable[str] = ()) -> str:
    """Render ``table`` as a whitespace-separated text table.

    Values are written with 12 significant digits. Optional ``comments`` are
    emitted as leading ``#`` lines; without them the first line is the header.
    """
    out = [f"# {c}" for c in comments]
    out.append(" ".join(table.names))
    data = [d for _, d in table.columns]
    for i in range(table.n_rows):
        out.append(" ".join(_fmt(d[i]) for d in data))
    return "\n".join(out) + "\n"


def parse_dat(text: str) -> SweepTable:
    """Inverse of :func:`write_dat` (``#`` lines are skipped)."""
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise MalformedRow("empty table")
    names = lines[0].split()
    rows: list[Sequence[float]] = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != len(names):
            raise MalformedRow(f"row {ln!r} has {len(parts)} fields, header has {len(names)}")
        rows.append([float(p) for p in parts])
    arr = np.array(rows, dtype=float).reshape(len(rows), len(names))
    return SweepTable(tuple((n, arr[:, j]) for j, n in enumerate(names)))
