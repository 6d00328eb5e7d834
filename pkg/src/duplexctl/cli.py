"""``duplexctl`` command-line front end.

Subcommands::

    analyze        metrics of a measured response (.s2p or .csv)
    pdp            power delay profile table of a measured response
    model-sweep    RMS delay spread / coherence bandwidth of the two-level model vs DRR
    capacity-sweep FD / HD / ideal-FD ergodic capacity vs direct-path strength
    cancel-sweep   passive suppression and N-tap active cancellation vs direct-path strength
    rates          FD/HD achievable rates from EVM logs

Settings come from command-line flags, then ``--config`` (``key = value``
lines, ``#`` comments), then built-in defaults. Exit status is 0 on success,
1 for input or validation errors and 2 for anything unexpected.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .capacity import (
    LinkBudgetParams,
    cancel_sweep,
    capacity_sweep,
    db_to_lin,
)
from .errors import DuplexError
from .ingest import FrequencyResponse, SweepTable, parse_csv, parse_touchstone, write_dat
from .metrics import analyze, to_pdp
from .pdp_model import FadingModel, drr_sweep
from .rates import fd_rate, hd_rate, parse_evm_csv, percent_improvement

DEFAULTS = {
    "p_t_dbm": 0.0,
    "n_t_dbm": -30.0,
    "n_r_dbm": -90.0,
    "p_s_db": -60.0,
    "t_r": 32,
    "n_bins": 128,
    "draws": 10_000,
    "seed": 0,
    "workers": 1,
    "psd_mode": "sum",
    "bandwidth_hz": 20e6,
    "floor_margin_db": 6.0,
    "window_taps": 4,
    "p_d_grid": "-100:-20:5",
    "p_r_list": "-40,-50,-60,-70,-80",
    "p_r_db": -60.0,
    "n_tap_list": "1,24,32",
    "t_r_list": "5,10,20,40",
    "drr_grid": "-60:60:1",
    "delay_step_s": 1.0,
    "pdp_taps": None,
    "out": None,
}

_TYPES = {
    "p_t_dbm": float, "n_t_dbm": float, "n_r_dbm": float, "p_s_db": float,
    "t_r": int, "n_bins": int, "draws": int, "seed": int, "workers": int,
    "psd_mode": str, "bandwidth_hz": float, "floor_margin_db": float,
    "window_taps": int, "p_d_grid": str, "p_r_list": str, "p_r_db": float,
    "n_tap_list": str, "t_r_list": str, "drr_grid": str, "delay_step_s": float,
    "pdp_taps": int, "out": str,
}

POWER_FLOOR_DB = -300.0


class UsageError(DuplexError):
    pass


def parse_grid(text: str) -> np.ndarray:
    """``start:stop:step`` (stop included when on the lattice) or a comma list."""
    text = str(text).strip()
    if ":" in text:
        try:
            start, stop, step = (float(p) for p in text.split(":"))
        except ValueError:
            raise UsageError(f"bad grid {text!r}; expected start:stop:step") from None
        if step == 0:
            raise UsageError(f"grid step must be non-zero in {text!r}")
        n = math.floor((stop - start) / step + 1e-9)
        if n < 0:
            raise UsageError(f"grid {text!r} is empty")
        return start + step * np.arange(n + 1)
    try:
        vals = np.array([float(p) for p in text.split(",") if p.strip()])
    except ValueError:
        raise UsageError(f"bad list {text!r}") from None
    if vals.size == 0:
        raise UsageError("empty list")
    return vals


def parse_int_list(text: str) -> list[int]:
    vals = parse_grid(text)
    if np.any(vals != np.round(vals)):
        raise UsageError(f"expected integers in {text!r}")
    return [int(v) for v in vals]


def read_config(path: str) -> dict:
    cfg = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _TYPES:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        cfg[key] = val
    return cfg


def resolve(args: argparse.Namespace) -> dict:
    """Merge flags over config-file entries over defaults, converting types."""
    merged = dict(DEFAULTS)
    if args.config:
        merged.update(read_config(args.config))
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    out = {}
    for key, val in merged.items():
        if val is None:
            out[key] = None
            continue
        try:
            out[key] = _TYPES[key](val)
        except ValueError:
            raise UsageError(f"bad value for {key}: {val!r}") from None
    if out["psd_mode"] not in ("sum", "literal"):
        raise UsageError(f"psd_mode must be 'sum' or 'literal', got {out['psd_mode']!r}")
    return out


def link_params(cfg: dict, p_d_db: float = -60.0, p_r_db: float = -60.0) -> LinkBudgetParams:
    fading = FadingModel(float(db_to_lin(p_d_db)), float(db_to_lin(p_r_db)),
                         cfg["t_r"], float(db_to_lin(cfg["p_s_db"])))
    return LinkBudgetParams(
        p_t=float(db_to_lin(cfg["p_t_dbm"])), n_t=float(db_to_lin(cfg["n_t_dbm"])),
        n_r=float(db_to_lin(cfg["n_r_dbm"])), fading=fading, n_bins=cfg["n_bins"],
        n_draws=cfg["draws"], master_seed=cfg["seed"], psd_mode=cfg["psd_mode"])


def load_response(path: str) -> FrequencyResponse:
    text = Path(path).read_text()
    if path.lower().endswith(".s2p"):
        return parse_touchstone(text, meta=path)
    return parse_csv(text, meta=path)


def emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _mc_comments(cfg: dict) -> list[str]:
    return [f"seed = {cfg['seed']}", f"draws = {cfg['draws']}", f"psd_mode = {cfg['psd_mode']}",
            f"P_T = {cfg['p_t_dbm']:g} dBm, N_T = {cfg['n_t_dbm']:g} dBm, "
            f"N_R = {cfg['n_r_dbm']:g} dBm, P_S = {cfg['p_s_db']:g} dB, T_R = {cfg['t_r']}"]


# -- subcommands ------------------------------------------------------------------

def cmd_analyze(args, cfg):
    resp = load_response(args.input)
    rep = analyze(resp, cfg["bandwidth_hz"], cfg["floor_margin_db"], cfg["window_taps"])
    st = rep.delay_stats
    print(f"source                      {resp.meta}")
    print(f"points                      {len(resp)} ({resp.f_min / 1e9:.6g}-{resp.f_max / 1e9:.6g} GHz)")
    print(f"average passive suppression {rep.avg_suppression_db:.1f} dB")
    print(f"direct-path suppression     {rep.direct_path_suppression_db:.1f} dB")
    print(f"mean delay                  {st.mean_delay_s * 1e9:.4g} ns")
    print(f"rms delay spread            {st.rms_delay_spread_s * 1e9:.4g} ns")
    print(f"coherence bandwidth         {st.coherence_bw_hz / 1e6:.4g} MHz")
    print(f"required canceler taps      {rep.required_taps} (B = {rep.signal_bandwidth_hz / 1e6:g} MHz)")
    if cfg["out"]:
        table = SweepTable((
            ("avg_suppression_dB", [rep.avg_suppression_db]),
            ("direct_path_suppression_dB", [rep.direct_path_suppression_db]),
            ("mean_delay_ns", [st.mean_delay_s * 1e9]),
            ("rms_delay_spread_ns", [st.rms_delay_spread_s * 1e9]),
            ("coherence_bw_MHz", [st.coherence_bw_hz / 1e6]),
            ("required_taps", [rep.required_taps]),
        ))
        emit(write_dat(table), cfg["out"])


def cmd_pdp(args, cfg):
    resp = load_response(args.input)
    pdp = to_pdp(resp, cfg["pdp_taps"])
    with np.errstate(divide="ignore"):
        power_db = np.maximum(10 * np.log10(pdp.powers), POWER_FLOOR_DB)
    table = SweepTable((("delay_ns", pdp.delays_s * 1e9), ("power_dB", power_db)))
    emit(write_dat(table, [f"source = {resp.meta}",
                           f"delay_step_ns = {pdp.delay_step_s * 1e9:.6g}",
                           f"floor_dB = {POWER_FLOOR_DB:g}"]), cfg["out"])


def cmd_model_sweep(args, cfg):
    table = drr_sweep(parse_int_list(cfg["t_r_list"]), parse_grid(cfg["drr_grid"]),
                      cfg["delay_step_s"])
    emit(write_dat(table, [f"delay_step_s = {cfg['delay_step_s']:g}"]), cfg["out"])


def cmd_capacity_sweep(args, cfg):
    table = capacity_sweep(link_params(cfg), parse_grid(cfg["p_d_grid"]),
                           parse_grid(cfg["p_r_list"]), workers=cfg["workers"])
    params = link_params(cfg)
    snr = params.fading.p_signal * params.p_t / params.n_r
    # fixed-gain references (|h_S|^2 = P_S) alongside the fading averages in the table
    fixed = [f"HD_fixed_gain = {0.5 * np.log2(1 + 2 * snr):.6f}",
             f"IdealFD_fixed_gain = {np.log2(1 + snr):.6f}"]
    emit(write_dat(table, _mc_comments(cfg) + fixed), cfg["out"])


def cmd_cancel_sweep(args, cfg):
    params = link_params(cfg, p_r_db=cfg["p_r_db"])
    table = cancel_sweep(params, parse_grid(cfg["p_d_grid"]), parse_int_list(cfg["n_tap_list"]),
                         workers=cfg["workers"])
    emit(write_dat(table, _mc_comments(cfg) + [f"P_R = {cfg['p_r_db']:g} dB"]), cfg["out"])


def cmd_rates(args, cfg):
    fd_log = parse_evm_csv(Path(args.fd_log).read_text(), args.fd_log)
    hd_log = parse_evm_csv(Path(args.hd_log).read_text(), args.hd_log)
    r_fd, r_hd = fd_rate(fd_log), hd_rate(hd_log)
    gain = percent_improvement(r_fd, r_hd)
    print(f"R_FD  {r_fd:.4f} b/s/Hz ({fd_log.evm.size} packets)")
    print(f"R_HD  {r_hd:.4f} b/s/Hz ({hd_log.evm.size} packets)")
    print(f"improvement {gain:.1f} %")
    if cfg["out"]:
        emit(write_dat(SweepTable((("R_FD", [r_fd]), ("R_HD", [r_hd]),
                                   ("improvement_pct", [gain])))), cfg["out"])


# -- argument parsing ----------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _common(p):
    p.add_argument("--config", help="key = value settings file")
    p.add_argument("--out", help="write the table here instead of stdout")


def _mc(p):
    p.add_argument("--seed", type=int)
    p.add_argument("--draws", type=int)
    p.add_argument("--workers", type=int, help="parallel worker processes (results do not depend on it)")
    p.add_argument("--psd-mode", dest="psd_mode", choices=["sum", "literal"])
    p.add_argument("--p-t-dbm", dest="p_t_dbm", type=float)
    p.add_argument("--n-t-dbm", dest="n_t_dbm", type=float)
    p.add_argument("--n-r-dbm", dest="n_r_dbm", type=float)
    p.add_argument("--p-s-db", dest="p_s_db", type=float)
    p.add_argument("--t-r", dest="t_r", type=int)
    p.add_argument("--n-bins", dest="n_bins", type=int)
    p.add_argument("--p-d-grid", dest="p_d_grid", help="direct-path strengths, dB (start:stop:step)")


def _metric(p):
    p.add_argument("input", help=".s2p or .csv frequency response")
    p.add_argument("--bandwidth-hz", dest="bandwidth_hz", type=float)
    p.add_argument("--floor-margin-db", dest="floor_margin_db", type=float)
    p.add_argument("--window-taps", dest="window_taps", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="duplexctl", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="suppression, delay spread, coherence bandwidth, taps")
    _metric(p)
    _common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("pdp", help="power delay profile table (delay_ns, power_dB)")
    _metric(p)
    p.add_argument("--pdp-taps", dest="pdp_taps", type=int, help="keep only the first N taps")
    _common(p)
    p.set_defaults(func=cmd_pdp)

    p = sub.add_parser("model-sweep", help="two-level model: sigma_tau and B_C vs DRR")
    p.add_argument("--t-r-list", dest="t_r_list")
    p.add_argument("--drr-grid", dest="drr_grid")
    p.add_argument("--delay-step-s", dest="delay_step_s", type=float)
    _common(p)
    p.set_defaults(func=cmd_model_sweep)

    p = sub.add_parser("capacity-sweep", help="ergodic capacity vs direct-path strength")
    _mc(p)
    p.add_argument("--p-r-list", dest="p_r_list", help="reflected tap powers, dB")
    _common(p)
    p.set_defaults(func=cmd_capacity_sweep)

    p = sub.add_parser("cancel-sweep", help="passive suppression / active cancellation vs P_D")
    _mc(p)
    p.add_argument("--p-r-db", dest="p_r_db", type=float)
    p.add_argument("--n-taps", dest="n_tap_list", help="canceler tap counts, e.g. 1,24,32")
    _common(p)
    p.set_defaults(func=cmd_cancel_sweep)

    p = sub.add_parser("rates", help="FD/HD achievable rate from EVM logs")
    p.add_argument("fd_log")
    p.add_argument("hd_log")
    _common(p)
    p.set_defaults(func=cmd_rates)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        args.func(args, cfg)
    except (DuplexError, ValueError, OSError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
