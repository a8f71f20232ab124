"""Command-line entry point: ``otasig simulate ...``."""

from __future__ import annotations

import argparse
import sys
import time

from .config import build_configs, load_config
from .output import OutputError, emit_csv, emit_plot
from .sim import ConfigError, SweepResult, run_sweep

# CLI flag -> config key
_FLAG_KEYS = {
    "scheme": "scheme",
    "signals": "num_signals",
    "snr_start": "snr_start",
    "snr_stop": "snr_stop",
    "snr_step": "snr_step",
    "trials": "trials_per_point",
    "seed": "master_seed",
    "codebook_size": "codebook_size",
    "profile": "channel.profile",
    "doppler": "channel.doppler_hz",
    "power_offset_db": "channel.power_offset_db",
    "workers": "workers",
    "batch_size": "batch_size",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="otasig", description="Over-the-air signaling simulator")
    sub = parser.add_subparsers(dest="command", required=True)
    sim = sub.add_parser("simulate", help="run a detection-error sweep")
    sim.add_argument("--scheme", choices=["sts", "walsh", "gold", "zc", "all"])
    sim.add_argument("--signals", type=int, help="simultaneous transmitters (1 or 2)")
    sim.add_argument("--snr-start", type=float)
    sim.add_argument("--snr-stop", type=float)
    sim.add_argument("--snr-step", type=float)
    sim.add_argument("--trials", type=int, help="trials per SNR point")
    sim.add_argument("--seed", type=int, help="master seed")
    sim.add_argument("--codebook-size", type=int, help="hypotheses per sequence family")
    sim.add_argument("--profile", choices=["epa", "flat"])
    sim.add_argument("--doppler", type=float, help="maximum Doppler shift in Hz")
    sim.add_argument("--power-offset-db", type=float, help="power of the second transmitter relative to the first")
    sim.add_argument("--workers", type=int, help="worker processes")
    sim.add_argument("--batch-size", type=int)
    sim.add_argument("--config", help="flat key = value config file")
    sim.add_argument("--out", default="results.csv", help="CSV output path")
    sim.add_argument("--plot", help="SVG plot output path")
    sim.add_argument("--quiet", action="store_true")
    return parser


def settings_from_args(args: argparse.Namespace) -> dict:
    """Config-file settings overridden by any flags given on the command line."""
    settings = load_config(args.config) if args.config else {}
    for flag, key in _FLAG_KEYS.items():
        value = getattr(args, flag)
        if value is not None:
            settings[key] = value
    if any(getattr(args, f) is not None for f in ("snr_start", "snr_stop", "snr_step")):
        # explicit range flags beat a list from the file
        settings.pop("snr_db_list", None)
    return settings


def simulate(args: argparse.Namespace) -> int:
    configs = build_configs(settings_from_args(args))
    result = SweepResult()
    for cfg in configs:
        t0 = time.perf_counter()
        part = run_sweep(cfg)
        if not args.quiet:
            errs = sum(p.errors for p in part.points)
            print(f"{cfg.scheme} L={cfg.num_signals}: {len(part)} points, {errs} errors, "
                  f"{time.perf_counter() - t0:.1f} s", file=sys.stderr)
        result = result.merge(part)
    emit_csv(result, args.out)
    if args.plot:
        emit_plot([result], args.plot)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return simulate(args)
    except ConfigError as e:
        print(f"otasig: configuration error: {e}", file=sys.stderr)
        return 2
    except OutputError as e:
        print(f"otasig: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
