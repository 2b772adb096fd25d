"""Command-line entry point: ``radarlte simulate|pathloss|pattern|timing``."""
from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

import numpy as np

from .antennas import SectorPatternParams, radar_gain_db, sector_composite_gain_db, sector_element_gain_db
from .config import ConfigError, load_config
from .itm import ITMDomainError
from .metrics import fmt
from .propagation import PropagationDomainError, PropagationParams, fspl_db, itm_loss_db, radar_path_loss_db
from .radar import footprint_width_km, scan_timing
from .runner import sweep_distances


def _grid(start: float, stop: float, step: float) -> np.ndarray:
    if step <= 0:
        raise ValueError("step must be > 0")
    if stop < start:
        raise ValueError("range end must not precede its start")
    n = int(np.floor((stop - start) / step + 1e-9))
    return start + step * np.arange(n + 1)


def _emit(header: str, rows, out) -> None:
    out.write(header + "\n")
    for a, b in rows:
        out.write(f"{fmt(a)},{fmt(b)}\n")


def cmd_simulate(args, out) -> int:
    cfg = load_config(args.config)
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.out is not None:
        changes["output_dir"] = Path(args.out)
    if changes:
        cfg = dataclasses.replace(cfg, **changes)
    summary, reports = sweep_distances(cfg, workers=args.workers)
    out.write(f"baseline mean_throughput_bps {fmt(summary.baseline_mean)}\n")
    out.write("distance_km,mean_throughput_bps,loss_fraction\n")
    for e in summary.per_distance:
        out.write(f"{fmt(e.distance_km)},{fmt(e.mean_throughput_bps)},{fmt(e.loss_fraction)}\n")
    out.write(f"outputs in {cfg.output_dir}\n")
    return 0


def cmd_pathloss(args, out) -> int:
    prop = PropagationParams(freq_mhz=args.freq_mhz)
    d = _grid(args.from_km, args.to_km, args.step_km)
    if args.model == "fspl":
        loss = [fspl_db(args.freq_mhz, x) for x in d]
    elif args.model == "itm":
        loss = [itm_loss_db(float(x), prop) for x in d]
    else:
        loss = [radar_path_loss_db(float(x), prop) for x in d]
    _emit("distance_km,loss_db", zip(d, loss), out)
    return 0


def cmd_pattern(args, out) -> int:
    p = SectorPatternParams()
    if args.which == "radar":
        ang = _grid(-180.0, 180.0, args.step_deg)
        gain = radar_gain_db(ang)
    elif args.which == "sector-az":
        ang = _grid(-180.0, 180.0, args.step_deg)
        gain = sector_element_gain_db(ang, p.az_tilt, p.theta_3db_az, p.a_m)
    elif args.which == "sector-el":
        ang = _grid(-90.0, 90.0, args.step_deg)
        gain = sector_element_gain_db(ang, p.el_tilt, p.theta_3db_el, p.a_m)
    else:
        # azimuth cut through the tilted elevation boresight
        ang = _grid(-180.0, 180.0, args.step_deg)
        gain = sector_composite_gain_db(ang, p.el_tilt, p)
    _emit("angle_deg,gain_db", zip(ang, np.atleast_1d(gain)), out)
    return 0


def cmd_timing(args, out) -> int:
    cfg = load_config(args.config, require=())
    r = cfg.radar
    t = scan_timing(r)
    rows = [
        ("rotation_rpm", r.rotation_rpm),
        ("scan_period_s", t.scan_period_s),
        ("az_beamwidth_deg", r.az_beamwidth_deg),
        ("beam_positions", t.n_beam_positions),
        ("dwell_time_ms", t.dwell_time_s * 1e3),
        ("pri_ms", r.pri_s * 1e3),
        ("prf_hz", 1.0 / r.pri_s),
        ("pulses_per_dwell", t.pulses_per_dwell),
        ("pulses_per_scan", t.pulses_per_scan),
        ("pulse_width_us", r.pulse_width_s * 1e6),
    ]
    for d in cfg.radar_distances_km:
        rows.append((f"footprint_km_at_{fmt(d)}km", footprint_width_km(d, r.az_beamwidth_deg)))
    width = max(len(k) for k, _ in rows)
    for k, v in rows:
        out.write(f"{k:<{width}}  {fmt(v)}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="radarlte", description="Pulsed radar interference into a TDD LTE uplink.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("simulate", help="baseline plus one run per configured radar distance")
    s.add_argument("--config", required=True)
    s.add_argument("--seed", type=int)
    s.add_argument("--out")
    s.add_argument("--workers", type=int, default=1, help="scenarios run in parallel processes")
    s.set_defaults(func=cmd_simulate)

    p = sub.add_parser("pathloss", help="CSV of radar-to-eNB path loss versus distance")
    p.add_argument("--model", choices=("fspl", "itm", "combined"), required=True)
    p.add_argument("--freq-mhz", type=float, default=3500.0)
    p.add_argument("--from-km", type=float, required=True)
    p.add_argument("--to-km", type=float, required=True)
    p.add_argument("--step-km", type=float, required=True)
    p.set_defaults(func=cmd_pathloss)

    g = sub.add_parser("pattern", help="CSV of a normalized antenna pattern cut")
    g.add_argument("--which", choices=("radar", "sector-az", "sector-el", "sector-composite"), required=True)
    g.add_argument("--step-deg", type=float, default=0.01)
    g.set_defaults(func=cmd_pattern)

    t = sub.add_parser("timing", help="radar scan-timing table")
    t.add_argument("--config", required=True)
    t.set_defaults(func=cmd_timing)
    return ap


def main(argv: list[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (ConfigError, ITMDomainError, PropagationDomainError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
