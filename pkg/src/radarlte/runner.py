"""Single-scenario runs and paired distance sweeps."""
from __future__ import annotations

import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .antennas import wrap_deg
from .config import ConfigError, SimulationConfig, derive_seed
from .metrics import (
    ScenarioReport,
    SweepEntry,
    SweepSummary,
    fmt,
    loss_fraction,
    sinr_grid_dump,
    throughput_cdf,
    write_cdf,
    write_per_ue,
    write_sweep_table,
)
from .network import N_SITES, SECTOR_AZIMUTHS_DEG, NetworkLayout, UserTerminal, build_layout, drop_users
from .uplink import UplinkSimulation

STREAM_LABELS = ("drop", "shadowing", "mobility", "scheduler")


def make_streams(seed: int, n_cells: int) -> dict[str, np.random.Generator]:
    """Independent generators for every named stream, including one decode stream per cell."""
    labels = list(STREAM_LABELS) + [f"decode:{c}" for c in range(n_cells)]
    return {lab: np.random.default_rng(derive_seed(seed, lab)) for lab in labels}


def build_network(cfg: SimulationConfig, streams: dict[str, np.random.Generator]) -> tuple[NetworkLayout, list[UserTerminal]]:
    lte = cfg.lte
    layout = build_layout(lte.isd_m, lte.sector, lte.n_rb, lte.enb_noise_figure_db, lte.enb_height_m)
    if lte.ues_per_cell == 0:
        return layout, []
    ues = drop_users(layout, lte.ues_per_cell, lte.indoor_fraction, streams["drop"], cfg.propagation,
                     lte.ue_speed_kmh, lte.ue_max_power_dbm, lte.shadowing, streams["shadowing"])
    # headings come from their own stream so mobility can be varied independently
    for u in ues:
        u.heading_deg = float(streams["mobility"].uniform(0.0, 360.0))
    return layout, ues


def designated_cell(layout: NetworkLayout, bearing_deg: float) -> int:
    """Centre-site sector whose azimuth is closest to the radar bearing."""
    centre = [c for c in layout.cells if c.site_id == 0]
    off = [abs(float(wrap_deg(c.azimuth_deg - bearing_deg))) for c in centre]
    return centre[int(np.argmin(off))].cell_id


def simulate(cfg: SimulationConfig, distance_km: float | None, n_tti: int | None = None) -> UplinkSimulation:
    """Run the TTI loop without touching the file system."""
    if distance_km is not None and not distance_km > 0:
        raise ConfigError("distance_km must be > 0")
    streams = make_streams(cfg.seed, N_SITES * len(SECTOR_AZIMUTHS_DEG))
    layout, ues = build_network(cfg, streams)
    cell = cfg.lte.sinr_cell if cfg.lte.sinr_cell is not None else designated_cell(layout, cfg.radar.bearing_deg)
    radar = cfg.radar if distance_km is not None else None
    sim = UplinkSimulation(layout, ues, cfg.lte, cfg.propagation, radar, distance_km, streams, cell)
    return sim.run(cfg.tti_count if n_tti is None else n_tti)


def scenario_label(distance_km: float | None) -> str:
    return "baseline" if distance_km is None else f"d{fmt(distance_km)}km"


def _check_writable(directory: Path) -> None:
    try:
        directory.mkdir(parents=True, exist_ok=True)
        with tempfile.NamedTemporaryFile(dir=directory):
            pass
    except OSError as exc:
        raise OSError(f"output directory {directory} is not writable: {exc}") from exc


def report_from_sim(sim: UplinkSimulation, seed: int, distance_km: float | None) -> ScenarioReport:
    tput = sim.mean_throughput_bps()
    per_ue = [(u.ue_id, float(t)) for u, t in zip(sim.ues, tput)]
    cdf = throughput_cdf(tput) if len(tput) else []
    n_tx = int(sim.n_first_tx.sum())
    stats = {
        "ttis": sim.tti,
        "uplink_grants": sim.ul_grants,
        "first_tx": n_tx,
        "first_tx_bler": float(sim.n_first_fail.sum() / n_tx) if n_tx else 0.0,
        "delivered_bits": float(sim.delivered_bits.sum()),
        "granted_bits": float(sim.granted_bits.sum()),
        "sinr_cell": sim.capture.cell,
    }
    return ScenarioReport(scenario_label(distance_km), seed, distance_km, per_ue, cdf, None, stats)


def run_scenario(cfg: SimulationConfig, distance_km: float | None, out_dir: Path | None = None) -> ScenarioReport:
    """Simulate one scenario (``None`` = radar off) and write its output files.

    Files go to ``out_dir`` (default ``cfg.output_dir / <label>``):
    ``throughput_per_ue.csv``, ``throughput_cdf.csv``, ``sinr_grid.csv`` and
    ``summary.txt``.  The directory is checked for writability first.
    """
    directory = Path(out_dir) if out_dir is not None else cfg.output_dir / scenario_label(distance_km)
    _check_writable(directory)
    sim = simulate(cfg, distance_km)
    report = report_from_sim(sim, cfg.seed, distance_km)
    write_per_ue(directory / "throughput_per_ue.csv", report)
    write_cdf(directory / "throughput_cdf.csv", report.cdf_points)
    report.sinr_dump_path = sinr_grid_dump(sim.capture.ttis, sim.capture.sinr_db, directory / "sinr_grid.csv")
    _write_summary(directory / "summary.txt", report, cfg)
    return report


def _write_summary(path: Path, report: ScenarioReport, cfg: SimulationConfig) -> None:
    lines = [
        f"scenario: {report.scenario_label}",
        f"seed: {report.seed_used}",
        f"distance_km: {'none' if report.distance_km is None else fmt(report.distance_km)}",
        f"sim_duration_s: {fmt(cfg.sim_duration_s)}",
        f"n_ues: {len(report.per_ue_throughput)}",
        f"mean_throughput_bps: {fmt(report.mean_throughput)}",
    ]
    lines += [f"{k}: {fmt(v)}" for k, v in report.stats.items()]
    path.write_text("\n".join(lines) + "\n")


def _run_one(args):
    cfg, distance = args
    return run_scenario(cfg, distance)


def sweep_distances(cfg: SimulationConfig, workers: int = 1) -> tuple[SweepSummary, list[ScenarioReport]]:
    """Baseline plus one scenario per distance, all sharing the seed (and hence the UE drop).

    Returns the summary (also written to ``sweep_summary.csv``) and the
    reports, baseline first.
    """
    if not cfg.radar_distances_km:
        raise ConfigError("sweep needs at least one radar distance")
    if not cfg.baseline_enabled:
        raise ConfigError("sweep needs the baseline to compute losses")
    _check_writable(cfg.output_dir)
    jobs = [(cfg, None)] + [(cfg, d) for d in cfg.radar_distances_km]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_run_one, jobs))
    else:
        reports = [_run_one(j) for j in jobs]
    base = reports[0]
    entries = [
        SweepEntry(r.distance_km, r.mean_throughput, loss_fraction(base, r),
                   cfg.output_dir / r.scenario_label / "throughput_cdf.csv")
        for r in reports[1:]
    ]
    summary = SweepSummary(base.mean_throughput, entries)
    write_sweep_table(cfg.output_dir / "sweep_summary.csv", summary)
    return summary, reports


def default_workers() -> int:
    return max(1, min(len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else os.cpu_count() or 1, 8))
