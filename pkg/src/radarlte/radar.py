"""Rotating pulsed radar: scan timing, pulse train and EIRP."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .antennas import RadarPatternParams, radar_gain_db, wrap_deg


@dataclass(frozen=True)
class RadarConfig:
    freq_mhz: float = 3500.0
    peak_power_dbm: float = 83.0
    antenna_gain_dbi: float = 45.0
    insertion_loss_db: float = 2.0
    antenna_height_m: float = 50.0
    pri_s: float = 0.5e-3
    pulse_width_s: float = 78e-6
    rotation_rpm: float = 30.0
    az_beamwidth_deg: float = 0.81
    el_beamwidth_deg: float = 0.81
    distance_km: float | None = None
    # bearing of the ship as seen from the LTE system centre (deg, CCW from +x)
    bearing_deg: float = 90.0
    # None: boresight points at the LTE centre at t = 0
    initial_boresight_deg: float | None = None
    pattern: RadarPatternParams = field(default_factory=RadarPatternParams)

    def __post_init__(self):
        if not self.pulse_width_s < self.pri_s:
            raise ValueError("pulse_width_s must be < pri_s")
        if self.pulse_width_s <= 0:
            raise ValueError("pulse_width_s must be > 0")
        if self.rotation_rpm <= 0:
            raise ValueError("rotation_rpm must be > 0")
        if self.az_beamwidth_deg <= 0:
            raise ValueError("az_beamwidth_deg must be > 0")
        for name in ("peak_power_dbm", "antenna_gain_dbi", "insertion_loss_db"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.distance_km is not None and self.distance_km <= 0:
            raise ValueError("distance_km must be > 0")

    def start_boresight_deg(self) -> float:
        if self.initial_boresight_deg is not None:
            return float(self.initial_boresight_deg)
        return float(wrap_deg(self.bearing_deg + 180.0))


@dataclass(frozen=True)
class ScanTiming:
    scan_period_s: float
    n_beam_positions: int
    dwell_time_s: float
    pulses_per_dwell: int
    pulses_per_scan: float


@dataclass(frozen=True)
class PulseEvent:
    start_s: float
    duration_s: float
    boresight_az_deg: float
    beam_index: int
    pulse_index_in_dwell: int


def scan_timing(cfg: RadarConfig) -> ScanTiming:
    scan_period = 60.0 / cfg.rotation_rpm
    # ceil with a guard so exact quotients (e.g. 360/1) are not bumped up
    n_beams = max(1, math.ceil(360.0 / cfg.az_beamwidth_deg - 1e-9))
    dwell = scan_period / n_beams
    return ScanTiming(
        scan_period_s=scan_period,
        n_beam_positions=n_beams,
        dwell_time_s=dwell,
        pulses_per_dwell=round(dwell / cfg.pri_s),
        pulses_per_scan=scan_period / cfg.pri_s,
    )


def pulse_train(cfg: RadarConfig, t0: float, t1: float, initial_boresight_deg: float | None = None) -> list[PulseEvent]:
    """Pulses with leading edge in ``[t0, t1)``.

    The pulse clock free-runs at ``k * pri`` from t = 0.  The boresight is
    stepped: constant inside a dwell, advancing one beam position (360/n
    degrees) per dwell.
    """
    if t1 <= t0:
        return []
    timing = scan_timing(cfg)
    start = cfg.start_boresight_deg() if initial_boresight_deg is None else initial_boresight_deg
    step = 360.0 / timing.n_beam_positions
    k0 = max(0, math.ceil(t0 / cfg.pri_s - 1e-9))
    k1 = math.ceil(t1 / cfg.pri_s - 1e-9)
    events = []
    for k in range(k0, k1):
        t = k * cfg.pri_s
        dwell_no = _dwell_number(t, timing.dwell_time_s)
        beam = dwell_no % timing.n_beam_positions
        first_k = math.ceil(dwell_no * timing.dwell_time_s / cfg.pri_s - 1e-9)
        events.append(
            PulseEvent(
                start_s=t,
                duration_s=cfg.pulse_width_s,
                boresight_az_deg=float((start + beam * step) % 360.0),
                beam_index=beam,
                pulse_index_in_dwell=k - first_k,
            )
        )
    return events


def _dwell_number(t: float, dwell: float) -> int:
    return int(math.floor(t / dwell + 1e-9))


def footprint_width_km(r_km: float, az_beamwidth_deg: float) -> float:
    """Illuminated width ``2 R tan(beamwidth)`` at range ``r_km``."""
    if r_km <= 0:
        raise ValueError("r_km must be > 0")
    return 2.0 * r_km * math.tan(math.radians(az_beamwidth_deg))


def footprint_width_approx_km(r_km: float) -> float:
    """The 0.03 R rule of thumb for a 0.81 deg beam."""
    return 0.03 * r_km


def emitted_eirp_dbm(cfg: RadarConfig, off_boresight_deg, off_elevation_deg=0.0):
    """EIRP toward a direction ``off_boresight_deg`` from the beam axis.

    The elevation cut uses the same cosine pattern with the elevation
    beamwidth; pass 0 to evaluate the azimuth cut alone.
    """
    peak = cfg.peak_power_dbm + cfg.antenna_gain_dbi - cfg.insertion_loss_db
    g = radar_gain_db(off_boresight_deg, cfg.pattern)
    if np.any(np.asarray(off_elevation_deg) != 0.0):
        el_pattern = RadarPatternParams(
            theta_3db_az=cfg.pattern.theta_3db_el,
            theta_3db_el=cfg.pattern.theta_3db_el,
            sidelobe_transition_db=cfg.pattern.sidelobe_transition_db,
            backlobe_floor_db=cfg.pattern.backlobe_floor_db,
        )
        g = np.maximum(g + radar_gain_db(off_elevation_deg, el_pattern), cfg.pattern.backlobe_floor_db)
    out = peak + np.asarray(g)
    return out if out.ndim else float(out)
