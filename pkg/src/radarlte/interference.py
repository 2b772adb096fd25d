"""Map radar pulses onto the eNB uplink resource grid (symbol x subcarrier)."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import sici

from .antennas import sector_composite_gain_db, wrap_deg
from .network import Cell, NetworkLayout
from .propagation import PropagationParams, radar_path_loss_db
from .radar import PulseEvent, RadarConfig, emitted_eirp_dbm

SYMBOL_DURATION_S = 71.4e-6
SYMBOLS_PER_TTI = 14
SUBCARRIER_SPACING_HZ = 15e3


@dataclass
class ResourceGrid:
    tti_index: int
    n_symbols: int
    n_subcarriers: int
    radar_interference_mw: np.ndarray

    @classmethod
    def empty(cls, tti_index: int, n_symbols: int = SYMBOLS_PER_TTI, n_subcarriers: int = 600) -> "ResourceGrid":
        return cls(tti_index, n_symbols, n_subcarriers, np.zeros((n_symbols, n_subcarriers)))


@dataclass(frozen=True)
class CouplingResult:
    radar_off_boresight_deg: float
    enb_gain_toward_radar_db: float
    path_loss_db: float
    received_pulse_power_dbm: float

    @property
    def received_pulse_power_mw(self) -> float:
        return 10.0 ** (self.received_pulse_power_dbm / 10.0)


def radar_position_m(radar: RadarConfig, distance_km: float) -> np.ndarray:
    b = math.radians(radar.bearing_deg)
    return distance_km * 1000.0 * np.array([math.cos(b), math.sin(b)])


def coupling_gain(radar: RadarConfig, boresight_az: float, enb: Cell, distance_km: float,
                  prop: PropagationParams = PropagationParams(), apply_enb_pattern: bool = True,
                  enb_elevation: str = "boresight") -> CouplingResult:
    """Received peak pulse power at one eNB sector for a given radar boresight.

    Parameters
    ----------
    distance_km
        Range from the radar to the LTE system centre; the per-site range
        follows from the layout geometry.
    apply_enb_pattern
        False gives worst-case coupling at the full 17 dBi peak gain.
    enb_elevation
        ``"boresight"`` places the radar inside the sector's elevation main
        lobe, so only azimuth discrimination applies.  ``"geometric"`` uses
        the true depression angle, which for a horizon target and a 12 deg
        downtilt costs about 17 dB.
    """
    if enb_elevation not in ("boresight", "geometric"):
        raise ValueError("enb_elevation must be 'boresight' or 'geometric'")
    if distance_km <= 0:
        raise ValueError("distance_km must be > 0")
    ship = radar_position_m(radar, distance_km)
    site = np.asarray(enb.site_pos, dtype=float)
    v = site - ship
    d_m = float(np.hypot(*v))
    bearing_from_radar = math.degrees(math.atan2(v[1], v[0]))
    off_az = float(wrap_deg(bearing_from_radar - boresight_az))
    dh = prop.radar_antenna_height_m - enb.height_m
    # flat-earth elevation geometry; curvature lives inside the ITM loss
    radar_el_off = math.degrees(math.atan2(dh, d_m))
    eirp = emitted_eirp_dbm(radar, off_az, radar_el_off)
    pl = radar_path_loss_db(d_m / 1000.0, prop)
    if apply_enb_pattern:
        az_to_radar = math.degrees(math.atan2(-v[1], -v[0]))
        enb_depression = -radar_el_off if enb_elevation == "geometric" else enb.antenna.el_tilt
        g = enb.antenna.peak_gain_dbi + sector_composite_gain_db(az_to_radar - enb.azimuth_deg, enb_depression, enb.antenna)
    else:
        g = enb.antenna.peak_gain_dbi
    return CouplingResult(off_az, float(g), pl, float(eirp - pl + g))


def _sinc2_cdf(x):
    # antiderivative of sinc^2(x) = (sin(pi x)/(pi x))^2, odd in x
    x = np.asarray(x, dtype=float)
    si, _ = sici(2.0 * np.pi * x)
    with np.errstate(invalid="ignore", divide="ignore"):
        tail = np.where(x == 0.0, 0.0, np.sin(np.pi * x) ** 2 / (np.pi**2 * x))
    return si / np.pi - tail


@lru_cache(maxsize=32)
def _spectral_weights_cached(pulse_width_s: float, spacing_hz: float, n: int, center: int) -> np.ndarray:
    k = np.arange(n) - center
    lo = (k - 0.5) * spacing_hz * pulse_width_s
    hi = (k + 0.5) * spacing_hz * pulse_width_s
    w = _sinc2_cdf(hi) - _sinc2_cdf(lo)
    w = np.maximum(w, 0.0)
    w = w / w.sum()
    w.flags.writeable = False
    return w


def spectral_weights(pulse_width_s: float, subcarrier_spacing_hz: float = SUBCARRIER_SPACING_HZ,
                     n_subcarriers: int = 600, center_index: int | None = None) -> np.ndarray:
    """Fraction of a rectangular pulse's energy falling in each subcarrier bin."""
    if pulse_width_s <= 0:
        raise ValueError("pulse_width_s must be > 0")
    center = n_subcarriers // 2 if center_index is None else center_index
    if not 0 <= center < n_subcarriers:
        raise ValueError("center_index out of range")
    return _spectral_weights_cached(float(pulse_width_s), float(subcarrier_spacing_hz), int(n_subcarriers), int(center))


def symbol_overlap_fractions(pulse_start_s: float, pulse_width_s: float, tti_start_s: float,
                             symbol_duration_s: float = SYMBOL_DURATION_S, n_symbols: int = SYMBOLS_PER_TTI) -> np.ndarray:
    """Per-symbol overlap of a pulse, as a fraction of one symbol duration."""
    if pulse_width_s <= 0 or symbol_duration_s <= 0:
        raise ValueError("durations must be > 0")
    # work relative to the TTI start to keep rounding at the microsecond scale
    p0 = pulse_start_s - tti_start_s
    p1 = p0 + pulse_width_s
    s0 = np.arange(n_symbols) * symbol_duration_s
    s1 = s0 + symbol_duration_s
    ov = np.clip(np.minimum(p1, s1) - np.maximum(p0, s0), 0.0, None)
    return ov / symbol_duration_s


def overlay_radar_interference(grid: ResourceGrid, pulses: list[PulseEvent], received_mw, weights: np.ndarray,
                               tti_start_s: float, symbol_duration_s: float = SYMBOL_DURATION_S) -> ResourceGrid:
    """Add each pulse's power to the grid as ``P * overlap(s) * weight(k)``.

    ``received_mw`` is either one received power for all pulses or a
    sequence aligned with ``pulses`` (the coupling depends on each pulse's
    beam position).
    """
    powers = np.broadcast_to(np.asarray(received_mw, dtype=float), (len(pulses),))
    for pulse, p_mw in zip(pulses, powers):
        frac = symbol_overlap_fractions(pulse.start_s, pulse.duration_s, tti_start_s, symbol_duration_s, grid.n_symbols)
        if p_mw > 0 and frac.any():
            grid.radar_interference_mw += p_mw * np.outer(frac, weights)
    return grid


class RadarInterferenceMapper:
    """Per-TTI radar interference grids for every cell of a layout.

    Couplings are cached per beam position, since the boresight is constant
    inside a dwell.
    """

    def __init__(self, radar: RadarConfig, layout: NetworkLayout, distance_km: float, prop: PropagationParams,
                 n_subcarriers: int, center_offset: int = 0, apply_enb_pattern: bool = True,
                 enb_elevation: str = "boresight",
                 symbol_duration_s: float = SYMBOL_DURATION_S, n_symbols: int = SYMBOLS_PER_TTI,
                 subcarrier_spacing_hz: float = SUBCARRIER_SPACING_HZ):
        self.radar = radar
        self.layout = layout
        self.distance_km = distance_km
        self.prop = prop
        self.apply_enb_pattern = apply_enb_pattern
        self.enb_elevation = enb_elevation
        self.symbol_duration_s = symbol_duration_s
        self.n_symbols = n_symbols
        self.weights = spectral_weights(radar.pulse_width_s, subcarrier_spacing_hz, n_subcarriers,
                                        n_subcarriers // 2 + center_offset)
        self._cache: dict[float, np.ndarray] = {}

    def received_mw(self, boresight_az: float) -> np.ndarray:
        key = round(boresight_az, 9)
        if key not in self._cache:
            self._cache[key] = np.array([
                coupling_gain(self.radar, boresight_az, cell, self.distance_km, self.prop,
                              self.apply_enb_pattern, self.enb_elevation).received_pulse_power_mw
                for cell in self.layout.cells
            ])
        return self._cache[key]

    def grids(self, tti_index: int, tti_start_s: float, pulses: list[PulseEvent]) -> np.ndarray:
        """Radar interference, shape (n_cells, n_symbols, n_subcarriers), mW per subcarrier."""
        power = np.zeros((self.layout.n_cells, self.n_symbols))
        for pulse in pulses:
            frac = symbol_overlap_fractions(pulse.start_s, pulse.duration_s, tti_start_s,
                                            self.symbol_duration_s, self.n_symbols)
            if frac.any():
                power += np.outer(self.received_mw(pulse.boresight_az_deg), frac)
        return power[:, :, None] * self.weights[None, None, :]
