"""Radar and eNB sector antenna patterns.

All functions return gains in dB and accept scalars or numpy arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

# cosine-illuminated aperture: HPBW [deg] = 68.8 * wavelength / aperture
_COS_APERTURE_K = 68.8
_MASK_SLOPE = 17.51
_MASK_SCALE = 2.331


@dataclass(frozen=True)
class RadarPatternParams:
    theta_3db_az: float = 0.81
    theta_3db_el: float = 0.81
    sidelobe_transition_db: float = 14.4
    backlobe_floor_db: float = -50.0

    def __post_init__(self):
        if self.theta_3db_az <= 0 or self.theta_3db_el <= 0:
            raise ValueError("radar beamwidths must be > 0")
        if not (self.backlobe_floor_db < -self.sidelobe_transition_db < 0):
            raise ValueError("need backlobe_floor_db < -sidelobe_transition_db < 0")


@dataclass(frozen=True)
class SectorPatternParams:
    theta_3db_az: float = 70.0
    theta_3db_el: float = 10.0
    az_tilt: float = 0.0
    el_tilt: float = 12.0
    a_m: float = 20.0
    peak_gain_dbi: float = 17.0

    def __post_init__(self):
        if self.a_m <= 0:
            raise ValueError("a_m must be > 0")
        if self.theta_3db_az <= 0 or self.theta_3db_el <= 0:
            raise ValueError("sector beamwidths must be > 0")


def cosine_lobe_db(theta_deg, theta_3db: float):
    """Normalized far-field power of a cosine-illuminated aperture.

    The aperture size is chosen so the half-power points sit at
    ``+/- theta_3db / 2``.  Peak is 0 dB at boresight.
    """
    theta = np.asarray(theta_deg, dtype=float)
    u = _COS_APERTURE_K * np.pi * np.sin(np.radians(theta)) / theta_3db
    den = (np.pi / 2) ** 2 - u * u
    near_pole = np.abs(den) < 1e-9
    safe_den = np.where(near_pole, 1.0, den)
    field = np.where(near_pole, np.pi / 4, (np.pi**2 / 4) * np.cos(u) / safe_den)
    with np.errstate(divide="ignore"):
        out = 20.0 * np.log10(np.abs(field))
    return out if out.ndim else float(out)


@lru_cache(maxsize=64)
def _transition_angles(theta_3db: float, transition_db: float, floor_db: float) -> tuple[float, float]:
    # lobe crossing lies inside the main lobe, before the first null
    u_null = 1.5 * math.pi
    theta_null = math.degrees(math.asin(min(1.0, u_null * theta_3db / (_COS_APERTURE_K * math.pi))))
    t_lobe = brentq(lambda t: cosine_lobe_db(t, theta_3db) + transition_db, 1e-9, theta_null * (1 - 1e-9))
    t_floor = theta_3db * math.exp(-floor_db / _MASK_SLOPE) / _MASK_SCALE
    return t_lobe, t_floor


def radar_transition_angles(p: RadarPatternParams = RadarPatternParams()) -> tuple[float, float]:
    """Angles (deg) where the pattern leaves the main lobe and where it reaches the floor."""
    return _transition_angles(p.theta_3db_az, p.sidelobe_transition_db, p.backlobe_floor_db)


def radar_gain_db(theta_off, p: RadarPatternParams = RadarPatternParams()):
    """Relative radar gain (dB, <= 0) at ``theta_off`` degrees off boresight.

    Main beam follows the theoretical cosine-aperture lobe down to the
    sidelobe transition level, then the logarithmic mask, then the constant
    back-lobe floor.  The mask is held at the transition level until it
    drops below it, which keeps the pattern continuous and monotone.
    """
    theta = np.abs(wrap_deg(theta_off))
    t_lobe, t_floor = radar_transition_angles(p)
    lobe = cosine_lobe_db(theta, p.theta_3db_az)
    with np.errstate(divide="ignore"):
        mask = -_MASK_SLOPE * np.log(_MASK_SCALE * np.maximum(theta, 1e-12) / p.theta_3db_az)
    mask = np.minimum(mask, -p.sidelobe_transition_db)
    out = np.where(theta < t_lobe, lobe, np.where(theta < t_floor, mask, p.backlobe_floor_db))
    out = np.maximum(out, p.backlobe_floor_db)
    return out if out.ndim else float(out)


def sector_element_gain_db(theta_off, tilt: float, theta_3db: float, a_m: float):
    """One-dimensional 3GPP sector element pattern, ``-min(12((t - tilt)/t3)^2, a_m)``."""
    theta = np.asarray(theta_off, dtype=float)
    out = -np.minimum(12.0 * ((theta - tilt) / theta_3db) ** 2, a_m)
    return out if out.ndim else float(out)


def sector_composite_gain_db(az_off, el_off, p: SectorPatternParams = SectorPatternParams()):
    """Relative composite gain (dB, in ``[-a_m, 0]``); add ``p.peak_gain_dbi`` for dBi.

    ``az_off`` is the azimuth relative to the sector pointing direction
    (wrapped into [-180, 180)).  ``el_off`` is the depression angle below
    the horizon, so a target on the horizon seen by a 12 deg downtilted
    antenna sits 12 deg off the elevation boresight.
    """
    az = wrap_deg(np.asarray(az_off, dtype=float))
    g_a = sector_element_gain_db(az, p.az_tilt, p.theta_3db_az, p.a_m)
    g_e = sector_element_gain_db(np.asarray(el_off, dtype=float), p.el_tilt, p.theta_3db_el, p.a_m)
    out = -np.minimum(-(g_a + g_e), p.a_m)
    return out if np.ndim(out) else float(out)


def wrap_deg(angle):
    """Wrap degrees into [-180, 180)."""
    return (np.asarray(angle, dtype=float) + 180.0) % 360.0 - 180.0
