"""Path loss models: free space, ITM area mode and 3GPP urban macro."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import itm
from .itm import Climate, ITMDomainError, Polarization, Siting, Variability

SPEED_OF_LIGHT = 299_792_458.0
MIN_UE_DISTANCE_M = 25.0


class PropagationDomainError(ValueError):
    pass


@dataclass(frozen=True)
class ItmParams:
    terrain_roughness_m: float = 10.0
    dielectric_constant: float = 15.0
    conductivity: float = 0.005
    surface_refractivity: float = 301.0
    climate: Climate = Climate.CONTINENTAL_TEMPERATE
    variability: Variability = Variability.SINGLE_MESSAGE
    polarization: Polarization = Polarization.VERTICAL
    siting: tuple[Siting, Siting] = (Siting.RANDOM, Siting.RANDOM)
    # single-message quantile; fraction of situations with loss below the prediction
    reliability_pct: float = 25.0

    def __post_init__(self):
        if not 250.0 <= self.surface_refractivity <= 400.0:
            raise ITMDomainError("surface_refractivity outside [250, 400] N-units")
        if self.terrain_roughness_m < 0:
            raise ITMDomainError("terrain_roughness_m must be >= 0")
        if not 0.0 < self.reliability_pct < 100.0:
            raise ITMDomainError("reliability_pct must lie in (0, 100)")


@dataclass(frozen=True)
class UmaParams:
    street_width_m: float = 20.0
    building_height_m: float = 20.0
    sigma_los_db: float = 4.0
    sigma_nlos_db: float = 6.0
    indoor_penetration_db: float = 20.0


@dataclass(frozen=True)
class PropagationParams:
    freq_mhz: float = 3500.0
    radar_antenna_height_m: float = 50.0
    lte_antenna_height_m: float = 25.0
    ue_antenna_height_m: float = 1.5
    itm: ItmParams = field(default_factory=ItmParams)
    uma: UmaParams = field(default_factory=UmaParams)

    def __post_init__(self):
        if not 20.0 <= self.freq_mhz <= 20000.0:
            raise ITMDomainError("freq_mhz outside ITM range [20, 20000] MHz")
        for name in ("radar_antenna_height_m", "lte_antenna_height_m", "ue_antenna_height_m"):
            if getattr(self, name) <= 0:
                raise PropagationDomainError(f"{name} must be > 0")


def fspl_db(f_mhz, r_km):
    """Free-space path loss, ``20 log f + 20 log r + 32.45`` with f in MHz and r in km."""
    f = np.asarray(f_mhz, dtype=float)
    r = np.asarray(r_km, dtype=float)
    if np.any(f <= 0) or np.any(r <= 0):
        raise PropagationDomainError("fspl_db needs f_mhz > 0 and r_km > 0")
    out = 20.0 * np.log10(f) + 20.0 * np.log10(r) + 32.45
    return out if out.ndim else float(out)


def los_horizon_km(h1_m: float, h2_m: float) -> float:
    """Radio horizon between two antennas (4/3 earth), km."""
    if h1_m <= 0 or h2_m <= 0:
        raise PropagationDomainError("antenna heights must be > 0")
    return 4.1 * (math.sqrt(h1_m) + math.sqrt(h2_m))


def itm_loss_db(d_km: float, p: PropagationParams = PropagationParams()) -> float:
    """ITM area-mode basic transmission loss between the radar and an eNB."""
    if d_km < 1.0:
        raise ITMDomainError(f"d_km={d_km} below ITM minimum of 1 km")
    return _itm_cached(float(d_km), p)


_ITM_CACHE: dict[tuple[float, PropagationParams], float] = {}


def _itm_cached(d_km: float, p: PropagationParams) -> float:
    key = (d_km, p)
    if key not in _ITM_CACHE:
        q = p.itm
        _ITM_CACHE[key] = itm.area_loss_db(
            d_km,
            p.freq_mhz,
            p.radar_antenna_height_m,
            p.lte_antenna_height_m,
            terrain_roughness_m=q.terrain_roughness_m,
            dielectric_constant=q.dielectric_constant,
            conductivity=q.conductivity,
            surface_refractivity=q.surface_refractivity,
            climate=q.climate,
            variability=q.variability,
            polarization=q.polarization,
            siting=q.siting,
            pct_time=50.0,
            pct_location=50.0,
            pct_confidence=q.reliability_pct,
        )
    return _ITM_CACHE[key]


def radar_path_loss_db(d_km: float, p: PropagationParams = PropagationParams()) -> float:
    """FSPL inside the radio horizon, ITM beyond it."""
    if d_km <= 0:
        raise PropagationDomainError("d_km must be > 0")
    if d_km < los_horizon_km(p.radar_antenna_height_m, p.lte_antenna_height_m):
        return float(fspl_db(p.freq_mhz, d_km))
    return itm_loss_db(d_km, p)


# --- urban macro (UE <-> eNB) -------------------------------------------------

def uma_los_probability(d_m):
    """LoS probability, ``min(18/d, 1)(1 - exp(-d/63)) + exp(-d/63)``."""
    d = np.asarray(d_m, dtype=float)
    out = np.minimum(18.0 / d, 1.0) * (1.0 - np.exp(-d / 63.0)) + np.exp(-d / 63.0)
    return out if out.ndim else float(out)


def uma_pathloss_db(d_m, is_los, p: PropagationParams = PropagationParams(), indoor=False):
    """Urban-macro path loss in dB for 2-D distance ``d_m``.

    LoS uses the dual-slope model with the breakpoint at
    ``4 h'_BS h'_UT f / c``; NLoS uses the building/street parameterized
    model.  Indoor terminals get the fixed penetration loss on top.
    """
    d = np.asarray(d_m, dtype=float)
    if np.any(d < MIN_UE_DISTANCE_M):
        raise PropagationDomainError(f"UE-eNB distance below {MIN_UE_DISTANCE_M} m")
    fc = p.freq_mhz / 1000.0
    h_bs = p.lte_antenna_height_m
    h_ut = p.ue_antenna_height_m
    hb_eff, hu_eff = h_bs - 1.0, h_ut - 1.0
    d_bp = 4.0 * hb_eff * hu_eff * fc * 1e9 / SPEED_OF_LIGHT
    pl_los = np.where(
        d < d_bp,
        22.0 * np.log10(d) + 28.0 + 20.0 * np.log10(fc),
        40.0 * np.log10(d) + 7.8 - 18.0 * np.log10(hb_eff) - 18.0 * np.log10(hu_eff) + 2.0 * np.log10(fc),
    )
    w, h = p.uma.street_width_m, p.uma.building_height_m
    pl_nlos = (
        161.04
        - 7.1 * np.log10(w)
        + 7.5 * np.log10(h)
        - (24.37 - 3.7 * (h / h_bs) ** 2) * np.log10(h_bs)
        + (43.42 - 3.1 * np.log10(h_bs)) * (np.log10(d) - 3.0)
        + 20.0 * np.log10(fc)
        - (3.2 * np.log10(11.75 * h_ut) ** 2 - 4.97)
    )
    pl = np.where(is_los, pl_los, pl_nlos)
    pl = pl + np.where(indoor, p.uma.indoor_penetration_db, 0.0)
    return pl if np.ndim(pl) else float(pl)


def sample_shadowing_db(is_los, rng: np.random.Generator, p: PropagationParams = PropagationParams()):
    """Zero-mean log-normal shadowing (dB) with the LoS or NLoS standard deviation."""
    is_los = np.asarray(is_los, dtype=bool)
    sigma = np.where(is_los, p.uma.sigma_los_db, p.uma.sigma_nlos_db)
    out = rng.standard_normal(is_los.shape) * sigma
    return out if out.ndim else float(out)
