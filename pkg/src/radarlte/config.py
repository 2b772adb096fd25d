"""Scenario configuration: dataclasses, the ``section.key = value`` parser and seeding."""
from __future__ import annotations

import dataclasses
import hashlib
import math
from dataclasses import dataclass, field
from pathlib import Path

from .antennas import RadarPatternParams, SectorPatternParams
from .itm import Climate, Polarization, Siting, Variability
from .propagation import ItmParams, PropagationParams, UmaParams
from .radar import RadarConfig

TTI_S = 1e-3
MANDATORY_KEYS = ("sim.seed", "radar.distance_km")


class ConfigError(ValueError):
    """Missing key, unknown key or malformed value."""


@dataclass(frozen=True)
class LteConfig:
    isd_m: float = 500.0
    n_rb: int = 50
    ues_per_cell: int = 10
    indoor_fraction: float = 0.8
    ue_speed_kmh: float = 3.0
    enb_height_m: float = 25.0
    enb_noise_figure_db: float = 5.0
    ue_max_power_dbm: float = 23.0
    p0_dbm: float = -82.0
    alpha: float = 0.8
    tdd_pattern: str = "DSUUU"
    sector: SectorPatternParams = field(default_factory=SectorPatternParams)
    shadowing: bool = True
    # scheduler and link abstraction
    max_ues_per_tti: int = 5
    pf_time_constant_tti: float = 100.0
    bler_slope_db: float = 0.5
    bler_target: float = 0.1
    olla_step_down_db: float = 0.5
    olla_clamp_db: float = 10.0
    max_harq_tx: int = 4
    harq_rtt_tti: int = 4
    eesm_beta_step: float = 0.25
    # radar coupling
    radar_center_offset: int = 0
    apply_enb_pattern: bool = True
    enb_elevation: str = "boresight"
    # SINR dump: cell (None = centre-site sector facing the radar) and TTI window [start, stop)
    sinr_cell: int | None = None
    sinr_window_tti: tuple[int, int] = (0, 20)

    def __post_init__(self):
        if self.isd_m <= 0:
            raise ConfigError("isd_m must be > 0")
        if self.n_rb < 1:
            raise ConfigError("n_rb must be >= 1")
        if self.ues_per_cell < 0:
            raise ConfigError("ues_per_cell must be >= 0")
        if not 0.0 <= self.indoor_fraction <= 1.0:
            raise ConfigError("indoor_fraction must lie in [0, 1]")
        if self.ue_speed_kmh < 0:
            raise ConfigError("ue_speed_kmh must be >= 0")
        if not self.tdd_pattern or set(self.tdd_pattern) - set("DSU"):
            raise ConfigError("tdd_pattern must be a string over {D, S, U}")
        if self.max_ues_per_tti < 1:
            raise ConfigError("max_ues_per_tti must be >= 1")
        if self.pf_time_constant_tti < 1:
            raise ConfigError("pf_time_constant_tti must be >= 1")
        if self.bler_slope_db <= 0:
            raise ConfigError("bler_slope_db must be > 0")
        if not 0.0 < self.bler_target < 1.0:
            raise ConfigError("bler_target must lie in (0, 1)")
        if not 1 <= self.max_harq_tx:
            raise ConfigError("max_harq_tx must be >= 1")
        if self.harq_rtt_tti < 1:
            raise ConfigError("harq_rtt_tti must be >= 1")
        if self.eesm_beta_step < 0:
            raise ConfigError("eesm_beta_step must be >= 0")
        if self.enb_elevation not in ("boresight", "geometric"):
            raise ConfigError("enb_elevation must be 'boresight' or 'geometric'")
        a, b = self.sinr_window_tti
        if not 0 <= a <= b:
            raise ConfigError("sinr_window_tti must satisfy 0 <= start <= stop")

    @property
    def n_subcarriers(self) -> int:
        return 12 * self.n_rb


@dataclass(frozen=True)
class SimulationConfig:
    seed: int
    radar_distances_km: tuple[float, ...]
    radar: RadarConfig = field(default_factory=RadarConfig)
    lte: LteConfig = field(default_factory=LteConfig)
    propagation: PropagationParams = field(default_factory=PropagationParams)
    sim_duration_s: float = 5.0
    output_dir: Path = Path("out")
    baseline_enabled: bool = True

    def __post_init__(self):
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an integer in [0, 2**64)")
        if not (self.sim_duration_s > 0 and math.isfinite(self.sim_duration_s)):
            raise ConfigError("sim_duration_s must be > 0")
        object.__setattr__(self, "radar_distances_km", tuple(float(d) for d in self.radar_distances_km))
        for d in self.radar_distances_km:
            if not d > 0:
                raise ConfigError("every radar distance must be > 0")
        object.__setattr__(self, "output_dir", Path(self.output_dir))

    @property
    def tti_count(self) -> int:
        # guard against 5.0 / 1e-3 = 4999.999...
        return int(math.floor(self.sim_duration_s / TTI_S + 1e-9))


def derive_seed(master: int, label: str) -> int:
    """64-bit sub-seed for a named random stream.

    Scenarios of one sweep share the master seed, so labels such as
    ``"drop"`` give every scenario the same UE drop.
    """
    digest = hashlib.sha256(f"{master}/{label}".encode()).digest()
    return int.from_bytes(digest[:8], "little")


# --- parser --------------------------------------------------------------------

def _parse_bool(s: str) -> bool:
    v = s.strip().lower()
    if v in ("true", "yes", "1", "on"):
        return True
    if v in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _parse_list(s: str) -> list[str]:
    s = s.strip()
    if s.startswith("[") and s.endswith("]"):
        s = s[1:-1]
    return [x.strip() for x in s.split(",") if x.strip()]


def _parse_optional_float(s: str) -> float | None:
    return None if s.strip().lower() in ("none", "auto", "") else float(s)


def _parse_optional_int(s: str) -> int | None:
    return None if s.strip().lower() in ("none", "auto", "") else int(s)


def _parse_window(s: str) -> tuple[int, int]:
    parts = _parse_list(s)
    if len(parts) != 2:
        raise ValueError("expected two integers 'start, stop'")
    return int(parts[0]), int(parts[1])


def _enum(cls):
    def conv(s: str):
        s = s.strip()
        try:
            return cls(int(s))
        except ValueError:
            return cls[s.upper()]
    return conv


def _siting(s: str):
    parts = _parse_list(s)
    if len(parts) != 2:
        raise ValueError("expected two siting values")
    return tuple(_enum(Siting)(p) for p in parts)


# section -> key -> (target object, field name, converter)
_SCHEMA: dict[str, dict[str, tuple[str, str, object]]] = {
    "sim": {
        "seed": ("sim", "seed", int),
        "duration_s": ("sim", "sim_duration_s", float),
        "sim_duration_s": ("sim", "sim_duration_s", float),
        "output_dir": ("sim", "output_dir", str),
        "baseline": ("sim", "baseline_enabled", _parse_bool),
    },
    "radar": {
        "distance_km": ("sim", "radar_distances_km", lambda s: [float(x) for x in _parse_list(s)]),
        "freq_mhz": ("radar", "freq_mhz", float),
        "peak_power_dbm": ("radar", "peak_power_dbm", float),
        "antenna_gain_dbi": ("radar", "antenna_gain_dbi", float),
        "insertion_loss_db": ("radar", "insertion_loss_db", float),
        "antenna_height_m": ("radar", "antenna_height_m", float),
        "pri_s": ("radar", "pri_s", float),
        "pulse_width_s": ("radar", "pulse_width_s", float),
        "rotation_rpm": ("radar", "rotation_rpm", float),
        "az_beamwidth_deg": ("radar", "az_beamwidth_deg", float),
        "el_beamwidth_deg": ("radar", "el_beamwidth_deg", float),
        "bearing_deg": ("radar", "bearing_deg", float),
        "initial_boresight_deg": ("radar", "initial_boresight_deg", _parse_optional_float),
        "sidelobe_transition_db": ("radar_pattern", "sidelobe_transition_db", float),
        "backlobe_floor_db": ("radar_pattern", "backlobe_floor_db", float),
    },
    "lte": {f.name: ("lte", f.name, None) for f in dataclasses.fields(LteConfig) if f.name != "sector"},
    "sector": {f.name: ("sector", f.name, float) for f in dataclasses.fields(SectorPatternParams)},
    "propagation": {
        "ue_antenna_height_m": ("prop", "ue_antenna_height_m", float),
    },
    "itm": {
        "terrain_roughness_m": ("itm", "terrain_roughness_m", float),
        "dielectric_constant": ("itm", "dielectric_constant", float),
        "conductivity": ("itm", "conductivity", float),
        "surface_refractivity": ("itm", "surface_refractivity", float),
        "climate": ("itm", "climate", _enum(Climate)),
        "variability": ("itm", "variability", _enum(Variability)),
        "polarization": ("itm", "polarization", _enum(Polarization)),
        "siting": ("itm", "siting", _siting),
        "reliability_pct": ("itm", "reliability_pct", float),
    },
    "uma": {f.name: ("uma", f.name, float) for f in dataclasses.fields(UmaParams)},
}

_LTE_CONVERTERS = {
    "shadowing": _parse_bool,
    "apply_enb_pattern": _parse_bool,
    "tdd_pattern": str.strip,
    "enb_elevation": str.strip,
    "sinr_cell": _parse_optional_int,
    "sinr_window_tti": _parse_window,
}
for _f in dataclasses.fields(LteConfig):
    if _f.name == "sector":
        continue
    conv = _LTE_CONVERTERS.get(_f.name) or (int if _f.type in ("int", int) else float)
    _SCHEMA["lte"][_f.name] = ("lte", _f.name, conv)


def parse_document(text: str) -> dict[str, str]:
    """Split a ``section.key = value`` document into a flat key -> raw value map."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'section.key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if "." not in key:
            raise ConfigError(f"line {lineno}: key {key!r} lacks a section prefix")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def parse_config(text: str, require: tuple[str, ...] = MANDATORY_KEYS) -> SimulationConfig:
    """Build a validated :class:`SimulationConfig` from a config document.

    Parameters
    ----------
    text
        Lines of ``section.key = value``; ``#`` starts a comment and lists
        are comma separated, optionally in brackets.
    require
        Keys that must be present.  Defaults to the seed and the radar
        distances.

    Raises
    ------
    ConfigError
        On missing or unknown keys, unparsable values and violated bounds.
    """
    kv = parse_document(text)
    missing = [k for k in require if k not in kv]
    if missing:
        raise ConfigError("missing mandatory key(s): " + ", ".join(missing))

    groups: dict[str, dict[str, object]] = {g: {} for g in ("sim", "radar", "radar_pattern", "lte", "sector", "prop", "itm", "uma")}
    for key, value in kv.items():
        section, name = key.split(".", 1)
        try:
            target, fname, conv = _SCHEMA[section][name]
        except KeyError:
            raise ConfigError(f"unknown key {key!r}") from None
        try:
            groups[target][fname] = conv(value)
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"bad value for {key}: {value!r} ({exc})") from None

    sim = groups["sim"]
    if "radar_distances_km" in sim and not sim["radar_distances_km"] and "radar.distance_km" in require:
        raise ConfigError("radar.distance_km must list at least one distance")
    try:
        radar_pattern = RadarPatternParams(
            theta_3db_az=groups["radar"].get("az_beamwidth_deg", 0.81),
            theta_3db_el=groups["radar"].get("el_beamwidth_deg", 0.81),
            **groups["radar_pattern"],
        )
        radar = RadarConfig(pattern=radar_pattern, **groups["radar"])
        sector = SectorPatternParams(**groups["sector"])
        lte = LteConfig(sector=sector, **groups["lte"])
        prop = PropagationParams(
            freq_mhz=radar.freq_mhz,
            radar_antenna_height_m=radar.antenna_height_m,
            lte_antenna_height_m=lte.enb_height_m,
            itm=ItmParams(**groups["itm"]),
            uma=UmaParams(**groups["uma"]),
            **groups["prop"],
        )
        return SimulationConfig(
            seed=sim.get("seed", 0),
            radar_distances_km=sim.get("radar_distances_km", ()),
            radar=radar,
            lte=lte,
            propagation=prop,
            **{k: v for k, v in sim.items() if k not in ("seed", "radar_distances_km")},
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def load_config(path: str | Path, require: tuple[str, ...] = MANDATORY_KEYS) -> SimulationConfig:
    return parse_config(Path(path).read_text(), require)
