"""System-level simulation of pulsed shipborne radar interference into a TDD LTE uplink."""
from .config import ConfigError, LteConfig, SimulationConfig, derive_seed, parse_config
from .radar import RadarConfig
from .propagation import PropagationParams
from .runner import run_scenario, simulate, sweep_distances

__all__ = [
    "ConfigError",
    "LteConfig",
    "PropagationParams",
    "RadarConfig",
    "SimulationConfig",
    "derive_seed",
    "parse_config",
    "run_scenario",
    "simulate",
    "sweep_distances",
]
__version__ = "0.1.0"
