from ._crnsim import *  # noqa: F401,F403
from ._crnsim import ConfigError, NetworkInstance, ScenarioConfig

__all__ = [
    "ConfigError",
    "NetworkInstance",
    "ScenarioConfig",
    "certify_jep",
    "closest_ap",
    "exhaustive_sep",
    "generate_snapshot",
    "interference_at",
    "max_throughput",
    "multi_connectivity",
    "potential_ap",
    "rate",
    "run",
    "snapshot",
    "solve_powers",
    "sum_rate",
    "system_potential",
    "uniform_profile",
    "waterfill",
]
