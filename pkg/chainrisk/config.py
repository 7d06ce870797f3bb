from pydantic import BaseModel
from pydantic_settings import BaseSettings
from typing import Literal


class BufferSettings(BaseModel):
    method: Literal["cpm", "rsem", "apd", "all"] = "all"
    variance: Literal["rsem_half_u", "triangular"] = "rsem_half_u"
    # Safe / average ratio given to tasks that carry a single duration (Patterson)
    safety_factor: float = 1.5


class SimulationSettings(BaseModel):
    replications: int = 10000
    seed: int = 42
    workers: int = 1
    # Replications per RNG stream; part of the determinism contract, not a tuning knob
    block_size: int = 4096
    histogram_bins: int = 50
    # Relative to each replication's makespan
    critical_tolerance: float = 1e-9


class Settings(BaseSettings):
    # Diagnostics
    chain_log: Literal["error", "warn", "info", "debug"] = "info"

    # Buffer sizing
    buffer: BufferSettings = BufferSettings()
    buffer_target_probability: float = 0.9

    # Slack below slack_tolerance * max(1, makespan) counts as zero
    slack_tolerance: float = 1e-9

    # Monte Carlo
    simulation: SimulationSettings = SimulationSettings()

    # Risk level bands on the RCN scale
    risk_threshold_critical: float = 7.0
    risk_threshold_high: float = 5.5
    risk_threshold_medium: float = 4.0

    # Mitigation
    max_event_tree_strategies: int = 20

    class Config:
        env_file = ".env"
        case_sensitive = False
        env_nested_delimiter = "__"


settings = Settings()
