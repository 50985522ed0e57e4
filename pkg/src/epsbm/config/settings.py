"""Application configuration settings."""

from pydantic import BaseModel, Field


class ValidationConfig(BaseModel):
    """Metric measure space validation tolerances."""

    # Triangle slack is relative to the largest stored distance.
    triangle_rel_tol: float = 1e-9
    weight_sum_tol: float = 1e-9


class VerifierConfig(BaseModel):
    """Approximated Brunn-Minkowski verification configuration."""

    tol_report: float = 0.0
    exhaustive_max_points: int = 14
    default_t_values: list[float] = Field(default_factory=lambda: [0.5])
    exhaustive_chunk_rows: int = 64
    index_max_points: int = 600
    ball_radius_fraction: float = 0.5
    random_subset_max_size: int = 20
    sigma_rule: float = 3.0
    workers: int = 1


class ConcentrationConfig(BaseModel):
    """Concentration function configuration."""

    exact_max_points: int = 20
    breakpoint_rel_shift: float = 1e-12
    exact_chunk_size: int = 1 << 16
    workers: int = 1


class DiscretizationConfig(BaseModel):
    """Sphere discretization configuration."""

    dense_cloud_size: int = 20000
    min_samples_per_center: int = 10
    mc_batch_size: int = 100_000
    workers: int = 1


class LoggingConfig(BaseModel):
    """Logging configuration."""

    level: str = "WARNING"
    format: str = "%(asctime)s %(levelname)s %(name)s: %(message)s"


# Global config instances
validation_config = ValidationConfig()
verifier_config = VerifierConfig()
concentration_config = ConcentrationConfig()
discretization_config = DiscretizationConfig()
logging_config = LoggingConfig()
