"""Configuration module for epsbm."""

from .settings import (
    ConcentrationConfig,
    DiscretizationConfig,
    LoggingConfig,
    ValidationConfig,
    VerifierConfig,
    concentration_config,
    discretization_config,
    logging_config,
    validation_config,
    verifier_config,
)

__all__ = [
    "ConcentrationConfig",
    "DiscretizationConfig",
    "LoggingConfig",
    "ValidationConfig",
    "VerifierConfig",
    "concentration_config",
    "discretization_config",
    "logging_config",
    "validation_config",
    "verifier_config",
]
