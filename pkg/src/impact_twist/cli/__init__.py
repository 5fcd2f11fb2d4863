from .config import ExperimentConfig, load_config, parse_config
from .main import main
from .validation import ValidationReport, collect_violations, validate

__all__ = [
    "ExperimentConfig",
    "ValidationReport",
    "collect_violations",
    "load_config",
    "main",
    "parse_config",
    "validate",
]
