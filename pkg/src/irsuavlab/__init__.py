from __future__ import annotations

# Public package metadata
from .version import __version__  # re-export

# Public API
from .lab import Lab, LabStatus
from .api import compare, evaluate, export, train, validate
from .config import ExperimentConfig, load_config

__all__ = [
    "__version__",
    "ExperimentConfig",
    "Lab",
    "LabStatus",
    "compare",
    "evaluate",
    "export",
    "load_config",
    "train",
    "validate",
]
