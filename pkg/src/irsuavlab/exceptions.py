"""Exception hierarchy for irsuavlab.

Every error raised on purpose derives from `IrsUavError`, so callers (and the CLI)
can separate expected failures from bugs. Most also subclass the closest builtin so
plain `except ValueError` keeps working.
"""

from __future__ import annotations


class IrsUavError(Exception):
    """Base exception for simulator, agent and harness errors."""


class ConfigError(IrsUavError, ValueError):
    """Raised when a configuration file cannot be parsed or violates an invariant."""

    def __init__(self, message: str, *, key: str | None = None, line: int | None = None) -> None:
        prefix = ""
        if line is not None:
            prefix += f"line {line}: "
        if key is not None:
            prefix += f"{key}: "
        super().__init__(prefix + message)
        self.key = key
        self.line = line


class ChannelError(IrsUavError, ValueError):
    """Raised on mismatched channel lengths or phases of zero-magnitude entries."""


class EpisodeFinishedError(IrsUavError, RuntimeError):
    """Raised when stepping an episode whose energy is already exhausted."""


class NetworkShapeError(IrsUavError, ValueError):
    """Raised when layer widths, inputs or gradients do not chain."""


class NonFiniteError(IrsUavError, FloatingPointError):
    """Raised when a gradient or loss contains NaN/inf."""


class ReplayUnderflowError(IrsUavError, ValueError):
    """Raised when a mini-batch larger than the stored transitions is requested."""


class CheckpointError(IrsUavError):
    """Raised when a checkpoint file or directory is unreadable or malformed."""


class CheckpointMismatchError(CheckpointError):
    """Raised when checkpoint layer specs disagree with the configuration."""


class TrainingAbortedError(IrsUavError, RuntimeError):
    """Raised when training hits a non-finite loss; carries a diagnostic message."""


class RunDirectoryError(IrsUavError, FileNotFoundError):
    """Raised when a run directory lacks the metric files an export needs."""
