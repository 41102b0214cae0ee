from __future__ import annotations

"""Packaged scenario presets.

Use `path("desk.yaml")` to get a filesystem path to a preset shipped with the
package. `resolve()` also accepts bare names (`"desk"`) and plain file paths, which
is what the CLI passes through.
"""

from importlib.resources import files
from pathlib import Path

PRESETS = ("reference_6irs.yaml", "reference_3irs.yaml", "desk.yaml")


def path(name: str) -> str:
    """Return a filesystem path to the packaged preset (best effort)."""
    return str(files(__package__) / name)


def resolve(name_or_path: str) -> str:
    """A real file wins; otherwise look the name up among the packaged presets."""
    if Path(name_or_path).is_file():
        return name_or_path
    candidate = name_or_path if name_or_path.endswith(".yaml") else f"{name_or_path}.yaml"
    if candidate in PRESETS:
        return path(candidate)
    return name_or_path
