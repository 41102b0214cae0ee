"""Plain-text network checkpoints.

Layout of a ``.net`` file:

    {"format": "irsuavlab.network", "version": 1, "seed": 7, "layers": [[3, 64, "relu"], ...]}
    <weight row 0 of layer 0>
    ...
    <bias of layer 0>
    <weight rows of layer 1>
    ...

Values are written with 17 significant digits, so a save/load cycle is bit-exact.
An agent checkpoint is a directory holding ``agent.json`` plus one ``.net`` per network.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import jsonschema
import numpy as np

from irsuavlab.exceptions import CheckpointError, CheckpointMismatchError
from irsuavlab.neural import LayerSpec, NetworkParams

FORMAT_ID = "irsuavlab.network"
FORMAT_VERSION = 1
MANIFEST = "agent.json"

HEADER_SCHEMA: Dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "format": {"const": FORMAT_ID},
        "version": {"const": FORMAT_VERSION},
        "seed": {"type": ["integer", "null"]},
        "layers": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "array",
                "prefixItems": [
                    {"type": "integer", "minimum": 1},
                    {"type": "integer", "minimum": 1},
                    {"enum": ["relu", "tanh", "identity"]},
                ],
                "minItems": 3,
                "maxItems": 3,
            },
        },
    },
    "required": ["format", "version", "layers"],
    "additionalProperties": False,
}

MANIFEST_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "properties": {
        "algo": {"enum": ["dqn", "ddpg"]},
        "networks": {"type": "array", "items": {"type": "string", "pattern": "^[a-z_]+$"}},
        "steps": {"type": "integer", "minimum": 0},
        "episode": {"type": "integer", "minimum": 0},
    },
    "required": ["algo", "networks", "steps"],
}

PathLike = Union[str, "os.PathLike[str]"]


def _row(values: np.ndarray) -> str:
    return " ".join(format(float(v), ".17g") for v in values)


def dump_network(params: NetworkParams) -> str:
    header = {
        "format": FORMAT_ID,
        "version": FORMAT_VERSION,
        "seed": params.seed,
        "layers": [[s.input_width, s.output_width, s.activation] for s in params.specs],
    }
    lines = [json.dumps(header)]
    for w, b in zip(params.weights, params.biases):
        lines.extend(_row(r) for r in w)
        lines.append(_row(b))
    return "\n".join(lines) + "\n"


def parse_network(text: str, *, source: str = "<text>") -> NetworkParams:
    lines = text.splitlines()
    if not lines:
        raise CheckpointError(f"{source}: empty checkpoint")
    try:
        header = json.loads(lines[0])
        jsonschema.validate(header, HEADER_SCHEMA)
    except (json.JSONDecodeError, jsonschema.ValidationError) as exc:
        raise CheckpointError(f"{source}: bad header: {exc}") from exc

    specs = tuple(LayerSpec(int(i), int(o), a) for i, o, a in header["layers"])
    body = iter(lines[1:])
    weights: List[np.ndarray] = []
    biases: List[np.ndarray] = []
    try:
        for spec in specs:
            rows = [np.array(next(body).split(), dtype=np.float64) for _ in range(spec.output_width)]
            weights.append(np.vstack(rows))
            biases.append(np.array(next(body).split(), dtype=np.float64))
    except StopIteration as exc:
        raise CheckpointError(f"{source}: truncated weights") from exc
    except ValueError as exc:
        raise CheckpointError(f"{source}: malformed number: {exc}") from exc
    if any(line.strip() for line in body):
        raise CheckpointError(f"{source}: trailing data after the last layer")
    try:
        return NetworkParams(specs=specs, weights=weights, biases=biases, seed=header.get("seed"))
    except ValueError as exc:
        raise CheckpointError(f"{source}: {exc}") from exc


def save_network(params: NetworkParams, path: PathLike) -> None:
    Path(path).write_text(dump_network(params), encoding="utf-8")


def load_network(path: PathLike) -> NetworkParams:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise CheckpointError(f"cannot read {p}: {exc}") from exc
    return parse_network(text, source=str(p))


# ----------------------------- Agent directories -----------------------------
def save_agent(
    directory: PathLike,
    algo: str,
    networks: Dict[str, NetworkParams],
    *,
    steps: int,
    episode: Optional[int] = None,
) -> Path:
    root = Path(directory)
    root.mkdir(parents=True, exist_ok=True)
    for name, params in networks.items():
        save_network(params, root / f"{name}.net")
    manifest: Dict[str, Any] = {"algo": algo, "networks": sorted(networks), "steps": steps}
    if episode is not None:
        manifest["episode"] = episode
    (root / MANIFEST).write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return root


def load_agent(directory: PathLike) -> Tuple[str, Dict[str, NetworkParams], int]:
    """Returns (algo, networks by name, steps)."""
    root = Path(directory)
    try:
        manifest = json.loads((root / MANIFEST).read_text(encoding="utf-8"))
        jsonschema.validate(manifest, MANIFEST_SCHEMA)
    except OSError as exc:
        raise CheckpointError(f"{root} is not an agent checkpoint: {exc}") from exc
    except (json.JSONDecodeError, jsonschema.ValidationError) as exc:
        raise CheckpointError(f"{root / MANIFEST}: {exc}") from exc
    nets = {name: load_network(root / f"{name}.net") for name in manifest["networks"]}
    return manifest["algo"], nets, int(manifest["steps"])


def check_specs(expected: Dict[str, NetworkParams], loaded: Dict[str, NetworkParams]) -> None:
    """Raise `CheckpointMismatchError` unless every network matches the configured layers."""
    if set(expected) != set(loaded):
        raise CheckpointMismatchError(
            f"checkpoint holds networks {sorted(loaded)}, configuration expects {sorted(expected)}"
        )
    for name, params in expected.items():
        if loaded[name].specs != params.specs:
            got = [(s.input_width, s.output_width, s.activation) for s in loaded[name].specs]
            want = [(s.input_width, s.output_width, s.activation) for s in params.specs]
            raise CheckpointMismatchError(f"{name}: checkpoint layers {got} != configured {want}")
