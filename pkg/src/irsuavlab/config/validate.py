"""Config lint helpers.

Advisory checks beyond pydantic validation, to surface settings that load fine but
probably do not do what was meant:
- `T` set (episodes end on energy, the horizon is not used)
- batch larger than the replay memory (learning would never start)
- very coarse phase quantization
- start position on the area border
- `epsilon` below 0.5 (it is the exploit probability, not the explore one)
- checkpoint interval longer than the run

These checks never mutate the document.
"""

from __future__ import annotations

from typing import Any, Dict, List


def _num(doc: Dict[str, Any], *keys: str) -> Any:
    for k in keys:
        if k in doc:
            return doc[k]
    return None


def validate_config_dict(doc: Dict[str, Any]) -> List[str]:
    warnings: List[str] = []

    def w(msg: str) -> None:
        warnings.append(msg)

    # 1) Horizon is informational only
    if _num(doc, "T", "horizon") is not None:
        w("T is ignored: episodes end when the energy budget is spent")

    # 2) Replay never fills a batch
    batch = _num(doc, "batch", "batch_size")
    memory = _num(doc, "m_max", "memory_size")
    if isinstance(batch, int) and isinstance(memory, int) and batch > memory:
        w(f"batch={batch} exceeds m_max={memory}; learning will never start")

    # 3) Coarse phases
    levels = _num(doc, "N_I", "phase_levels")
    if isinstance(levels, int) and 0 < levels < 4:
        w(f"N_I={levels} quantizes phases very coarsely")

    # 4) Start on the border
    x0 = _num(doc, "X_U0", "start_x")
    y0 = _num(doc, "Y_U0", "start_y")
    x_max = _num(doc, "X_max", "area_x") or 600.0
    y_max = _num(doc, "Y_max", "area_y") or 200.0
    for value, bound, name in ((x0, x_max, "X_U0"), (y0, y_max, "Y_U0")):
        if isinstance(value, (int, float)) and value in (0, bound):
            w(f"{name}={value} starts the UAV on the area border")

    # 5) Polarity reminder
    eps = _num(doc, "epsilon")
    if isinstance(eps, (int, float)) and eps < 0.5:
        w(f"epsilon={eps} is the exploit probability; DQN will act mostly at random")

    # 6) Checkpoint cadence
    every = _num(doc, "checkpoint_every")
    episodes = _num(doc, "N_eps", "episodes")
    if isinstance(every, int) and isinstance(episodes, int) and every > episodes:
        w(f"checkpoint_every={every} exceeds N_eps={episodes}; only the final checkpoint is written")

    return warnings
