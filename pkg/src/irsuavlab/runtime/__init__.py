from irsuavlab.runtime.engine import Engine
from irsuavlab.runtime.state import RngStreams, RunState

__all__ = ["Engine", "RngStreams", "RunState"]
