from .store import RunStore

__all__ = ["RunStore"]
