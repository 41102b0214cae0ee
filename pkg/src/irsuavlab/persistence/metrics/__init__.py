from .csv import EPISODE_FIELDS, STEP_FIELDS, MetricsWriter, format_value, iter_metrics, read_metrics, read_schema

__all__ = [
    "EPISODE_FIELDS",
    "STEP_FIELDS",
    "MetricsWriter",
    "format_value",
    "iter_metrics",
    "read_metrics",
    "read_schema",
]
