"""Test package marker so test utilities can be imported as `tests.*`."""

