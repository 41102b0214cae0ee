# conftest for pytest
import os

import pytest


def pytest_collection_modifyitems(config, items):
    if os.getenv("IRSUAV_SLOW") == "1":
        return
    skip = pytest.mark.skip(reason="desk-scale run; set IRSUAV_SLOW=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)
