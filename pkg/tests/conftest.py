import os

os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")

import pytest  # noqa: E402

from coenroll.enrollment import filter_in_person  # noqa: E402
from coenroll.synthgen import generate, load_config  # noqa: E402

PINNED = "utd-like-2k"


@pytest.fixture(scope="session")
def pinned_raw():
    return generate(load_config(PINNED))


@pytest.fixture(scope="session")
def pinned(pinned_raw):
    return filter_in_person(pinned_raw)
