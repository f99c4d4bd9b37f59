import json
import os
from pathlib import Path

import pytest

from meanlab import store

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def oracle():
    return json.loads((DATA / "oracle_values.json").read_text())


@pytest.fixture(scope="session")
def cache_dir(tmp_path_factory):
    env = os.environ.get("MEANLAB_CACHE")
    return Path(env) if env else tmp_path_factory.mktemp("meanlab_cache")


@pytest.fixture(scope="session")
def zeros_big(cache_dir):
    """Certified zeros to 20100: enough for every T = 1e4 experiment."""
    return store.zero_table(20100, cache_dir=cache_dir)


@pytest.fixture(scope="session")
def zeros_small():
    from meanlab.zeros import locate_zeros
    return locate_zeros(1000.0)


@pytest.fixture(scope="session")
def tables():
    return store.arith_tables(10**6 + 10)
