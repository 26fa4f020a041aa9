from pathlib import Path

import pytest

from ltlplan.optimal_run import run_cost, suffix_cost
from ltlplan.oracle import simulate_max_gap
from ltlplan.ts import load_ts_file

EXAMPLES = Path(__file__).resolve().parent.parent / "examples"


def assert_cost_identity(ts, lasso, pi, periods: int = 50):
    """run_cost, suffix_cost and a long finite simulation agree."""
    c = run_cost(ts, lasso, pi)
    assert c == suffix_cost(ts, lasso.suffix, pi)
    assert c == simulate_max_gap(ts, lasso.prefix, lasso.suffix, pi, periods)
    if lasso.cost is not None:
        assert c == lasso.cost
    return c


@pytest.fixture
def gather_upload_ts():
    return load_ts_file(EXAMPLES / "gather-upload.ts")


@pytest.fixture
def road_ts():
    return load_ts_file(EXAMPLES / "road-network.ts")
