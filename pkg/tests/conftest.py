import functools
import json
import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from qmh import make_context
from qmh.experiments import builtin_experiment, convergence_table, imaginary_zero_census, limit_zeros

DATA = Path(__file__).parent / "data"

settings.register_profile("qmh", deadline=None, suppress_health_check=[HealthCheck.too_slow],
                          derandomize=True)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "qmh"))

# filled by test_acceptance.py, printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(scope="session")
def ctx():
    return make_context(256)


@pytest.fixture(scope="session")
def published():
    with open(DATA / "published_tables.json", encoding="utf-8") as fh:
        return json.load(fh)


# slow computations shared across modules (256 bits)

@functools.lru_cache(maxsize=None)
def cached_limit_zeros(exp_id):
    return tuple(limit_zeros(builtin_experiment(exp_id), make_context(256)))


@functools.lru_cache(maxsize=None)
def cached_table(exp_id, zero_indices=None):
    """Convergence rows for all limit zeros (``zero_indices=None`` uses the config default)."""
    cfg = builtin_experiment(exp_id)
    return tuple(convergence_table(cfg, zero_indices, make_context(256), limit=list(cached_limit_zeros(exp_id))))


@functools.lru_cache(maxsize=None)
def cached_census(alpha, q):
    return imaginary_zero_census(alpha, q, None, make_context(256))


def published_complex(mp, pair):
    return mp.mpc(mp.mpf(pair[0]), mp.mpf(pair[1]))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
