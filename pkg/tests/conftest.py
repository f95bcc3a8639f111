"""Shared fixtures: the heavyweight sweep runs are computed once per
session and reused by both the trend tests and the acceptance suite."""

import time

import pytest

import fairenc as fe

TREND_SEEDS = tuple(range(20))
SIGMA_GRID = (0.0, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 1.0)
M_GRID = (0.0, 1.0, 10.0, 100.0, 1000.0, 10_000.0)


class TimedRecords:
    def __init__(self, records, elapsed):
        self.records = records
        self.elapsed = elapsed

    def at(self, reg):
        return [r for r in self.records if r.reg_param == reg]


def _run(config) -> TimedRecords:
    start = time.monotonic()
    records = fe.run_sweep(config)
    return TimedRecords(records, time.monotonic() - start)


@pytest.fixture(scope="session")
def reducible_m_sweep() -> TimedRecords:
    return _run(fe.SweepConfig(
        scenario="reducible", m_grid=M_GRID, sigma_grid=(),
        models=("logistic",), seeds=TREND_SEEDS,
    ))


@pytest.fixture(scope="session")
def irreducible_sigma_sweep() -> TimedRecords:
    return _run(fe.SweepConfig(
        scenario="irreducible", m_grid=(), sigma_grid=SIGMA_GRID,
        models=("logistic",), seeds=TREND_SEEDS,
    ))


@pytest.fixture(scope="session")
def intersectional_runs() -> tuple[TimedRecords, TimedRecords]:
    crossed = _run(fe.SweepConfig(
        scenario="intersectional", m_grid=(0.0,), sigma_grid=(),
        models=("logistic",), seeds=TREND_SEEDS,
    ))
    marginal = _run(fe.SweepConfig(
        scenario="intersectional", protected="origin", reference="o1",
        protected_group="o0", m_grid=(0.0,), sigma_grid=(),
        models=("logistic",), seeds=TREND_SEEDS,
    ))
    return crossed, marginal
