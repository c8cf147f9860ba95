import dataclasses
import time

import numpy as np
import pytest

import tofclock as tc
from tofclock import analysis, oracles
from tofclock.presets import get_preset
from tofclock.propagators import ideal_time_grid, run_experiment

ACCEPTANCE_GRID = tc.SpatialGrid(-250.0, 150.0, 2**12)


@pytest.fixture(scope="session")
def small_base():
    """Cheap but nontrivial scattering setup shared by fast tests."""
    return dict(
        physical=tc.PhysicalConfig(),
        region=tc.RegionSpec(-8.0, 8.0),
        clock=tc.ClockSpec(0.8, 8),
        packet=tc.WavepacketSpec(1.0, -15.0, 5.0),
        grid=tc.build_grid(-40.0, 40.0, 2**9),
        t_final=5.0,
        region_mass_tol=1.0,
        boundary_mass_tol=1.0,
    )


@pytest.fixture(scope="session")
def fig1_cont_run():
    cfg = dataclasses.replace(get_preset("fig1-continuous"), grid=ACCEPTANCE_GRID)
    t0 = time.perf_counter()
    result = run_experiment(cfg)
    wall = time.perf_counter() - t0
    return result, wall


@pytest.fixture(scope="session")
def fig1_cont_series(fig1_cont_run):
    result, _ = fig1_cont_run
    return analysis.state_tof_distribution(result.final_state, 1024,
                                           label="continuous")


@pytest.fixture(scope="session")
def fig1_kicked_run():
    cfg = dataclasses.replace(get_preset("fig1-kicked-T1"), grid=ACCEPTANCE_GRID,
                              boundary_mass_tol=0.05)
    return run_experiment(cfg)


@pytest.fixture(scope="session")
def fig1_kicked_series(fig1_kicked_run):
    return analysis.state_tof_distribution(fig1_kicked_run.final_state, 1024,
                                           label="kicked")


@pytest.fixture(scope="session")
def fig1_ideal_series():
    cfg = get_preset("fig1-continuous")
    times = ideal_time_grid(cfg.clock, 1024)
    return oracles.ideal_dwell(cfg.packet, cfg.region, cfg.physical.m, times)
