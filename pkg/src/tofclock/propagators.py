"""Time evolution engines.

The coupling commutes with the clock angular momentum, so the joint state
splits into independent channels: channel n sees a rectangular barrier
(well) of height n*hbar*omega on the coupling region.  Every engine here
acts channel-by-channel on the (N, num_points) amplitude array.
"""

from __future__ import annotations

import math
import time as _time
from dataclasses import dataclass, field

import numpy as np
import scipy.fft as sfft

from .core import (
    ChannelState,
    ClockSpec,
    ExperimentConfig,
    RegionSpec,
    init_gaussian,
    product_state,
    validate_regime,
    RegimeReport,
)


class PropagationError(RuntimeError):
    pass


class NormDriftError(PropagationError):
    """Total norm drifted beyond tolerance: grid or step misconfiguration."""


class BoundaryLeakError(PropagationError):
    """Significant amplitude reached the periodic grid edges (wraparound)."""


class CollisionUnfinishedError(PropagationError):
    """Region occupancy still above tolerance at t_final."""


@dataclass(frozen=True)
class ChannelPotential:
    """Rectangular barrier (n > 0) or well (n < 0) seen by channel n."""

    n: int
    height: float
    region: RegionSpec


def channel_potential(
    n: int, clock: ClockSpec, region: RegionSpec, hbar: float = 1.0
) -> ChannelPotential:
    if abs(n) > clock.j:
        raise ValueError(f"|n|={abs(n)} exceeds clock half-width j={clock.j}")
    return ChannelPotential(n=n, height=n * hbar * clock.omega, region=region)


def kinetic_step(
    state: ChannelState,
    dt: float,
    m: float = 1.0,
    hbar: float = 1.0,
    workers: int = 1,
) -> ChannelState:
    """Exact free flight for duration dt, channel by channel in Fourier space."""
    if dt == 0:
        return state.copy()
    phase = np.exp(-0.5j * hbar * state.grid.k**2 * dt / m)
    amps = sfft.fft(state.amplitudes, axis=-1, workers=workers)
    amps *= phase
    amps = sfft.ifft(amps, axis=-1, workers=workers)
    return ChannelState(state.clock, state.grid, amps)


def coupling_phase_step(
    state: ChannelState, duration: float, region: RegionSpec
) -> ChannelState:
    """Coupling applied for `duration`: channel n picks up exp(-i n omega dur)
    on grid points inside the region; elsewhere nothing happens.  Per-channel
    norms are exactly preserved (pure phase)."""
    mask = state.grid.region_mask(region)
    phases = np.exp(-1j * state.clock.modes * state.clock.omega * duration)
    amps = state.amplitudes.copy()
    amps[:, mask] *= phases[:, None]
    return ChannelState(state.clock, state.grid, amps)


@dataclass(frozen=True)
class DiagnosticSample:
    t: float
    norm: float
    region_mass: float
    boundary_mass: float


@dataclass
class Trajectory:
    final_state: ChannelState
    diagnostics: list[DiagnosticSample] = field(default_factory=list)


def _initial_state(config: ExperimentConfig) -> ChannelState:
    psi = init_gaussian(config.packet, config.grid, config.physical.hbar)
    return product_state(psi, config.clock, config.grid)


def _check_guards(config: ExperimentConfig, state: ChannelState, t: float) -> DiagnosticSample:
    norm = state.norm()
    sample = DiagnosticSample(
        t=t,
        norm=norm,
        region_mass=state.region_mass(config.region),
        boundary_mass=state.boundary_mass(),
    )
    if abs(norm - 1.0) > 1e-8:
        raise NormDriftError(f"norm drift {norm - 1.0:.3e} at t={t:.6g}")
    if sample.boundary_mass > config.boundary_mass_tol:
        raise BoundaryLeakError(
            f"boundary occupancy {sample.boundary_mass:.3e} at t={t:.6g}"
        )
    return sample


def evolve_continuous(
    config: ExperimentConfig,
    initial_state: ChannelState | None = None,
    workers: int = 1,
) -> Trajectory:
    """Strang-split evolution of the continuously coupled system.

    Per step of size dt: half coupling phase, exact kinetic step, half
    coupling phase; second order in dt.  Adjacent half phases between steps
    are merged into full phases.
    """
    state = initial_state.copy() if initial_state is not None else _initial_state(config)
    m, hbar = config.physical.m, config.physical.hbar
    grid, clock, region = config.grid, config.clock, config.region

    n_steps = max(1, math.ceil(config.t_final / config.dt - 1e-12))
    dt = config.t_final / n_steps

    mask = grid.region_mask(region)
    half = np.exp(-0.5j * clock.modes * clock.omega * dt)[:, None]
    full = half * half
    kin = np.exp(-0.5j * hbar * grid.k**2 * dt / m)

    check_every = max(1, n_steps // max(1, config.snapshots))
    diagnostics = [_check_guards(config, state, 0.0)]

    amps = state.amplitudes.copy()
    amps[:, mask] *= half
    for step in range(1, n_steps + 1):
        amps = sfft.fft(amps, axis=-1, workers=workers)
        amps *= kin
        amps = sfft.ifft(amps, axis=-1, workers=workers)
        last = step == n_steps
        amps[:, mask] *= half if last else full
        if last or step % check_every == 0:
            # mid-run samples carry the next step's leading half phase, which
            # does not affect any of the |.|^2 diagnostics
            probe = ChannelState(clock, grid, amps)
            diagnostics.append(_check_guards(config, probe, step * dt))
    state = ChannelState(clock, grid, amps)
    return Trajectory(final_state=state, diagnostics=diagnostics)


def evolve_kicked(
    config: ExperimentConfig,
    initial_state: ChannelState | None = None,
    workers: int = 1,
) -> Trajectory:
    """Kicked evolution: exact free flights of duration T separated by
    instantaneous coupling kicks at t = T, 2T, ... (or also at t = 0 with
    kick_at_zero), plus a final partial free flight up to t_final.

    No splitting error: the inter-kick Hamiltonian is purely kinetic.
    """
    schedule = config.kick_schedule
    if schedule is None:
        raise ValueError("kicked evolution requires a kick schedule")
    state = initial_state.copy() if initial_state is not None else _initial_state(config)
    m, hbar = config.physical.m, config.physical.hbar
    T = schedule.period

    diagnostics = [_check_guards(config, state, 0.0)]
    if config.kick_at_zero:
        state = coupling_phase_step(state, T, config.region)
    for k in range(1, schedule.n_kicks + 1):
        state = kinetic_step(state, T, m, hbar, workers)
        state = coupling_phase_step(state, T, config.region)
        diagnostics.append(_check_guards(config, state, k * T))
    remainder = config.t_final - schedule.n_kicks * T
    if remainder > 1e-12 * config.t_final:
        state = kinetic_step(state, remainder, m, hbar, workers)
        diagnostics.append(_check_guards(config, state, config.t_final))
    return Trajectory(final_state=state, diagnostics=diagnostics)


@dataclass
class RunResult:
    """Outcome of a full experiment: final state plus diagnostics.

    For mode 'ideal-reference' there is no propagation; `ideal` carries the
    closed-form dwell-time distribution and `final_state` is None.
    """

    config: ExperimentConfig
    regime: RegimeReport
    mode: str
    final_state: ChannelState | None
    diagnostics: list[DiagnosticSample]
    initial_channel_norms: np.ndarray | None
    final_channel_norms: np.ndarray | None
    wall_time: float
    ideal: object | None = None

    @property
    def norm_drift(self) -> float:
        if not self.diagnostics:
            return 0.0
        return max(abs(s.norm - 1.0) for s in self.diagnostics)

    @property
    def max_channel_drift(self) -> float:
        if self.initial_channel_norms is None:
            return 0.0
        return float(
            np.max(np.abs(self.final_channel_norms - self.initial_channel_norms))
        )

    @property
    def region_mass_final(self) -> float:
        return self.diagnostics[-1].region_mass if self.diagnostics else 0.0

    @property
    def boundary_mass_final(self) -> float:
        return self.diagnostics[-1].boundary_mass if self.diagnostics else 0.0


def run_experiment(
    config: ExperimentConfig,
    workers: int = 1,
    theta_points: int = 1024,
    check_collision: bool = True,
) -> RunResult:
    """Dispatch to the configured engine and collect diagnostics.

    Raises CollisionUnfinishedError if the region occupancy at t_final is
    above config.region_mass_tol (the collision is not over and clock
    readings would still be accruing).
    """
    regime = validate_regime(config)
    t0 = _time.perf_counter()

    if config.mode == "ideal-reference":
        from . import oracles  # local import: oracles depends on analysis

        times = ideal_time_grid(config.clock, theta_points)
        dist = oracles.ideal_dwell(
            config.packet, config.region, config.physical.m, times,
            hbar=config.physical.hbar,
        )
        return RunResult(
            config=config, regime=regime, mode=config.mode,
            final_state=None, diagnostics=[],
            initial_channel_norms=None, final_channel_norms=None,
            wall_time=_time.perf_counter() - t0, ideal=dist,
        )

    initial = _initial_state(config)
    init_norms = initial.channel_norms()
    if config.mode == "continuous":
        traj = evolve_continuous(config, initial, workers)
    else:
        traj = evolve_kicked(config, initial, workers)
    wall = _time.perf_counter() - t0

    result = RunResult(
        config=config, regime=regime, mode=config.mode,
        final_state=traj.final_state, diagnostics=traj.diagnostics,
        initial_channel_norms=init_norms,
        final_channel_norms=traj.final_state.channel_norms(),
        wall_time=wall,
    )
    if check_collision and result.region_mass_final > config.region_mass_tol:
        raise CollisionUnfinishedError(
            f"region occupancy {result.region_mass_final:.3e} at t_final="
            f"{config.t_final:g} exceeds tolerance {config.region_mass_tol:.1e}"
        )
    return result


def ideal_time_grid(clock: ClockSpec, theta_points: int) -> np.ndarray:
    """Closed uniform time grid [0, 2*pi/omega] shared by all distributions."""
    return np.linspace(0.0, clock.period, theta_points + 1)
