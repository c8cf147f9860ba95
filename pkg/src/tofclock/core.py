"""Physical parameter records, grids, clock kinematics and regime checks.

Atomic units throughout (hbar = 1 by default, but kept as a parameter so
dimensional sanity checks remain possible).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np


@dataclass(frozen=True)
class PhysicalConfig:
    """Particle mass and Planck constant, both in atomic units."""

    m: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if self.m <= 0:
            raise ValueError(f"mass must be positive, got {self.m}")
        if self.hbar <= 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")


@dataclass(frozen=True)
class RegionSpec:
    """Interval on which the particle-clock coupling is active."""

    x_left: float
    x_right: float

    def __post_init__(self):
        if not self.x_right > self.x_left:
            raise ValueError(
                f"degenerate region: x_right={self.x_right} <= x_left={self.x_left}"
            )

    @property
    def width(self) -> float:
        return self.x_right - self.x_left


@dataclass(frozen=True)
class ClockSpec:
    """Rotor clock with angular frequency omega and mode half-width j.

    The hand is built from the 2j+1 angular-momentum modes n = -j..j; the
    resolution tau = 2*pi/(N*omega) is the rotation time that makes two
    successive hand states orthogonal.
    """

    omega: float
    j: int

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if self.j < 0 or int(self.j) != self.j:
            raise ValueError(f"j must be a nonnegative integer, got {self.j}")

    @property
    def n_modes(self) -> int:
        return 2 * self.j + 1

    @property
    def tau(self) -> float:
        return 2.0 * math.pi / (self.n_modes * self.omega)

    @property
    def period(self) -> float:
        """Maximum unambiguous time reading, 2*pi/omega."""
        return 2.0 * math.pi / self.omega

    @cached_property
    def modes(self) -> np.ndarray:
        return np.arange(-self.j, self.j + 1)


@dataclass(frozen=True)
class WavepacketSpec:
    """Minimum-uncertainty Gaussian packet.

    sigma is the position standard deviation, so the momentum spread is
    hbar/(2*sigma) and Delta_x * Delta_p = hbar/2.
    """

    sigma: float
    x0: float
    p0: float

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")

    def momentum_std(self, hbar: float = 1.0) -> float:
        return 0.5 * hbar / self.sigma

    def negative_momentum_weight(self, hbar: float = 1.0) -> float:
        """Mass of the momentum density below p = 0."""
        sp = self.momentum_std(hbar)
        return 0.5 * math.erfc(self.p0 / (math.sqrt(2.0) * sp))


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform periodic grid with the matching discrete Fourier wavenumbers.

    Wavenumbers follow FFT ordering: zero first, then positive, then
    negative, spanning [-pi/dx, pi/dx).
    """

    x_min: float
    x_max: float
    num_points: int

    def __post_init__(self):
        if not self.x_max > self.x_min:
            raise ValueError(
                f"degenerate interval: x_max={self.x_max} <= x_min={self.x_min}"
            )
        if not _is_power_of_two(self.num_points) or self.num_points < 8:
            raise ValueError(
                f"num_points must be a power of two >= 8, got {self.num_points}"
            )

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.num_points

    @cached_property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.num_points)

    @cached_property
    def k(self) -> np.ndarray:
        return 2.0 * math.pi * np.fft.fftfreq(self.num_points, d=self.dx)

    def region_mask(self, region: RegionSpec) -> np.ndarray:
        """Grid points belonging to the coupling region (closed interval)."""
        return (self.x >= region.x_left) & (self.x <= region.x_right)


def build_grid(x_min: float, x_max: float, num_points: int) -> SpatialGrid:
    return SpatialGrid(x_min, x_max, num_points)


@dataclass
class ChannelState:
    """Joint particle-clock state as one spatial amplitude per clock mode.

    The represented state is sum_n psi_n(x) u_n(theta) with
    u_n(theta) = exp(i*n*theta)/sqrt(2*pi); amplitudes has shape
    (2j+1, num_points), row i holding channel n = i - j.
    """

    clock: ClockSpec
    grid: SpatialGrid
    amplitudes: np.ndarray

    def __post_init__(self):
        expected = (self.clock.n_modes, self.grid.num_points)
        if self.amplitudes.shape != expected:
            raise ValueError(
                f"amplitudes shape {self.amplitudes.shape} != {expected}"
            )

    def channel_norms(self) -> np.ndarray:
        return np.sum(np.abs(self.amplitudes) ** 2, axis=1) * self.grid.dx

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2)) * self.grid.dx

    def region_mass(self, region: RegionSpec) -> float:
        mask = self.grid.region_mask(region)
        return float(np.sum(np.abs(self.amplitudes[:, mask]) ** 2)) * self.grid.dx

    def boundary_mass(self, fraction: float = 0.01) -> float:
        """Mass in the outermost `fraction` of the grid at each edge."""
        n_edge = max(1, int(round(fraction * self.grid.num_points)))
        a = self.amplitudes
        edge = np.sum(np.abs(a[:, :n_edge]) ** 2) + np.sum(np.abs(a[:, -n_edge:]) ** 2)
        return float(edge) * self.grid.dx

    def copy(self) -> "ChannelState":
        return ChannelState(self.clock, self.grid, self.amplitudes.copy())


def init_gaussian(
    spec: WavepacketSpec,
    grid: SpatialGrid,
    hbar: float = 1.0,
    support_margin: float = 8.0,
) -> np.ndarray:
    """Normalized Gaussian amplitude exp(-(x-x0)^2/(4 sigma^2) + i p0 x / hbar).

    Normalization is discrete: sum |psi|^2 dx = 1.
    """
    if spec.x0 - grid.x_min <= support_margin * spec.sigma:
        raise ValueError(
            f"packet too close to left grid edge: x0={spec.x0}, "
            f"x_min={grid.x_min}, sigma={spec.sigma}"
        )
    if grid.x_max - spec.x0 <= support_margin * spec.sigma:
        raise ValueError(
            f"packet too close to right grid edge: x0={spec.x0}, "
            f"x_max={grid.x_max}, sigma={spec.sigma}"
        )
    x = grid.x
    psi = np.exp(
        -((x - spec.x0) ** 2) / (4.0 * spec.sigma**2) + 1j * spec.p0 * x / hbar
    )
    psi /= math.sqrt(np.sum(np.abs(psi) ** 2) * grid.dx)
    return psi


def init_clock_hand(clock: ClockSpec) -> np.ndarray:
    """Uniform channel weights 1/sqrt(N) for n = -j..j.

    The implied angular density is the Fejer-type kernel
    |sum_n exp(i n theta)|^2 / (2 pi N), peaked at theta = 0.
    """
    n = clock.n_modes
    return np.full(n, 1.0 / math.sqrt(n))


def product_state(
    psi: np.ndarray, clock: ClockSpec, grid: SpatialGrid
) -> ChannelState:
    """Initial product state: spatial packet times the clock hand."""
    weights = init_clock_hand(clock).astype(complex)
    return ChannelState(clock, grid, np.outer(weights, psi))


def classical_tof(d: float, p: float, m: float) -> float:
    """Classical traversal time m*d/p of a region of length d."""
    if p <= 0:
        raise ValueError(f"momentum must be positive, got {p}")
    return m * d / p


def clock_resolution(clock: ClockSpec) -> float:
    return clock.tau


def modular_phase(
    n: int, clock: ClockSpec, T: float, hbar: float = 1.0
) -> tuple[float, float]:
    """Residual kick phase nu_n in [0, 2*pi) and its energy scale.

    The kick operator multiplies mode n by exp(-i*T*omega*n); only the
    residue of hbar*omega*n modulo 2*pi*hbar/T perturbs the particle.
    """
    if T <= 0:
        raise ValueError(f"kick period must be positive, got {T}")
    period_energy = 2.0 * math.pi * hbar / T
    energy_scale = (hbar * clock.omega * n) % period_energy
    nu = energy_scale * T / hbar
    return nu, energy_scale


MODES = ("continuous", "kicked", "ideal-reference")
PLACEMENTS = ("outside", "inside")


@dataclass(frozen=True)
class KickSchedule:
    """Kick instants t_k = k*T for k = 1..floor(t_final/T)."""

    period: float
    t_final: float

    def __post_init__(self):
        if not 0 < self.period <= self.t_final:
            raise ValueError(
                f"need 0 < T <= t_final, got T={self.period}, t_final={self.t_final}"
            )

    @property
    def n_kicks(self) -> int:
        return int(math.floor(self.t_final / self.period + 1e-12))

    @property
    def kick_times(self) -> np.ndarray:
        return self.period * np.arange(1, self.n_kicks + 1)


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of a single time-of-flight experiment."""

    physical: PhysicalConfig
    region: RegionSpec
    clock: ClockSpec
    packet: WavepacketSpec
    grid: SpatialGrid
    mode: str
    t_final: float
    placement: str = "outside"
    dt: float | None = None
    kick_period: float | None = None
    kick_at_zero: bool = False
    neg_momentum_threshold: float = 1e-6
    dominance_factor: float = 10.0
    region_mass_tol: float = 1e-4
    boundary_mass_tol: float = 1e-4
    snapshots: int = 20

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.placement not in PLACEMENTS:
            raise ValueError(
                f"placement must be one of {PLACEMENTS}, got {self.placement!r}"
            )
        if self.t_final <= 0:
            raise ValueError(f"t_final must be positive, got {self.t_final}")
        if self.region.x_left < self.grid.x_min or self.region.x_right > self.grid.x_max:
            raise ValueError("coupling region must lie inside the spatial grid")
        if self.mode == "kicked":
            if self.kick_period is None:
                raise ValueError("kicked mode requires kick_period")
            KickSchedule(self.kick_period, self.t_final)  # validates
        if self.placement == "outside" and self.packet.p0 > 0:
            if not self.packet.x0 < self.region.x_left:
                raise ValueError(
                    "placement='outside' with p0 > 0 requires x0 < x_left"
                )
        if self.placement == "inside":
            if not self.region.x_left < self.packet.x0 < self.region.x_right:
                raise ValueError("placement='inside' requires x0 inside the region")
        w = self.packet.negative_momentum_weight(self.physical.hbar)
        if w > self.neg_momentum_threshold:
            raise ValueError(
                f"negative-momentum weight {w:.3e} exceeds threshold "
                f"{self.neg_momentum_threshold:.3e}"
            )
        if self.dt is None:
            tf = classical_tof(self.region.width, self.packet.p0, self.physical.m)
            object.__setattr__(self, "dt", min(self.clock.tau, tf) / 200.0)
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")

    @property
    def kick_schedule(self) -> KickSchedule | None:
        if self.kick_period is None:
            return None
        return KickSchedule(self.kick_period, self.t_final)

    @property
    def classical_time(self) -> float:
        return classical_tof(self.region.width, self.packet.p0, self.physical.m)


@dataclass(frozen=True)
class RegimeReport:
    """Pure report on the validity conditions of the clock configuration.

    Verdicts use `dominance_factor` wherever a strict inequality stands in
    for "much greater than"; the raw ratios are always included so callers
    can apply their own policy.
    """

    energy: float
    resolution_scale: float               # pi*hbar/tau
    continuous_ok: bool
    dominance_factor: float
    classical_time: float
    clock_period: float
    max_time_ok: bool                # classical tof below 2*pi/omega
    degenerate_clock: bool           # j == 0: single mode, measures nothing
    kick_window: tuple[float, float] | None
    kick_period: float | None
    kick_in_window: bool | None
    max_modular_energy: float | None  # max over n of the kick residue scale
    kicked_ok: bool | None


def validate_regime(config: ExperimentConfig) -> RegimeReport:
    """Evaluate the continuous and kicked validity conditions.

    Report-only: callers decide whether a violated condition warrants a
    warning or an abort (running a clock outside its regime is a valid
    experiment).
    """
    phys = config.physical
    clock = config.clock
    energy = config.packet.p0**2 / (2.0 * phys.m)
    resolution_scale = math.pi * phys.hbar / clock.tau
    factor = config.dominance_factor
    continuous_ok = energy >= factor * resolution_scale
    t_cl = config.classical_time
    period = clock.period
    degenerate = clock.j == 0

    kick_window = None
    if not degenerate:
        lower = clock.n_modes * clock.tau / clock.j
        kick_window = (lower, t_cl)

    T = config.kick_period
    kick_in_window = None
    max_mod = None
    kicked_ok = None
    if T is not None:
        if kick_window is not None:
            kick_in_window = kick_window[0] < T < kick_window[1]
        scales = [
            modular_phase(int(n), clock, T, phys.hbar)[1] for n in clock.modes
        ]
        max_mod = max(scales)
        kicked_ok = energy >= factor * max_mod if max_mod > 0 else True

    return RegimeReport(
        energy=energy,
        resolution_scale=resolution_scale,
        continuous_ok=continuous_ok,
        dominance_factor=factor,
        classical_time=t_cl,
        clock_period=period,
        max_time_ok=t_cl < period,
        degenerate_clock=degenerate,
        kick_window=kick_window,
        kick_period=T,
        kick_in_window=kick_in_window,
        max_modular_energy=max_mod,
        kicked_ok=kicked_ok,
    )
