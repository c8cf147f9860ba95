"""Clock-reading distributions and their statistics.

All angular densities are trigonometric polynomials of degree < N, so a
uniform grid with at least 2N samples represents them exactly; means and
masses are computed spectrally where exactness matters.

Time grids are closed: they include both t = 0 and t = 2*pi/omega (whose
density value wraps to the one at 0), so the trapezoid rule over the grid
equals the exact integral over the period.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .core import ChannelState, ClockSpec, RegionSpec

NEGATIVE_DENSITY_TOL = 1e-12


def overlap_matrix(state: ChannelState) -> np.ndarray:
    """Hermitian channel overlap matrix O[n, n'] = integral psi_n psi_n'* dx.

    This is the reduced clock density matrix in the mode basis: diagonal
    entries are the per-channel norms, the trace is the total norm.
    """
    a = state.amplitudes
    return (a @ a.conj().T) * state.grid.dx


def theta_distribution(
    state: ChannelState, theta_points: int = 1024
) -> tuple[np.ndarray, np.ndarray]:
    """Angular density of the clock, sampled on a closed grid [0, 2*pi].

    P(theta) = sum_{nn'} exp(i(n-n')theta) O[n,n'] / (2*pi); integrates to
    the state norm.  Requires theta_points >= 2N (Nyquist for the N-mode
    trigonometric polynomial).
    """
    n_modes = state.clock.n_modes
    if theta_points < 2 * n_modes:
        raise ValueError(
            f"theta_points={theta_points} undersamples the {n_modes}-mode "
            f"density; need at least {2 * n_modes}"
        )
    overlaps = overlap_matrix(state)
    theta = np.linspace(0.0, 2.0 * math.pi, theta_points + 1)
    phases = np.exp(1j * np.outer(theta, state.clock.modes))
    density = np.einsum("tm,mn,tn->t", phases, overlaps, phases.conj()).real
    density /= 2.0 * math.pi
    return theta, density


def hand_density(clock: ClockSpec, theta: np.ndarray) -> np.ndarray:
    """Fejer-type angular density of the freshly initialized hand."""
    n = clock.n_modes
    num = np.sin(0.5 * n * theta) ** 2
    den = np.sin(0.5 * theta) ** 2
    out = np.where(den > 1e-30, num / np.maximum(den, 1e-300), float(n * n))
    return out / (2.0 * math.pi * n)


@dataclass
class DistributionSeries:
    """Sampled time density with its cumulative distribution."""

    times: np.ndarray
    density: np.ndarray
    cdf: np.ndarray
    label: str = ""

    @property
    def total_mass(self) -> float:
        return float(self.cdf[-1])

    @classmethod
    def from_density(
        cls, times: np.ndarray, density: np.ndarray, label: str = ""
    ) -> "DistributionSeries":
        density = np.asarray(density, dtype=float)
        worst = density.min() if density.size else 0.0
        if worst < -NEGATIVE_DENSITY_TOL:
            raise ValueError(f"density significantly negative: min={worst:.3e}")
        density = np.clip(density, 0.0, None)
        cdf = cumulative(times, density)
        return cls(times=np.asarray(times, dtype=float), density=density,
                   cdf=cdf, label=label)


def cumulative(times: np.ndarray, density: np.ndarray) -> np.ndarray:
    """Trapezoid running integral of a density; starts at exactly 0."""
    return cumulative_trapezoid(density, times, initial=0.0)


def tof_distribution(
    theta: np.ndarray,
    theta_density: np.ndarray,
    clock: ClockSpec,
    label: str = "",
) -> DistributionSeries:
    """Rescale an angular density to time-of-flight via t = theta/omega.

    Times are reported modulo the clock period 2*pi/omega; mass is
    preserved exactly (the change of variables is linear).
    """
    times = theta / clock.omega
    density = clock.omega * np.asarray(theta_density)
    return DistributionSeries.from_density(times, density, label=label)


def state_tof_distribution(
    state: ChannelState, theta_points: int = 1024, label: str = ""
) -> DistributionSeries:
    theta, density = theta_distribution(state, theta_points)
    return tof_distribution(theta, density, state.clock, label=label)


def _fourier_coefficients(series: DistributionSeries) -> np.ndarray:
    # the closed grid duplicates t=0 at the end; drop it for the DFT
    samples = series.density[:-1]
    return np.fft.fft(samples) / samples.size


def mean_reading(
    series: DistributionSeries,
    window: tuple[float, float] | None = None,
) -> float:
    """Mean clock reading.

    Default (no window): circular-centered linear mean, computed spectrally
    so it is exact for the trigonometric-polynomial densities produced by
    `theta_distribution`.  The window of length one period is centered on
    the circular mean direction, which makes the estimate insensitive to
    hand-kernel wings wrapping through t = 0; the result may therefore be
    slightly negative for readings near zero.

    With a window (t_lo, t_hi): plain trapezoid mean of t over the window.
    """
    if window is not None:
        lo, hi = window
        mask = (series.times >= lo) & (series.times <= hi)
        if mask.sum() < 2:
            raise ValueError(f"window {window} contains too few samples")
        t = series.times[mask]
        p = series.density[mask]
        mass = np.trapezoid(p, t)
        if mass <= 0:
            raise ValueError(f"window {window} holds no probability mass")
        return float(np.trapezoid(t * p, t) / mass)

    period = float(series.times[-1])
    c = _fourier_coefficients(series)
    m = c.size
    mass = period * c[0].real
    if mass <= 0:
        raise ValueError("distribution carries no mass")
    mu = float(np.angle(c[-1]))  # direction of <exp(2*pi*i*t/period)>
    # linear mean of the centered angle phi = 2*pi*t/period - mu over
    # (-pi, pi]; integral of phi*exp(i*d*phi) over that window is
    # -2*pi*i*(-1)^d/d, so the correction below is exact for band-limited
    # densities (degree < m/2)
    deltas = np.fft.fftfreq(m, d=1.0 / m).astype(int)
    nz = deltas != 0
    d = deltas[nz]
    terms = c[nz] * np.exp(1j * d * mu) * (-1.0) ** d * (-1j) / d
    correction = period * terms.sum().real / mass
    mean_angle = mu + correction
    return mean_angle * period / (2.0 * math.pi)


def distribution_distance(
    a: DistributionSeries, b: DistributionSeries
) -> tuple[float, float]:
    """Kolmogorov-Smirnov-style sup |C_a - C_b| and L1 density distance."""
    if a.times.shape != b.times.shape or not np.allclose(
        a.times, b.times, rtol=0.0, atol=1e-12
    ):
        raise ValueError("distribution_distance requires identical time grids")
    sup_cdf = float(np.max(np.abs(a.cdf - b.cdf)))
    l1 = float(np.trapezoid(np.abs(a.density - b.density), a.times))
    return sup_cdf, l1


@dataclass
class TransmissionReport:
    """Per-channel and total masses left of, inside, and right of the region."""

    modes: np.ndarray
    left: np.ndarray
    inside: np.ndarray
    right: np.ndarray

    @property
    def total_left(self) -> float:
        return float(self.left.sum())

    @property
    def total_inside(self) -> float:
        return float(self.inside.sum())

    @property
    def total_right(self) -> float:
        return float(self.right.sum())


def transmission_report(
    state: ChannelState, region: RegionSpec
) -> TransmissionReport:
    x = state.grid.x
    dx = state.grid.dx
    p = np.abs(state.amplitudes) ** 2
    left = p[:, x < region.x_left].sum(axis=1) * dx
    inside = p[:, (x >= region.x_left) & (x <= region.x_right)].sum(axis=1) * dx
    right = p[:, x > region.x_right].sum(axis=1) * dx
    return TransmissionReport(
        modes=state.clock.modes.copy(), left=left, inside=inside, right=right
    )
