"""Band distortion indices for the diffusion and reception stages.

Two scalar indices summarize how far a stage is from distortionless
(flat gain, constant delay) over an analysis band [w1, w2]:

* amplitude distortion q: spread max - min of the dB gain over the band;
* delay distortion r: spread max - min of the phase delay, normalized by
  the period of the lowest band frequency, (tau_max - tau_min) / T1.

Both stages have monotonically decreasing gain and phase delay, so the
band extremes sit at the band edges and the indices admit closed forms.
A generic grid-search evaluator is kept alongside as an independent
check and for arbitrary gain/delay curves.

The indices also have a two-parameter normal form: with w' = w / k_r
and lam = sqrt(x_r^2 k_r / (2 mu)), the four stage indices depend only
on (w1', w2', lam), and the diffusion indices are linear in lam.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .systems import (
    LOG10_E,
    DiffusionChannel,
    FrequencyBand,
    ParameterError,
    ReceptionSystem,
    _require,
    diffusion_gain_db,
    diffusion_phase_delay,
    reception_gain_db,
    reception_phase_delay,
)

__all__ = [
    "EvaluationError",
    "log_grid",
    "amplitude_distortion",
    "delay_distortion",
    "diffusion_amplitude_distortion",
    "diffusion_delay_distortion",
    "reception_amplitude_distortion",
    "reception_delay_distortion",
    "NormalizedBand",
    "normalize",
    "denormalize_distance",
    "diffusion_amplitude_distortion_normalized",
    "diffusion_delay_distortion_normalized",
    "reception_amplitude_distortion_normalized",
    "reception_delay_distortion_normalized",
    "delay_distortion_maxima",
    "DistortionReport",
    "channel_report",
    "grid_report",
]

DEFAULT_GRID_POINTS = 4096


class EvaluationError(RuntimeError):
    """A gain/delay curve returned a non-finite value during a grid scan."""

    def __init__(self, omega: float, value: float):
        self.omega = omega
        self.value = value
        super().__init__(f"non-finite curve value {value} at omega={omega}")


def log_grid(band: FrequencyBand, n_points: int = DEFAULT_GRID_POINTS) -> np.ndarray:
    """Log-spaced frequency grid over the band, endpoints included exactly."""
    _require(n_points >= 2, f"n_points must be >= 2, got {n_points}")
    grid = np.logspace(math.log10(band.omega1), math.log10(band.omega2),
                       n_points)
    # Pin the endpoints so band-edge extremes are sampled without rounding.
    grid[0] = band.omega1
    grid[-1] = band.omega2
    return grid


def _scan(fn: Callable, band: FrequencyBand, n_points: int) -> np.ndarray:
    grid = log_grid(band, n_points)
    values = np.asarray(fn(grid), dtype=float)
    if values.shape != grid.shape:  # scalar-only callables
        values = np.array([float(fn(w)) for w in grid])
    bad = ~np.isfinite(values)
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        raise EvaluationError(float(grid[i]), float(values[i]))
    return values


def amplitude_distortion(gain_db_fn: Callable, band: FrequencyBand,
                         n_points: int = DEFAULT_GRID_POINTS) -> float:
    """Grid estimate of the gain spread max - min over the band, in dB.

    Args:
        gain_db_fn: callable mapping omega (scalar or ndarray, rad/s) to
            gain in dB.
        band: analysis band.
        n_points: number of log-spaced samples (endpoints included).

    Raises:
        EvaluationError: if the curve is non-finite anywhere on the grid.
    """
    values = _scan(gain_db_fn, band, n_points)
    return float(np.max(values) - np.min(values))


def delay_distortion(phase_delay_fn: Callable, band: FrequencyBand,
                     n_points: int = DEFAULT_GRID_POINTS) -> float:
    """Grid estimate of the period-normalized delay spread over the band.

    Returns (max tau - min tau) / T1 with T1 = 2 pi / omega1, dimensionless.
    """
    values = _scan(phase_delay_fn, band, n_points)
    return float((np.max(values) - np.min(values)) / band.period)


# ---------------------------------------------------------------------------
# Closed forms (gain and delay are monotone, extremes at the band edges)
# ---------------------------------------------------------------------------

def diffusion_amplitude_distortion(ch: DiffusionChannel,
                                   band: FrequencyBand) -> float:
    """q of the diffusion stage: 20 sqrt(x_r^2/2mu) (sqrt w2 - sqrt w1) log10 e."""
    return (20.0 * math.sqrt(ch.x_r * ch.x_r / (2.0 * ch.mu))
            * (math.sqrt(band.omega2) - math.sqrt(band.omega1)) * LOG10_E)


def diffusion_delay_distortion(ch: DiffusionChannel,
                               band: FrequencyBand) -> float:
    """r of the diffusion stage: sqrt(x_r^2/2mu) (1/sqrt w1 - 1/sqrt w2) / T1."""
    spread = (math.sqrt(ch.x_r * ch.x_r / (2.0 * ch.mu))
              * (1.0 / math.sqrt(band.omega1) - 1.0 / math.sqrt(band.omega2)))
    return spread / band.period


def reception_amplitude_distortion(rs: ReceptionSystem,
                                   band: FrequencyBand) -> float:
    """q of the reception stage: 20 log10( |jw2 + k_r| / |jw1 + k_r| )."""
    return 20.0 * math.log10(math.hypot(band.omega2, rs.k_r)
                             / math.hypot(band.omega1, rs.k_r))


def reception_delay_distortion(rs: ReceptionSystem,
                               band: FrequencyBand) -> float:
    """r of the reception stage.

    (tau(w1) - tau(w2)) / T1 collapses to
    (arctan(w1/k_r) - (w1/w2) arctan(w2/k_r)) / (2 pi).
    """
    return (math.atan2(band.omega1, rs.k_r)
            - band.omega1 / band.omega2 * math.atan2(band.omega2, rs.k_r)
            ) / (2.0 * math.pi)


# ---------------------------------------------------------------------------
# Normal form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NormalizedBand:
    """Band in reception-corner units plus the diffusion scale lam.

    omega1p/omega2p are w1/k_r and w2/k_r; lam = sqrt(x_r^2 k_r / (2 mu))
    is dimensionless and carries the entire dependence on (mu, x_r, k_r)
    of the diffusion-stage indices.
    """

    omega1p: float
    omega2p: float
    lam: float

    def __post_init__(self) -> None:
        _require(math.isfinite(self.omega1p) and self.omega1p > 0.0,
                 f"omega1p must be finite and > 0, got {self.omega1p}")
        _require(math.isfinite(self.omega2p) and self.omega2p > self.omega1p,
                 f"omega2p must be finite and > omega1p={self.omega1p}, "
                 f"got {self.omega2p}")
        _require(math.isfinite(self.lam) and self.lam >= 0.0,
                 f"lam must be finite and >= 0, got {self.lam}")


def normalize(ch: DiffusionChannel, rs: ReceptionSystem,
              band: FrequencyBand) -> NormalizedBand:
    """Map physical parameters to the (omega1p, omega2p, lam) normal form."""
    return NormalizedBand(
        omega1p=band.omega1 / rs.k_r,
        omega2p=band.omega2 / rs.k_r,
        lam=math.sqrt(ch.x_r * ch.x_r * rs.k_r / (2.0 * ch.mu)),
    )


def denormalize_distance(lam: float, mu: float, k_r: float) -> float:
    """Recover the physical distance x_r (um) from lam given mu and k_r."""
    _require(math.isfinite(lam) and lam >= 0.0, f"lam must be >= 0, got {lam}")
    _require(math.isfinite(mu) and mu > 0.0, f"mu must be > 0, got {mu}")
    _require(math.isfinite(k_r) and k_r > 0.0, f"k_r must be > 0, got {k_r}")
    return lam * math.sqrt(2.0 * mu / k_r)


def diffusion_amplitude_distortion_normalized(nb: NormalizedBand) -> float:
    """q_G in normal form: 20 lam (sqrt w2' - sqrt w1') log10 e."""
    return 20.0 * nb.lam * (math.sqrt(nb.omega2p) - math.sqrt(nb.omega1p)) * LOG10_E


def diffusion_delay_distortion_normalized(nb: NormalizedBand) -> float:
    """r_G in normal form: (w1'/2pi) lam (1/sqrt w1' - 1/sqrt w2')."""
    return (nb.omega1p / (2.0 * math.pi) * nb.lam
            * (1.0 / math.sqrt(nb.omega1p) - 1.0 / math.sqrt(nb.omega2p)))


def reception_amplitude_distortion_normalized(nb: NormalizedBand) -> float:
    """q_H in normal form: 20 log10( sqrt(1 + w2'^2) / sqrt(1 + w1'^2) )."""
    return 20.0 * math.log10(math.hypot(nb.omega2p, 1.0)
                             / math.hypot(nb.omega1p, 1.0))


def reception_delay_distortion_normalized(nb: NormalizedBand) -> float:
    """r_H in normal form: (arctan w1' - (w1'/w2') arctan w2') / 2 pi."""
    return (math.atan(nb.omega1p)
            - nb.omega1p / nb.omega2p * math.atan(nb.omega2p)) / (2.0 * math.pi)


def delay_distortion_maxima(omega2p: float) -> tuple[float, float]:
    """Worst-case w1' for each stage's delay distortion at fixed w2'.

    With w2' fixed, r_G(w1') peaks at w1' = w2' / 4 and r_H(w1') peaks at
    w1' = sqrt(w2' / arctan(w2') - 1); both are interior maxima of
    otherwise non-monotone curves.  Returns (w1'_diffusion, w1'_reception).
    """
    _require(math.isfinite(omega2p) and omega2p > 0.0,
             f"omega2p must be finite and > 0, got {omega2p}")
    return omega2p / 4.0, math.sqrt(omega2p / math.atan(omega2p) - 1.0)


# ---------------------------------------------------------------------------
# Combined report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DistortionReport:
    """Stage and whole-channel distortion indices over one band.

    q_* are amplitude distortions in dB, r_* the period-normalized delay
    distortions; suffixes g / h / m mark the diffusion stage, the
    reception stage, and the full channel.  Because the stage gains (dB)
    and phase delays add and are each monotone, the channel indices
    decompose as q_m = q_g + q_h and r_m = r_g + r_h.
    """

    band: FrequencyBand
    q_g: float
    r_g: float
    q_h: float
    r_h: float
    q_m: float
    r_m: float

    def __post_init__(self) -> None:
        for name in ("q_g", "r_g", "q_h", "r_h", "q_m", "r_m"):
            value = getattr(self, name)
            _require(math.isfinite(value) and value >= -1e-12,
                     f"{name} must be finite and >= 0, got {value}")
        for total, parts in (("q_m", ("q_g", "q_h")), ("r_m", ("r_g", "r_h"))):
            lhs = getattr(self, total)
            rhs = getattr(self, parts[0]) + getattr(self, parts[1])
            _require(abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs)),
                     f"{total} must equal {parts[0]} + {parts[1]}")


def channel_report(ch: DiffusionChannel, rs: ReceptionSystem,
                   band: FrequencyBand) -> DistortionReport:
    """Closed-form distortion indices for both stages and their cascade."""
    q_g = diffusion_amplitude_distortion(ch, band)
    r_g = diffusion_delay_distortion(ch, band)
    q_h = reception_amplitude_distortion(rs, band)
    r_h = reception_delay_distortion(rs, band)
    return DistortionReport(band=band, q_g=q_g, r_g=r_g, q_h=q_h, r_h=r_h,
                            q_m=q_g + q_h, r_m=r_g + r_h)


def grid_report(ch: DiffusionChannel, rs: ReceptionSystem, band: FrequencyBand,
                n_points: int = DEFAULT_GRID_POINTS) -> DistortionReport:
    """Grid-search counterpart of channel_report (independent of the closed forms)."""
    q_g = amplitude_distortion(lambda w: diffusion_gain_db(ch, w), band, n_points)
    r_g = delay_distortion(lambda w: diffusion_phase_delay(ch, w), band, n_points)
    q_h = amplitude_distortion(lambda w: reception_gain_db(rs, w), band, n_points)
    r_h = delay_distortion(lambda w: reception_phase_delay(rs, w), band, n_points)
    return DistortionReport(band=band, q_g=q_g, r_g=r_g, q_h=q_h, r_h=r_h,
                            q_m=q_g + q_h, r_m=r_g + r_h)
