"""Squeezing-parameter frequency profiles and dB mappings.

The device-physics model for kappa(nu) is out of scope here; a
phenomenological profile (truncated parabola by default, raised-cosine
or rectangular as alternatives) stands in for it, parameterized by the
apical value, band center and band width.  Frequency bookkeeping
follows the mixing process: a three-wave mixer conserves
nu_s + nu_i = nu_p, a four-wave mixer nu_s + nu_i = 2 nu_p.

The dB conventions, with the unit-vacuum-variance quadratures used
package-wide: squeezed joint-quadrature variance e^{-2 kappa} gives a
squeezing magnitude of 10 log10(e^{-2 kappa}) dB, and the
phase-preserving amplifier gain cosh^2(kappa) gives
10 log10(cosh^2 kappa) dB.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError

MIXING_TYPES = ("3wm", "4wm")
PROFILE_SHAPES = ("parabolic", "raised_cosine", "rectangular")

_DB_PER_KAPPA = 20.0 * math.log10(math.e)


@dataclass(frozen=True)
class SpectrumProfile:
    """Phenomenological squeezing-parameter profile over a frequency band.

    kappa(nu) equals ``kappa_max`` at ``band_center``, falls off with
    the selected ``shape`` and is zero outside the band.  When
    ``band_center`` is omitted it defaults to the degenerate signal
    frequency of the mixing process: nu_p / 2 for a three-wave mixer,
    nu_p for a four-wave mixer.
    """

    kappa_max: float
    pump_freq: float
    band_width: float
    mixing: str = "3wm"
    band_center: float | None = None
    shape: str = "parabolic"

    def __post_init__(self):
        if self.kappa_max < 0.0 or not math.isfinite(self.kappa_max):
            raise InvalidArgumentError(f"kappa_max must be finite and >= 0, got {self.kappa_max}")
        if self.pump_freq <= 0.0 or not math.isfinite(self.pump_freq):
            raise InvalidArgumentError(f"pump_freq must be finite and > 0, got {self.pump_freq}")
        if self.band_width <= 0.0 or not math.isfinite(self.band_width):
            raise InvalidArgumentError(f"band_width must be finite and > 0, got {self.band_width}")
        if self.mixing not in MIXING_TYPES:
            raise InvalidArgumentError(f"mixing must be one of {MIXING_TYPES}, got {self.mixing!r}")
        if self.shape not in PROFILE_SHAPES:
            raise InvalidArgumentError(f"shape must be one of {PROFILE_SHAPES}, got {self.shape!r}")
        if self.band_center is None:
            center = self.pump_freq / 2.0 if self.mixing == "3wm" else self.pump_freq
            object.__setattr__(self, "band_center", float(center))

    @property
    def band_edges(self) -> tuple[float, float]:
        half = self.band_width / 2.0
        return (self.band_center - half, self.band_center + half)

    def contains(self, nu_s: float) -> bool:
        lo, hi = self.band_edges
        return lo <= nu_s <= hi


def kappa_profile(nu_s, profile: SpectrumProfile):
    """Squeezing modulus at signal frequency nu_s (vectorized over nu_s).

    parabolic:     kappa_max (1 - u^2) clipped at 0, u = (nu - center)/(width/2)
    raised_cosine: kappa_max (1 + cos(pi u)) / 2 inside the band
    rectangular:   kappa_max inside the band

    All shapes are 0 outside the band and kappa_max at its center.
    """
    nu = np.asarray(nu_s, dtype=float)
    u = (nu - profile.band_center) / (profile.band_width / 2.0)
    inside = np.abs(u) <= 1.0
    if profile.shape == "parabolic":
        val = profile.kappa_max * np.clip(1.0 - u**2, 0.0, None)
    elif profile.shape == "raised_cosine":
        val = np.where(inside, profile.kappa_max * 0.5 * (1.0 + np.cos(np.pi * np.clip(u, -1, 1))), 0.0)
    else:  # rectangular
        val = np.where(inside, profile.kappa_max, 0.0)
    val = np.where(inside, val, 0.0)
    return float(val) if np.isscalar(nu_s) else val


def idler_frequency(nu_s: float, profile: SpectrumProfile) -> float:
    """Idler frequency paired with nu_s by energy conservation.

    Three-wave mixing: nu_i = nu_p - nu_s; four-wave mixing:
    nu_i = 2 nu_p - nu_s.  nu_s must lie within the profile band.
    """
    if not profile.contains(nu_s):
        lo, hi = profile.band_edges
        raise InvalidArgumentError(f"nu_s = {nu_s} outside the band [{lo}, {hi}]")
    return _conjugate_frequency(nu_s, profile)


def _conjugate_frequency(nu_s, profile: SpectrumProfile):
    if profile.mixing == "3wm":
        return profile.pump_freq - nu_s
    return 2.0 * profile.pump_freq - nu_s


def squeezing_magnitude_db(kappa: float) -> float:
    """Squeezed joint-quadrature variance relative to vacuum, in dB.

    10 log10(e^{-2 kappa}) = -(20 log10 e) kappa, computed in closed
    form so that it cancels :func:`antisqueezing_magnitude_db` exactly.
    """
    if kappa < 0.0:
        raise InvalidArgumentError(f"kappa must be >= 0, got {kappa}")
    return 0.0 - _DB_PER_KAPPA * kappa


def antisqueezing_magnitude_db(kappa: float) -> float:
    """Anti-squeezed joint-quadrature variance relative to vacuum, in dB."""
    if kappa < 0.0:
        raise InvalidArgumentError(f"kappa must be >= 0, got {kappa}")
    return _DB_PER_KAPPA * kappa


def gain_db(kappa: float) -> float:
    """Phase-preserving amplifier gain 10 log10(cosh^2 kappa) in dB."""
    if kappa < 0.0:
        raise InvalidArgumentError(f"kappa must be >= 0, got {kappa}")
    return 20.0 * math.log10(math.cosh(kappa))


@dataclass(frozen=True)
class SpectrumTable:
    """Columns of a frequency sweep: nu_s, nu_i, kappa, S (dB), G (dB)."""

    profile: SpectrumProfile
    nu_s: np.ndarray
    nu_i: np.ndarray
    kappa: np.ndarray
    squeezing_db: np.ndarray
    gain_db: np.ndarray

    def __post_init__(self):
        for name in ("nu_s", "nu_i", "kappa", "squeezing_db", "gain_db"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return len(self.nu_s)


def spectrum_sweep(
    profile: SpectrumProfile,
    nu_range: tuple[float, float] | None = None,
    steps: int = 161,
) -> SpectrumTable:
    """Sweep the signal frequency and tabulate kappa, squeezing and gain.

    ``nu_range`` defaults to the profile band.  Rows outside the band
    carry kappa = 0 (hence 0 dB squeezing and gain) rather than raising;
    the idler column follows the conservation formula everywhere.
    """
    if steps < 2:
        raise InvalidArgumentError(f"steps must be >= 2, got {steps}")
    lo, hi = profile.band_edges if nu_range is None else (float(nu_range[0]), float(nu_range[1]))
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
        raise InvalidArgumentError(f"invalid sweep range ({lo}, {hi})")
    nu_s = np.linspace(lo, hi, int(steps))
    kap = kappa_profile(nu_s, profile)
    nu_i = _conjugate_frequency(nu_s, profile)
    sq_db = 0.0 - _DB_PER_KAPPA * kap
    g_db = 20.0 * np.log10(np.cosh(kap))
    return SpectrumTable(
        profile=profile, nu_s=nu_s, nu_i=nu_i, kappa=kap, squeezing_db=sq_db, gain_db=g_db
    )
