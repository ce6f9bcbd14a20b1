"""Two-mode Gaussian states: covariance algebra and Wigner densities.

Conventions used throughout the package:

* quadratures q = a + a', p = i(a' - a), so the vacuum has variance 1
  in every quadrature and the vacuum covariance matrix is the identity;
* two-mode quantities are ordered (q_s, p_s, q_i, p_i) with the signal
  mode first and the idler mode second;
* a two-mode squeezed vacuum (TMSV) of modulus ``kappa`` and phase
  ``phase`` has diagonal covariance blocks cosh(2 kappa) I and a
  cross block of magnitude sinh(2 kappa) whose orientation is set by
  the phase.  The default phase pi/2 places the cross correlations in
  the (q_s, p_i) and (p_s, q_i) entries.

All types are immutable after construction and every operation is a
pure function, so everything here is safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateStateError, InvalidArgumentError, InvalidStateError

TWO_PI = 2.0 * math.pi

#: Names of the four quadratures in storage order.
QUADRATURE_NAMES = ("qs", "ps", "qi", "pi")

#: Symplectic form for [q, p] = 2i and ordering (q_s, p_s, q_i, p_i).
SYMPLECTIC_FORM = np.array(
    [
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0, 0.0],
    ]
)
SYMPLECTIC_FORM.setflags(write=False)

_SYMMETRY_TOL = 1e-12
_UNCERTAINTY_TOL = -1e-9
_DEGENERATE_DET = 1e-300


def quadrature_index(name: str) -> int:
    """Map a quadrature name ('qs', 'ps', 'qi', 'pi') to its index."""
    try:
        return QUADRATURE_NAMES.index(name.lower())
    except ValueError:
        raise InvalidArgumentError(
            f"unknown quadrature {name!r}; expected one of {QUADRATURE_NAMES}"
        ) from None


@dataclass(frozen=True)
class SqueezeParam:
    """Modulus and phase of a two-mode squeeze argument.

    ``kappa`` is the dimensionless squeezing modulus (>= 0).  ``phase``
    is stored normalized to [0, 2 pi); the default pi/2 reproduces the
    photon-pair expansion with coefficients proportional to
    (i tanh kappa)^n.
    """

    kappa: float
    phase: float = math.pi / 2

    def __post_init__(self):
        kappa = float(self.kappa)
        phase = float(self.phase)
        if not math.isfinite(kappa) or kappa < 0.0:
            raise InvalidArgumentError(f"kappa must be finite and >= 0, got {self.kappa}")
        if not math.isfinite(phase):
            raise InvalidArgumentError(f"phase must be finite, got {self.phase}")
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "phase", phase % TWO_PI)

    @property
    def mean_photon(self) -> float:
        """Mean photon number per mode, sinh^2(kappa)."""
        return math.sinh(self.kappa) ** 2


def _readonly(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=float, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class TwoModeGaussianState:
    """First and second moments of a two-mode Gaussian state.

    ``mean`` is the length-4 vector of quadrature means and ``cov`` the
    4x4 real covariance matrix, both in (q_s, p_s, q_i, p_i) order with
    the vacuum normalized to unit variance.  Construction enforces shape
    and symmetry; physicality is checked separately by
    :func:`uncertainty_check` so that deliberately unphysical matrices
    can still be examined.
    """

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float)
        cov = np.asarray(self.cov, dtype=float)
        if mean.shape != (4,):
            raise InvalidArgumentError(f"mean must have shape (4,), got {mean.shape}")
        if cov.shape != (4, 4):
            raise InvalidArgumentError(f"cov must have shape (4, 4), got {cov.shape}")
        if not np.all(np.isfinite(mean)) or not np.all(np.isfinite(cov)):
            raise InvalidArgumentError("mean and cov must be finite")
        asym = np.max(np.abs(cov - cov.T))
        if asym > _SYMMETRY_TOL:
            raise InvalidArgumentError(f"cov must be symmetric within {_SYMMETRY_TOL}, asymmetry {asym:.3e}")
        object.__setattr__(self, "mean", _readonly(mean))
        object.__setattr__(self, "cov", _readonly((cov + cov.T) / 2.0))


def vacuum_state() -> TwoModeGaussianState:
    """Two-mode vacuum: zero mean, identity covariance."""
    return TwoModeGaussianState(np.zeros(4), np.eye(4))


def tmsv_covariance(sp: SqueezeParam) -> TwoModeGaussianState:
    """Covariance-matrix form of the two-mode squeezed vacuum.

    Parameters
    ----------
    sp : SqueezeParam
        Squeezing modulus and phase.

    Returns
    -------
    TwoModeGaussianState
        Zero-mean state with diagonal blocks cosh(2 kappa) I2 and a
        cross block sinh(2 kappa) [[cos phi, sin phi], [sin phi, -cos phi]].
    """
    c2 = math.cosh(2.0 * sp.kappa)
    s2 = math.sinh(2.0 * sp.kappa)
    cp = math.cos(sp.phase)
    sn = math.sin(sp.phase)
    cross = s2 * np.array([[cp, sn], [sn, -cp]])
    cov = np.block([[c2 * np.eye(2), cross], [cross.T, c2 * np.eye(2)]])
    return TwoModeGaussianState(np.zeros(4), cov)


def quadrature_variance(state: TwoModeGaussianState, coeffs) -> float:
    """Variance of the linear quadrature combination coeffs . r.

    With the vacuum convention Var(q) = 1 this is simply
    coeffs^T cov coeffs.  Raises for an all-zero coefficient vector.
    """
    c = np.asarray(coeffs, dtype=float)
    if c.shape != (4,):
        raise InvalidArgumentError(f"coeffs must have shape (4,), got {c.shape}")
    if not np.any(c):
        raise InvalidArgumentError("coeffs must not all be zero")
    return float(c @ state.cov @ c)


class UncertaintyReport(NamedTuple):
    passed: bool
    min_eigenvalue: float


def uncertainty_check(state: TwoModeGaussianState) -> UncertaintyReport:
    """Check the uncertainty relation cov + i Omega >= 0.

    Returns the verdict together with the worst (smallest) eigenvalue of
    the Hermitian matrix cov + i Omega; the state passes when that
    eigenvalue is >= -1e-9.
    """
    herm = state.cov.astype(complex) + 1j * SYMPLECTIC_FORM
    eigs = np.linalg.eigvalsh(herm)
    worst = float(eigs[0])
    return UncertaintyReport(worst >= _UNCERTAINTY_TOL, worst)


def _check_invertible(cov: np.ndarray) -> float:
    det = float(np.linalg.det(cov))
    if det <= _DEGENERATE_DET:
        raise DegenerateStateError(f"covariance is numerically singular (det = {det:.3e})")
    return det


def wigner_density(state: TwoModeGaussianState, point) -> float:
    """Wigner quasi-probability density at one phase-space point.

    For a Gaussian state this is the multivariate normal density

        exp(-(r - mean)^T cov^-1 (r - mean) / 2) / ((2 pi)^2 sqrt(det cov)),

    normalized so the full 4-D integral is 1.  A pure state has
    det cov = 1 and therefore peak value 1/(4 pi^2) at its mean.
    """
    r = np.asarray(point, dtype=float)
    if r.shape != (4,):
        raise InvalidArgumentError(f"point must have shape (4,), got {r.shape}")
    det = _check_invertible(state.cov)
    d = r - state.mean
    quad = float(d @ np.linalg.solve(state.cov, d))
    return math.exp(-0.5 * quad) / (4.0 * math.pi**2 * math.sqrt(det))


@dataclass(frozen=True)
class WignerGrid:
    """Wigner density sampled on a 2-D slice of the 4-D phase space.

    ``plane`` holds the indices of the two varied quadratures and
    ``fixed_values`` the coordinates of the two remaining quadratures
    (in ascending index order).  ``values[i, j]`` is the density at
    x_axis[i], y_axis[j]; files are emitted in row-major order (the
    first plane axis is the slower one).
    """

    plane: tuple[int, int]
    fixed_values: tuple[float, float]
    x_axis: np.ndarray
    y_axis: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        for name in ("x_axis", "y_axis", "values"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def wigner_grid(
    state: TwoModeGaussianState,
    plane: tuple[int, int] = (0, 1),
    x_range: tuple[float, float] = (-4.0, 4.0),
    y_range: tuple[float, float] = (-4.0, 4.0),
    samples: tuple[int, int] = (81, 81),
    fixed_values: tuple[float, float] = (0.0, 0.0),
) -> WignerGrid:
    """Evaluate the Wigner density on a uniform grid over a 2-D slice.

    The two quadratures named by ``plane`` are varied over ``x_range``
    and ``y_range`` (inclusive endpoints, ``samples`` points per axis);
    the two remaining quadratures are held at ``fixed_values``.  The
    slice convention is explicit because a 2-D rendering of the 4-D
    Wigner function is not unique.
    """
    i, j = plane
    if i == j or not all(0 <= k < 4 for k in (i, j)):
        raise InvalidArgumentError(f"plane must be two distinct indices in 0..3, got {plane}")
    nx, ny = samples
    if nx < 2 or ny < 2:
        raise InvalidArgumentError(f"need at least 2 samples per axis, got {samples}")
    if not all(map(math.isfinite, (*x_range, *y_range, *fixed_values))):
        raise InvalidArgumentError("ranges and fixed values must be finite")
    report = uncertainty_check(state)
    if not report.passed:
        raise InvalidStateError(
            f"state fails the uncertainty check (worst eigenvalue {report.min_eigenvalue:.3e})"
        )
    det = _check_invertible(state.cov)

    x_axis = np.linspace(x_range[0], x_range[1], nx)
    y_axis = np.linspace(y_range[0], y_range[1], ny)
    fixed_idx = tuple(k for k in range(4) if k not in (i, j))

    pts = np.empty((nx, ny, 4))
    pts[..., i] = x_axis[:, None]
    pts[..., j] = y_axis[None, :]
    pts[..., fixed_idx[0]] = fixed_values[0]
    pts[..., fixed_idx[1]] = fixed_values[1]

    diff = pts.reshape(-1, 4) - state.mean
    quad = np.einsum("ni,ni->n", diff, np.linalg.solve(state.cov, diff.T).T)
    values = np.exp(-0.5 * quad) / (4.0 * math.pi**2 * math.sqrt(det))
    return WignerGrid(
        plane=(i, j),
        fixed_values=(float(fixed_values[0]), float(fixed_values[1])),
        x_axis=x_axis,
        y_axis=y_axis,
        values=values.reshape(nx, ny),
    )


def slice_mass(
    state: TwoModeGaussianState,
    plane: tuple[int, int],
    fixed_values: tuple[float, float] = (0.0, 0.0),
) -> float:
    """Analytic integral of a Wigner slice over its two varied quadratures.

    Integrating the slice over the varied plane leaves the 2-D marginal
    density of the two fixed quadratures evaluated at ``fixed_values``.
    Used as the reference for grid Riemann sums.
    """
    i, j = plane
    fixed_idx = [k for k in range(4) if k not in (i, j)]
    sub = state.cov[np.ix_(fixed_idx, fixed_idx)]
    det = float(np.linalg.det(sub))
    if det <= _DEGENERATE_DET:
        raise DegenerateStateError("marginal covariance of the fixed pair is singular")
    d = np.asarray(fixed_values, dtype=float) - state.mean[fixed_idx]
    quad = float(d @ np.linalg.solve(sub, d))
    return math.exp(-0.5 * quad) / (TWO_PI * math.sqrt(det))
