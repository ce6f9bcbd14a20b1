"""Truncated Fock-space engine: states, operators and channels.

A cutoff N means the mode keeps photon numbers 0..N (dimension N + 1).
Multi-mode objects are stored with the first mode as the slowest index,
matching ``numpy.kron`` order.  Operators built here carry a measured
unitarity defect and operations fail loudly (:class:`TruncationError`)
instead of silently renormalizing, because downstream error-exponent
computations are sensitive to tail truncation.

Everything is a pure function over immutable values; independent
cutoff-sweep evaluations can safely run concurrently.
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sparse
from scipy.sparse.linalg import expm_multiply

from .errors import InvalidArgumentError, TruncationError
from .gaussian import SqueezeParam

_HERMITICITY_TOL = 1e-10
_TRACE_TOL = 1e-8
_UNITARITY_TOL = 1e-6
_SQUEEZE_DEFICIT_TOL = 1e-6


def _check_cutoff(cutoff: int) -> int:
    if int(cutoff) != cutoff or cutoff < 0:
        raise InvalidArgumentError(f"cutoff must be a non-negative integer, got {cutoff}")
    return int(cutoff)


@dataclass(frozen=True)
class ModeOps:
    """Dense matrix representations of a, a' and the number operator.

    a|n> = sqrt(n)|n-1> exactly; on the truncated space [a, a'] equals
    the identity except at the top level n = cutoff, where the diagonal
    entry is -cutoff instead of 1.
    """

    cutoff: int
    a: np.ndarray
    adag: np.ndarray
    number: np.ndarray

    @property
    def dim(self) -> int:
        return self.cutoff + 1

    @property
    def q(self) -> np.ndarray:
        """Position-like quadrature a + a'."""
        return self.a + self.adag

    @property
    def p(self) -> np.ndarray:
        """Momentum-like quadrature i(a' - a)."""
        return 1j * (self.adag - self.a)


@lru_cache(maxsize=None)
def mode_ops(cutoff: int) -> ModeOps:
    """Build (and cache) the single-mode operator set for a cutoff."""
    cutoff = _check_cutoff(cutoff)
    a = np.diag(np.sqrt(np.arange(1.0, cutoff + 1)), 1)
    adag = a.T.copy()
    n = np.diag(np.arange(cutoff + 1, dtype=float))
    for arr in (a, adag, n):
        arr.setflags(write=False)
    return ModeOps(cutoff=cutoff, a=a, adag=adag, number=n)


# ---------------------------------------------------------------------------
# Two-mode squeezed vacuum in the Fock basis
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FockTMSV:
    """Photon-pair expansion of a two-mode squeezed vacuum.

    ``coeffs[n]`` multiplies |n>_s |n>_i and equals
    (e^{i phase} tanh kappa)^n / cosh kappa.  ``norm_deficit`` is the
    probability mass lost to the cutoff, 1 - sum |c_n|^2, which for the
    geometric series equals tanh^{2(N+1)} kappa.
    """

    sp: SqueezeParam
    cutoff: int
    coeffs: np.ndarray
    norm_deficit: float

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def amplitude_matrix(self, renormalize: bool = True) -> np.ndarray:
        """Two-mode amplitude tensor; only the diagonal |n, n> is populated."""
        c = self.coeffs
        if renormalize:
            c = c / np.linalg.norm(c)
        amp = np.zeros((self.cutoff + 1, self.cutoff + 1), dtype=complex)
        np.fill_diagonal(amp, c)
        return amp


def tmsv_fock(sq: SqueezeParam, cutoff: int) -> FockTMSV:
    """Photon-pair coefficients of the TMSV up to a cutoff.

    Parameters
    ----------
    sq : SqueezeParam
        Squeezing modulus and phase.
    cutoff : int
        Largest photon number kept per mode.
    """
    cutoff = _check_cutoff(cutoff)
    n = np.arange(cutoff + 1)
    ratio = np.exp(1j * sq.phase) * math.tanh(sq.kappa)
    coeffs = ratio**n / math.cosh(sq.kappa)
    deficit = 1.0 - float(np.sum(np.abs(coeffs) ** 2))
    return FockTMSV(sp=sq, cutoff=cutoff, coeffs=coeffs, norm_deficit=deficit)


def squeeze_vacuum_operator(sq: SqueezeParam, cutoff: int) -> np.ndarray:
    """Two-mode squeezed vacuum built from the squeeze-operator exponential.

    Applies exp(zeta a_s' a_i' - zeta* a_s a_i) with zeta = kappa
    e^{i phase} to the two-mode vacuum on the truncated space and
    renormalizes.  The sign of zeta is fixed so that the phase-pi/2
    result carries the i^n photon-pair coefficients; that convention is
    asserted by tests, not just documented.  Serves as an independent
    cross-check of :func:`tmsv_fock`.

    Returns
    -------
    np.ndarray
        Complex amplitude tensor of shape (cutoff + 1, cutoff + 1).

    Raises
    ------
    TruncationError
        If tanh^{2(cutoff+1)}(kappa) >= 1e-6, i.e. the cutoff is too
        small for the squeeze strength.
    """
    cutoff = _check_cutoff(cutoff)
    deficit_bound = math.tanh(sq.kappa) ** (2 * (cutoff + 1))
    if deficit_bound >= _SQUEEZE_DEFICIT_TOL:
        raise TruncationError(
            f"cutoff {cutoff} too small for kappa={sq.kappa}: "
            f"tail bound {deficit_bound:.3e} >= {_SQUEEZE_DEFICIT_TOL}"
        )
    d = cutoff + 1
    if sq.kappa == 0.0:
        amp = np.zeros((d, d), dtype=complex)
        amp[0, 0] = 1.0
        return amp
    a = sparse.diags(np.sqrt(np.arange(1.0, cutoff + 1)), 1, format="csr")
    eye = sparse.identity(d, format="csr")
    mode_a = sparse.kron(a, eye, format="csr")
    mode_b = sparse.kron(eye, a, format="csr")
    zeta = sq.kappa * np.exp(1j * sq.phase)
    gen = (
        zeta * (mode_a.conj().T @ mode_b.conj().T) - np.conj(zeta) * (mode_a @ mode_b)
    ).tocsc()
    vac = np.zeros(d * d, dtype=complex)
    vac[0] = 1.0
    out = expm_multiply(gen, vac)
    out = out / np.linalg.norm(out)
    return out.reshape(d, d)


def mean_photon(sq: SqueezeParam) -> float:
    """Mean photon number per TMSV mode, sinh^2(kappa)."""
    return math.sinh(sq.kappa) ** 2


# ---------------------------------------------------------------------------
# Density matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DensityMatrix:
    """Trace-one Hermitian operator on a truncated multi-mode Fock space.

    ``mode_dims`` lists the per-mode dimensions (cutoff + 1 each); the
    matrix dimension is their product.  Construction checks hermiticity
    (1e-10) and unit trace (1e-8); positivity is checked where it
    matters (e.g. before matrix powers) via :meth:`min_eigenvalue`.
    """

    mode_dims: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.mode_dims)
        if not dims or any(d < 1 for d in dims):
            raise InvalidArgumentError(f"mode_dims must be positive, got {self.mode_dims}")
        m = np.asarray(self.matrix, dtype=complex)
        total = int(np.prod(dims))
        if m.shape != (total, total):
            raise InvalidArgumentError(
                f"matrix shape {m.shape} does not match mode_dims product {total}"
            )
        herm = np.max(np.abs(m - m.conj().T))
        if herm > _HERMITICITY_TOL:
            raise InvalidArgumentError(
                f"matrix not Hermitian within {_HERMITICITY_TOL}: deviation {herm:.3e}"
            )
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > _TRACE_TOL:
            raise InvalidArgumentError(f"trace must be 1 within {_TRACE_TOL}, got {tr}")
        m = (m + m.conj().T) / 2.0
        m.setflags(write=False)
        object.__setattr__(self, "mode_dims", dims)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_modes(self) -> int:
        return len(self.mode_dims)

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])

    @classmethod
    def from_pure(cls, vec: np.ndarray, mode_dims) -> "DensityMatrix":
        v = np.asarray(vec, dtype=complex).ravel()
        v = v / np.linalg.norm(v)
        return cls(tuple(int(d) for d in mode_dims), np.outer(v, v.conj()))


def thermal_probabilities(nbar: float, cutoff: int) -> tuple[np.ndarray, float]:
    """Truncated thermal photon distribution and its renormalization factor.

    The untruncated law is p(n) = nbar^n / (1 + nbar)^{n+1}; the
    returned distribution is renormalized to sum to 1 over 0..cutoff and
    the factor 1 / (kept mass) is reported alongside.
    """
    cutoff = _check_cutoff(cutoff)
    if not math.isfinite(nbar) or nbar < 0.0:
        raise InvalidArgumentError(f"nbar must be finite and >= 0, got {nbar}")
    if nbar == 0.0:
        p = np.zeros(cutoff + 1)
        p[0] = 1.0
        return p, 1.0
    n = np.arange(cutoff + 1)
    raw = np.exp(n * math.log(nbar / (1.0 + nbar)) - math.log1p(nbar))
    kept = float(raw.sum())
    return raw / kept, 1.0 / kept


def thermal_density(nbar: float, cutoff: int) -> DensityMatrix:
    """Thermal state with mean occupation ``nbar``, renormalized to trace 1."""
    p, _ = thermal_probabilities(nbar, cutoff)
    return DensityMatrix((cutoff + 1,), np.diag(p.astype(complex)))


# ---------------------------------------------------------------------------
# Unitaries: displacement and beam splitter
# ---------------------------------------------------------------------------


def unitarity_defect(u: np.ndarray) -> float:
    """Max-norm deviation of U'U and UU' from the identity."""
    eye = np.eye(u.shape[0])
    return float(
        max(np.max(np.abs(u.conj().T @ u - eye)), np.max(np.abs(u @ u.conj().T - eye)))
    )


def displacement(alpha: complex, cutoff: int) -> np.ndarray:
    """Truncated displacement unitary exp(alpha a' - alpha* a).

    Requires |alpha|^2 well below the cutoff so the displaced vacuum
    fits within the kept levels; column 0 then reproduces the
    coherent-state coefficients e^{-|alpha|^2/2} alpha^n / sqrt(n!).
    """
    cutoff = _check_cutoff(cutoff)
    alpha = complex(alpha)
    if abs(alpha) ** 2 > 0.25 * (cutoff + 1):
        raise TruncationError(f"|alpha|^2 = {abs(alpha) ** 2:.3g} too large for cutoff {cutoff}")
    ops = mode_ops(cutoff)
    d = sla.expm(alpha * ops.adag - np.conj(alpha) * ops.a)
    defect = unitarity_defect(d)
    if defect > _UNITARITY_TOL:
        raise TruncationError(
            f"displacement unitarity defect {defect:.3e} exceeds {_UNITARITY_TOL}"
        )
    return d


def _bs_sector(total: int, dim_a: int, dim_b: int, theta: float):
    """Beam-splitter block on one total-photon sector.

    The generator theta (a'b - ab') conserves n_a + n_b, so the unitary
    decomposes into one orthogonal block per sector; within a sector the
    generator is real antisymmetric tridiagonal.
    """
    s_lo = max(0, total - (dim_b - 1))
    s_hi = min(total, dim_a - 1)
    s_vals = np.arange(s_lo, s_hi + 1)
    d = len(s_vals)
    gen = np.zeros((d, d))
    for idx in range(d - 1):
        s = s_vals[idx]
        g = math.sqrt((s + 1.0) * (total - s))
        gen[idx + 1, idx] = g
        gen[idx, idx + 1] = -g
    return s_vals, sla.expm(theta * gen)


def beam_splitter_unitary(dim_a: int, dim_b: int, eta: float) -> np.ndarray:
    """Dense two-mode beam-splitter unitary exp(theta (a'b - ab')).

    ``eta`` is the transmissivity of mode a (cos^2 theta = eta); the
    mode operators map to a -> cos(theta) a + sin(theta) b and
    b -> cos(theta) b - sin(theta) a.  Assembled block-wise over total
    photon number.  Flat index convention: (n_a, n_b) -> n_a * dim_b + n_b.
    """
    if not 0.0 <= eta <= 1.0:
        raise InvalidArgumentError(f"transmissivity must be in [0, 1], got {eta}")
    theta = math.acos(math.sqrt(eta))
    u = np.zeros((dim_a * dim_b, dim_a * dim_b))
    for total in range(dim_a + dim_b - 1):
        s_vals, block = _bs_sector(total, dim_a, dim_b, theta)
        flat = s_vals * dim_b + (total - s_vals)
        u[np.ix_(flat, flat)] = block
    defect = unitarity_defect(u)
    if defect > _UNITARITY_TOL:
        raise TruncationError(
            f"beam-splitter unitarity defect {defect:.3e} exceeds {_UNITARITY_TOL}"
        )
    return u


def _apply_on_axes(tensor: np.ndarray, u: np.ndarray, dims: tuple[int, int], axes: tuple[int, int]):
    """Apply a two-mode operator to the given pair of tensor axes."""
    moved = np.moveaxis(tensor, axes, (0, 1))
    tail = moved.shape[2:]
    flat = moved.reshape(dims[0] * dims[1], -1)
    out = (u @ flat).reshape(dims + tail)
    return np.moveaxis(out, (0, 1), axes)


def beam_splitter(state, eta: float, modes: tuple[int, int] = (0, 1), mode_dims=None):
    """Mix two modes of a state on a beam splitter of transmissivity eta.

    ``state`` may be a :class:`DensityMatrix` (conjugated by the
    unitary, returning a DensityMatrix) or a pure-state amplitude array
    (returning an array of the same shape; ``mode_dims`` is then
    required).  Mode ``modes[0]`` keeps the fraction eta of its input.
    """
    j, k = (int(m) for m in modes)
    if j == k:
        raise InvalidArgumentError("beam splitter needs two distinct modes")
    if isinstance(state, DensityMatrix):
        dims = state.mode_dims
        _check_mode_pair(j, k, len(dims))
        u = beam_splitter_unitary(dims[j], dims[k], eta)
        n = len(dims)
        tens = state.matrix.reshape(dims + dims)
        tens = _apply_on_axes(tens, u.astype(complex), (dims[j], dims[k]), (j, k))
        tens = _apply_on_axes(tens, u.astype(complex).conj(), (dims[j], dims[k]), (n + j, n + k))
        total = int(np.prod(dims))
        return DensityMatrix(dims, tens.reshape(total, total))
    if mode_dims is None:
        raise InvalidArgumentError("mode_dims is required for pure-state input")
    dims = tuple(int(d) for d in mode_dims)
    _check_mode_pair(j, k, len(dims))
    vec = np.asarray(state, dtype=complex)
    u = beam_splitter_unitary(dims[j], dims[k], eta)
    tens = _apply_on_axes(vec.reshape(dims), u.astype(complex), (dims[j], dims[k]), (j, k))
    return tens.reshape(vec.shape)


def _check_mode_pair(j: int, k: int, n_modes: int):
    if not (0 <= j < n_modes and 0 <= k < n_modes):
        raise InvalidArgumentError(f"mode pair ({j}, {k}) out of range for {n_modes} modes")


# ---------------------------------------------------------------------------
# Partial trace and expectations
# ---------------------------------------------------------------------------


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Reduce a multi-mode density matrix to the modes listed in ``keep``.

    The kept modes stay in ascending original order.  Trace and
    hermiticity are preserved by construction.
    """
    keep = sorted(set(int(k) for k in keep))
    n = rho.n_modes
    if not keep or any(k < 0 or k >= n for k in keep):
        raise InvalidArgumentError(f"keep must name modes of a {n}-mode state, got {keep}")
    dims = rho.mode_dims
    letters = string.ascii_lowercase
    ket = list(letters[:n])
    bra = [letters[n + i] if i in keep else ket[i] for i in range(n)]
    out = "".join(ket[i] for i in keep) + "".join(bra[i] for i in keep)
    spec = "".join(ket) + "".join(bra) + "->" + out
    tens = rho.matrix.reshape(dims + dims)
    reduced = np.einsum(spec, tens)
    kept_dims = tuple(dims[i] for i in keep)
    total = int(np.prod(kept_dims))
    return DensityMatrix(kept_dims, reduced.reshape(total, total))


def expectation(operator: np.ndarray, state) -> complex:
    """tr(O rho) for a DensityMatrix or <psi|O|psi> for an amplitude array."""
    op = np.asarray(operator, dtype=complex)
    if isinstance(state, DensityMatrix):
        if op.shape != state.matrix.shape:
            raise InvalidArgumentError(
                f"operator shape {op.shape} does not match state dimension {state.dim}"
            )
        return complex(np.trace(op @ state.matrix))
    vec = np.asarray(state, dtype=complex).ravel()
    if op.shape != (vec.size, vec.size):
        raise InvalidArgumentError(
            f"operator shape {op.shape} does not match state dimension {vec.size}"
        )
    return complex(np.vdot(vec, op @ vec))


def embed_operator(op: np.ndarray, mode: int, mode_dims) -> np.ndarray:
    """Embed a single-mode operator into a multi-mode space (kron with identities)."""
    dims = tuple(int(d) for d in mode_dims)
    if not 0 <= mode < len(dims):
        raise InvalidArgumentError(f"mode {mode} out of range for {len(dims)} modes")
    op = np.asarray(op, dtype=complex)
    if op.shape != (dims[mode], dims[mode]):
        raise InvalidArgumentError(
            f"operator shape {op.shape} does not match mode dimension {dims[mode]}"
        )
    out = np.eye(1, dtype=complex)
    for k, d in enumerate(dims):
        out = np.kron(out, op if k == mode else np.eye(d))
    return out


def number_expectation(state, mode: int, mode_dims=None) -> float:
    """Mean photon number of one mode of a DensityMatrix or amplitude array."""
    dims = state.mode_dims if isinstance(state, DensityMatrix) else tuple(mode_dims)
    n_op = embed_operator(mode_ops(dims[mode] - 1).number, mode, dims)
    return float(np.real(expectation(n_op, state)))
