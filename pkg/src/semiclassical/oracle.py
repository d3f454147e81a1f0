"""Brute-force reference spectrum: -beta^2 psi'' + V psi = e psi on a uniform grid.

Second-order finite differences, Dirichlet walls, lowest eigenvalues by
Sturm-sequence bisection, optionally Richardson-extrapolated from the
grids h and h/2.  Nothing here depends on the semiclassical machinery
except the optional order-0 estimate used to size the default box.
"""

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from . import _kernels
from .potentials import QuantumScale, turning_points_shifted, well_frame

CONTAMINATED = "boundary_contamination"

# decay lengths added beyond the classically allowed region
_DECAY_LENGTHS = 12.0
# psi at the walls must be below exp(-MIN_TAIL_EXPONENT) of its bulk size
MIN_TAIL_EXPONENT = 10.0


@dataclass(frozen=True)
class GridConfig:
    half_width: Optional[float] = None
    n_points: int = 4000
    richardson: bool = True
    bounds: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        if self.n_points < 100:
            raise ValueError("n_points must be at least 100")
        if self.half_width is not None and not self.half_width > 0:
            raise ValueError("half_width must be positive")
        if self.bounds is not None and not self.bounds[0] < self.bounds[1]:
            raise ValueError("bounds must be increasing")


@dataclass(frozen=True)
class FDResult:
    energies: np.ndarray
    coarse: np.ndarray
    fine: Optional[np.ndarray]
    bounds: Tuple[float, float]
    flags: Tuple[str, ...] = field(default=())


def sturm_count(diag, offdiag, lam):
    """Eigenvalues strictly below ``lam`` of the symmetric tridiagonal (diag, offdiag)."""
    diag = np.atleast_1d(np.asarray(diag, dtype=float))
    offdiag = np.asarray(offdiag, dtype=float)
    off_sq = np.broadcast_to(offdiag**2, (max(diag.size - 1, 0),))
    return _kernels.sturm_count(diag, off_sq, lam)


def fd_matrix(potential, beta, x_lo, x_hi, n_points):
    """Grid, diagonal and off-diagonal (scalar) of the discretized operator, shifted frame."""
    x = np.linspace(x_lo, x_hi, n_points + 2)[1:-1]
    h = (x_hi - x_lo) / (n_points + 1)
    c = beta * beta / (h * h)
    return x, potential.shifted(x) + 2.0 * c, -c


def _lowest(potential, beta, x_lo, x_hi, n_points, m):
    x, diag, off = fd_matrix(potential, beta, x_lo, x_hi, n_points)
    off_sq = np.full(n_points - 1, off * off)
    lo = float(np.min(diag)) - 2.0 * abs(off)
    hi = float(np.max(diag)) + 2.0 * abs(off)
    if math.isfinite(potential.depth):
        hi = min(hi, potential.depth)
        found = _kernels.sturm_count(diag, off_sq, hi)
        if found < m:
            raise ValueError(f"grid resolves only {found} bound states below the threshold, {m} requested")
    scale = max(abs(lo), abs(hi), 1e-300)
    return _kernels.bisect_lowest(diag, off_sq, m, lo, hi, abstol=1e-15 * scale)


def _default_bounds(potential, beta, grid, m):
    x0 = potential.x_min
    dom_lo, dom_hi = potential.domain
    if grid.bounds is not None:
        lo, hi = grid.bounds
    elif grid.half_width is not None:
        lo, hi = x0 - grid.half_width, x0 + grid.half_width
    else:
        est = _estimate_top_level(potential, beta, m)
        depth = potential.depth
        wall = 1.5 * est
        if math.isfinite(depth):
            wall = min(wall, 0.5 * (est + depth))
        x_a, x_b = _turning_or_edge(potential, wall)
        decay = beta / math.sqrt(wall - est)
        lo, hi = x_a - _DECAY_LENGTHS * decay, x_b + _DECAY_LENGTHS * decay
    return max(lo, dom_lo), min(hi, dom_hi)


def _turning_or_edge(potential, eps_t):
    try:
        return turning_points_shifted(potential, eps_t)
    except ValueError:
        return potential.domain


def _estimate_top_level(potential, beta, m):
    """Order-0 estimate of the m-th level above the bottom, for sizing the box."""
    from .solver import SolverError, solve_level

    try:
        return solve_level(potential, beta, m - 1, "order0").energy - potential.V_min
    except (SolverError, ValueError):
        pass
    k = well_frame(potential).k
    if math.isfinite(potential.depth):
        return potential.depth * (1.0 - 1e-3)
    return 2.0 * beta * math.sqrt(max(k, 1e-300)) * m


def tail_exponent(potential, beta, x_lo, x_hi, eps_t, n=4001):
    """WKB decay exponent of a level at ``eps_t`` between its turning points and the nearer wall."""
    x = np.linspace(x_lo, x_hi, n)
    kappa = np.sqrt(np.maximum(potential.shifted(x) - eps_t, 0.0)) / beta
    h = x[1] - x[0]
    left = x < potential.x_min
    return float(min(np.sum(kappa[left]), np.sum(kappa[~left])) * h)


def eigenvalues_fd(potential, beta, grid=None, m=1):
    """The ``m`` lowest eigenvalues (caller's frame) of the finite-difference Hamiltonian."""
    beta = QuantumScale(beta).beta
    grid = grid or GridConfig()
    if m < 1:
        raise ValueError("m must be at least 1")
    x_lo, x_hi = _default_bounds(potential, beta, grid, m)
    coarse = _lowest(potential, beta, x_lo, x_hi, grid.n_points, m)
    fine = None
    energies = coarse
    if grid.richardson:
        fine = _lowest(potential, beta, x_lo, x_hi, 2 * grid.n_points + 1, m)
        energies = (4.0 * fine - coarse) / 3.0

    flags = (CONTAMINATED,) if tail_exponent(potential, beta, x_lo, x_hi, energies[-1]) < MIN_TAIL_EXPONENT else ()
    shift = potential.V_min
    return FDResult(energies + shift, coarse + shift, None if fine is None else fine + shift,
                    (float(x_lo), float(x_hi)), flags)
