"""Action integrals between turning points.

All three integrands here (``sqrt(e - V)``, ``1/sqrt(e - V)`` and
``V'^2/sqrt(e - V)``) are handled by one substitution,
``x = c + h sin(pi t / 2)`` on ``t in [-1, 1]``, which turns the square-root
endpoint behaviour into something smooth.  Gauss-Legendre orders are
doubled until two successive estimates agree to ``rel_tol``; past
``PANEL_NODES`` the rule becomes a composite of equal panels, which keeps
node generation linear in the node count.
"""

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from . import _kernels
from .potentials import QuantumScale, turning_points_shifted, well_frame


class QuadratureWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-10
    max_doublings: int = 16
    initial_nodes: int = 32

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.initial_nodes < 8:
            raise ValueError("initial_nodes must be at least 8")
        if self.max_doublings < 1:
            raise ValueError("max_doublings must be at least 1")


DEFAULT_QUADRATURE = QuadratureConfig()

# below this fraction of the depth the harmonic limit replaces quadrature
NEAR_BOTTOM = 1e-8


class QuadResult(NamedTuple):
    value: float
    nodes: int
    converged: bool


PANEL_NODES = 512


@lru_cache(maxsize=32)
def _rule(n):
    if n <= PANEL_NODES:
        x, w = _kernels.gauss_legendre(n)
    else:
        panels = -(-n // PANEL_NODES)
        t, wt = _rule(PANEL_NODES)
        edges = np.linspace(-1.0, 1.0, panels + 1)
        half = 0.5 * np.diff(edges)
        x = ((edges[:-1] + half)[:, None] + half[:, None] * t[None, :]).ravel()
        w = (half[:, None] * wt[None, :]).ravel()
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _mapped_nodes(x_lo, x_hi, n):
    """Physical nodes, distance-to-nearest-endpoint, and weights including the Jacobian."""
    t, w = _rule(n)
    h = 0.5 * (x_hi - x_lo)
    # 1 - sin(pi t / 2) written without cancellation near the endpoints
    gap = 2.0 * h * np.sin(0.25 * np.pi * (1.0 - np.abs(t))) ** 2
    x = np.where(t > 0, x_hi - gap, x_lo + gap)
    jac = h * 0.5 * np.pi * np.sin(0.5 * np.pi * (1.0 - np.abs(t)))
    return x, gap, w * jac


def _integrate(potential, eps_t, kind, config):
    x_lo, x_hi = turning_points_shifted(potential, eps_t)

    def estimate(n):
        x, gap, wj = _mapped_nodes(x_lo, x_hi, n)
        diff = eps_t - potential.shifted(x)
        if kind == "sqrt":
            f = np.sqrt(np.maximum(diff, 0.0))
        else:
            bad = diff <= 0.0
            if bad.any():
                # rounding at nodes hugging a turning point: fall back to the linear local model
                diff = np.where(bad, np.abs(potential.d1(x)) * gap, diff)
            f = 1.0 / np.sqrt(diff)
            if kind == "grad":
                f = f * potential.d1(x) ** 2
        return float(np.dot(wj, f))

    n = config.initial_nodes
    prev = estimate(n)
    for _ in range(config.max_doublings):
        n *= 2
        cur = estimate(n)
        if abs(cur - prev) <= config.rel_tol * abs(cur):
            return QuadResult(cur, n, True)
        prev = cur
    return QuadResult(prev, n, False)


def _unconverged(res, what):
    if not res.converged:
        warnings.warn(f"{what} did not converge with {res.nodes} nodes", QuadratureWarning, stacklevel=3)
    return res.value


def action_shifted(potential, beta, eps_t, config=None):
    """Phi at ``eps_t`` above the well bottom, as a :class:`QuadResult`."""
    beta = QuantumScale(beta).beta
    config = config or DEFAULT_QUADRATURE
    if math.isfinite(potential.depth) and 0.0 < eps_t < NEAR_BOTTOM * potential.depth:
        k = well_frame(potential).k
        if k > 0:
            return QuadResult(eps_t / (2.0 * beta * math.sqrt(k)), 0, True)
    res = _integrate(potential, eps_t, "sqrt", config)
    return res._replace(value=res.value / (math.pi * beta))


def action(potential, beta, energy, config=None):
    """Phi(e) = (1 / pi beta) * integral of sqrt(e - V) between the turning points."""
    res = action_shifted(potential, beta, energy - potential.V_min, config)
    return _unconverged(res, "action integral")


def action_derivative_shifted(potential, beta, eps_t, config=None):
    beta = QuantumScale(beta).beta
    config = config or DEFAULT_QUADRATURE
    if math.isfinite(potential.depth) and 0.0 < eps_t < NEAR_BOTTOM * potential.depth:
        k = well_frame(potential).k
        if k > 0:
            return QuadResult(1.0 / (2.0 * beta * math.sqrt(k)), 0, True)
    res = _integrate(potential, eps_t, "inv", config)
    return res._replace(value=res.value / (2.0 * math.pi * beta))


def action_derivative(potential, beta, energy, config=None):
    """dPhi/de = (1 / 2 pi beta) * integral of dx / sqrt(e - V)."""
    res = action_derivative_shifted(potential, beta, energy - potential.V_min, config)
    return _unconverged(res, "action derivative")


def gradient_integral_shifted(potential, eps_t, config=None):
    return _integrate(potential, eps_t, "grad", config or DEFAULT_QUADRATURE)


def gradient_integral(potential, energy, config=None):
    """I(e) = integral of V'(x)^2 / sqrt(e - V) between the turning points."""
    res = gradient_integral_shifted(potential, energy - potential.V_min, config)
    return _unconverged(res, "gradient integral")


def action_closed_form(coeffs, frame, beta, eps_t):
    """Phi for an even potential ``A^2 s^2`` with ``s' = a2 s^2 + a0``.

    ``frame`` is accepted for symmetry with the numeric route; the energy is
    already measured from the bottom so only ``coeffs`` matter.
    """
    beta = QuantumScale(beta).beta
    if coeffs.a1 != 0:
        raise ValueError("closed-form action needs a1 = 0 (even potential)")
    if not coeffs.a0 > 0:
        raise ValueError("closed-form action needs a0 > 0")
    if not eps_t > 0:
        raise ValueError("energy must lie above the well bottom")
    A, a2, a0 = coeffs.A, coeffs.a2, coeffs.a0
    if a2 == 0:
        return eps_t / (2.0 * beta * A * a0)
    u = eps_t * a2 / (A * A * a0)
    if not 1.0 + u > 0:
        raise ValueError("energy lies above the top of the well")
    # sqrt(1 + u) - 1 without cancellation
    return (A / (beta * a2)) * (u / (math.sqrt(1.0 + u) + 1.0))
