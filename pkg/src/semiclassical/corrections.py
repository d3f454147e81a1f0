"""The correction delta to the half-integer offset in Phi(e) = n + 1/2 + delta.

delta1 comes from three independent routes:

* ``closed_form``: beta * a2 / (8 A) from the Riccati coefficients;
* ``from_action``: only Phi(e), beta and the bottom curvature k;
* ``direct_integral``: second energy derivative of the V'^2 integral.

``resum_delta`` maps delta1 to the full delta.
"""

import math
from dataclasses import dataclass
from typing import FrozenSet, Optional

import numpy as np

from .action import DEFAULT_QUADRATURE, gradient_integral_shifted
from .potentials import QuantumScale

ROUTES = ("closed_form", "from_action", "direct_integral")

PHI_ROUTE_UNAVAILABLE = "phi_route_unavailable_k_zero"
A1_VIOLATED = "a1_condition_violated"
ADIABATIC_WARNING = "adiabatic_warning"

ADIABATIC_THRESHOLD = 0.1

# largest double below 1/2: the bound |delta| < 1/2 survives rounding
_HALF_BELOW = math.nextafter(0.5, 0.0)


@dataclass(frozen=True)
class CorrectionEstimate:
    delta1: float
    route: str
    eps_ref: Optional[float] = None
    flags: FrozenSet[str] = frozenset()

    def __post_init__(self):
        if self.route not in ROUTES:
            raise ValueError(f"unknown route {self.route!r}")
        if self.route == "closed_form" and self.eps_ref is not None:
            raise ValueError("closed-form estimates carry no reference energy")


def a1_condition_violated(coeffs):
    """True when the odd Riccati term is too large for the even-potential treatment.

    An exactly even potential (a1 = 0) never violates it.
    """
    return coeffs.a1 != 0 and coeffs.a1**2 >= abs(coeffs.a0 * coeffs.a2)


def delta1_closed_form(coeffs, beta):
    beta = QuantumScale(beta).beta
    flags = frozenset({A1_VIOLATED}) if a1_condition_violated(coeffs) else frozenset()
    return CorrectionEstimate(beta * coeffs.a2 / (8.0 * coeffs.A), "closed_form", None, flags)


def delta1_from_action(action_fn, beta, k, eps_t):
    """delta1 from the action alone.

    ``action_fn`` maps an energy above the well bottom to Phi.  Returns
    an estimate flagged ``phi_route_unavailable_k_zero`` (with NaN delta1)
    when the bottom is not parabolic.
    """
    beta = QuantumScale(beta).beta
    if not eps_t > 0:
        raise ValueError("energy must lie above the well bottom")
    if not k > 0:
        return CorrectionEstimate(math.nan, "from_action", eps_t, frozenset({PHI_ROUTE_UNAVAILABLE}))
    phi = float(action_fn(eps_t))
    if not phi > 0:
        raise ValueError(f"action must be positive, got {phi}")
    ratio = eps_t / (2.0 * beta * math.sqrt(k) * phi)
    return CorrectionEstimate((ratio - 1.0) / (4.0 * phi), "from_action", eps_t)


def delta1_direct(potential, beta, eps_t, config=None, eta=1e-2):
    """delta1 = (beta / 24 pi) d^2 I / de^2 by a 5-point stencil with one Richardson step."""
    beta = QuantumScale(beta).beta
    config = config or DEFAULT_QUADRATURE
    h = eta * eps_t
    if not (eps_t - 2.0 * h > 0 and eps_t + 2.0 * h < potential.depth):
        raise ValueError("finite-difference stencil leaves the bound energy window")
    cache = {}

    def I(e):
        if e not in cache:
            cache[e] = gradient_integral_shifted(potential, e, config).value
        return cache[e]

    def second(step):
        f = [I(eps_t + j * step) for j in (-2, -1, 0, 1, 2)]
        return (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * step * step)

    coarse, fine = second(h), second(h / 2.0)
    d2 = (16.0 * fine - coarse) / 15.0
    return CorrectionEstimate(beta / (24.0 * math.pi) * d2, "direct_integral", eps_t)


def resum_delta(delta1):
    """delta = 2 delta1 / (1 + sqrt(1 + 16 delta1^2)); odd, |delta| < 1/2."""
    t = float(delta1)
    if math.isnan(t):
        raise ValueError("delta1 must not be NaN")
    if abs(t) > 1e16:
        # the formula has already rounded to the cap here; this also avoids inf / inf
        return math.copysign(_HALF_BELOW, t)
    d = 2.0 * t / (1.0 + math.sqrt(1.0 + 16.0 * t * t))
    return math.copysign(min(abs(d), _HALF_BELOW), t)


def delta_series(delta1, order):
    """Truncated power series of the resummed delta in delta1 (order 1 or 3)."""
    t = float(delta1)
    if order == 1:
        return t
    if order == 3:
        return t - 4.0 * t**3
    raise ValueError(f"unsupported series order {order}; use 1 or 3")


@dataclass(frozen=True)
class AdiabaticDiagnostics:
    n: np.ndarray
    d_delta_dn: np.ndarray
    d_delta1_dn: Optional[np.ndarray]
    warning: np.ndarray

    @property
    def any_warning(self):
        return bool(self.warning.any())


def _slopes(n, values):
    # forward differences; the last level reuses the preceding interval
    d = np.diff(values) / np.diff(n)
    return np.append(d, d[-1])


def adiabatic_validity(n, delta, delta1=None, threshold=ADIABATIC_THRESHOLD):
    """Level-to-level variation of delta (and delta1 if given).

    A level is flagged when ``|d delta / dn| >= threshold``.
    """
    n = np.asarray(n, dtype=float)
    delta = np.asarray(delta, dtype=float)
    if n.size < 2 or delta.shape != n.shape:
        raise ValueError("need at least two levels with matching n and delta")
    if np.any(np.diff(n) <= 0):
        raise ValueError("levels must be given in increasing n")
    d_delta = _slopes(n, delta)
    d_delta1 = None
    if delta1 is not None:
        delta1 = np.asarray(delta1, dtype=float)
        if delta1.shape != n.shape:
            raise ValueError("delta1 must match n")
        d_delta1 = _slopes(n, delta1)
    return AdiabaticDiagnostics(n.astype(int), d_delta, d_delta1, np.abs(d_delta) >= threshold)
