"""Single-well potentials: analytic catalog, tabulated ingestion, well geometry.

Every potential stores its shape as the non-negative *shifted* function
``Vs(x) = V(x) - V_min`` so that energies measured from the bottom of the
well keep full relative precision.  ``evaluate`` adds ``V_min`` back.

Catalog kinds and their parameters::

    harmonic       k               V = k x^2
    poschl_teller  V0, alpha       V = -V0 / cosh^2(alpha x)
    trig_tan2      V0, alpha       V = V0 tan^2(alpha x),  |x| < pi / (2 alpha)
    morse          D, alpha        V = D (1 - exp(-alpha x))^2 - D
    gaussian_well  V0, w           V = -V0 exp(-x^2 / w^2)

Any kind also accepts an optional ``shift`` parameter that adds a constant.
"""

import csv
import math
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Callable, Mapping, Optional

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

KINDS = ("harmonic", "poschl_teller", "trig_tan2", "morse", "gaussian_well", "tabulated")
CATALOG_KINDS = KINDS[:-1]
EXACT_KINDS = ("harmonic", "poschl_teller", "trig_tan2", "morse")

REQUIRED_PARAMS = {
    "harmonic": ("k",),
    "poschl_teller": ("V0", "alpha"),
    "trig_tan2": ("V0", "alpha"),
    "morse": ("D", "alpha"),
    "gaussian_well": ("V0", "w"),
}

S_KINDS = ("identity", "tanh", "tan", "exp_decay")


@dataclass(frozen=True)
class QuantumScale:
    """``beta**2 = hbar**2 / 2m``; the only place hbar and m enter."""

    beta: float

    def __post_init__(self):
        if not (self.beta > 0 and math.isfinite(self.beta)):
            raise ValueError(f"beta must be positive and finite, got {self.beta}")


@dataclass(frozen=True)
class ClassFiveCoefficients:
    """``V = A^2 s^2 + B s + C`` with ``ds/dx = a2 s^2 + a1 s + a0``."""

    A: float
    B: float
    C: float
    a2: float
    a1: float
    a0: float
    s_kind: str
    rate: float = 1.0

    def s(self, x):
        x = np.asarray(x, dtype=float)
        if self.s_kind == "identity":
            return x
        if self.s_kind == "tanh":
            return np.tanh(self.rate * x)
        if self.s_kind == "tan":
            return np.tan(self.rate * x)
        if self.s_kind == "exp_decay":
            return np.exp(-self.rate * x)
        raise ValueError(f"unknown s_kind {self.s_kind!r}")

    def ds(self, x):
        """Derivative of ``s`` computed directly (not through the Riccati form)."""
        x = np.asarray(x, dtype=float)
        r = self.rate
        if self.s_kind == "identity":
            return np.ones_like(x)
        if self.s_kind == "tanh":
            return r / np.cosh(r * x) ** 2
        if self.s_kind == "tan":
            return r / np.cos(r * x) ** 2
        if self.s_kind == "exp_decay":
            return -r * np.exp(-r * x)
        raise ValueError(f"unknown s_kind {self.s_kind!r}")

    def value(self, x):
        s = self.s(x)
        return self.A**2 * s**2 + self.B * s + self.C

    def riccati(self, x):
        s = self.s(x)
        return self.a2 * s**2 + self.a1 * s + self.a0


@dataclass(frozen=True)
class WellFrame:
    x_min: float
    V_min: float
    k: float
    depth: float

    @property
    def parabolic(self):
        """True when the minimum is parabolic (``k > 0``), as the action route to delta1 needs."""
        return self.k > 0


@dataclass(frozen=True)
class PotentialSpec:
    """Immutable single-well potential.

    Build with :func:`make_catalog_potential` or :func:`load_tabulated`
    rather than directly.
    """

    kind: str
    params: Mapping[str, float]
    domain: tuple
    class_five: Optional[ClassFiveCoefficients]
    x_min: float
    V_min: float
    depth: float
    shifted: Callable = field(repr=False, compare=False)
    d1: Callable = field(repr=False, compare=False)
    d2: Callable = field(repr=False, compare=False)
    inverse: Optional[Callable] = field(default=None, repr=False, compare=False)
    curvature: Optional[float] = field(default=None, repr=False, compare=False)

    def shifted_by(self, c):
        """Same potential plus the constant ``c``."""
        params = dict(self.params)
        params["shift"] = params.get("shift", 0.0) + c
        cf = self.class_five
        if cf is not None:
            cf = replace(cf, C=cf.C + c)
        return replace(self, params=MappingProxyType(params), V_min=self.V_min + c, class_five=cf)

    def _check(self, x):
        x = np.asarray(x, dtype=float)
        lo, hi = self.domain
        if np.any(~(x >= lo)) or np.any(~(x <= hi)):
            raise ValueError(f"x outside the domain ({lo}, {hi}) of {self.kind}")
        return x


def _scalar(x, y):
    return float(y) if np.ndim(x) == 0 else y


def evaluate(potential, x):
    """V(x) in the caller's frame."""
    x = potential._check(x)
    return _scalar(x, potential.shifted(x) + potential.V_min)


def derivative(potential, x):
    x = potential._check(x)
    return _scalar(x, potential.d1(x))


def second_derivative(potential, x):
    x = potential._check(x)
    return _scalar(x, potential.d2(x))


def _require(kind, params):
    if kind not in REQUIRED_PARAMS:
        raise ValueError(f"unknown potential kind {kind!r}; expected one of {', '.join(CATALOG_KINDS)}")
    out = {}
    for name in REQUIRED_PARAMS[kind]:
        if name not in params:
            raise ValueError(f"{kind} needs parameter {name!r}")
        value = float(params[name])
        if not (value > 0 and math.isfinite(value)):
            raise ValueError(f"{kind} parameter {name} must be positive, got {value}")
        out[name] = value
    extra = set(params) - set(REQUIRED_PARAMS[kind]) - {"shift"}
    if extra:
        raise ValueError(f"unexpected parameters for {kind}: {sorted(extra)}")
    out["shift"] = float(params.get("shift", 0.0))
    return out


def normalize_kind(kind):
    return kind.strip().lower().replace("-", "_")


def make_catalog_potential(kind, params):
    kind = normalize_kind(kind)
    p = _require(kind, params)
    shift = p["shift"]
    inf = math.inf

    if kind == "harmonic":
        k = p["k"]
        return PotentialSpec(
            kind, MappingProxyType(p), (-inf, inf),
            ClassFiveCoefficients(math.sqrt(k), 0.0, shift, 0.0, 0.0, 1.0, "identity"),
            0.0, shift, inf,
            shifted=lambda x: k * x * x,
            d1=lambda x: 2.0 * k * x,
            d2=lambda x: np.full_like(x, 2.0 * k),
            inverse=lambda e: (-math.sqrt(e / k), math.sqrt(e / k)),
            curvature=k,
        )

    if kind == "poschl_teller":
        V0, a = p["V0"], p["alpha"]

        def d2(x):
            sech2 = 1.0 / np.cosh(a * x) ** 2
            return 2.0 * V0 * a * a * sech2 * (sech2 - 2.0 * np.tanh(a * x) ** 2)

        def inverse(e):
            x = math.atanh(math.sqrt(e / V0)) / a
            return -x, x

        return PotentialSpec(
            kind, MappingProxyType(p), (-inf, inf),
            ClassFiveCoefficients(math.sqrt(V0), 0.0, shift - V0, -a, 0.0, a, "tanh", a),
            0.0, shift - V0, V0,
            shifted=lambda x: V0 * np.tanh(a * x) ** 2,
            d1=lambda x: 2.0 * V0 * a * np.tanh(a * x) / np.cosh(a * x) ** 2,
            d2=d2,
            inverse=inverse,
            curvature=V0 * a * a,
        )

    if kind == "trig_tan2":
        V0, a = p["V0"], p["alpha"]
        edge = math.pi / (2.0 * a)

        def d2(x):
            t = np.tan(a * x)
            sec2 = 1.0 + t * t
            return 2.0 * V0 * a * a * sec2 * (sec2 + 2.0 * t * t)

        def inverse(e):
            x = math.atan(math.sqrt(e / V0)) / a
            return -x, x

        return PotentialSpec(
            kind, MappingProxyType(p), (-edge, edge),
            ClassFiveCoefficients(math.sqrt(V0), 0.0, shift, a, 0.0, a, "tan", a),
            0.0, shift, inf,
            shifted=lambda x: V0 * np.tan(a * x) ** 2,
            d1=lambda x: 2.0 * V0 * a * np.tan(a * x) * (1.0 + np.tan(a * x) ** 2),
            d2=d2,
            inverse=inverse,
            curvature=V0 * a * a,
        )

    if kind == "morse":
        D, a = p["D"], p["alpha"]

        def d2(x):
            e = np.exp(-a * x)
            return 2.0 * D * a * a * e * (2.0 * e - 1.0)

        def inverse(e):
            r = math.sqrt(e / D)
            return -math.log1p(r) / a, -math.log1p(-r) / a

        # s = exp(-alpha x): D s^2 - 2 D s + D - D, and ds/dx = -alpha s
        return PotentialSpec(
            kind, MappingProxyType(p), (-inf, inf),
            ClassFiveCoefficients(math.sqrt(D), -2.0 * D, shift, 0.0, -a, 0.0, "exp_decay", a),
            0.0, shift - D, D,
            shifted=lambda x: D * np.expm1(-a * x) ** 2,
            d1=lambda x: -2.0 * D * a * np.exp(-a * x) * np.expm1(-a * x),
            d2=d2,
            inverse=inverse,
            curvature=D * a * a,
        )

    if kind == "gaussian_well":
        V0, w = p["V0"], p["w"]

        def d2(x):
            g = np.exp(-((x / w) ** 2))
            return 2.0 * V0 * g / w**2 * (1.0 - 2.0 * (x / w) ** 2)

        def inverse(e):
            x = w * math.sqrt(-math.log1p(-e / V0))
            return -x, x

        return PotentialSpec(
            kind, MappingProxyType(p), (-inf, inf), None,
            0.0, shift - V0, V0,
            shifted=lambda x: -V0 * np.expm1(-((x / w) ** 2)),
            d1=lambda x: 2.0 * V0 * x / w**2 * np.exp(-((x / w) ** 2)),
            d2=d2,
            inverse=inverse,
            curvature=V0 / w**2,
        )

    raise AssertionError(kind)  # unreachable: _require validated kind


def load_tabulated(x_samples, V_samples):
    """Potential from samples, interpolated with a monotone piecewise cubic (PCHIP)."""
    x = np.asarray(x_samples, dtype=float)
    V = np.asarray(V_samples, dtype=float)
    if x.ndim != 1 or x.shape != V.shape:
        raise ValueError("x and V samples must be 1-D arrays of equal length")
    if x.size < 8:
        raise ValueError(f"need at least 8 samples, got {x.size}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(V))):
        raise ValueError("samples must be finite")
    if np.any(np.diff(x) <= 0):
        raise ValueError("x samples must be strictly increasing")
    i = int(np.argmin(V))
    if i == 0 or i == x.size - 1:
        raise ValueError("minimum of the samples lies on the boundary")
    slope_sign = np.sign(np.diff(V))
    if np.any(slope_sign[:i] > 0) or np.any(slope_sign[i:] < 0):
        raise ValueError("samples are not a single well (V' changes sign more than once)")

    interp = PchipInterpolator(x, V, extrapolate=False)
    dinterp = interp.derivative()
    x_min = _refine_minimum(interp, dinterp, x, i)
    V_min = float(interp(x_min))
    depth = float(min(V[0], V[-1]) - V_min)
    # 5-point stencil on the interpolant, one sample spacing wide
    h = float(min(x[i] - x[i - 1], x[i + 1] - x[i]))
    h = min(h, (x_min - x[0]) / 2.0, (x[-1] - x_min) / 2.0)
    f = interp(x_min + h * np.array([-2.0, -1.0, 0.0, 1.0, 2.0]))
    vpp = (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h)
    # anything within rounding noise of the stencil is a flat (non-parabolic) bottom
    if abs(vpp) <= 1e3 * np.finfo(float).eps * float(np.max(np.abs(f))) / (h * h):
        vpp = 0.0

    def d2(xx):
        # the interpolant's own second derivative is piecewise linear; the stencil value is used at x_min only
        return interp.derivative(2)(xx)

    return PotentialSpec(
        "tabulated", MappingProxyType({}), (float(x[0]), float(x[-1])), None,
        x_min, V_min, depth,
        shifted=lambda xx: np.maximum(interp(xx) - V_min, 0.0),
        d1=dinterp,
        d2=d2,
        curvature=float(vpp) / 2.0,
    )


def _refine_minimum(interp, dinterp, x, i):
    """Minimizer of the interpolant near sample ``i`` (a root of its derivative)."""
    lo, hi = x[i - 1], x[i + 1]
    dl, dh = float(dinterp(lo)), float(dinterp(hi))
    d0 = float(dinterp(x[i]))
    if d0 == 0.0:
        return float(x[i])
    if dl < 0 < d0:
        hi = x[i]
    elif d0 < 0 < dh:
        lo = x[i]
    elif not dl < 0 < dh:
        return float(x[i])
    return float(brentq(dinterp, lo, hi, xtol=1e-14, rtol=8.9e-16))


def read_tabulated_csv(path):
    """Read a two-column ``x,V`` CSV (header row optional) into a tabulated potential."""
    xs, vs = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        for row_no, row in enumerate(csv.reader(fh)):
            if not row or not "".join(row).strip():
                continue
            if len(row) < 2:
                raise ValueError(f"{path}: row {row_no + 1} has fewer than two columns")
            try:
                xv, vv = float(row[0]), float(row[1])
            except ValueError:
                if row_no == 0:
                    continue  # header
                raise ValueError(f"{path}: row {row_no + 1} is not numeric") from None
            xs.append(xv)
            vs.append(vv)
    return load_tabulated(xs, vs)


def well_frame(potential):
    k = potential.curvature
    if k is None:
        k = float(second_derivative(potential, potential.x_min)) / 2.0
    return WellFrame(potential.x_min, potential.V_min, float(k), potential.depth)


def turning_points_shifted(potential, eps_t):
    """Turning points for the energy ``eps_t`` measured from the well bottom."""
    if not (0.0 < eps_t < potential.depth):
        raise ValueError(f"energy {eps_t} above the bottom is outside the bound window (0, {potential.depth})")
    if potential.inverse is not None:
        return potential.inverse(eps_t)
    return _bisect_side(potential, eps_t, -1.0), _bisect_side(potential, eps_t, 1.0)


def _bisect_side(potential, eps_t, direction):
    x0 = potential.x_min
    edge = potential.domain[1] if direction > 0 else potential.domain[0]
    f = lambda x: float(potential.shifted(x)) - eps_t  # noqa: E731
    step = 1.0 if not math.isfinite(edge) else abs(edge - x0) / 2.0
    far = x0 + direction * step
    while f(far) < 0:
        if math.isfinite(edge) and far == edge:
            raise ValueError("no turning point inside the domain")
        step *= 2.0
        far = x0 + direction * step
        if math.isfinite(edge) and direction * (far - edge) > 0:
            far = edge
    a, b = (x0, far) if direction > 0 else (far, x0)
    return float(brentq(f, a, b, xtol=1e-300, rtol=8.9e-16, maxiter=400))


def turning_points(potential, energy):
    """``(x_minus, x_plus)`` where V equals ``energy`` (caller's frame)."""
    return turning_points_shifted(potential, energy - potential.V_min)


def analytic_spectrum(kind, params, beta, n_max=None):
    """Exact bound-state energies for the solvable catalog kinds, ascending.

    Finite wells return every bound level (truncated at ``n_max`` if given);
    confining wells (harmonic, trig_tan2) need ``n_max``.
    """
    kind = normalize_kind(kind)
    if kind not in EXACT_KINDS:
        raise ValueError(f"no exact spectrum for {kind!r}")
    beta = QuantumScale(beta).beta
    p = _require(kind, params)
    shift = p["shift"]
    if kind in ("harmonic", "trig_tan2") and n_max is None:
        raise ValueError(f"{kind} has infinitely many levels; pass n_max")
    ns = range(0, (n_max if n_max is not None else 10**9) + 1)
    out = []
    if kind == "harmonic":
        out = [2.0 * beta * math.sqrt(p["k"]) * (n + 0.5) + shift for n in ns]
    elif kind == "poschl_teller":
        V0, a = p["V0"], p["alpha"]
        g = math.sqrt(V0) / (beta * a)
        lam = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * g * g))
        for n in ns:
            if not n < lam - 1.0:
                break
            out.append(-((beta * a * (lam - 1.0 - n)) ** 2) + shift)
    elif kind == "trig_tan2":
        V0, a = p["V0"], p["alpha"]
        g = math.sqrt(V0) / (beta * a)
        mu = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * g * g))
        out = [(beta * a) ** 2 * ((n + mu) ** 2 - g * g) + shift for n in ns]
    elif kind == "morse":
        D, a = p["D"], p["alpha"]
        for n in ns:
            x = beta * a * (n + 0.5)
            if not x < math.sqrt(D):
                break
            out.append(-D * (1.0 - x / math.sqrt(D)) ** 2 + shift)
    return out
