"""Roots of the quantization condition Phi(e) = n + 1/2 + delta.

Four orders differ only in the delta they plug in:

``order0``     delta = 0
``order1``     delta = delta1
``full``       delta = resummed delta1
``adiabatic``  resummed delta1(e) from the action route, iterated to self-consistency

For ``order1``/``full`` delta1 is the constant closed-form value when the
potential carries Riccati coefficients.  Potentials without them fall back
to the energy-dependent action route (flag ``delta1_from_action``).
"""

import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple

from scipy.optimize import brentq

from .action import DEFAULT_QUADRATURE, action_shifted
from .corrections import (
    A1_VIOLATED,
    ADIABATIC_WARNING,
    adiabatic_validity,
    delta1_closed_form,
    delta1_from_action,
    resum_delta,
)
from .potentials import EXACT_KINDS, QuantumScale, analytic_spectrum, well_frame

ORDERS = ("order0", "order1", "full", "adiabatic")
UNBOUNDED = math.inf

QUAD_UNCONVERGED = "quadrature_unconverged"
FP_UNCONVERGED = "fixed_point_unconverged"
PHI_ROUTE = "delta1_from_action"
NON_CONVERGENCE_FLAGS = frozenset({QUAD_UNCONVERGED, FP_UNCONVERGED})

# Phi at the top of a finite well is sampled this far (relative) below the threshold
_TOP_GAP = 1e-12
_NEAR_THRESHOLD = 1e-6


class SolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    root_tol: float = 1e-12
    max_iter: int = 200
    fixed_point_damping: float = 0.5
    max_fp_iter: int = 50

    def __post_init__(self):
        if not (self.root_tol > 0 and self.max_iter > 0 and self.max_fp_iter > 0):
            raise ValueError("solver tolerances and iteration limits must be positive")
        if not 0 < self.fixed_point_damping <= 1:
            raise ValueError("fixed_point_damping must lie in (0, 1]")


DEFAULT_SOLVER = SolverConfig()


@dataclass(frozen=True)
class Level:
    n: int
    energy: float
    order: str
    delta_used: float
    residual: float
    iterations: int
    flags: Tuple[str, ...] = ()
    delta1: float = 0.0
    d_delta_dn: Optional[float] = None

    @property
    def converged(self):
        return not NON_CONVERGENCE_FLAGS.intersection(self.flags)


def _check_order(order):
    if order not in ORDERS:
        raise ValueError(f"unknown order {order!r}; expected one of {', '.join(ORDERS)}")


class _Problem:
    """Everything a level solve needs for one (potential, beta, order)."""

    def __init__(self, potential, beta, order, quad, config):
        _check_order(order)
        self.potential = potential
        self.beta = QuantumScale(beta).beta
        self.order = order
        self.quad = quad or DEFAULT_QUADRATURE
        self.config = config or DEFAULT_SOLVER
        self.frame = well_frame(potential)
        self.depth = potential.depth
        self.flags = set()
        self.top = self.depth * (1.0 - _TOP_GAP) if math.isfinite(self.depth) else math.inf

        self.constant_delta1 = None
        cf = potential.class_five
        if order == "order0":
            self.constant_delta1 = 0.0
        elif cf is not None and (order != "adiabatic" or A1_VIOLATED in delta1_closed_form(cf, beta).flags):
            est = delta1_closed_form(cf, self.beta)
            self.constant_delta1 = est.delta1
            self.flags |= est.flags
        else:
            if not self.frame.parabolic:
                raise ValueError("the action route to delta1 needs a parabolic minimum (k > 0)")
            self.flags.add(PHI_ROUTE)

    def phi(self, eps_t):
        res = action_shifted(self.potential, self.beta, eps_t, self.quad)
        if not res.converged:
            self.flags.add(QUAD_UNCONVERGED)
        return res.value

    def delta1_at(self, eps_t):
        if self.constant_delta1 is not None:
            return self.constant_delta1
        return delta1_from_action(self.phi, self.beta, self.frame.k, eps_t).delta1

    def delta_of(self, delta1):
        if self.order in ("order0", "order1"):
            return delta1
        return resum_delta(delta1)

    def phi_top(self):
        if not math.isfinite(self.top):
            return math.inf
        return self.phi(self.top)

    def harmonic_guess(self, target):
        k = self.frame.k
        if k > 0:
            return 2.0 * self.beta * math.sqrt(k) * target
        return 0.5 * self.top if math.isfinite(self.top) else self.beta * target

    def root(self, target, lo_hint=0.0):
        """eps_t with Phi(eps_t) = target, and the number of action evaluations.

        ``lo_hint`` must be an energy known to lie below the root (or 0).
        """
        calls = 0

        def f(e):
            nonlocal calls
            calls += 1
            return self.phi(e) - target

        def budget():
            if calls > self.config.max_iter:
                raise SolverError("could not bracket the level")

        lo = lo_hint
        hi = min(max(self.harmonic_guess(target), lo), self.top)
        if hi <= lo:
            hi = lo + 0.5 * (self.top - lo) if math.isfinite(self.top) else 2.0 * lo
        while f(hi) < 0:
            budget()
            if hi >= self.top:
                raise SolverError(f"no level with Phi = {target:.6g} below the top of the well")
            lo, hi = hi, min(2.0 * hi, self.top)
        if lo <= 0:
            lo = 0.5 * hi
            while f(lo) > 0:
                budget()
                lo, hi = 0.5 * lo, lo
        xtol = 1e-300
        if math.isfinite(self.depth) and hi > self.depth * (1.0 - _NEAR_THRESHOLD):
            xtol = self.config.root_tol * self.depth
        root, info = brentq(
            f, lo, hi, xtol=xtol, rtol=max(self.config.root_tol, 8.9e-16),
            maxiter=self.config.max_iter, full_output=True, disp=False,
        )
        if not info.converged:
            raise SolverError(f"root finder stopped after {info.iterations} iterations")
        return root, calls


def count_levels(potential, beta, order="full", quad=None):
    """Number of bound levels; ``UNBOUNDED`` (inf) for confining wells."""
    prob = _Problem(potential, beta, order, quad, None)
    if not math.isfinite(prob.top):
        return UNBOUNDED
    room = prob.phi_top() - 0.5 - prob.delta_of(prob.delta1_at(prob.top))
    return max(0, math.ceil(room))


def _solve(prob, n, lo_hint=0.0):
    cfg = prob.config
    prob.flags = {f for f in prob.flags if f not in NON_CONVERGENCE_FLAGS}
    base = n + 0.5
    if prob.constant_delta1 is not None:
        d1 = prob.constant_delta1
        delta = prob.delta_of(d1)
        eps, calls = prob.root(base + delta, lo_hint)
    else:
        eps, calls = prob.root(base, lo_hint)
        d1 = prob.delta1_at(eps)
        delta = prob.delta_of(d1)
        converged = False
        for _ in range(cfg.max_fp_iter):
            new_eps, c = prob.root(base + delta, lo_hint)
            calls += c
            step = abs(new_eps - eps)
            eps = new_eps
            d1 = prob.delta1_at(eps)
            if step <= cfg.root_tol * eps:
                converged = True
                break
            delta += cfg.fixed_point_damping * (prob.delta_of(d1) - delta)
        if not converged:
            prob.flags.add(FP_UNCONVERGED)
    residual = abs(prob.phi(eps) - (base + delta))
    return Level(
        n=n,
        energy=eps + prob.frame.V_min,
        order=prob.order,
        delta_used=delta,
        residual=residual,
        iterations=calls,
        flags=tuple(sorted(prob.flags)),
        delta1=d1,
    ), eps


def solve_level(potential, beta, n, order="full", config=None, quad=None):
    if n < 0 or int(n) != n:
        raise ValueError("n must be a non-negative integer")
    prob = _Problem(potential, beta, order, quad, config)
    return _solve(prob, int(n))[0]


def solve_spectrum(potential, beta, order="full", n_max=None, config=None, quad=None):
    """Levels n = 0..min(n_max, N - 1) in ascending order, with adiabatic diagnostics attached."""
    prob = _Problem(potential, beta, order, quad, config)
    total = count_levels(potential, beta, order, quad)
    if n_max is None:
        if total == UNBOUNDED:
            raise ValueError("confining well: pass n_max")
        last = total - 1
    else:
        if n_max < 0:
            raise ValueError("n_max must be non-negative")
        last = min(n_max, total - 1)
    levels = []
    lo = 0.0
    for n in range(int(last) + 1):
        level, eps = _solve(prob, n, lo)
        levels.append(level)
        lo = eps
    return _attach_diagnostics(levels)


def _attach_diagnostics(levels):
    if len(levels) < 2:
        return levels
    diag = adiabatic_validity([lv.n for lv in levels], [lv.delta_used for lv in levels],
                              [lv.delta1 for lv in levels])
    out = []
    for lv, slope, warn in zip(levels, diag.d_delta_dn, diag.warning):
        flags = tuple(sorted(set(lv.flags) | {ADIABATIC_WARNING})) if warn else lv.flags
        out.append(replace(lv, d_delta_dn=float(slope), flags=flags))
    return out


@dataclass(frozen=True)
class ComparisonRow:
    n: int
    energies: dict
    reference: float
    abs_err: dict
    rel_err: dict
    delta1: float
    delta: float
    d_delta_dn: Optional[float]
    flags: Tuple[str, ...]


def reference_energies(potential, beta, count, reference="analytic", grid=None):
    if reference == "analytic":
        if potential.kind not in EXACT_KINDS:
            raise ValueError(f"no analytic reference for {potential.kind}")
        return analytic_spectrum(potential.kind, potential.params, beta, n_max=count - 1)[:count]
    if reference == "oracle":
        from .oracle import eigenvalues_fd

        return list(eigenvalues_fd(potential, beta, grid, count).energies)
    raise ValueError(f"unknown reference {reference!r}; use 'analytic' or 'oracle'")


def compare(potential, beta, orders=("order0", "full"), reference="analytic", n_max=None,
            config=None, quad=None, grid=None):
    """Per-level energies for each order next to a reference spectrum."""
    orders = list(orders)
    if not orders:
        raise ValueError("need at least one order")
    for order in orders:
        _check_order(order)
    spectra = {o: solve_spectrum(potential, beta, o, n_max, config, quad) for o in orders}
    count = min(len(s) for s in spectra.values())
    if reference == "analytic" and potential.kind in EXACT_KINDS and math.isinf(potential.depth) is False:
        count = min(count, len(analytic_spectrum(potential.kind, potential.params, beta)))
    ref = reference_energies(potential, beta, count, reference, grid) if count else []
    # the most refined order supplies the delta diagnostics
    lead = max(orders, key=ORDERS.index)
    rows = []
    for i in range(count):
        energies = {o: spectra[o][i].energy for o in orders}
        abs_err = {o: abs(energies[o] - ref[i]) for o in orders}
        rel_err = {o: abs_err[o] / abs(ref[i]) if ref[i] != 0 else math.inf for o in orders}
        flags = sorted(set().union(*(spectra[o][i].flags for o in orders)))
        lv = spectra[lead][i]
        rows.append(ComparisonRow(i, energies, ref[i], abs_err, rel_err, lv.delta1, lv.delta_used,
                                  lv.d_delta_dn, tuple(flags)))
    return rows
