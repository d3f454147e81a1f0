"""Hot numeric loops, compiled with numba when available.

Two kernels dominate runtime: Sturm-sequence bisection for the
finite-difference oracle, and Gauss-Legendre node generation for large
quadrature orders.  Each has an ``@njit`` implementation and a pure-numpy
one.  Set ``SEMICLASSICAL_NO_NUMBA=1`` to force the numpy path; it is also
used automatically when numba cannot be imported.

The numpy variants vectorize across independent problems (all requested
eigenvalues at once, all Legendre roots at once) and loop over the
sequential dimension in Python.
"""

import math
import os

import numpy as np

_DISABLE = os.environ.get("SEMICLASSICAL_NO_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

try:
    if _DISABLE:
        raise ImportError("numba disabled by SEMICLASSICAL_NO_NUMBA")
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        # identity decorator so the kernels stay importable (and testable) as plain Python
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f


_TINY = 1e-300


# ---------------------------------------------------------------------------
# Sturm sequences


@njit(cache=True)
def _sturm_count_jit(diag, off_sq, lam):
    n = diag.shape[0]
    count = 0
    q = diag[0] - lam
    if q == 0.0:
        q = _TINY
    if q < 0.0:
        count += 1
    for i in range(1, n):
        q = diag[i] - lam - off_sq[i - 1] / q
        if q == 0.0:
            q = _TINY
        if q < 0.0:
            count += 1
    return count


@njit(cache=True)
def _bisect_lowest_jit(diag, off_sq, m, lo, hi, abstol):
    out = np.empty(m)
    # lower bounds can be shared: eigenvalue j+1 is never below eigenvalue j
    floor = lo
    for j in range(m):
        a = floor
        b = hi
        for _ in range(400):
            mid = 0.5 * (a + b)
            tol = abstol + 4.0 * 2.220446049250313e-16 * max(abs(a), abs(b))
            if b - a <= tol:
                break
            if _sturm_count_jit(diag, off_sq, mid) > j:
                b = mid
            else:
                a = mid
        out[j] = 0.5 * (a + b)
        floor = a
    return out


def _sturm_counts_numpy(diag, off_sq, lams):
    lams = np.atleast_1d(np.asarray(lams, dtype=float))
    q = diag[0] - lams
    q[q == 0.0] = _TINY
    count = (q < 0.0).astype(np.int64)
    for i in range(1, diag.shape[0]):
        q = diag[i] - lams - off_sq[i - 1] / q
        q[q == 0.0] = _TINY
        count += q < 0.0
    return count


def _bisect_lowest_numpy(diag, off_sq, m, lo, hi, abstol):
    target = np.arange(m)
    a = np.full(m, float(lo))
    b = np.full(m, float(hi))
    for _ in range(400):
        tol = abstol + 4.0 * np.finfo(float).eps * np.maximum(np.abs(a), np.abs(b))
        active = (b - a) > tol
        if not active.any():
            break
        mid = 0.5 * (a + b)
        above = _sturm_counts_numpy(diag, off_sq, mid) > target
        b = np.where(active & above, mid, b)
        a = np.where(active & ~above, mid, a)
    return 0.5 * (a + b)


def sturm_count(diag, off_sq, lam):
    """Number of eigenvalues strictly below ``lam``.

    ``off_sq`` holds the squared off-diagonal entries (length n-1).
    """
    diag = np.ascontiguousarray(diag, dtype=float)
    off_sq = np.ascontiguousarray(off_sq, dtype=float)
    if NUMBA_AVAILABLE:
        return int(_sturm_count_jit(diag, off_sq, float(lam)))
    return int(_sturm_counts_numpy(diag, off_sq, lam)[0])


def bisect_lowest(diag, off_sq, m, lo, hi, abstol=0.0):
    """The ``m`` lowest eigenvalues in ``[lo, hi]`` by Sturm bisection."""
    diag = np.ascontiguousarray(diag, dtype=float)
    off_sq = np.ascontiguousarray(off_sq, dtype=float)
    if NUMBA_AVAILABLE:
        return _bisect_lowest_jit(diag, off_sq, int(m), float(lo), float(hi), float(abstol))
    return _bisect_lowest_numpy(diag, off_sq, int(m), lo, hi, abstol)


# ---------------------------------------------------------------------------
# Gauss-Legendre nodes


@njit(cache=True)
def _gauss_legendre_jit(n):
    x = np.empty(n)
    w = np.empty(n)
    half = (n + 1) // 2
    for i in range(half):
        z = math.cos(math.pi * (i + 0.75) / (n + 0.5))
        dp = 1.0
        for _ in range(100):
            p0 = 1.0
            p1 = z
            for k in range(2, n + 1):
                p0, p1 = p1, ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k
            dp = n * (z * p1 - p0) / (z * z - 1.0)
            dz = p1 / dp
            z -= dz
            if abs(dz) < 1e-16:
                break
        x[i] = -z
        x[n - 1 - i] = z
        wi = 2.0 / ((1.0 - z * z) * dp * dp)
        w[i] = wi
        w[n - 1 - i] = wi
    return x, w


def _gauss_legendre_numpy(n):
    half = (n + 1) // 2
    z = np.cos(np.pi * (np.arange(half) + 0.75) / (n + 0.5))
    dp = np.ones_like(z)
    for _ in range(100):
        p0 = np.ones_like(z)
        p1 = z.copy()
        for k in range(2, n + 1):
            p0, p1 = p1, ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k
        dp = n * (z * p1 - p0) / (z * z - 1.0)
        dz = p1 / dp
        z = z - dz
        if np.max(np.abs(dz)) < 1e-16:
            break
    x = np.empty(n)
    w = np.empty(n)
    wi = 2.0 / ((1.0 - z * z) * dp * dp)
    x[:half] = -z
    x[n - half:] = z[::-1]
    w[:half] = wi
    w[n - half:] = wi[::-1]
    return x, w


def gauss_legendre(n):
    """Nodes (ascending) and weights of the n-point Gauss-Legendre rule on [-1, 1]."""
    if n < 1:
        raise ValueError("need at least one node")
    if NUMBA_AVAILABLE:
        return _gauss_legendre_jit(int(n))
    return _gauss_legendre_numpy(int(n))
