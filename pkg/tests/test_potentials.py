import math

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from semiclassical import (
    analytic_spectrum,
    derivative,
    evaluate,
    load_tabulated,
    make_catalog_potential,
    read_tabulated_csv,
    second_derivative,
    turning_points,
    well_frame,
)
from semiclassical.potentials import QuantumScale, turning_points_shifted

CLASS_FIVE_SAMPLES = {
    "harmonic": ({"k": 1.7}, (-3.0, 3.0)),
    "poschl_teller": ({"V0": 2.0, "alpha": 0.7}, (-4.0, 4.0)),
    "trig_tan2": ({"V0": 1.3, "alpha": 1.1}, (-1.35, 1.35)),
    "morse": ({"D": 3.0, "alpha": 0.8}, (-1.0, 6.0)),
}


def test_poschl_teller_coefficients():
    cf = make_catalog_potential("poschl_teller", {"V0": 1, "alpha": 1}).class_five
    assert (cf.a2, cf.a1, cf.a0, cf.A) == (-1.0, 0.0, 1.0, 1.0)
    assert cf.C == -1.0


def test_harmonic_coefficients():
    cf = make_catalog_potential("harmonic", {"k": 1}).class_five
    assert (cf.a2, cf.a1, cf.a0, cf.A) == (0.0, 0.0, 1.0, 1.0)


def test_morse_coefficients():
    pot = make_catalog_potential("morse", {"D": 1, "alpha": 1})
    cf = pot.class_five
    assert (cf.a1, cf.a2, cf.a0) == (-1.0, 0.0, 0.0)
    # s = exp(-x): ds/dx = -s, checked against a central difference
    x = np.linspace(-1, 4, 11)
    fd = (cf.s(x + 1e-6) - cf.s(x - 1e-6)) / 2e-6
    np.testing.assert_allclose(fd, cf.riccati(x), rtol=1e-8)
    np.testing.assert_allclose(cf.value(x), evaluate(pot, x), rtol=1e-13, atol=1e-13)


def test_no_class_five_for_gaussian():
    assert make_catalog_potential("gaussian_well", {"V0": 5, "w": 1}).class_five is None


@pytest.mark.parametrize("kind", sorted(CLASS_FIVE_SAMPLES))
def test_class_five_identities_hold_pointwise(kind):
    params, (lo, hi) = CLASS_FIVE_SAMPLES[kind]
    pot = make_catalog_potential(kind, params)
    cf = pot.class_five
    x = np.linspace(lo, hi, 100)
    V = evaluate(pot, x)
    assert np.max(np.abs(V - cf.value(x)) / (1 + np.abs(V))) <= 1e-12
    ds = cf.ds(x)
    assert np.max(np.abs(ds - cf.riccati(x)) / (1 + np.abs(ds))) <= 1e-12


@pytest.mark.parametrize(
    "kind,params",
    [("harmonic", {"k": 0}), ("poschl_teller", {"V0": -1, "alpha": 1}), ("morse", {"D": 1}),
     ("nonsense", {"k": 1}), ("gaussian_well", {"V0": 1, "w": 1, "bogus": 2})],
)
def test_bad_catalog_requests(kind, params):
    with pytest.raises(ValueError):
        make_catalog_potential(kind, params)


def test_hyphenated_kind_names_accepted():
    assert make_catalog_potential("poschl-teller", {"V0": 1, "alpha": 1}).kind == "poschl_teller"


def test_evaluate_examples(harmonic, poschl_teller):
    assert evaluate(harmonic, 0.5) == 0.25
    assert evaluate(poschl_teller, 0.0) == -1.0
    assert derivative(harmonic, 2.0) == 4.0


@pytest.mark.parametrize("kind", ["harmonic", "poschl_teller", "trig_tan2", "morse", "gaussian_well"])
def test_derivatives_match_finite_differences(kind):
    params = CLASS_FIVE_SAMPLES.get(kind, ({"V0": 5, "w": 1}, None))[0]
    pot = make_catalog_potential(kind, params)
    h = 1e-5
    for x in (-0.6, -0.1, 0.3, 0.9):
        fd1 = (evaluate(pot, x + h) - evaluate(pot, x - h)) / (2 * h)
        fd2 = (evaluate(pot, x + h) - 2 * evaluate(pot, x) + evaluate(pot, x - h)) / h**2
        assert derivative(pot, x) == pytest.approx(fd1, rel=1e-8, abs=1e-8)
        assert second_derivative(pot, x) == pytest.approx(fd2, rel=1e-4, abs=1e-4)


def test_evaluate_outside_domain(tan2):
    with pytest.raises(ValueError):
        evaluate(tan2, 2.0)


def test_well_frames(harmonic, poschl_teller, gaussian):
    wf = well_frame(harmonic)
    assert (wf.x_min, wf.V_min, wf.k, wf.depth) == (0.0, 0.0, 1.0, math.inf)
    wf = well_frame(poschl_teller)
    assert (wf.x_min, wf.V_min, wf.depth) == (0.0, -1.0, 1.0)
    assert wf.k == pytest.approx(1.0, abs=1e-14)
    wf = well_frame(gaussian)
    assert (wf.x_min, wf.V_min, wf.depth) == (0.0, -5.0, 5.0)
    assert wf.k == pytest.approx(5.0, abs=1e-14)


def test_curvature_agrees_with_second_derivative(morse, tan2):
    for pot in (morse, tan2):
        assert well_frame(pot).k == pytest.approx(second_derivative(pot, 0.0) / 2, rel=1e-14)


def test_turning_point_examples(harmonic, poschl_teller, morse):
    assert turning_points(harmonic, 0.25) == pytest.approx((-0.5, 0.5), abs=1e-15)
    xm, xp = turning_points(poschl_teller, -0.5)
    assert xp == pytest.approx(math.acosh(math.sqrt(2)), abs=1e-14)
    assert xm == pytest.approx(-0.8813736, abs=1e-7)
    xm, xp = turning_points(morse, -0.75)
    # (1 - e^-x)^2 = 1/4  =>  e^-x in {1/2, 3/2}
    assert xm == pytest.approx(-math.log(1.5), abs=1e-14)
    assert xp == pytest.approx(math.log(2.0), abs=1e-14)
    for x in (xm, xp):
        assert evaluate(morse, x) == pytest.approx(-0.75, abs=1e-12)


def test_turning_points_reject_out_of_window(poschl_teller):
    for e in (-1.5, -1.0, 0.0, 0.3):
        with pytest.raises(ValueError):
            turning_points(poschl_teller, e)


@seed(5)
@settings(max_examples=80, deadline=None)
@given(kind=st.sampled_from(["poschl_teller", "morse", "gaussian_well", "trig_tan2", "harmonic"]),
       frac=st.floats(1e-6, 1 - 1e-6))
def test_turning_points_reproduce_energy(kind, frac):
    params = {"poschl_teller": {"V0": 1, "alpha": 1}, "morse": {"D": 1, "alpha": 1},
              "gaussian_well": {"V0": 5, "w": 1}, "trig_tan2": {"V0": 1, "alpha": 1},
              "harmonic": {"k": 1}}[kind]
    pot = make_catalog_potential(kind, params)
    scale = pot.depth if math.isfinite(pot.depth) else 10.0
    e = pot.V_min + frac * scale
    xm, xp = turning_points(pot, e)
    assert xm < pot.x_min < xp
    for x in (xm, xp):
        assert abs(evaluate(pot, x) - e) <= 1e-12 * max(abs(e), scale)


def test_analytic_spectrum_examples():
    pt = analytic_spectrum("poschl_teller", {"V0": 1, "alpha": 1}, 0.1)
    assert pt[0] == pytest.approx(-0.9048751, abs=1e-7)
    assert len(pt) == 10
    assert analytic_spectrum("harmonic", {"k": 1}, 0.1, n_max=0)[0] == pytest.approx(0.1, rel=1e-15)
    assert analytic_spectrum("morse", {"D": 1, "alpha": 1}, 0.1)[0] == pytest.approx(-0.9025, rel=1e-15)
    t2 = analytic_spectrum("trig_tan2", {"V0": 1, "alpha": 1}, 0.1, n_max=0)[0]
    assert t2 == pytest.approx(0.1051249, abs=1e-7)
    mu = (1 + math.sqrt(401)) / 2
    assert t2 == pytest.approx(0.01 * mu, rel=1e-13)


def test_analytic_spectrum_errors():
    with pytest.raises(ValueError):
        analytic_spectrum("gaussian_well", {"V0": 5, "w": 1}, 0.1)
    with pytest.raises(ValueError):
        analytic_spectrum("harmonic", {"k": 1}, 0.1)
    with pytest.raises(ValueError):
        analytic_spectrum("harmonic", {"k": 1}, -0.1, n_max=3)


@pytest.mark.parametrize("kind,params", [("poschl_teller", {"V0": 1, "alpha": 1}), ("morse", {"D": 1, "alpha": 1}),
                                         ("poschl_teller", {"V0": 3, "alpha": 0.5}), ("morse", {"D": 2, "alpha": 2})])
def test_analytic_spectrum_ordered_inside_window(kind, params):
    pot = make_catalog_potential(kind, params)
    levels = np.array(analytic_spectrum(kind, params, 0.1))
    assert np.all(np.diff(levels) > 0)
    assert np.all(levels > pot.V_min) and np.all(levels < pot.V_min + pot.depth)


@pytest.mark.parametrize("kind,params", [("poschl_teller", {"V0": 1, "alpha": 1}), ("morse", {"D": 1, "alpha": 1}),
                                         ("trig_tan2", {"V0": 1, "alpha": 1}), ("harmonic", {"k": 2})])
def test_shift_moves_everything_by_the_constant(kind, params):
    base = make_catalog_potential(kind, params)
    moved = make_catalog_potential(kind, {**params, "shift": 1.0})
    x = np.linspace(-0.5, 0.5, 7)
    np.testing.assert_allclose(evaluate(moved, x) - evaluate(base, x), 1.0, atol=1e-15)
    a = analytic_spectrum(kind, params, 0.1, n_max=4)
    b = analytic_spectrum(kind, {**params, "shift": 1.0}, 0.1, n_max=4)
    np.testing.assert_allclose(np.subtract(b, a), 1.0, atol=1e-15)
    assert base.shifted_by(1.0).V_min == moved.V_min
    np.testing.assert_allclose(moved.class_five.value(x), evaluate(moved, x), atol=1e-14)


def test_quantum_scale_validation():
    assert QuantumScale(0.1).beta == 0.1
    for bad in (0.0, -1.0, math.inf, math.nan):
        with pytest.raises(ValueError):
            QuantumScale(bad)


# -- tabulated potentials -----------------------------------------------------


def test_tabulated_parabola():
    x = np.linspace(-2, 2, 41)
    pot = load_tabulated(x, x**2)
    assert evaluate(pot, 0.5) == pytest.approx(0.25, abs=1e-6)
    assert pot.domain == (-2.0, 2.0)
    with pytest.raises(ValueError):
        evaluate(pot, 2.5)


def test_tabulated_poschl_teller_curvature():
    x = np.linspace(-8, 8, 201)
    wf = well_frame(load_tabulated(x, -1 / np.cosh(x) ** 2))
    assert wf.k == pytest.approx(1.0, abs=1e-3)
    assert wf.x_min == pytest.approx(0.0, abs=1e-10)


def test_tabulated_off_grid_minimum():
    # minimum between samples: located by the root of the interpolant's slope
    x = np.linspace(-3, 3, 61) + 0.013
    pot = load_tabulated(x, (x - 0.2) ** 2)
    slope = pot.d1
    assert float(slope(pot.x_min)) == pytest.approx(0.0, abs=1e-10)
    assert abs(pot.x_min - 0.2) < 0.05


def test_tabulated_turning_points_by_bisection():
    x = np.linspace(-6, 6, 241)
    pot = load_tabulated(x, -5 * np.exp(-(x**2)))
    xm, xp = turning_points(pot, -2.0)
    for xt in (xm, xp):
        assert evaluate(pot, xt) == pytest.approx(-2.0, abs=1e-12 * 5)
    root = brentq(lambda z: -5 * math.exp(-z * z) + 2.0, 0, 3)
    assert xp == pytest.approx(root, abs=1e-4)


@pytest.mark.parametrize(
    "x,V",
    [
        ([0, 1, 1, 2, 3, 4, 5, 6, 7], [4, 1, 1, 0, 1, 2, 3, 4, 5]),  # duplicate x
        (list(range(7)), [3, 2, 1, 0, 1, 2, 3]),  # too few
        (list(range(9)), [0, 1, 2, 3, 4, 5, 6, 7, 8]),  # minimum at boundary
        (list(range(9)), [4, 1, 3, 0, 3, 1, 4, 5, 6]),  # two wells
        ([0, 2, 1, 3, 4, 5, 6, 7, 8], [4, 3, 2, 1, 0, 1, 2, 3, 4]),  # non-monotone x
    ],
)
def test_tabulated_rejects_bad_samples(x, V):
    with pytest.raises(ValueError):
        load_tabulated(x, V)


def test_read_tabulated_csv_with_and_without_header(tmp_path):
    x = np.linspace(-2, 2, 21)
    with_header = tmp_path / "a.csv"
    with_header.write_text("x,V\n" + "".join(f"{a},{a * a}\n" for a in x.tolist()), encoding="utf-8")
    bare = tmp_path / "b.csv"
    bare.write_text("".join(f"{a},{a * a}\n" for a in x.tolist()), encoding="utf-8")
    for path in (with_header, bare):
        pot = read_tabulated_csv(path)
        assert evaluate(pot, 1.0) == pytest.approx(1.0, abs=1e-12)
    broken = tmp_path / "c.csv"
    broken.write_text("x,V\n1,2\nfoo,bar\n", encoding="utf-8")
    with pytest.raises(ValueError):
        read_tabulated_csv(broken)


def test_turning_points_shifted_uses_bottom_frame(poschl_teller):
    assert turning_points_shifted(poschl_teller, 0.5) == turning_points(poschl_teller, -0.5)
