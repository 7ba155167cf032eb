from fractions import Fraction

import numpy as np
import pytest

from varjet.bundle import BundleSpec
from varjet.expr import Expr, sym
from varjet.forms import Form
from varjet.multiindex import MultiIndex
from varjet.oracle import (
    GridSection,
    StencilError,
    bump,
    check_action_variation,
    check_total_derivative,
    eval_jet,
    sample_section,
)
from varjet.variational import Lagrangian

B1 = BundleSpec(("x",), ("u",))
B2 = BundleSpec(("x", "y"), ("u",))
u = sym("u")
ux = B1.jet("u", MultiIndex(("x",), (1,)))
uxx = B1.jet("u", MultiIndex(("x",), (2,)))


def parabola(n=1001):
    return sample_section(B1, ((0.0, 1.0),), (n,), {"u": lambda x: x**2})


def test_eval_jet_samples_directly():
    s = parabola()
    assert eval_jet(u, s, (500,)) == pytest.approx(0.25, abs=0)


def test_eval_jet_first_derivative():
    s = parabola()
    assert eval_jet(ux, s, (500,)) == pytest.approx(1.0, abs=1e-6)


def test_eval_jet_second_derivative():
    s = parabola()
    assert eval_jet(uxx, s, (500,)) == pytest.approx(2.0, abs=1e-5)


def test_eval_jet_boundary_raises():
    s = parabola()
    with pytest.raises(StencilError):
        eval_jet(ux, s, (0,))


def test_eval_jet_order_cap():
    s = parabola()
    uxxx = B1.jet("u", MultiIndex(("x",), (3,)))
    with pytest.raises(StencilError):
        eval_jet(uxxx, s, (500,))


def test_grid_section_validation():
    with pytest.raises(ValueError):
        GridSection(B1, ((0.0, 1.0),), {"u": np.zeros(4)})
    with pytest.raises(ValueError):
        GridSection(B1, ((0.0, 1.0),), {"v": np.zeros(10)})
    with pytest.raises(ValueError):
        sample_section(BundleSpec(("x", "y", "t"), ("u",)), ((0, 1),) * 3, (8, 8, 8), {"u": lambda *a: a[0]})


def test_check_total_derivative_examples():
    s = sample_section(B1, ((0.0, 1.0),), (1000,), {"u": np.sin})
    assert check_total_derivative(u * u, s) <= 1e-4
    assert check_total_derivative(Expr.const(7), s) == 0.0
    assert check_total_derivative(sym("x"), s) <= 1e-12


def test_convergence_is_second_order():
    coarse = sample_section(B1, ((0.0, 1.0),), (400,), {"u": np.sin})
    fine = sample_section(B1, ((0.0, 1.0),), (799,), {"u": np.sin})
    ratio = check_total_derivative(u * u, coarse) / check_total_derivative(u * u, fine)
    assert 3.0 <= ratio <= 5.0


def oscillator_setup(n=2000):
    lag = Lagrangian(B1, Form(1, ("x",), {(1,): Fraction(1, 2) * (ux**2 - u**2)}))
    s = sample_section(B1, ((0.0, 1.0),), (n,), {"u": lambda x: np.sin(np.pi * x)})
    eta = sample_section(B1, ((0.0, 1.0),), (n,), {"u": bump(0.0, 1.0)})
    return lag, s, eta


def test_action_variation_oscillator():
    lag, s, eta = oscillator_setup()
    lhs, rhs, err = check_action_variation(lag, s, eta)
    assert err <= 1e-4
    assert lhs == pytest.approx(rhs, rel=1e-3)


def test_action_variation_sign_flip():
    lag, s, eta = oscillator_setup(800)
    flipped = GridSection(B1, eta.bounds, {"u": -eta.values["u"]})
    lhs1, rhs1, _ = check_action_variation(lag, s, eta)
    lhs2, rhs2, _ = check_action_variation(lag, s, flipped)
    assert lhs2 == pytest.approx(-lhs1, rel=1e-6)
    assert rhs2 == pytest.approx(-rhs1, rel=1e-6)


def test_action_variation_boundary_warning():
    lag, s, _ = oscillator_setup(800)
    eta_bad = sample_section(B1, ((0.0, 1.0),), (800,), {"u": lambda x: np.ones_like(x)})
    with pytest.warns(UserWarning):
        check_action_variation(lag, s, eta_bad)


def test_action_variation_2d():
    uxp = B2.jet("u", MultiIndex(B2.base, (1, 0)))
    uyp = B2.jet("u", MultiIndex(B2.base, (0, 1)))
    lag = Lagrangian(B2, Form(2, B2.base, {(1, 2): Fraction(1, 2) * (uxp**2 + uyp**2)}))
    bounds = ((0.0, 1.0), (0.0, 1.0))
    s = sample_section(B2, bounds, (160, 160), {"u": lambda x, y: np.sin(np.pi * x) * np.sin(np.pi * y)})
    bx, by = bump(0.0, 1.0), bump(0.0, 1.0)
    eta = sample_section(B2, bounds, (160, 160), {"u": lambda x, y: bx(x) * by(y)})
    _, _, err = check_action_variation(lag, s, eta)
    assert err <= 1e-3


def test_action_variation_requires_top_degree():
    lag = Lagrangian(B2, Form(1, B2.base, {(1,): u}))
    s = sample_section(B2, ((0.0, 1.0),) * 2, (32, 32), {"u": lambda x, y: x * y})
    with pytest.raises(ValueError):
        check_action_variation(lag, s, s)
