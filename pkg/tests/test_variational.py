from fractions import Fraction
from random import Random

import pytest

from varjet.bundle import BundleSpec
from varjet.expr import Expr, Sym, function, sym
from varjet.forms import Form
from varjet.jetcalc import formal_exterior_differential, total_derivative
from varjet.multiindex import MultiIndex
from varjet.randgen import rand_lagrangian
from varjet.variational import (
    Lagrangian,
    euler_lagrange,
    momentum,
    momentum_divergence,
    vertical_differential,
)
from varjet.checks import el_classical_examples, el_coordinate_formula, el_linearity, null_lagrangians, projectability

B1 = BundleSpec(("x",), ("u",))
B2 = BundleSpec(("x", "y"), ("u",))
HALF = Fraction(1, 2)

x, u = sym("x"), sym("u")
ux = B1.jet("u", MultiIndex(("x",), (1,)))
uxx = B1.jet("u", MultiIndex(("x",), (2,)))
du = B1.jet("u", MultiIndex.zero(("x",)), vertical=True)
dux = B1.jet("u", MultiIndex(("x",), (1,)), vertical=True)


def oscillator():
    return Lagrangian(B1, Form(1, ("x",), {(1,): HALF * (ux**2 - u**2)}))


def dirichlet():
    ux2 = B2.jet("u", MultiIndex(B2.base, (1, 0)))
    uy2 = B2.jet("u", MultiIndex(B2.base, (0, 1)))
    return Lagrangian(B2, Form(2, B2.base, {(1, 2): HALF * (ux2**2 + uy2**2)}))


def test_vertical_differential_examples():
    from varjet.expr import diff

    lag = Lagrangian(B1, Form(1, ("x",), {(1,): HALF * ux**2}))
    assert vertical_differential(lag).value == Form(1, ("x",), {(1,): ux * dux})

    potential = Lagrangian(B1, Form(1, ("x",), {(1,): function("V", u)}))
    v_prime = diff(function("V", u), Sym("u"))
    assert vertical_differential(potential).value == Form(1, ("x",), {(1,): v_prime * du})

    zero = Lagrangian(B1, Form(1, ("x",), {}))
    assert vertical_differential(zero).value.is_zero


def test_momentum_examples():
    lag = Lagrangian(B1, Form(1, ("x",), {(1,): HALF * ux**2}))
    b = momentum(lag)
    assert b.value == Form(0, ("x",), {(): ux * du})
    assert (b.r, b.s, b.degree) == (1, 0, 0)

    dir_lag = dirichlet()
    bd = momentum(dir_lag)
    ux2 = B2.jet("u", MultiIndex(B2.base, (1, 0)))
    uy2 = B2.jet("u", MultiIndex(B2.base, (0, 1)))
    du2 = B2.jet("u", MultiIndex.zero(B2.base), vertical=True)
    assert bd.value == Form(1, B2.base, {(2,): ux2 * du2, (1,): -(uy2 * du2)})

    no_jets = Lagrangian(B1, Form(1, ("x",), {(1,): u * x}))
    assert momentum(no_jets).value.is_zero


def test_momentum_degree_error():
    zero_form = Lagrangian(B1, Form(0, ("x",), {(): u}))
    with pytest.raises(ValueError):
        momentum(zero_form)


def test_euler_lagrange_oscillator():
    result = euler_lagrange(oscillator())
    assert result.component("u") == -u - uxx
    assert result.is_projectable


def test_euler_lagrange_dirichlet():
    result = euler_lagrange(dirichlet())
    uxx2 = B2.jet("u", MultiIndex(B2.base, (2, 0)))
    uyy2 = B2.jet("u", MultiIndex(B2.base, (0, 2)))
    assert result.component("u") == -(uxx2 + uyy2)


def test_euler_lagrange_potential_only():
    lag = Lagrangian(B1, Form(1, ("x",), {(1,): function("V", u)}))
    result = euler_lagrange(lag)
    assert str(result.component("u")) == "V'(u)"


def test_below_top_degree_is_projectable():
    uy2 = B2.jet("u", MultiIndex(B2.base, (0, 1)))
    lag = Lagrangian(B2, Form(1, B2.base, {(1,): uy2}))
    result = euler_lagrange(lag)
    assert result.is_projectable
    assert all(v.is_zero for v in result.projectability_report.values())


def test_divergence_matches_plain_differential_at_top_degree():
    rng = Random(17)
    for _ in range(15):
        m = rng.randint(1, 3)
        bundle = BundleSpec(("x", "y", "t")[:m], ("u", "v")[: rng.randint(1, 2)])
        lag = rand_lagrangian(rng, bundle, m)
        assert momentum_divergence(lag).value == formal_exterior_differential(momentum(lag)).value


def test_null_lagrangian_exact():
    g = x * u**2 + 3 * u
    density = total_derivative(g, "x", B1, 0, None)
    lag = Lagrangian(B1, Form(1, ("x",), {(1,): density}))
    result = euler_lagrange(lag)
    assert result.component("u").is_zero


def test_lagrangian_validation():
    with pytest.raises(Exception):
        Lagrangian(B1, Form(1, ("x",), {(1,): uxx}))
    with pytest.raises(Exception):
        Lagrangian(B1, Form(1, ("x",), {(1,): du}))
    assert oscillator().is_classical
    below = Lagrangian(B2, Form(1, B2.base, {(1,): u}))
    assert not below.is_classical


def test_randomized_suites():
    assert projectability(seed=2, cases=40).passed
    assert el_coordinate_formula(seed=2, cases=20).passed
    assert el_linearity(seed=2, cases=10).passed
    assert null_lagrangians(seed=2, cases=10).passed
    assert el_classical_examples().passed
