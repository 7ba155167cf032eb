#!/usr/bin/env python3
"""Derive field equations for a few densities straight from the API."""

from fractions import Fraction

from varjet import BundleSpec, Form, Lagrangian, MultiIndex, euler_lagrange, function, sym
from varjet.render import expr_latex

HALF = Fraction(1, 2)


def show(title: str, lag: Lagrangian) -> None:
    result = euler_lagrange(lag)
    print(f"== {title}")
    for (fiber, key), component in sorted(result.components.items()):
        print(f"  E_{fiber}{list(key)} = {component}")
        print(f"  latex: {expr_latex(component)}")
    print(f"  projectable: {result.is_projectable}")
    print()


def main() -> None:
    line = BundleSpec(("x",), ("u",))
    u = sym("u")
    ux = line.jet("u", MultiIndex(("x",), (1,)))
    show("harmonic oscillator", Lagrangian(line, Form(1, line.base, {(1,): HALF * (ux**2 - u**2)})))
    show("potential well V(u)", Lagrangian(line, Form(1, line.base, {(1,): HALF * ux**2 - function("V", u)})))

    plane = BundleSpec(("x", "y"), ("u",))
    px = plane.jet("u", MultiIndex(plane.base, (1, 0)))
    py = plane.jet("u", MultiIndex(plane.base, (0, 1)))
    show("Dirichlet energy", Lagrangian(plane, Form(2, plane.base, {(1, 2): HALF * (px**2 + py**2)})))

    two_fields = BundleSpec(("x",), ("u", "v"))
    ux2 = two_fields.jet("u", MultiIndex(("x",), (1,)))
    vx2 = two_fields.jet("v", MultiIndex(("x",), (1,)))
    u2, v2 = sym("u"), sym("v")
    coupled = Lagrangian(
        two_fields, Form(1, two_fields.base, {(1,): HALF * (ux2**2 + vx2**2) - u2 * v2})
    )
    show("two coupled fields", coupled)


if __name__ == "__main__":
    main()
