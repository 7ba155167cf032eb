#!/usr/bin/env python3
"""Grid-refinement study for the finite-difference oracle.

Shows second-order convergence of the total-derivative check and the
action-variation check on the oscillator density.
"""

import numpy as np

from varjet import BundleSpec, check_action_variation, check_total_derivative, sample_section, sym
from varjet.checks import _oscillator_setup


def main() -> None:
    bundle = BundleSpec(("x",), ("u",))
    u = sym("u")
    print(f"{'points':>8} {'derivative err':>16} {'ratio':>7} {'action err':>14} {'ratio':>7}")
    prev_d = prev_a = None
    n = 125
    for _ in range(5):
        n = 2 * n - 1
        section = sample_section(bundle, ((0.0, 1.0),), (n,), {"u": np.sin})
        d_err = check_total_derivative(u * u, section)
        lag, s, eta = _oscillator_setup(n)
        _, _, a_err = check_action_variation(lag, s, eta)
        d_ratio = f"{prev_d / d_err:7.2f}" if prev_d else "      -"
        a_ratio = f"{prev_a / a_err:7.2f}" if prev_a else "      -"
        print(f"{n:>8} {d_err:>16.3e} {d_ratio} {a_err:>14.3e} {a_ratio}")
        prev_d, prev_a = d_err, a_err


if __name__ == "__main__":
    main()
