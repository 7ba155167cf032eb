"""Finite-difference validation of symbolic results on sampled sections.

Sections are sampled on uniform grids (base dimension 1 or 2); jet
coordinates evaluate through second-order central stencils.  The action
variation check discretizes the action with the trapezoid rule and compares
its numeric directional derivative against the Euler-Lagrange pairing, which
is an identity when the variation vanishes near the boundary.
"""

from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .bundle import BundleSpec, JetCoord
from .expr import Expr, Sym, evaluate
from .multiindex import MultiIndex
from .variational import Lagrangian, euler_lagrange

EPSILON_ACTION = 1e-4  # step for the numeric derivative of the action


class StencilError(ValueError):
    """A grid point lacks the neighbors required by the stencil."""


@dataclass(frozen=True)
class GridSection:
    """Samples of a section on a uniform grid over a box.

    ``values`` holds one array per fiber coordinate, shaped like the grid.
    """

    bundle: BundleSpec
    bounds: tuple[tuple[float, float], ...]
    values: Mapping[str, np.ndarray]

    def __post_init__(self) -> None:
        if self.bundle.m not in (1, 2):
            raise ValueError("grid sections support base dimension 1 or 2")
        if len(self.bounds) != self.bundle.m:
            raise ValueError("one bounds pair per base axis required")
        if set(self.values) != set(self.bundle.fiber):
            raise ValueError("need samples for exactly the fiber coordinates")
        shape = self.shape
        for p, arr in self.values.items():
            if arr.shape != shape:
                raise ValueError(f"samples for {p!r} have shape {arr.shape}, expected {shape}")
        if any(n < 5 for n in shape):
            raise ValueError("need at least 5 points per axis for central stencils")

    @property
    def shape(self) -> tuple[int, ...]:
        return next(iter(self.values.values())).shape

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple((hi - lo) / (n - 1) for (lo, hi), n in zip(self.bounds, self.shape))

    def axis_points(self, axis: int) -> np.ndarray:
        lo, hi = self.bounds[axis]
        return np.linspace(lo, hi, self.shape[axis])

    def coordinate_arrays(self) -> dict[Sym, np.ndarray]:
        axes = [self.axis_points(a) for a in range(self.bundle.m)]
        if self.bundle.m == 1:
            return {Sym(self.bundle.base[0]): axes[0]}
        xs, ys = np.meshgrid(axes[0], axes[1], indexing="ij")
        return {Sym(self.bundle.base[0]): xs, Sym(self.bundle.base[1]): ys}

    def perturbed(self, eta: "GridSection", epsilon: float) -> "GridSection":
        vals = {p: self.values[p] + epsilon * eta.values[p] for p in self.values}
        return GridSection(self.bundle, self.bounds, vals)


def sample_section(
    bundle: BundleSpec,
    bounds: tuple[tuple[float, float], ...],
    shape: tuple[int, ...],
    funcs: Mapping[str, Callable],
) -> GridSection:
    """Sample callables of the base coordinates onto a grid."""
    axes = [np.linspace(lo, hi, n) for (lo, hi), n in zip(bounds, shape)]
    if len(axes) == 1:
        coords = (axes[0],)
    else:
        coords = np.meshgrid(*axes, indexing="ij")
    values = {p: np.asarray(fn(*coords), dtype=float) for p, fn in funcs.items()}
    return GridSection(bundle, bounds, values)


def bump(lo: float, hi: float, inset: float = 0.15) -> Callable[[np.ndarray], np.ndarray]:
    """A C^2 bump supported strictly inside [lo, hi].

    Cubic in the support indicator, so the function and its first two
    derivatives vanish at the support boundary.
    """
    a = lo + inset * (hi - lo)
    b = hi - inset * (hi - lo)
    scale = ((b - a) / 2) ** 6

    def fn(t: np.ndarray) -> np.ndarray:
        w = np.maximum((t - a) * (b - t), 0.0)
        return w**3 / scale

    return fn


def _derivative_array(s: GridSection, fiber: str, alpha: MultiIndex) -> np.ndarray:
    """Central finite differences of a sampled fiber component.

    Supports jet order <= 2; the result is NaN-padded at the boundary where
    the stencil does not fit.
    """
    arr = s.values[fiber]
    order = alpha.order
    if order > 2:
        raise StencilError("stencils are provided up to second order only")
    h = s.spacing
    out = np.full_like(arr, np.nan)
    if order == 0:
        return arr.copy()
    if s.bundle.m == 1:
        if order == 1:
            out[1:-1] = (arr[2:] - arr[:-2]) / (2 * h[0])
        else:
            out[1:-1] = (arr[2:] - 2 * arr[1:-1] + arr[:-2]) / h[0] ** 2
        return out
    ex, ey = alpha.exponents
    if (ex, ey) == (1, 0):
        out[1:-1, :] = (arr[2:, :] - arr[:-2, :]) / (2 * h[0])
    elif (ex, ey) == (0, 1):
        out[:, 1:-1] = (arr[:, 2:] - arr[:, :-2]) / (2 * h[1])
    elif (ex, ey) == (2, 0):
        out[1:-1, :] = (arr[2:, :] - 2 * arr[1:-1, :] + arr[:-2, :]) / h[0] ** 2
    elif (ex, ey) == (0, 2):
        out[:, 1:-1] = (arr[:, 2:] - 2 * arr[:, 1:-1] + arr[:, :-2]) / h[1] ** 2
    elif (ex, ey) == (1, 1):
        out[1:-1, 1:-1] = (
            arr[2:, 2:] - arr[2:, :-2] - arr[:-2, 2:] + arr[:-2, :-2]
        ) / (4 * h[0] * h[1])
    return out


def jet_environment(e: Expr, s: GridSection) -> dict:
    """Numeric arrays for every coordinate atom appearing in ``e``."""
    env: dict = dict(s.coordinate_arrays())
    zero = s.bundle.zero_index()
    for p in s.bundle.fiber:
        env[Sym(p)] = _derivative_array(s, p, zero)
    for a in e.atoms():
        if isinstance(a, JetCoord):
            if a.vertical:
                raise ValueError("grid evaluation does not take vertical coordinates")
            env[a] = _derivative_array(s, a.fiber, a.alpha)
    return env


def eval_jet_grid(e: Expr, s: GridSection) -> np.ndarray:
    """Evaluate a jet expression over the whole grid (NaN at the boundary
    margin required by its stencils)."""
    return np.asarray(evaluate(e, jet_environment(e, s)), dtype=float) * np.ones(s.shape)


def eval_jet(e: Expr, s: GridSection, point: tuple[int, ...]) -> float:
    """Evaluate a jet expression at one grid index via central stencils."""
    order = 0
    for a in e.atoms():
        if isinstance(a, JetCoord) and not a.vertical:
            order = max(order, a.alpha.order)
    margin = 1 if order else 0
    for idx, n in zip(point, s.shape):
        if not margin <= idx < n - margin:
            raise StencilError(f"point {point} lacks stencil support at order {order}")
    value = eval_jet_grid(e, s)[tuple(point)]
    if np.isnan(value):
        raise StencilError(f"point {point} lacks stencil support at order {order}")
    return float(value)


def _interior(m: int, margin: int):
    return (slice(margin, -margin),) * m


def check_total_derivative(e: Expr, s: GridSection, direction: str | None = None) -> float:
    """Largest relative gap between the evaluated total derivative and the
    finite-difference derivative of the evaluated expression.

    Normalized by the larger of 1 and the field magnitude, over interior
    points with full nested-stencil support.
    """
    from .jetcalc import total_derivative

    bundle = s.bundle
    direction = direction or bundle.base[0]
    axis = bundle.base.index(direction)
    order = 0
    for a in e.atoms():
        if isinstance(a, JetCoord) and not a.vertical:
            order = max(order, a.alpha.order)
    lhs = eval_jet_grid(total_derivative(e, direction, bundle, max(order, 0), None), s)
    field = eval_jet_grid(e, s)
    h = s.spacing[axis]
    rhs = np.full_like(field, np.nan)
    if bundle.m == 1:
        rhs[1:-1] = (field[2:] - field[:-2]) / (2 * h)
    elif axis == 0:
        rhs[1:-1, :] = (field[2:, :] - field[:-2, :]) / (2 * h)
    else:
        rhs[:, 1:-1] = (field[:, 2:] - field[:, :-2]) / (2 * h)
    sl = _interior(bundle.m, 2)
    gap = np.max(np.abs(lhs[sl] - rhs[sl]))
    scale = max(1.0, float(np.max(np.abs(lhs[sl]))))
    return float(gap) / scale


def _trapezoid_weights(shape: tuple[int, ...]) -> np.ndarray:
    w = np.ones(shape)
    for axis in range(len(shape)):
        edge = [slice(None)] * len(shape)
        edge[axis] = 0
        w[tuple(edge)] *= 0.5
        edge[axis] = -1
        w[tuple(edge)] *= 0.5
    return w


def _integrate(values: np.ndarray, spacing: tuple[float, ...]) -> float:
    w = _trapezoid_weights(values.shape)
    total = float(np.sum(w * values))
    for h in spacing:
        total *= h
    return total


def check_action_variation(
    lag: Lagrangian, s: GridSection, eta: GridSection, epsilon: float = EPSILON_ACTION
) -> tuple[float, float, float]:
    """Compare the numeric directional derivative of the discretized action
    against the Euler-Lagrange pairing with the variation.

    Returns (derivative, pairing, relative error).  The variation must
    vanish with its first derivatives near the grid boundary, otherwise the
    identity picks up boundary terms and a warning-level mismatch.
    """
    if not lag.is_classical:
        raise ValueError("action comparison needs degree equal to the base dimension")
    bundle = lag.bundle
    margin = 2
    sl = _interior(bundle.m, margin)
    border = np.ones(s.shape, dtype=bool)
    border[_interior(bundle.m, max(2, int(0.05 * min(s.shape))))] = False
    for p in bundle.fiber:
        if np.max(np.abs(eta.values[p][border])) > 1e-12:
            import warnings

            warnings.warn("variation does not vanish near the boundary; expect boundary terms")
            break

    density = lag.value.coefficient(tuple(range(1, bundle.m + 1)))
    spacing = s.spacing

    def action(section: GridSection) -> float:
        vals = eval_jet_grid(density, section)[sl]
        return _integrate(vals, spacing)

    lhs = (action(s.perturbed(eta, epsilon)) - action(s.perturbed(eta, -epsilon))) / (2 * epsilon)

    result = euler_lagrange(lag)
    pairing = np.zeros(s.shape)[sl]
    for p in bundle.fiber:
        component = result.component(p)
        pairing = pairing + eval_jet_grid(component, s)[sl] * eta.values[p][sl]
    rhs = _integrate(pairing, spacing)

    gap = abs(lhs - rhs)
    scale = max(abs(lhs), abs(rhs), 1e-14)
    return lhs, rhs, gap / scale
