"""Fiberwise jets of base-preserving morphisms and section-level checks.

A base-preserving morphism between two bundles over the same base is given
by target components in the source coordinates.  Its fiberwise r-jet
collects fiber-direction partials; the fiberwise (k, r)-jet adds partials
in all source directions.  Section families over a 2-fibered tower support
the jet reindexing law and the commutation of the formal exterior
differential with evaluation along prolonged sections.
"""

from dataclasses import dataclass
from fractions import Fraction

from .bundle import BundleSpec, CoordinateError, FiberwiseCoord, jet_atom
from .expr import Expr, FuncAtom, Sym, diff, substitute
from .forms import Form, exterior_derivative, substitute_form
from .jetcalc import Morphism, section_bindings
from .multiindex import MultiIndex, indices_up_to


def _check_total_space(components: dict[str, Expr], bundle: BundleSpec, what: str) -> None:
    allowed = {Sym(n) for n in bundle.base + bundle.fiber}
    for name, e in components.items():
        for a in e.atoms():
            if isinstance(a, Sym) and a in allowed:
                continue
            if isinstance(a, FuncAtom):
                continue
            raise CoordinateError(f"{what} component {name!r} uses atom {a!r} outside the source coordinates")


@dataclass(frozen=True)
class BaseMorphism:
    """Base-preserving map between bundles over a common base: one component
    per target fiber name, written in source coordinates."""

    source: BundleSpec
    target_fibers: tuple[str, ...]
    components: dict[str, Expr]

    def __post_init__(self) -> None:
        if set(self.components) != set(self.target_fibers):
            raise ValueError("need exactly one component per target fiber name")
        _check_total_space(self.components, self.source, "morphism")


@dataclass(frozen=True)
class SectionFamily:
    """A section of the top level of a 2-fibered tower, depending on all
    intermediate-space coordinates."""

    bundle: BundleSpec
    components: dict[str, Expr]

    def __post_init__(self) -> None:
        if not self.bundle.second:
            raise ValueError("section families need a 2-fibered bundle")
        if set(self.components) != set(self.bundle.second):
            raise ValueError("need exactly one component per top-level fiber name")
        _check_total_space(self.components, self.bundle, "section")


def fiberwise_prolongation(f: BaseMorphism, r: int) -> dict[tuple[str, MultiIndex], Expr]:
    """Fiber-direction partials of the components up to order r."""
    if r < 0:
        raise ValueError("jet order must be non-negative")
    src = f.source
    out: dict[tuple[str, MultiIndex], Expr] = {}
    for beta in indices_up_to(src.fiber, r):
        for a, comp in f.components.items():
            out[(a, beta)] = _iterated_partial(comp, beta)
    return out


def _iterated_partial(e: Expr, alpha: MultiIndex) -> Expr:
    for name, exp in zip(alpha.names, alpha.exponents):
        for _ in range(exp):
            e = diff(e, Sym(name))
    return e


def fiberwise_jet(f: BaseMorphism, k: int, r: int) -> dict[FiberwiseCoord, Expr]:
    """All partials d_gamma d_beta of the components, beta over fiber
    directions (order <= r), gamma over every source direction (order <= k)."""
    if k < 0 or r < 0:
        raise ValueError("jet orders must be non-negative")
    src = f.source
    all_names = src.base + src.fiber
    prolonged = fiberwise_prolongation(f, r)
    out: dict[FiberwiseCoord, Expr] = {}
    for (a, beta), val in prolonged.items():
        for gamma in indices_up_to(all_names, k):
            out[FiberwiseCoord(a, beta, gamma)] = _iterated_partial(val, gamma)
    return out


def associated_jet_map(f: BaseMorphism) -> dict[tuple[str, MultiIndex], Expr]:
    """First-jet image of the morphism: the components together with their
    chain-rule derivatives through the source fiber jets."""
    src = f.source
    zero = src.zero_index()
    out: dict[tuple[str, MultiIndex], Expr] = {}
    for a, comp in f.components.items():
        out[(a, zero)] = comp
        for name in src.base:
            val = diff(comp, Sym(name))
            for p in src.fiber:
                val = val + diff(comp, Sym(p)) * Expr.atom(jet_atom(p, MultiIndex.unit(src.base, name)))
            out[(a, zero.incremented(name))] = val
    return out


@dataclass(frozen=True)
class OperatorOrderReport:
    """Outcome of the frozen-fiber dependency check.

    ``precondition_met`` records whether the two fiberwise (k, 1)-jets agree
    at the point; only then is ``conclusion_holds`` meaningful.
    """

    precondition_met: bool
    conclusion_holds: bool | None
    witness: tuple | None = None

    @property
    def holds(self) -> bool:
        return bool(self.precondition_met and self.conclusion_holds)


def check_operator_order(
    f: BaseMorphism, g: BaseMorphism, k: int, point: dict[str, Fraction]
) -> OperatorOrderReport:
    """If two morphisms share their fiberwise (k, 1)-jet at a point, their
    first-jet images restricted to the frozen fiber share the k-jet there.

    The point assigns exact rational values to every source coordinate.  The
    conclusion freezes base and fiber values but leaves the first-jet fiber
    variables symbolic, comparing the resulting expressions exactly.
    """
    src = f.source
    if g.source != src or g.target_fibers != f.target_fibers:
        raise ValueError("morphisms must share source and target")
    point_bindings = {Sym(n): Expr.const(point[n]) for n in src.base + src.fiber}

    jf, jg = fiberwise_jet(f, k, 1), fiberwise_jet(g, k, 1)
    for coord in jf:
        if substitute(jf[coord], point_bindings) != substitute(jg[coord], point_bindings):
            return OperatorOrderReport(False, None, (coord,))

    hf, hg = associated_jet_map(f), associated_jet_map(g)
    freeze = dict(point_bindings)
    fiber_directions = [Sym(p) for p in src.fiber] + [
        jet_atom(p, MultiIndex.unit(src.base, name)) for p in src.fiber for name in src.base
    ]
    for slot in sorted(hf, key=lambda t: (t[0], t[1].sort_key())):
        stack = [(hf[slot], hg[slot], 0)]
        while stack:
            ef, eg, depth = stack.pop()
            if substitute(ef, freeze) != substitute(eg, freeze):
                return OperatorOrderReport(True, False, (slot, depth))
            if depth < k:
                for d in fiber_directions:
                    stack.append((diff(ef, d), diff(eg, d), depth + 1))
    return OperatorOrderReport(True, True)


def section_jet_reindex(s: SectionFamily, r: int) -> dict[tuple[str, MultiIndex, MultiIndex], Expr]:
    """Base-direction jets of a section family, then fiber-direction partials
    of those, truncated to combined order <= r."""
    if r < 0:
        raise ValueError("jet order must be non-negative")
    bundle = s.bundle
    out: dict[tuple[str, MultiIndex, MultiIndex], Expr] = {}
    for alpha in indices_up_to(bundle.base, r):
        for a, comp in s.components.items():
            base_jet = _iterated_partial(comp, alpha)
            for beta in indices_up_to(bundle.fiber, r - alpha.order):
                out[(a, alpha, beta)] = _iterated_partial(base_jet, beta)
    return out


def variation_along_section(s: SectionFamily, eta: dict[str, Expr]) -> dict[str, Expr]:
    """Reduce a variation to intermediate-space components by composing any
    top-level coordinate dependence with the section itself."""
    top = {Sym(a): s.components[a] for a in s.bundle.second}
    reduced = {a: substitute(e, top) for a, e in eta.items()}
    _check_total_space(reduced, s.bundle, "variation")
    return reduced


def check_functional_commutation(
    morphism: Morphism, s: SectionFamily, eta: dict[str, Expr]
) -> bool:
    """Evaluating the formal exterior differential along a prolonged section
    equals differentiating the evaluated form on the intermediate space.

    ``morphism`` lives over the intermediate-space view of the tower, with a
    vertical argument; ``eta`` gives the variation components (top-level
    coordinates allowed, resolved through the section).
    """
    from .jetcalc import formal_exterior_differential

    view = morphism.bundle
    tower = s.bundle
    if view != tower.over_fiber():
        raise ValueError("morphism must live over the intermediate-space view of the tower")
    if morphism.s is None:
        raise ValueError("commutation check needs a vertical argument")
    variations = variation_along_section(s, eta)

    differential = formal_exterior_differential(morphism)
    lhs_bindings = section_bindings(view, s.components, variations, differential.r, differential.s)
    lhs = substitute_form(differential.value, lhs_bindings)

    rhs_bindings = section_bindings(view, s.components, variations, morphism.r, morphism.s)
    evaluated = substitute_form(morphism.value, rhs_bindings)
    coordinate_atoms = [Sym(n) for n in view.base]
    rhs = exterior_derivative(evaluated, coordinate_atoms)
    return lhs == rhs
