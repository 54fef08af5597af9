"""Spectral decisions for the seven properties and their witnesses.

Verdicts come from exact inertia and kernel computations only.  Witnesses
are BKN solutions built from the same spectral data; some are approximate
(read off a deformation family) and carry an exact residual bound.  A YES
verdict without a constructible witness is reported with a note.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .bkn import (
    BknSolution,
    DeformationWitness,
    classify,
    deformation_witness,
    residual,
    signed_vector_solution,
    witness_from_kernel,
)
from .core import (
    Cocycle,
    LabeledGraph,
    cohomology_classes,
    format_rational,
    normalize_orientation,
    sign,
)
from .exactla import (
    Inertia,
    SymRatMatrix,
    inertia,
    is_supersingular,
    is_weakly_singular,
    kernel_basis,
)
from .operators import (
    SignDecomposition,
    admissible_s_functions,
    build_A_lambda,
    build_A_plus,
    build_H,
    sign_components,
)

__all__ = [
    "YES",
    "NO",
    "UNDETERMINED",
    "PROPERTIES",
    "IMPLICATIONS",
    "Witness",
    "Decision",
    "PropertyReport",
    "decide_I",
    "decide_E",
    "decide_VE",
    "decide_F",
    "decide_VF",
    "decide_NPC",
    "decide_all",
    "check_diagram",
    "verify_witness",
]

YES, NO, UNDETERMINED = "yes", "no", "undetermined"
PROPERTIES = ("I", "HI", "E", "VE", "F", "VF", "NPC")
IMPLICATIONS = (
    ("F", "E"), ("F", "VF"), ("E", "VE"), ("NPC", "VE"), ("NPC", "VF"),
    ("VE", "I"), ("VF", "HI"), ("VF", "VE"), ("I", "HI"), ("HI", "I"),
)
DEFAULT_TOL = Fraction(1, 2 ** 20)

# flags of the solution demanded by each property
REQUIRED_FLAGS = {
    "I": ("compatible",),
    "HI": ("compatible",),
    "E": ("compatible", "symmetric", "e_shaped"),
    "VE": ("compatible", "symmetric"),
    "F": ("compatible", "symmetric", "positive_length", "f_shaped"),
    "VF": ("compatible", "symmetric", "positive_length"),
    "NPC": ("compatible", "symmetric", "positive_length", "npc"),
}


@dataclass(frozen=True)
class Witness:
    criterion: str
    solution: BknSolution | None = None
    vector: tuple[Fraction, ...] | None = None
    exact: bool = True
    residual_bound: Fraction = Fraction(0)
    class_index: int | None = None
    cocycle: Cocycle | None = None
    s: tuple[int, ...] | None = None
    deformation: DeformationWitness | None = None

    def to_dict(self, g: LabeledGraph, floats: bool = False) -> dict:
        out: dict = {"criterion": self.criterion, "exact": self.exact,
                     "residual_bound": format_rational(self.residual_bound)}
        if self.vector is not None:
            out["vector"] = [format_rational(x) for x in self.vector]
            if floats:
                out["vector_float"] = [float(x) for x in self.vector]
        if self.class_index is not None:
            out["class_index"] = self.class_index
        if self.cocycle is not None:
            out["cocycle_negative_edges"] = [g.edges[e].id for e in self.cocycle.negative_edges()]
        if self.s is not None:
            out["s"] = list(self.s)
        if self.deformation is not None:
            dw = self.deformation
            out["t"] = format_rational(dw.t)
            out["bracket"] = [format_rational(x) for x in dw.bracket]
            out["support"] = list(dw.support)
        if self.solution is not None:
            out["solution"] = self.solution.to_dict(g, floats)
            out["flags"] = classify(g, self.solution).as_dict()
        return out


@dataclass(frozen=True)
class Decision:
    verdict: str
    witness: Witness | None = None
    notes: tuple[str, ...] = ()
    spectral: tuple[dict, ...] = ()


def _prepare(g: LabeledGraph) -> LabeledGraph:
    g.require_connected()
    return normalize_orientation(g)[0]


def _zero_vertex_witness(g: LabeledGraph) -> Witness | None:
    """a = e_v, gamma = 0 at a zero-charge vertex: compatible and symmetric."""
    for v, k in enumerate(g.charges):
        if k == 0:
            a = [0] * g.n
            a[v] = 1
            sol = BknSolution(tuple(a), (0,) * (2 * g.n_edges))
            return Witness("zero-charge vertex", solution=sol)
    return None


def _all_zero_witness(g: LabeledGraph) -> Witness | None:
    """a = 1, gamma = 0 when every charge vanishes: an NPC-solution."""
    if all(k == 0 for k in g.charges):
        sol = BknSolution((1,) * g.n, (0,) * (2 * g.n_edges))
        return Witness("all charges zero", solution=sol)
    return None


def _deformation(g: LabeledGraph, criterion: str, tol: Fraction,
                 support: Sequence[int] | None = None, **extra) -> Witness:
    dw = deformation_witness(g, tol, support)
    return Witness(criterion, solution=dw.solution, exact=dw.exact,
                   residual_bound=dw.residual_bound, deformation=dw, **extra)


def _one_sign(g: LabeledGraph) -> bool:
    return len({sign(k) for k in g.charges}) == 1


def decide_I(g: LabeledGraph, tol: Fraction = DEFAULT_TOL) -> Decision:
    """I (= HI): A+ PSD and singular with charges of one sign, or A+ has a negative eigenvalue."""
    g = _prepare(g)
    a = build_A_plus(g)
    inn = inertia(a)
    spectral = ({"operator": "A+", "inertia": inn.as_tuple()},)
    if _one_sign(g) and inn.is_psd and inn.is_singular:
        x = is_supersingular(a) or kernel_basis(a)[0]
        sol = witness_from_kernel(g, "aplus", x)
        return Decision(YES, Witness("A+ PSD singular, charges of one sign", sol, x), (), spectral)
    if inn.has_negative:
        w = _zero_vertex_witness(g) or _deformation(g, "A+ negative eigenvalue", tol)
        return Decision(YES, w, (), spectral)
    return Decision(NO, None, (), spectral)


def decide_E(g: LabeledGraph) -> Decision:
    """E: A_lambda weakly singular for some class lambda in H^1(Gamma; Z/2)."""
    g = _prepare(g)
    basis, reps = cohomology_classes(g)
    spectral = []
    for mask, lam in enumerate(reps):
        x = is_weakly_singular(build_A_lambda(g, lam))
        spectral.append({"operator": "A_lambda", "class_index": mask,
                         "weakly_singular": x is not None})
        if x is not None:
            sol = signed_vector_solution(g, x, lambda h: lam[g.half_edges[h].edge])
            w = Witness("A_lambda weakly singular", sol, x, class_index=mask, cocycle=lam)
            return Decision(YES, w, (), tuple(spectral))
    return Decision(NO, None, (), tuple(spectral))


def _h_table(g: LabeledGraph) -> tuple[SignDecomposition, list[tuple[tuple[int, ...], SymRatMatrix, Inertia]]]:
    d = sign_components(g)
    rows = []
    for s in admissible_s_functions(d):
        h = build_H(g, s, d)
        rows.append((s, h, inertia(h)))
    return d, rows


def _ambiguity(name: str, table, holds: list[bool]) -> tuple[str, ...]:
    if len(set(holds)) > 1:
        parts = [f"s={list(s)}: {'holds' if ok else 'fails'}" for (s, _, _), ok in zip(table, holds)]
        return (f"{name}: admissible s-functions disagree ({'; '.join(parts)}); "
                "verdict quantifies existentially",)
    return ()


def _h_spectral(table, extra=None) -> tuple[dict, ...]:
    out = []
    for i, (s, h, inn) in enumerate(table):
        row = {"operator": "H", "s": list(s), "inertia": inn.as_tuple()}
        if extra:
            row.update(extra[i])
        out.append(row)
    return tuple(out)


def _component_deformation(g: LabeledGraph, d: SignDecomposition, s, h: SymRatMatrix,
                           tol: Fraction, criterion: str) -> Witness | None:
    for u, comp in enumerate(d.components):
        if s[u] * d.comp_sign[u] == 1 and inertia(h.principal(comp)).has_negative:
            return _deformation(g, criterion, tol, comp, s=tuple(s))
    return None


def decide_VE(g: LabeledGraph, tol: Fraction = DEFAULT_TOL) -> Decision:
    """VE: H has a nonpositive eigenvalue (for some admissible s)."""
    g = _prepare(g)
    d, table = _h_table(g)
    holds = [inn.has_nonpositive for _, _, inn in table]
    notes = _ambiguity("VE", table, holds)
    spectral = _h_spectral(table)
    if not any(holds):
        return Decision(NO, None, notes, spectral)
    w = _zero_vertex_witness(g)
    if w is None:
        for (s, h, inn), ok in zip(table, holds):
            if ok and 0 not in s and inn.is_singular:
                x = is_supersingular(h) or kernel_basis(h)[0]
                w = Witness("H singular", witness_from_kernel(g, "h", x, s), x, s=s)
                break
    if w is None:
        for (s, h, inn), ok in zip(table, holds):
            if ok and inn.has_negative:
                w = _component_deformation(g, d, s, h, tol, "H negative eigenvalue on a component")
                if w:
                    break
    if w is None:
        notes += ("VE: no explicit compatible symmetric solution constructed for this case",)
    return Decision(YES, w, notes, spectral)


def decide_F(g: LabeledGraph) -> Decision:
    """F: A_rho supersingular for the form of intersection indices rho."""
    g = _prepare(g)
    notes: tuple[str, ...] = ()
    if g.rho is None:
        return Decision(UNDETERMINED, None, ("F: the form of intersection indices is not given",))
    a_rho = build_A_lambda(g, g.rho)
    inn = inertia(a_rho)
    x = is_supersingular(a_rho)
    spectral = ({"operator": "A_rho", "inertia": inn.as_tuple(),
                 "supersingular": x is not None},)
    if x is None:
        return Decision(NO, None, notes, spectral)
    sol = witness_from_kernel(g, "arho", x)
    return Decision(YES, Witness("A_rho supersingular", sol, x, cocycle=g.rho), notes, spectral)


def _positive_deformation(g: LabeledGraph, d: SignDecomposition, tol: Fraction,
                          criterion: str) -> Witness | None:
    """Whole-graph deformation when all charges share one strict sign (G is a point)."""
    if d.n_components != 1 or d.comp_sign[0] == 0:
        return None
    if not inertia(build_A_plus(g)).has_negative:
        return None
    w = _deformation(g, criterion, tol)
    if all(x > 0 for x in w.solution.a):
        return w
    return None  # pragma: no cover - Perron vector of a connected graph is positive


def decide_VF(g: LabeledGraph, tol: Fraction = DEFAULT_TOL) -> Decision:
    """VF: H has a negative eigenvalue, or H is PSD and supersingular."""
    g = _prepare(g)
    d, table = _h_table(g)
    ss = [is_supersingular(h) if inn.is_psd else None for _, h, inn in table]
    holds = [inn.has_negative or x is not None for (_, _, inn), x in zip(table, ss)]
    notes = _ambiguity("VF", table, holds)
    spectral = _h_spectral(table, [{"supersingular": x is not None} for x in ss])
    if not any(holds):
        return Decision(NO, None, notes, spectral)
    w = _all_zero_witness(g)
    if w is None:
        for (s, h, inn), x in zip(table, ss):
            if x is not None and 0 not in s:
                w = Witness("H PSD supersingular", witness_from_kernel(g, "h", x, s), x, s=s)
                break
    if w is None:
        w = _positive_deformation(g, d, tol, "H = A+ negative eigenvalue")
    if w is None:
        notes += ("VF: no explicit positive compatible symmetric solution constructed for this case",)
    return Decision(YES, w, notes, spectral)


def decide_NPC(g: LabeledGraph, tol: Fraction = DEFAULT_TOL) -> Decision:
    """NPC: H has a negative eigenvalue, or s is identically zero."""
    g = _prepare(g)
    d, table = _h_table(g)
    holds = [inn.has_negative or all(x == 0 for x in s) for s, _, inn in table]
    notes = _ambiguity("NPC", table, holds)
    spectral = _h_spectral(table)
    if not any(holds):
        return Decision(NO, None, notes, spectral)
    w = _all_zero_witness(g) or _positive_deformation(g, d, tol, "H = A+ negative eigenvalue")
    if w is None:
        notes += ("NPC: no explicit NPC-solution constructed for this case",)
    return Decision(YES, w, notes, spectral)


def check_diagram(verdicts: dict[str, str]) -> list[str]:
    """Violated implications among determined verdicts."""
    bad = []
    for a, b in IMPLICATIONS:
        if verdicts.get(a) == YES and verdicts.get(b) == NO:
            bad.append(f"{a} => {b}")
    return bad


def verify_witness(g: LabeledGraph, prop: str, w: Witness) -> list[str]:
    """Problems with a witness for ``prop`` on the (normalized) graph ``g``."""
    problems = []
    if w.solution is None:
        return ["witness carries no solution"]
    res = residual(g, w.solution)
    worst = max((abs(r) for r in res), default=Fraction(0))
    if w.exact and worst != 0:
        problems.append(f"exact witness has residual {worst}")
    if not w.exact and worst > w.residual_bound:
        problems.append(f"residual {worst} exceeds certified bound {w.residual_bound}")
    flags = classify(g, w.solution)
    for name in REQUIRED_FLAGS[prop]:
        if getattr(flags, name) is not True:
            problems.append(f"solution is not {name}")
    return problems


@dataclass
class PropertyReport:
    verdicts: dict[str, str]
    decisions: dict[str, Decision]
    graph: LabeledGraph
    orientation_flipped: bool
    violations: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.violations

    def witness(self, prop: str) -> Witness | None:
        return self.decisions[prop].witness

    def to_dict(self, witnesses: bool = False, all_s: bool = False, floats: bool = False) -> dict:
        out: dict = dict(self.verdicts)
        out["consistency"] = "ok" if self.consistent else "failure"
        out["violations"] = list(self.violations)
        out["notes"] = list(self.notes)
        out["orientation_flipped"] = self.orientation_flipped
        if witnesses:
            out["witnesses"] = {p: d.witness.to_dict(self.graph, floats)
                                for p, d in self.decisions.items() if d.witness is not None}
        if all_s:
            out["spectral"] = {p: [dict(r) for r in d.spectral]
                               for p, d in self.decisions.items() if d.spectral}
        return out


def decide_all(g: LabeledGraph, tol: Fraction = DEFAULT_TOL) -> PropertyReport:
    g.require_connected()
    g, flipped = normalize_orientation(g)
    decisions = {
        "I": decide_I(g, tol),
        "E": decide_E(g),
        "VE": decide_VE(g, tol),
        "F": decide_F(g),
        "VF": decide_VF(g, tol),
        "NPC": decide_NPC(g, tol),
    }
    decisions["HI"] = decisions["I"]
    decisions = {p: decisions[p] for p in PROPERTIES}
    verdicts = {p: d.verdict for p, d in decisions.items()}
    notes = []
    if flipped:
        notes.append("orientation flipped so that some charge is positive; witnesses refer to "
                     "the flipped graph (negate gamma for the original orientation)")
    for p, d in decisions.items():
        if p != "HI":
            notes.extend(d.notes)
    report = PropertyReport(verdicts, decisions, g, flipped, check_diagram(verdicts), notes)
    return report
