"""The BKN difference equation over a labeled graph.

A solution is a pair (a, gamma): a length ``a_v`` per vertex and an angle
``gamma_h`` per oriented half-edge, subject to

    k_v a_v = sum_{h in star(v)} gamma_h a_{head(h)} / |b_h|     for all v.

This module checks and classifies candidate solutions, turns kernel vectors
of the operator invariants into solutions, and provides the dipole and
symmetrized-incidence views of a solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import Cocycle, Edge, LabeledGraph, format_rational, is_coboundary, sign
from .exactla import SymRatMatrix, inertia, kernel_basis, nullspace, rank
from .operators import (
    SignDecomposition,
    admissible_s_functions,
    build_A_lambda,
    build_A_plus,
    build_A_plus_family,
    build_H,
    sign_components,
)

__all__ = [
    "WitnessError",
    "BknSolution",
    "SolutionClass",
    "Dipole",
    "DipoleNPC",
    "DeformationWitness",
    "SymmetrizedReport",
    "residual",
    "signed_vector_solution",
    "classify",
    "witness_from_kernel",
    "deformation_witness",
    "solve_lengths_given_angles",
    "dipole_npc",
    "dipole_charges",
    "check_vertex_balance",
    "symmetrized_check",
    "incidence_matrix",
]


class WitnessError(ValueError):
    """A witness constructor's preconditions do not hold."""


@dataclass(frozen=True)
class BknSolution:
    a: tuple[Fraction, ...]
    gamma: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(Fraction(x) for x in self.a))
        object.__setattr__(self, "gamma", tuple(Fraction(x) for x in self.gamma))

    @classmethod
    def from_edges(cls, a: Sequence, gamma_pairs: Sequence[tuple]) -> "BknSolution":
        """Build from per-edge (forward, backward) angle pairs."""
        gamma = []
        for fwd, bwd in gamma_pairs:
            gamma.extend((fwd, bwd))
        return cls(tuple(a), tuple(gamma))

    def check_shape(self, g: LabeledGraph) -> None:
        if len(self.a) != g.n or len(self.gamma) != 2 * g.n_edges:
            raise ValueError(
                f"solution shape ({len(self.a)}, {len(self.gamma)}) does not match "
                f"graph ({g.n} vertices, {2 * g.n_edges} half-edges)")

    def to_dict(self, g: LabeledGraph, floats: bool = False) -> dict:
        out = {
            "a": [format_rational(x) for x in self.a],
            "gamma": [
                {"edge": e.id, "tail": e.tail, "head": e.head,
                 "forward": format_rational(self.gamma[2 * i]),
                 "backward": format_rational(self.gamma[2 * i + 1])}
                for i, e in enumerate(g.edges)
            ],
        }
        if floats:
            out["a_float"] = [float(x) for x in self.a]
            out["gamma_float"] = [float(x) for x in self.gamma]
        return out


def residual(g: LabeledGraph, sol: BknSolution) -> tuple[Fraction, ...]:
    sol.check_shape(g)
    out = []
    for v in range(g.n):
        acc = g.charges[v] * sol.a[v]
        for h in g.star(v):
            he = g.half_edges[h]
            if sol.gamma[h]:
                acc -= sol.gamma[h] * sol.a[he.head] / g.edges[he.edge].b
        out.append(acc)
    return tuple(out)


@dataclass(frozen=True)
class SolutionClass:
    """Flags of a candidate solution.

    The shape flags (compatible, symmetric, ...) describe (a, gamma) alone and
    do not include ``satisfies_equation``.  ``f_shaped`` is None when the
    graph carries no form of intersection indices.
    """

    satisfies_equation: bool
    compatible: bool
    symmetric: bool
    positive_length: bool
    npc: bool
    e_shaped: bool
    f_shaped: bool | None

    def as_dict(self) -> dict:
        return {k: ("undetermined" if v is None else v) for k, v in self.__dict__.items()}


def _compatible(g: LabeledGraph, sol: BknSolution) -> bool:
    a, gam = sol.a, sol.gamma
    if any(x < 0 for x in a) or all(x == 0 for x in a):
        return False
    for h in range(len(gam)):
        if abs(gam[h]) > 1:
            return False
        if abs(gam[h] * gam[h ^ 1]) == 1 and gam[h] != gam[h ^ 1]:
            return False
    for v in range(g.n):
        if a[v] == 0 and any(gam[h] or gam[h ^ 1] for h in g.star(v)):
            return False
    return True


def classify(g: LabeledGraph, sol: BknSolution) -> SolutionClass:
    sol.check_shape(g)
    a, gam = sol.a, sol.gamma
    symmetric = all(gam[2 * i] == gam[2 * i + 1] for i in range(g.n_edges))
    compatible = _compatible(g, sol)
    positive = all(x > 0 for x in a)
    npc = compatible and symmetric and positive and all(abs(x) < 1 for x in gam)
    e_shaped = True
    for h, he in enumerate(g.half_edges):
        if a[he.tail] * a[he.head] != 0:
            if not (gam[h] == gam[h ^ 1] and abs(gam[h]) == 1):
                e_shaped = False
                break
    f_shaped: bool | None
    if g.rho is None:
        f_shaped = None
    elif not (symmetric and positive and all(abs(x) == 1 for x in gam)):
        f_shaped = False
    else:
        lam = Cocycle(tuple(int(gam[2 * i]) for i in range(g.n_edges)))
        f_shaped = g.is_connected() and is_coboundary(g, lam * g.rho) is not None
    return SolutionClass(
        satisfies_equation=all(r == 0 for r in residual(g, sol)),
        compatible=compatible,
        symmetric=symmetric,
        positive_length=positive,
        npc=npc,
        e_shaped=e_shaped,
        f_shaped=f_shaped,
    )


# ---------------------------------------------------------------------------
# witnesses from spectral data


def signed_vector_solution(g: LabeledGraph, x: Sequence[Fraction], angle) -> BknSolution:
    """Length |x| and gamma_h = angle(h) * sign(x_tail * x_head)."""
    gamma = []
    for h, he in enumerate(g.half_edges):
        sgn = sign(x[he.tail]) * sign(x[he.head])
        gamma.append(angle(h) * sgn if sgn else Fraction(0))
    return BknSolution(tuple(abs(Fraction(v)) for v in x), tuple(gamma))


def witness_from_kernel(g: LabeledGraph, mode: str, x: Sequence,
                        s: Sequence[int] | None = None) -> BknSolution:
    """Turn a kernel vector of an operator invariant into a BKN solution.

    ``mode`` is ``"aplus"`` (A+, charges of one sign), ``"h"`` (H for the
    admissible s, which must take values +-1) or ``"arho"`` (A_rho, x with
    no zero coordinate).  The result has an exactly-zero residual.
    """
    x = tuple(Fraction(v) for v in x)
    if len(x) != g.n or all(v == 0 for v in x):
        raise WitnessError("kernel vector must be nonzero with one entry per vertex")
    if mode == "aplus":
        signs = {sign(k) for k in g.charges}
        if len(signs - {0}) > 1 or (0 in signs and len(signs) > 1):
            raise WitnessError("A+ kernel witness needs all charges of one sign")
        op = build_A_plus(g)
        sigma = -1 if -1 in signs else 1
        angle = lambda h: sigma  # noqa: E731
    elif mode == "h":
        d = sign_components(g)
        if s is None:
            s = admissible_s_functions(d)[0]
        s = tuple(s)
        if 0 in s:
            raise WitnessError("H kernel witness needs s with values +-1")
        op = build_H(g, s, d)
        p = d.projection
        angle = lambda h: s[p[g.half_edges[h].tail]] if (  # noqa: E731
            p[g.half_edges[h].tail] == p[g.half_edges[h].head]) else 0
    elif mode == "arho":
        if g.rho is None:
            raise WitnessError("A_rho witness needs the form of intersection indices")
        if any(v == 0 for v in x):
            raise WitnessError("A_rho witness needs a fully supported kernel vector")
        op = build_A_lambda(g, g.rho)
        angle = lambda h: g.rho[g.half_edges[h].edge]  # noqa: E731
    else:
        raise ValueError(f"unknown witness mode {mode!r}")
    if any(op.matvec(x)):
        raise WitnessError("vector is not in the kernel of the operator")
    sol = signed_vector_solution(g, x, angle)
    assert not any(residual(g, sol)), "kernel witness must solve the equation"
    return sol


@dataclass(frozen=True)
class DeformationWitness:
    """Solution read off the family D+ - t J near its first singular parameter.

    ``bracket`` encloses the singular parameter: the family is positive
    definite at its left end and has a negative eigenvalue at its right end
    (unless ``exact``, when both ends equal ``t``).  ``residual_bound`` is the
    exact maximum of |residual|; it is zero when ``exact``.
    """

    solution: BknSolution
    t: Fraction
    bracket: tuple[Fraction, Fraction]
    exact: bool
    residual_bound: Fraction
    support: tuple[int, ...]


def _simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational with the smallest denominator in [lo, hi] (0 <= lo <= hi)."""
    if lo.denominator == 1 or math.floor(lo) < math.floor(hi):
        return Fraction(math.ceil(lo))
    fl = math.floor(lo)
    lo_r, hi_r = lo - fl, hi - fl
    # continued-fraction recursion on reciprocals
    return fl + 1 / _simplest_between(1 / hi_r, 1 / lo_r)


def _solution_from_family_vector(g: LabeledGraph, support: Sequence[int], y: Sequence[Fraction],
                                 t: Fraction) -> BknSolution:
    x = [Fraction(0)] * g.n
    for v, val in zip(support, y):
        x[v] = Fraction(val)
    inside = set(support)

    def angle(h):
        he = g.half_edges[h]
        if he.tail in inside and he.head in inside:
            return sign(g.charges[he.tail]) * t
        return 0

    return signed_vector_solution(g, x, angle)


def deformation_witness(g: LabeledGraph, tol: Fraction = Fraction(1, 10 ** 6),
                        support: Sequence[int] | None = None) -> DeformationWitness:
    """Approximate compatible solution with |gamma| = t < 1 from the family D+ - t J.

    At t = 0 the family is positive definite (all charges on ``support``
    nonzero); at t = 1 it is A+ and has a negative eigenvalue.  Bisection on
    the exact inertia brackets the first singular parameter t0 to width
    ``tol``.  A rational t with a singular, positive semidefinite family member
    yields an exact solution; otherwise the near-kernel vector is obtained by
    dropping the row of one vertex and solving the rest exactly, and the
    residual left at that vertex is reported as the bound.
    """
    g.require_connected()
    support = tuple(range(g.n)) if support is None else tuple(sorted(support))
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if any(g.charges[v] == 0 for v in support):
        raise WitnessError("deformation needs nonzero charges on the support")
    if not inertia(build_A_plus_family(g, Fraction(1), support)).has_negative:
        raise WitnessError("A+ has no negative eigenvalue on the support")

    def exact_at(t: Fraction) -> DeformationWitness | None:
        fam = build_A_plus_family(g, t, support)
        inn = inertia(fam)
        if inn.n_zero and not inn.n_neg:
            y = kernel_basis(fam)[0]
            sol = _solution_from_family_vector(g, support, y, t)
            return DeformationWitness(sol, t, (t, t), True, Fraction(0), support)
        return None

    lo, hi = Fraction(0), Fraction(1)
    while hi - lo >= tol:
        mid = (lo + hi) / 2
        found = exact_at(mid)
        if found:
            return found
        if inertia(build_A_plus_family(g, mid, support)).has_negative:
            hi = mid
        else:
            lo = mid
    simple = _simplest_between(lo, hi)
    if lo < simple < hi:
        found = exact_at(simple)
        if found:
            return found

    t = (lo + hi) / 2
    fam = build_A_plus_family(g, t, support)
    best: tuple[Fraction, BknSolution] | None = None
    m = len(support)
    for drop in range(m):
        rest = [i for i in range(m) if i != drop]
        if not rest:
            y = [Fraction(1)]
        else:
            # solve fam[rest, rest] y_rest = -fam[rest, drop] with y_drop = 1
            rows = [[fam[i, j] for j in rest] + [fam[i, drop]] for i in rest]
            ker = nullspace(rows, m)
            ker = [k for k in ker if k[-1] != 0]
            if len(ker) != 1:
                continue
            k = ker[0]
            y = [Fraction(0)] * m
            for i, val in zip(rest, k[:-1]):
                y[i] = val / k[-1]
            y[drop] = Fraction(1)
        sol = _solution_from_family_vector(g, support, y, t)
        bound = max(abs(r) for r in residual(g, sol))
        if best is None or bound < best[0]:
            best = (bound, sol)
    if best is None:  # pragma: no cover - a nonsingular minor always exists near t0
        raise WitnessError("could not extract a near-kernel vector")
    return DeformationWitness(best[1], t, (lo, hi), False, best[0], support)


def solve_lengths_given_angles(g: LabeledGraph, gamma: Sequence) -> list[tuple[Fraction, ...]]:
    """Basis of all length functions a solving the equation for fixed gamma."""
    gamma = [Fraction(x) for x in gamma]
    if len(gamma) != 2 * g.n_edges:
        raise ValueError("need one angle per half-edge")
    m = [[Fraction(0)] * g.n for _ in range(g.n)]
    for v in range(g.n):
        m[v][v] += g.charges[v]
        for h in g.star(v):
            he = g.half_edges[h]
            m[v][he.head] -= gamma[h] / g.edges[he.edge].b
    return nullspace(m, g.n)


# ---------------------------------------------------------------------------
# dipoles and vertex balance


@dataclass(frozen=True)
class Dipole:
    k_w: Fraction
    k_mw: Fraction
    b: int

    def __post_init__(self):
        object.__setattr__(self, "k_w", Fraction(self.k_w))
        object.__setattr__(self, "k_mw", Fraction(self.k_mw))
        if self.b == 0:
            raise ValueError("intersection index must be nonzero")

    def as_graph(self) -> LabeledGraph:
        return LabeledGraph((self.k_w, self.k_mw), (Edge(0, 0, 1, abs(self.b)),))


@dataclass(frozen=True)
class DipoleNPC:
    """NPC data of a dipole: gamma^2, the sign of gamma and (a_w / a_-w)^2.

    ``unconstrained`` marks the zero-charge dipole, where any positive
    lengths and gamma = 0 work (``ratio_sq`` is then None).
    """

    gamma_sq: Fraction
    gamma_sign: int
    ratio_sq: Fraction | None
    unconstrained: bool = False

    def gamma_bounds(self, bits: int = 53) -> tuple[Fraction, Fraction]:
        """Rational lo <= gamma <= hi with hi - lo <= 2^-bits."""
        scale = 1 << bits
        num, den = self.gamma_sq.numerator * scale * scale, self.gamma_sq.denominator
        r = math.isqrt(num // den)
        lo, hi = Fraction(r, scale), Fraction(r + 1, scale)
        if self.gamma_sign < 0:
            lo, hi = -hi, -lo
        return lo, hi


def dipole_npc(d: Dipole) -> DipoleNPC | None:
    k, kk = d.k_w, d.k_mw
    if k == 0 and kk == 0:
        return DipoleNPC(Fraction(0), 0, None, unconstrained=True)
    if k == 0 or kk == 0 or k * kk < 0:
        return None
    gamma_sq = k * kk * d.b * d.b
    if gamma_sq >= 1:
        return None
    return DipoleNPC(gamma_sq, sign(k), kk / k)


def dipole_charges(g: LabeledGraph, sol: BknSolution) -> tuple[Fraction, ...]:
    """Charges k_w = gamma_w a_{w+} / (|b_w| a_{w-}) of the dipole decomposition."""
    sol.check_shape(g)
    if any(x <= 0 for x in sol.a):
        raise ValueError("dipole decomposition needs a positive length function")
    return tuple(sol.gamma[h] * sol.a[he.head] / (g.edges[he.edge].b * sol.a[he.tail])
                 for h, he in enumerate(g.half_edges))


def check_vertex_balance(g: LabeledGraph, dipole_k: Sequence) -> tuple[Fraction, ...]:
    """Defects k_v - sum_{w in star(v)} k_w."""
    if len(dipole_k) != 2 * g.n_edges:
        raise ValueError("need one dipole charge per half-edge")
    return tuple(g.charges[v] - sum((Fraction(dipole_k[h]) for h in g.star(v)), Fraction(0))
                 for v in range(g.n))


# ---------------------------------------------------------------------------
# symmetrized form


@dataclass(frozen=True)
class SymmetrizedReport:
    holds: bool
    incidence_rank: int
    predicted_rank: int
    bipartite: bool

    @property
    def matches_prediction(self) -> bool:
        return self.incidence_rank == self.predicted_rank


def incidence_matrix(g: LabeledGraph) -> list[list[int]]:
    """|V| x |E| matrix counting how often each edge leaves each vertex (loops: 2)."""
    m = [[0] * g.n_edges for _ in range(g.n)]
    for i, e in enumerate(g.edges):
        m[e.tail][i] += 1
        m[e.head][i] += 1
    return m


def _is_bipartite(g: LabeledGraph) -> bool:
    color: list[int | None] = [None] * g.n
    for start in range(g.n):
        if color[start] is not None:
            continue
        color[start] = 0
        stack = [start]
        while stack:
            v = stack.pop()
            for h in g.star(v):
                w = g.half_edges[h].head
                if color[w] is None:
                    color[w] = 1 - color[v]
                    stack.append(w)
                elif color[w] == color[v]:
                    return False
    return True


def symmetrized_check(g: LabeledGraph, sol: BknSolution) -> SymmetrizedReport:
    """Check k_v a_v^2 = sum over edges at v of gamma_e a_{e-} a_{e+} / |b_e|.

    Multiplying the equation at v by a_v gives this edge-weighted form; the
    report also compares the rank of the incidence matrix with |V| (some odd
    cycle) or |V| - 1 (bipartite), valid for connected graphs.
    """
    sol.check_shape(g)
    if any(sol.gamma[2 * i] != sol.gamma[2 * i + 1] for i in range(g.n_edges)):
        raise ValueError("symmetrized form needs a symmetric angle function")
    if any(x <= 0 for x in sol.a):
        raise ValueError("symmetrized form needs a positive length function")
    inc = incidence_matrix(g)
    d = [sol.gamma[2 * i] * sol.a[e.tail] * sol.a[e.head] / e.b for i, e in enumerate(g.edges)]
    lhs = [g.charges[v] * sol.a[v] ** 2 for v in range(g.n)]
    rhs = [sum((inc[v][i] * d[i] for i in range(g.n_edges)), Fraction(0)) for v in range(g.n)]
    bip = _is_bipartite(g)
    return SymmetrizedReport(
        holds=lhs == rhs,
        incidence_rank=rank(inc) if g.n_edges else 0,
        predicted_rank=g.n - 1 if bip else g.n,
        bipartite=bip,
    )
