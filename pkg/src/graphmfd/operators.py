"""Operator invariants of a labeled graph: A+, A_lambda, H and sign components.

All operators are symmetric matrices on Q^V defined through quadratic forms
that sum over *oriented* edges, so each nonoriented edge enters twice.  For
an ordinary edge this puts -1/|b| in both off-diagonal slots; for a loop at
``v`` both orientations land on the diagonal and give -2/|b| there.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .core import Cocycle, LabeledGraph, sign
from .exactla import SymRatMatrix

__all__ = [
    "InadmissibleSFunction",
    "SignDecomposition",
    "build_A_plus",
    "build_A_lambda",
    "build_A_plus_family",
    "build_H",
    "sign_components",
    "admissible_s_functions",
]


class InadmissibleSFunction(ValueError):
    pass


def _assemble(g: LabeledGraph, diag: Sequence[Fraction],
              weight: Callable[[int], Fraction | int]) -> SymRatMatrix:
    """Matrix of sum_v diag_v x_v^2 - sum_{w in W} weight(e) x_{w-} x_{w+} / |b_e|."""
    m = [[Fraction(0)] * g.n for _ in range(g.n)]
    for v, d in enumerate(diag):
        m[v][v] += d
    for i, e in enumerate(g.edges):
        c = weight(i)
        if not c:
            continue
        t = Fraction(c, e.b)
        if e.is_loop:
            m[e.tail][e.tail] -= 2 * t
        else:
            m[e.tail][e.head] -= t
            m[e.head][e.tail] -= t
    return SymRatMatrix(tuple(tuple(r) for r in m))


def build_A_plus(g: LabeledGraph) -> SymRatMatrix:
    g.require_connected()
    return _assemble(g, [abs(k) for k in g.charges], lambda e: 1)


def build_A_plus_family(g: LabeledGraph, t: Fraction,
                        support: Sequence[int] | None = None) -> SymRatMatrix:
    """D+ - t J restricted to the subgraph induced on ``support``."""
    verts = list(range(g.n)) if support is None else list(support)
    pos = {v: i for i, v in enumerate(verts)}
    m = [[Fraction(0)] * len(verts) for _ in verts]
    for v in verts:
        m[pos[v]][pos[v]] = abs(g.charges[v])
    for e in g.edges:
        if e.tail not in pos or e.head not in pos:
            continue
        c = Fraction(t) / e.b
        i, j = pos[e.tail], pos[e.head]
        if i == j:
            m[i][i] -= 2 * c
        else:
            m[i][j] -= c
            m[j][i] -= c
    return SymRatMatrix(tuple(tuple(r) for r in m))


def build_A_lambda(g: LabeledGraph, lam: Cocycle) -> SymRatMatrix:
    g.require_connected()
    if len(lam) != g.n_edges:
        raise ValueError("cocycle does not match the edge set")
    return _assemble(g, g.charges, lambda e: lam[e])


@dataclass(frozen=True)
class SignDecomposition:
    """Sign components of a labeled graph and the contracted graph G.

    ``components[u]`` lists the vertices of component ``u`` (sorted, and the
    components themselves ordered by their smallest vertex); ``comp_sign[u]``
    is +1, -1 or 0; ``projection[v]`` is the component of ``v``;
    ``contracted_edges`` are the edge indices of Gamma joining different
    components.
    """

    components: tuple[tuple[int, ...], ...]
    comp_sign: tuple[int, ...]
    projection: tuple[int, ...]
    contracted_edges: tuple[int, ...]
    contracted_ends: tuple[tuple[int, int], ...]
    bipartite: bool
    coloring: tuple[int, ...] | None
    g_components: tuple[tuple[int, ...], ...]

    @property
    def n_components(self) -> int:
        return len(self.components)

    @property
    def all_zero(self) -> bool:
        return all(s == 0 for s in self.comp_sign)

    @property
    def s_functions(self) -> list[tuple[int, ...]]:
        return admissible_s_functions(self)


def sign_components(g: LabeledGraph) -> SignDecomposition:
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in g.edges:
        if g.charges[e.tail] * g.charges[e.head] > 0:
            ra, rb = find(e.tail), find(e.head)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for v in range(g.n):
        groups.setdefault(find(v), []).append(v)
    components = tuple(tuple(c) for c in sorted(groups.values()))
    projection = [0] * g.n
    for u, comp in enumerate(components):
        for v in comp:
            projection[v] = u
    comp_sign = tuple(sign(g.charges[c[0]]) for c in components)

    e0 = tuple(i for i, e in enumerate(g.edges) if projection[e.tail] != projection[e.head])
    ends = tuple((projection[g.edges[i].tail], projection[g.edges[i].head]) for i in e0)

    adj: list[list[int]] = [[] for _ in components]
    for a, b in ends:
        adj[a].append(b)
        adj[b].append(a)
    color: list[int | None] = [None] * len(components)
    g_comps: list[tuple[int, ...]] = []
    bipartite = True
    for start in range(len(components)):
        if color[start] is not None:
            continue
        color[start] = 0
        stack, seen = [start], [start]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if color[w] is None:
                    color[w] = 1 - color[u]
                    stack.append(w)
                    seen.append(w)
                elif color[w] == color[u]:
                    bipartite = False
        g_comps.append(tuple(sorted(seen)))
    return SignDecomposition(
        components=components,
        comp_sign=comp_sign,
        projection=tuple(projection),
        contracted_edges=e0,
        contracted_ends=ends,
        bipartite=bipartite,
        coloring=tuple(color) if bipartite else None,  # type: ignore[arg-type]
        g_components=tuple(g_comps),
    )


def admissible_s_functions(d: SignDecomposition) -> list[tuple[int, ...]]:
    """All admissible s: U -> {0, +1, -1}, canonical choice first.

    Zero when G is not bipartite or every component has zero charge.
    Otherwise each connected piece of G may be oriented two ways; the
    orientation must leave some positive component in P (s = +1).  The
    canonical orientation puts the component of the smallest positive vertex
    in P and every other piece's smallest component in P; the remaining
    admissible choices follow by flipping pieces in binary-counter order.
    """
    n_u = d.n_components
    if not d.bipartite or d.all_zero:
        return [(0,) * n_u]
    if 1 not in d.comp_sign:
        raise ValueError("orientation not normalized: no positive sign component")
    color = d.coloring
    assert color is not None
    first_pos = min(u for u in range(n_u) if d.comp_sign[u] == 1)
    base = []
    for piece in d.g_components:
        anchor = first_pos if first_pos in piece else piece[0]
        base.append(color[anchor])
    piece_of = {u: i for i, piece in enumerate(d.g_components) for u in piece}
    out = []
    for mask in range(1 << len(d.g_components)):
        s = []
        for u in range(n_u):
            i = piece_of[u]
            in_p = (color[u] == base[i]) != bool(mask >> i & 1)
            s.append(1 if in_p else -1)
        if any(s[u] == 1 and d.comp_sign[u] == 1 for u in range(n_u)):
            out.append(tuple(s))
    return out


def build_H(g: LabeledGraph, s: Sequence[int], decomposition: SignDecomposition | None = None
            ) -> SymRatMatrix:
    d = decomposition or sign_components(g)
    s = tuple(s)
    if s not in admissible_s_functions(d):
        raise InadmissibleSFunction(f"s = {s} is not admissible for this graph")
    p = d.projection
    diag = [s[p[v]] * g.charges[v] for v in range(g.n)]
    return _assemble(g, diag, lambda e: int(p[g.edges[e].tail] == p[g.edges[e].head]))
