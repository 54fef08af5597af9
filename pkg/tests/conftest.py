from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from graphmfd.core import Cocycle, Edge, LabeledGraph
from graphmfd.exactla import SymRatMatrix
from graphmfd.malpha import GluingMatrix, build_malpha

# the five three-vertex examples, keyed by (a, b, c, d)
NO_PROPERTY = (1, 1, 4, 3)
ONLY_I = (-1, 1, 2, -1)
VE_NOT_E = (-3, 2, -1, 1)
VE_NOT_VF = (0, 1, 1, 2)
E_VF_NOT_F = (0, 1, 1, 1)


def malpha(entries) -> LabeledGraph:
    return build_malpha(GluingMatrix(*entries))


def mat(*rows) -> SymRatMatrix:
    return SymRatMatrix(tuple(tuple(Fraction(x) for x in r) for r in rows))


def fr(*xs):
    return tuple(Fraction(x) for x in xs)


def random_graph(rng: random.Random, max_n: int = 6, max_b: int = 3,
                 extra_edges: int = 3, rho_rate: float = 0.8) -> LabeledGraph:
    """Connected multigraph (random spanning tree plus extra edges and loops)."""
    n = rng.randint(1, max_n)
    pairs = [(rng.randrange(v), v) for v in range(1, n)]
    pairs += [(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(0, extra_edges))]
    edges = tuple(Edge(i, t, h, rng.randint(1, max_b)) for i, (t, h) in enumerate(pairs))
    charges = tuple(Fraction(rng.randint(-8, 8), 4) for _ in range(n))
    rho = None
    if rng.random() < rho_rate:
        rho = Cocycle(tuple(rng.choice((1, -1)) for _ in edges))
    return LabeledGraph(charges, edges, rho)


@st.composite
def graphs(draw, max_n: int = 5, with_rho: bool | None = None):
    n = draw(st.integers(1, max_n))
    pairs = [(draw(st.integers(0, v - 1)), v) for v in range(1, n)]
    pairs += draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=3))
    edges = tuple(Edge(i, t, h, draw(st.integers(1, 3))) for i, (t, h) in enumerate(pairs))
    charges = tuple(Fraction(draw(st.integers(-8, 8)), 4) for _ in range(n))
    give = draw(st.booleans()) if with_rho is None else with_rho
    rho = Cocycle(tuple(draw(st.sampled_from((1, -1))) for _ in edges)) if give else None
    return LabeledGraph(charges, edges, rho)


@st.composite
def sym_matrices(draw, max_n: int = 6, max_den: int = 4):
    n = draw(st.integers(1, max_n))
    entry = st.builds(Fraction, st.integers(-5, 5), st.integers(1, max_den))
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            m[i][j] = m[j][i] = draw(entry)
    return SymRatMatrix(tuple(tuple(r) for r in m))
