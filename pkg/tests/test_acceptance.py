"""Acceptance gate: one check per criterion, each printing a PASS/FAIL line.

Run with ``pytest -s tests/test_acceptance.py`` to see the lines, or
directly with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import os
import random
import sys
import time
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from graphmfd.bkn import classify  # noqa: E402
from graphmfd.core import Cocycle, Edge, LabeledGraph, cohomology_classes  # noqa: E402
from graphmfd.decide import (  # noqa: E402
    NO,
    PROPERTIES,
    YES,
    decide_all,
    decide_E,
    decide_NPC,
    verify_witness,
)
from graphmfd.exactla import (  # noqa: E402
    SymRatMatrix,
    inertia,
    is_supersingular,
    is_weakly_singular,
)
from graphmfd.operators import (  # noqa: E402
    admissible_s_functions,
    build_A_lambda,
    build_A_plus,
    build_H,
    sign_components,
)

from conftest import (  # noqa: E402
    E_VF_NOT_F,
    NO_PROPERTY,
    ONLY_I,
    VE_NOT_E,
    VE_NOT_VF,
    fr,
    malpha,
    mat,
    random_graph,
)
from oracles import brute_weakly_singular_fast, sturm_inertia  # noqa: E402


def report_line(number: int, ok: bool, detail: str) -> None:
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}")


def canonical_h(g):
    d = sign_components(g)
    return build_H(g, admissible_s_functions(d)[0], d)


def criterion_1():
    g = malpha(NO_PROPERTY)
    a = build_A_plus(g)
    checks = [
        a == mat([1, -1, 0], [-1, 3, -1], [0, -1, 1]),
        inertia(a).as_tuple() == (3, 0, 0),
        all(v == NO for v in decide_all(g).verdicts.values()),
    ]
    return all(checks), f"A+ entrywise, inertia (3,0,0), all seven NO: {checks}"


def criterion_2():
    g = malpha(ONLY_I)
    a = build_A_plus(g)
    v = decide_all(g).verdicts
    checks = [
        a == mat([1, -1, 0], [-1, 1, -1], [0, -1, 1]),
        inertia(a).n_neg == 1,
        canonical_h(g) == SymRatMatrix.identity(3),
        v["I"] == v["HI"] == YES,
        all(v[p] == NO for p in ("VE", "E", "F", "VF", "NPC")),
    ]
    return all(checks), f"A+, one negative eigenvalue, H = id, I=HI=yes, rest no: {checks}"


def criterion_3():
    g = malpha(VE_NOT_E)
    h = canonical_h(g)
    _, reps = cohomology_classes(g)
    reps = list(reps)
    v = decide_all(g).verdicts
    checks = [
        h == mat([1, -1, 0], [-1, "1/2", "-1/2"], [0, "-1/2", "3/2"]),
        h.determinant() == -1 and inertia(h).n_neg >= 1,
        len(reps) == 1 and is_weakly_singular(build_A_lambda(g, reps[0])) is None,
        v["VE"] == YES and v["E"] == NO and v["I"] == v["HI"] == YES,
    ]
    return all(checks), f"H entrywise, det -1, A_lambda not weakly singular, verdicts: {checks}"


def criterion_4():
    g = malpha(VE_NOT_VF)
    h = canonical_h(g)
    inn = inertia(h)
    v = decide_all(g).verdicts
    checks = [
        h == mat([1, -1, 0], [-1, 2, 0], [0, 0, 0]),
        inn.is_singular and inn.is_psd and is_supersingular(h) is None,
        v["VE"] == YES and v["VF"] == NO and v["F"] == NO and v["NPC"] == NO,
    ]
    return all(checks), f"H entrywise, singular PSD not supersingular, VE yes VF/F/NPC no: {checks}"


def criterion_5():
    g = malpha(E_VF_NOT_F)
    a_lam = build_A_lambda(g, Cocycle.trivial(2))
    x = is_weakly_singular(a_lam)
    h = canonical_h(g)
    a_rho = build_A_lambda(g, g.rho)
    report = decide_all(g)
    v = report.verdicts
    checks = [
        a_lam == mat([1, -1, 0], [-1, 1, -1], [0, -1, 0]),
        x == fr(1, 1, 0) and a_lam.matvec(x) == fr(0, 0, -1),
        report.witness("E").vector == fr(1, 1, 0),
        h == mat([1, -1, 0], [-1, 1, 0], [0, 0, 0]),
        inertia(h).is_psd and is_supersingular(h) is not None,
        a_rho.determinant() == -1,
        v["E"] == v["VF"] == YES and v["F"] == v["NPC"] == NO,
        v["I"] == v["HI"] == v["VE"] == YES,
    ]
    return all(checks), f"A_lambda witness (1,1,0), H PSD supersingular, det A_rho -1, verdicts: {checks}"


def criterion_6():
    checks = []
    for b in (1, 2, 3):
        g = LabeledGraph((Fraction(2, b),), (Edge(0, 0, 0, b),), Cocycle((1,)))
        d = sign_components(g)
        s = admissible_s_functions(d)
        checks.append(s == [(1,)] and build_H(g, s[0], d) == mat([0])
                      and decide_NPC(g).verdict == NO)
    return all(checks), f"Dehn-twist loop, |b| = 1,2,3: H = [0], s = 1, NPC no: {checks}"


def criterion_7(n_graphs: int = 1000, seed: int = 20261016):
    rng = random.Random(seed)
    start = time.perf_counter()
    failures = []
    witnesses_checked = 0
    for i in range(n_graphs):
        g = random_graph(rng)
        report = decide_all(g)
        gn = report.graph
        # (a) diagram consistency
        if not report.consistent:
            failures.append(f"graph {i}: violations {report.violations}")
        # (b) witnesses re-verify
        for p, d in report.decisions.items():
            if d.verdict == YES and d.witness is not None:
                witnesses_checked += 1
                problems = verify_witness(gn, p, d.witness)
                if problems:
                    failures.append(f"graph {i}: {p} witness {problems}")
        # (c) compatible exact solution => A+ has a nonpositive eigenvalue
        a_plus = inertia(build_A_plus(gn))
        for p, d in report.decisions.items():
            w = d.witness
            if w is not None and w.exact:
                c = classify(gn, w.solution)
                if c.compatible and c.satisfies_equation and not a_plus.has_nonpositive:
                    failures.append(f"graph {i}: compatible {p} witness with A+ definite")
        #     E is unchanged when every class representative is twisted by a coboundary
        eps = [rng.choice((1, -1)) for _ in range(gn.n)]
        delta = Cocycle(tuple(eps[e.tail] * eps[e.head] for e in gn.edges))
        _, reps = cohomology_classes(gn)
        twisted = any(is_weakly_singular(build_A_lambda(gn, lam * delta)) is not None
                      for lam in reps)
        if twisted != (decide_E(gn).verdict == YES):
            failures.append(f"graph {i}: E changes under a coboundary twist")
        # (d) weak singularity against 2^n brute force
        _, reps = cohomology_classes(gn)
        a_lam = build_A_lambda(gn, next(iter(reps)))
        if (is_weakly_singular(a_lam) is not None) != brute_weakly_singular_fast(a_lam):
            failures.append(f"graph {i}: weak singularity disagrees with brute force")
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 60
    detail = (f"{n_graphs} random graphs, {witnesses_checked} witnesses re-verified, "
              f"{len(failures)} failures, {elapsed:.1f}s (limit 60s)")
    if failures:
        detail += f"; first: {failures[0]}"
    return ok, detail


def random_sym(rng: random.Random, n: int) -> SymRatMatrix:
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            m[i][j] = m[j][i] = Fraction(rng.randint(-6, 6), rng.randint(1, 5))
    # make some matrices rank deficient so zero eigenvalues are exercised
    if rng.random() < 0.3 and n > 1:
        k = rng.randrange(1, n)
        c = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
        for j in range(n):
            m[k][j] = c * m[0][j]
        for i in range(n):
            m[i][k] = c * m[i][0]
        m[k][k] = c * c * m[0][0]
    return SymRatMatrix(tuple(tuple(r) for r in m))


def criterion_8(n_matrices: int = 200, seed: int = 8):
    rng = random.Random(seed)
    mismatches = []
    zero_seen = 0
    for i in range(n_matrices):
        a = random_sym(rng, rng.randint(1, 8))
        mine, oracle = inertia(a).as_tuple(), sturm_inertia(a)
        zero_seen += oracle[1] > 0
        if mine != oracle:
            mismatches.append((i, mine, oracle))
    return not mismatches, (f"{n_matrices} random symmetric matrices n <= 8, "
                            f"{zero_seen} singular, {len(mismatches)} disagreements with Sturm counts")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4,
            criterion_5, criterion_6, criterion_7, criterion_8]


@pytest.mark.parametrize("number", range(1, 9))
def test_acceptance_criterion(number):
    ok, detail = CRITERIA[number - 1]()
    report_line(number, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    results = []
    for number, check in enumerate(CRITERIA, start=1):
        ok, detail = check()
        report_line(number, ok, detail)
        results.append(ok)
    sys.exit(0 if all(results) else 1)
