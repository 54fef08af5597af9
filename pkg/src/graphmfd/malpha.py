"""The three-vertex family M(alpha) and charge arithmetic for framed blocks.

Every M(alpha) has the linear graph v1 - v2 - v3.  The first gluing is
fixed; the second is an integer matrix alpha = [[a, b], [c, d]] with
determinant -1, giving indices (1, |b|) and charges (1, d/b, -a/b).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .core import Edge, LabeledGraph, form_rho_from_signs

__all__ = ["GluingMatrix", "build_malpha", "charge_from_framing", "random_gluing"]


@dataclass(frozen=True)
class GluingMatrix:
    a: int
    b: int
    c: int
    d: int

    @classmethod
    def parse(cls, text: str) -> "GluingMatrix":
        parts = [p.strip() for p in text.replace(";", ",").split(",") if p.strip()]
        if len(parts) != 4:
            raise ValueError(f"expected four integers a,b,c,d, got {text!r}")
        return cls(*(int(p) for p in parts))

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def as_rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]


def build_malpha(m: GluingMatrix) -> LabeledGraph:
    if m.det != -1:
        raise ValueError(f"gluing matrix must have determinant -1, got {m.det}")
    if m.b == 0:
        raise ValueError("gluing matrix needs b != 0 for the charges to be defined")
    charges = (Fraction(1), Fraction(m.d, m.b), Fraction(-m.a, m.b))
    edges = (Edge(0, 0, 1, 1), Edge(1, 1, 2, abs(m.b)))
    # a tree: the form of intersection indices is cohomologically trivial
    return LabeledGraph(charges, edges, rho=form_rho_from_signs([1, m.b]))


def charge_from_framing(terms: Iterable[tuple[int, int]]) -> Fraction:
    """Sum of d_w / b_w over the boundary tori of a framed block."""
    total = Fraction(0)
    for b, d in terms:
        if b == 0:
            raise ValueError("intersection index b_w must be nonzero")
        total += Fraction(d, b)
    return total


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


def random_gluing(rng: random.Random, bound: int = 6) -> GluingMatrix:
    """Random alpha with det -1 and b != 0: pick coprime (a, b), solve for (c, d)."""
    while True:
        a = rng.randint(-bound, bound)
        b = rng.choice([x for x in range(-bound, bound + 1) if x != 0])
        g, x, y = _ext_gcd(a, b)
        if g != 1:
            continue
        # a*x + b*y = 1  =>  a*(-x) - b*y = -1
        m = GluingMatrix(a, b, y, -x)
        assert m.det == -1
        return m
