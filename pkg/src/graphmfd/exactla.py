"""Exact symmetric linear algebra over the rationals.

Everything here works on :class:`fractions.Fraction` entries.  Spectral
questions (is there a negative eigenvalue, is the operator positive
semidefinite, is it singular) are answered through the inertia, which is
invariant under congruence and therefore computable by symmetric
elimination without ever leaving the rationals.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "SymRatMatrix",
    "Inertia",
    "SubsetCapExceeded",
    "DEFAULT_SUBSET_CAP",
    "inertia",
    "nullspace",
    "kernel_basis",
    "rank",
    "determinant",
    "is_supersingular",
    "is_weakly_singular",
    "normalize_vector",
]

DEFAULT_SUBSET_CAP = 24

Vector = tuple[Fraction, ...]


class SubsetCapExceeded(ValueError):
    """The exponential support search was refused for a matrix this large."""


@dataclass(frozen=True)
class SymRatMatrix:
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in r) for r in self.rows)
        n = len(rows)
        for i, r in enumerate(rows):
            if len(r) != n:
                raise ValueError("matrix is not square")
            for j in range(i):
                if r[j] != rows[j][i]:
                    raise ValueError(f"matrix is not symmetric at ({i}, {j})")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def zeros(cls, n: int) -> "SymRatMatrix":
        return cls(tuple((Fraction(0),) * n for _ in range(n)))

    @classmethod
    def identity(cls, n: int) -> "SymRatMatrix":
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        if isinstance(other, SymRatMatrix):
            return self.rows == other.rows
        try:
            return self.rows == SymRatMatrix(other).rows
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self) -> int:
        return hash(self.rows)

    def matvec(self, x: Sequence) -> Vector:
        return tuple(sum((a * xi for a, xi in zip(r, x)), Fraction(0)) for r in self.rows)

    def quadratic_form(self, x: Sequence) -> Fraction:
        return sum((xi * yi for xi, yi in zip(x, self.matvec(x))), Fraction(0))

    def principal(self, support: Sequence[int]) -> "SymRatMatrix":
        return SymRatMatrix(tuple(tuple(self.rows[i][j] for j in support) for i in support))

    def congruent(self, p: Sequence[Sequence]) -> "SymRatMatrix":
        """Return P^T A P."""
        n = self.n
        p = [[Fraction(x) for x in r] for r in p]
        ap = [[sum((self.rows[i][k] * p[k][j] for k in range(n)), Fraction(0))
               for j in range(n)] for i in range(n)]
        return SymRatMatrix(tuple(
            tuple(sum((p[k][i] * ap[k][j] for k in range(n)), Fraction(0)) for j in range(n))
            for i in range(n)))

    def determinant(self) -> Fraction:
        return determinant(self.rows)

    def to_lists(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self.rows]

    def to_floats(self) -> list[list[float]]:
        return [[float(x) for x in r] for r in self.rows]


@dataclass(frozen=True)
class Inertia:
    n_pos: int
    n_zero: int
    n_neg: int

    @property
    def has_negative(self) -> bool:
        return self.n_neg > 0

    @property
    def is_psd(self) -> bool:
        return self.n_neg == 0

    @property
    def is_singular(self) -> bool:
        return self.n_zero > 0

    @property
    def has_nonpositive(self) -> bool:
        return self.n_neg + self.n_zero > 0

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.n_pos, self.n_zero, self.n_neg)


def inertia(a: SymRatMatrix) -> Inertia:
    """Signature of ``a`` by symmetric congruence reduction.

    A nonzero diagonal entry is eliminated as a 1x1 pivot.  When the whole
    remaining diagonal vanishes but some off-diagonal entry ``c`` does not,
    the block [[0, c], [c, 0]] (one positive and one negative eigenvalue) is
    used as a 2x2 pivot.
    """
    m = [list(r) for r in a.rows]
    live = list(range(a.n))
    pos = neg = 0
    while live:
        piv = next((i for i in live if m[i][i] != 0), None)
        if piv is not None:
            d = m[piv][piv]
            if d > 0:
                pos += 1
            else:
                neg += 1
            live.remove(piv)
            col = [m[j][piv] for j in range(a.n)]
            for j in live:
                if col[j] == 0:
                    continue
                f = col[j] / d
                row_j = m[j]
                row_p = m[piv]
                for k in live:
                    if row_p[k]:
                        row_j[k] -= f * row_p[k]
            continue
        pair = next(((i, j) for i, j in itertools.combinations(live, 2) if m[i][j] != 0), None)
        if pair is None:
            break
        i, j = pair
        c = m[i][j]
        pos += 1
        neg += 1
        live.remove(i)
        live.remove(j)
        ci = [m[r][i] for r in range(a.n)]
        cj = [m[r][j] for r in range(a.n)]
        # Schur complement with inverse [[0, 1/c], [1/c, 0]]
        for r in live:
            for k in live:
                delta = (ci[r] * cj[k] + cj[r] * ci[k]) / c
                if delta:
                    m[r][k] -= delta
    return Inertia(pos, a.n - pos - neg, neg)


# ---------------------------------------------------------------------------
# fraction-free elimination


def _integer_rows(rows: Sequence[Sequence[Fraction]]) -> list[list[int]]:
    out = []
    for r in rows:
        r = [Fraction(x) for x in r]
        scale = math.lcm(*(x.denominator for x in r)) if r else 1
        out.append([int(x * scale) for x in r])
    return out


def _bareiss_echelon(m: list[list[int]]) -> tuple[list[list[int]], list[int], int]:
    """Fraction-free row echelon form.

    Returns the reduced integer rows, the pivot columns, and the sign of the
    row permutation.  Every division is exact (Bareiss).
    """
    m = [r[:] for r in m]
    n_rows = len(m)
    n_cols = len(m[0]) if m else 0
    pivots: list[int] = []
    prev = 1
    r = 0
    swaps = 1
    for c in range(n_cols):
        if r == n_rows:
            break
        p = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            m[p], m[r] = m[r], m[p]
            swaps = -swaps
        pr = m[r]
        pc = pr[c]
        for i in range(r + 1, n_rows):
            row = m[i]
            f = row[c]
            for j in range(c, n_cols):
                q, rem = divmod(pc * row[j] - f * pr[j], prev)
                assert rem == 0, "Bareiss division must be exact"
                row[j] = q
        prev = pc
        pivots.append(c)
        r += 1
    return m, pivots, swaps


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(_bareiss_echelon(_integer_rows(rows))[1])


def determinant(rows: Sequence[Sequence]) -> Fraction:
    n = len(rows)
    if n == 0:
        return Fraction(1)
    frac = [[Fraction(x) for x in r] for r in rows]
    scales = [math.lcm(*(x.denominator for x in r)) for r in frac]
    ech, pivots, swaps = _bareiss_echelon(_integer_rows(frac))
    if len(pivots) < n:
        return Fraction(0)
    return Fraction(swaps * ech[n - 1][n - 1], math.prod(scales))


def normalize_vector(x: Sequence) -> Vector:
    """Scale to coprime integers with the first nonzero coordinate positive."""
    x = [Fraction(v) for v in x]
    nz = [v for v in x if v != 0]
    if not nz:
        return tuple(x)
    den = math.lcm(*(v.denominator for v in nz))
    ints = [int(v * den) for v in x]
    g = math.gcd(*ints)
    if nz[0] < 0:
        g = -g
    return tuple(Fraction(v // g) for v in ints)


def nullspace(rows: Sequence[Sequence], n_cols: int | None = None) -> list[Vector]:
    """Exact basis of {x : M x = 0} for a general rational matrix M."""
    if n_cols is None:
        n_cols = len(rows[0]) if rows else 0
    if not rows:
        return [tuple(Fraction(int(i == j)) for i in range(n_cols)) for j in range(n_cols)]
    ech, pivots, _ = _bareiss_echelon(_integer_rows(rows))
    free = [c for c in range(n_cols) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [Fraction(0)] * n_cols
        x[f] = Fraction(1)
        for r in reversed(range(len(pivots))):
            pc = pivots[r]
            acc = sum((ech[r][j] * x[j] for j in range(pc + 1, n_cols)), Fraction(0))
            x[pc] = -acc / ech[r][pc]
        basis.append(normalize_vector(x))
    return basis


def kernel_basis(a: SymRatMatrix) -> list[Vector]:
    return nullspace(a.rows, a.n)


def _fully_supported_combination(basis: Sequence[Vector], n: int) -> Vector | None:
    if not basis:
        return None
    for v in range(n):
        if all(b[v] == 0 for b in basis):
            return None
    # each coordinate of sum t^i b_i is a nonzero polynomial of degree < len(basis),
    # so one of the first n*(len(basis)-1)+1 integers t avoids every root
    for t in itertools.count():
        coeffs = [t ** i for i in range(len(basis))]
        x = [sum((c * b[v] for c, b in zip(coeffs, basis)), Fraction(0)) for v in range(n)]
        if all(xv != 0 for xv in x):
            return normalize_vector(x)
    return None  # pragma: no cover


def is_supersingular(a: SymRatMatrix) -> Vector | None:
    """Kernel vector with every coordinate nonzero, or None.

    The kernel avoids all coordinate hyperplanes unless it lies inside one of
    them, since a rational vector space is not a finite union of proper
    subspaces; the witness is an integer combination of the kernel basis.
    """
    return _fully_supported_combination(kernel_basis(a), a.n)


def _subset_cap() -> int:
    raw = os.environ.get("BKN_SUBSET_CAP")
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise ValueError(f"BKN_SUBSET_CAP must be an integer, got {raw!r}") from None
    return DEFAULT_SUBSET_CAP


def supports(n: int) -> Iterable[tuple[int, ...]]:
    """Nonempty subsets of range(n), largest first, lexicographic within a size."""
    for k in range(n, 0, -1):
        yield from itertools.combinations(range(n), k)


def is_weakly_singular(a: SymRatMatrix, cap: int | None = None) -> Vector | None:
    """Nonzero x with (Ax)_v = 0 on supp(x), or None.

    Such x exists iff some principal submatrix A[S, S] is supersingular (take
    S = supp x).  Supports are scanned in the order of :func:`supports`, so the
    reported witness has the largest possible support; a cheap integer rank
    test screens out nonsingular submatrices first.
    """
    cap = _subset_cap() if cap is None else cap
    if a.n > cap:
        raise SubsetCapExceeded(f"dimension {a.n} exceeds the weak-singularity cap {cap}")
    scale = math.lcm(*(x.denominator for r in a.rows for x in r)) if a.n else 1
    ints = [[int(x * scale) for x in r] for r in a.rows]
    for s in supports(a.n):
        sub = [[ints[i][j] for j in s] for i in s]
        if len(_bareiss_echelon(sub)[1]) == len(s):
            continue
        y = _fully_supported_combination(kernel_basis(a.principal(s)), len(s))
        if y is None:
            continue
        x = [Fraction(0)] * a.n
        for i, v in zip(s, y):
            x[i] = v
        return normalize_vector(x)
    return None
