"""Exact linear algebra over graded spaces of polynomial forms.

Questions like "is omega a combination d(Omega) + sum (f_i - y_i) eta_i
with all parts in explicit finite-dimensional monomial spaces" reduce to
rational linear systems.  This module enumerates the monomial spaces,
assembles the columns, and solves exactly.

The solver clears denominators column by column and runs fraction-free
(Bareiss) elimination over the integers, recording every row operation.
The factorization is reused across targets, so deciding many membership
questions against one column family costs one elimination.  Witnesses are
deterministic: first usable pivot in enumeration order, free variables
set to zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm

from .polyform import KForm, Polynomial, weighted_degree

__all__ = [
    "weighted_exponents", "monomial_basis", "kform_coordinates",
    "ExactLinearSolver", "ColumnGroup", "operator_columns", "GroupWitness",
    "CombinationSolver", "graded_solve", "bounded_solve",
]


def weighted_exponents(n, weights, degree, at_most=False):
    """Exponent tuples of weighted degree == degree (or <= with at_most).

    Deterministic enumeration, sorted lexicographically.
    """
    if degree < 0:
        return []
    out = []
    e = [0] * n

    def rec(i, rem):
        if i == n:
            if rem == 0 or at_most:
                out.append(tuple(e))
            return
        for v in range(rem // weights[i] + 1):
            e[i] = v
            rec(i + 1, rem - v * weights[i])
        e[i] = 0

    rec(0, degree)
    out.sort()
    return out


def monomial_basis(n, k, weights, degree, at_most=False):
    """Monomial k-forms x^a dx_S of weighted degree == degree (or <=).

    Index tuples S run lexicographically; exponents lexicographically
    inside each S.  The empty list for negative degrees.
    """
    out = []
    for S in combinations(range(n), k):
        shift = sum(weights[i] for i in S)
        for e in weighted_exponents(n, weights, degree - shift, at_most=at_most):
            out.append(KForm.monomial_form(Polynomial.monomial(n, e), S))
    return out


def kform_coordinates(f):
    """Flatten a form to {(S, exponent): coefficient}."""
    out = {}
    for S, P in f.coeffs.items():
        for e, c in P.terms.items():
            out[(S, e)] = c
    return out


class ExactLinearSolver:
    """Factor-once / solve-many exact solver for sum_j c_j col_j = target.

    Columns are sparse dicts over hashable row keys.  Row space is the
    union of the column supports; a target with a nonzero coordinate
    outside it is immediately unsolvable.
    """

    __slots__ = ("row_index", "nrows", "ncols", "col_scale", "_mat", "_ops", "_pivots")

    def __init__(self, columns, row_keys=None):
        columns = list(columns)
        if row_keys is None:
            keys = set()
            for col in columns:
                keys.update(col.keys())
            row_keys = sorted(keys)
        self.row_index = {kk: i for i, kk in enumerate(row_keys)}
        self.nrows = len(row_keys)
        self.ncols = len(columns)
        mat = [[0] * self.ncols for _ in range(self.nrows)]
        scale = []
        for j, col in enumerate(columns):
            s = 1
            for v in col.values():
                s = lcm(s, Fraction(v).denominator)
            scale.append(s)
            for kk, v in col.items():
                num = Fraction(v) * s
                mat[self.row_index[kk]][j] = int(num)
        self.col_scale = scale
        self._eliminate(mat)

    def _eliminate(self, mat):
        ops = []
        pivots = []
        prev = 1
        rank = 0
        for col in range(self.ncols):
            piv_row = None
            for r in range(rank, self.nrows):
                if mat[r][col]:
                    piv_row = r
                    break
            if piv_row is None:
                continue
            if piv_row != rank:
                mat[rank], mat[piv_row] = mat[piv_row], mat[rank]
                ops.append(("swap", rank, piv_row))
            prow = mat[rank]
            piv = prow[col]
            multipliers = []
            for r in range(rank + 1, self.nrows):
                row = mat[r]
                v = row[col]
                multipliers.append(v)
                # fraction-free update; the division by the previous pivot is exact
                row[col:] = [(piv * a - v * b) // prev for a, b in zip(row[col:], prow[col:])]
            ops.append(("elim", rank, piv, prev, multipliers))
            pivots.append((rank, col))
            prev = piv
            rank += 1
        self._ops = ops
        self._pivots = pivots
        self._mat = mat

    @property
    def rank(self):
        return len(self._pivots)

    def _apply_ops(self, b):
        for op in self._ops:
            if op[0] == "swap":
                _, i, j = op
                b[i], b[j] = b[j], b[i]
            else:
                _, prow, piv, prev, multipliers = op
                bp = b[prow]
                base = prow + 1
                for off, v in enumerate(multipliers):
                    r = base + off
                    b[r] = (piv * b[r] - v * bp) / prev

    def _back_substitute(self, b, x):
        for prow, pcol in reversed(self._pivots):
            row = self._mat[prow]
            s = b[prow]
            for c in range(pcol + 1, self.ncols):
                if row[c] and x[c]:
                    s -= row[c] * x[c]
            x[pcol] = s / row[pcol]

    def solve(self, target):
        """Coefficients over the original columns, or None if unsolvable."""
        b = [Fraction(0)] * self.nrows
        for kk, v in target.items():
            if not v:
                continue
            i = self.row_index.get(kk)
            if i is None:
                return None
            b[i] = Fraction(v)
        self._apply_ops(b)
        for r in range(self.rank, self.nrows):
            if b[r]:
                return None
        x = [Fraction(0)] * self.ncols
        self._back_substitute(b, x)
        return [x[j] * self.col_scale[j] for j in range(self.ncols)]

    def nullspace(self):
        """Deterministic kernel basis, one vector per free column."""
        piv_cols = {c for _, c in self._pivots}
        zero = [Fraction(0)] * self.nrows
        out = []
        for fc in range(self.ncols):
            if fc in piv_cols:
                continue
            x = [Fraction(0)] * self.ncols
            x[fc] = Fraction(1)
            self._back_substitute(list(zero), x)
            out.append([x[j] * self.col_scale[j] for j in range(self.ncols)])
        return out


@dataclass
class ColumnGroup:
    """A named block of unknowns: basis forms and their operator images."""

    label: str
    n: int
    k: int  # form degree of the unknown space
    basis: list
    images: list

    def __post_init__(self):
        if len(self.basis) != len(self.images):
            raise ValueError("basis/images length mismatch")


def operator_columns(label, basis, op, n, k):
    """ColumnGroup for a linear operator applied to each basis form."""
    return ColumnGroup(label, n, k, list(basis), [op(b) for b in basis])


@dataclass
class GroupWitness:
    """Solution slice for one column group: coefficients and the combination."""

    coefficients: list
    combination: KForm


class CombinationSolver:
    """Shared factorization for repeated solves against fixed column groups."""

    __slots__ = ("groups", "solver")

    def __init__(self, groups):
        self.groups = list(groups)
        cols = []
        for g in self.groups:
            for img in g.images:
                cols.append(kform_coordinates(img))
        self.solver = ExactLinearSolver(cols)

    def solve(self, target):
        sol = self.solver.solve(kform_coordinates(target))
        if sol is None:
            return None
        out = []
        pos = 0
        for g in self.groups:
            coeffs = sol[pos:pos + len(g.basis)]
            pos += len(g.basis)
            comb = KForm.zero(g.n, g.k)
            for c, b in zip(coeffs, g.basis):
                if c:
                    comb = comb + c * b
            out.append(GroupWitness(coeffs, comb))
        return out


def _check_graded(target, groups, weights):
    r = target.weighted_degree(weights)
    if not target.is_homogeneous(weights):
        raise ValueError("incompatible degrees: target is not homogeneous")
    for g in groups:
        for img in g.images:
            if img.is_zero():
                continue
            if img.k != target.k or not img.is_homogeneous(weights) \
                    or img.weighted_degree(weights) != r:
                raise ValueError(f"incompatible degrees in column group {g.label!r}")


def graded_solve(target, groups, weights):
    """Solve within one graded piece; degree mismatches are caller bugs."""
    if target.is_zero():
        return [GroupWitness([Fraction(0)] * len(g.basis), KForm.zero(g.n, g.k))
                for g in groups]
    _check_graded(target, groups, weights)
    return CombinationSolver(groups).solve(target)


def bounded_solve(target, groups):
    """Solve against degree-bounded (not necessarily graded) column groups."""
    return CombinationSolver(groups).solve(target)
