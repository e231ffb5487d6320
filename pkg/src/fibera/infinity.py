"""The fibre at infinity of a weighted-dominant polynomial map.

For F = (f_1, ..., f_q): C^n -> C^q with n > q and positive weights, write
fbar_i for the top weighted-homogeneous component of f_i.  The fibre at
infinity is the common zero set of the fbar_i; its defining ideal is
I = (fbar_1, ..., fbar_q).  With J the ideal of maximal minors of the
Jacobian of (fbar_1, ..., fbar_q), the map is a complete intersection at
infinity (CIA) when V(I+J) has dimension < n - q, and the singularity at
infinity is isolated when dim V(I+J) <= 0.  In the isolated case the
Milnor number mu = dim_Q Q[x]/(I+J) counts the cohomology of the fibre at
infinity in degree n - q, and an explicit basis is produced by multiplying
a monomial basis of Q[x]/(I+J) into the generators of the kernel of the
Euler contraction on (n-q)-forms.

A k-form omega is *closed at infinity* when d(omega) ^ dfbar_1 ^ ... ^
dfbar_q lies in I (coefficientwise), and *exact at infinity* when omega =
d(Omega) + sum fbar_i eta_i for polynomial forms Omega, eta_i.  Both are
decidable: closedness via normal forms, exactness degree by degree
because the exact subspace is graded.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .polyform import (KForm, NEG_INF, Polynomial, euler_contraction,
                       exterior_derivative, validate_weights, wedge)
from .groebner import (GroebnerBasis, MonomialOrder, buchberger,
                       elimination_order, ideal_dimension,
                       quotient_vector_basis)
from .gradedlin import (ColumnGroup, CombinationSolver, monomial_basis,
                        operator_columns)


class PreconditionError(ValueError):
    """A mathematical precondition on the input map fails."""


class PolyMap:
    """A polynomial map C^n -> C^q, n > q, with its data at infinity.

    Groebner bases for the ideal at infinity (I), the singular ideal
    (I+J), fibre ideals, and the linear solvers for exactness questions
    are computed once and cached on the instance.
    """

    def __init__(self, components, weights):
        components = list(components)
        if not components:
            raise ValueError("empty map")
        n = components[0].n
        q = len(components)
        if n <= q:
            raise PreconditionError("need more variables than components")
        self.weights = validate_weights(weights, n)
        for i, f in enumerate(components):
            if f.n != n:
                raise ValueError("map components live in different rings")
            if f.is_zero():
                raise PreconditionError(f"component {i + 1} is zero")
            if f.weighted_degree(self.weights) < 1:
                raise PreconditionError(f"component {i + 1} is constant")
        self.n = n
        self.q = q
        self.components = components
        self.degrees = [f.weighted_degree(self.weights) for f in components]
        self.top_components = [f.top_component(self.weights) for f in components]
        self.order = MonomialOrder(self.weights)
        self.infinity_gb = buchberger(self.top_components, self.order)
        self.jacobian_minors = self._minors()
        self.singular_gb = buchberger(self.top_components + self.jacobian_minors,
                                      self.order)
        self.jac_form = _wedge_differentials(self.components)
        self.jac_form_top = _wedge_differentials(self.top_components)
        self._fibre_gbs = {}
        self._exact_groups = {}
        self._exact_solvers = {}
        self._fibre_solvers = {}
        self._graph_gb = None

    def _minors(self):
        rows = [[f.derivative(j) for j in range(self.n)] for f in self.top_components]
        out = []
        for cols in combinations(range(self.n), self.q):
            out.append(_det([[rows[i][j] for j in cols] for i in range(self.q)]))
        return out

    def point(self, values):
        """Coerce a value sequence to a fibre point (tuple of q Fractions)."""
        pt = tuple(Fraction(v) for v in values)
        if len(pt) != self.q:
            raise ValueError(f"point needs {self.q} coordinates, got {len(pt)}")
        return pt

    def fibre_gb(self, y):
        """Groebner basis of (f_1 - y_1, ..., f_q - y_q)."""
        y = self.point(y)
        gb = self._fibre_gbs.get(y)
        if gb is None:
            gens = [f - Polynomial.constant(self.n, c)
                    for f, c in zip(self.components, y)]
            gb = buchberger(gens, self.order)
            self._fibre_gbs[y] = gb
        return gb

    def exactness_groups(self, k, r):
        """Column groups spanning the degree-r graded piece of
        d(Omega^(k-1)) + sum fbar_i Omega^k.

        Layout: group 0 is the d-image block (empty basis when k == 0),
        groups 1..q the multiples of each top component.
        """
        key = (k, r)
        groups = self._exact_groups.get(key)
        if groups is not None:
            return groups
        n, w = self.n, self.weights
        dbasis = monomial_basis(n, k - 1, w, r) if k >= 1 else []
        groups = [operator_columns("d", dbasis, exterior_derivative,
                                   n, max(k - 1, 0))]
        for i, ftop in enumerate(self.top_components):
            mbasis = monomial_basis(n, k, w, r - self.degrees[i])
            groups.append(operator_columns(f"top{i + 1}", mbasis,
                                           lambda b, p=ftop: p * b, n, k))
        self._exact_groups[key] = groups
        return groups

    def exactness_solver(self, k, r):
        key = (k, r)
        solver = self._exact_solvers.get(key)
        if solver is None:
            solver = CombinationSolver(self.exactness_groups(k, r))
            self._exact_solvers[key] = solver
        return solver

    def fibre_exactness_groups(self, k, r, y):
        """Degree-bounded column groups for d(Omega^(k-1)) + sum (f_i - y_i) Omega^k."""
        y = self.point(y)
        key = (k, r, y)
        cached = self._fibre_solvers.get(key)
        if cached is not None:
            return cached
        n, w = self.n, self.weights
        dbasis = monomial_basis(n, k - 1, w, r, at_most=True) if k >= 1 else []
        groups = [operator_columns("d", dbasis, exterior_derivative,
                                   n, max(k - 1, 0))]
        for i, (f, c) in enumerate(zip(self.components, y)):
            shifted = f - Polynomial.constant(n, c)
            mbasis = monomial_basis(n, k, w, r - self.degrees[i], at_most=True)
            groups.append(operator_columns(f"fib{i + 1}", mbasis,
                                           lambda b, p=shifted: p * b, n, k))
        solver = CombinationSolver(groups)
        self._fibre_solvers[key] = (groups, solver)
        return groups, solver

    def graph_gb(self):
        """Elimination basis of (f_i(x) - t_i) in Q[x, t], x-block first."""
        if self._graph_gb is None:
            n, q = self.n, self.q
            tw = tuple(max(d, 1) for d in self.degrees)
            order = elimination_order(self.weights + tw, list(range(n)))
            gens = []
            for i, f in enumerate(self.components):
                gens.append(f.pad(q) - Polynomial.variable(n + q, n + i))
            self._graph_gb = buchberger(gens, order)
        return self._graph_gb


def _det(m):
    if len(m) == 1:
        return m[0][0]
    out = Polynomial.zero(m[0][0].n)
    for j in range(len(m)):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _det(minor)
        out = out - term if j & 1 else out + term
    return out


def _wedge_differentials(polys):
    out = exterior_derivative(polys[0])
    for f in polys[1:]:
        out = wedge(out, exterior_derivative(f))
    return out


def build(components, weights):
    """Construct a PolyMap and its cached data at infinity."""
    return PolyMap(components, weights)


class CompleteIntersectionCheck:
    """CIA verdict with the dimensions behind it."""

    __slots__ = ("is_cia", "dim_fibre", "dim_singular", "codim_required")

    def __init__(self, is_cia, dim_fibre, dim_singular, codim_required):
        self.is_cia = is_cia
        self.dim_fibre = dim_fibre
        self.dim_singular = dim_singular
        self.codim_required = codim_required

    def __bool__(self):
        return self.is_cia

    def __repr__(self):
        return (f"CompleteIntersectionCheck(is_cia={self.is_cia}, "
                f"dim_fibre={self.dim_fibre}, dim_singular={self.dim_singular})")


def is_complete_intersection_at_infinity(F):
    """Decide dim V(I+J) < n - q; the empty variety (dimension -1) passes."""
    dim_sing = ideal_dimension(F.singular_gb)
    dim_fib = ideal_dimension(F.infinity_gb)
    return CompleteIntersectionCheck(dim_sing < F.n - F.q, dim_fib, dim_sing,
                                     F.n - F.q)


def singular_dimension(F):
    """Dimension of V(I+J); -1 when empty."""
    return ideal_dimension(F.singular_gb)


def milnor_number(F):
    """dim_Q Q[x]/(I+J) for an isolated singularity at infinity (0 if empty)."""
    dim = singular_dimension(F)
    if dim > 0:
        raise PreconditionError("non-isolated singularity at infinity")
    if dim < 0:
        return 0
    return len(quotient_vector_basis(F.singular_gb))


def koszul_kernel_generators(F):
    """Module generators of ker(i_X) on (n-q)-forms: i_X(dx_T), |T| = n-q+1.

    The Euler contraction is the Koszul differential of the regular
    sequence (p_i x_i), so these contractions generate the kernel in
    every weighted degree.
    """
    n, q, w = F.n, F.q, F.weights
    out = []
    for T in combinations(range(n), n - q + 1):
        out.append(euler_contraction(KForm.basis_form(n, T), w))
    return out


def euler_normalize(omega, F):
    """Representative omega - d(i_X omega)/r = i_X(d omega)/r of the class of
    a homogeneous degree-r form; its Euler contraction vanishes."""
    w = F.weights
    if omega.is_zero():
        return omega
    if not omega.is_homogeneous(w):
        raise ValueError("euler_normalize needs a homogeneous form")
    r = omega.weighted_degree(w)
    if r <= 0:
        raise ValueError("euler_normalize needs positive weighted degree")
    return Fraction(1, r) * euler_contraction(exterior_derivative(omega), w)


def closed_at_infinity(omega, F):
    """d(omega) ^ dfbar_1 ^ ... ^ dfbar_q = 0 modulo I, coefficientwise."""
    z = wedge(exterior_derivative(omega), F.jac_form_top)
    return all(F.infinity_gb.contains(P) for P in z.coeffs.values())


def exact_at_infinity(omega, F):
    """Witness (Omega, [eta_1..eta_q]) with omega = d(Omega) + sum fbar_i eta_i,
    or None.  Decided one graded piece at a time; the subspace is graded."""
    n, q, k = F.n, F.q, omega.k
    Omega = KForm.zero(n, max(k - 1, 0))
    etas = [KForm.zero(n, k) for _ in range(q)]
    if omega.is_zero():
        return Omega, etas
    for r, part in sorted(omega.homogeneous_components(F.weights).items()):
        ws = F.exactness_solver(k, r).solve(part)
        if ws is None:
            return None
        Omega = Omega + ws[0].combination
        for i in range(q):
            etas[i] = etas[i] + ws[1 + i].combination
    return Omega, etas


class InfinityBasis:
    """Weighted-homogeneous basis of the degree-(n-q) cohomology at infinity."""

    def __init__(self, forms, degrees, mu):
        self.forms = list(forms)
        self.degrees = list(degrees)
        self.mu = mu
        self._class_solvers = {}  # per-degree solvers, filled by fibre queries

    def __len__(self):
        return len(self.forms)

    def __iter__(self):
        return iter(self.forms)


def infinity_basis(F):
    """Greedy basis from candidates (standard monomial) * (kernel generator).

    Candidates are sorted by weighted degree, ties in enumeration order; a
    candidate is kept when it is not in (exact at infinity) + span(kept).
    Exactly mu forms survive.
    """
    dim = singular_dimension(F)
    if dim > 0:
        raise PreconditionError("non-isolated singularity at infinity")
    mu = milnor_number(F)
    if mu == 0:
        return InfinityBasis([], [], 0)
    std = quotient_vector_basis(F.singular_gb)
    kernel_gens = koszul_kernel_generators(F)
    w = F.weights
    candidates = []
    pos = 0
    for e in std:
        P = Polynomial.monomial(F.n, e)
        for g in kernel_gens:
            c = P * g
            candidates.append((c.weighted_degree(w), pos, c))
            pos += 1
    candidates.sort(key=lambda t: (t[0], t[1]))
    kept = []
    kept_degrees = []
    k = F.n - F.q
    for r, _, cand in candidates:
        same = [b for b, d in zip(kept, kept_degrees) if d == r]
        groups = [ColumnGroup("kept", F.n, k, same, same)] + F.exactness_groups(k, r)
        if CombinationSolver(groups).solve(cand) is None:
            kept.append(cand)
            kept_degrees.append(r)
            if len(kept) == mu:
                return InfinityBasis(kept, kept_degrees, mu)
    raise RuntimeError("internal: candidate generators do not span the cohomology")
