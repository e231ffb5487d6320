"""Cohomology of the affine fibres F^{-1}(y) and of the relative complex.

A k-form omega is *closed on the fibre* over y when d(omega) ^ df_1 ^ ...
^ df_q vanishes modulo the fibre ideal (f_1 - y_1, ..., f_q - y_q), and
*exact on the fibre* when omega = d(Omega) + sum (f_i - y_i) eta_i.  In
the relative complex, omega is closed when d(omega) ^ df_1 ^ ... ^ df_q
is identically zero and exact when omega = d(Omega) + sum eta_i ^ df_i.

For a map that is a complete intersection at infinity with isolated
singularity, the degree-(n-q) cohomology of every fibre is spanned by one
fixed weighted-homogeneous basis (an InfinityBasis), and every closed
(n-q)-form decomposes over it with either constant coefficients (on one
fibre) or polynomial coefficients in F (relatively).  Both decompositions
proceed by degree descent: solve the top weighted-degree piece against
the graded data at infinity, subtract, repeat.  Descent is strict because
f_i - fbar_i has lower degree than f_i, so termination is guaranteed and
every witness obeys the advertised degree bounds:

    deg a_i(F) <= deg omega - deg omega_i
    deg Omega  <= deg omega
    deg eta_i  <= deg omega - deg f_i
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .polyform import (KForm, NEG_INF, Polynomial, exterior_derivative,
                       wedge, weighted_degree)
from .gradedlin import (ColumnGroup, CombinationSolver, ExactLinearSolver,
                        monomial_basis)
from .groebner import normal_form
from .infinity import (InfinityBasis, PolyMap, PreconditionError,
                       is_complete_intersection_at_infinity,
                       singular_dimension)

__all__ = [
    "FibreClass", "RelativeDecomposition", "ExactnessResult",
    "closed_on_fibre", "bounded_ideal_membership", "exact_on_fibre",
    "fibre_class", "relative_closed", "relative_exact_homogeneous",
    "relative_decompose", "is_in_subalgebra", "verify_decomposition",
    "verify_vanishing",
]


@dataclass
class FibreClass:
    """Coordinates of a closed form in the cohomology of the fibre over `point`,
    with the exactness witness: omega = sum c_i b_i + d(omega_part) +
    sum (f_i - y_i) eta_i."""

    point: tuple
    coefficients: list
    omega: KForm
    eta: list


@dataclass
class RelativeDecomposition:
    """omega = sum a_i(F) b_i + d(omega_part) + sum eta_j ^ df_j, with the
    coefficient polynomials a_i in q variables."""

    coeff_polys: list
    omega: KForm
    eta: list


@dataclass
class ExactnessResult:
    """Outcome of an exactness search.

    witness is (Omega, [eta_1..eta_q]) when found, else None.  complete
    reports whether the degree-bounded search is known exhaustive (it is
    when dim Sing <= n - q - k); when False, a None witness does not
    disprove exactness.
    """

    witness: tuple | None
    complete: bool


def _require_cia_isolated(F):
    if not is_complete_intersection_at_infinity(F):
        raise PreconditionError("not a complete intersection at infinity")
    if singular_dimension(F) > 0:
        raise PreconditionError("non-isolated singularity at infinity")


def closed_on_fibre(omega, F, y):
    """d(omega) ^ df_1 ^ ... ^ df_q = 0 modulo the fibre ideal over y."""
    gb = F.fibre_gb(y)
    z = wedge(exterior_derivative(omega), F.jac_form)
    return all(gb.contains(P) for P in z.coeffs.values())


def bounded_ideal_membership(P, F, y):
    """Cofactors a_i with P = sum a_i (f_i - y_i), deg a_i <= deg P - deg f_i.

    Membership in the fibre ideal always admits cofactors within these
    bounds when the map is a complete intersection at infinity, so None
    then certifies non-membership.
    """
    q = F.q
    if P.is_zero():
        return [Polynomial.zero(F.n) for _ in range(q)]
    r = P.weighted_degree(F.weights)
    _, solver = F.fibre_exactness_groups(0, r, y)
    ws = solver.solve(KForm.from_polynomial(P))
    if ws is None:
        return None
    return [ws[1 + i].combination.as_polynomial() for i in range(q)]


def exact_on_fibre(omega, F, y):
    """Search omega = d(Omega) + sum (f_i - y_i) eta_i with deg Omega <= deg
    omega and deg eta_i <= deg omega - deg f_i."""
    k = omega.k
    complete = singular_dimension(F) <= F.n - F.q - k
    q = F.q
    if omega.is_zero():
        witness = (KForm.zero(F.n, max(k - 1, 0)),
                   [KForm.zero(F.n, k) for _ in range(q)])
        return ExactnessResult(witness, complete)
    r = omega.weighted_degree(F.weights)
    _, solver = F.fibre_exactness_groups(k, r, y)
    ws = solver.solve(omega)
    if ws is None:
        return ExactnessResult(None, complete)
    witness = (ws[0].combination, [ws[1 + i].combination for i in range(q)])
    return ExactnessResult(witness, complete)


def _class_solver(F, B, r):
    hit = B._class_solvers.get(r)
    if hit is None:
        k = F.n - F.q
        idx = [i for i, d in enumerate(B.degrees) if d == r]
        same = [B.forms[i] for i in idx]
        groups = [ColumnGroup("basis", F.n, k, same, list(same))]
        groups.extend(F.exactness_groups(k, r))
        hit = (idx, CombinationSolver(groups))
        B._class_solvers[r] = hit
    return hit


def fibre_class(omega, F, y, B):
    """Decompose a closed (n-q)-form over the basis B on the fibre over y.

    Degree descent: the top graded piece is solved against span(B at that
    degree) + d(...) + sum fbar_i (...), then subtracted using the full
    f_i - y_i, which strictly lowers the degree.
    """
    _require_cia_isolated(F)
    k = F.n - F.q
    if not omega.is_zero() and omega.k != k:
        raise PreconditionError(f"fibre classes live in form degree {k}")
    y = F.point(y)
    w = F.weights
    coeffs = [Fraction(0)] * B.mu
    omega_part = KForm.zero(F.n, max(k - 1, 0))
    etas = [KForm.zero(F.n, k) for _ in range(F.q)]
    rem = omega
    while not rem.is_zero():
        r = rem.weighted_degree(w)
        top = rem.top_component(w)
        idx, solver = _class_solver(F, B, r)
        ws = solver.solve(top)
        if ws is None:
            raise RuntimeError("internal: degree descent step unsolvable")
        for pos, i in enumerate(idx):
            coeffs[i] += ws[0].coefficients[pos]
        dpart = ws[1].combination
        omega_part = omega_part + dpart
        subtracted = ws[0].combination + exterior_derivative(dpart)
        for i in range(F.q):
            epart = ws[2 + i].combination
            if not epart.is_zero():
                etas[i] = etas[i] + epart
                subtracted = subtracted + (F.components[i] - y[i]) * epart
        rem = rem - subtracted
        new_r = rem.weighted_degree(w)
        if new_r != NEG_INF and new_r >= r:
            raise RuntimeError("internal: degree descent failed to decrease")
    return FibreClass(y, coeffs, omega_part, etas)


def relative_closed(omega, F):
    """d(omega) ^ df_1 ^ ... ^ df_q identically zero."""
    return wedge(exterior_derivative(omega), F.jac_form).is_zero()


def relative_exact_homogeneous(omega, F):
    """Witness (Omega, [eta_i]) with omega = d(Omega) + sum eta_i ^ dfbar_i
    inside one graded piece, or None."""
    if omega.is_zero():
        k = omega.k
        return (KForm.zero(F.n, max(k - 1, 0)),
                [KForm.zero(F.n, max(k - 1, 0)) for _ in range(F.q)])
    if not omega.is_homogeneous(F.weights):
        raise ValueError("relative_exact_homogeneous needs a homogeneous form")
    n, w, k = F.n, F.weights, omega.k
    r = omega.weighted_degree(w)
    dbasis = monomial_basis(n, k - 1, w, r) if k >= 1 else []
    groups = [ColumnGroup("d", n, max(k - 1, 0), dbasis,
                          [exterior_derivative(b) for b in dbasis])]
    for i, ftop in enumerate(F.top_components):
        df = exterior_derivative(ftop)
        basis = monomial_basis(n, k - 1, w, r - F.degrees[i]) if k >= 1 else []
        groups.append(ColumnGroup(f"eta{i + 1}", n, max(k - 1, 0), basis,
                                  [wedge(b, df) for b in basis]))
    ws = CombinationSolver(groups).solve(omega)
    if ws is None:
        return None
    return ws[0].combination, [ws[1 + i].combination for i in range(F.q)]


def relative_decompose(omega, F, B):
    """Certified relative decomposition with the degree bounds above."""
    _require_cia_isolated(F)
    k = F.n - F.q
    if not omega.is_zero() and omega.k != k:
        raise PreconditionError(f"relative decomposition needs a {k}-form")
    zero_pt = F.point([0] * F.q)
    return _relative_rec(omega, F, B, zero_pt)


def _relative_rec(om, F, B, zero_pt):
    q = F.q
    k = F.n - F.q
    kk = max(k - 1, 0)
    if om.is_zero():
        return RelativeDecomposition([Polynomial.zero(q) for _ in range(B.mu)],
                                     KForm.zero(F.n, kk),
                                     [KForm.zero(F.n, kk) for _ in range(q)])
    r = om.weighted_degree(F.weights)
    fc = fibre_class(om, F, zero_pt, B)
    a = [Polynomial.constant(q, c) if c else Polynomial.zero(q)
         for c in fc.coefficients]
    omega_part = fc.omega
    eta = [KForm.zero(F.n, kk) for _ in range(q)]
    sign = -1 if k % 2 else 1  # df_i ^ W = (-1)^(k-1) W ^ df_i for (k-1)-forms W
    for i in range(q):
        rest = fc.eta[i]
        if rest.is_zero():
            continue
        if rest.weighted_degree(F.weights) >= r:
            raise RuntimeError("internal: recursion without degree decrease")
        part = _relative_rec(rest, F, B, zero_pt)
        t_i = Polynomial.variable(q, i)
        for j in range(B.mu):
            if part.coeff_polys[j]:
                a[j] = a[j] + t_i * part.coeff_polys[j]
        f_i = F.components[i]
        if not part.omega.is_zero():
            omega_part = omega_part + f_i * part.omega
            eta[i] = eta[i] + sign * part.omega
        for j in range(q):
            if not part.eta[j].is_zero():
                eta[j] = eta[j] + f_i * part.eta[j]
    return RelativeDecomposition(a, omega_part, eta)


def is_in_subalgebra(R, F):
    """The polynomial A with R = A(f_1, ..., f_q), or None.

    Decided by normal form against the elimination basis of the graph
    ideal (f_i(x) - t_i): R lies in Q[F] exactly when the normal form
    only involves the t variables.
    """
    gb = F.graph_gb()
    nf = gb.normal_form(R.pad(F.q))
    n = F.n
    for e in nf.terms:
        if any(e[:n]):
            return None
    return Polynomial(F.q, {e[n:]: c for e, c in nf.terms.items()})


def verify_decomposition(omega, result, F, B):
    """Re-expand a decomposition and check the identity and all degree bounds."""
    w = F.weights
    r = omega.weighted_degree(w)
    if isinstance(result, FibreClass):
        recon = exterior_derivative(result.omega)
        for c, b in zip(result.coefficients, B.forms):
            if c:
                recon = recon + c * b
        for yi, f, e in zip(result.point, F.components, result.eta):
            if not e.is_zero():
                recon = recon + (f - yi) * e
        if recon != omega:
            return False
        if weighted_degree(result.omega, w) > r:
            return False
        for d, e in zip(F.degrees, result.eta):
            if weighted_degree(e, w) > r - d:
                return False
        for c, bd in zip(result.coefficients, B.degrees):
            if c and bd > r:
                return False
        return True
    if isinstance(result, RelativeDecomposition):
        recon = exterior_derivative(result.omega)
        for aa, b in zip(result.coeff_polys, B.forms):
            if not aa.is_zero():
                recon = recon + aa.compose(F.components) * b
        for e, f in zip(result.eta, F.components):
            if not e.is_zero():
                recon = recon + wedge(e, exterior_derivative(f))
        if recon != omega:
            return False
        if weighted_degree(result.omega, w) > r:
            return False
        for aa, bd in zip(result.coeff_polys, B.degrees):
            if weighted_degree(aa.compose(F.components), w) > r - bd:
                return False
        for d, e in zip(F.degrees, result.eta):
            if weighted_degree(e, w) > r - d:
                return False
        return True
    raise TypeError(f"cannot verify {type(result).__name__}")


def verify_vanishing(F, k, y, degree_bound):
    """Check H^k(F^{-1}(y)) = 0 up to a weighted-degree bound.

    Enumerates all monomial k-forms of weighted degree <= degree_bound,
    computes the kernel of the closed-on-fibre condition (a linear
    condition via normal forms), and confirms every kernel generator is
    exact on the fibre.  Requires dim Sing < n - q - k so the bounded
    exactness search is exhaustive.
    """
    if k < 1:
        raise ValueError("verify_vanishing needs form degree k >= 1")
    if not (singular_dimension(F) < F.n - F.q - k):
        raise PreconditionError(
            "vanishing check requires dim Sing < n - q - k")
    y = F.point(y)
    w = F.weights
    basis = monomial_basis(F.n, k, w, degree_bound, at_most=True)
    gb = F.fibre_gb(y)
    cols = []
    for m in basis:
        z = wedge(exterior_derivative(m), F.jac_form)
        coords = {}
        for S, P in z.coeffs.items():
            nf = gb.normal_form(P)
            for e, c in nf.terms.items():
                coords[(S, e)] = c
        cols.append(coords)
    kernel = ExactLinearSolver(cols).nullspace() if cols else []
    _, solver = F.fibre_exactness_groups(k, degree_bound, y)
    exact = 0
    failures = 0
    for vec in kernel:
        form = KForm.zero(F.n, k)
        for c, m in zip(vec, basis):
            if c:
                form = form + c * m
        if solver.solve(form) is None:
            failures += 1
        else:
            exact += 1
    return {
        "form_degree": k,
        "degree_bound": degree_bound,
        "space_dimension": len(basis),
        "closed_dimension": len(kernel),
        "exact_dimension": exact,
        "all_exact": failures == 0,
    }
