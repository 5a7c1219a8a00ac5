"""Apolarity: differential operators acting on forms, catalecticants,
apolar ideals, point-set ideals, and the power-sum certificates.

The action is by differentiation.  A dual monomial y^b acts on primal
forms as the operator prod_i (d/dx_i)^{b_i}; this matches the convention
under which each Veronese minor annihilates the catalog's cubic family.
Because differentiation introduces factorials, every operation in this
module insists on characteristic 0 or characteristic larger than the
degree of the acted-on form.

Matrix orientation.  catalecticant(f, k) has one row per degree-k dual
monomial and one column per degree-(d-k) primal monomial, so the row
space of catalecticant(f, 1) is the space of first partials P(f), and
the graded piece I_f(k) of the apolar ideal is the LEFT kernel.
"""

from __future__ import annotations

import math

from .errors import PreconditionError
from .fields import QQ, GF
from .forms import (DUAL_ALPHABET, HomogeneousForm, monomial_count,
                    monomial_exponents, monomial_index)
from .linalg import ExactMatrix, Subspace


def _require_char(field, degree):
    if field.char != 0 and field.char <= degree:
        raise PreconditionError(
            "characteristic %d <= degree %d collides with factorials"
            % (field.char, degree))


class ApolarityContext:
    """Shared variable count and field for one chain of pairings.

    A convenience guard object; the module functions accept bare forms,
    and this class just centralizes the compatibility checks for callers
    that juggle many forms at once (the CLI does).
    """

    def __init__(self, nvars, field=QQ):
        self.nvars = nvars
        self.field = field

    def check(self, form):
        if form.nvars != self.nvars:
            raise PreconditionError("form has %d variables, context wants %d"
                                    % (form.nvars, self.nvars))
        if form.field != self.field:
            raise PreconditionError("form is over %r, context wants %r"
                                    % (form.field, self.field))
        return form

    def dual_alphabet_of(self, form):
        return DUAL_ALPHABET[form.alphabet]


class PointSet:
    """A list of projective points with exact coordinates.

    Points are stored as given (not rescaled).  Reduced sets refuse
    duplicates up to scale; pass allow_duplicates=True to model a
    multiset, in which case the reduced-scheme operations refuse it.
    """

    def __init__(self, points, field=QQ, allow_duplicates=False):
        pts = [tuple(p) for p in points]
        if not pts:
            raise PreconditionError("empty point set")
        n = len(pts[0])
        for p in pts:
            if len(p) != n:
                raise PreconditionError("points of unequal length")
            if all(field.is_zero(c) for c in p):
                raise PreconditionError("zero vector is not a projective point")
        self.points = tuple(pts)
        self.nvars = n
        self.field = field
        self.allow_duplicates = allow_duplicates
        if not allow_duplicates:
            seen = set()
            for p in pts:
                key = self._scale_key(p)
                if key in seen:
                    raise PreconditionError(
                        "duplicate point up to scale: %r" % (p,))
                seen.add(key)

    def _scale_key(self, p):
        F = self.field
        lead = next(c for c in p if not F.is_zero(c))
        inv = F.inv(lead)
        return tuple(F.mul(inv, c) for c in p)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def to_json(self):
        if self.field == QQ:
            return [[str(c) for c in p] for p in self.points]
        return [[c if isinstance(c, int) else list(c) for c in p]
                for p in self.points]

    @classmethod
    def from_json(cls, data, field=QQ, allow_duplicates=False):
        if field == QQ:
            pts = [[field.parse_scalar(str(c)) for c in p] for p in data]
        else:
            pts = [[field.from_int(c) if isinstance(c, int) else tuple(c)
                    for c in p] for p in data]
        return cls(pts, field, allow_duplicates)

    def __repr__(self):
        return "<PointSet %d points in P^%d over %s>" % (
            len(self.points), self.nvars - 1, self.field.describe())


def apolar_action(D, f):
    """Apply the dual form D (degree k) to f (degree d >= k).

    Returns the degree d-k form D(f).  Bilinear, and a ring action:
    (D1*D2)(f) = D1(D2(f)).
    """
    if D.nvars != f.nvars or D.field != f.field:
        raise PreconditionError("operator and form must share arity and field")
    if D.degree > f.degree:
        raise PreconditionError("operator degree %d exceeds form degree %d"
                                % (D.degree, f.degree))
    _require_char(f.field, f.degree)
    F = f.field
    out_degree = f.degree - D.degree
    idx = monomial_index(f.nvars, out_degree)
    coeffs = [F.zero] * monomial_count(f.nvars, out_degree)
    for cd, b in D.terms():
        for cf, a in f.terms():
            if any(ai < bi for ai, bi in zip(a, b)):
                continue
            g = tuple(ai - bi for ai, bi in zip(a, b))
            scale = 1
            for ai, gi in zip(a, g):
                # falling factorial a_i * (a_i-1) * ... * (g_i+1)
                scale *= math.factorial(ai) // math.factorial(gi)
            i = idx[g]
            coeffs[i] = F.add(coeffs[i], F.mul(F.mul(cd, cf), F.from_int(scale)))
    return HomogeneousForm(f.nvars, out_degree, coeffs, F,
                           DUAL_ALPHABET[D.alphabet])


def apolar_pairing(D, f):
    """Scalar pairing of two forms of equal degree: the full contraction."""
    if D.degree != f.degree:
        raise PreconditionError("pairing needs equal degrees")
    return apolar_action(D, f).coeffs[0]


def catalecticant(f, k):
    """Matrix of D -> D(f) from degree-k dual forms to degree-(d-k) forms.

    Rows follow the degree-k dual monomials, columns the degree-(d-k)
    primal monomials, both in graded-lex descending order.
    """
    if k < 0 or k > f.degree:
        raise PreconditionError("catalecticant degree k=%d out of range" % k)
    _require_char(f.field, f.degree)
    F = f.field
    n = f.nvars
    rows = []
    out_idx = monomial_index(n, f.degree - k)
    width = monomial_count(n, f.degree - k)
    fidx = monomial_index(n, f.degree)
    for b in monomial_exponents(n, k):
        row = [F.zero] * width
        for g in monomial_exponents(n, f.degree - k):
            a = tuple(bi + gi for bi, gi in zip(b, g))
            c = f.coeffs[fidx[a]]
            if F.is_zero(c):
                continue
            scale = 1
            for ai, gi in zip(a, g):
                scale *= math.factorial(ai) // math.factorial(gi)
            row[out_idx[g]] = F.mul(c, F.from_int(scale))
        rows.append(row)
    return ExactMatrix(rows, F, width)


def apolar_ideal_component(f, k):
    """The graded piece I_f(k) of the apolar ideal, as a subspace of S^kV*."""
    if k < 0:
        raise PreconditionError("negative degree")
    alphabet = DUAL_ALPHABET[f.alphabet]
    if k > f.degree:
        return Subspace.full_space(monomial_count(f.nvars, k), f.field,
                                   degree=k, alphabet=alphabet)
    cat = catalecticant(f, k)
    basis = cat.transpose().kernel_basis()
    return Subspace(basis, degree=k, alphabet=alphabet, already_independent=True)


def partial_space(f):
    """P(f): the span of the first partial derivatives inside S^{d-1}V."""
    cat = catalecticant(f, 1)
    return Subspace(cat.row_space_basis(), degree=f.degree - 1,
                    alphabet=f.alphabet, already_independent=True)


def q_f(f):
    """Q_f = I_f(2), the quadrics apolar to f."""
    return apolar_ideal_component(f, 2)


def subspace_forms(space, nvars=None):
    """Materialize the basis rows of a graded subspace as forms."""
    if space.degree is None:
        raise PreconditionError("subspace has no degree label")
    n = nvars
    if n is None:
        # recover the variable count from the ambient dimension and degree
        for cand in range(1, 8):
            if monomial_count(cand, space.degree) == space.ambient_dim:
                n = cand
                break
        else:
            raise PreconditionError("ambient dimension fits no variable count")
    return [HomogeneousForm(n, space.degree, row, space.field, space.alphabet)
            for row in space.basis_matrix().rows]


def evaluation_matrix(Z, k):
    """One row per point of Z, one column per degree-k dual monomial."""
    F = Z.field
    exps = monomial_exponents(Z.nvars, k)
    rows = []
    for p in Z.points:
        pows = []
        for v in p:
            row = [F.one]
            for _ in range(k):
                row.append(F.mul(row[-1], v))
            pows.append(row)
        r = []
        for e in exps:
            t = F.one
            for i, ei in enumerate(e):
                if ei:
                    t = F.mul(t, pows[i][ei])
            r.append(t)
        rows.append(r)
    return ExactMatrix(rows, F, len(exps))


def ideal_of_points_component(Z, k):
    """I_Z(k): degree-k dual forms vanishing at every point of Z."""
    if Z.allow_duplicates:
        raise PreconditionError("ideal of a non-reduced point multiset")
    basis = evaluation_matrix(Z, k).kernel_basis()
    return Subspace(basis, degree=k, alphabet="y", already_independent=True)


def imposes_independent_conditions(Z, d):
    """True when the degree-d evaluation matrix of Z has rank |Z|."""
    return evaluation_matrix(Z, d).rank() == len(Z)


def is_apolar_pointset(Z, f):
    """Is the reduced point set Z apolar to the cubic f?

    Tests I_Z(3) inside I_f(3) by letting every kernel generator act on f.
    Containment in degree 3 forces containment in degrees 1 and 2 as
    well: if D has degree 2 and y_i*D kills f for every i, the partials
    of the linear form D(f) all vanish, so D(f) = 0.  Hence the single
    degree suffices for a cubic.
    """
    if f.degree != 3:
        raise PreconditionError("apolarity certificate is for cubics")
    if Z.nvars != f.nvars or Z.field != f.field:
        raise PreconditionError("point set and form must share arity and field")
    component = ideal_of_points_component(Z, 3)
    for D in subspace_forms(component):
        if not apolar_action(D, f).is_zero():
            return False
    return True


def cube_span_contains(Z, f):
    """Independent certificate: does f lie in span of the cubes l^3, [l] in Z?

    Used to cross-check is_apolar_pointset; the two implementations share
    no linear algebra beyond the matrix class.
    """
    F = f.field
    fidx = monomial_index(f.nvars, 3)
    cols = []
    for p in Z.points:
        l = HomogeneousForm.linear(p, F, f.alphabet)
        cols.append(l.power(3).coeffs)
    span = ExactMatrix(cols, F, monomial_count(f.nvars, 3))
    return span.in_row_span(f.coeffs)


def graded_pieces_from_generators(generators, upto_degree):
    """Spans of the ideal pieces generated by dual forms, degree by degree.

    Returns a dict degree -> list of forms spanning (not necessarily a
    basis of) the piece generated in that degree by multiplying the
    given generators with monomials.
    """
    if not generators:
        raise PreconditionError("no generators")
    nvars = generators[0].nvars
    field = generators[0].field
    alphabet = generators[0].alphabet
    for g in generators:
        if g.nvars != nvars or g.field != field:
            raise PreconditionError("generators must share arity and field")
    pieces = {}
    for d in range(upto_degree + 1):
        span = []
        for g in generators:
            if g.degree > d:
                continue
            for e in monomial_exponents(nvars, d - g.degree):
                m = HomogeneousForm.monomial(nvars, e, field, alphabet)
                span.append(g.multiply(m))
        pieces[d] = span
    return pieces


def is_apolar_variety(ideal_generators, f):
    """Does the variety cut out by the generators admit f as apolar form?

    Checks that the degree-2 and degree-3 graded pieces spanned by the
    generators annihilate f, which for a cubic is the whole containment
    I_X inside I_f (higher pieces of I_f are everything).
    """
    if f.degree != 3:
        raise PreconditionError("apolar-variety certificate is for cubics")
    for g in ideal_generators:
        if g.degree > 3:
            raise PreconditionError("generator degree %d > 3" % g.degree)
    pieces = graded_pieces_from_generators(ideal_generators, 3)
    for d in (2, 3):
        for D in pieces.get(d, ()):
            if not apolar_action(D, f).is_zero():
                return False
    return True


def quadric_symmetric_matrix(q):
    """The symmetric matrix of second partials of a quadric (the Hessian).

    Its rank equals the rank of the quadric whenever 2 is invertible,
    which the characteristic guard of the callers ensures.
    """
    if q.degree != 2:
        raise PreconditionError("expected a quadric")
    n = q.nvars
    F = q.field
    rows = [[F.zero] * n for _ in range(n)]
    for c, e in q.terms():
        support = [i for i, ei in enumerate(e) if ei]
        if len(support) == 1:
            i = support[0]
            rows[i][i] = F.add(rows[i][i], F.mul(F.from_int(2), c))
        else:
            i, j = support
            rows[i][j] = F.add(rows[i][j], c)
            rows[j][i] = F.add(rows[j][i], c)
    return ExactMatrix(rows, F, n)


def min_partial_rank_scan(f):
    """Minimum rank of the quadric d_u(f) over all u in P^{n-1}(F_p).

    Exhaustive by construction, so f must live over a small prime field;
    the guard admits 5 <= p <= 11 (p > 3 keeps the cubic's factorials
    invertible, p <= 11 keeps the scan at most (11^6-1)/10 points).
    """
    from . import modular
    from .fields import projective_points

    if f.degree != 3:
        raise PreconditionError("partial-rank scan is for cubics")
    p = f.field.char
    if p == 0 or f.field.degree != 1:
        raise PreconditionError("scan needs a prime field")
    if p < 5 or p > 11:
        raise PreconditionError("scan guard: need 5 <= p <= 11, got %d" % p)
    hessians = []
    for i in range(f.nvars):
        H = quadric_symmetric_matrix(f.derivative(i))
        hessians.append([[int(v) for v in row] for row in H.rows])
    best = f.nvars + 1
    n = f.nvars
    for u in projective_points(f.field, n):
        acc = [[0] * n for _ in range(n)]
        for i, ui in enumerate(u):
            if ui:
                Hi = hessians[i]
                for r in range(n):
                    ar = acc[r]
                    hr = Hi[r]
                    for cidx in range(n):
                        ar[cidx] += ui * hr[cidx]
        rank = modular.rank_mod_p(acc, p)
        if rank < best:
            best = rank
            if best == 0:
                break
    return best


def exists_cubic_singular_along(Z):
    """Is there a nonzero dual cubic singular at every point of Z?

    Stacks the gradient-evaluation conditions (n per point) on the
    coefficient space of dual cubics; Euler's relation makes the value
    condition redundant in characteristic coprime to 3.
    """
    F = Z.field
    _require_char(F, 3)
    n = Z.nvars
    exps = monomial_exponents(n, 3)
    rows = []
    for point in Z.points:
        pows = []
        for v in point:
            pows.append([F.one, v, F.mul(v, v), F.mul(F.mul(v, v), v)])
        for i in range(n):
            row = []
            for e in exps:
                if e[i] == 0:
                    row.append(F.zero)
                    continue
                t = F.from_int(e[i])
                for j, ej in enumerate(e):
                    exp = ej - 1 if j == i else ej
                    if exp:
                        t = F.mul(t, pows[j][exp])
                row.append(t)
            rows.append(row)
    conditions = ExactMatrix(rows, F, len(exps))
    return conditions.rank() < len(exps)
