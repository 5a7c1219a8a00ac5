"""Determinantal rank-drop loci of matrices of linear forms.

Three instruments over finite fields:

* drop_degree_on_line measures the degree of the rank-drop divisor of a
  matrix along a line, through gcds of random maximal-minor restrictions;
* interpolate_drop_curve recovers the defining polynomial of the drop
  locus of a 3-variable matrix by sampling ranks over an extension field
  and solving for the coefficients;
* singular_points_plane_curve and classify_singularity locate and grade
  the singularities of the resulting plane curves.

Everything here samples; nothing expands symbolic determinants of the
full matrix.  Randomness is always driven by an explicit seed and the
outputs are deterministic functions of (input, seed).
"""

from __future__ import annotations

import random

import numpy as np

from . import modular
from .errors import PreconditionError, UnstableComputationError
from .fields import GF, PrimeField, QuadraticField, projective_points, scalar_pow
from .forms import HomogeneousForm, monomial_count, monomial_exponents

_BINOMIAL_CACHE = {}


def _binomial(n, k):
    key = (n, k)
    if key not in _BINOMIAL_CACHE:
        import math
        _BINOMIAL_CACHE[key] = math.comb(n, k)
    return _BINOMIAL_CACHE[key]


class RankProfile:
    """Ranks of one linear-form matrix sampled at a batch of points."""

    def __init__(self, nrows, ncols, threshold, field):
        self.nrows = nrows
        self.ncols = ncols
        self.threshold = threshold
        self.field = field
        self.samples = []

    def record(self, point, rank):
        if rank > min(self.nrows, self.ncols):
            raise PreconditionError(
                "rank %d exceeds min(%d, %d)" % (rank, self.nrows, self.ncols))
        self.samples.append((tuple(point), rank))

    def dropped(self):
        """The sampled points where the rank is at most the threshold."""
        return [p for p, r in self.samples if r <= self.threshold]

    def drop_count(self):
        return len(self.dropped())

    def to_json(self):
        return {
            "rows": self.nrows,
            "cols": self.ncols,
            "threshold": self.threshold,
            "field": self.field.describe(),
            "samples": [{"point": [self.field.format_scalar(c) for c in p],
                         "rank": r} for p, r in self.samples],
        }

    def __repr__(self):
        return "<RankProfile %dx%d threshold %d, %d samples, %d dropped>" % (
            self.nrows, self.ncols, self.threshold, len(self.samples),
            self.drop_count())


def rank_profile(M, points, threshold):
    """Evaluate the rank of M at each point and collect a RankProfile."""
    profile = RankProfile(M.nrows, M.ncols, threshold, M.field)
    for p in points:
        profile.record(p, M.evaluate_at(list(p)).rank())
    return profile


def _line_arrays(M, line):
    """Numpy coefficient matrices (A, B) with M(a + s*b) = A + s*B mod p."""
    a, b = line
    if len(a) != M.nvars or len(b) != M.nvars:
        raise PreconditionError("line points must have %d coordinates" % M.nvars)
    p = M.field.char
    a = [int(c) % p for c in a]
    b = [int(c) % p for c in b]
    if not any(a) or not any(b):
        raise PreconditionError("zero vector cannot span a line")
    # proportionality check: all 2x2 minors of the two rows vanish
    proportional = all((a[i] * b[j] - a[j] * b[i]) % p == 0
                       for i in range(len(a)) for j in range(i + 1, len(a)))
    if proportional:
        raise PreconditionError("degenerate line: points are proportional")
    arrays = M.integer_coefficient_arrays()
    A = sum(int(av) * arr for av, arr in zip(a, arrays)) % p
    B = sum(int(bv) * arr for bv, arr in zip(b, arrays)) % p
    return A.astype(np.int64), B.astype(np.int64)


def _gcd_update(acc, poly, p):
    if not poly:
        return acc
    if acc is None:
        return modular.poly_monic(poly, p)
    return modular.poly_gcd(acc, poly, p)


def drop_degree_on_line(M, line, t, seed=0, subsets_per_round=8, max_rounds=6):
    """Degree of the squarefree rank-drop divisor of M along a line.

    The line through the two given points is parametrized, every entry of
    M becomes a univariate polynomial of degree at most 1, and random
    (t+1) x (t+1) submatrices contribute their determinant restricted to
    the line.  The stabilized gcd of those determinants cuts out the
    locus where the rank falls to t or below; its squarefree degree is
    returned, counting the chart's point at infinity once if the gcd
    vanishes there.

    The subset gcd only equals the full-minor gcd when enough random
    subsets agree; two consecutive rounds without change is the
    stabilization contract, and running out of rounds raises
    UnstableComputationError instead of guessing.
    """
    field = M.field
    if not isinstance(field, PrimeField):
        raise PreconditionError("line degree measurement works over GF(p)")
    p = field.char
    if p <= 50:
        raise PreconditionError(
            "need p > 50 for enough line points, got p=%d" % p)
    size = t + 1
    if size > min(M.nrows, M.ncols):
        raise PreconditionError(
            "threshold %d leaves no %dx%d minors in a %dx%d matrix"
            % (t, size, size, M.nrows, M.ncols))
    if p <= size + 1:
        raise PreconditionError("p=%d too small to interpolate degree %d"
                                % (p, size))
    A, B = _line_arrays(M, line)
    rng = random.Random(seed)

    # the line must leave the drop locus somewhere: probe 3 parameters
    generic_ok = False
    for _ in range(3):
        s = rng.randrange(p)
        if modular.rank_mod_p((A + s * B) % p, p) >= size:
            generic_ok = True
            break
    if not generic_ok:
        raise PreconditionError("line inside drop locus: rank <= %d at "
                                "3 random parameters" % t)

    params = list(range(size + 1))
    mats = [(A + s * B) % p for s in params]

    def one_subset():
        rows = sorted(rng.sample(range(M.nrows), size))
        if M.ncols == size:
            cols = list(range(size))
        else:
            cols = sorted(rng.sample(range(M.ncols), size))
        vals = [modular.det_mod_p(m[np.ix_(rows, cols)], p) for m in mats]
        if not any(vals):
            return None, None
        poly = modular.lagrange_interpolate(params, vals, p)
        if not poly:
            return None, None
        inf_mult = size - modular.poly_degree(poly)
        return poly, inf_mult

    gcd_acc = None
    inf_acc = None
    stable = False
    for _ in range(max_rounds):
        before = (tuple(gcd_acc) if gcd_acc is not None else None, inf_acc)
        produced = 0
        attempts = 0
        while produced < subsets_per_round:
            attempts += 1
            if attempts > 40 * subsets_per_round:
                raise UnstableComputationError(
                    "almost all random %dx%d minors vanish on the line"
                    % (size, size))
            poly, inf_mult = one_subset()
            if poly is None:
                continue
            produced += 1
            gcd_acc = _gcd_update(gcd_acc, poly, p)
            inf_acc = inf_mult if inf_acc is None else min(inf_acc, inf_mult)
        after = (tuple(gcd_acc) if gcd_acc is not None else None, inf_acc)
        if before == after and before[0] is not None:
            stable = True
            break
    if not stable:
        raise UnstableComputationError(
            "minor gcd did not stabilize within %d rounds" % max_rounds)

    squarefree = modular.poly_squarefree_part(gcd_acc, p)
    degree = max(modular.poly_degree(squarefree), 0)
    if inf_acc >= 1:
        degree += 1
    return degree


def _lagrange_field(field, xs, ys):
    """Lagrange interpolation with scalars from an arbitrary field object.

    Returns the coefficient list (low degree first) of the unique
    polynomial of degree < len(xs) through the points.
    """
    n = len(xs)
    coeffs = [field.zero] * n
    for i in range(n):
        num = [field.one]
        denom = field.one
        for j in range(n):
            if j == i:
                continue
            nxj = field.neg(xs[j])
            new = [field.mul(nxj, num[0])]
            for k in range(1, len(num)):
                new.append(field.add(num[k - 1], field.mul(nxj, num[k])))
            new.append(num[-1])
            num = new
            denom = field.mul(denom, field.sub(xs[i], xs[j]))
        s = field.div(ys[i], denom)
        for k in range(n):
            coeffs[k] = field.add(coeffs[k], field.mul(s, num[k]))
    while len(coeffs) > 1 and field.is_zero(coeffs[-1]):
        coeffs.pop()
    if len(coeffs) == 1 and field.is_zero(coeffs[0]):
        return []
    return coeffs


def plane_drop_points(M, t, extension_degree=1):
    """All points of P^2 over F_p or F_{p^2} where rank(M) <= t.

    M must be a linear-form matrix in 3 variables over a prime field.
    The scan is exhaustive, so the extension degree is capped at 2 and
    the table-arithmetic guard caps p at 11 for the quadratic case.
    """
    field = M.field
    if M.nvars != 3:
        raise PreconditionError("plane scan wants a matrix in 3 variables")
    if not isinstance(field, PrimeField):
        raise PreconditionError("plane scan works over GF(p)")
    p = field.char
    arrays = M.integer_coefficient_arrays()
    out = []
    if extension_degree == 1:
        for q in projective_points(field, 3):
            mat = sum(int(qv) * arr for qv, arr in zip(q, arrays)) % p
            if modular.rank_mod_p(mat, p) <= t:
                out.append(tuple(int(c) for c in q))
        return out
    if extension_degree != 2:
        raise PreconditionError("extension degree must be 1 or 2")
    ext = GF(p, 2)
    tables = modular.quadratic_tables(ext)
    for q in projective_points(ext, 3):
        re = sum(qv[0] * arr for qv, arr in zip(q, arrays)) % p
        im = sum(qv[1] * arr for qv, arr in zip(q, arrays)) % p
        if tables.batch_rank(re + p * im) <= t:
            out.append(tuple(q))
    return out


def _monomial_value(field, exps, point):
    v = field.one
    for e, c in zip(exps, point):
        if e:
            v = field.mul(v, scalar_pow(field, c, e))
    return v


def _point_condition_rows(field, point, degree, p):
    """F_p rows expressing F(point) = 0 for an unknown degree-d form.

    A base-field point contributes one row; an F_{p^2} point splits into
    its two coordinate rows.
    """
    exps = monomial_exponents(3, degree)
    if isinstance(field, PrimeField):
        return [[_monomial_value(field, e, point) % p for e in exps]]
    row_re = []
    row_im = []
    for e in exps:
        val = _monomial_value(field, e, point)
        row_re.append(val[0])
        row_im.append(val[1])
    return [row_re, row_im]


def _binary_restriction_weights(a, b, degree, p):
    """weights[k][i]: coefficient of s^k u^(d-k) in monomial_i(u*a + s*b).

    Both line points are integer vectors mod p, so the weights are plain
    ints mod p.
    """
    exps = monomial_exponents(3, degree)
    weights = [[0] * len(exps) for _ in range(degree + 1)]
    factor_cache = {}
    for i, e in enumerate(exps):
        conv = [1]
        for v in range(3):
            ev = e[v]
            if ev == 0:
                continue
            key = (v, ev)
            if key not in factor_cache:
                av, bv = a[v] % p, b[v] % p
                fac = [_binomial(ev, j) * pow(bv, j, p) % p
                       * pow(av, ev - j, p) % p for j in range(ev + 1)]
                factor_cache[key] = fac
            fac = factor_cache[key]
            new = [0] * (len(conv) + ev)
            for x, cx in enumerate(conv):
                if cx:
                    for y, cy in enumerate(fac):
                        new[x + y] = (new[x + y] + cx * cy) % p
            conv = new
        for k, c in enumerate(conv):
            weights[k][i] = c
    return weights


def _line_gcd_binary(M, line, t, rng, subsets_per_round, max_rounds):
    """Stabilized gcd of maximal minors on a line, as a binary form.

    Works over F_{p^2} sample parameters so small primes still give
    enough interpolation nodes, then projects the coefficients back to
    F_p (they must land there when both M and the line are F_p-rational).
    Returns the degree-(t+1)-homogenized coefficient list [G_0..G_d] with
    G_k the coefficient of s^k u^(d-k), d = affine degree + infinity
    multiplicity, or None when the gcd never stabilized or the line lies
    inside the drop locus.
    """
    p = M.field.char
    size = t + 1
    ext = GF(p, 2)
    tables = modular.quadratic_tables(ext)
    A, B = _line_arrays(M, line)
    elems = list(ext.elements())
    if len(elems) < size + 1:
        raise PreconditionError("p^2=%d too small to interpolate degree %d"
                                % (p * p, size))
    params = elems[:size + 1]
    packed = []
    for s in params:
        re = (A + s[0] * B) % p
        im = (s[1] * B) % p
        packed.append(re + p * im)

    def one_subset():
        rows = sorted(rng.sample(range(M.nrows), size))
        if M.ncols == size:
            cols = list(range(size))
        else:
            cols = sorted(rng.sample(range(M.ncols), size))
        vals = [int(tables.det(m[np.ix_(rows, cols)])) for m in packed]
        if not any(vals):
            return None, None
        ys = [ext.decode(v) for v in vals]
        coeffs = _lagrange_field(ext, params, ys)
        if not coeffs:
            return None, None
        ints = []
        for c in coeffs:
            if c[1] % p:
                raise PreconditionError(
                    "minor restriction interpolated outside GF(%d)" % p)
            ints.append(c[0] % p)
        poly = modular.poly_trim(ints, p)
        return poly, size - modular.poly_degree(poly)

    gcd_acc = None
    inf_acc = None
    for round_idx in range(max_rounds):
        before = (tuple(gcd_acc) if gcd_acc is not None else None, inf_acc)
        produced = 0
        attempts = 0
        while produced < subsets_per_round:
            attempts += 1
            if attempts > 40 * subsets_per_round:
                return None
            poly, inf_mult = one_subset()
            if poly is None:
                continue
            produced += 1
            gcd_acc = _gcd_update(gcd_acc, poly, p)
            inf_acc = inf_mult if inf_acc is None else min(inf_acc, inf_mult)
        after = (tuple(gcd_acc) if gcd_acc is not None else None, inf_acc)
        if round_idx > 0 and before == after and before[0] is not None:
            affine = list(gcd_acc)
            return affine + [0] * inf_acc
    return None


def interpolate_drop_curve(M, t, extension_degree=2, seed=0, target_degree=9,
                           subsets_per_round=8, max_rounds=6):
    """The plane curve where a 3-variable linear-form matrix drops rank.

    Scans the projective plane over F_p (or F_{p^2}), collects every
    point with rank <= t, and solves the linear system asking a degree-
    target_degree ternary form to vanish at all of them.  When the point
    conditions leave more than a line of solutions, the system is
    augmented with line restrictions: along F_p-rational lines the
    stabilized gcd of maximal minors pins the restriction of the curve
    up to scale, which is nine more linear conditions per line.

    The solution space must end up exactly one-dimensional; corank 0
    means no such curve exists and corank >= 2 after the line budget
    means the sampling field is too small.  The returned form has
    coefficients in F_p, normalized so its first nonzero coefficient
    (in the monomial order) is 1.
    """

    field = M.field
    if M.nvars != 3:
        raise PreconditionError("curve interpolation wants 3 variables")
    if not isinstance(field, PrimeField):
        raise PreconditionError("curve interpolation works over GF(p)")
    p = field.char
    if target_degree < 1:
        raise PreconditionError("target degree must be positive")
    ncoef = monomial_count(3, target_degree)
    drop = plane_drop_points(M, t, extension_degree)
    sample_field = field if extension_degree == 1 else GF(p, 2)
    conditions = []
    for q in drop:
        conditions.extend(_point_condition_rows(sample_field, q, target_degree, p))

    def corank_and_kernel():
        if not conditions:
            return ncoef, None
        kern = modular.kernel_mod_p(conditions, p)
        return kern.shape[0], kern

    corank, kern = corank_and_kernel()
    if corank == 0:
        raise PreconditionError(
            "no degree-%d curve passes through the %d sampled drop points"
            % (target_degree, len(drop)))

    if corank > 1:
        rng = random.Random(seed)
        lines = []
        for dual in projective_points(field, 3):
            basis = modular.kernel_mod_p([list(dual)], p)
            if basis.shape[0] == 2:
                lines.append((tuple(int(c) for c in basis[0]),
                              tuple(int(c) for c in basis[1])))
        rng.shuffle(lines)
        for a, b in lines:
            G = _line_gcd_binary(M, (a, b), t, rng, subsets_per_round,
                                 max_rounds)
            if G is None or len(G) - 1 != target_degree:
                continue
            pivot = next(k for k in range(len(G)) if G[k])
            weights = _binary_restriction_weights(a, b, target_degree, p)
            for k in range(target_degree + 1):
                if k == pivot:
                    continue
                row = [(G[pivot] * weights[k][i] - G[k] * weights[pivot][i]) % p
                       for i in range(ncoef)]
                if any(row):
                    conditions.append(row)
            corank, kern = corank_and_kernel()
            if corank <= 1:
                break
        if corank == 0:
            raise PreconditionError(
                "line conditions contradict the sampled drop points")
        if corank > 1:
            raise UnstableComputationError(
                "drop-curve system still has corank %d after the line "
                "budget; sample over a larger field" % corank)

    coeffs = [int(c) % p for c in kern[0]]
    lead = next(i for i, c in enumerate(coeffs) if c)
    inv = pow(coeffs[lead], p - 2, p)
    coeffs = [c * inv % p for c in coeffs]
    return HomogeneousForm(3, target_degree, coeffs, field, M.alphabet)


def singular_points_plane_curve(F, search_extension=1):
    """All singular points of a plane curve within P^2(F_{p^k}), k <= 2.

    A point is reported when F and all three partial derivatives vanish
    there; the scan is exhaustive over the requested field.
    """
    if F.nvars != 3:
        raise PreconditionError("singular-point scan wants a ternary form")
    base = F.field
    if base.char == 0:
        raise PreconditionError("singular-point scan needs a finite field")
    if search_extension == 1:
        field = base
        G = F
    elif search_extension == 2:
        if not isinstance(base, PrimeField):
            raise PreconditionError("extension scan starts from GF(p)")
        field = GF(base.char, 2)
        G = F.lift_to(field)
    else:
        raise PreconditionError("search extension must be 1 or 2")
    partials = [G.derivative(i) for i in range(3)]
    out = []
    for q in projective_points(field, 3):
        pt = list(q)
        if not field.is_zero(G.evaluate(pt)):
            continue
        if all(field.is_zero(d.evaluate(pt)) for d in partials):
            out.append(tuple(q))
    return out


def classify_singularity(F, point):
    """Grade a point of a plane curve: "smooth", "node", or "worse".

    Dehomogenizes at the point, expands to second order, and applies the
    binary discriminant test: an ordinary node is a vanishing gradient
    with a nondegenerate quadratic term.  The discriminant criterion
    sees tangent cones that only split over F_{p^2} just as well, since
    nondegeneracy is insensitive to the splitting field.
    """
    field = F.field
    if F.nvars != 3:
        raise PreconditionError("singularity grading wants a ternary form")
    if field.char == 2:
        raise PreconditionError("discriminant test needs odd characteristic")
    pt = list(point)
    if len(pt) != 3:
        raise PreconditionError("point must have 3 coordinates")
    if not field.is_zero(F.evaluate(pt)):
        raise PreconditionError("point is not on the curve")
    if any(not field.is_zero(F.derivative(i).evaluate(pt)) for i in range(3)):
        return "smooth"
    chart = next(i for i in range(3) if not field.is_zero(pt[i]))
    others = [i for i in range(3) if i != chart]
    ia, ib = others
    # second-order jet of F(pt + u e_a + v e_b) via binomial expansion
    jet = {(2, 0): field.zero, (1, 1): field.zero, (0, 2): field.zero}
    for c, e in F.terms():
        ea, eb = e[ia], e[ib]
        for du, dv in jet:
            if ea < du or eb < dv:
                continue
            scale = field.from_int(_binomial(ea, du) * _binomial(eb, dv))
            val = field.mul(c, scale)
            val = field.mul(val, scalar_pow(field, pt[ia], ea - du))
            val = field.mul(val, scalar_pow(field, pt[ib], eb - dv))
            val = field.mul(val, scalar_pow(field, pt[chart], e[chart]))
            jet[(du, dv)] = field.add(jet[(du, dv)], val)
    alpha, beta, gamma = jet[(2, 0)], jet[(1, 1)], jet[(0, 2)]
    if all(field.is_zero(v) for v in (alpha, beta, gamma)):
        return "worse"
    disc = field.sub(field.mul(beta, beta),
                     field.mul(field.from_int(4), field.mul(alpha, gamma)))
    return "node" if not field.is_zero(disc) else "worse"


def drop_report(matrix_ref, threshold, line_degrees, curve, singular_points,
                classification, point_field=None):
    """Assemble the JSON-ready report for one drop-locus investigation.

    point_field covers the case of singular points found in a quadratic
    extension of the curve's own field; it defaults to the curve field.
    """
    field = point_field or (curve.field if curve is not None else None)
    return {
        "matrix": matrix_ref,
        "threshold": threshold,
        "line_degrees": list(line_degrees),
        "curve": curve.to_text() if curve is not None else None,
        "singular_points": [[field.format_scalar(c) for c in pt]
                            for pt in singular_points],
        "classification": classification,
    }
