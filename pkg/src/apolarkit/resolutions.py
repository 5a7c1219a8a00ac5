"""Graded Betti numbers by Koszul homology, linear syzygy bases, and the
matrix of linear second-order syzygies of a quadric system.

Betti numbers are computed as b_{i,j} = dim H_i of the Koszul strand

    Lambda^{i+1} V* (x) M_{j-i-1} -> Lambda^i V* (x) M_{j-i}
                                  -> Lambda^{i-1} V* (x) M_{j-i+1}

with the alternating-sign contraction differentials, where M = S/I is
held degree by degree.  Every graded piece these tables touch is a
few hundred dimensions at most, so plain exact elimination suffices; the
two-prime certificate from linalg is available through rank_method for
callers that want the faster probabilistic route first.

A cell (i, j) only consumes the module in degrees j-i-1 .. j-i+1, so a
module built up to degree 3 already settles the full three-row tables of
point ideals.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache

from .apolarity import apolar_ideal_component, subspace_forms
from .errors import PreconditionError
from .fields import QQ
from .forms import HomogeneousForm, monomial_count, monomial_exponents, monomial_index
from .linalg import ExactMatrix, Subspace, primitive_integer_matrix


def thread_budget():
    """Worker cap from APOLARKIT_THREADS; defaults to 1 (sequential)."""
    raw = os.environ.get("APOLARKIT_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


# Betti table of the apolar ideal of a cubic with the generic resolution
# shape; m2_matrix guards its input against this.
GENERIC_CUBIC_APOLAR_BETTI = {
    (0, 0): 1,
    (1, 2): 15, (2, 3): 35, (3, 4): 21,
    (3, 5): 21, (4, 6): 35, (5, 7): 15,
    (6, 9): 1,
}


class BettiTable:
    """Map (homological index i, internal degree j) -> Betti number."""

    def __init__(self, entries, computed_cells=None):
        self.entries = {k: v for k, v in entries.items() if v}
        if any(v < 0 for v in self.entries.values()):
            raise ValueError("negative Betti number")
        self.computed_cells = frozenset(computed_cells) if computed_cells \
            else frozenset(self.entries)

    def entry(self, i, j):
        return self.entries.get((i, j), 0)

    def nonzero(self):
        return dict(sorted(self.entries.items()))

    def __eq__(self, other):
        if not isinstance(other, BettiTable):
            return NotImplemented
        return self.nonzero() == other.nonzero()

    def __hash__(self):
        return hash(tuple(sorted(self.entries.items())))

    def to_json(self):
        return {"entries": [[i, j, b] for (i, j), b in sorted(self.entries.items())]}

    @classmethod
    def from_json(cls, data):
        return cls({(i, j): b for i, j, b in data["entries"]})

    def render_text(self):
        """Rows are strands r = j - i, columns the homological index i."""
        if not self.entries:
            return "(zero table)"
        max_i = max(i for i, _ in self.entries)
        max_r = max(j - i for i, j in self.entries)
        lines = ["     " + "".join("%6d" % i for i in range(max_i + 1))]
        for r in range(max_r + 1):
            cells = []
            for i in range(max_i + 1):
                b = self.entry(i, i + r)
                cells.append("%6s" % (b if b else "."))
            lines.append("%4d:" % r + "".join(cells))
        return "\n".join(lines)

    def __repr__(self):
        return "<BettiTable %s>" % (self.nonzero(),)


class GradedModule:
    """S/I held as exact quotient pieces over a degree range.

    Built from the graded pieces of an ideal I; each quotient piece
    remembers the rref of I's piece, its pivot columns, and the free
    (standard monomial) columns that coordinatize the quotient.
    """

    def __init__(self, nvars, field, ideal_pieces, check=True):
        self.nvars = nvars
        self.field = field
        degrees = sorted(ideal_pieces)
        if degrees != list(range(len(degrees))):
            raise PreconditionError("ideal pieces must cover 0..max contiguously")
        self.max_degree = degrees[-1] if degrees else -1
        self._pieces = {}
        for j in degrees:
            space = ideal_pieces[j]
            expected = monomial_count(nvars, j)
            if space.ambient_dim != expected:
                raise PreconditionError(
                    "piece %d has ambient %d, expected %d"
                    % (j, space.ambient_dim, expected))
            self._pieces[j] = _QuotientPiece(nvars, field, j, space)
        if check:
            self._check_multiplication(ideal_pieces)
        self._mult_cache = {}

    def _check_multiplication(self, ideal_pieces):
        # each variable must carry I_j into I_{j+1}
        for j in range(self.max_degree):
            src = ideal_pieces[j]
            dst = ideal_pieces[j + 1]
            if src.is_full and not dst.is_full:
                raise PreconditionError(
                    "piece %d is everything but piece %d is not" % (j, j + 1))
            if src.is_full or dst.is_full or src.dim == 0:
                continue
            dst_piece = self._pieces[j + 1]
            for row in src.basis_matrix().rows:
                for t in range(self.nvars):
                    shifted = _shift_vector(self.nvars, j, row, t, self.field)
                    if any(not self.field.is_zero(c)
                           for c in dst_piece.reduce(shifted)):
                        raise PreconditionError(
                            "ideal pieces not multiplication-compatible at "
                            "degree %d, variable %d" % (j, t))

    def piece_dim(self, j):
        if j < 0:
            return 0
        if j > self.max_degree:
            raise PreconditionError(
                "graded piece %d beyond built range %d" % (j, self.max_degree))
        return self._pieces[j].dim

    def reduce(self, j, vector):
        return self._pieces[j].reduce(vector)

    def multiplication_matrix(self, j, t):
        """Matrix of multiplication by variable t from M_j to M_{j+1}."""
        key = (j, t)
        if key not in self._mult_cache:
            src = self._pieces[j]
            dst = self._pieces[j + 1]
            cols = []
            for m in src.free:
                e = list(monomial_exponents(self.nvars, j)[m])
                e[t] += 1
                target = monomial_index(self.nvars, j + 1)[tuple(e)]
                vec = [self.field.zero] * monomial_count(self.nvars, j + 1)
                vec[target] = self.field.one
                cols.append(dst.reduce(vec))
            self._mult_cache[key] = ExactMatrix(
                zip(*cols) if cols else [[] for _ in range(dst.dim)],
                self.field, len(cols))
        return self._mult_cache[key]


class _QuotientPiece:
    def __init__(self, nvars, field, degree, ideal_space):
        self.field = field
        ambient = monomial_count(nvars, degree)
        if ideal_space.is_full:
            self.rref_rows = None
            self.pivots = tuple(range(ambient))
            self.free = ()
        else:
            reduced = ideal_space.reduced_basis()
            pivots = []
            for row in reduced.rows:
                for c, v in enumerate(row):
                    if not field.is_zero(v):
                        pivots.append(c)
                        break
            self.rref_rows = reduced.rows
            self.pivots = tuple(pivots)
            pivot_set = set(pivots)
            self.free = tuple(c for c in range(ambient) if c not in pivot_set)
        self.dim = len(self.free)

    def reduce(self, vector):
        """Coordinates of the vector's image in the quotient basis."""
        F = self.field
        if self.rref_rows is None:
            return ()
        work = list(vector)
        for row, pc in zip(self.rref_rows, self.pivots):
            c = work[pc]
            if not F.is_zero(c):
                for k, rv in enumerate(row):
                    if not F.is_zero(rv):
                        work[k] = F.sub(work[k], F.mul(c, rv))
        return tuple(work[c] for c in self.free)


def _shift_vector(nvars, degree, vector, t, field):
    """Multiply a degree-`degree` coefficient vector by variable t."""
    src = monomial_exponents(nvars, degree)
    idx = monomial_index(nvars, degree + 1)
    out = [field.zero] * monomial_count(nvars, degree + 1)
    for c, e in zip(vector, src):
        if field.is_zero(c):
            continue
        e2 = list(e)
        e2[t] += 1
        out[idx[tuple(e2)]] = field.add(out[idx[tuple(e2)]], c)
    return out


# ---- module factories -------------------------------------------------


def apolar_quotient_module(f, max_degree):
    """S / I_f as a graded module, pieces 0..max_degree."""
    pieces = {j: apolar_ideal_component(f, j) for j in range(max_degree + 1)}
    return GradedModule(f.nvars, f.field, pieces)


def points_quotient_module(Z, max_degree):
    """S / I_Z as a graded module, pieces 0..max_degree."""
    from .apolarity import ideal_of_points_component

    pieces = {j: ideal_of_points_component(Z, j) for j in range(max_degree + 1)}
    return GradedModule(Z.nvars, Z.field, pieces)


def quadric_ideal_module(Q, max_degree):
    """S / (ideal generated by the quadrics Q), pieces 0..max_degree."""
    forms = subspace_forms(Q)
    if not forms:
        raise PreconditionError("empty quadric system")
    nvars = forms[0].nvars
    field = forms[0].field
    pieces = {}
    for j in range(max_degree + 1):
        if j < 2:
            pieces[j] = Subspace(ExactMatrix([], field,
                                             monomial_count(nvars, j)),
                                 degree=j, alphabet="y", already_independent=True)
            continue
        rows = []
        for g in forms:
            for e in monomial_exponents(nvars, j - 2):
                m = HomogeneousForm.monomial(nvars, e, field, g.alphabet)
                rows.append(g.multiply(m).coeffs)
        span = ExactMatrix(rows, field, monomial_count(nvars, j)).row_space_basis()
        pieces[j] = Subspace(span, degree=j, alphabet="y", already_independent=True)
    return GradedModule(nvars, field, pieces, check=False)


# ---- Koszul homology --------------------------------------------------


def koszul_differential(module, i, j):
    """Matrix of Lambda^i (x) M_{j-i} -> Lambda^{i-1} (x) M_{j-i+1}.

    Columns run over (subset, module coordinate) pairs, subsets in lex
    order; rows likewise for the codomain.
    """
    if i < 1:
        raise PreconditionError("differential index must be at least 1")
    n = module.nvars
    F = module.field
    src_deg = j - i
    dim_src = module.piece_dim(src_deg) if src_deg >= 0 else 0
    dim_dst = module.piece_dim(src_deg + 1) if src_deg + 1 >= 0 else 0
    subsets_src = list(itertools.combinations(range(n), i))
    subsets_dst = list(itertools.combinations(range(n), i - 1))
    dst_pos = {s: k for k, s in enumerate(subsets_dst)}
    nrows = len(subsets_dst) * dim_dst
    ncols = len(subsets_src) * dim_src
    if dim_src == 0 or dim_dst == 0:
        return ExactMatrix.zeros(nrows, ncols, F)
    cols = []
    mult = {t: module.multiplication_matrix(src_deg, t) for t in range(n)}
    for S in subsets_src:
        for m in range(dim_src):
            col = [F.zero] * nrows
            for pos, t in enumerate(S):
                rest = S[:pos] + S[pos + 1:]
                block = dst_pos[rest] * dim_dst
                image = mult[t].column(m)
                if pos % 2 == 0:
                    for r, v in enumerate(image):
                        col[block + r] = F.add(col[block + r], v)
                else:
                    for r, v in enumerate(image):
                        col[block + r] = F.sub(col[block + r], v)
            cols.append(col)
    return ExactMatrix(zip(*cols) if cols else [[] for _ in range(nrows)],
                       F, ncols)


def graded_betti(module, max_i, max_j, max_row=None, rank_method="exact"):
    """Betti table of the module over the window i <= max_i, j <= max_j.

    max_row, when given, restricts to strand rows j - i <= max_row; the
    reference tables all live in rows <= 3, and skipping higher rows
    avoids building graded pieces nobody asked about.
    """
    cells = []
    for i in range(max_i + 1):
        for j in range(i, max_j + 1):
            if max_row is not None and j - i > max_row:
                continue
            required = j - i if i == 0 else j - i + 1
            if required > module.max_degree:
                raise PreconditionError(
                    "cell (%d, %d) needs module degree %d; built to %d"
                    % (i, j, required, module.max_degree))
            cells.append((i, j))

    needed = set()
    for i, j in cells:
        needed.add((i, j))
        needed.add((i + 1, j))

    def differential_rank(key):
        i, j = key
        if i == 0 or i > module.nvars:
            return 0
        src_deg = j - i
        if src_deg < 0 or src_deg > module.max_degree:
            return 0
        mat = koszul_differential(module, i, j)
        return mat.rank(method=rank_method)

    ranks = {}
    keys = sorted(needed)
    budget = thread_budget()
    if budget > 1 and len(keys) > 1:
        with ThreadPoolExecutor(max_workers=budget) as pool:
            for key, result in zip(keys, pool.map(differential_rank, keys)):
                ranks[key] = result
    else:
        for key in keys:
            ranks[key] = differential_rank(key)

    entries = {}
    n = module.nvars
    for i, j in cells:
        src_deg = j - i
        lam = len(list(itertools.combinations(range(n), i)))
        dim_cell = lam * module.piece_dim(src_deg) if 0 <= src_deg else 0
        entries[(i, j)] = dim_cell - ranks[(i, j)] - ranks[(i + 1, j)]
    for key, b in entries.items():
        if b < 0:
            raise AssertionError("negative homology at %s; differentials broken" % (key,))
    return BettiTable(entries, computed_cells=cells)


# ---- linear syzygies and M2 -------------------------------------------


def _syzygy_map_order1(qforms, coeff_degree):
    """Matrix of (S^c V*)^q -> S^{2+c} V*, (l_i) -> sum l_i Q_i."""
    nvars = qforms[0].nvars
    field = qforms[0].field
    cdim = monomial_count(nvars, coeff_degree)
    out_deg = 2 + coeff_degree
    out_dim = monomial_count(nvars, out_deg)
    cols = []
    for g in qforms:
        for e in monomial_exponents(nvars, coeff_degree):
            m = HomogeneousForm.monomial(nvars, e, field, g.alphabet)
            cols.append(g.multiply(m).coeffs)
    return ExactMatrix(zip(*cols), field, len(qforms) * cdim), cdim, out_dim


def betti_cell(module, i, j):
    """One Betti number from the two differentials around cell (i, j)."""
    out = koszul_differential(module, i, j)
    inc = koszul_differential(module, i + 1, j) if i + 1 <= module.nvars else None
    b = out.ncols - out.rank() - (inc.rank() if inc is not None else 0)
    if b < 0:
        raise AssertionError("negative homology at (%d, %d)" % (i, j))
    return b


def _betti_guard(Q, order):
    """Check the strand next to the linear one is empty, else refuse.

    Order 1 needs no cubic generators (b_{1,3} = 0); order 2 additionally
    needs no degree-4 first syzygies (b_{2,4} = 0).  Otherwise the naive
    kernels would not be minimal Betti numbers and the caller would get a
    silently wrong count.
    """
    module = quadric_ideal_module(Q, 3)
    b13 = betti_cell(module, 1, 3)
    if b13 != 0:
        raise PreconditionError(
            "quadric system has %d cubic generators; linear-strand kernel "
            "would not be minimal" % b13)
    if order == 2:
        b24 = betti_cell(module, 2, 4)
        if b24 != 0:
            raise PreconditionError(
                "quadric system has %d non-linear first syzygies; second-order "
                "kernel would not be minimal" % b24)


@lru_cache(maxsize=32)
def _linear_syzygies_cached(basis_matrix, order, coefficient_degree, guard):
    qforms = [HomogeneousForm(_nvars_for(basis_matrix.ncols, 2), 2, row,
                              basis_matrix.field, "y")
              for row in basis_matrix.rows]
    if not qforms:
        raise PreconditionError("empty quadric system")
    if guard:
        span = Subspace(basis_matrix, degree=2, alphabet="y")
        if span.dim != len(qforms):
            raise PreconditionError("quadric basis is linearly dependent")
        _betti_guard(span, order)

    if order == 1:
        phi1, _, _ = _syzygy_map_order1(qforms, coefficient_degree)
        syz1 = phi1.kernel_basis()
        if basis_matrix.field == QQ:
            syz1 = primitive_integer_matrix(syz1)
        return Subspace(syz1, degree=coefficient_degree,
                        multiplicity=len(qforms), alphabet="y",
                        already_independent=True)

    # order 2: kernel of (V*)^{s1} -> (S^2 V*)^q, (m_j) -> sum m_j s_j,
    # written over the cached order-1 basis
    syz1 = _linear_syzygies_cached(basis_matrix, 1, coefficient_degree,
                                   False).basis_matrix()
    nvars = qforms[0].nvars
    field = basis_matrix.field
    q = len(qforms)
    s1 = syz1.nrows
    cdim1 = monomial_count(nvars, coefficient_degree)
    cols = []
    for jrow in syz1.rows:
        blocks = [HomogeneousForm(nvars, coefficient_degree,
                                  jrow[i * cdim1:(i + 1) * cdim1], field, "y")
                  for i in range(q)]
        for e in monomial_exponents(nvars, coefficient_degree):
            m = HomogeneousForm.monomial(nvars, e, field, "y")
            col = []
            for b in blocks:
                col.extend(m.multiply(b).coeffs)
            cols.append(col)
    phi2 = ExactMatrix(zip(*cols), field, s1 * cdim1)
    syz2 = phi2.kernel_basis()
    if field == QQ:
        syz2 = primitive_integer_matrix(syz2)
    return Subspace(syz2, degree=coefficient_degree, multiplicity=s1,
                    alphabet="y", already_independent=True)


def _nvars_for(ambient, degree):
    for cand in range(1, 8):
        if monomial_count(cand, degree) == ambient:
            return cand
    raise PreconditionError("ambient dimension fits no variable count")


def linear_syzygies(Q, order, coefficient_degree=1, guard=True):
    """Basis of the (first or second) syzygies with the given coefficient
    degree among a basis of the quadric system Q.

    With the default coefficient degree 1 these are the linear-strand
    syzygies and their count is the Betti number b_{order+1, order+2} of
    the ideal generated by Q; the guard enforces the Betti-shape condition
    that makes that identification valid.  An explicit coefficient_degree
    (for example 2 to see the Koszul syzygy of two coprime squares)
    bypasses the strand bookkeeping, and the guard with it.
    """
    if order not in (1, 2):
        raise PreconditionError("order must be 1 or 2")
    if coefficient_degree < 1:
        raise PreconditionError("coefficient degree must be at least 1")
    if coefficient_degree != 1:
        guard = False
    return _linear_syzygies_cached(Q.basis_matrix(), order,
                                   coefficient_degree, guard)


class LinearFormMatrix:
    """Matrix whose entries are degree-1 forms (or zero) in shared variables."""

    __slots__ = ("entries", "nrows", "ncols", "nvars", "field", "alphabet")

    def __init__(self, entries):
        entries = tuple(tuple(row) for row in entries)
        if not entries or not entries[0]:
            raise ValueError("empty LinearFormMatrix")
        first = entries[0][0]
        for row in entries:
            if len(row) != len(entries[0]):
                raise ValueError("ragged rows")
            for e in row:
                if e.degree != 1:
                    raise ValueError("entries must be degree-1 forms")
                if e.nvars != first.nvars or e.field != first.field:
                    raise ValueError("entries must share arity and field")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "nrows", len(entries))
        object.__setattr__(self, "ncols", len(entries[0]))
        object.__setattr__(self, "nvars", first.nvars)
        object.__setattr__(self, "field", first.field)
        object.__setattr__(self, "alphabet", first.alphabet)

    def __setattr__(self, *args):
        raise AttributeError("LinearFormMatrix is immutable")

    def evaluate_at(self, point):
        F = self.field
        return ExactMatrix([[e.evaluate(point) for e in row]
                            for row in self.entries], F, self.ncols)

    def substitute(self, substituents):
        return LinearFormMatrix([[e.substitute(substituents) for e in row]
                                 for row in self.entries])

    def reduce_mod_p(self, p):
        return LinearFormMatrix([[e.reduce_mod_p(p) for e in row]
                                 for row in self.entries])

    def coefficient_matrix(self, t):
        """ExactMatrix of the coefficient of variable t across all entries."""
        F = self.field
        sel = [0] * self.nvars
        sel[t] = 1
        idx = monomial_index(self.nvars, 1)[tuple(sel)]
        return ExactMatrix([[e.coeffs[idx] for e in row] for row in self.entries],
                           F, self.ncols)

    def integer_coefficient_arrays(self):
        """One numpy int64 array per variable; requires integer entries."""
        import numpy as np
        from fractions import Fraction

        out = []
        for t in range(self.nvars):
            mat = self.coefficient_matrix(t)
            rows = []
            for r in mat.rows:
                ints = []
                for v in r:
                    fr = Fraction(v)
                    if fr.denominator != 1:
                        raise PreconditionError(
                            "entry coefficient %s is not an integer" % v)
                    ints.append(fr.numerator)
                rows.append(ints)
            out.append(np.array(rows, dtype=np.int64))
        return out

    def to_json(self):
        return {
            "rows": self.nrows,
            "cols": self.ncols,
            "field": self.field.describe(),
            "entries": [[e.to_text() for e in row] for row in self.entries],
        }

    def __repr__(self):
        return "<LinearFormMatrix %dx%d in %d vars over %s>" % (
            self.nrows, self.ncols, self.nvars, self.field.describe())


def restrict_linear_matrix(M, substituents):
    """Entrywise linear substitution; evaluation commutes with it."""
    return M.substitute(substituents)


def rank_at_point(M, point):
    """Rank of the scalar matrix obtained by evaluating every entry."""
    return M.evaluate_at(point).rank()


@lru_cache(maxsize=8)
def m2_matrix(f):
    """The 35 x 21 matrix of linear second-order syzygies of I_f(2).

    Requires the apolar ideal of f to have the generic cubic Betti table;
    anything else is refused rather than silently producing a matrix of
    the wrong shape.  Columns are the canonical second-syzygy basis
    written over the canonical first-syzygy basis; the matrix itself is
    basis-dependent (the documented contract is that only its rank and
    rank-drop loci are invariants).
    """
    from .apolarity import q_f

    if f.degree != 3:
        raise PreconditionError("m2_matrix expects a cubic")
    Q = q_f(f)
    if Q.dim != 15:
        raise PreconditionError("dim I_f(2) = %d, expected 15" % Q.dim)
    module = apolar_quotient_module(f, 9)
    table = graded_betti(module, 6, 9, max_row=3)
    if table.nonzero() != GENERIC_CUBIC_APOLAR_BETTI:
        raise PreconditionError(
            "apolar ideal has non-generic Betti table %s" % table.nonzero())
    qbasis = Q.reduced_basis()
    if f.field == QQ:
        qbasis = primitive_integer_matrix(qbasis)
    Qint = Subspace(qbasis, degree=2, alphabet="y", already_independent=True)
    syz1 = linear_syzygies(Qint, 1, guard=False)
    syz2 = linear_syzygies(Qint, 2, guard=False)
    if syz1.dim != 35 or syz2.dim != 21:
        raise PreconditionError(
            "syzygy dimensions (%d, %d) off the generic (35, 21)"
            % (syz1.dim, syz2.dim))
    nvars = f.nvars
    field = f.field
    entries = []
    for jrow in range(35):
        row = []
        for c in range(21):
            vec = syz2.basis.rows[c][jrow * nvars:(jrow + 1) * nvars]
            row.append(HomogeneousForm.linear(vec, field, "y"))
        entries.append(row)
    return LinearFormMatrix(entries)
