"""Finite-field numerics behind the sampling-heavy operations.

Three independent tool groups live here:

* dense elimination mod a word-sized prime on numpy int64 arrays (rank,
  rref, kernel), used for certificates and for interpolation solves;
* arithmetic tables for F_{p^2} with small p, elements packed as the int
  a + p*b, with a batch matrix-rank routine for point scans;
* univariate polynomials over F_p as coefficient lists (low degree
  first): evaluation, Lagrange interpolation, gcd, squarefree part.

Primes must stay below 2^15 so p^2 products and row updates fit
comfortably in int64 without intermediate overflow.
"""

from __future__ import annotations

import numpy as np

from .errors import PreconditionError

_MAX_PRIME = 1 << 16


def _as_modp_array(matrix, p):
    a = np.array(matrix, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1) if a.size else a.reshape(0, 0)
    return np.mod(a, p)


def rank_mod_p(matrix, p):
    """Rank over F_p of an integer matrix (rows of ints or numpy array)."""
    if p >= _MAX_PRIME:
        raise PreconditionError("prime %d too large for the int64 engine" % p)
    a = _as_modp_array(matrix, p)
    nrows, ncols = a.shape
    rank = 0
    for c in range(ncols):
        if rank == nrows:
            break
        col = a[rank:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, c]), p - 2, p)
        a[rank] = (a[rank] * inv) % p
        below = a[rank + 1:, c]
        mask = below != 0
        if mask.any():
            a[rank + 1:][mask] = (a[rank + 1:][mask]
                                  - below[mask, None] * a[rank][None, :]) % p
        rank += 1
    return rank


def det_mod_p(matrix, p):
    """Determinant over F_p of a square integer matrix."""
    if p >= _MAX_PRIME:
        raise PreconditionError("prime %d too large for the int64 engine" % p)
    a = _as_modp_array(matrix, p)
    n, m = a.shape
    if n != m:
        raise PreconditionError("determinant of a %dx%d matrix" % (n, m))
    det = 1
    for c in range(n):
        nz = np.nonzero(a[c:, c])[0]
        if nz.size == 0:
            return 0
        piv = c + int(nz[0])
        if piv != c:
            a[[c, piv]] = a[[piv, c]]
            det = p - det
        det = det * int(a[c, c]) % p
        inv = pow(int(a[c, c]), p - 2, p)
        below = a[c + 1:, c]
        mask = below != 0
        if mask.any():
            factor = (below[mask] * inv) % p
            a[c + 1:][mask] = (a[c + 1:][mask]
                               - factor[:, None] * a[c][None, :]) % p
    return det % p


def rref_mod_p(matrix, p):
    """Reduced row echelon form over F_p; returns (array, pivot columns)."""
    if p >= _MAX_PRIME:
        raise PreconditionError("prime %d too large for the int64 engine" % p)
    a = _as_modp_array(matrix, p)
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        others = np.nonzero(a[:, c])[0]
        for i in others:
            if i != r:
                a[i] = (a[i] - a[i, c] * a[r]) % p
        pivots.append(c)
        r += 1
    return a, pivots


def kernel_mod_p(matrix, p):
    """Canonical right-kernel basis over F_p, one numpy row per vector."""
    a, pivots = rref_mod_p(matrix, p)
    ncols = a.shape[1]
    pivot_set = set(pivots)
    free = [j for j in range(ncols) if j not in pivot_set]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for r, pc in enumerate(pivots):
            basis[k, pc] = (-int(a[r, f])) % p
    return basis


# ---- F_{p^2} table arithmetic -----------------------------------------


class QuadraticTables:
    """Packed-int arithmetic tables for F_{p^2}, p small and odd.

    Elements are ints a + p*b for (a, b) coordinates over F_p.  The
    multiplication table has p^2 * p^2 entries, which is tiny for the
    scan primes this package allows (p <= 11).
    """

    def __init__(self, field):
        p = field.char
        if p > 11:
            raise PreconditionError("table arithmetic guard: p=%d > 11" % p)
        self.field = field
        self.p = p
        self.q = p * p
        n = field.nonresidue
        codes = np.arange(self.q)
        a = codes % p
        b = codes // p
        # mul[x, y] via the (a + bw)(c + dw) expansion with w^2 = n
        ac = np.outer(a, a)
        bd = np.outer(b, b)
        ad = np.outer(a, b)
        bc = np.outer(b, a)
        re = (ac + n * bd) % p
        im = (ad + bc) % p
        self.mul = (re + p * im).astype(np.int64)
        self.neg = ((p - a) % p + p * ((p - b) % p)).astype(np.int64)
        inv = np.zeros(self.q, dtype=np.int64)
        for x in range(1, self.q):
            xa, xb = x % p, x // p
            inv[x] = self.field.encode(self.field.inv((xa, xb)))
        self.inv = inv

    def add(self, u, v):
        p = self.p
        return (u % p + v % p) % p + p * ((u // p + v // p) % p)

    def batch_rank(self, mat):
        """Rank of one packed-int matrix (2-d numpy array of codes)."""
        a = np.array(mat, dtype=np.int64)
        nrows, ncols = a.shape
        rank = 0
        for c in range(ncols):
            if rank == nrows:
                break
            nz = np.nonzero(a[rank:, c])[0]
            if nz.size == 0:
                continue
            piv = rank + int(nz[0])
            if piv != rank:
                a[[rank, piv]] = a[[piv, rank]]
            a[rank] = self.mul[a[rank], self.inv[a[rank, c]]]
            below = a[rank + 1:, c]
            sel = np.nonzero(below)[0]
            if sel.size:
                prod = self.mul[self.neg[below[sel]][:, None], a[rank][None, :]]
                a[rank + 1:][sel] = self.add(a[rank + 1:][sel], prod)
            rank += 1
        return rank

    def det(self, mat):
        """Determinant of one square packed-int matrix, as a packed code."""
        a = np.array(mat, dtype=np.int64)
        n, m = a.shape
        if n != m:
            raise PreconditionError("determinant of a %dx%d matrix" % (n, m))
        det = 1  # packed code of the field's one
        for c in range(n):
            nz = np.nonzero(a[c:, c])[0]
            if nz.size == 0:
                return 0
            piv = c + int(nz[0])
            if piv != c:
                a[[c, piv]] = a[[piv, c]]
                det = int(self.neg[det])
            det = int(self.mul[det, a[c, c]])
            below = a[c + 1:, c]
            sel = np.nonzero(below)[0]
            if sel.size:
                factor = self.mul[below[sel], self.inv[a[c, c]]]
                prod = self.mul[self.neg[factor][:, None], a[c][None, :]]
                a[c + 1:][sel] = self.add(a[c + 1:][sel], prod)
        return det


_TABLE_CACHE = {}


def quadratic_tables(field):
    key = field.char
    if key not in _TABLE_CACHE:
        _TABLE_CACHE[key] = QuadraticTables(field)
    return _TABLE_CACHE[key]


# ---- univariate polynomials over F_p ----------------------------------
# coefficient lists, low degree first, normalized to drop trailing zeros


def poly_trim(f, p):
    f = [c % p for c in f]
    while f and f[-1] == 0:
        f.pop()
    return f


def poly_degree(f):
    return len(f) - 1 if f else -1


def poly_eval(f, x, p):
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def poly_scale(f, s, p):
    return poly_trim([c * s for c in f], p)


def poly_monic(f, p):
    f = poly_trim(f, p)
    if not f:
        return f
    return poly_scale(f, pow(f[-1], p - 2, p), p)


def poly_divmod(f, g, p):
    f = poly_trim(f, p)
    g = poly_trim(g, p)
    if not g:
        raise ZeroDivisionError("division by zero polynomial")
    ginv = pow(g[-1], p - 2, p)
    q = [0] * max(0, len(f) - len(g) + 1)
    r = f[:]
    while len(r) >= len(g) and r:
        shift = len(r) - len(g)
        factor = r[-1] * ginv % p
        q[shift] = factor
        for i, gc in enumerate(g):
            r[shift + i] = (r[shift + i] - factor * gc) % p
        r = poly_trim(r, p)
    return poly_trim(q, p), r


def poly_gcd(f, g, p):
    """Monic gcd by the Euclidean algorithm."""
    f = poly_trim(f, p)
    g = poly_trim(g, p)
    while g:
        f, g = g, poly_divmod(f, g, p)[1]
    return poly_monic(f, p)


def poly_derivative(f, p):
    return poly_trim([(i * c) % p for i, c in enumerate(f)][1:], p)


def poly_squarefree_part(f, p):
    """Squarefree part of f over F_p.

    The usual f / gcd(f, f') step can leave p-th power factors whose
    derivative vanished, so iterate until the cofactor is coprime to its
    derivative.  Degrees here are far below p in every caller, but the
    loop keeps the helper honest.
    """
    f = poly_monic(f, p)
    if poly_degree(f) <= 0:
        return f
    result = f
    for _ in range(poly_degree(f)):
        d = poly_derivative(result, p)
        if not d:
            # result is a polynomial in x^p; callers never get here with
            # degree < p, but strip one p-th root to make progress
            root = poly_trim([result[i] for i in range(0, len(result), p)], p)
            result = poly_monic(root, p)
            continue
        g = poly_gcd(result, d, p)
        if poly_degree(g) == 0:
            return result
        result = poly_divmod(result, g, p)[0]
    return poly_monic(result, p)


def lagrange_interpolate(xs, ys, p):
    """Coefficients of the unique poly of degree < len(xs) through the data."""
    n = len(xs)
    if len(set(x % p for x in xs)) != n:
        raise PreconditionError("interpolation nodes collide mod %d" % p)
    coeffs = [0] * n
    for i in range(n):
        # numerator polynomial prod_{j != i} (X - x_j), built incrementally
        num = [1]
        denom = 1
        for j in range(n):
            if j == i:
                continue
            num = [(-xs[j] * num[0]) % p] + [
                (num[k - 1] - xs[j] * num[k]) % p for k in range(1, len(num))
            ] + [num[-1]]
            denom = denom * (xs[i] - xs[j]) % p
        s = ys[i] * pow(denom, p - 2, p) % p
        for k in range(n):
            coeffs[k] = (coeffs[k] + s * num[k]) % p
    return poly_trim(coeffs, p)
