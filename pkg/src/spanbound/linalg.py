"""Exact linear algebra over GF(p), the rationals and rational-function fields.

Matrices are plain row-major sequences of rows; entries are values of the
coefficient field passed alongside (see :mod:`spanbound.fields`).  Every routine
is deterministic: pivots are chosen leftmost column first, lowest row first.
"""
from __future__ import annotations

from .errors import DuplicateAlpha, ShapeMismatch
from .fields import (
    FunctionField,
    PrimeField,
    lcm_poly,
    p_divmod,
    p_gcd,
    p_mul,
    p_sub,
)

Matrix = list  # list of rows, each a list/tuple of field values


def _ncols(m, ncols=None):
    if ncols is not None:
        return ncols
    if not m:
        return 0
    return len(m[0])


def _check_rect(m):
    if m:
        w = len(m[0])
        if any(len(r) != w for r in m):
            raise ShapeMismatch("ragged matrix")


def _rref_prime(rows, p, ncols):
    nrows = len(rows)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        sel = None
        for i in range(r, nrows):
            if rows[i][c]:
                sel = i
                break
        if sel is None:
            continue
        if sel != r:
            rows[r], rows[sel] = rows[sel], rows[r]
        prow = rows[r]
        lead = prow[c]
        if lead != 1:
            inv = pow(lead, p - 2, p)
            prow = [v * inv % p for v in prow]
            rows[r] = prow
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    row = rows[i]
                    rows[i] = [(a - f * b) % p for a, b in zip(row, prow)]
        pivots.append(c)
        r += 1
    return rows, r, pivots


def _rref_generic(rows, F, ncols):
    nrows = len(rows)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        sel = None
        for i in range(r, nrows):
            if not F.is_zero(rows[i][c]):
                sel = i
                break
        if sel is None:
            continue
        if sel != r:
            rows[r], rows[sel] = rows[sel], rows[r]
        inv = F.inv(rows[r][c])
        prow = [F.mul(v, inv) for v in rows[r]]
        rows[r] = prow
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if not F.is_zero(f):
                    rows[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
    return rows, r, pivots


def _rref_fraction_free(rows, F: FunctionField, ncols):
    """Gauss-Jordan over F(s) carried out on polynomial rows.

    Each row is scaled to polynomial entries, elimination uses cross
    multiplication followed by removal of the row content, and pivot rows are
    divided by their pivot only in the final normalization pass.
    """
    B = F.base
    prows = []
    for row in rows:
        den = (B.one,)
        for num_, den_ in row:
            if num_:
                den = lcm_poly(B, den, den_)
        prows.append([p_mul(B, num_, p_divmod(B, den, den_)[0]) if num_ else () for num_, den_ in row])
    nrows = len(prows)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        sel = None
        best = None
        for i in range(r, nrows):
            e = prows[i][c]
            if e and (best is None or len(e) < best):
                sel, best = i, len(e)
                if best == 1:
                    break
        if sel is None:
            continue
        # smallest-degree pivot within the column keeps entries small; row
        # choice does not affect the final reduced form
        if sel != r:
            prows[r], prows[sel] = prows[sel], prows[r]
        prow = prows[r]
        a = prow[c]
        for i in range(nrows):
            if i == r:
                continue
            b = prows[i][c]
            if not b:
                continue
            g = p_gcd(B, a, b)
            a1 = p_divmod(B, a, g)[0]
            b1 = p_divmod(B, b, g)[0]
            new = [p_sub(B, p_mul(B, a1, x), p_mul(B, b1, y)) for x, y in zip(prows[i], prow)]
            content = ()
            for e in new:
                if e:
                    content = e if not content else p_gcd(B, content, e)
                    if len(content) == 1:
                        break
            if content and len(content) > 1:
                new = [p_divmod(B, e, content)[0] if e else () for e in new]
            prows[i] = new
        pivots.append(c)
        r += 1
    out = []
    for i, row in enumerate(prows):
        if i < r:
            lead = row[pivots[i]]
            out.append([F.make(e, lead) if e else F.zero for e in row])
        else:
            out.append([F.zero] * ncols)
    return out, r, pivots


def rref(m, field, ncols=None):
    """Reduced row echelon form.

    Returns ``(matrix, rank, pivot_columns)``; the returned matrix has the same
    shape as ``m`` with zero rows at the bottom.
    """
    _check_rect(m)
    ncols = _ncols(m, ncols)
    rows = [list(r) for r in m]
    if isinstance(field, PrimeField):
        rows, rank, piv = _rref_prime(rows, field.p, ncols)
    elif isinstance(field, FunctionField):
        rows, rank, piv = _rref_fraction_free(rows, field, ncols)
    else:
        rows, rank, piv = _rref_generic(rows, field, ncols)
    return [tuple(r) for r in rows], rank, piv


def echelon_basis(vectors, field, ncols):
    """Nonzero rows of the rref of ``vectors`` together with the pivot columns."""
    rows, rank, piv = rref(vectors, field, ncols)
    return rows[:rank], piv


def rank(m, field, ncols=None) -> int:
    return rref(m, field, ncols)[1]


def transpose(m, ncols=None):
    ncols = _ncols(m, ncols)
    return [tuple(r[j] for r in m) for j in range(ncols)]


def mat_mul(a, b, field):
    if a and b and len(a[0]) != len(b):
        raise ShapeMismatch(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x{len(b[0])}")
    bt = transpose(b)
    out = []
    for row in a:
        out_row = []
        for col in bt:
            acc = field.zero
            for x, y in zip(row, col):
                acc = field.add(acc, field.mul(x, y))
            out_row.append(acc)
        out.append(tuple(out_row))
    return out


def kernel(m, field, ncols=None):
    """Basis of the right null space ``{v : m v = 0}``; each returned row is one
    kernel vector."""
    ncols = _ncols(m, ncols)
    rows, rnk, piv = rref(m, field, ncols)
    pivset = set(piv)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [field.zero] * ncols
        v[f] = field.one
        for i, pc in enumerate(piv):
            v[pc] = field.neg(rows[i][f])
        basis.append(tuple(v))
    return basis


def solve(m, rhs, field):
    """One solution ``X`` of ``m X = rhs`` (both matrices), or ``None``."""
    if len(m) != len(rhs):
        raise ShapeMismatch(f"{len(m)} equations but {len(rhs)} right-hand rows")
    _check_rect(m)
    _check_rect(rhs)
    if not m:
        return []
    nc = len(m[0])
    k = len(rhs[0]) if rhs else 0
    aug = [list(a) + list(b) for a, b in zip(m, rhs)]
    rows, rnk, piv = rref(aug, field, nc + k)
    if any(p >= nc for p in piv):
        return None
    x = [[field.zero] * k for _ in range(nc)]
    for i, pc in enumerate(piv):
        x[pc] = list(rows[i][nc:])
    return [tuple(r) for r in x]


def solve_vector(m, b, field):
    sol = solve(m, [(v,) for v in b], field)
    return None if sol is None else tuple(r[0] for r in sol)


def subspace_sum(basis_u, basis_v, field, ncols=None):
    ncols = _ncols(list(basis_u) or list(basis_v), ncols)
    if basis_u and basis_v and len(basis_u[0]) != len(basis_v[0]):
        raise ShapeMismatch("subspaces live in different ambient spaces")
    return echelon_basis(list(basis_u) + list(basis_v), field, ncols)[0]


def subspace_intersect(basis_u, basis_v, field, ncols=None):
    """Intersection by the kernel-of-stacked-bases method."""
    ncols = _ncols(list(basis_u) or list(basis_v), ncols)
    if basis_u and basis_v and len(basis_u[0]) != len(basis_v[0]):
        raise ShapeMismatch("subspaces live in different ambient spaces")
    u, _ = echelon_basis(basis_u, field, ncols)
    v, _ = echelon_basis(basis_v, field, ncols)
    if not u or not v:
        return []
    stacked = u + v
    ker = kernel(transpose(stacked, ncols), field, len(stacked))
    vecs = []
    for coeffs in ker:
        acc = [field.zero] * ncols
        for c, row in zip(coeffs[: len(u)], u):
            if not field.is_zero(c):
                acc = [field.add(a, field.mul(c, b)) for a, b in zip(acc, row)]
        vecs.append(acc)
    inter, _ = echelon_basis(vecs, field, ncols)
    total = rank(stacked, field, ncols)
    if total + len(inter) != len(u) + len(v):
        raise AssertionError("dimension formula violated in subspace_intersect")
    return inter


def moment_family_independence(n: int, alphas, field) -> bool:
    """Whether the moment vectors (1, a, ..., a^(n-1)) for the given distinct
    scalars are linearly independent (Vandermonde rank check)."""
    alphas = list(alphas)
    if len(alphas) != n:
        raise DuplicateAlpha(f"expected {n} scalars, got {len(alphas)}")
    if len(set(alphas)) != len(alphas):
        raise DuplicateAlpha("scalars must be distinct")
    rows = []
    for a in alphas:
        row, acc = [], field.one
        for _ in range(n):
            row.append(acc)
            acc = field.mul(acc, a)
        rows.append(row)
    return rank(rows, field, n) == n
