"""Exact linear solves over Z and Q.

``solve_integer`` brings the generator matrix to column Hermite (lower
echelon) form with a tracked unimodular transform, then back-substitutes.
``solve_rational`` is plain fraction Gaussian elimination.
"""
from fractions import Fraction


def ext_gcd(a, b):
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def gcd_witness(values):
    """gcd of a list together with Bezout coefficients."""
    g, coeffs = 0, [0] * len(values)
    for idx, v in enumerate(values):
        g2, x, y = ext_gcd(g, v)
        coeffs = [c * x for c in coeffs]
        coeffs[idx] = y
        g = g2
    return g, coeffs


def _colop(cols, ucols, p, q, a, b, c, d):
    # (col_p, col_q) <- (a*col_p + b*col_q, c*col_p + d*col_q)
    cp, cq = cols[p], cols[q]
    cols[p] = [a * x + b * y for x, y in zip(cp, cq)]
    cols[q] = [c * x + d * y for x, y in zip(cp, cq)]
    up, uq = ucols[p], ucols[q]
    ucols[p] = [a * x + b * y for x, y in zip(up, uq)]
    ucols[q] = [c * x + d * y for x, y in zip(up, uq)]


def hermite_columns(columns, nrows):
    """Column-echelon form H = A U.

    Returns (H columns, U columns, pivots) where pivots is a list of
    (row, column) pairs in increasing order.
    """
    cols = [list(c) for c in columns]
    k = len(cols)
    ucols = [[1 if i == j else 0 for i in range(k)] for j in range(k)]
    pivots = []
    p = 0
    for r in range(nrows):
        if p >= k:
            break
        for q in range(p + 1, k):
            b = cols[q][r]
            if b == 0:
                continue
            a = cols[p][r]
            g, x, y = ext_gcd(a, b)
            # [a b] * [[x, -b/g], [y, a/g]] = [g, 0]
            _colop(cols, ucols, p, q, x, y, -b // g, a // g)
        if cols[p][r] != 0:
            if cols[p][r] < 0:
                cols[p] = [-v for v in cols[p]]
                ucols[p] = [-v for v in ucols[p]]
            piv = cols[p][r]
            # keep earlier pivot columns small
            for q in range(p):
                f = cols[q][r] // piv
                if f:
                    cols[q] = [x - f * y for x, y in zip(cols[q], cols[p])]
                    ucols[q] = [x - f * y for x, y in zip(ucols[q], ucols[p])]
            pivots.append((r, p))
            p += 1
    return cols, ucols, pivots


def solve_integer(columns, target):
    """Find integers y with sum_j y_j * columns[j] == target, or None.

    The answer is exact: None means no integer solution exists.
    """
    m = len(target)
    k = len(columns)
    if k == 0:
        return [] if all(v == 0 for v in target) else None
    cols, ucols, pivots = hermite_columns(columns, m)
    pivot_at = dict(pivots)
    res = list(target)
    z = [0] * k
    for r in range(m):
        if r in pivot_at:
            c = pivot_at[r]
            piv = cols[c][r]
            q, rem = divmod(res[r], piv)
            if rem:
                return None
            z[c] = q
            if q:
                res = [x - q * y for x, y in zip(res, cols[c])]
        elif res[r] != 0:
            return None
    y = [0] * k
    for c in range(k):
        if z[c]:
            for i, v in enumerate(ucols[c]):
                y[i] += z[c] * v
    return y


def solve_rational(columns, target):
    """Find rationals y with sum_j y_j * columns[j] == target, or None."""
    m = len(target)
    k = len(columns)
    # rows of the augmented system [A | b]
    rows = [[Fraction(columns[j][i]) for j in range(k)] + [Fraction(target[i])] for i in range(m)]
    pivcols = []
    r = 0
    for c in range(k):
        pr = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivcols.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if rows[i][k] != 0:
            return None
    y = [Fraction(0)] * k
    for i, c in enumerate(pivcols):
        y[c] = rows[i][k]
    return y
