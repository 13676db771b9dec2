"""Alternating matrices, Pfaffians, the Vaserstein matrix V(a, b) and a
determinant-one completion of length-3 rows (a, b, c^2)."""
from .errors import NotASquarePresentation, SizeMismatch, WitnessMismatch
from .rings import RingElement


def _pl(ring, x):
    return x.value if isinstance(x, RingElement) else ring.coerce(x)


class AlternatingMatrix:
    """Even-size skew matrix stored by its strict upper triangle."""

    def __init__(self, ring, size, upper):
        if size % 2:
            raise SizeMismatch("alternating matrices have even size")
        self.ring = ring
        self.size = size
        self.upper = {}
        for (i, j), x in dict(upper).items():
            if not 0 <= i < j < size:
                raise SizeMismatch(f"entry ({i},{j}) is not strictly above the diagonal")
            x = _pl(ring, x)
            if not ring.is_zero(x):
                self.upper[(i, j)] = x

    @classmethod
    def from_rows(cls, ring, rows):
        n = len(rows)
        M = [[_pl(ring, x) for x in r] for r in rows]
        for i in range(n):
            if len(M[i]) != n:
                raise SizeMismatch("matrix is not square")
            if not ring.is_zero(M[i][i]):
                raise SizeMismatch("diagonal is not zero")
            for j in range(i + 1, n):
                if ring.add(M[i][j], M[j][i]) != ring.zero():
                    raise SizeMismatch("matrix is not skew")
        return cls(ring, n, {(i, j): M[i][j] for i in range(n) for j in range(i + 1, n)})

    def entry(self, i, j):
        R = self.ring
        if i == j:
            return R.zero()
        if i < j:
            return self.upper.get((i, j), R.zero())
        return R.neg(self.upper.get((j, i), R.zero()))

    def rows(self):
        return [[self.entry(i, j) for j in range(self.size)] for i in range(self.size)]

    def __eq__(self, other):
        return isinstance(other, AlternatingMatrix) and self.ring == other.ring \
            and self.size == other.size and self.upper == other.upper

    def __hash__(self):
        return hash((self.ring, self.size, tuple(sorted(self.upper.items()))))

    def text(self):
        f = self.ring.format
        body = "; ".join(", ".join(f(x) for x in r) for r in self.rows())
        return f"{self.size}x{self.size}[{body}]"

    def __repr__(self):
        return f"AlternatingMatrix({self.text()})"


def psi(ring, r):
    """Psi_r = Psi_1 perp ... perp Psi_1."""
    return AlternatingMatrix(ring, 2 * r, {(2 * k, 2 * k + 1): ring.one() for k in range(r)})


def perp(alpha, beta):
    if alpha.ring != beta.ring:
        raise SizeMismatch("matrices over different rings")
    n = alpha.size
    upper = dict(alpha.upper)
    for (i, j), x in beta.upper.items():
        upper[(i + n, j + n)] = x
    return AlternatingMatrix(alpha.ring, n + beta.size, upper)


def pfaffian(M):
    """Expansion along the first row."""
    R = M.ring
    memo = {}

    def pf(idx):
        if not idx:
            return R.one()
        if idx in memo:
            return memo[idx]
        first, rest = idx[0], idx[1:]
        acc = R.zero()
        for k, j in enumerate(rest):
            m = M.entry(first, j)
            if R.is_zero(m):
                continue
            term = R.mul(m, pf(rest[:k] + rest[k + 1:]))
            acc = R.add(acc, term if k % 2 == 0 else R.neg(term))
        memo[idx] = acc
        return acc

    return pf(tuple(range(M.size)))


def determinant(ring, rows):
    """Division-free determinant by Laplace expansion over column subsets."""
    n = len(rows)
    R = ring
    memo = {}

    def det(r, cols):
        if r == n:
            return R.one()
        if cols in memo:
            return memo[cols]
        acc = R.zero()
        for k, c in enumerate(cols):
            x = rows[r][c]
            if R.is_zero(x):
                continue
            term = R.mul(x, det(r + 1, cols[:k] + cols[k + 1:]))
            acc = R.add(acc, term if k % 2 == 0 else R.neg(term))
        memo[cols] = acc
        return acc

    return det(0, tuple(range(n)))


def mat_mul(ring, A, B):
    R = ring
    out = []
    for row in A:
        line = []
        for j in range(len(B[0])):
            acc = R.zero()
            for k, x in enumerate(row):
                acc = R.add(acc, R.mul(x, B[k][j]))
            line.append(acc)
        out.append(line)
    return out


def transpose(M):
    return [list(r) for r in zip(*M)]


def vaserstein_V(ring, a, b):
    """The 4x4 alternating matrix V(a, b) of a witnessed length-3 row."""
    R = ring
    if hasattr(a, "v"):
        a = a.v
    if hasattr(b, "w"):
        b = b.w
    a = [_pl(R, x) for x in a]
    b = [_pl(R, x) for x in b]
    if len(a) != 3 or len(b) != 3:
        raise SizeMismatch("V(a, b) needs rows of length 3")
    acc = R.zero()
    for x, y in zip(a, b):
        acc = R.add(acc, R.mul(x, y))
    if acc != R.one():
        raise WitnessMismatch("a . b is not 1")
    a1, a2, a3 = a
    b1, b2, b3 = b
    n = R.neg
    return AlternatingMatrix(R, 4, {
        (0, 1): n(b1), (0, 2): n(b2), (0, 3): n(b3),
        (1, 2): n(a3), (1, 3): a2, (2, 3): n(a1),
    })


def witt_verify(alpha, beta, word, l=0):
    """Check word^T (alpha perp Psi_{s+l}) word == beta perp Psi_{r+l}."""
    R = alpha.ring
    if alpha.size % 2 or beta.size % 2:
        raise SizeMismatch("odd size")
    r, s = alpha.size // 2, beta.size // 2
    N = 2 * (r + s + l)
    if word.n != N or word.ring != R:
        raise SizeMismatch(f"word must act on size {N}")
    left = perp(alpha, psi(R, s + l)).rows()
    right = perp(beta, psi(R, r + l)).rows()
    E = word.matrix()
    return mat_mul(R, mat_mul(R, transpose(E), left), E) == right


def suslin_complete3(ring, row, c):
    """3x3 matrix of determinant 1 with first row (a, b, c^2).

    row carries the witness (p, q, r) with a p + b q + c^2 r = 1; c is the
    given square root of the third coordinate.
    """
    R = ring
    a, b, cc = row.v
    p, q, r = row.w
    c = _pl(R, c)
    if R.mul(c, c) != cc:
        raise NotASquarePresentation("third coordinate is not c^2")
    one, zero = R.one(), R.zero()
    if a == one:
        return [[a, b, cc], [zero, one, zero], [zero, zero, one]]
    mul, add, sub, neg = R.mul, R.add, R.sub, R.neg
    # (c, a, b) has witness (P, Q, S) = (c r, p, q).  For a row (x, y, z)
    # with x P + y Q + z S = 1 the matrix
    #   [[x^2, y, z], [-y + 2xS, S^2, -P - QS], [-z - 2xQ, P - QS, Q^2]]
    # has determinant 1.
    P, Q, S = mul(c, r), p, q
    two_c = add(c, c)
    m = [
        [mul(c, c), a, b],
        [add(neg(a), mul(two_c, S)), mul(S, S), sub(neg(P), mul(Q, S))],
        [sub(neg(b), mul(two_c, Q)), sub(P, mul(Q, S)), mul(Q, Q)],
    ]
    # move the first column to the end: a cyclic permutation, sign +1
    return [line[1:] + line[:1] for line in m]


def random_square_row(ring, rng, small=range(-4, 5), letters=5):
    """(row, c) with row = (a, b, c^2) witnessed, reached from (1, 0, c^2) by moves on a, b."""
    from .rows import UnimodularRow
    from .words import Gen, Word
    R = ring
    vals = [R.from_int(k) for k in small]
    c = rng.choice(vals)
    start = UnimodularRow(R, [R.one(), R.zero(), R.mul(c, c)], [R.one(), R.zero(), R.zero()])
    gens = []
    for _ in range(letters):
        j = rng.choice((0, 1))
        i = rng.choice([k for k in range(3) if k != j])
        gens.append(Gen(i, j, rng.choice(vals)))
    w = Word(R, 3, gens)
    return UnimodularRow(R, w.act(start.v), w.act_witness(start.w)), c
