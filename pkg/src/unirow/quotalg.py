"""Arithmetic in A / v0 A for A a graded subalgebra of Z[t] (or Z[t] itself).

When v0 = 1 + a h with v0 a-monic and a t in A, inverting a gives
A / v0 A = Z[1/a][t] / (v0).  Elements are kept as rational coordinate
vectors on 1, t, ..., t^{n-1}; the lattice Z[1/a]^n is the quotient ring.
"""
from fractions import Fraction

from .errors import PreconditionError
from .ideals import membership_payload, poly_divmod, poly_xgcd
from .rings import Poly, Rationals


def prime_factors(n):
    n = abs(int(n))
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def strip_primes(n, primes):
    n = abs(n)
    for p in primes:
        while n and n % p == 0:
            n //= p
    return n


class QuotientByPivot:
    """Z[1/a][t] / (v0) for an a-monic v0 == 1 mod aA."""

    def __init__(self, A, v0, a):
        if A.degree(v0) < 1:
            raise PreconditionError("pivot must have positive degree")
        self.A = A
        self.a = int(a)
        self.primes = prime_factors(a)
        self.Q = Poly(Rationals())
        self.f = tuple(Fraction(c) for c in v0)
        self.n = len(v0) - 1
        lead = int(v0[-1])
        if strip_primes(lead, self.primes) != 1:
            raise PreconditionError("pivot is not a-monic")
        h = membership_payload(A, [A.coerce(self.a)], A.sub(v0, A.one()))
        if h is None:
            raise PreconditionError("pivot is not 1 modulo aA")
        self.H = A.neg(h[0])  # a * H == 1 modulo v0
        self.at = A.monomial(A.base.coerce(self.a), 1)

    # vectors
    def reduce(self, p):
        _, r = poly_divmod(self.Q, tuple(Fraction(c) for c in p), self.f)
        r = list(r) + [Fraction(0)] * (self.n - len(r))
        return tuple(r[: self.n])

    def from_A(self, p):
        return self.reduce(p)

    def const(self, c):
        return self.reduce((Fraction(c),))

    def _poly(self, x):
        return self.Q._trim(x)

    def add(self, x, y):
        return tuple(p + q for p, q in zip(x, y))

    def sub(self, x, y):
        return tuple(p - q for p, q in zip(x, y))

    def mul(self, x, y):
        return self.reduce(self.Q.mul(self._poly(x), self._poly(y)))

    def is_zero(self, x):
        return not any(x)

    def inverse(self, x):
        g, s, _ = poly_xgcd(self.Q, self._poly(x), self.f)
        if len(g) != 1:
            return None
        return self.reduce(self.Q.scale(1 / g[0], s))

    def in_order(self, x):
        return all(strip_primes(c.denominator, self.primes) == 1 for c in x)

    def is_unit(self, x):
        if not self.in_order(x):
            return False
        inv = self.inverse(x)
        return inv is not None and self.in_order(inv)

    def norm(self, x):
        """Determinant of multiplication by x."""
        n = self.n
        cols = []
        basis = [tuple(Fraction(int(i == k)) for i in range(n)) for k in range(n)]
        for b in basis:
            cols.append(self.mul(x, b))
        M = [[cols[c][r] for c in range(n)] for r in range(n)]
        return _det(M)

    def size(self, x):
        """a-free part of the norm; 1 exactly on units of the order."""
        N = self.norm(x)
        if N == 0:
            return None
        return Fraction(strip_primes(N.numerator, self.primes), strip_primes(N.denominator, self.primes))

    # lifting back into A
    def lift(self, x):
        """An element of A congruent to x modulo v0 A."""
        A = self.A
        out = A.zero()
        for k, c in enumerate(x):
            if c == 0:
                continue
            e = 0
            while (self.a ** e) % c.denominator:
                e += 1
                if e > 512:
                    raise PreconditionError("coordinate is not in the order")
            num = c.numerator * (self.a ** e // c.denominator)
            term = A.mul(A.pow(self.at, k), A.pow(self.H, k + e))
            out = A.add(out, A.scale(A.base.coerce(num), term))
        return out

    def lift_in_ideal(self, x):
        """An element of aA congruent to x modulo v0 A."""
        A = self.A
        y = tuple(c / self.a for c in x)
        return A.mul(A.coerce(self.a), self.lift(y))


def _det(M):
    n = len(M)
    M = [row[:] for row in M]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            if f:
                for k in range(c, n):
                    M[r][k] -= f * M[c][k]
    return det


def _candidates(q, primes, depth):
    """Nearby points of the order to a rational vector q."""
    outs = []
    for j in range(depth + 1):
        den = 1
        for p in primes:
            den *= p ** j
        base = []
        for c in q:
            x = c * den
            lo = x.numerator // x.denominator
            base.append((Fraction(lo, den), Fraction(lo + 1, den)))
        # nearest rounding plus the two neighbours of each coordinate
        nearest = tuple(min(pair, key=lambda v, c=c: abs(v - c)) for pair, c in zip(base, q))
        outs.append(nearest)
        for i in range(len(q)):
            for v in base[i]:
                alt = list(nearest)
                alt[i] = v
                outs.append(tuple(alt))
    seen = []
    for o in outs:
        if o not in seen:
            seen.append(o)
    return seen


def _valuation(x, primes):
    """Largest power of the primes dividing every numerator, capped at 64."""
    v = 0
    nums = [c.numerator for c in x if c]
    while v < 64 and nums and all(n % p == 0 for n in nums for p in primes):
        nums = [n // (1 if not primes else _prod(primes)) for n in nums]
        v += 1
    return v


def _prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out


def _size_or_inf(K, x):
    if K.is_zero(x):
        return Fraction(0)
    s = K.size(x)
    return s if s is not None else None


def _perturbations(K):
    """Small order elements used to leave a stalled Euclid step."""
    out = []
    for k in range(K.n):
        for c in (1, -1, 2, -2, 3, -3):
            out.append(tuple(Fraction(c) if i == k else Fraction(0) for i in range(K.n)))
    if K.n > 1:
        for c0 in (1, -1):
            for c1 in (1, -1):
                out.append(tuple([Fraction(c0), Fraction(c1)] + [Fraction(0)] * (K.n - 2)))
    return out


def euclid_to_unit(K, Y, Z, max_steps=200, depth=2, perturb=2):
    """Moves y += mu z / z += nu y over the quotient until y is a unit.

    A greedy norm-decreasing Euclid; when it stalls, small perturbations of
    either coordinate are tried (up to perturb levels deep).  Returns the
    list of moves [('y', mu) | ('z', nu)] or None on failure.
    """
    moves = []
    for _ in range(max_steps):
        if K.is_unit(Y):
            return moves
        if K.is_unit(Z):
            mu = K.mul(K.sub(K.const(1), Y), K.inverse(Z))
            moves.append(("y", mu))
            return moves
        sy = _size_or_inf(K, Y) if not K.is_zero(Y) else None
        sz = _size_or_inf(K, Z) if not K.is_zero(Z) else None
        step = None
        if not (sy is None and sz is None):
            if sz is None or (sy is not None and sy >= sz):
                target, other, tag = Y, Z, "y"
            else:
                target, other, tag = Z, Y, "z"
            inv = None if K.is_zero(other) else K.inverse(other)
            cur = _size_or_inf(K, target)
            if inv is not None and cur is not None:
                q = K.mul(target, inv)
                best = None
                for cand in _candidates(q, K.primes, depth + _valuation(other, K.primes)):
                    r = K.sub(target, K.mul(cand, other))
                    sr = _size_or_inf(K, r)
                    if sr is None:
                        continue
                    if best is None or sr < best[0]:
                        best = (sr, cand, r)
                if best is not None and best[0] < cur:
                    step = (tag, best[1], best[2])
        if step is None:
            return _perturbed(K, Y, Z, moves, max_steps, depth, perturb)
        tag, cand, r = step
        moves.append((tag, tuple(-c for c in cand)))
        if tag == "y":
            Y = r
        else:
            Z = r
    return None


def _perturbed(K, Y, Z, moves, max_steps, depth, perturb):
    if perturb <= 0:
        return None
    for tag in ("y", "z"):
        for c in _perturbations(K):
            if tag == "y":
                Y2, Z2 = K.add(Y, K.mul(c, Z)), Z
            else:
                Y2, Z2 = Y, K.add(Z, K.mul(c, Y))
            rest = euclid_to_unit(K, Y2, Z2, max_steps // 2, depth, perturb - 1)
            if rest is not None:
                return moves + [(tag, c)] + rest
    return None
