"""Windowed Artin-Rees exponents, the theta map and subintegral extensions.

Ideals of the base ring are handled through a canonical generator: a
nonnegative integer over Z, a divisor of n over Z/n (n standing for the
zero ideal).
"""
from dataclasses import dataclass, field
from math import gcd

from .errors import (ConductorUnsatisfied, NoExponentInWindow, PreconditionError,
                     QuotientUnsupported, VerificationFailure, WindowViolation)
from .graded import Graded, degree_semigroup
from .ideals import IdealHandle
from .intlin import ext_gcd
from .rings import Integers, IntegersMod, RingElement
from .rows import UnimodularRow
from .rowops import _Builder, _finish


def _pl(ring, x):
    return x.value if isinstance(x, RingElement) else ring.coerce(x)


# principal ideals of Z and Z/n

def _canon(base, g):
    if isinstance(base, Integers):
        return abs(int(g))
    if isinstance(base, IntegersMod):
        return gcd(int(g), base.n) or base.n
    raise QuotientUnsupported("ideal arithmetic needs a Z or Z/n base")


def _ideal_gen(base, gens):
    g = 0
    for x in gens:
        g = gcd(g, int(_pl(base, x)))
    return _canon(base, g)


def _times(base, x, y):
    return _canon(base, x * y)


def _cap(base, x, y):
    if x == 0 or y == 0:
        return 0 if isinstance(base, Integers) else base.n
    return _canon(base, x * y // gcd(x, y))


def _power(base, x, n):
    return _canon(base, x ** n) if n else 1


def _divides(base, small, big):
    """q with big == q * small in the base ring, or None."""
    if isinstance(base, Integers):
        if small == 0:
            return 0 if big == 0 else None
        return big // small if big % small == 0 else None
    n = base.n
    h, x, _ = ext_gcd(small % n, n)
    if big % h:
        return None
    return (big // h) * x % n


def _component(A, m):
    return _canon(A.base, A.principal(m))


@dataclass
class ArtinReesWitness:
    algebra: object
    I: int
    J: int
    k: int
    window: tuple
    evidence: dict = field(default_factory=dict)

    def verify(self):
        """Re-check every stored containment from the generators."""
        A = self.algebra
        base = A.base
        N, D = self.window
        for n in range(max(self.k, 1), N + 1):
            for m in range(D + 1):
                if (n, m) not in self.evidence:
                    return False
                lhs, rhs, q = self.evidence[(n, m)]
                In_m = _times(base, _power(base, self.I, n), _component(A, m))
                if lhs != _cap(base, In_m, self.J):
                    return False
                if _divides(base, In_m, lhs) is None or _divides(base, self.J, lhs) is None:
                    return False
                want = _times(base, _times(base, self.J, _power(base, self.I, n - self.k)), _component(A, m))
                if rhs != want:
                    return False
                if not _same(base, q * rhs, lhs):
                    return False
        return True

    def table(self):
        lines = [f"# artin-rees k={self.k} window N={self.window[0]} D={self.window[1]}"]
        for (n, m), (lhs, rhs, q) in sorted(self.evidence.items()):
            lines.append(f"{n} {m} | lhs ({lhs}) | rhs ({rhs}) | q {q}")
        return "\n".join(lines)


def _same(base, x, y):
    if isinstance(base, IntegersMod):
        return (x - y) % base.n == 0
    return x == y


def _check_cell(A, I, J, n, m, k):
    """Evidence (lhs, rhs, q) that I^n I_m cap J lies in J I^{n-k} I_m, or None."""
    base = A.base
    In_m = _times(base, _power(base, I, n), _component(A, m))
    lhs = _cap(base, In_m, J)
    rhs = _times(base, _times(base, J, _power(base, I, n - k)), _component(A, m))
    q = _divides(base, rhs, lhs)
    if q is None:
        return None
    return lhs, rhs, q


def artin_rees_exponent(A, I, J, window, jobs=1):
    """Least k with I^n I_m cap J inside J I^{n-k} I_m on the window.

    n runs over [max(k, 1), N] and m over [0, D].  I and J are lists of
    generators of ideals of the base ring.
    """
    if not isinstance(A, Graded):
        raise PreconditionError("A must be a graded algebra")
    base = A.base
    if not isinstance(base, (Integers, IntegersMod)):
        raise QuotientUnsupported("Artin-Rees exponents need a Z or Z/n base")
    N, D = window
    Ig = _ideal_gen(base, I if isinstance(I, (list, tuple)) else [I])
    Jg = _ideal_gen(base, J if isinstance(J, (list, tuple)) else [J])
    I1 = _component(A, 1)
    if _divides(base, I1, Ig) is None:
        raise PreconditionError("I is not contained in I_1")
    cells = [(n, m) for n in range(1, N + 1) for m in range(D + 1)]

    def run(k):
        todo = [(n, m) for n, m in cells if n >= k]
        if jobs > 1:
            from concurrent.futures import ThreadPoolExecutor
            with ThreadPoolExecutor(jobs) as ex:
                res = list(ex.map(lambda c: _check_cell(A, Ig, Jg, c[0], c[1], k), todo))
        else:
            res = [_check_cell(A, Ig, Jg, n, m, k) for n, m in todo]
        if any(r is None for r in res):
            return None
        return dict(zip(todo, res))

    for k in range(N + 1):
        ev = run(k)
        if ev is not None:
            w = ArtinReesWitness(A, Ig, Jg, k, (N, D), ev)
            if not w.verify():
                raise VerificationFailure("stored containment evidence does not re-verify")
            return w
    raise NoExponentInWindow(f"no k <= {N} works on the window N={N}, D={D}")


# the theta map

class ThetaMap:
    """[(a_0, ..., a_{d-1})] over A / (v_d R[t] cap A)  ->  [(a_0, ..., a_{d-1}, v_d)].

    Lifts must be congruent to e_1 modulo I^l A; l has to exceed the
    Artin-Rees exponent for J = (v_d) on the given window.
    """

    def __init__(self, row, A, l, I=None, window=(8, 8)):
        A = row.ring if A is None else A
        if not isinstance(A, Graded):
            raise PreconditionError("theta needs a graded algebra")
        base = A.base
        if not isinstance(base, IntegersMod):
            raise QuotientUnsupported("the quotient by v_d R[t] cap A is only computed over Z/n")
        vd = row.v[-1]
        if A.degree(vd) > 0:
            raise PreconditionError("v_d must be a constant")
        self.A = A
        self.row = row
        self.d = row.n - 1
        self.vd = A.coeff(vd, 0) if A.degree(vd) == 0 else base.zero()
        I = [A.principal(1)] if I is None else I
        self.I = _ideal_gen(base, I if isinstance(I, (list, tuple)) else [I])
        if _divides(base, self.I, _canon(base, self.vd)) is None and not base.is_zero(self.vd):
            raise PreconditionError("v_d is not in I")
        self.ar = artin_rees_exponent(A, [self.I], [self.vd], window)
        self.l = l
        if l < self.ar.k + 1:
            raise WindowViolation(f"l = {l} is below the Artin-Rees bound k + 1 = {self.ar.k + 1}")
        self.ideal = IdealHandle(A, [A.coerce(self.I)])

    def _in_power(self, f):
        """f in I^l A, coefficientwise."""
        base = self.A.base
        for i, c in enumerate(f):
            g = _times(base, _power(base, self.I, self.l), _component(self.A, i))
            if _divides(base, g, int(c)) is None:
                return False
        return True

    def _divide_by_vd(self, e):
        """f in I A with v_d f == e."""
        A = self.A
        base = A.base
        out = []
        for i, c in enumerate(e):
            g = _times(base, self.I, _component(A, i))
            h = _divides(base, base.mul(self.vd, g), int(c))
            if h is None:
                return None
            out.append(base.mul(h, g))
        return A._trim(out)

    def apply(self, lift, witness=None):
        A = self.A
        a = [_pl(A, x) for x in lift]
        if len(a) != self.d:
            raise PreconditionError(f"lift must have {self.d} coordinates")
        e1 = [A.one()] + [A.zero()] * (self.d - 1)
        if not self._in_power(A.sub(a[0], A.one())) or not all(self._in_power(x) for x in a[1:]):
            raise PreconditionError("lift is not e_1 modulo I^l A")
        if witness is None:
            if a == e1:
                witness = e1
            else:
                raise PreconditionError("a witness over the quotient is required")
        b = [_pl(A, x) for x in witness]
        acc = A.zero()
        for x, y in zip(a, b):
            acc = A.add(acc, A.mul(x, y))
        e = A.sub(acc, A.one())
        if A.is_zero(e):
            f = A.zero()
        else:
            f = self._divide_by_vd(e)
            if f is None:
                raise WindowViolation("sum a_i a_i' - 1 is not in I v_d A")
        out = UnimodularRow(A, a + [A.coerce(self.vd)], b + [A.neg(f)])
        if not out.is_relative(self.ideal):
            raise VerificationFailure("image row is not relative to IA")
        return out

    def preimage_of(self, row=None):
        """Thicken the first d coordinates of row; theta of the result is row's class.

        Returns (certificate row -> row', lift, witness) with theta(lift) == row'.
        """
        row = self.row if row is None else row
        A = self.A
        R = A
        x = R.sub(row.v[0], R.one())
        ubar, p = R.one(), R.one()
        for _ in range(self.l - 1):
            p = R.mul(p, R.neg(x))
            ubar = R.add(ubar, p)
        b = _Builder(R, row.v)
        from .words import Gen
        for j in range(1, self.d):
            b.add(0, j, R.neg(R.mul(b.v[j], ubar)))
        b.conj([Gen(1, 0, R.one())], 0, 1, R.sub(R.one(), ubar))
        b.add(0, 1, R.neg(x))
        cert = _finish(row, b.word(), self.ideal)
        new = cert.target
        lift, wit = list(new.v[:-1]), list(new.w[:-1])
        image = self.apply(lift, wit)
        if list(image.v) != list(new.v):
            raise VerificationFailure("theta does not reproduce the thickened row")
        return cert, lift, wit


def theta_map(row, A, l, I=None, window=(8, 8), lift=None, witness=None):
    """Build the map and, when a lift is given, its image row."""
    th = ThetaMap(row, A, l, I, window)
    if lift is None:
        return th, None
    return th, th.apply(lift, witness)


# subintegral extensions

@dataclass
class SubintegralExtension:
    A: object
    B: object
    element: tuple
    p: int

    def verify(self, cap=None):
        A, B, u = self.A, self.B, self.element
        cap = cap or 3 * self.p + 4
        if not A.contains_poly(A.mul(u, u)) or not A.contains_poly(A.mul(A.mul(u, u), u)):
            return False
        for i in range(self.p, cap + 1):
            if _component(B, i) != _component(A, i):
                return False
        return not B.base.is_zero(B.principal(self.p - 1))


def subintegral_extend(A, p):
    """B = A[c t^{p-1}] with (c t^{p-1})^2, (c t^{p-1})^3 in A and B_i = A_i for i >= p."""
    if not isinstance(A, Graded):
        raise PreconditionError("A must be a graded algebra")
    if not isinstance(A.base, Integers):
        raise PreconditionError("subintegral extensions are built over a domain base (Z)")
    if p < 2:
        raise ConductorUnsatisfied("p must be at least 2")
    g, cond = degree_semigroup(A)
    if g != 1 or cond is None or cond > p:
        raise ConductorUnsatisfied(f"A_i vanishes for some i >= {p}")
    base = A.base
    if not base.is_zero(A.principal(p - 1)):
        c = A.principal(p - 1)
    else:
        c = 1
        for _, n in A.generators:
            c *= A.principal(n + p - 1)
        c *= A.principal(2 * (p - 1))
    u = A.monomial(c, p - 1)
    B = Graded(base, list(A.generators) + [(c, p - 1)])
    ext = SubintegralExtension(A, B, u, p)
    if not ext.verify():
        raise VerificationFailure("subintegral extension checks failed")
    return ext
