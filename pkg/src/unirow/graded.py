"""Graded subalgebras A = R[c_1 t^{n_1}, ..., c_k t^{n_k}] of R[t].

Elements are stored as polynomials of the ambient R[t]; a polynomial is
admitted only if each degree-i coefficient lies in the component ideal
I_i.  Also the Swan-Weibel map psi : A -> A[u] and its companions.
"""
from fractions import Fraction
from functools import reduce
from math import gcd

from .errors import InvalidDescriptor, Unsupported
from .intlin import ext_gcd
from .rings import (Integers, IntegersMod, Poly, RingElement,
                    SCALAR_TYPES, _PolyLike)


class NotInAlgebra(InvalidDescriptor):
    pass


class Graded(_PolyLike):
    """Graded subalgebra of base[t] generated by coef * t^deg."""

    def __init__(self, base, generators):
        if not isinstance(base, SCALAR_TYPES):
            raise InvalidDescriptor("graded algebras need a Z, Z/n or Q base")
        gens = []
        for c, d in generators:
            c = base.coerce(c.value if isinstance(c, RingElement) else c)
            if not isinstance(d, int) or d < 1:
                raise InvalidDescriptor("generator degrees must be positive integers")
            if base.is_zero(c):
                raise InvalidDescriptor("generator coefficient must be nonzero")
            gens.append((c, d))
        if not gens:
            raise InvalidDescriptor("graded algebra needs at least one generator")
        self.base = base
        self.generators = tuple(gens)
        self.poly_depth = 1
        self.scalar = base.scalar
        self._raw = {0: [base.one()]}
        self._principal = {}

    def key(self):
        return (self.base.text(), self.generators)

    def __eq__(self, other):
        return isinstance(other, Graded) and self.base == other.base and self.generators == other.generators

    def __hash__(self):
        return hash(("Graded", self.base, self.generators))

    def text(self):
        gens = ", ".join(f"{self.base.format(c)}@{d}" for c, d in self.generators)
        return f"graded({self.base.text()}; {gens})"

    def ambient(self):
        return Poly(self.base, "t")

    # component ideals
    def raw_component(self, i):
        """Products of generator coefficients over multisets of degree i."""
        if i < 0:
            return []
        if i in self._raw:
            return self._raw[i]
        base = self.base
        seen = {}
        for c, d in self.generators:
            if d <= i:
                for p in self.raw_component(i - d):
                    v = base.mul(c, p)
                    if not base.is_zero(v):
                        seen.setdefault(v, None)
        self._raw[i] = list(seen)
        return self._raw[i]

    def principal(self, i):
        """Single generator of I_i (components are principal over Z, Z/n, Q)."""
        if i in self._principal:
            return self._principal[i]
        raw = self.raw_component(i)
        base = self.base
        if isinstance(base, Integers):
            g = reduce(gcd, raw, 0)
        elif isinstance(base, IntegersMod):
            g = reduce(gcd, raw, base.n) % base.n
        else:
            g = Fraction(1) if raw else Fraction(0)
        self._principal[i] = g
        return g

    def coefficient_witness(self, i, c):
        """Return w with c == w * principal(i), or None."""
        base = self.base
        g = self.principal(i)
        if base.is_zero(c):
            return base.zero()
        if isinstance(base, Integers):
            if g == 0 or c % g:
                return None
            return c // g
        if isinstance(base, IntegersMod):
            n = base.n
            h, x, _ = ext_gcd(g, n)
            if c % h:
                return None
            return (c // h) * x % n
        if g == 0:
            return None
        return c / g

    def contains_poly(self, coeffs):
        return all(self.coefficient_witness(i, c) is not None for i, c in enumerate(coeffs))

    def normalize(self, a):
        if isinstance(a, int):
            return self.from_int(a)
        coeffs = self._trim([self.base.coerce(c.value if isinstance(c, RingElement) else c) for c in a])
        for i, c in enumerate(coeffs):
            if self.coefficient_witness(i, c) is None:
                raise NotInAlgebra(
                    f"coefficient {self.base.format(c)} of t^{i} is not in I_{i} of {self.text()}")
        return coeffs

    def membership_witness(self, a):
        """Per-degree witnesses (w_i with a_i = w_i * g_i)."""
        return [self.coefficient_witness(i, c) for i, c in enumerate(a)]

    def is_unit(self, a):
        return len(a) == 1 and self.base.is_unit(a[0])

    def inverse(self, a):
        if len(a) == 1:
            return (self.base.inverse(a[0]),)
        raise Unsupported("non-constant graded element inverse")

    # linear view
    def span(self, cap):
        out = []
        for k in range(cap + 1):
            g = self.principal(k)
            if not self.base.is_zero(g):
                out.append(self.monomial(g, k))
        return out

    def from_coords(self, vec):
        return self.normalize(vec)

    def homogeneous(self, a, i):
        return self.monomial(self.coeff(a, i), i)

    def atom(self, index):
        """The generator c_j t^{n_j} as an element payload."""
        c, d = self.generators[index]
        return self.monomial(c, d)


GradedAlgebra = Graded


def graded_component(A, i):
    """Generators of I_i as an ideal of the base ring."""
    from .ideals import IdealHandle
    if i < 0:
        raise ValueError("degree must be >= 0")
    raw = A.raw_component(i)
    return IdealHandle(A.base, raw if raw else [A.base.zero()])


def numerical_semigroup(degrees):
    """Return (g, conductor or None, gaps) of the semigroup spanned by degrees."""
    degrees = sorted(set(d for d in degrees if d > 0))
    if not degrees:
        raise ValueError("need at least one positive degree")
    g = reduce(gcd, degrees)
    if g != 1:
        return g, None, None
    lo, hi = degrees[0], degrees[-1]
    bound = lo * hi + hi + 1
    rep = [False] * (bound + 1)
    rep[0] = True
    for k in range(1, bound + 1):
        rep[k] = any(k >= d and rep[k - d] for d in degrees)
    run = 0
    for k in range(bound + 1):
        run = run + 1 if rep[k] else 0
        if run == lo:
            p = k - lo + 1
            gaps = [j for j in range(p) if not rep[j]]
            return 1, p, gaps
    raise AssertionError("conductor bound too small")


def degree_semigroup(A):
    """(gcd of generator degrees, conductor or None)."""
    degrees = [d for c, d in A.generators if not A.base.is_zero(c)]
    g, p, _ = numerical_semigroup(degrees)
    return g, p


def swan_weibel_target(A, var="u"):
    return Poly(A, var)


def swan_weibel(a):
    """psi(a_0 + a_1 + ... + a_r) = a_0 + a_1 u + ... + a_r u^r in A[u]."""
    A = a.ring
    if not isinstance(A, Graded):
        raise InvalidDescriptor("swan_weibel needs an element of a graded algebra")
    P = swan_weibel_target(A)
    comps = tuple(A.homogeneous(a.value, i) for i in range(len(a.value)))
    return RingElement(P, P._trim(comps))


def phi(f, m):
    """Evaluate f in A[u] at u = m (an integer)."""
    P = f.ring
    A = P.base
    return RingElement(A, P.evaluate(f.value, A.from_int(m)))


def eta(a):
    """Degree-zero part A -> R."""
    A = a.ring
    return RingElement(A.base, A.coeff(a.value, 0))


def iota(r, A):
    """Inclusion R -> A."""
    return RingElement(A, A._trim([r.value if isinstance(r, RingElement) else A.base.coerce(r)]))
