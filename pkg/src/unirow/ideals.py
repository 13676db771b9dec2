"""Finitely generated ideals and membership with witnesses.

Membership x in (g_1, ..., g_k) is turned into a linear system over Z or Q
on the ring's linear view: the unknowns are the coordinates of the
multipliers in a spanning set.  For rings of finite rank (Z, Z/n, Q,
quotients, excision rings over those) the solve is exact, so a failure
certifies non-membership.  Polynomials over a field use extended Euclid.
Otherwise the multiplier degree is capped and failure raises Undecided.
"""
from fractions import Fraction
from itertools import product as iproduct

from .errors import InvalidDescriptor, Undecided, Unsupported, VerificationFailure
from .intlin import solve_integer, solve_rational
from .rings import (Excision, Integers, IntegersMod, Poly, Quotient, Rationals,
                    RingElement, SCALAR_TYPES, _PolyLike)

DEFAULT_EXTRA_DEGREE = 6


def _payload(ring, x):
    if isinstance(x, RingElement):
        return x.value
    return ring.coerce(x)


class IdealHandle:
    """An ideal given by a finite list of generators."""

    def __init__(self, ring, gens):
        self.ring = ring
        self.gens = tuple(_payload(ring, g) for g in gens)

    def __repr__(self):
        gens = ", ".join(self.ring.format(g) for g in self.gens)
        return f"({gens}) in {self.ring.text()}"

    def elements(self):
        return [RingElement(self.ring, g) for g in self.gens]

    def witness(self, x, cap=None):
        return membership_payload(self.ring, list(self.gens), _payload(self.ring, x), cap)

    def contains(self, x, cap=None):
        return self.witness(x, cap) is not None

    __contains__ = contains

    def is_zero(self):
        return all(self.ring.is_zero(g) for g in self.gens)

    def times(self, other):
        R = self.ring
        return IdealHandle(R, [R.mul(a, b) for a in self.gens for b in other.gens])

    def power(self, n):
        R = self.ring
        out = IdealHandle(R, [R.one()])
        for _ in range(n):
            out = out.times(self)
        return out

    def enumerate(self):
        """All members of the ideal, for a finite ring, in canonical order."""
        R = self.ring
        if not R.finite:
            raise Unsupported(f"cannot enumerate ideals of {R}")
        elems = R.elements()
        members = {R.zero()}
        for g in self.gens:
            multiples = {R.mul(r, g) for r in elems}
            members = {R.add(m, k) for m in members for k in multiples}
        order = {e: idx for idx, e in enumerate(elems)}
        return sorted(members, key=order.__getitem__)

    def same_as(self, other):
        return all(other.contains(g) for g in self.gens) and all(self.contains(g) for g in other.gens)


def ideal_of(ring, *gens):
    return IdealHandle(ring, list(gens))


# scalar embedding of solution coordinates
def _embed(ring, y):
    if isinstance(ring, (Integers, IntegersMod)):
        return ring.normalize(int(y))
    if isinstance(ring, Rationals):
        return Fraction(y)
    if isinstance(ring, Quotient) and ring.kind == "int":
        return int(y) % ring.m
    if isinstance(ring, Excision):
        return (_embed(ring.base, y), ring.base.zero())
    if isinstance(ring, _PolyLike):
        return ring._trim([_embed(ring.base, y)])
    raise Unsupported(f"no scalar embedding for {ring}")


def _as_int(y):
    if isinstance(y, Fraction):
        return y.numerator if y.denominator == 1 else y
    return y


def _flat_coords(ring, a, width):
    return ring.coords(a, width - 1)


def _view_width(ring, payloads):
    if isinstance(ring, _PolyLike) and not isinstance(ring, Quotient):
        return max([len(p) for p in payloads] + [1])
    if isinstance(ring, Excision) and isinstance(ring.base, _PolyLike) and not isinstance(ring.base, Quotient):
        return max([max(len(p[0]), len(p[1])) for p in payloads] + [1])
    return None


def _torsion_columns(ring, width):
    if isinstance(ring, _PolyLike) and not isinstance(ring, Quotient):
        if isinstance(ring.base, IntegersMod):
            n = ring.base.n
            return [[n if i == j else 0 for i in range(width)] for j in range(width)]
        return []
    if isinstance(ring, Excision):
        base_t = _torsion_columns(ring.base, width) if width is not None else ring.base.torsion(0)
        w = len(ring.base.coords(ring.base.zero(), (width or 1) - 1))
        return [v + [0] * w for v in base_t] + [[0] * w + v for v in base_t]
    return ring.torsion(0)


def _linear_solve(ring, gens, x, cap):
    span = ring.span(cap)
    cands = []
    for j, g in enumerate(gens):
        for b in span:
            cands.append((j, b, ring.mul(g, b)))
    width = _view_width(ring, [c for _, _, c in cands] + [x])
    cw = 0 if width is None else width
    cols = [_flat_coords(ring, c, cw) for _, _, c in cands]
    target = _flat_coords(ring, x, cw)
    tors = _torsion_columns(ring, width)
    if ring.scalar == "Q":
        sol = solve_rational(cols + tors, target)
    else:
        sol = solve_integer(cols + tors, target)
    if sol is None:
        return None
    coeffs = [ring.zero() for _ in gens]
    for (j, b, _), y in zip(cands, sol):
        y = _as_int(y)
        if y:
            coeffs[j] = ring.add(coeffs[j], ring.mul(_embed(ring, y), b))
    return coeffs


# polynomials over a field
def poly_divmod(P, a, b):
    """Quotient and remainder of a by b; b's leading coefficient must be a unit."""
    base = P.base
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = base.inverse(b[-1])
    r = list(a)
    db = len(b) - 1
    q = [base.zero()] * max(len(a) - db, 1)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k]
        if base.is_zero(c):
            continue
        f = base.mul(c, inv)
        q[k - db] = f
        for i in range(db + 1):
            r[k - db + i] = base.sub(r[k - db + i], base.mul(f, b[i]))
    return P._trim(q), P._trim(r)


def poly_xgcd(P, a, b):
    """(g, s, t) with s*a + t*b = g, g monic or zero."""
    r0, r1 = a, b
    s0, s1 = P.one(), P.zero()
    t0, t1 = P.zero(), P.one()
    while r1:
        q, r = poly_divmod(P, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, P.sub(s0, P.mul(q, s1))
        t0, t1 = t1, P.sub(t0, P.mul(q, t1))
    if r0:
        inv = P.base.inverse(r0[-1])
        c = (inv,)
        r0, s0, t0 = P.mul(c, r0), P.mul(c, s0), P.mul(c, t0)
    return r0, s0, t0


def _field_poly_solve(P, gens, x):
    g, coeffs = P.zero(), [P.zero() for _ in gens]
    for idx, h in enumerate(gens):
        g2, s, t = poly_xgcd(P, g, h)
        coeffs = [P.mul(c, s) for c in coeffs]
        coeffs[idx] = t
        g = g2
    if not g:
        return coeffs if not x else None
    q, r = poly_divmod(P, x, g)
    if r:
        return None
    return [P.mul(c, q) for c in coeffs]


def _check(ring, gens, x, coeffs):
    acc = ring.zero()
    for c, g in zip(coeffs, gens):
        acc = ring.add(acc, ring.mul(c, g))
    if acc != x:
        raise VerificationFailure("membership witness does not re-multiply")
    return coeffs


def membership_payload(ring, gens, x, cap=None):
    """Coefficients c (payloads) with sum c_j g_j == x, or None.

    None is only returned when non-membership is certain; a capped search
    that finds nothing raises Undecided.
    """
    gens = list(gens)
    if ring.is_zero(x):
        return [ring.zero() for _ in gens]
    if not gens:
        return None
    if isinstance(ring, Poly) and ring.over_field():
        coeffs = _field_poly_solve(ring, gens, x)
        return None if coeffs is None else _check(ring, gens, x, coeffs)
    if isinstance(ring, Poly) and not isinstance(ring.base, SCALAR_TYPES):
        raise Unsupported(f"ideal membership over {ring}")
    principal = _principal_domain_solve(ring, gens, x)
    if principal is not False:
        return principal
    if ring.finite and _small(ring):
        return _finite_solve(ring, gens, x)
    exact = ring.exact_membership()
    if cap is None:
        cap = _default_cap(ring, gens, x)
    coeffs = _linear_solve(ring, gens, x, cap)
    if coeffs is not None:
        return _check(ring, gens, x, coeffs)
    if exact:
        return None
    raise Undecided(f"no witness with multiplier degree <= {cap} in {ring}")


def _principal_domain_solve(ring, gens, x):
    """Exact division for one nonzero generator in a subring of Z[t] or Q[t].

    These rings are domains inside Q[t], so x = c * g forces c = x / g.
    Returns False when the shortcut does not apply.
    """
    nz = [k for k, g in enumerate(gens) if not ring.is_zero(g)]
    if len(nz) != 1 or not isinstance(ring, _PolyLike) or isinstance(ring, Quotient):
        return False
    if not isinstance(ring.base, (Integers, Rationals)):
        return False
    g = gens[nz[0]]
    Q = Poly(Rationals())
    qq, rr = poly_divmod(Q, tuple(Fraction(c) for c in x), tuple(Fraction(c) for c in g))
    if rr:
        return None
    if isinstance(ring.base, Integers) and any(c.denominator != 1 for c in qq):
        return None
    try:
        c = ring.normalize([ring.base.normalize(v) for v in qq])
    except InvalidDescriptor:
        return None
    coeffs = [ring.zero() for _ in gens]
    coeffs[nz[0]] = c
    return _check(ring, gens, x, coeffs)


def _default_cap(ring, gens, x):
    if isinstance(ring, (_PolyLike, Excision)) and not isinstance(ring, Quotient):
        degs = [ring.degree(x)] + [ring.degree(g) for g in gens]
        if isinstance(ring, Excision):
            degs = [0]
        return max(degs) + DEFAULT_EXTRA_DEGREE
    return 0


def _small(ring):
    # linear view covers everything except finite rings with no scalar view
    return ring.scalar is None


def _finite_solve(ring, gens, x):
    elems = ring.elements()
    if len(elems) ** len(gens) > 10 ** 6:
        raise Undecided(f"ideal in {ring} too large to search")
    for combo in iproduct(elems, repeat=len(gens)):
        acc = ring.zero()
        for c, g in zip(combo, gens):
            acc = ring.add(acc, ring.mul(c, g))
        if acc == x:
            return list(combo)
    return None


def ideal_membership(I, x, cap=None):
    """Witness coefficients (RingElements) for x in I, or None."""
    R = I.ring
    coeffs = membership_payload(R, list(I.gens), _payload(R, x), cap)
    if coeffs is None:
        return None
    return [RingElement(R, c) for c in coeffs]


def _generators_of(ring, members):
    """Greedy small generating set for a finite ideal given as a member set."""
    member_set = set(members)
    gens = []
    span = {ring.zero()}
    for e in ring.elements():
        if e in member_set and e not in span:
            gens.append(e)
            span = set(IdealHandle(ring, gens).enumerate())
            if span == member_set:
                break
    return gens or [ring.zero()]


def annihilator(I):
    R = I.ring
    if not R.finite:
        raise Unsupported(f"annihilators need a finite ring, got {R}")
    return [x for x in R.elements() if all(R.is_zero(R.mul(x, g)) for g in I.gens)]


def gamma_ideal(I):
    """Union over n of (0 : I^n), for a finite ring."""
    R = I.ring
    if not R.finite:
        raise Unsupported(f"gamma ideal needs a finite enumerable ring, got {R}")
    prev = None
    power = IdealHandle(R, [R.one()])
    while True:
        power = power.times(I)
        ann = annihilator(IdealHandle(R, _generators_of(R, power.enumerate())))
        if ann == prev:
            return IdealHandle(R, _generators_of(R, ann))
        prev = ann


def excision_maps(which, x, ring=None):
    """pi, epsilon, iota and the fiber isomorphism for an excision ring.

    ``iota`` takes a base element and needs the excision ``ring``;
    ``fiber_iso`` returns the pair (r, r + i) of base elements.
    """
    if which == "iota":
        if ring is None:
            raise ValueError("iota needs the target excision ring")
        return RingElement(ring, (_payload(ring.base, x), ring.base.zero()))
    E = x.ring
    if not isinstance(E, Excision):
        raise Unsupported(f"{which} needs an excision element")
    B = E.base
    r, i = x.value
    if which == "pi":
        return RingElement(B, B.add(r, i))
    if which == "epsilon":
        return RingElement(B, r)
    if which == "fiber_iso":
        return RingElement(B, r), RingElement(B, B.add(r, i))
    raise ValueError(f"unknown excision map {which!r}")


def fiber_inverse(E, r, s):
    """Inverse of the fiber isomorphism: (r, s) with s - r in I maps to (r, s - r)."""
    B = E.base
    return RingElement(E, E.normalize((_payload(B, r), B.sub(_payload(B, s), _payload(B, r)))))
