"""Constructive row lemmas: unipotent reduction, scaling by t^2, thickening.

All three return certificates whose words use only conjugated letters with
parameter in the ideal, so they are syntactic E_n(R, I) certificates.
"""
from collections import deque
from fractions import Fraction

from .errors import (BudgetExhausted, NoUnitWitness, NotRelative, NotUnipotent,
                     PreconditionError, Undecided, Unsupported, VerificationFailure)
from .ideals import membership_payload
from .rings import RingElement, is_nilpotent
from .rows import apply_word
from .words import Conj, EquivalenceCertificate, Gen, Word


def _pl(ring, x):
    return x.value if isinstance(x, RingElement) else ring.coerce(x)


def _letter(i, j, lam):
    return Conj((), Gen(i, j, lam))


class _Builder:
    """Accumulates letters while tracking the row they act on."""

    def __init__(self, ring, v):
        self.ring = ring
        self.v = list(v)
        self.letters = []

    def add(self, i, j, lam):
        """Coordinate j gains lam * coordinate i."""
        R = self.ring
        if R.is_zero(lam):
            return
        self.letters.append(_letter(i, j, lam))
        self.v[j] = R.add(self.v[j], R.mul(lam, self.v[i]))

    def conj(self, outer, i, j, lam):
        R = self.ring
        if R.is_zero(lam):
            return
        letter = Conj(tuple(outer), Gen(i, j, lam))
        self.letters.append(letter)
        self.v = Word(R, len(self.v), [letter]).act(self.v)

    def word(self):
        return Word(self.ring, len(self.v), self.letters)


def _finish(row, word, ideal, target=None):
    out = apply_word(row, word)
    cert = EquivalenceCertificate(row, out, word)
    if not cert.verify(ideal):
        raise VerificationFailure("constructed word does not verify")
    if target is not None and list(out.v) != list(target):
        raise VerificationFailure("constructed word misses its target")
    return cert


def _require_relative(row, ideal):
    R = row.ring
    if not ideal.contains(R.sub(row.v[0], R.one())):
        raise NotRelative("first coordinate is not 1 modulo the ideal")
    for x in row.v[1:]:
        if not ideal.contains(x):
            raise NotRelative("a tail coordinate is not in the ideal")


def nil_reduce(row, ideal):
    """Certificate row -> e_1 when v_1 = 1 + x with x nilpotent and in the ideal."""
    R = row.ring
    n = row.n
    u = row.v[0]
    x = R.sub(u, R.one())
    b = _Builder(R, row.v)
    target = [R.one()] + [R.zero()] * (n - 1)
    if list(row.v) == target:
        return _finish(row, b.word(), ideal, target)
    if is_nilpotent(R, x) is None:
        raise NotUnipotent("first coordinate is not 1 plus a nilpotent")
    _require_relative(row, ideal)
    # u^-1 as a finite geometric series
    uinv, p = R.one(), R.one()
    while True:
        p = R.mul(p, R.neg(x))
        if R.is_zero(p):
            break
        uinv = R.add(uinv, p)
    for j in range(1, n):
        b.add(0, j, R.neg(R.mul(b.v[j], uinv)))
    b.conj([Gen(1, 0, R.one())], 0, 1, R.sub(R.one(), uinv))
    b.add(0, 1, R.neg(b.v[1]))
    return _finish(row, b.word(), ideal, target)


def pthick(row, N, ideal):
    """Certificate row -> w with w == e_1 modulo ideal^N."""
    R = row.ring
    n = row.n
    if N < 1:
        raise ValueError("N must be positive")
    _require_relative(row, ideal)
    b = _Builder(R, row.v)
    e1 = [R.one()] + [R.zero()] * (n - 1)
    if N == 1 or list(row.v) == e1:
        return _finish(row, b.word(), ideal)
    IN = ideal.power(N)
    u = row.v[0]
    x = R.sub(u, R.one())
    # truncated inverse: u * ubar == 1 - (-x)^N
    ubar, p = R.one(), R.one()
    for _ in range(N - 1):
        p = R.mul(p, R.neg(x))
        ubar = R.add(ubar, p)
    for j in range(1, n):
        b.add(0, j, R.neg(R.mul(b.v[j], ubar)))
    b.conj([Gen(1, 0, R.one())], 0, 1, R.sub(R.one(), ubar))
    b.add(0, 1, R.neg(x))
    cert = _finish(row, b.word(), ideal)
    w = cert.target.v
    if not IN.contains(R.sub(w[0], R.one())) or not all(IN.contains(c) for c in w[1:]):
        raise VerificationFailure("thickened row is not e_1 modulo the power")
    return cert


# scaling the last coordinate by t^2

def unit_witness(ring, t, J):
    """Return (s, k) with t*s + sum k_i J_i == 1, or raise NoUnitWitness."""
    R = ring
    J = list(J)
    if len(J) == 1:
        # try 1 = g * sum_{k<N} (-x)^k + (-x)^N with t | x^N, where g = 1 + x
        x = R.sub(J[0], R.one())
        p, series = R.one(), R.one()
        for N in range(1, 24):
            p = R.mul(p, R.neg(x))
            try:
                q = membership_payload(R, [t], p)
            except (Undecided, Unsupported):
                q = None
            if q is not None:
                return q[0], [series]
            series = R.add(series, p)
    try:
        wit = membership_payload(R, [t] + J, R.one())
    except (Undecided, Unsupported) as exc:
        raise NoUnitWitness(f"no witness that t is a unit modulo the ideal: {exc}") from None
    if wit is None:
        raise NoUnitWitness("t is not a unit modulo the ideal")
    return wit[0], wit[1:]


def _unimodular_witness(R, gens):
    try:
        return membership_payload(R, gens, R.one())
    except (Undecided, Unsupported):
        return None


def _path_finite(R, v, jidx, yi, zi, ideal, budget):
    J = [v[k] for k in jidx]
    if _unimodular_witness(R, J + [v[yi]]) is not None:
        return []
    lams = [c for c in ideal.enumerate() if not R.is_zero(c)]
    start = (v[yi], v[zi])
    seen = {start: None}
    queue = deque([start])
    while queue:
        if len(seen) > budget:
            break
        y, z = queue.popleft()
        for tag in ("y", "z"):
            for lam in lams:
                nxt = (R.add(y, R.mul(lam, z)), z) if tag == "y" else (y, R.add(z, R.mul(lam, y)))
                if nxt in seen:
                    continue
                seen[nxt] = ((y, z), tag, lam)
                if _unimodular_witness(R, J + [nxt[0]]) is not None:
                    path = []
                    cur = nxt
                    while seen[cur] is not None:
                        prev, tg, lm = seen[cur]
                        path.append((tg, lm))
                        cur = prev
                    return path[::-1]
                queue.append(nxt)
    return None


def _path_quotient(R, v, jidx, yi, zi, hint):
    from .quotalg import QuotientByPivot, euclid_to_unit
    if len(jidx) != 1 or hint is None:
        return None
    try:
        K = QuotientByPivot(R, v[jidx[0]], _pl(R.base, hint) if hasattr(R, "base") else hint)
    except (PreconditionError, Undecided, Unsupported):
        return None
    moves = euclid_to_unit(K, K.from_A(v[yi]), K.from_A(v[zi]))
    if moves is None:
        return None
    return [(tag, K.lift_in_ideal(lam)) for tag, lam in moves]


def _quotient_witness(R, v0, y, hint):
    """(k, s) with k v0 + s y == 1, inverting y in A / v0 A = R_a[t] / (v0)."""
    from .ideals import poly_divmod
    from .quotalg import QuotientByPivot
    try:
        K = QuotientByPivot(R, v0, _pl(R.base, hint))
    except (PreconditionError, Undecided, Unsupported):
        return None
    yq = K.from_A(y)
    if not K.is_unit(yq):
        return None
    s = K.lift(K.inverse(yq))
    rest = R.sub(R.one(), R.mul(s, y))
    q, r = poly_divmod(K.Q, tuple(Fraction(c) for c in rest), K.f)
    if any(r) or any(c.denominator != 1 for c in q):
        return None
    k = R._trim([R.base.coerce(int(c)) for c in q])
    if not R.contains_poly(k):
        return None
    return [k, s]


def _path_small(R, v, jidx, yi, zi, ideal):
    J = [v[k] for k in jidx]
    if _unimodular_witness(R, J + [v[yi]]) is not None:
        return []
    for g in ideal.gens:
        for c in (1, -1, 2, -2, 3, -3):
            mu = R.mul(R.from_int(c), g)
            if R.is_zero(mu):
                continue
            y = R.add(v[yi], R.mul(mu, v[zi]))
            if _unimodular_witness(R, J + [y]) is not None:
                return [("y", mu)]
    return None


def scale_coordinate(row, zi, yi, t, ideal, s=None, budget=20000, hint=None):
    """Certificate row -> row with coordinate zi multiplied by t^2.

    t must lie in the ideal and be a unit modulo the coordinates other than
    zi and yi.  A path of moves first makes those coordinates together with
    yi unimodular, the scaling is done there, and the path is undone
    conjugated by diag(1, ..., t^2).
    """
    R = row.ring
    n = row.n
    t = _pl(R, t)
    if n < 3:
        raise PreconditionError("scaling needs rows of length at least 3")
    if not ideal.contains(t):
        raise PreconditionError("t is not in the ideal")
    jidx = [k for k in range(n) if k not in (zi, yi)]
    J = [row.v[k] for k in jidx]
    if s is None:
        s, kcoef = unit_witness(R, t, J)
    else:
        s = _pl(R, s)
        rest = membership_payload(R, J, R.sub(R.one(), R.mul(t, s)))
        if rest is None:
            raise NoUnitWitness("supplied s does not invert t modulo the ideal")
        kcoef = rest
    t2 = R.mul(t, t)
    target = list(row.v)
    target[zi] = R.mul(t2, row.v[zi])
    b = _Builder(R, row.v)
    if t2 == R.one():
        return _finish(row, b.word(), ideal, target)

    path = None
    if R.finite:
        path = _path_finite(R, row.v, jidx, yi, zi, ideal, budget)
    if path is None:
        path = _path_quotient(R, row.v, jidx, yi, zi, hint)
    if path is None:
        path = _path_small(R, row.v, jidx, yi, zi, ideal)
    if path is None:
        raise BudgetExhausted("no path to a row with a unimodular complement")

    history = []
    for tag, lam in path:
        history.append((tag, lam, b.v[yi], b.v[zi]))
        if tag == "y":
            b.add(zi, yi, lam)
        else:
            b.add(yi, zi, lam)

    wit = None
    if len(jidx) == 1 and hint is not None:
        wit = _quotient_witness(R, b.v[jidx[0]], b.v[yi], hint)
    if wit is None:
        wit = _unimodular_witness(R, [b.v[k] for k in jidx] + [b.v[yi]])
    if wit is None:
        raise BudgetExhausted("path did not reach a unimodular complement")
    z = b.v[zi]
    f = R.mul(R.sub(t2, R.one()), z)
    for k, alpha in zip(jidx + [yi], wit):
        lam = R.mul(f, alpha)
        if not ideal.contains(lam):
            raise NotRelative("scaling step leaves the ideal; is the row relative?")
        b.add(k, zi, lam)

    # 1 - s^2 t^2 = (1 - st)(1 + st) = sum g_k J_k
    st = R.mul(s, t)
    g = [R.mul(kc, R.add(R.one(), st)) for kc in kcoef]
    s2 = R.mul(s, s)
    for tag, lam, y_old, z_old in reversed(history):
        if tag == "z":
            b.add(yi, zi, R.neg(R.mul(t2, lam)))
        else:
            b.add(zi, yi, R.neg(R.mul(lam, s2)))
            for k, gk in zip(jidx, g):
                b.add(k, yi, R.neg(R.mul(R.mul(lam, z_old), gk)))
    return _finish(row, b.word(), ideal, target)


def scale_last_by_unit_square(row, t, ideal, s=None, budget=20000, hint=None):
    """(v_1, ..., v_n) -> (v_1, ..., v_{n-1}, t^2 v_n) by a relative word."""
    return scale_coordinate(row, row.n - 1, row.n - 2, t, ideal, s, budget, hint)
