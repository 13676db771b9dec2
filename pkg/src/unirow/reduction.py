"""Degree reduction of relative unimodular rows over graded A inside R[t].

The row lives in Um_{d+1}(A, aA) with a in I_1, so a t lies in A and
inverting a turns A into R_a[t].  Every step is an aA-relative word; the
trace keeps each word with the row it produces so the whole run can be
re-checked offline.
"""
import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .errors import (BudgetExhausted, NoMonicFound, PreconditionError,
                     SaturationUndecided, Undecided, Unsupported, VerificationFailure)
from .graded import Graded
from .ideals import IdealHandle, membership_payload, poly_divmod
from .intlin import hermite_columns
from .quotalg import prime_factors, strip_primes
from .rings import Integers, IntegersMod, Poly, Rationals, RingElement
from .rowops import _Builder, _finish, scale_coordinate
from .rows import UnimodularRow
from .words import Word


def _pl(ring, x):
    return x.value if isinstance(x, RingElement) else ring.coerce(x)


@dataclass
class TraceStep:
    name: str
    word: Word
    row: UnimodularRow
    post: dict = field(default_factory=dict)


@dataclass
class ReductionTrace:
    initial: UnimodularRow
    a: object
    steps: list = field(default_factory=list)
    flags: list = field(default_factory=list)

    @property
    def final(self):
        return self.steps[-1].row if self.steps else self.initial

    def add(self, name, cert, **post):
        self.steps.append(TraceStep(name, cert.word, cert.target, post))
        return cert.target

    def word(self):
        R = self.initial.ring
        w = Word(R, self.initial.n)
        for s in self.steps:
            w = w + s.word
        return w

    def verify(self):
        """Re-multiply every step, check relative syntax and the recorded postconditions."""
        A = self.initial.ring
        ideal = IdealHandle(A, [A.coerce(self.a)])
        cur = self.initial
        for s in self.steps:
            if list(s.word.act(cur.v)) != list(s.row.v):
                return False
            if not s.word.is_relative(ideal):
                return False
            if not _check_post(A, self.a, s.row, s.post):
                return False
            cur = s.row
        return True


def _check_post(A, a, row, post):
    for key, val in post.items():
        if key.startswith("amonic_"):
            k = int(key.split("_")[1])
            if a_exponent(A, row.v[k], a) != val:
                return False
        elif key.startswith("deg_"):
            k = int(key.split("_")[1])
            if A.degree(row.v[k]) != val:
                return False
        elif key == "tail_deg_max":
            if max(A.degree(x) for x in row.v[2:]) != val:
                return False
    return True


# a-monic polynomials

def _power_exponent(base, c, a):
    """n with c == a^n, or None."""
    one = base.one()
    p, n = one, 0
    for _ in range(512):
        if p == c:
            return n
        p = base.mul(p, a)
        n += 1
        if p == one or base.is_zero(p):
            break
    return None


def a_exponent(A, f, a):
    """n with l(f) == a^n, or None when f is not a-monic."""
    if A.is_zero(f):
        return None
    return _power_exponent(A.base, A.leading(f), _pl(A.base, a))


def is_a_monic(A, f, a):
    return a_exponent(A, f, a) is not None


def _ideal(A, a):
    return IdealHandle(A, [A.coerce(a)])


def _at(A, a):
    return A.monomial(A.base.coerce(a), 1)


def _check_setting(row, a):
    A = row.ring
    if not isinstance(A, (Graded, Poly)):
        raise PreconditionError("rows must live over a graded algebra or a polynomial ring")
    a = _pl(A.base, a)
    if A.base.is_zero(a):
        raise PreconditionError("a must be nonzero")
    try:
        A.normalize(A.monomial(a, 1))
    except Exception:
        raise PreconditionError("a is not in I_1, so a t is not in A") from None
    if not row.is_relative(_ideal(A, a)):
        raise PreconditionError("row is not congruent to e_1 modulo aA")
    return A, a


def make_a_monic(row, a, budget=2000, trace=None):
    """Make the first coordinate a-monic by adding a (a t)^m h, h a-monic in the tail ideal."""
    A, a = _check_setting(row, a)
    trace = trace or ReductionTrace(row, a)
    if is_a_monic(A, row.v[0], a):
        return trace
    ideal = _ideal(A, a)
    d = row.n - 1
    cands = [A.zero(), A.coerce(a), A.neg(A.coerce(a)), A.mul(A.coerce(a), _at(A, a)),
             A.neg(A.mul(A.coerce(a), _at(A, a)))]
    tried = 0
    for cs in product(cands, repeat=d):
        tried += 1
        if tried > budget:
            break
        w = [A.add(row.v[k + 1], A.mul(cs[k], row.v[0])) for k in range(d)]
        found = _small_a_monic_combination(A, w, a)
        if found is None:
            continue
        h, beta = found
        b = _Builder(A, row.v)
        for k in range(d):
            b.add(0, k + 1, cs[k])
        m = A.degree(row.v[0]) + 1
        lam = A.mul(A.coerce(a), A.pow(_at(A, a), m))
        for k in range(d):
            b.add(k + 1, 0, A.mul(lam, beta[k]))
        cert = _finish(row, b.word(), ideal)
        n0 = a_exponent(A, cert.target.v[0], a)
        if n0 is None:
            raise VerificationFailure("first coordinate did not become a-monic")
        trace.add("make_a_monic", cert, amonic_0=n0)
        return trace
    raise BudgetExhausted("make_a_monic: no c_i in aA with an a-monic element in the tail ideal")


def _small_a_monic_combination(A, w, a):
    """An a-monic h = sum beta_k w_k among small combinations."""
    d = len(w)
    one = A.one()
    coeffs = [A.zero(), one, A.neg(one)]
    for beta in product(coeffs, repeat=d):
        if all(A.is_zero(x) for x in beta):
            continue
        h = A.zero()
        for bk, wk in zip(beta, w):
            h = A.add(h, A.mul(bk, wk))
        if is_a_monic(A, h, a):
            return h, list(beta)
    return None


# a-monic elements of a polynomial ideal, via a Hermite form over Z

def _to_frac(p):
    return tuple(Fraction(int(c)) for c in p)


def _scale_into_A(A, a, polys):
    """Least E with a^E * p in A for every rational polynomial p."""
    for E in range(0, 256):
        ok = True
        out = []
        f = Fraction(int(a)) ** E
        for p in polys:
            q = [c * f for c in p]
            if any(c.denominator != 1 for c in q):
                ok = False
                break
            q = A._trim([A.base.coerce(int(c)) for c in q])
            if not A.contains_poly(q):
                ok = False
                break
            out.append(q)
        if ok:
            return E, out
    raise NoMonicFound("could not clear denominators into A")


def find_a_monic(A, a, pivot, others, max_degree):
    """a-monic u = beta_0 pivot + sum beta_k others_k with deg u <= max_degree.

    pivot must be a-monic.  Returns (u, [beta_0, beta_1, ...]) over A.
    """
    if not isinstance(A.base, Integers):
        raise NoMonicFound("lattice search needs an integer base")
    a = int(a)
    primes = prime_factors(a)
    if A.degree(pivot) <= max_degree:
        return pivot, [A.one()] + [A.zero()] * len(others)
    Q = Poly(Rationals())
    f = _to_frac(pivot)
    n0 = len(f) - 1
    cols, src = [], []
    for k, g in enumerate(others):
        gq = _to_frac(g)
        for e in range(n0):
            num = Q.shift(gq, e)
            quo, rem = poly_divmod(Q, num, f)
            cols.append(list(rem) + [Fraction(0)] * (n0 - len(rem)))
            src.append((k, e, quo))
    if not cols:
        raise NoMonicFound("no other coordinates")
    den = 1
    for c in cols:
        for x in c:
            den = den * x.denominator // _gcd(den, x.denominator)
    # rows ordered by degree, highest first
    icol = [[int(c[n0 - 1 - r] * den) for r in range(n0)] for c in cols]
    H, U, pivots = hermite_columns(icol, n0)
    best = None
    for r, c in pivots:
        deg = n0 - 1 - r
        if deg > max_degree:
            continue
        if strip_primes(H[c][r], primes) != 1:
            continue
        if best is None or deg > best[0]:
            best = (deg, c)
    if best is None:
        raise NoMonicFound(f"no a-monic element of degree <= {max_degree} in the ideal")
    _, c = best
    betas = [() for _ in others]
    beta0 = ()
    for k_idx, coef in enumerate(U[c]):
        if coef == 0:
            continue
        k, e, quo = src[k_idx]
        term = Q.monomial(Fraction(coef, den), e)
        betas[k] = Q.add(betas[k], term)
        beta0 = Q.sub(beta0, Q.scale(Fraction(coef, den), quo))
    u = Q.mul(beta0, f)
    for bk, g in zip(betas, others):
        u = Q.add(u, Q.mul(bk, _to_frac(g)))
    E, lifted = _scale_into_A(A, a, [u, beta0] + betas)
    u_A, beta_A = lifted[0], lifted[1:]
    # make the leading coefficient an exact power of a
    lead = A.leading(u_A)
    sign = -1 if lead < 0 else 1
    lead = abs(lead)
    n = 0
    while (a ** n) % lead:
        n += 1
        if n > 512:
            raise NoMonicFound("leading coefficient is not a unit after inverting a")
    c_fix = sign * (a ** n // lead)
    u_A = A.scale(c_fix, u_A)
    beta_A = [A.scale(c_fix, b) for b in beta_A]
    check = A.mul(beta_A[0], pivot)
    for bk, g in zip(beta_A[1:], others):
        check = A.add(check, A.mul(bk, g))
    if check != u_A or not is_a_monic(A, u_A, a):
        raise VerificationFailure("a-monic combination does not check")
    return u_A, beta_A


def _gcd(x, y):
    while y:
        x, y = y, x % y
    return abs(x)


# the reduction steps

def _saturates(A, a, polys, max_exp=64):
    """True when the coefficients of polys generate the unit ideal of R_a."""
    base = A.base
    coeffs = [c for p in polys for c in p if not base.is_zero(c)]
    if not coeffs:
        return False
    if isinstance(base, Integers):
        g = 0
        for c in coeffs:
            g = _gcd(g, c)
        return strip_primes(g, prime_factors(a)) == 1
    p = base.one()
    for _ in range(max_exp + 1):
        try:
            if membership_payload(base, coeffs, p) is not None:
                return True
        except (Undecided, Unsupported):
            raise SaturationUndecided("membership of a power of a is undecided") from None
        p = base.mul(p, base.coerce(a))
    raise SaturationUndecided(f"no power a^k with k <= {max_exp} in the coefficient ideal")


def _reduce_by(trace, row, target, by, others_idx, a, ideal, u, beta, budget):
    """Lower deg row[target] below deg u by scaling and subtracting multiples of u.

    u = sum beta_k row[others_idx[k]] is a-monic; each pass scales the
    target coordinate by a^{2 M0} and cancels its leading term.
    """
    A = row.ring
    M = a_exponent(A, u, a)
    e = A.degree(u)
    passes = 0
    while A.degree(row.v[target]) >= e:
        passes += 1
        if passes > budget:
            raise BudgetExhausted("degree reduction did not terminate within budget")
        D = A.degree(row.v[target])
        lead = A.leading(row.v[target])
        M0 = (M + D - e) // 2 + 1
        t = A.pow(A.coerce(a), M0)
        yi = by
        cert = scale_coordinate(row, target, yi, t, ideal, hint=a)
        row = trace.add(f"scale v{target}", cert)
        k = 2 * M0 - M - D + e
        c = A.mul(A.mul(A.pow(A.coerce(a), k), A.coerce(lead)), A.pow(_at(A, a), D - e))
        b = _Builder(A, row.v)
        for idx, bk in zip(others_idx, beta):
            b.add(idx, target, A.neg(A.mul(c, bk)))
        cert = _finish(row, b.word(), ideal)
        if A.degree(cert.target.v[target]) >= D:
            raise VerificationFailure("leading term did not cancel")
        row = trace.add(f"reduce v{target}", cert, **{f"deg_{target}": A.degree(cert.target.v[target])})
    return row


def rt0_reduce(row, a, budget=200, trace=None, max_exp=64):
    """One pass: v1 a-monic of degree <= m, tail degrees <= m - 1."""
    A, a = _check_setting(row, a)
    trace = trace or ReductionTrace(row, a)
    if not is_a_monic(A, row.v[0], a):
        raise PreconditionError("first coordinate is not a-monic")
    if row.n < 3:
        raise PreconditionError("rows must have length at least 3")
    ideal = _ideal(A, a)
    tail = list(row.v[2:])
    if not _saturates(A, a, tail, max_exp):
        raise SaturationUndecided("tail coefficients do not generate the unit ideal after inverting a")
    m = max(A.degree(x) for x in tail)
    others_idx = [0] + list(range(2, row.n))
    u, beta = find_a_monic(A, a, row.v[0], tail, m)
    row = _reduce_by(trace, row, 1, 2, others_idx, a, ideal, u, beta, budget)
    # v1 += a u (or a (a t) u when u is constant) makes v1 a-monic
    mult = A.coerce(a) if A.degree(u) > 0 else A.mul(A.coerce(a), _at(A, a))
    b = _Builder(A, row.v)
    for idx, bk in zip(others_idx, beta):
        b.add(idx, 1, A.mul(mult, bk))
    cert = _finish(row, b.word(), ideal)
    n1 = a_exponent(A, cert.target.v[1], a)
    if n1 is None:
        raise VerificationFailure("v1 did not become a-monic")
    row = trace.add("monic v1", cert, amonic_1=n1, deg_1=A.degree(cert.target.v[1]))
    # tail degrees below deg v1 <= m, using v1 itself
    for j in range(2, row.n):
        row = _reduce_by(trace, row, j, 1, [1], a, ideal, row.v[1], [A.one()], budget)
    return trace


def _norm_relation(A, a, v0, v1):
    """x in R with x = g v0 + h v1, g, h in A; x is a^E times the norm of v1 mod v0."""
    from .quotalg import QuotientByPivot
    K = QuotientByPivot(A, v0, a)
    y = K.from_A(v1)
    N = K.norm(y)
    if N == 0:
        raise SaturationUndecided("v1 is a zero divisor modulo v0")
    inv = K.inverse(y)
    Q = K.Q
    h = Q._trim(tuple(N * c for c in inv))
    rest = Q.sub((Fraction(N),), Q.mul(h, _to_frac(v1)))
    g, r = poly_divmod(Q, rest, K.f)
    if any(r):
        raise VerificationFailure("norm relation does not divide")
    E, (gA, hA) = _scale_into_A(A, a, [g, h])
    x = N * Fraction(int(a)) ** E
    if x.denominator != 1:
        E2, (gA, hA) = _scale_into_A(A, a, [Q.scale(Fraction(x.denominator), g), Q.scale(Fraction(x.denominator), h)])
        x = x * x.denominator * Fraction(int(a)) ** E2
    return int(x), gA, hA


def _presaturate(trace, row, a, ideal, budget):
    """Add a x a^m b(t) to v2 so the tail coefficients generate R_a.

    x = g v0 + h v1 lies in R; any odd prime dividing x and every tail
    coefficient would make the row non-unimodular, so a small b(t) works.
    """
    A = row.ring
    if not isinstance(A.base, Integers):
        raise SaturationUndecided("tail saturation search needs an integer base")
    primes = prime_factors(a)
    x, gA, hA = _norm_relation(A, a, row.v[0], row.v[1])
    m = max(1, max(A.degree(v) for v in row.v[2:]))
    j = 2
    c = list(row.v[j]) + [0] * (m + 1 - len(row.v[j]))
    K = a ** (m + 1) * x
    content = 0
    for v in row.v[3:]:
        for y in v:
            content = _gcd(content, y)
    found = None
    tried = 0
    for b1 in (0, 1, -1, 2, -2):
        for b0 in sorted(range(-budget, budget + 1), key=abs):
            tried += 1
            bfull = [b0, b1] + [0] * (m - 1)
            gg = content
            for ci, bi in zip(c, bfull):
                gg = _gcd(gg, ci + K * bi)
            if gg and strip_primes(gg, primes) == 1:
                found = bfull
                break
        if found:
            break
    if found is None:
        raise BudgetExhausted("no b(t) makes the tail coefficients generate R_a")
    # a x a^m b(t) = a^{m+1} b(t) (g v0 + h v1); a^m b(t) lies in A
    am_b = A._trim([a ** m * y for y in found])
    A.normalize(am_b)
    lam = A.mul(A.coerce(a), am_b)
    b = _Builder(A, row.v)
    b.add(0, j, A.mul(lam, gA))
    b.add(1, j, A.mul(lam, hA))
    cert = _finish(row, b.word(), ideal)
    return trace.add("saturate tail", cert)


def height_step(row, a, trace=None):
    """Make the last coordinate avoid every minimal prime of the base ring.

    Only runs when the base ring is Z or Z/n, where minimal primes are
    explicit.  The nilpotent correction a y w_d p_d is not replayed; when it
    is nonzero the trace carries a flag and keeps the term.
    """
    A = row.ring
    base = A.base if hasattr(A, "base") and not isinstance(A, (Integers, IntegersMod)) else A
    trace = trace or ReductionTrace(row, a)
    ideal = _ideal(A, a)
    a = _pl(base, a)
    wd = row.v[-1]
    w = A.coeff(wd, 0) if A is not base else wd
    if A is not base and A.degree(wd) > 0:
        raise PreconditionError("last coordinate is not a constant")
    if isinstance(base, Integers):
        minimal = [0]
        ys = [0, 1, -1]
        nil = lambda x: x == 0  # noqa: E731
    elif isinstance(base, IntegersMod):
        minimal = prime_factors(base.n)
        ys = base.elements()
        rad = 1
        for p in minimal:
            rad *= p
        nil = lambda x: x % rad == 0  # noqa: E731
    else:
        trace.flags.append("height step skipped: minimal primes not computable")
        return trace

    def avoids(x):
        if isinstance(base, Integers):
            return x != 0
        return all(x % p for p in minimal)

    y = None
    for cand in ys:
        if not nil(base.mul(cand, w)):
            continue
        if avoids(base.add(w, base.mul(a, cand))):
            y = cand
            break
    if y is None:
        raise BudgetExhausted("no y in (rad 0 : w_d) moves w_d off the minimal primes")
    trace.flags.append(f"minimal primes {minimal}; y = {y}")
    if base.is_zero(y):
        trace.flags.append("height condition already holds")
        return trace
    # a y (1 - w_d p_d) = sum_{k<d} a y p_k v_k
    ay = A.coerce(base.mul(a, y)) if A is not base else base.mul(a, y)
    b = _Builder(A, row.v)
    for k in range(row.n - 1):
        b.add(k, row.n - 1, A.mul(ay, row.w[k]))
    cert = _finish(row, b.word(), ideal)
    out = trace.add("height", cert)
    nilterm = A.mul(A.mul(ay, wd), row.w[-1])
    if not A.is_zero(nilterm):
        trace.flags.append("nil correction a y w_d p_d not replayed")
    trace.flags.append("height flag set")
    del out
    return trace


def roitman_machine(row, a, budget=200, max_iterations=64, height=True):
    """Iterate RT0 until v1 is linear a-monic and the tail is constant in aR."""
    A, a = _check_setting(row, a)
    trace = ReductionTrace(row, a)
    if not is_a_monic(A, row.v[0], a):
        make_a_monic(row, a, trace=trace)
    ideal = _ideal(A, a)
    measures = []
    for _ in range(max_iterations):
        cur = trace.final
        m = max(A.degree(x) for x in cur.v[2:])
        measures.append(m)
        if m < 1 and A.degree(cur.v[1]) == 1 and is_a_monic(A, cur.v[1], a):
            break
        if not _saturates(A, a, cur.v[2:]):
            _presaturate(trace, cur, a, ideal, budget)
        rt0_reduce(trace.final, a, budget, trace)
        new = max(A.degree(x) for x in trace.final.v[2:])
        if m >= 1 and not new < m:
            raise VerificationFailure("tail degree did not drop")
        if m < 1:
            measures.append(new)
            break
    else:
        raise BudgetExhausted("machine did not reach the final shape")
    trace.flags.append(f"tail degree measures {measures}")
    if height and isinstance(A.base, (Integers, IntegersMod)):
        height_step(trace.final, a, trace)
    elif height:
        trace.flags.append("height step skipped: minimal primes not computable")
    return trace


def final_shape_ok(row, a):
    """Linear a-monic second coordinate and a constant tail in aR."""
    A = row.ring
    a = _pl(A.base, a)
    if A.degree(row.v[1]) != 1 or not is_a_monic(A, row.v[1], a):
        return False
    for x in row.v[2:]:
        if A.degree(x) > 0:
            return False
        c = A.coeff(x, 0)
        if membership_payload(A.base, [a], c) is None:
            return False
    return is_a_monic(A, row.v[0], a)


def random_instance(A, a, rng, letters=3, max_deg=2):
    """A relative row (v0, v1, v2) with v0 a-monic of degree 1 or 2.

    Starts from (1 + a h, -a h, 0) with witness (1, 1, 0) and applies random
    aA-letters that leave v0 alone.
    """
    a = _pl(A.base, a)
    at = _at(A, a)
    k = rng.randint(1, max_deg)
    h = A.mul(A.pow(A.coerce(a), rng.randint(0, 1)), A.pow(at, k))
    for i in range(k):
        h = A.add(h, A.mul(A.coerce(rng.randint(-3, 3)), A.pow(at, i)))
    ah = A.mul(A.coerce(a), h)
    row = UnimodularRow(A, [A.add(A.one(), ah), A.neg(ah), A.zero()], [A.one(), A.one(), A.zero()])
    ideal = _ideal(A, a)
    b = _Builder(A, row.v)
    moves = [(1, 2), (0, 2), (2, 1), (0, 1)]
    while len(b.letters) < letters:
        i, j = rng.choice(moves)
        lam = A.coerce(a)
        lam = A.mul(lam, A.add(A.coerce(rng.choice([-2, -1, 1, 2])),
                               A.mul(A.coerce(rng.randint(-1, 1)), at)))
        b.add(i, j, lam)
    cert = _finish(row, b.word(), ideal)
    return cert.target


# trace files

TRACE_VERSION = 1


def _values_text(ring, values):
    return "; ".join(ring.format(x) for x in values)


def _parse_values(ring, text):
    from .grammar import parse_element
    return [parse_element(ring, x).value for x in text.split("; ")]


def trace_text(trace, extra=None):
    """Line records: a json header, the initial row, one line per step, flags."""
    from .grammar import format_descriptor
    A = trace.initial.ring
    header = {"version": TRACE_VERSION, "ring": format_descriptor(A), "n": trace.initial.n,
              "a": A.base.format(_pl(A.base, trace.a)), "steps": len(trace.steps)}
    header.update(extra or {})
    lines = ["# trace " + json.dumps(header, sort_keys=True)]
    lines.append(f"initial | {_values_text(A, trace.initial.v)} | {_values_text(A, trace.initial.w)}")
    for s in trace.steps:
        post = json.dumps(s.post, sort_keys=True)
        lines.append(f"step | {s.name} | {_values_text(A, s.row.v)} | {_values_text(A, s.row.w)}"
                     f" | {post} | {s.word.text()}")
    for f in trace.flags:
        lines.append(f"flag | {f}")
    return "\n".join(lines) + "\n"


def parse_trace(text):
    from .grammar import parse_descriptor, parse_element
    from .words import parse_word
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# trace "):
        raise VerificationFailure("missing trace header")
    header = json.loads(lines[0][len("# trace "):])
    if header.get("version") != TRACE_VERSION:
        raise VerificationFailure("unknown trace version")
    A = parse_descriptor(header["ring"])
    n = header["n"]
    a = parse_element(A.base, header["a"]).value
    trace = None
    for line in lines[1:]:
        fields = line.split(" | ")
        kind = fields[0]
        if kind == "initial":
            row = UnimodularRow(A, _parse_values(A, fields[1]), _parse_values(A, fields[2]))
            trace = ReductionTrace(row, a)
        elif kind == "step":
            if trace is None or len(fields) != 6:
                raise VerificationFailure(f"malformed step record: {line!r}")
            row = UnimodularRow(A, _parse_values(A, fields[2]), _parse_values(A, fields[3]))
            word = parse_word(A, n, fields[5]) if fields[5] else Word(A, n)
            trace.steps.append(TraceStep(fields[1], word, row, json.loads(fields[4])))
        elif kind == "flag":
            trace.flags.append(" | ".join(fields[1:]))
        else:
            raise VerificationFailure(f"unknown record kind {kind!r}")
    if trace is None or len(trace.steps) != header["steps"]:
        raise VerificationFailure("step count does not match header")
    return trace, header
