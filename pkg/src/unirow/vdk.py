"""The van der Kallen product on orbit spaces and the power experiments."""
from collections import deque
from dataclasses import dataclass, field

from .errors import (BudgetExhausted, NotEquivalent, RowAbsent, ShapeMismatch,
                     Undecided, Unsupported)
from .ideals import membership_payload
from .rings import RingElement
from .rows import UnimodularRow, apply_word, make_row, power_row
from .words import Conj, EquivalenceCertificate, Gen, Word

CONFIRMED = "Confirmed"
INCONCLUSIVE = "Inconclusive"
REFUTED = "Refuted"


def _pl(ring, x):
    return x.value if isinstance(x, RingElement) else ring.coerce(x)


@dataclass
class OrbitClassRep:
    row: UnimodularRow
    ideal: object = None

    @property
    def ring(self):
        return self.row.ring


@dataclass
class ExperimentRecord:
    claim: str
    status: str
    certificate: object = None
    notes: list = field(default_factory=list)


def _row_of(x):
    return x.row if isinstance(x, OrbitClassRep) else x


def vdk_product(x, y, p=None):
    """[y][x] for x = (a, a_1, ..., a_d) and y = (b, a_1, ..., a_d).

    Returns (a(b + p) - 1, a_1(b + p), a_2, ..., a_d).  p defaults to the
    first witness coordinate of x, which satisfies a p == 1 modulo the tail.
    """
    xr, yr = _row_of(x), _row_of(y)
    R = xr.ring
    if yr.ring != R or xr.n != yr.n or xr.n < 2:
        raise ShapeMismatch("rows over different rings or of different lengths")
    if xr.v[1:] != yr.v[1:]:
        raise ShapeMismatch("rows do not share their tail")
    a, b = xr.v[0], yr.v[0]
    tail = xr.v[1:]
    if p is None:
        p = xr.w[0]
    else:
        p = _pl(R, p)
        try:
            ok = membership_payload(R, list(tail), R.sub(R.mul(a, p), R.one()))
        except Unsupported as exc:
            raise Undecided(str(exc)) from None
        if ok is None:
            raise ShapeMismatch("a p is not 1 modulo the tail")
    s = R.add(b, p)
    v = [R.sub(R.mul(a, s), R.one()), R.mul(tail[0], s)] + list(tail[1:])
    row = make_row(v, R)
    ideal = x.ideal if isinstance(x, OrbitClassRep) else None
    if ideal is not None:
        row.ideal = ideal
    return OrbitClassRep(row, ideal)


def square_product(y, x, root):
    """[(b, tail)] [(a'^2, tail)] = [(b a'^2, tail)] with an explicit witness."""
    xr, yr = _row_of(x), _row_of(y)
    R = xr.ring
    root = _pl(R, root)
    if xr.v[1:] != yr.v[1:]:
        raise ShapeMismatch("rows do not share their tail")
    if R.mul(root, root) != xr.v[0]:
        raise ShapeMismatch("first coordinate of x is not root^2")
    b = yr.v[0]
    # (b q0 + T)(a'^2 p0 + T') = 1 expands to a witness of (b a'^2, tail)
    q0, p0 = yr.w[0], xr.w[0]
    bq0 = R.mul(b, q0)
    w = [R.mul(q0, p0)] + [R.add(qi, R.mul(bq0, wi)) for qi, wi in zip(yr.w[1:], xr.w[1:])]
    row = UnimodularRow(R, [R.mul(b, xr.v[0])] + list(xr.v[1:]), w)
    return OrbitClassRep(row, getattr(x, "ideal", None))


def _search_letters(ring, n, ideal, small):
    """Letters for bounded search over an arbitrary ring."""
    if ring.finite:
        lams = list(ring.elements())
    else:
        lams = [ring.from_int(c) for c in small]
    lams = [x for x in lams if not ring.is_zero(x)]
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    if ideal is None:
        return [Gen(i, j, x) for i, j in pairs for x in lams]
    lams = [x for x in lams if ideal.contains(x)]
    if not ring.finite:
        lams = lams + [ring.mul(g, ring.from_int(c)) for g in ideal.gens for c in small]
        lams = [x for x in dict.fromkeys(lams) if not ring.is_zero(x)]
    outers = [()] + [(Gen(i, j, ring.one()),) for i, j in pairs] + [(Gen(i, j, ring.neg(ring.one())),) for i, j in pairs]
    return [Conj(o, Gen(i, j, x)) for o in outers for i, j in pairs for x in lams]


def bounded_search(source, goal, ideal=None, budget=20000, small=(1, -1)):
    """BFS from source until goal(row) holds; returns (certificate) or None."""
    R = source.ring
    n = source.n
    letters = _search_letters(R, n, ideal, small)
    start = tuple(source.v)
    seen = {start: None}
    queue = deque([start])
    found = start if goal(start) else None
    while queue and found is None:
        if len(seen) > budget:
            break
        v = queue.popleft()
        for L in letters:
            u = tuple(Word(R, n, [L]).act(v))
            if u in seen:
                continue
            seen[u] = (v, L)
            if goal(u):
                found = u
                break
            queue.append(u)
    if found is None:
        return None
    letters_out = []
    cur = found
    while seen[cur] is not None:
        prev, L = seen[cur]
        letters_out.append(L)
        cur = prev
    word = Word(R, n, letters_out[::-1])
    target = apply_word(source, word)
    return EquivalenceCertificate(source, target, word).check(ideal)


def common_shape(x, y, budget=20000, census=None):
    """Equivalents of x and y sharing the tail, with certificates back to x, y."""
    xr, yr = _row_of(x), _row_of(y)
    ideal = getattr(x, "ideal", None)
    R = xr.ring
    n = xr.n
    if xr.v[1:] == yr.v[1:]:
        empty = Word(R, n)
        return (xr, yr, EquivalenceCertificate(xr, xr, empty), EquivalenceCertificate(yr, yr, empty))
    tail = xr.v[1:]
    if census is not None:
        from .orbits import certificate_path
        k0 = census.orbit_of(yr.v)
        for row in census.rows:
            vals = census.values(row)
            if vals[1:] == tail and census.orbit[census.row_index[row]] == k0:
                c = certificate_path(census, yr.v, vals)
                cert = EquivalenceCertificate(yr, apply_word(yr, c.word), c.word)
                empty = Word(R, n)
                return (xr, cert.target, EquivalenceCertificate(xr, xr, empty), cert)
        raise BudgetExhausted("no row with the tail of x in the orbit of y")
    cert = bounded_search(yr, lambda v: tuple(v[1:]) == tuple(tail), ideal, budget)
    if cert is None:
        raise BudgetExhausted("bounded search found no common shape")
    empty = Word(R, n)
    return (xr, cert.target, EquivalenceCertificate(xr, xr, empty), cert)


def _square_root(ring, a, root):
    if root is not None:
        root = _pl(ring, root)
        return root if ring.mul(root, root) == a else None
    if ring.finite:
        for r in ring.elements():
            if ring.mul(r, r) == a:
                return r
    return None


def _connect(u, w, ideal, budget, census):
    """Certificate u -> w, or None."""
    if tuple(u.v) == tuple(w.v):
        return EquivalenceCertificate(u, u, Word(u.ring, u.n))
    if census is not None:
        from .orbits import certificate_path
        try:
            c = certificate_path(census, u.v, w.v)
        except NotEquivalent:
            return False
        return EquivalenceCertificate(u, apply_word(u, c.word), c.word)
    return bounded_search(u, lambda v: tuple(v) == tuple(w.v), ideal, budget)


def kfold_product(x, k, budget=20000, census=None):
    """[x]^k by repeated products, each after moving to a common shape."""
    xr = _row_of(x)
    ideal = getattr(x, "ideal", None)
    acc = xr
    for _ in range(k - 1):
        a, b, _, _ = common_shape(OrbitClassRep(xr, ideal), OrbitClassRep(acc, ideal), budget, census)
        acc = vdk_product(OrbitClassRep(a, ideal), OrbitClassRep(b, ideal)).row
    return acc


def goodness_experiment(x, k, budget=20000, root=None, census=None):
    """Test [x^(k)] == [x]^k.

    Confirmed comes with a certificate.  Refuted is only returned when an
    exhaustive census separates the two rows.
    """
    xr = _row_of(x)
    ideal = getattr(x, "ideal", None)
    R = xr.ring
    claim = f"[v^({k})] = [v]^{k} for v = {xr.text()}"
    pk = power_row(xr, k)
    if k == 1:
        return ExperimentRecord(claim, CONFIRMED, EquivalenceCertificate(pk, pk, Word(R, xr.n)))
    r = _square_root(R, xr.v[0], root)
    if r is not None:
        # repeated square products give (a^k, tail) on the nose
        acc = xr
        for _ in range(k - 1):
            acc = square_product(acc, xr, r).row
        if tuple(acc.v) == tuple(pk.v):
            return ExperimentRecord(claim, CONFIRMED, EquivalenceCertificate(pk, pk, Word(R, xr.n)),
                                    ["square route"])
    try:
        prod = kfold_product(x, k, budget, census)
    except BudgetExhausted as exc:
        return ExperimentRecord(claim, INCONCLUSIVE, None, [str(exc)])
    try:
        cert = _connect(pk, prod, ideal, budget, census)
    except RowAbsent as exc:
        return ExperimentRecord(claim, INCONCLUSIVE, None, [str(exc)])
    if cert is False:
        return ExperimentRecord(claim, REFUTED, None, ["different orbits in an exhaustive census"])
    if cert is None:
        return ExperimentRecord(claim, INCONCLUSIVE, None, ["bounded search budget exhausted"])
    return ExperimentRecord(claim, CONFIRMED, cert)


def group_law_check(ring, n=3, census=None):
    """Exhaustive comparison of the product with the square shortcut.

    For every pair x = (r^2, tail), y = (b, tail) of rows in the census the
    product [y][x] and (b r^2, tail) must be unimodular with checked
    witnesses and joined by a certificate.  Returns (pairs, failures).
    """
    from .orbits import certificate_path, orbit_bfs
    from .rows import dot
    census = census or orbit_bfs(ring, n)
    R = census.ring
    rows = [census.values(r) for r in census.rows]
    by_tail = {}
    for v in rows:
        by_tail.setdefault(tuple(v[1:]), []).append(v)
    roots = {}
    for r in R.elements():
        roots.setdefault(R.mul(r, r), r)
    pairs, failures = 0, []
    for tail, group in sorted(by_tail.items(), key=lambda kv: census.lookup(kv[1][0])):
        for xv in group:
            if xv[0] not in roots:
                continue
            x = make_row(xv, R)
            for yv in group:
                y = make_row(yv, R)
                pairs += 1
                p1 = vdk_product(x, y).row
                p2 = square_product(y, x, roots[xv[0]]).row
                ok = dot(R, p1.v, p1.w) == R.one() and dot(R, p2.v, p2.w) == R.one()
                if ok:
                    try:
                        cert = certificate_path(census, p1.v, p2.v)
                        ok = cert.verify()
                    except NotEquivalent:
                        ok = False
                if not ok:
                    failures.append((tuple(xv), tuple(yv)))
    return pairs, failures
