"""Census-level checks of the exactness and bijection lemmas on finite rings."""
from dataclasses import dataclass, field
from itertools import product
from math import gcd

from .errors import HypothesisViolated, Unsupported
from .ideals import IdealHandle
from .orbits import FiniteRingTable, orbit_bfs
from .rings import Excision, IntegersMod, Ring
from .words import Word


class CosetRing(Ring):
    """R / J for a finite ring R; cosets are named by their first element."""

    finite = True

    def __init__(self, base, gens):
        self.base = base
        self.gens = tuple(gens)
        table = FiniteRingTable(base)
        members = table.ideal_members(IdealHandle(base, list(self.gens)))
        self._rep = {}
        for x in table.elements:
            if x in self._rep:
                continue
            k = table.index[x]
            for m in members:
                self._rep[table.elements[table.add[k][m]]] = x
        if self._rep[base.one()] == self._rep[base.zero()]:
            raise Unsupported("quotient by the unit ideal")
        self._elements = sorted(set(self._rep.values()), key=table.index.get)

    def key(self):
        return (self.base.text(), self.gens)

    def text(self):
        gens = ", ".join(self.base.format(g) for g in self.gens)
        return f"{self.base.text()} mod ({gens})"

    def format(self, a):
        return self.base.format(a)

    def from_int(self, n):
        return self._rep[self.base.from_int(n)]

    def normalize(self, a):
        return self._rep[self.base.coerce(a)]

    def add(self, a, b):
        return self._rep[self.base.add(a, b)]

    def neg(self, a):
        return self._rep[self.base.neg(a)]

    def mul(self, a, b):
        return self._rep[self.base.mul(a, b)]

    def is_zero(self, a):
        return a == self.zero()

    def is_unit(self, a):
        return any(self.mul(a, b) == self.one() for b in self._elements)

    def elements(self):
        return list(self._elements)

    def project(self, x):
        return self._rep[x]


def quotient_ring(ring, gens):
    """(R / J, projection) for a finite ring."""
    if isinstance(ring, IntegersMod):
        g = ring.n
        for x in gens:
            g = gcd(g, x)
        if g == 1:
            raise Unsupported("quotient by the unit ideal")
        Q = IntegersMod(g)
        return Q, lambda x: x % g
    Q = CosetRing(ring, gens)
    return Q, Q.project


@dataclass
class LemmaReport:
    name: str
    config: dict
    assertions: list = field(default_factory=list)

    def add(self, claim, ok, evidence=""):
        self.assertions.append({"claim": claim, "status": "verified" if ok else "failed",
                                "evidence": evidence})

    @property
    def ok(self):
        return all(a["status"] == "verified" for a in self.assertions)

    def lines(self):
        out = [f"{self.name}: {self.config}"]
        for a in self.assertions:
            out.append(f"  [{a['status']}] {a['claim']} ({a['evidence']})")
        return out


def _map_row(f, values):
    return tuple(f(x) for x in values)


def _letters_compatible(src, tgt, f, report, label):
    """Every parent letter, pushed along f, moves images the same way."""
    R2 = tgt.ring
    checked = 0
    for k, row in enumerate(src.rows):
        if src.parent[k] is None:
            continue
        p, li = src.parent[k]
        image_p = list(_map_row(f, src.values(src.rows[p])))
        for g in Word(src.ring, src.n, [src.letters[li].letter]).plain():
            image_p[g.j] = R2.add(image_p[g.j], R2.mul(f(g.lam), image_p[g.i]))
        if tuple(image_p) != _map_row(f, src.values(row)):
            report.add(f"{label} respects letters", False, f"row {src.values(row)}")
            return None
        checked += 1
    return checked


def _orbit_map(src, tgt, f):
    """Orbit id map induced by f, or None when some orbit splits."""
    out = {}
    for k, row in enumerate(src.rows):
        o = tgt.orbit_of(_map_row(f, src.values(row)))
        if out.setdefault(src.orbit[k], o) != o:
            return None
    return out


def _ideal_elements(ring, pred):
    return [x for x in ring.elements() if pred(x)]


def _is_hom(R, S, f):
    els = R.elements()
    if f(R.one()) != S.one():
        return False
    for x in els:
        for y in els:
            if f(R.add(x, y)) != S.add(f(x), f(y)) or f(R.mul(x, y)) != S.mul(f(x), f(y)):
                return False
    return True


def _find_section(R, S, q, limit=10 ** 5):
    Rs, Ss = R.elements(), S.elements()
    if len(Rs) ** len(Ss) > limit:
        raise Unsupported("section search space too large; pass a section")
    for images in product(Rs, repeat=len(Ss)):
        table = dict(zip(Ss, images))
        f = table.__getitem__
        if all(q(f(s)) == s for s in Ss) and _is_hom(S, R, f):
            return f
    return None


def _retract_core(report, R, S, q, section, n, outer_length):
    if not _is_hom(R, S, q):
        raise HypothesisViolated("q is not a ring homomorphism")
    if section is None:
        section = _find_section(R, S, q)
        if section is None:
            raise HypothesisViolated("q has no ring-homomorphism section; it is not a retraction")
    elif not (_is_hom(S, R, section) and all(q(section(s)) == s for s in S.elements())):
        raise HypothesisViolated("supplied map is not a section of q")
    kernel = _ideal_elements(R, lambda x: S.is_zero(q(x)))
    I = IdealHandle(R, [x for x in kernel if not R.is_zero(x)] or [R.zero()])
    rel = orbit_bfs(R, n, I, outer_length=outer_length)
    full = orbit_bfs(R, n)
    base = orbit_bfs(S, n)
    report.add("censuses are closed under their letters",
               rel.verify_closure() and full.verify_closure() and base.verify_closure(),
               f"{len(rel.rows)} + {len(full.rows)} + {len(base.rows)} rows")
    alpha = _orbit_map(rel, full, lambda x: x)
    report.add("alpha is well defined on orbits", alpha is not None,
               f"{rel.orbit_count} relative orbits")
    if alpha is not None:
        report.add("alpha is injective", len(set(alpha.values())) == len(alpha),
                   f"{len(alpha)} orbits -> {len(set(alpha.values()))}")
    checked = _letters_compatible(full, base, q, report, "q")
    qstar = _orbit_map(full, base, q)
    report.add("q_* is well defined on orbits", qstar is not None and checked is not None,
               f"{checked} parent letters pushed forward")
    hit = set()
    for row in base.rows:
        lifted = _map_row(section, base.values(row))
        hit.add(full.orbit_of(lifted))
    report.add("q_* is surjective (via the section)",
               qstar is not None and {qstar[o] for o in hit} == set(range(base.orbit_count)),
               f"{base.orbit_count} target orbits")
    if alpha is not None and qstar is not None:
        e1 = base.orbit_of([S.one()] + [S.zero()] * (n - 1))
        kern = {o for o, t in qstar.items() if t == e1}
        report.add("image of alpha equals kernel of q_*", kern == set(alpha.values()),
                   f"{len(kern)} orbits in the kernel")
    return rel, full, base, alpha


def lemma_experiment(name, config):
    """Run one of: retract, exact_seq, IJ, L411.  Returns a LemmaReport."""
    n = config.get("n", 3)
    L = config.get("outer_length", 1)
    if name == "retract":
        R, S, q = config["ring"], config["target"], config["q"]
        report = LemmaReport(name, {"ring": R.text(), "target": S.text(), "n": n})
        _retract_core(report, R, S, q, config.get("section"), n, L)
        return report
    if name == "exact_seq":
        R = config["ring"]
        gens = [R.coerce(g) for g in config["ideal"]]
        E = Excision(R, gens)
        report = LemmaReport(name, {"ring": R.text(), "ideal": [R.format(g) for g in gens], "n": n})
        rel_E, full_E, base, _ = _retract_core(report, E, R, lambda x: x[0], lambda r: (r, R.zero()), n, L)
        I = IdealHandle(R, gens)
        rel = orbit_bfs(R, n, I, outer_length=L)

        def j(values):
            return tuple([(R.one(), R.sub(values[0], R.one()))] + [(R.zero(), x) for x in values[1:]])

        jmap = {}
        fine = True
        for k, row in enumerate(rel.rows):
            image = j(rel.values(row))
            o = full_E.orbit_of(image)
            if jmap.setdefault(rel.orbit[k], o) != o:
                fine = False
        report.add("j rows are unimodular over the excision algebra and well defined", fine,
                   f"{len(rel.rows)} rows mapped")
        report.add("j is injective", fine and len(set(jmap.values())) == len(jmap), f"{len(jmap)} orbits")
        e1 = base.orbit_of([R.one()] + [R.zero()] * (n - 1))
        qstar = _orbit_map(full_E, base, lambda x: x[0])
        kern = {o for o, t in qstar.items() if t == e1} if qstar else set()
        report.add("image of j equals kernel of epsilon_*", kern == set(jmap.values()),
                   f"{len(kern)} orbits in the kernel")
        return report
    if name in ("IJ", "L411"):
        R = config["ring"]
        Ig = [R.coerce(g) for g in config["I"]]
        Jg = [R.coerce(g) for g in config["J"]]
        report = LemmaReport(name, {"ring": R.text(), "I": [R.format(g) for g in Ig],
                                    "J": [R.format(g) for g in Jg], "n": n})
        table = FiniteRingTable(R)
        products = [R.mul(a, b) for a in Ig for b in Jg]
        if name == "IJ":
            if not all(table.is_nilpotent(table.index[x]) for x in products):
                raise HypothesisViolated("IJ is not inside the nilradical")
            return _ij(report, R, Ig, Jg, n, L)
        if not all(R.is_zero(x) for x in products):
            raise HypothesisViolated("IJ is not zero")
        return _l411(report, R, Ig, Jg, n, L)
    raise ValueError(f"unknown experiment {name!r}")


def _ij(report, R, Ig, Jg, n, L):
    Q, f = quotient_ring(R, Jg)
    src = orbit_bfs(R, n, IdealHandle(R, Ig), outer_length=L)
    tgt = orbit_bfs(Q, n, IdealHandle(Q, [f(g) for g in Ig]), outer_length=L)
    checked = _letters_compatible(src, tgt, f, report, "reduction mod J")
    m = _orbit_map(src, tgt, f)
    report.add("natural map is well defined", m is not None and checked is not None,
               f"{checked} parent letters pushed forward")
    images = {_map_row(f, src.values(r)) for r in src.rows}
    report.add("every target row lifts", all(tgt.values(r) in images for r in tgt.rows),
               f"{len(tgt.rows)} target rows")
    report.add("natural map is a bijection on orbits",
               m is not None and sorted(set(m.values())) == list(range(tgt.orbit_count))
               and len(m) == tgt.orbit_count,
               f"{src.orbit_count} <-> {tgt.orbit_count}")
    return report


def _l411(report, R, Ig, Jg, n, L):
    IJ = IdealHandle(R, Ig + Jg)
    left = orbit_bfs(R, n, IJ, outer_length=L)
    QJ, fJ = quotient_ring(R, Jg)
    QI, fI = quotient_ring(R, Ig)
    right1 = orbit_bfs(QJ, n, IdealHandle(QJ, [fJ(g) for g in Ig]), outer_length=L)
    right2 = orbit_bfs(QI, n, IdealHandle(QI, [fI(g) for g in Jg]), outer_length=L)
    c1 = _letters_compatible(left, right1, fJ, report, "reduction mod J")
    c2 = _letters_compatible(left, right2, fI, report, "reduction mod I")
    m1, m2 = _orbit_map(left, right1, fJ), _orbit_map(left, right2, fI)
    ok = None not in (m1, m2, c1, c2)
    report.add("natural map is well defined", ok, f"{c1} + {c2} parent letters pushed forward")
    if ok:
        pairs = {(m1[o], m2[o]) for o in m1}
        report.add("natural map is a bijection on orbits",
                   len(pairs) == len(m1) == right1.orbit_count * right2.orbit_count,
                   f"{left.orbit_count} <-> {right1.orbit_count} x {right2.orbit_count}")
    # the diagonal (1 + i_1 + j_1, i_2 + j_2, ...) on every pair
    rI = orbit_bfs(R, n, IdealHandle(R, Ig), outer_length=L)
    rJ = orbit_bfs(R, n, IdealHandle(R, Jg), outer_length=L)
    good, count = True, 0
    diag_orbits = {}
    for u in rI.rows:
        for w in rJ.rows:
            uv, wv = rI.values(u), rJ.values(w)
            d = [R.sub(R.add(uv[0], wv[0]), R.one())] + [R.add(a, b) for a, b in zip(uv[1:], wv[1:])]
            count += 1
            try:
                o = left.orbit_of(d)
            except Exception:
                good = False
                break
            if right1.orbit_of(_map_row(fJ, d)) != right1.orbit_of(_map_row(fJ, uv)) or \
                    right2.orbit_of(_map_row(fI, d)) != right2.orbit_of(_map_row(fI, wv)):
                good = False
                break
            key = (rI.orbit[rI.row_index[u]], rJ.orbit[rJ.row_index[w]])
            if diag_orbits.setdefault(key, o) != o:
                good = False
                break
    report.add("diagonal rows lie in Um(R, I+J) and map to the pair of classes", good,
               f"{count} pairs")
    return report
