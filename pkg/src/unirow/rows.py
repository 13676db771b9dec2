"""Unimodular rows carrying an explicit witness."""
from math import comb

from .errors import NotRelative, NotUnimodular, WitnessMismatch
from .ideals import membership_payload
from .rings import RingElement
from .words import EquivalenceCertificate, Word


def _pl(ring, x):
    return x.value if isinstance(x, RingElement) else ring.coerce(x)


class UnimodularRow:
    """Row v with witness w, sum v_i w_i == 1, optionally v == e_1 mod an ideal."""

    def __init__(self, ring, v, w, ideal=None, check=True):
        self.ring = ring
        self.v = tuple(_pl(ring, x) for x in v)
        self.w = tuple(_pl(ring, x) for x in w)
        self.ideal = ideal
        if len(self.v) != len(self.w):
            raise WitnessMismatch("row and witness lengths differ")
        if len(self.v) < 1:
            raise ValueError("empty row")
        if check and dot(ring, self.v, self.w) != ring.one():
            raise WitnessMismatch("witness does not pair to 1")

    @property
    def n(self):
        return len(self.v)

    def __eq__(self, other):
        return isinstance(other, UnimodularRow) and self.ring == other.ring and self.v == other.v

    def __hash__(self):
        return hash((self.ring, self.v))

    def coords(self):
        return [RingElement(self.ring, x) for x in self.v]

    def witness(self):
        return [RingElement(self.ring, x) for x in self.w]

    def text(self):
        f = self.ring.format
        return "[" + ", ".join(f(x) for x in self.v) + " | " + ", ".join(f(x) for x in self.w) + "]"

    def __repr__(self):
        return f"UnimodularRow({self.text()})"

    def is_relative(self, ideal=None):
        ideal = ideal or self.ideal
        if ideal is None:
            return True
        R = self.ring
        if not ideal.contains(R.sub(self.v[0], R.one())):
            return False
        return all(ideal.contains(x) for x in self.v[1:])


def dot(ring, v, w):
    acc = ring.zero()
    for x, y in zip(v, w):
        acc = ring.add(acc, ring.mul(x, y))
    return acc


def make_row(v, ring, relative=None, cap=None):
    """Build a row, solving for a witness of 1 in the ideal of its coordinates."""
    v = [_pl(ring, x) for x in v]
    w = membership_payload(ring, v, ring.one(), cap)
    if w is None:
        raise NotUnimodular(f"coordinates do not generate the unit ideal of {ring}")
    row = UnimodularRow(ring, v, w)
    if relative is not None:
        if not row.is_relative(relative):
            raise NotRelative("row is not congruent to e_1 modulo the ideal")
        row.ideal = relative
    return row


def e1(ring, n, ideal=None):
    v = [ring.one()] + [ring.zero()] * (n - 1)
    return UnimodularRow(ring, v, v, ideal)


def apply_word(row, word):
    if word.ring != row.ring or word.n != row.n:
        raise ValueError("word and row do not match")
    v = word.act(row.v)
    w = word.act_witness(row.w)
    return UnimodularRow(row.ring, v, w, row.ideal, check=False)


def certify(row, word):
    """Apply a word and package the result as a checked certificate."""
    target = apply_word(row, word)
    return EquivalenceCertificate(row, target, word)


def power_row(row, k):
    """(v_1^k, v_2, ..., v_n) with a witness from the binomial expansion."""
    if k < 1:
        raise ValueError("k must be positive")
    R = row.ring
    if k == 1:
        return UnimodularRow(R, row.v, row.w, row.ideal)
    v1, w1 = row.v[0], row.w[0]
    p = R.mul(v1, w1)
    r = R.sub(R.one(), p)  # sum over i >= 2 of v_i w_i
    # 1 = (p + r)^k = (v1 w1)^k + r * S
    S = R.zero()
    for j in range(k):
        term = R.mul(R.from_int(comb(k, j)), R.mul(R.pow(p, j), R.pow(r, k - j - 1)))
        S = R.add(S, term)
    v = (R.pow(v1, k),) + row.v[1:]
    w = (R.pow(w1, k),) + tuple(R.mul(x, S) for x in row.w[1:])
    return UnimodularRow(R, v, w, row.ideal)


def parse_row(ring, text, ideal=None):
    from .grammar import _Parser
    p = _Parser(text)
    p.expect("[")
    v, w = [], []
    v.append(p.value(ring))
    while p.accept(","):
        v.append(p.value(ring))
    p.expect("|")
    w.append(p.value(ring))
    while p.accept(","):
        w.append(p.value(ring))
    p.expect("]")
    p.end()
    return UnimodularRow(ring, v, w, ideal)


def empty_word(row):
    return Word(row.ring, row.n)
