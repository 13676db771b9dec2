"""Elementary words: certificates for E_n(R) and E_n(R, I) equivalence.

Convention: the matrix of e_ij(lam) has lam at (i, j) and the group acts on
rows from the right, v -> v * M, so coordinate j gains lam * v_i.  Indices
are 0-based in code and 1-based in the text form ``E(i,j;lam)``.
"""
from dataclasses import dataclass

from .errors import ParseError, VerificationFailure
from .rings import RingElement


@dataclass(frozen=True)
class Gen:
    i: int
    j: int
    lam: object  # ring payload

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError("elementary generator needs i != j")


@dataclass(frozen=True)
class Conj:
    """outer * inner * outer^-1, a generator of the relative group."""
    outer: tuple
    inner: Gen


def gen(ring, i, j, lam):
    if isinstance(lam, RingElement):
        lam = lam.value
    else:
        lam = ring.coerce(lam)
    return Gen(i, j, lam)


def rel(ring, i, j, lam, outer=()):
    return Conj(tuple(outer), gen(ring, i, j, lam))


class Word:
    """An elementary word over a ring for rows of length n."""

    def __init__(self, ring, n, letters=()):
        self.ring = ring
        self.n = n
        self.letters = tuple(letters)
        for letter in self.letters:
            for g in _gens_of(letter):
                if not (0 <= g.i < n and 0 <= g.j < n):
                    raise ValueError(f"generator index out of range for n={n}")

    def __len__(self):
        return len(self.letters)

    def __add__(self, other):
        if other.ring != self.ring or other.n != self.n:
            raise ValueError("words over different rings or sizes")
        return Word(self.ring, self.n, self.letters + other.letters)

    def __eq__(self, other):
        return isinstance(other, Word) and self.ring == other.ring and self.n == other.n \
            and self.letters == other.letters

    def __hash__(self):
        return hash((self.ring, self.n, self.letters))

    def plain(self):
        """Flattened list of generators in application order."""
        R = self.ring
        out = []
        for letter in self.letters:
            if isinstance(letter, Conj):
                out.extend(letter.outer)
                out.append(letter.inner)
                out.extend(Gen(g.i, g.j, R.neg(g.lam)) for g in reversed(letter.outer))
            else:
                out.append(letter)
        return out

    def inverse(self):
        R = self.ring
        out = []
        for letter in reversed(self.letters):
            if isinstance(letter, Conj):
                g = letter.inner
                out.append(Conj(letter.outer, Gen(g.i, g.j, R.neg(g.lam))))
            else:
                out.append(Gen(letter.i, letter.j, R.neg(letter.lam)))
        return Word(R, self.n, out)

    def act(self, v):
        """Right action on a coordinate payload list."""
        R = self.ring
        v = list(v)
        for g in self.plain():
            v[g.j] = R.add(v[g.j], R.mul(g.lam, v[g.i]))
        return v

    def act_witness(self, w):
        """w -> w * M^{-T}: coordinate i loses lam * w_j."""
        R = self.ring
        w = list(w)
        for g in self.plain():
            w[g.i] = R.sub(w[g.i], R.mul(g.lam, w[g.j]))
        return w

    def matrix(self):
        R = self.ring
        n = self.n
        M = [[R.one() if r == c else R.zero() for c in range(n)] for r in range(n)]
        for g in self.plain():
            # M <- M * e_ij(lam): column j += lam * column i
            for r in range(n):
                M[r][g.j] = R.add(M[r][g.j], R.mul(M[r][g.i], g.lam))
        return M

    def is_relative(self, ideal):
        """Syntactic test: every letter is a conjugated block with inner lam in the ideal."""
        for letter in self.letters:
            if not isinstance(letter, Conj):
                return False
            if not ideal.contains(letter.inner.lam):
                return False
        return True

    def text(self):
        return serialize_word(self)

    def __repr__(self):
        return f"Word({self.text()!r})"


def _gens_of(letter):
    if isinstance(letter, Conj):
        return list(letter.outer) + [letter.inner]
    return [letter]


def _gen_text(ring, g):
    return f"E({g.i + 1},{g.j + 1};{ring.format(g.lam)})"


def serialize_word(word):
    parts = []
    for letter in word.letters:
        if isinstance(letter, Conj):
            outer = "".join(_gen_text(word.ring, g) for g in letter.outer)
            parts.append(f"C[{outer}]{{{_gen_text(word.ring, letter.inner)}}}")
        else:
            parts.append(_gen_text(word.ring, letter))
    return " ".join(parts)


def parse_word(ring, n, text):
    from .grammar import _Parser
    p = _Parser(text)
    letters = []

    def one_gen():
        p.expect("E(")
        i = p.integer()
        p.expect(",")
        j = p.integer()
        p.expect(";")
        lam = p.value(ring)
        p.expect(")")
        if not (1 <= i <= n and 1 <= j <= n) or i == j:
            raise ParseError(f"bad generator indices ({i},{j})", p.pos)
        return Gen(i - 1, j - 1, lam)

    while p.peek():
        if p.accept("C["):
            outer = []
            while not p.accept("]"):
                outer.append(one_gen())
            p.expect("{")
            inner = one_gen()
            p.expect("}")
            letters.append(Conj(tuple(outer), inner))
        else:
            letters.append(one_gen())
    return Word(ring, n, letters)


class EquivalenceCertificate:
    """source * matrix(word) == target, checked exactly."""

    def __init__(self, source, target, word):
        self.source = source
        self.target = target
        self.word = word

    def verify(self, ideal=None):
        R = self.word.ring
        if self.source.ring != R or self.target.ring != R:
            return False
        if list(self.word.act(self.source.v)) != list(self.target.v):
            return False
        if ideal is not None and not self.word.is_relative(ideal):
            return False
        return True

    def check(self, ideal=None):
        if not self.verify(ideal):
            raise VerificationFailure("certificate does not verify")
        return self

    def text(self):
        return f"{self.source.text()} -> {self.target.text()} by {self.word.text()}"
