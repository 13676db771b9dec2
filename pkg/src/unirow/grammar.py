"""Text grammar for ring descriptors and elements.

Descriptors::

    Z | Q | Z/n | poly(D;var) | graded(D; c@d, ...) | excision(D; g, ...)
    | quotient(D; m)

Elements of polynomial-like rings are sparse coefficient lists
``[c0, c1@1, c4@4]``; excision pairs are ``(r, i)``.  Printing is
canonical, so print(parse(s)) == s for every printed s.
"""
from fractions import Fraction

from .errors import InvalidDescriptor, ParseError
from .rings import (Excision, Integers, IntegersMod, Poly, Quotient, Rationals,
                    RingElement, _PolyLike)


def format_value(ring, v):
    from .graded import Graded
    if isinstance(ring, (Integers, IntegersMod)):
        return str(v)
    if isinstance(ring, Rationals):
        return str(v)
    if isinstance(ring, Quotient) and ring.kind == "int":
        return str(v)
    if isinstance(ring, Excision):
        return f"({format_value(ring.base, v[0])}, {format_value(ring.base, v[1])})"
    if isinstance(ring, (_PolyLike, Graded)):
        parts = []
        for i, c in enumerate(v):
            if ring.base.is_zero(c):
                continue
            s = format_value(ring.base, c)
            parts.append(s if i == 0 else f"{s}@{i}")
        return "[" + ", ".join(parts) + "]"
    raise TypeError(f"cannot format values of {ring!r}")



class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def error(self, msg, pos=None):
        raise ParseError(msg, self.pos if pos is None else pos)

    def ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, s):
        self.ws()
        if not self.text.startswith(s, self.pos):
            self.error(f"expected {s!r}")
        self.pos += len(s)

    def accept(self, s):
        self.ws()
        if self.text.startswith(s, self.pos):
            self.pos += len(s)
            return True
        return False

    def integer(self):
        self.ws()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            self.error("expected an integer", start)
        return int(self.text[start:self.pos])

    def ident(self):
        self.ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        if start == self.pos:
            self.error("expected a name")
        return self.text[start:self.pos]

    def end(self):
        self.ws()
        if self.pos != len(self.text):
            self.error("unexpected trailing input")

    # descriptors
    def descriptor(self):
        from .graded import Graded
        self.ws()
        start = self.pos
        if self.accept("Z/"):
            n = self.integer()
            return self._build(lambda: IntegersMod(n), start)
        for word in ("poly", "graded", "excision", "quotient"):
            if self.text.startswith(word, self.pos):
                self.pos += len(word)
                self.expect("(")
                base = self.descriptor()
                self.expect(";")
                if word == "poly":
                    var = self.ident()
                    self.expect(")")
                    return self._build(lambda: Poly(base, var), start)
                if word == "graded":
                    gens = []
                    while True:
                        gpos = self.pos
                        c = self.value(base)
                        self.expect("@")
                        d = self.integer()
                        if base.is_zero(c):
                            self.error("generator coefficient must be nonzero", gpos)
                        if d < 1:
                            self.error("generator degree must be positive", gpos)
                        gens.append((c, d))
                        if not self.accept(","):
                            break
                    self.expect(")")
                    return self._build(lambda: Graded(base, gens), start)
                if word == "excision":
                    gens = [self.value(base)]
                    while self.accept(","):
                        gens.append(self.value(base))
                    self.expect(")")
                    return self._build(lambda: Excision(base, gens), start)
                m = self.value(base)
                self.expect(")")
                return self._build(lambda: Quotient(base, m), start)
        if self.accept("Z"):
            return Integers()
        if self.accept("Q"):
            return Rationals()
        self.error("unknown ring descriptor")

    def _build(self, make, start):
        try:
            return make()
        except InvalidDescriptor as exc:
            raise ParseError(str(exc), start) from None

    # values
    def value(self, ring):
        from .graded import Graded
        start = self.pos
        if isinstance(ring, (Integers, IntegersMod)) or (isinstance(ring, Quotient) and ring.kind == "int"):
            return ring.coerce(self.integer())
        if isinstance(ring, Rationals):
            num = self.integer()
            den = 1
            if self.accept("/"):
                den = self.integer()
                if den == 0:
                    self.error("zero denominator", start)
            return Fraction(num, den)
        if isinstance(ring, Excision):
            self.expect("(")
            r = self.value(ring.base)
            self.expect(",")
            i = self.value(ring.base)
            self.expect(")")
            return self._checked(ring, (r, i), start)
        if isinstance(ring, (_PolyLike, Graded)):
            self.expect("[")
            coeffs = {}
            if not self.accept("]"):
                while True:
                    c = self.value(ring.base)
                    d = 0
                    if self.accept("@"):
                        d = self.integer()
                        if d < 0:
                            self.error("negative degree", start)
                    if d in coeffs:
                        coeffs[d] = ring.base.add(coeffs[d], c)
                    else:
                        coeffs[d] = c
                    if self.accept("]"):
                        break
                    self.expect(",")
            top = max(coeffs) + 1 if coeffs else 0
            dense = [coeffs.get(i, ring.base.zero()) for i in range(top)]
            return self._checked(ring, dense, start)
        self.error(f"cannot parse values of {ring}")

    def _checked(self, ring, raw, start):
        try:
            return ring.normalize(raw)
        except InvalidDescriptor as exc:
            raise ParseError(str(exc), start) from None


def parse_descriptor(text):
    p = _Parser(text)
    ring = p.descriptor()
    p.end()
    return ring


def parse_element(ring, text):
    p = _Parser(text)
    v = p.value(ring)
    p.end()
    return RingElement(ring, v)


def format_element(x):
    return x.ring.format(x.value)


def format_descriptor(ring):
    return ring.text()
