"""Brute-force orbit oracle over finite rings.

Rows are enumerated exhaustively, orbits under elementary letters are found
by breadth-first search, and every orbit keeps parent pointers so a word
between any two equivalent rows can be rebuilt and checked.
"""
import json
import os
import tempfile
from itertools import product

from .errors import CapExceeded, NotEquivalent, RowAbsent, Unsupported, VerificationFailure
from .ideals import IdealHandle
from .rings import Ring, RingElement
from .words import Conj, EquivalenceCertificate, Gen, Word, parse_word

DEFAULT_CAPS = {2: 10 ** 4, 3: 10 ** 3}
CENSUS_VERSION = 1


def _pl(ring, x):
    return x.value if isinstance(x, RingElement) else ring.coerce(x)


class FiniteRingTable:
    """Element list in canonical order plus indexed operation tables."""

    def __init__(self, ring):
        if not getattr(ring, "finite", False):
            raise Unsupported(f"{ring} is not finite")
        self.ring = ring
        self.elements = list(ring.elements())
        self.index = {x: k for k, x in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise VerificationFailure("element list has duplicates")
        q = len(self.elements)
        R = ring
        self.zero = self.index[R.zero()]
        self.one = self.index[R.one()]
        if self.zero == self.one:
            raise Unsupported("zero ring")
        self.add = [[self.index[R.add(x, y)] for y in self.elements] for x in self.elements]
        self.mul = [[self.index[R.mul(x, y)] for y in self.elements] for x in self.elements]
        self.neg = [self.index[R.neg(x)] for x in self.elements]
        self.units = frozenset(k for k in range(q) if self.one in self.mul[k])
        self._principal = [self._mask(self.mul[k]) for k in range(q)]
        self._sums = {}

    def __len__(self):
        return len(self.elements)

    @staticmethod
    def _mask(indices):
        m = 0
        for k in indices:
            m |= 1 << k
        return m

    def _members(self, mask):
        return [k for k in range(len(self.elements)) if mask >> k & 1]

    def ideal_sum(self, m1, m2):
        key = (m1, m2) if m1 <= m2 else (m2, m1)
        out = self._sums.get(key)
        if out is None:
            a, b = self._members(m1), self._members(m2)
            out = self._mask(self.add[x][y] for x in a for y in b)
            self._sums[key] = out
        return out

    def ideal_mask(self, idx):
        """Ideal generated by the given element indices, as a bit mask."""
        m = 1 << self.zero
        for k in idx:
            m = self.ideal_sum(m, self._principal[k])
        return m

    def is_unimodular(self, idx):
        return bool(self.ideal_mask(idx) >> self.one & 1)

    def ideal_members(self, ideal):
        gens = [self.index[g] for g in ideal.gens]
        return self._members(self.ideal_mask(gens))

    def is_nilpotent(self, k):
        x = k
        for _ in range(len(self.elements) + 1):
            if x == self.zero:
                return True
            x = self.mul[x][k]
        return False

    def additive_generators(self, members):
        """Greedy generating set of the additive subgroup spanned by members."""
        span = {self.zero}
        gens = []
        for k in members:
            if k in span:
                continue
            gens.append(k)
            frontier = list(span)
            while frontier:
                nxt = []
                for s in frontier:
                    for g in gens:
                        y = self.add[s][g]
                        if y not in span:
                            span.add(y)
                            nxt.append(y)
                frontier = nxt
        return gens


def enumerate_um(table, n, relative=None, cap=None):
    """All unimodular rows of length n (or those == e_1 mod the ideal)."""
    if not isinstance(table, FiniteRingTable):
        table = FiniteRingTable(table)
    cap = cap if cap is not None else DEFAULT_CAPS.get(n, 10 ** 2)
    if len(table) > cap:
        raise CapExceeded(f"ring has {len(table)} elements, cap for n={n} is {cap}")
    if relative is None:
        choices = [range(len(table))] * n
    else:
        I = table.ideal_members(relative)
        first = sorted(table.add[table.one][i] for i in I)
        choices = [first] + [I] * (n - 1)
    return [row for row in product(*choices) if table.is_unimodular(row)]


class _Letter:
    """An elementary letter with its action on index tuples."""

    def __init__(self, table, n, letter):
        self.letter = letter
        R = table.ring
        gens = Word(R, n, [letter]).plain()
        self.steps = [(g.i, g.j, table.index[g.lam]) for g in gens]

    def act(self, table, row):
        v = list(row)
        add, mul = table.add, table.mul
        for i, j, lam in self.steps:
            v[j] = add[v[j]][mul[lam][v[i]]]
        return tuple(v)


def letter_set(table, n, relative=None, lambdas="all", outer_length=2):
    """Generator letters for E_n(R), or conjugated letters for E_n(R, I).

    lambdas is "all", "additive" or an explicit list of ring payloads.
    """
    R = table.ring
    if relative is None:
        pool = range(len(table))
    else:
        pool = table.ideal_members(relative)
    if lambdas == "all":
        lams = [k for k in pool if k != table.zero]
    elif lambdas == "additive":
        lams = table.additive_generators([k for k in pool if k != table.zero])
    else:
        lams = [table.index[_pl(R, x)] for x in lambdas]
        lams = [k for k in lams if k != table.zero]
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    inner = [Gen(i, j, table.elements[k]) for i, j in pairs for k in lams]
    if relative is None:
        return [_Letter(table, n, g) for g in inner]
    plain = [Gen(i, j, x) for i, j in pairs for x in table.elements if x != R.zero()]
    outers = [()]
    for length in range(1, outer_length + 1):
        outers += [tuple(w) for w in product(plain, repeat=length)]
    seen = set()
    out = []
    for outer in outers:
        for g in inner:
            letter = Conj(outer, g)
            M = Word(R, n, [letter]).matrix()
            key = tuple(tuple(r) for r in M)
            if key in seen:
                continue
            seen.add(key)
            out.append(_Letter(table, n, letter))
    return out


class OrbitCensus:
    """Partition of a finite Um_n (or Um_n(R, I)) into orbits."""

    def __init__(self, table, n, relative, rows, orbit, parent, letters, config):
        self.table = table
        self.ring = table.ring
        self.n = n
        self.relative = relative
        self.rows = rows
        self.row_index = {r: k for k, r in enumerate(rows)}
        self.orbit = orbit
        self.parent = parent
        self.letters = letters
        self.config = config

    @property
    def orbit_count(self):
        return len(set(self.orbit))

    def orbit_sizes(self):
        sizes = {}
        for o in self.orbit:
            sizes[o] = sizes.get(o, 0) + 1
        return [sizes[k] for k in sorted(sizes)]

    def values(self, row):
        return tuple(self.table.elements[k] for k in row)

    def indices(self, values):
        R = self.ring
        try:
            return tuple(self.table.index[_pl(R, x)] for x in values)
        except KeyError:
            raise RowAbsent("row has entries outside the ring") from None

    def lookup(self, values):
        key = self.indices(values)
        if key not in self.row_index:
            raise RowAbsent("row is not in the census")
        return self.row_index[key]

    def orbit_of(self, values):
        return self.orbit[self.lookup(values)]

    def canonical(self, orbit_id):
        for k, o in enumerate(self.orbit):
            if o == orbit_id:
                return self.values(self.rows[k])
        raise KeyError(orbit_id)

    def _chain(self, k):
        """Letters taking the orbit root to row k."""
        out = []
        while self.parent[k] is not None:
            p, li = self.parent[k]
            out.append(self.letters[li].letter)
            k = p
        return out[::-1]

    def verify_closure(self, jobs=1):
        """Every letter maps every row into its own orbit."""
        def chunk(ks):
            for k in ks:
                row = self.rows[k]
                for L in self.letters:
                    if self.orbit[self.row_index[L.act(self.table, row)]] != self.orbit[k]:
                        return False
            return True

        ks = list(range(len(self.rows)))
        if jobs <= 1:
            return chunk(ks)
        from concurrent.futures import ThreadPoolExecutor
        parts = [ks[i::jobs] for i in range(jobs)]
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            return all(ex.map(chunk, parts))

    def verify_parents(self):
        roots = {}
        for k, row in enumerate(self.rows):
            if self.parent[k] is None:
                if self.orbit[k] in roots:
                    return False
                roots[self.orbit[k]] = k
                continue
            p, li = self.parent[k]
            if self.orbit[p] != self.orbit[k]:
                return False
            if self.letters[li].act(self.table, self.rows[p]) != row:
                return False
        # roots are the least rows of their orbits
        for k, o in enumerate(self.orbit):
            if self.rows[k] < self.rows[roots[o]]:
                return False
        return True


def orbit_bfs(ring, n, relative=None, lambdas="all", outer_length=2, cap=None, letters=None):
    table = ring if isinstance(ring, FiniteRingTable) else FiniteRingTable(ring)
    rows = enumerate_um(table, n, relative, cap)
    rows.sort()
    if letters is None:
        letters = letter_set(table, n, relative, lambdas, outer_length)
    index = {r: k for k, r in enumerate(rows)}
    orbit = [None] * len(rows)
    parent = [None] * len(rows)
    next_id = 0
    for start in range(len(rows)):
        if orbit[start] is not None:
            continue
        orbit[start] = next_id
        frontier = [start]
        while frontier:
            nxt = []
            for k in frontier:
                row = rows[k]
                for li, L in enumerate(letters):
                    m = index[L.act(table, row)]
                    if orbit[m] is None:
                        orbit[m] = next_id
                        parent[m] = (k, li)
                        nxt.append(m)
            frontier = nxt
        next_id += 1
    config = {
        "ring": ring.text() if isinstance(ring, Ring) else table.ring.text(),
        "n": n,
        "ideal": None if relative is None else [table.ring.format(g) for g in relative.gens],
        "lambdas": lambdas if isinstance(lambdas, str) else [table.ring.format(x) for x in lambdas],
        "outer_length": outer_length if relative is not None else 0,
    }
    return OrbitCensus(table, n, relative, rows, orbit, parent, letters, config)


def relative_stabilized(ring, n, relative, outer_length=2, lambdas="all"):
    """True when raising the outer length by one leaves the partition unchanged."""
    a = orbit_bfs(ring, n, relative, lambdas, outer_length)
    b = orbit_bfs(ring, n, relative, lambdas, outer_length + 1)
    return a.orbit == b.orbit


def certificate_path(census, x, y):
    """Word from x to y rebuilt from parent pointers, checked by multiplication."""
    from .rows import make_row
    kx, ky = census.lookup(x), census.lookup(y)
    if census.orbit[kx] != census.orbit[ky]:
        scope = "" if census.relative is None else " under the explored relative subgroup"
        raise NotEquivalent(f"rows lie in different orbits{scope}")
    R = census.ring
    if kx == ky:
        word = Word(R, census.n)
    else:
        down = Word(R, census.n, census._chain(kx)).inverse()
        up = Word(R, census.n, census._chain(ky))
        word = down + up
    src = make_row(census.values(census.rows[kx]), R)
    tgt_v = word.act(src.v)
    from .rows import UnimodularRow
    tgt = UnimodularRow(R, tgt_v, word.act_witness(src.w))
    cert = EquivalenceCertificate(src, tgt, word)
    if list(tgt.v) != list(census.values(census.rows[ky])) or not cert.verify():
        raise VerificationFailure("rebuilt path does not verify")
    if census.relative is not None and not word.is_relative(census.relative):
        raise VerificationFailure("rebuilt path is not relative")
    return cert


# census files

def _row_text(ring, values):
    return "; ".join(ring.format(x) for x in values)


def write_census(census, path):
    R = census.ring
    header = dict(census.config)
    header.update({"version": CENSUS_VERSION, "rows": len(census.rows), "orbits": census.orbit_count})
    records = []
    for k, row in enumerate(census.rows):
        if census.parent[k] is None:
            par, letter = "-", "-"
        else:
            p, li = census.parent[k]
            par = str(p)
            letter = Word(R, census.n, [census.letters[li].letter]).text()
        records.append((_row_text(R, census.values(row)), str(census.orbit[k]), par, letter))
    widths = [max((len(r[c]) for r in records), default=1) for c in range(3)]
    lines = ["# census " + json.dumps(header, sort_keys=True)]
    for r in records:
        lines.append(" | ".join(r[c].ljust(widths[c]) for c in range(3)) + " | " + r[3])
    text = "\n".join(lines) + "\n"
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".census-")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)
    return text


def read_census(path):
    """Reload a census file; letters are re-derived from the stored config."""
    from .grammar import parse_descriptor, parse_element
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith("# census "):
        raise VerificationFailure("missing census header")
    header = json.loads(lines[0][len("# census "):])
    if header.get("version") != CENSUS_VERSION:
        raise VerificationFailure("unknown census version")
    ring = parse_descriptor(header["ring"])
    n = header["n"]
    table = FiniteRingTable(ring)
    relative = None
    if header["ideal"] is not None:
        relative = IdealHandle(ring, [parse_element(ring, g).value for g in header["ideal"]])
    lambdas = header["lambdas"]
    if not isinstance(lambdas, str):
        lambdas = [parse_element(ring, x).value for x in lambdas]
    letters = letter_set(table, n, relative, lambdas, header["outer_length"] or 2)
    by_text = {Word(ring, n, [L.letter]).text(): li for li, L in enumerate(letters)}
    rows, orbit, parent = [], [], []
    for line in lines[1:]:
        fields = [f.strip() for f in line.split(" | ")]
        if len(fields) != 4:
            raise VerificationFailure(f"malformed record: {line!r}")
        vals = [parse_element(ring, x).value for x in fields[0].split("; ")]
        rows.append(tuple(table.index[x] for x in vals))
        orbit.append(int(fields[1]))
        if fields[2] == "-":
            parent.append(None)
        else:
            word = parse_word(ring, n, fields[3])
            key = word.text()
            if key not in by_text:
                raise VerificationFailure(f"letter {key} is not a generator of this census")
            parent.append((int(fields[2]), by_text[key]))
    if len(rows) != header["rows"]:
        raise VerificationFailure("row count does not match header")
    return OrbitCensus(table, n, relative, rows, orbit, parent, letters, header)


def verify_census(census, jobs=1):
    """Offline re-check: enumeration, parent pointers and closure."""
    expected = sorted(enumerate_um(census.table, census.n, census.relative, cap=10 ** 6))
    if list(census.rows) != expected:
        return False
    return census.verify_parents() and census.verify_closure(jobs)
