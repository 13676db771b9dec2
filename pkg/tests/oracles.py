"""Small brute-force reference computations the tests compare against.

Nothing here imports unirow; everything works on plain ints modulo m
(m = 0 meaning the integers).
"""
from itertools import combinations, permutations, product
from math import gcd


def red(x, m):
    return x % m if m else x


def xgcd(a, b):
    """(g, x, y) with a*x + b*y == g >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def is_unimodular(v, m):
    g = 0
    for x in v:
        g = gcd(g, x)
    return gcd(g, m) == 1 if m else g == 1


def count_um(q, n):
    return sum(is_unimodular(v, q) for v in product(range(q), repeat=n))


def sign(perm):
    s, seen = 1, set()
    for i in range(len(perm)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        if length % 2 == 0:
            s = -s
    return s


def det(M, m=0):
    """Leibniz expansion."""
    n = len(M)
    total = 0
    for p in permutations(range(n)):
        term = sign(p)
        for i in range(n):
            term *= M[i][p[i]]
        total += term
    return red(total, m)


def pf(M, m=0):
    """Pfaffian as a signed sum over perfect matchings."""
    n = len(M)
    if n % 2:
        return 0

    def rec(idx):
        if not idx:
            return 1
        i, rest = idx[0], idx[1:]
        total = 0
        for k, j in enumerate(rest):
            others = rest[:k] + rest[k + 1:]
            total += (-1) ** k * M[i][j] * rec(others)
        return total
    return red(rec(tuple(range(n))), m)


def random_alternating(rng, n, lo=-5, hi=5):
    M = [[0] * n for _ in range(n)]
    for i, j in combinations(range(n), 2):
        x = rng.randint(lo, hi)
        M[i][j], M[j][i] = x, -x
    return M


def elementary_orbits(m, n, lams=None):
    """Orbits of E_n(Z/m) acting on Um_n(Z/m), by union-find over every letter."""
    lams = range(1, m) if lams is None else lams
    rows = [v for v in product(range(m), repeat=n) if is_unimodular(v, m)]
    parent = {v: v for v in rows}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v
    for v in rows:
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                for lam in lams:
                    w = list(v)
                    w[j] = (w[j] + lam * v[i]) % m
                    a, b = find(v), find(tuple(w))
                    if a != b:
                        parent[a] = b
    roots = {}
    for v in rows:
        roots.setdefault(find(v), []).append(v)
    return list(roots.values())


def annihilator_chain(m, g):
    """Gamma_(g)(Z/m) as the set of x with x * g^k == 0 for some k."""
    return sorted(x for x in range(m) if any(x * pow(g, k, m) % m == 0 for k in range(m + 1)))


def semigroup_gaps(degrees, limit=200):
    reach = {0}
    for s in range(1, limit):
        if any(s - d in reach for d in degrees if s - d >= 0):
            reach.add(s)
    g = 0
    for d in degrees:
        g = gcd(g, d)
    if g != 1:
        return g, None, None
    gaps = [s for s in range(limit) if s not in reach]
    return 1, (max(gaps) + 1 if gaps else 0), gaps
