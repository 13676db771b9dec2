import random

import pytest

from oracles import annihilator_chain, semigroup_gaps, xgcd
from unirow import (DescriptorMismatch, Integers, IntegersMod, RingElement, excision_maps,
                    format_descriptor, format_element, gamma_ideal, graded_component,
                    ideal_membership, parse_descriptor, parse_element, ring_arith, swan_weibel)
from unirow.errors import InvalidDescriptor, ParseError
from unirow.graded import degree_semigroup, eta, iota, numerical_semigroup, phi
from unirow.ideals import IdealHandle, fiber_inverse

Z = Integers()


def el(desc, text):
    R = parse_descriptor(desc) if isinstance(desc, str) else desc
    return parse_element(R, text)


def test_excision_product_and_sum():
    E = parse_descriptor("excision(Z; 6)")
    x = RingElement(E, E.coerce((1, 6)))
    assert ring_arith("mul", x, x).value == (1, 48)
    s = ring_arith("add", RingElement(E, (2, 6)), RingElement(E, (3, -6)))
    assert s.value == (5, 0)


def test_mod4_square():
    R = IntegersMod(4)
    assert ring_arith("mul", RingElement(R, 3), RingElement(R, 3)).value == 1


def test_mixed_descriptors_rejected():
    with pytest.raises(DescriptorMismatch):
        ring_arith("add", RingElement(Z, 1), RingElement(IntegersMod(4), 1))


def test_excision_second_component_checked():
    E = parse_descriptor("excision(Z; 6)")
    with pytest.raises(InvalidDescriptor):
        E.coerce((1, 5))


def test_excision_axioms_random():
    rng = random.Random(7)
    for desc in ("excision(Z; 6)", "excision(Z/12; 4)"):
        E = parse_descriptor(desc)
        mod = 12 if "Z/12" in desc else None
        pick = lambda: E.coerce((rng.randint(-30, 30), 6 * rng.randint(-5, 5) if mod is None else 4 * rng.randint(0, 2)))
        for _ in range(2000):
            x, y, z = (RingElement(E, pick()) for _ in range(3))
            assert (x * y) * z == x * (y * z)
            assert x * (y + z) == x * y + x * z
            assert x * y == y * x
            pi = lambda u: excision_maps("pi", u)
            assert pi(x * y) == pi(x) * pi(y)
            assert pi(x + y) == pi(x) + pi(y)


def test_excision_maps():
    E = parse_descriptor("excision(Z; 6)")
    assert excision_maps("pi", RingElement(E, (2, 6))).value == 8
    E12 = parse_descriptor("excision(Z; 12)")
    assert excision_maps("epsilon", RingElement(E12, (5, 12))).value == 5
    r, s = excision_maps("fiber_iso", RingElement(E, (1, 6)))
    assert (r.value, s.value) == (1, 7)
    assert fiber_inverse(E, r, s).value == (1, 6)
    i = excision_maps("iota", RingElement(Z, 9), ring=E)
    assert excision_maps("epsilon", i).value == 9


def test_membership_extended_gcd():
    I = IdealHandle(Z, [6, 10])
    w = ideal_membership(I, RingElement(Z, 2))
    assert 6 * w[0].value + 10 * w[1].value == 2
    assert xgcd(6, 10)[0] == 2
    assert ideal_membership(I, RingElement(Z, 1)) is None
    zero = ideal_membership(I, RingElement(Z, 0))
    assert all(c.value == 0 for c in zero)


def test_membership_soundness_random():
    rng = random.Random(3)
    for _ in range(300):
        gens = [rng.randint(-40, 40) for _ in range(rng.randint(1, 3))]
        x = rng.randint(-100, 100)
        w = ideal_membership(IdealHandle(Z, gens), RingElement(Z, x))
        g = 0
        for a in gens:
            g = xgcd(g, a)[0]
        if w is None:
            assert (g == 0 and x != 0) or (g and x % g)
        else:
            assert sum(a * c.value for a, c in zip(gens, w)) == x


def test_membership_over_polynomials():
    P = parse_descriptor("poly(Q;t)")
    f = el(P, "[-1, 0, 1@2]")
    x = el(P, "[-1, 1@1, 1@2, -1@3]")
    w = ideal_membership(IdealHandle(P, [f.value]), x)
    assert w is not None
    assert P.mul(f.value, w[0].value) == x.value


@pytest.mark.parametrize("m, g, want", [(8, 2, 1), (6, 2, 3), (5, 1, 0), (12, 2, 3)])
def test_gamma_against_annihilator_chain(m, g, want):
    got = gamma_ideal(IdealHandle(IntegersMod(m), [g]))
    members = sorted({(want * k) % m for k in range(m)})
    assert members == annihilator_chain(m, g)
    assert IdealHandle(IntegersMod(m), list(got.gens)).same_as(IdealHandle(IntegersMod(m), [want]))


def test_graded_components():
    assert graded_component(parse_descriptor("graded(Z; 2@1)"), 3).gens == (8,)
    assert graded_component(parse_descriptor("graded(Z; 1@2, 1@3)"), 1).is_zero()
    two = graded_component(parse_descriptor("graded(Z; 2@1, 3@2)"), 2)
    assert IdealHandle(Z, list(two.gens)).same_as(IdealHandle(Z, [4, 3]))
    assert graded_component(parse_descriptor("graded(Z; 2@1)"), 0).gens == (1,)


def test_component_multiplicativity():
    A = parse_descriptor("graded(Z; 2@1, 3@2, 5@3)")
    for i in range(5):
        for j in range(5):
            Ii, Ij = graded_component(A, i), graded_component(A, j)
            Iij = graded_component(A, i + j)
            for x in Ii.gens:
                for y in Ij.gens:
                    assert Iij.contains(x * y)


@pytest.mark.parametrize("degrees", [[2, 3], [4, 6], [3, 5, 7], [3, 4], [5, 7, 9]])
def test_semigroups(degrees):
    assert numerical_semigroup(degrees) == semigroup_gaps(degrees)


def test_degree_semigroup():
    assert degree_semigroup(parse_descriptor("graded(Z; 1@2, 1@3)")) == (1, 2)
    assert degree_semigroup(parse_descriptor("graded(Z; 1@4, 1@6)")) == (2, None)
    assert degree_semigroup(parse_descriptor("graded(Z; 1@3, 1@5, 1@7)")) == (1, 5)


def test_swan_weibel_examples():
    A = parse_descriptor("graded(Z; 2@1)")
    five = swan_weibel(el(A, "[5]"))
    assert five.ring.degree(five.value) == 0
    a = el(A, "[3, 2@1, 4@2]")
    s = swan_weibel(a)
    assert format_element(s) == "[[3], [2@1]@1, [4@2]@2]"
    assert phi(s, 1) == a
    assert phi(s, 0) == iota(eta(a), A)
    b = el(A, "[3, 2@1]")
    assert phi(swan_weibel(b), 1) == b


def test_not_in_algebra():
    A = parse_descriptor("graded(Z; 2@1)")
    with pytest.raises(ParseError):
        parse_element(A, "[1, 1@1]")
    with pytest.raises(InvalidDescriptor):
        A.coerce([1, 1])


@pytest.mark.parametrize("text", [
    "Z", "Z/4", "Q", "poly(Z;t)", "poly(Z/4;t)", "graded(Z; 2@1, 3@2)", "graded(Z/8; 2@1)",
    "excision(Z; 6)", "quotient(poly(Z;t); [1, 1@2])",
])
def test_descriptor_round_trip(text):
    assert format_descriptor(parse_descriptor(text)) == text


def test_element_round_trip():
    cases = [("Z", "-7"), ("Z/9", "4"), ("Q", "-3/4"), ("poly(Z;t)", "[1, -2@3]"),
             ("graded(Z; 2@1)", "[3, 2@1, 4@2]"), ("excision(Z; 6)", "(1, 6)")]
    for desc, text in cases:
        x = el(desc, text)
        assert format_element(x) == text
        assert parse_element(x.ring, format_element(x)) == x


def test_normalize_idempotent():
    rng = random.Random(11)
    for desc in ("Z/12", "poly(Z/4;t)", "quotient(poly(Z;t); [1, 1@2])"):
        R = parse_descriptor(desc)
        for _ in range(200):
            raw = [rng.randint(-20, 20) for _ in range(4)] if "poly" in desc else rng.randint(-50, 50)
            x = R.coerce(raw)
            assert R.normalize(x) == x


def test_bad_descriptor():
    with pytest.raises(ParseError):
        parse_descriptor("poly(Z/4;t)/(t^2+1)")
