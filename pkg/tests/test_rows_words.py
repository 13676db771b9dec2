import random

import pytest

from oracles import is_unimodular
from unirow import (Conj, EquivalenceCertificate, Gen, Integers, IntegersMod, NotUnimodular, Word,
                    apply_word, make_row, nil_reduce, parse_word, power_row, pthick,
                    scale_last_by_unit_square)
from unirow.errors import NotRelative, NotUnipotent, ParseError, PreconditionError, WitnessMismatch
from unirow.ideals import IdealHandle
from unirow.rows import UnimodularRow, e1, parse_row

Z = Integers()


def dot(R, v, w):
    acc = R.zero()
    for x, y in zip(v, w):
        acc = R.add(acc, R.mul(x, y))
    return acc


def random_word(R, n, rng, length, ideal_gen=None, small=range(-3, 4)):
    letters = []
    for _ in range(length):
        i, j = rng.sample(range(n), 2)
        lam = R.coerce(rng.choice(small))
        if ideal_gen is not None:
            lam = R.mul(lam, R.coerce(ideal_gen))
        if rng.random() < 0.3:
            k, l = rng.sample(range(n), 2)
            letters.append(Conj((Gen(k, l, R.coerce(rng.choice(small))),), Gen(i, j, lam)))
        elif ideal_gen is not None:
            letters.append(Conj((), Gen(i, j, lam)))
        else:
            letters.append(Gen(i, j, lam))
    return Word(R, n, letters)


def test_make_row_witness():
    r = make_row([6, 10, 15], Z)
    assert dot(Z, r.v, r.w) == 1
    assert make_row([1, 0, 0], Z).w == (1, 0, 0)


def test_make_row_not_unimodular():
    with pytest.raises(NotUnimodular):
        make_row([2, 4], Z)


def test_make_row_relative_flag():
    I = IdealHandle(Z, [2])
    assert make_row([3, 2, 4], Z, relative=I).is_relative(I)
    assert not make_row([2, 3, 5], Z).is_relative(I)


def test_witness_mismatch():
    with pytest.raises(WitnessMismatch):
        UnimodularRow(Z, [6, 10, 15], [1, 1, 1])


def test_apply_word_convention():
    r = make_row([3, 2], Z)
    out = apply_word(r, Word(Z, 2, [Gen(1, 0, -1)]))
    assert out.v == (1, 2)
    assert dot(Z, out.v, out.w) == 1


def test_empty_word_and_cancellation():
    r = make_row([6, 10, 15], Z)
    assert apply_word(r, Word(Z, 3, [])).v == r.v
    w = Word(Z, 3, [Gen(0, 2, 1), Gen(0, 2, -1)])
    assert apply_word(r, w).v == (6, 10, 15)


def test_word_text_round_trip():
    text = "E(1,3;2) C[E(2,1;1)]{E(1,2;4)}"
    w = parse_word(Z, 3, text)
    assert w.text() == text
    with pytest.raises(ParseError):
        parse_word(Z, 3, "E(1,4;2)")


def test_relative_word_matrix_is_identity_mod_ideal():
    rng = random.Random(2)
    I = IdealHandle(Z, [6])
    for _ in range(100):
        w = random_word(Z, 3, rng, 4, ideal_gen=6)
        assert w.is_relative(I)
        M = w.matrix()
        for i in range(3):
            for j in range(3):
                assert (M[i][j] - (i == j)) % 6 == 0


def test_inverse_round_trip_random():
    rng = random.Random(5)
    for R, n in ((Z, 3), (IntegersMod(12), 4), (Z, 4)):
        for _ in range(200):
            v = [rng.randint(-9, 9) for _ in range(n)]
            m = getattr(R, "n", 0)
            if not is_unimodular(v, m):
                continue
            r = make_row(v, R)
            w = random_word(R, n, rng, rng.randint(1, 6))
            out = apply_word(r, w)
            assert dot(R, out.v, out.w) == R.one()
            assert apply_word(out, w.inverse()).v == r.v
            assert EquivalenceCertificate(r, out, w).verify()


def test_power_row():
    r = make_row([2, 3, 5], Z)
    assert power_row(r, 1).v == r.v
    p = power_row(r, 2)
    assert p.v == (4, 3, 5)
    assert dot(Z, p.v, p.w) == 1


def test_nil_reduce_mod4():
    R = IntegersMod(4)
    I = IdealHandle(R, [2])
    cert = nil_reduce(make_row([3, 2, 2], R), I)
    assert cert.target.v == (1, 0, 0)
    assert cert.word.is_relative(I)
    assert cert.verify(I)


def test_nil_reduce_mod8_and_identity():
    R = IntegersMod(8)
    I = IdealHandle(R, [2])
    cert = nil_reduce(make_row([1, 4, 0], R), I)
    assert cert.target.v == (1, 0, 0) and cert.verify(I)
    assert nil_reduce(e1(R, 3), I).word.letters == ()


def test_nil_reduce_rejects_non_unipotent():
    with pytest.raises(NotUnipotent):
        nil_reduce(make_row([3, 2, 2], Z), IdealHandle(Z, [2]))
    R = IntegersMod(8)
    with pytest.raises(NotRelative):
        nil_reduce(make_row([3, 1, 0], R), IdealHandle(R, [2]))


def test_pthick():
    I = IdealHandle(Z, [2])
    cert = pthick(make_row([3, 2, 2], Z), 2, I)
    assert cert.verify(I)
    v = cert.target.v
    assert (v[0] - 1) % 4 == 0 and v[1] % 4 == 0 and v[2] % 4 == 0
    assert pthick(make_row([3, 2, 2], Z), 1, I).word.letters == ()
    assert pthick(e1(Z, 3), 3, I).word.letters == ()


def test_scale_by_unit_square():
    R = IntegersMod(9)
    cert = scale_last_by_unit_square(make_row([4, 3, 1], R), 3, IdealHandle(R, [1]))
    assert cert.target.v == (4, 3, 0)
    assert cert.verify()
    one = scale_last_by_unit_square(make_row([3, 2, 4], Z), 1, IdealHandle(Z, [1]))
    assert one.target.v == (3, 2, 4)


def test_scale_requires_t_in_ideal():
    with pytest.raises(PreconditionError):
        scale_last_by_unit_square(make_row([1, 0, 5], Z), 3, IdealHandle(Z, [2]))


def test_parse_row():
    r = parse_row(Z, "[6, 10, 15 | -14, 7, 1]")
    assert r.text() == "[6, 10, 15 | -14, 7, 1]"
