import random

import pytest

from oracles import det, is_unimodular, pf, random_alternating
from unirow import (AlternatingMatrix, Gen, Integers, IntegersMod, OrbitClassRep, Word,
                    common_shape, goodness_experiment, make_row, perp, pfaffian, psi,
                    square_product, suslin_complete3, vaserstein_V, vdk_product, witt_verify)
from unirow.errors import NotASquarePresentation, ShapeMismatch, SizeMismatch, WitnessMismatch
from unirow.orbits import orbit_bfs
from unirow.rows import UnimodularRow, power_row
from unirow.vdk import CONFIRMED, group_law_check
from unirow.witt import determinant, mat_mul, random_square_row, transpose

Z = Integers()


def test_psi_and_perp():
    assert psi(Z, 1).rows() == [[0, 1], [-1, 0]]
    assert pfaffian(psi(Z, 1)) == 1
    for r in range(1, 5):
        assert pfaffian(psi(Z, r)) == 1
    assert perp(psi(Z, 1), psi(Z, 1)) == psi(Z, 2)
    assert perp(psi(Z, 2), AlternatingMatrix(Z, 0, {})) == psi(Z, 2)
    assert pfaffian(perp(psi(Z, 2), psi(Z, 1))) == 1


def test_generic_4x4_pfaffian():
    M = [[0, 1, 2, 3], [-1, 0, 4, 5], [-2, -4, 0, 6], [-3, -5, -6, 0]]
    got = pfaffian(AlternatingMatrix.from_rows(Z, M))
    assert got == 1 * 6 - 2 * 5 + 3 * 4 == pf(M)
    assert got ** 2 == det(M)


def test_pf_squared_is_det_random():
    rng = random.Random(4)
    for size in (2, 4, 6):
        for _ in range(40):
            M = random_alternating(rng, size)
            A = AlternatingMatrix.from_rows(Z, M)
            assert pfaffian(A) == pf(M)
            assert pfaffian(A) ** 2 == determinant(Z, A.rows()) == det(M)


def test_alternating_structure_enforced():
    with pytest.raises(SizeMismatch):
        AlternatingMatrix(Z, 3, {})
    with pytest.raises(SizeMismatch):
        AlternatingMatrix.from_rows(Z, [[0, 1], [1, 0]])


def test_vaserstein_e1():
    r = make_row([1, 0, 0], Z)
    V = vaserstein_V(Z, r, r)
    assert V.rows() == [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]
    assert pfaffian(V) == 1


def test_vaserstein_random_mod7():
    rng = random.Random(8)
    R = IntegersMod(7)
    for _ in range(100):
        v = [rng.randrange(7) for _ in range(3)]
        if not is_unimodular(v, 7):
            continue
        row = make_row(v, R)
        assert pfaffian(vaserstein_V(R, row, row)) == 1


def test_vaserstein_rejects_bad_witness():
    a = make_row([6, 10, 15], Z)
    b = UnimodularRow(Z, [1, 1, 1], [1, 0, 0])
    with pytest.raises(WitnessMismatch):
        vaserstein_V(Z, a, b)


def test_pfaffian_invariant_under_congruence():
    rng = random.Random(9)
    for _ in range(50):
        M = AlternatingMatrix.from_rows(Z, random_alternating(rng, 4))
        letters = []
        for _ in range(3):
            i, j = rng.sample(range(4), 2)
            letters.append(Gen(i, j, rng.randint(-3, 3)))
        E = Word(Z, 4, letters).matrix()
        N = mat_mul(Z, mat_mul(Z, transpose(E), M.rows()), E)
        assert pfaffian(AlternatingMatrix.from_rows(Z, N)) == pfaffian(M)


def test_witt_verify():
    a = psi(Z, 1)
    assert witt_verify(a, a, Word(Z, 4, []))
    assert witt_verify(psi(Z, 2), psi(Z, 1), Word(Z, 6, []))
    # a genuine symmetry of psi_1 perp psi_1: swap the two blocks
    M = perp(psi(Z, 1), psi(Z, 1))
    swap = Word(Z, 4, [Gen(0, 2, 1), Gen(2, 0, -1), Gen(0, 2, 1), Gen(1, 3, 1), Gen(3, 1, -1), Gen(1, 3, 1)])
    assert witt_verify(psi(Z, 1), psi(Z, 1), swap)
    forged = Word(Z, 4, list(swap.letters[:-1]) + [Gen(1, 3, 2)])
    assert not witt_verify(psi(Z, 1), psi(Z, 1), forged)
    assert mat_mul(Z, mat_mul(Z, transpose(swap.matrix()), M.rows()), swap.matrix()) == M.rows()
    with pytest.raises(SizeMismatch):
        witt_verify(a, a, Word(Z, 6, []))


def test_vdk_product_formula():
    x = OrbitClassRep(make_row([3, 1, 1], Z))
    y = OrbitClassRep(make_row([5, 1, 1], Z))
    assert vdk_product(x, y, p=0).row.v == (14, 5, 1)
    out = vdk_product(x, y).row
    assert sum(a * b for a, b in zip(out.v, out.w)) == 1


def test_vdk_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        vdk_product(make_row([3, 1, 1], Z), make_row([5, 2, 1], Z))


def test_square_product():
    y = make_row([5, 1, 1], Z)
    x = make_row([4, 1, 1], Z)
    out = square_product(y, x, 2).row
    assert out.v == (20, 1, 1)
    assert sum(a * b for a, b in zip(out.v, out.w)) == 1


def test_common_shape_identity_and_census():
    x = make_row([3, 1, 1], Z)
    a, b, cx, cy = common_shape(x, x)
    assert a.v == b.v and cx.word.letters == () and cy.word.letters == ()
    R = IntegersMod(4)
    census = orbit_bfs(R, 3)
    u, v = make_row([1, 2, 3], R), make_row([3, 0, 1], R)
    a, b, cx, cy = common_shape(u, v, census=census)
    assert a.v[1:] == b.v[1:]
    assert cx.verify() and cy.verify()


def test_goodness():
    r = make_row([2, 3, 5], Z)
    assert goodness_experiment(OrbitClassRep(r), 1).status == CONFIRMED
    sq = make_row([4, 3, 5], Z)
    assert goodness_experiment(OrbitClassRep(sq), 2, root=2).status == CONFIRMED
    R = IntegersMod(4)
    census = orbit_bfs(R, 3)
    for v in ([1, 2, 3], [3, 3, 0], [2, 1, 1]):
        rec = goodness_experiment(OrbitClassRep(make_row(v, R)), 2, census=census)
        assert rec.status == CONFIRMED
        assert rec.certificate.verify()
        assert rec.certificate.source.v == power_row(make_row(v, R), 2).v


def test_group_law_small():
    pairs, failures = group_law_check(IntegersMod(2))
    assert pairs == 13 and failures == []


def test_suslin_examples():
    assert suslin_complete3(Z, make_row([1, 0, 0], Z), 0) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    M = suslin_complete3(Z, make_row([0, 0, 1], Z), 1)
    assert M[0] == [0, 0, 1] and det(M) == 1
    M = suslin_complete3(Z, UnimodularRow(Z, [5, 2, 4], [1, -2, 0]), 2)
    assert M[0] == [5, 2, 4] and det(M) == 1


def test_suslin_requires_square():
    with pytest.raises(NotASquarePresentation):
        suslin_complete3(Z, make_row([5, 2, 3], Z), 2)


def test_suslin_random_mod9():
    rng = random.Random(1)
    R = IntegersMod(9)
    for _ in range(100):
        row, c = random_square_row(R, rng)
        M = suslin_complete3(R, row, c)
        assert list(M[0]) == list(row.v)
        assert det(M, 9) == 1
