import pytest

from oracles import count_um, elementary_orbits
from unirow import IntegersMod, certificate_path, enumerate_um, lemma_experiment, orbit_bfs
from unirow.errors import CapExceeded, HypothesisViolated, NotEquivalent, RowAbsent
from unirow.grammar import parse_descriptor
from unirow.ideals import IdealHandle
from unirow.orbits import FiniteRingTable, read_census, relative_stabilized, verify_census, write_census


@pytest.mark.parametrize("m, n, want", [(2, 3, 7), (4, 2, 12), (2, 2, 3), (4, 3, 56), (6, 2, 24)])
def test_um_counts(m, n, want):
    assert count_um(m, n) == want
    assert len(enumerate_um(FiniteRingTable(IntegersMod(m)), n)) == want


def test_relative_enumeration():
    R = IntegersMod(4)
    rows = enumerate_um(R, 3, IdealHandle(R, [2]))
    assert len(rows) == 8
    assert enumerate_um(R, 3, IdealHandle(R, [0])) == [(1, 0, 0)]


def test_cap():
    with pytest.raises(CapExceeded):
        enumerate_um(IntegersMod(12), 3, cap=10)


def test_single_orbits():
    c = orbit_bfs(IntegersMod(2), 3)
    assert c.orbit_count == 1 and c.orbit_sizes() == [7]
    c = orbit_bfs(IntegersMod(4), 2)
    assert c.orbit_count == 1 and c.orbit_sizes() == [12]
    assert c.verify_closure() and c.verify_parents()


def test_orbits_agree_with_union_find():
    for m, n in ((4, 2), (6, 2), (8, 2), (9, 2), (4, 3)):
        census = orbit_bfs(IntegersMod(m), n)
        assert census.orbit_count == len(elementary_orbits(m, n))


def test_relative_zero_ideal():
    R = IntegersMod(4)
    c = orbit_bfs(R, 3, IdealHandle(R, [0]))
    assert len(c.rows) == 1 and c.orbit_count == 1
    assert c.values(c.rows[0]) == (1, 0, 0)


def test_relative_stabilizes():
    R = IntegersMod(4)
    assert relative_stabilized(R, 3, IdealHandle(R, [2]), outer_length=1)


def test_canonical_is_least():
    c = orbit_bfs(IntegersMod(2), 3)
    assert c.values(c.canonical(0)) == min(c.values(r) for r in c.rows)


def test_certificate_path():
    R = IntegersMod(2)
    c = orbit_bfs(R, 3)
    cert = certificate_path(c, (1, 1, 0), (1, 0, 0))
    assert cert.verify()
    assert cert.source.v == (1, 1, 0) and cert.target.v == (1, 0, 0)
    assert certificate_path(c, (0, 1, 1), (0, 1, 1)).word.letters == ()
    with pytest.raises(RowAbsent):
        certificate_path(c, (0, 0, 0), (1, 0, 0))


def test_restricted_letters_disconnect():
    R = IntegersMod(4)
    c = orbit_bfs(R, 2, lambdas=[2])
    assert c.orbit_count == len(elementary_orbits(4, 2, lams=[2])) > 1
    a = c.values(c.canonical(0))
    b = c.values(c.canonical(1))
    with pytest.raises(NotEquivalent):
        certificate_path(c, a, b)


def test_additive_letters_match_all():
    R = IntegersMod(9)
    assert orbit_bfs(R, 2, lambdas="additive").orbit == orbit_bfs(R, 2).orbit


def test_census_file_round_trip(tmp_path):
    c = orbit_bfs(IntegersMod(4), 3)
    p = tmp_path / "c.txt"
    text = write_census(c, str(p))
    assert text.startswith("# census ")
    back = read_census(str(p))
    assert back.orbit == c.orbit and back.parent == c.parent
    assert verify_census(back)
    again = orbit_bfs(IntegersMod(4), 3)
    assert write_census(again, str(tmp_path / "d.txt")) == text


def test_l411():
    rep = lemma_experiment("L411", {"ring": IntegersMod(6), "I": [3], "J": [2], "n": 3})
    assert rep.ok
    assert any("diagonal" in a["claim"] for a in rep.assertions)


def test_ij():
    rep = lemma_experiment("IJ", {"ring": IntegersMod(4), "I": [2], "J": [2], "n": 3})
    assert rep.ok


def test_hypothesis_gates():
    with pytest.raises(HypothesisViolated):
        lemma_experiment("L411", {"ring": IntegersMod(6), "I": [2], "J": [2], "n": 3})
    R, S = IntegersMod(4), IntegersMod(2)
    with pytest.raises(HypothesisViolated):
        lemma_experiment("retract", {"ring": R, "target": S, "q": lambda x: x % 2, "n": 3})


def test_retract_and_exact_sequence():
    E = parse_descriptor("excision(Z/4; 2)")
    B = E.base
    rep = lemma_experiment("retract", {"ring": E, "target": B, "q": lambda x: x[0],
                                       "section": lambda r: (r, B.zero()), "n": 3})
    assert rep.ok
    rep = lemma_experiment("exact_seq", {"ring": IntegersMod(4), "ideal": [2], "n": 3})
    assert rep.ok
