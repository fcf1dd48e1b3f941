import itertools
import json

import pytest

from finsplit.errors import HypothesisViolated, SpaceMismatch, ValidationFailed
from finsplit.multifunction import MultiMap, is_continuous, mm_combine
from finsplit.multisplit import is_pre_multi_split
from finsplit.splithomeo import (
    ReglueDatum,
    all_bijections,
    identity_datum,
    inverse_star,
    is_quotient_map,
    is_split_homeo,
    reglue_from_splithomeo,
    reglue_reverse,
    reglue_transitive,
    save_datum,
    split_homeomorphic,
    splithomeo_from_reglue,
    validate_reglue,
)
from finsplit.suite import enumerate_topologies
from finsplit.topology import PointMap, discrete, quotient_space, sierpinski


@pytest.fixture
def arc():
    """Four cut points glued into two points in two different ways."""
    Z = discrete(["z1", "z2", "z3", "z4"])
    X = discrete(["x1", "x2"])
    Y = discrete(["y1", "y2"])
    pX = PointMap.from_labels(Z, X, {"z1": "x1", "z2": "x1", "z3": "x2", "z4": "x2"})
    pY = PointMap.from_labels(Z, Y, {"z1": "y1", "z4": "y1", "z2": "y2", "z3": "y2"})
    pXinv = PointMap.from_labels(X, Z, {"x1": "z1", "x2": "z3"})
    return ReglueDatum(Z, pX, pY, pXinv)


def test_split_homeo_examples():
    for S, T in itertools.product(enumerate_topologies(3), repeat=2):
        ident = PointMap(S, T, (0, 1, 2))
        assert is_split_homeo(ident)
        assert is_split_homeo(ident, "definitional")
    S = sierpinski()
    assert not is_split_homeo(PointMap.constant(S, S, "a"))
    swap = PointMap.from_labels(discrete(2), discrete(2), {"0": "1", "1": "0"})
    assert is_continuous(swap) and is_split_homeo(swap)


def test_equivalence_relation_laws():
    spaces = list(enumerate_topologies(3))[::3]
    for A, B, C in itertools.product(spaces, repeat=3):
        for f in all_bijections(A, B):
            assert is_split_homeo(f.inverse())
            for g in itertools.islice(all_bijections(B, C), 2):
                assert is_split_homeo(g.after(f))


def test_cardinality_theorem():
    spaces = [S for n in (1, 2, 3) for S in enumerate_topologies(n)]
    for S, T in itertools.product(spaces, repeat=2):
        v = split_homeomorphic(S, T)
        assert bool(v) == (S.n == T.n)
        if v:
            assert is_split_homeo(v.witness, "definitional")


def test_inverse_star():
    D2 = discrete(2)
    assert inverse_star(PointMap.identity(D2), "0").labels() == ["0"]
    swap = PointMap.from_labels(D2, D2, {"0": "1", "1": "0"})
    assert inverse_star(swap, "0").labels() == ["1"]
    D3 = discrete(3)
    for f in all_bijections(D3, D3):
        g = f.inverse()
        for y in D3.points:
            assert inverse_star(f, y).labels() == [g(y)]
    with pytest.raises(HypothesisViolated):
        inverse_star(PointMap.identity(sierpinski()), "a")
    with pytest.raises(HypothesisViolated):
        inverse_star(PointMap.constant(D2, D2, "0"), "0")


def test_reglue_from_identity():
    D2 = discrete(2)
    d = reglue_from_splithomeo(PointMap.identity(D2))
    assert d.Z.n == 2 and d.Z.points == ("(0,0)", "(1,1)")
    assert d.pX.is_bijective and d.pY.is_bijective
    assert validate_reglue(d).ok


def test_reglue_from_permutations():
    D3 = discrete(3)
    for f in all_bijections(D3, D3):
        d = reglue_from_splithomeo(f)
        assert d.Z.n == 3
        assert d.derived == f
        assert d.pX.is_bijective and d.pY.is_bijective
    with pytest.raises(HypothesisViolated):
        reglue_from_splithomeo(PointMap.identity(sierpinski()))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_round_trip(n):
    X = discrete(n)
    Y = discrete([chr(ord("a") + i) for i in range(n)])
    for f in all_bijections(X, Y):
        assert splithomeo_from_reglue(reglue_from_splithomeo(f)) == f


def test_arc_datum(arc):
    rep = validate_reglue(arc)
    assert rep.ok and rep.failed() == []
    f = splithomeo_from_reglue(arc)
    assert f.as_dict() == {"x1": "y1", "x2": "y2"}
    assert arc.pY.after(arc.pYinv) == PointMap.identity(arc.Y)


def test_trivial_datum():
    S = discrete(3)
    assert splithomeo_from_reglue(identity_datum(S)) == PointMap.identity(S)


def test_validation_failures(arc):
    bad = ReglueDatum(arc.Z, arc.pX, arc.pY, PointMap.from_labels(arc.X, arc.Z, {"x1": "z3", "x2": "z1"}))
    rep = validate_reglue(bad)
    assert not rep.right_inverse and rep.failed() == ["right_inverse"]
    with pytest.raises(ValidationFailed):
        splithomeo_from_reglue(bad)
    X3 = discrete(3)
    pX = PointMap(arc.Z, X3, (0, 0, 1, 1))
    d = ReglueDatum(arc.Z, pX, arc.pY, PointMap(X3, arc.Z, (0, 2, 2)))
    rep = validate_reglue(d)
    assert not rep.px_surjective and not rep.px_quotient
    # gluing that collapses both picks onto one point of Y
    pXinv = PointMap.from_labels(arc.X, arc.Z, {"x1": "z1", "x2": "z4"})
    rep = validate_reglue(ReglueDatum(arc.Z, arc.pX, arc.pY, pXinv))
    assert rep.failed() == ["bijective"]
    other = ReglueDatum(arc.Z, arc.pX, arc.pY, PointMap(discrete(2), arc.Z, (0, 2)))
    assert validate_reglue(other).failed()[0] == "spaces_consistent"


def test_discontinuous_projection_flagged():
    S = sierpinski()
    D = discrete(2)
    pX = PointMap.from_labels(S, D, {"a": "0", "b": "1"})
    ident = PointMap.identity(S)
    d = ReglueDatum(S, pX, ident, PointMap.from_labels(D, S, {"0": "a", "1": "b"}))
    rep = validate_reglue(d)
    assert not rep.px_continuous and not rep.px_quotient and rep.py_quotient


def test_quotient_map_against_brute_force():
    for Z in enumerate_topologies(3):
        for T in enumerate_topologies(2):
            for t in itertools.product(range(2), repeat=3):
                p = PointMap(Z, T, t)
                brute = p.is_surjective and all(
                    T.is_open(b) == Z.is_open(p.preimage_mask(b)) for b in range(4)
                )
                assert is_quotient_map(p, exhaustive=False) == brute
    Z = discrete(4)
    for part in ([[0, 1], [2, 3]], [[0], [1, 2, 3]]):
        Q, proj = quotient_space(Z, [[str(i) for i in c] for c in part])
        assert is_quotient_map(proj)


def test_transitive_identity():
    d = identity_datum(discrete(2))
    c = reglue_transitive(d, d)
    assert c.Z.n == 4
    assert c.derived == PointMap.identity(discrete(2))
    assert validate_reglue(c).ok


def test_transitive_with_reverse(arc):
    back = reglue_reverse(arc)
    assert back.derived == arc.derived.inverse()
    c = reglue_transitive(arc, back)
    assert c.derived == PointMap.identity(arc.X)


def test_transitive_with_permutation(arc):
    swap = PointMap.from_labels(arc.Y, arc.Y, {"y1": "y2", "y2": "y1"})
    c = reglue_transitive(arc, reglue_from_splithomeo(swap))
    assert c.derived == swap.after(arc.derived)
    assert validate_reglue(c).ok
    with pytest.raises(SpaceMismatch):
        reglue_transitive(arc, identity_datum(discrete(3)))


def test_transitive_exhaustive_three_points():
    X, Y, W = discrete(3), discrete(["a", "b", "c"]), discrete(["u", "v", "w"])
    for f in all_bijections(X, Y):
        for g in all_bijections(Y, W):
            c = reglue_transitive(reglue_from_splithomeo(f), reglue_from_splithomeo(g))
            assert validate_reglue(c).ok
            assert c.derived == g.after(f)


def test_finitely_many_bijections_union_of_inverses():
    S = sierpinski()
    D = discrete(2)
    f1 = PointMap.from_labels(D, S, {"0": "a", "1": "b"})
    f2 = PointMap.from_labels(D, S, {"0": "b", "1": "a"})
    union = mm_combine(MultiMap.from_map(f1.inverse()), MultiMap.from_map(f2.inverse()))
    assert is_pre_multi_split(union).ok


def test_save_datum(tmp_path, arc):
    path = save_datum(arc, tmp_path, "arc")
    rec = json.loads(path.read_text())
    assert rec == {"Z": "arc_Z", "pX": "arc_pX", "pY": "arc_pY", "pXinv": "arc_pXinv"}
    fn = json.loads((tmp_path / "arc_pXinv.json").read_text())
    assert fn == {"domain": "arc_X", "codomain": "arc_Z", "map": {"x1": "z1", "x2": "z3"}}
    assert {p.name for p in tmp_path.iterdir()} == {
        "arc.json", "arc_Z.json", "arc_X.json", "arc_Y.json",
        "arc_pX.json", "arc_pY.json", "arc_pXinv.json",
    }
