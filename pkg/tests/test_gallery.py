from fractions import Fraction

import pytest

from finsplit.errors import BadSize, OutOfRange, UnknownExample
from finsplit.gallery import (
    CONSISTENT,
    circle_counts,
    circle_reglue_demo,
    comb_point,
    divergence_witness,
    f_weird_eval,
    f_weird_invariants,
    f_weird_star_check,
    parse_rat,
    rat,
    weird_index,
    weird_point,
)
from finsplit.splithomeo import splithomeo_from_reglue, validate_reglue


def forward_table(N, K):
    """Value -> (n, i), by running the sequence formula forwards."""
    out = {}
    for n in range(1, N + 1):
        for k in range(1, K + 1):
            for i in range(n + 1):
                m = (n + 1) * (k + 1) + i
                x = Fraction(1, n) - Fraction(1, (n + 1) * m)
                assert x not in out
                out[x] = (n, i)
    return out


def test_rat_roundtrip():
    assert rat(Fraction(3, 6)) == "1/2"
    assert rat(2) == "2/1"
    assert parse_rat("7/21") == Fraction(1, 3)


def test_eval_examples():
    assert f_weird_eval(Fraction(1, 2), 50) == (Fraction(1, 2), 0)
    q = weird_point(2, 1, 1)
    assert f_weird_eval(q, 50) == (q, Fraction(1, 4))
    assert f_weird_eval(0, 50) == (0, 0)
    assert f_weird_eval(1, 50) == (1, 0)
    with pytest.raises(OutOfRange):
        f_weird_eval(Fraction(3, 2), 5)
    with pytest.raises(OutOfRange):
        f_weird_eval(-1, 5)


def test_eval_against_forward_table():
    table = forward_table(8, 12)
    for x, (n, i) in table.items():
        assert f_weird_eval(x, 8) == (x, Fraction(i, n * n))
        assert f_weird_eval(x, n - 1) == (x, 0)
    # every other small rational is either off the sequences or found by the forward formula
    for b in range(2, 120):
        for a in range(1, b):
            q = Fraction(a, b)
            hit = weird_index(q)
            if hit is None:
                assert f_weird_eval(q, 8) == (q, 0)
            else:
                n, k, i = hit
                m = (n + 1) * (k + 1) + i
                assert Fraction(1, n) - Fraction(1, (n + 1) * m) == q
                assert f_weird_eval(q, 8)[1] == (Fraction(i, n * n) if n <= 8 else 0)


def test_index_inverts_point():
    for n in range(1, 12):
        for k in range(1, 30):
            for i in range(n + 1):
                assert weird_index(weird_point(n, k, i)) == (n, k, i)
    with pytest.raises(OutOfRange):
        weird_point(2, 1, 3)


def test_naive_offset_formula_collides():
    # 1/n - 1/(n+1) * 1/(k + n(n+3)/2 + i + 2) depends on k + i only
    def naive(n, k, i):
        return Fraction(1, n) - Fraction(1, n + 1) * Fraction(1, k + n * (n + 3) // 2 + i + 2)

    assert naive(2, 2, 0) == naive(2, 1, 1)
    assert weird_point(2, 2, 0) != weird_point(2, 1, 1)


def test_invariants():
    inv = f_weird_invariants(40, 50)
    assert inv == {"generated": sum(50 * (n + 1) for n in range(1, 41)),
                   "distinct": True, "contained": True, "half_hit": False}


@pytest.mark.parametrize("n, K", [(1, 100), (5, 100), (40, 50)])
def test_star_sizes(n, K):
    rep = f_weird_star_check(n, K)
    assert rep.passed and rep.verdict == "pass"
    assert rep.summary["star_size"] == n + 1
    want = sorted((Fraction(1, n), Fraction(i, n * n)) for i in range(n + 1))
    got = sorted((parse_rat(a), parse_rat(b)) for a, b in rep.summary["star"])
    assert got == want
    assert rep.evidence


def test_star_unbounded_near_zero():
    sizes = [f_weird_star_check(n, 5).summary["star_size"] for n in (1, 10, 100)]
    assert sizes == [2, 11, 101]


@pytest.mark.parametrize("name, N", [("one_over_n", 1000), ("quotient_line", 1000), ("comb_space", 50)])
def test_divergence_witnesses(name, N):
    rep = divergence_witness(name, N)
    assert rep.verdict == CONSISTENT
    assert rep.depth == N and rep.evidence
    d = rep.to_dict()
    assert d["claim"] == name


def test_divergence_details():
    assert divergence_witness("one_over_n", 1000).summary["min_value"] == "1/1000"
    assert divergence_witness("quotient_line", 1000).summary["max_value"] == "1000/1"
    s = divergence_witness("comb_space", 50).summary
    assert s["cluster_points"] == 50 and s["distinct"]
    with pytest.raises(UnknownExample):
        divergence_witness("nope", 5)
    with pytest.raises(OutOfRange):
        divergence_witness("one_over_n", 1)


def test_comb_points():
    seen = set()
    for n in range(1, 30):
        prev = None
        for k in range(1, 30):
            x = comb_point(n, k)
            assert 0 < x < Fraction(1, n)
            assert prev is None or x < prev
            prev = x
            seen.add(x)
    assert len(seen) == 29 * 29


@pytest.mark.parametrize("n, size", [(4, 6), (6, 10), (10, 18)])
def test_circle(n, size):
    d = circle_reglue_demo(n)
    assert circle_counts(d) == {"Z": 2 * n, "X": size, "Y": size, "bijective": True}
    assert validate_reglue(d).ok
    f = splithomeo_from_reglue(d)
    assert f.is_bijective


def test_circle_shapes():
    d = circle_reglue_demo(4)
    # two classes of X have two points each; the rest are single cut points
    fibres = sorted(bin(d.pX.preimage_mask(1 << x)).count("1") for x in range(d.X.n))
    assert fibres == [1, 1, 1, 1, 2, 2]
    fibres = sorted(bin(d.pY.preimage_mask(1 << y)).count("1") for y in range(d.Y.n))
    assert fibres == [1, 1, 1, 1, 2, 2]


@pytest.mark.parametrize("n", [3, 2, 5])
def test_circle_bad_size(n):
    with pytest.raises(BadSize):
        circle_reglue_demo(n)
