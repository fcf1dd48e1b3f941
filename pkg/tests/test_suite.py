import json

import pytest

import oracles
from finsplit.errors import TooLarge, UnknownProperty
from finsplit.multisplit import weakened_fast_check
from finsplit.suite import (
    KNOWN_COUNTS,
    REGISTRY,
    decode,
    encode,
    enumerate_topologies,
    random_instance,
    replay,
    run_all,
    run_property,
)
from finsplit.topology import bits

PROPERTIES = [
    "P_reduction", "P_fp_inclusion", "P_interval", "P_unique", "P_compose", "P_xp",
    "P_star_usc", "P_star_usco_closed", "P_graph", "P_proj_closed", "P_finusc",
    "P_star_pms", "P_minusco", "P_cont_iff", "P_fto", "P_union", "P_sub_union",
    "P_invimg", "P_quot", "P_equiv6", "P_invstar", "P_equiv7", "P_roundtrip",
]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_topology_counts(n):
    spaces = list(enumerate_topologies(n))
    assert len(spaces) == KNOWN_COUNTS[n]
    assert len({S.minopen for S in spaces}) == len(spaces)


def test_enumeration_cap():
    with pytest.raises(TooLarge):
        list(enumerate_topologies(5))


def test_enumeration_is_preorders():
    # U_p ⊆ U_q iff p ≤ q defines a preorder, and every preorder on 3 points occurs
    seen = set()
    for S in enumerate_topologies(3):
        rel = frozenset((p, q) for q in range(3) for p in bits(S.minopen[q]))
        assert all((p, p) in rel for p in range(3))
        assert all((a, c) in rel for a, b in rel for b2, c in rel if b == b2)
        seen.add(rel)
    assert len(seen) == len(oracles.topologies("abc"))


def test_registry_complete():
    assert set(PROPERTIES) <= set(REGISTRY)
    for name in ("P_compact", "P_subcontinuous"):
        assert REGISTRY[name].note


def test_random_instance_determinism():
    assert random_instance(1, "space", n=5) == random_instance(1, "space", n=5)
    F = random_instance(7, "multimap", n=4, m=4)
    assert F.nonempty and F == random_instance(7, "multimap", n=4, m=4)
    f = random_instance("x", "map", n=3, m=2, discrete_codomain=True)
    assert f.codomain.is_discrete
    with pytest.raises(ValueError):
        random_instance(1, "widget")


def test_random_spaces_are_topologies():
    for seed in range(50):
        S = random_instance(seed, "space", n=6)
        opens = set(S.opens)
        for a in opens:
            for b in opens:
                assert a | b in opens and a & b in opens


def test_encode_roundtrip():
    f = random_instance(3, "map", n=4, m=3)
    data = json.loads(json.dumps(encode((f, f.domain))))
    g, X = decode(data)
    assert g == f and X == f.domain


@pytest.mark.parametrize("name", PROPERTIES)
def test_properties_hold(name):
    ex = run_property(name, "exhaustive", exhaustive_max=2)
    assert ex.passed, ex.failures[:1]
    rnd = run_property(name, "random", budget=25, seed=11)
    assert rnd.passed, rnd.failures[:1]
    assert rnd.trials == 25


def test_run_property_determinism():
    a = run_property("P_graph", "random", budget=50, seed=4)
    b = run_property("P_graph", "random", budget=50, seed=4)
    assert a == b
    assert json.dumps(a.to_dict()) == json.dumps(b.to_dict())


def test_unknown_property():
    with pytest.raises(UnknownProperty):
        run_property("P_nope")


def test_run_all_budget_zero_still_exhaustive():
    results = run_all(budget=0, exhaustive_max=1, names=["P_graph", "P_unique"])
    assert [r.mode for r in results] == ["exhaustive", "exhaustive"]
    assert all(r.passed and r.trials for r in results)


@pytest.mark.parametrize("which", ["drop_cluster", "drop_cover"])
def test_mutation_is_caught_and_replayable(which):
    with weakened_fast_check(which):
        ex = run_property("P_graph", "exhaustive", exhaustive_max=2)
        rnd = run_property("P_graph", "random", budget=40, seed=0)
        assert not ex.passed and not rnd.passed
        for record in ex.failures[:3] + rnd.failures[:3]:
            assert replay("P_graph", json.loads(json.dumps(record))) is False
    for record in ex.failures[:3] + rnd.failures[:3]:
        assert replay("P_graph", record) is True


def test_failure_records_are_complete():
    with weakened_fast_check("drop_cover"):
        r = run_property("P_agree", "random", budget=30, seed=2)
    assert r.failures
    rec = r.failures[0]
    assert set(rec) == {"mode", "seed", "error", "instance"}
    assert rec["seed"].startswith("2:P_agree:")
