import json
import os
import subprocess
import sys
from itertools import product

import pytest

from finsplit import _kernels
from finsplit.multifunction import MultiMap, Selections
from finsplit.multisplit import (
    _certify,
    _certify_python,
    cond_a_definitional,
    cond_b_definitional,
    is_pre_multi_split,
)
from finsplit.suite import enumerate_topologies, random_instance, sweep_pair
from finsplit.topology import PointMap, discrete

# Runs in both the parent and a child with the compiled kernels switched off.
PROBE = r"""
import json, random
from finsplit import _kernels
from finsplit.multisplit import _certify
from finsplit.suite import enumerate_topologies, random_instance, sweep_pair
spaces = list(enumerate_topologies(3))[::4] + list(enumerate_topologies(2))
sweeps = [list(sweep_pair(X, Y, m)) for X in spaces for Y in spaces for m in (0, 1, 2)]
certs = []
for seed in range(40):
    F = random_instance(seed, "multimap", n=4, m=3)
    targets = [F.codomain.hull(v) for v in F.table]
    certs.append(list(_certify(F, list(range(4)), targets, 10**6)))
print(json.dumps({"accelerated": _kernels.ACCELERATED, "sweeps": sweeps, "certs": certs}))
"""


def run_probe(disable: bool) -> dict:
    env = dict(os.environ)
    env.pop("FINSPLIT_DISABLE_NUMBA", None)
    if disable:
        env["FINSPLIT_DISABLE_NUMBA"] = "1"
    out = subprocess.run([sys.executable, "-c", PROBE], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def test_fallback_agrees_with_compiled():
    fast = run_probe(False)
    slow = run_probe(True)
    assert slow["accelerated"] is False
    assert fast["sweeps"] == slow["sweeps"]
    assert fast["certs"] == slow["certs"]


def test_sweep_counts_against_python_definition():
    spaces = list(enumerate_topologies(2))
    for X in spaces:
        for Y in spaces:
            checks, mismatches, *_ = sweep_pair(X, Y)
            assert mismatches == 0
            # every map, point and non-empty subset is visited
            assert checks == Y.n ** X.n * X.n * ((1 << Y.n) - 1)


def test_sweep_definitional_side_matches_python():
    for X in list(enumerate_topologies(3))[::5]:
        for Y in list(enumerate_topologies(2)):
            for t in product(range(Y.n), repeat=X.n):
                f = PointMap(X, Y, t)
                for p in range(X.n):
                    for z in range(1, 1 << Y.n):
                        d = cond_a_definitional(f, p, z) and cond_b_definitional(f, p, z)
                        fu = f.image_mask(X.minopen[p])
                        k = bool(_kernels.ev_fast(fu, Y.cl(fu), z, _kernels.as_array(Y.minopen), Y.n, 0))
                        assert d == k


def test_certify_matches_python_loop():
    for seed in range(30):
        F = random_instance(seed, "multimap", n=4, m=3)
        sel = Selections(F)
        targets = [F.codomain.hull(v) for v in F.table]
        assert tuple(_certify(F, list(range(4)), targets, 10**6)) == tuple(
            _certify_python(sel, F.domain, list(range(4)), targets)
        )


def test_fits():
    assert _kernels.fits(3, 5)
    assert not _kernels.fits(70)


def test_wide_multimap_uses_interpreted_path():
    if not _kernels.ACCELERATED:
        pytest.skip("compiled kernels disabled")
    X = discrete(2)
    Y = discrete(64)
    F = MultiMap(X, Y, (1, 3 << 62))
    assert is_pre_multi_split(F).ok
