"""Registered properties, checked exhaustively on small spaces and at random.

Each property is a theorem, so a single failure means an implementation bug.
A property supplies an exhaustive instance stream (bounded by a per-property
size cap), a random generator driven by a per-trial seed, and a check.
Failures are recorded with the seed and the full instance data so they can
be replayed.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable, Iterable, Iterator

from . import _kernels
from .errors import InternalMismatch, SearchSpaceTooLarge, TooLarge, UnknownProperty
from .multifunction import (
    DEFAULT_CAP,
    MultiMap,
    Selections,
    graph_closure_by_rectangles,
    graph_closure_mask,
    has_closed_graph,
    inverse_image_multifunction,
    is_closed_map,
    is_continuous,
    is_continuous_by_opens,
    is_usc,
    is_usco,
    mm_combine,
    usc_at_definitional,
    usc_at_mask,
)
from .multisplit import (
    all_ev_choices,
    compose_ev,
    cond_a_definitional,
    cond_b_definitional,
    continuity_equivalence,
    ev_masks,
    extract_ev,
    graph_projection_check,
    image_of_minopen,
    is_pre_multi_split,
    star,
    tilde_z_set,
    tilde_z_set_definitional,
    xp_set,
    xp_set_by_neighborhoods,
)
from .splithomeo import (
    identity_datum,
    inverse_star,
    is_split_homeo,
    reglue_from_splithomeo,
    reglue_reverse,
    reglue_transitive,
    split_homeomorphic,
    splithomeo_from_reglue,
    validate_reglue,
)
from .topology import (
    FinSpace,
    PointMap,
    PointSet,
    bits,
    discrete,
    product,
    quotient_space,
    space_from_minopen,
    submasks,
    subspace,
)

KNOWN_COUNTS = {0: 1, 1: 1, 2: 4, 3: 29, 4: 355}
ENUMERATION_MAX = 4


# ---------------------------------------------------------------------------
# enumeration


@lru_cache(maxsize=None)
def _topologies(n: int) -> tuple[FinSpace, ...]:
    labels = [str(i) for i in range(n)]
    options = [[u | 1 << p for u in _masks_without(n, p)] for p in range(n)]
    out = []
    for table in itertools.product(*options):
        if all(table[q] & ~table[p] == 0 for p in range(n) for q in bits(table[p])):
            out.append(space_from_minopen(labels, table, f"T{n}_{len(out)}"))
    if len(out) != KNOWN_COUNTS[n]:
        raise InternalMismatch(f"found {len(out)} topologies on {n} points, expected {KNOWN_COUNTS[n]}")
    return tuple(out)


def _masks_without(n: int, p: int) -> list[int]:
    return [m for m in range(1 << n) if not m >> p & 1]


def enumerate_topologies(n: int) -> Iterator[FinSpace]:
    """Every labelled topology on ``n`` points, once each.

    A table of minimal opens with ``p ∈ U_p`` and ``q ∈ U_p ⇒ U_q ⊆ U_p`` is
    exactly a preorder, hence exactly a topology.
    """
    if n > ENUMERATION_MAX:
        raise TooLarge(f"enumeration is limited to {ENUMERATION_MAX} points")
    if n < 1:
        raise ValueError("need at least one point")
    return iter(_topologies(n))


def spaces_upto(max_n: int) -> Iterator[FinSpace]:
    for n in range(1, max_n + 1):
        yield from enumerate_topologies(n)


def discretes_upto(max_n: int) -> Iterator[FinSpace]:
    for n in range(1, max_n + 1):
        yield discrete(n)


def all_maps(X: FinSpace, Y: FinSpace) -> Iterator[PointMap]:
    for t in itertools.product(range(Y.n), repeat=X.n):
        yield PointMap(X, Y, t)


def all_multimaps(X: FinSpace, Y: FinSpace, allow_empty: bool = False) -> Iterator[MultiMap]:
    values = range(0 if allow_empty else 1, 1 << Y.n)
    for t in itertools.product(values, repeat=X.n):
        yield MultiMap(X, Y, t)


# ---------------------------------------------------------------------------
# random generation


def random_space(rng: random.Random, n: int, discrete_only: bool = False) -> FinSpace:
    """Alexandrov space of the reflexive-transitive closure of a random relation."""
    if discrete_only:
        return discrete(n)
    density = rng.choice((0.0, 0.1, 0.25, 0.5, 0.8))
    below = [1 << p for p in range(n)]
    for p in range(n):
        for q in range(n):
            if p != q and rng.random() < density:
                below[p] |= 1 << q
    # transitive closure: U_p absorbs U_q for q in U_p until stable
    changed = True
    while changed:
        changed = False
        for p in range(n):
            acc = below[p]
            for q in bits(below[p]):
                acc |= below[q]
            if acc != below[p]:
                below[p] = acc
                changed = True
    return space_from_minopen([str(i) for i in range(n)], below)


def random_map(rng: random.Random, X: FinSpace, Y: FinSpace) -> PointMap:
    return PointMap(X, Y, tuple(rng.randrange(Y.n) for _ in range(X.n)))


def random_multimap(rng: random.Random, X: FinSpace, Y: FinSpace, allow_empty: bool = False) -> MultiMap:
    lo = 0 if allow_empty else 1
    return MultiMap(X, Y, tuple(rng.randrange(lo, 1 << Y.n) for _ in range(X.n)))


def saturate_usc(F: MultiMap) -> MultiMap:
    """``G(p) = F(U_p)``: the smallest u.s.c. multimap containing ``F``."""
    X = F.domain
    return MultiMap(X, F.codomain, tuple(F.image_mask(X.minopen[p]) for p in range(X.n)))


def random_instance(seed, shape: str, n: int = 4, m: int | None = None,
                    allow_empty: bool = False, discrete_codomain: bool = False):
    """Deterministic random space, map or multimap for a given seed."""
    rng = random.Random(seed)
    m = n if m is None else m
    if shape == "space":
        return random_space(rng, n)
    X = random_space(rng, n)
    Y = random_space(rng, m, discrete_only=discrete_codomain)
    if shape == "map":
        return random_map(rng, X, Y)
    if shape == "multimap":
        return random_multimap(rng, X, Y, allow_empty)
    raise ValueError(f"unknown shape {shape!r}")


# ---------------------------------------------------------------------------
# instance serialisation


def encode(obj) -> Any:
    if isinstance(obj, FinSpace):
        return {"space": list(obj.points), "minopen": list(obj.minopen)}
    if isinstance(obj, PointMap):
        return {"map": list(obj.table), "domain": encode(obj.domain), "codomain": encode(obj.codomain)}
    if isinstance(obj, MultiMap):
        return {"multimap": list(obj.table), "domain": encode(obj.domain), "codomain": encode(obj.codomain)}
    if isinstance(obj, (list, tuple)):
        return [encode(x) for x in obj]
    return obj


def decode(data) -> Any:
    if isinstance(data, dict):
        if "space" in data:
            return space_from_minopen(data["space"], data["minopen"])
        if "map" in data:
            return PointMap(decode(data["domain"]), decode(data["codomain"]), tuple(data["map"]))
        if "multimap" in data:
            return MultiMap(decode(data["domain"]), decode(data["codomain"]), tuple(data["multimap"]))
        return data
    if isinstance(data, list):
        return tuple(decode(x) for x in data)
    return data


# ---------------------------------------------------------------------------
# registry


class Skip(Exception):
    """The instance is outside the searchable range (counted, not failed)."""


@dataclass(frozen=True)
class Property:
    name: str
    statement: str
    check: Callable[..., bool]
    exhaustive: Callable[[int], Iterable[tuple]] | None
    random: Callable[[random.Random], tuple] | None
    exhaustive_cap: int = 3
    note: str = ""


REGISTRY: dict[str, Property] = {}


def register(name, statement, exhaustive=None, rand=None, cap=3, note=""):
    def deco(check):
        REGISTRY[name] = Property(name, statement, check, exhaustive, rand, cap, note)
        return check

    return deco


def _expect(cond: bool, msg: str) -> None:
    if not cond:
        raise AssertionError(msg)


# instance streams -------------------------------------------------------------


def maps_any(max_n: int) -> Iterator[tuple]:
    for X in spaces_upto(max_n):
        for Y in spaces_upto(max_n):
            for f in all_maps(X, Y):
                yield (f,)


def maps_disc(max_n: int) -> Iterator[tuple]:
    for X in spaces_upto(max_n):
        for Y in discretes_upto(max_n):
            for f in all_maps(X, Y):
                yield (f,)


def rand_map_any(max_n: int):
    def gen(rng):
        X = random_space(rng, rng.randint(1, max_n))
        Y = random_space(rng, rng.randint(1, max_n))
        return (random_map(rng, X, Y),)

    return gen


def rand_map_disc(max_n: int):
    def gen(rng):
        X = random_space(rng, rng.randint(1, max_n))
        Y = discrete(rng.randint(1, max_n))
        return (random_map(rng, X, Y),)

    return gen


def usc_multimaps(max_n: int) -> Iterator[tuple]:
    for X in spaces_upto(max_n):
        for Y in spaces_upto(max_n):
            for F in all_multimaps(X, Y):
                if all(usc_at_mask(F, p) for p in range(X.n)):
                    yield (F,)


def rand_usc_multimap(max_n: int, max_m: int | None = None):
    def gen(rng):
        X = random_space(rng, rng.randint(1, max_n))
        Y = random_space(rng, rng.randint(1, max_m or max_n))
        F = random_multimap(rng, X, Y)
        return (saturate_usc(F) if rng.random() < 0.8 else F,)

    return gen


# properties -------------------------------------------------------------------


@register("P_reduction", "a set satisfying only the covering condition shrinks to a set of extended values",
          exhaustive=maps_any, rand=rand_map_any(4), cap=2)
def _p_reduction(f: PointMap) -> bool:
    Y = f.codomain
    for p in range(f.domain.n):
        fam = set(ev_masks(f, p))
        some_b = False
        for z in range(1, 1 << Y.n):
            if cond_b_definitional(f, p, z):
                some_b = True
                e = extract_ev(f, p, PointSet(Y, z)).mask
                _expect(e and e & ~z == 0, "extracted set is empty or not a subset")
                _expect(cond_a_definitional(f, p, e) and cond_b_definitional(f, p, e),
                        "extracted set is not a set of extended values")
                _expect(e in fam, "fast family misses the extracted set")
        _expect(some_b == bool(fam), "condition (b) alone and the family disagree on existence")
    return True


@register("P_fp_inclusion", "adding f(p) to a set of extended values keeps it one",
          exhaustive=maps_any, rand=rand_map_any(5))
def _p_fp_inclusion(f: PointMap) -> bool:
    for p in range(f.domain.n):
        fam = set(ev_masks(f, p))
        fp = 1 << f.table[p]
        _expect(bool(fam), "empty family on a finite codomain")
        for z in fam:
            _expect(z | fp in fam, "Z ∪ {f(p)} dropped out of the family")
    return True


@register("P_interval", "every set between a member and the union of two members is a member",
          exhaustive=maps_any, rand=rand_map_any(4))
def _p_interval(f: PointMap) -> bool:
    for p in range(f.domain.n):
        fam = ev_masks(f, p)
        members = set(fam)
        for a, b in itertools.product(fam, repeat=2):
            top = a | b
            free = top & ~a
            for extra in itertools.chain([0], submasks(free)):
                _expect(a | extra in members, "interval member missing")
    return True


@register("P_unique", "into a Hausdorff space the set of extended values is unique and equals f(U_p)",
          exhaustive=maps_disc, rand=rand_map_disc(6))
def _p_unique(f: PointMap) -> bool:
    for p in range(f.domain.n):
        fam = ev_masks(f, p)
        fu = image_of_minopen(f, p)
        _expect(fam == [fu], "family is not the single set f(U_p)")
        _expect(xp_set(f, p).mask == fu, "explicit set differs from f(U_p)")
        _expect(f.table[p] in bits(fu), "f(p) is not in its star value")
    return True


def compose_instances(max_n: int) -> Iterator[tuple]:
    spaces = list(spaces_upto(max_n))
    for X, Y, W in itertools.product(spaces, repeat=3):
        for f in all_maps(X, Y):
            for g in all_maps(Y, W):
                yield (f, g)


def rand_compose(max_n: int):
    def gen(rng):
        X, Y, W = (random_space(rng, rng.randint(1, max_n)) for _ in range(3))
        return (random_map(rng, X, Y), random_map(rng, Y, W))

    return gen


@register("P_compose", "the union of chosen extended values of g over those of f covers g∘f",
          exhaustive=compose_instances, rand=rand_compose(5), cap=2)
def _p_compose(f: PointMap, g: PointMap, *, sample: random.Random | None = None) -> bool:
    gf = g.after(f)
    for p in range(f.domain.n):
        fams_f = ev_masks(f, p)
        picks = fams_f if sample is None else [sample.choice(fams_f)]
        for zf in picks:
            choices = list(all_ev_choices(g, zf)) if sample is None else [
                {y: sample.choice(ev_masks(g, y)) for y in bits(zf)}
            ]
            for choice in choices:
                chosen = {y: PointSet(g.codomain, z) for y, z in choice.items()}
                zt = compose_ev(f, g, p, PointSet(f.codomain, zf), chosen).mask
                _expect(cond_b_definitional(gf, p, zt), "composed set fails condition (b) for g∘f")
                e = extract_ev(gf, p, PointSet(g.codomain, zt)).mask
                _expect(e in ev_masks(gf, p), "reduction of the composed set is not a member")
    return True


@register("P_xp", "the explicit set is cl(f(U_p)), the intersection over neighbourhoods, and the approached points",
          exhaustive=maps_any, rand=rand_map_any(4))
def _p_xp(f: PointMap) -> bool:
    Y = f.codomain
    for p in range(f.domain.n):
        xp = xp_set(f, p).mask
        _expect(xp == xp_set_by_neighborhoods(f, p).mask, "neighbourhood intersection differs")
        approached = 0
        for y in range(Y.n):
            if cond_a_definitional(f, p, 1 << y):
                approached |= 1 << y
        _expect(xp == approached, "explicit set differs from the approached points")
        _expect(all(z & ~xp == 0 for z in ev_masks(f, p)), "a member leaves the explicit set")
    return True


@register("P_star_usc", "the star multifunction is upper semicontinuous",
          exhaustive=maps_disc, rand=rand_map_disc(6))
def _p_star_usc(f: PointMap) -> bool:
    F = star(f)
    _expect(bool(is_usc(F)), "star fails the fast test")
    _expect(bool(is_usc(F, strategy="definitional")), "star fails the definitional test")
    return True


@register("P_star_usco_closed", "the star multifunction is usco and has a closed graph",
          exhaustive=maps_disc, rand=rand_map_disc(6))
def _p_star_usco_closed(f: PointMap) -> bool:
    F = star(f)
    _expect(bool(is_usco(F)), "star is not usco")
    _expect(has_closed_graph(F), "star graph is not closed")
    _expect(graph_closure_by_rectangles(F) == F.graph_mask(), "product-space closure disagrees")
    return True


@register("P_graph", "the closure of the graph of f is the graph of its star",
          exhaustive=maps_disc, rand=rand_map_disc(6))
def _p_graph(f: PointMap) -> bool:
    F = MultiMap.from_map(f)
    cl = graph_closure_by_rectangles(F)
    _expect(cl == graph_closure_mask(F), "rectangle formula and product closure disagree")
    _expect(cl == star(f).graph_mask(), "cl(gr f) differs from gr(f*)")
    return True


@register("P_proj_closed", "the projection from the graph of the star to the domain is closed",
          exhaustive=maps_disc, rand=rand_map_disc(5))
def _p_proj_closed(f: PointMap) -> bool:
    X, Y = f.domain, f.codomain
    P = product(X, Y)
    Z, incl = subspace(P, star(f).graph_mask())
    pi = PointMap(Z, X, tuple(i // Y.n for i in incl.table))
    _expect(is_closed_map(pi), "projection is not closed (pointwise)")
    _expect(is_closed_map(pi, strategy="brute"), "projection is not closed (all closed sets)")
    return True


def _selection_count(F: MultiMap) -> int:
    return math.prod(v.bit_count() for v in F.table)


@register("P_finusc", "a non-empty u.s.c. multimap is pre-multi-split, certified by Z = F(p)",
          exhaustive=usc_multimaps, rand=rand_usc_multimap(4, 4), cap=2)
def _p_finusc(F: MultiMap) -> bool:
    if not all(usc_at_mask(F, p) for p in range(F.domain.n)):
        return True  # hypothesis not met; the theorem says nothing
    try:
        report = is_pre_multi_split(F, cap=DEFAULT_CAP)
    except SearchSpaceTooLarge:
        raise Skip(f"{_selection_count(F)} selections")
    _expect(report.ok and report.certified, "F(p) does not certify condition (b) for some selection")
    # oracle on a few selections: the definitional covering condition
    sel = Selections(F)
    step = max(1, len(sel) // 8)
    for s_index in range(0, len(sel), step):
        s = sel[s_index]
        for p in range(F.domain.n):
            _expect(cond_b_definitional(s, p, F.table[p]), "definitional condition (b) fails")
    return True


@register("P_star_pms", "the star of a map into a Hausdorff space is pre-multi-split",
          exhaustive=maps_disc, rand=rand_map_disc(5))
def _p_star_pms(f: PointMap) -> bool:
    report = is_pre_multi_split(star(f))
    _expect(report.ok and report.certified, "star is not pre-multi-split with its own values")
    return True


def minusco_instances(max_n: int) -> Iterator[tuple]:
    for X in spaces_upto(max_n):
        for Y in discretes_upto(max_n):
            for G in all_multimaps(X, Y):
                yield (G,)


def rand_minusco(max_n: int):
    def gen(rng):
        X = random_space(rng, rng.randint(1, max_n))
        Y = discrete(rng.randint(1, max_n))
        f = random_map(rng, X, Y)
        G = star(f) if rng.random() < 0.5 else saturate_usc(random_multimap(rng, X, Y))
        return (G,)

    return gen


@register("P_minusco", "every selection of a minimal usco map into a Hausdorff space has that map as its star",
          exhaustive=minusco_instances, rand=rand_minusco(4), cap=2)
def _p_minusco(G: MultiMap) -> bool:
    try:
        minimal = is_usco(G, mode="minimal")
    except SearchSpaceTooLarge:
        raise Skip("too many submultifunctions")
    if not minimal:
        return True
    for s in Selections(G):
        _expect(star(s).table == G.table, "a selection's star differs from the minimal usco map")
    return True


@register("P_cont_iff", "f is continuous iff it is multi-split continuous with a closed graph",
          exhaustive=maps_disc, rand=rand_map_disc(6))
def _p_cont_iff(f: PointMap) -> bool:
    cont, msc_closed = continuity_equivalence(f)
    _expect(cont == msc_closed, "continuity and multi-split-with-closed-graph disagree")
    _expect(cont == is_continuous_by_opens(f), "continuity checks disagree")
    return True


@register("P_fto", "the projection restricted to cl(gr f) is finite-to-one with fibres f*(p)",
          exhaustive=maps_disc, rand=rand_map_disc(6))
def _p_fto(f: PointMap) -> bool:
    v = graph_projection_check(f)
    F = star(f)
    _expect(v.ok, "fibre exceeds the codomain size")
    profile = [v.witness[x] for x in f.domain.points]
    _expect(profile == [t.bit_count() for t in F.table], "fibre sizes differ from |f*(p)|")
    return True


def union_instances(max_n: int) -> Iterator[tuple]:
    for X in spaces_upto(max_n):
        for Y in spaces_upto(max_n):
            maps = list(all_maps(X, Y))
            for f, g in itertools.product(maps, repeat=2):
                yield (f, g)


def rand_union(max_n: int):
    def gen(rng):
        X = random_space(rng, rng.randint(1, max_n))
        Y = random_space(rng, rng.randint(1, max_n))
        return (random_map(rng, X, Y), random_map(rng, X, Y))

    return gen


@register("P_union", "for multi-split f and g every selection of f ∪ g is covered by Z_f ∪ Z_g",
          exhaustive=union_instances, rand=rand_union(5), cap=2)
def _p_union(f: PointMap, g: PointMap, *, sample: random.Random | None = None) -> bool:
    H = mm_combine(MultiMap.from_map(f), MultiMap.from_map(g), "union")
    try:
        sel = Selections(H)
    except SearchSpaceTooLarge:
        raise Skip("too many selections")
    for p in range(f.domain.n):
        pairs = list(itertools.product(ev_masks(f, p), ev_masks(g, p)))
        if sample is not None:
            pairs = [sample.choice(pairs)]
        for zf, zg in pairs:
            z = zf | zg
            target = H.codomain.hull(z)
            for h in sel:
                _expect(image_of_minopen(h, p) & ~target == 0, "selection escapes hull(Z_f ∪ Z_g)")
                if sample is None:
                    _expect(cond_b_definitional(h, p, z), "definitional condition (b) fails")
    return True


@register("P_sub_union", "any non-empty submultifunction of f ∪ g is pre-multi-split",
          exhaustive=union_instances, rand=rand_union(4), cap=2)
def _p_sub_union(f: PointMap, g: PointMap, *, sample: random.Random | None = None) -> bool:
    H = mm_combine(MultiMap.from_map(f), MultiMap.from_map(g), "union")
    options = [list(submasks(v)) for v in H.table]
    tables = itertools.product(*options) if sample is None else [tuple(sample.choice(o) for o in options)]
    for t in tables:
        _expect(is_pre_multi_split(MultiMap(H.domain, H.codomain, t)).ok, "submultifunction not pre-multi-split")
    return True


def surjection_instances(max_n: int) -> Iterator[tuple]:
    for (f,) in maps_any(max_n):
        if f.is_surjective:
            yield (f,)


def rand_surjection(max_n: int):
    def gen(rng):
        X = random_space(rng, rng.randint(1, max_n))
        Y = random_space(rng, rng.randint(1, X.n))
        t = list(range(Y.n)) + [rng.randrange(Y.n) for _ in range(X.n - Y.n)]
        rng.shuffle(t)
        return (PointMap(X, Y, tuple(t)),)

    return gen


@register("P_invimg", "the inverse image of a closed finite-to-one surjection is pre-multi-split",
          exhaustive=surjection_instances, rand=rand_surjection(5))
def _p_invimg(f: PointMap) -> bool:
    F = inverse_image_multifunction(f)
    closed = is_closed_map(f)
    _expect(closed == is_closed_map(f, strategy="brute"), "closed-map strategies disagree")
    _expect(closed == bool(is_usc(F)), "closedness of f and u.s.c. of its inverse image disagree")
    if closed and f.is_surjective:
        report = is_pre_multi_split(F)
        _expect(report.ok and report.certified, "inverse image is not certified pre-multi-split")
    return True


def _partitions(items: list[int]) -> Iterator[list[list[int]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def quot_instances(max_n: int) -> Iterator[tuple]:
    for X in spaces_upto(max_n):
        for part in _partitions(list(range(X.n))):
            yield (X, [sorted(c) for c in part])


def rand_quot(max_n: int):
    def gen(rng):
        X = random_space(rng, rng.randint(1, max_n))
        k = rng.randint(1, X.n)
        labels = [rng.randrange(k) for _ in range(X.n)]
        part = [[i for i in range(X.n) if labels[i] == c] for c in range(k)]
        return (X, [c for c in part if c])

    return gen


@register("P_quot", "with a Hausdorff quotient and finite classes the inverse projection is pre-multi-split",
          exhaustive=quot_instances, rand=rand_quot(6))
def _p_quot(X: FinSpace, classes) -> bool:
    Q, proj = quotient_space(X, [[X.points[i] for i in c] for c in classes])
    _expect(bool(is_continuous(proj)), "quotient projection is not continuous")
    if Q.is_discrete:
        report = is_pre_multi_split(inverse_image_multifunction(proj))
        _expect(report.ok and report.certified, "inverse projection not certified pre-multi-split")
    return True


def pair_instances(max_n: int) -> Iterator[tuple]:
    spaces = list(spaces_upto(max_n))
    for X, Y in itertools.product(spaces, repeat=2):
        yield (X, Y)


def rand_pair(max_n: int):
    def gen(rng):
        n = rng.randint(1, max_n)
        m = n if rng.random() < 0.7 else rng.randint(1, max_n)
        return (random_space(rng, n), random_space(rng, m))

    return gen


@register("P_equiv6", "split homeomorphy is an equivalence relation decided by cardinality",
          exhaustive=pair_instances, rand=rand_pair(5))
def _p_equiv6(X: FinSpace, Y: FinSpace, *, sample: random.Random | None = None) -> bool:
    _expect(is_split_homeo(PointMap.identity(X), strategy="definitional"), "identity is not a split homeomorphism")
    v = split_homeomorphic(X, Y)
    _expect(v.ok == (X.n == Y.n), "split homeomorphy is not decided by cardinality")
    if not v.ok:
        return True
    perms = list(itertools.permutations(range(Y.n)))
    if sample is not None:
        perms = [sample.choice(perms)]
    for perm in perms:
        f = PointMap(X, Y, perm)
        _expect(is_split_homeo(f) and is_split_homeo(f.inverse()), "symmetry fails")
        _expect(is_split_homeo(v.witness.inverse().after(f)), "transitivity fails")
    return True


def bijection_instances(max_n: int) -> Iterator[tuple]:
    for D in discretes_upto(max_n):
        for perm in itertools.permutations(range(D.n)):
            yield (PointMap(D, discrete([f"y{i}" for i in range(D.n)]), perm),)


def rand_bijection(max_n: int):
    def gen(rng):
        n = rng.randint(1, max_n)
        perm = list(range(n))
        rng.shuffle(perm)
        return (PointMap(discrete(n), discrete([f"y{i}" for i in range(n)]), tuple(perm)),)

    return gen


@register("P_invstar", "the inverse star is the transpose of the star graph",
          exhaustive=bijection_instances, rand=rand_bijection(6), cap=4)
def _p_invstar(f: PointMap) -> bool:
    inv = f.inverse()
    for y in f.codomain.points:
        got = inverse_star(f, y)
        _expect(got.mask == 1 << inv.table[f.codomain.index(y)], "inverse star is not the inverse map")
    return True


def composable_instances(max_n: int) -> Iterator[tuple]:
    for D in discretes_upto(max_n):
        Y = discrete([f"y{i}" for i in range(D.n)])
        W = discrete([f"w{i}" for i in range(D.n)])
        for p1 in itertools.permutations(range(D.n)):
            for p2 in itertools.permutations(range(D.n)):
                yield (PointMap(D, Y, p1), PointMap(Y, W, p2))


def rand_composable(max_n: int):
    def gen(rng):
        n = rng.randint(1, max_n)
        Y = discrete([f"y{i}" for i in range(n)])
        W = discrete([f"w{i}" for i in range(n)])
        p1, p2 = list(range(n)), list(range(n))
        rng.shuffle(p1)
        rng.shuffle(p2)
        return (PointMap(discrete(n), Y, tuple(p1)), PointMap(Y, W, tuple(p2)))

    return gen


@register("P_equiv7", "cut-and-reglue equivalence is reflexive, symmetric and transitive",
          exhaustive=composable_instances, rand=rand_composable(6), cap=3)
def _p_equiv7(f: PointMap, g: PointMap) -> bool:
    X = f.domain
    _expect(validate_reglue(identity_datum(X)).ok, "identity datum is invalid")
    d1, d2 = reglue_from_splithomeo(f), reglue_from_splithomeo(g)
    rev = reglue_reverse(d1)
    _expect(validate_reglue(rev).ok, "reversed datum is invalid")
    _expect(rev.derived.table == f.inverse().table, "reversed datum does not derive f⁻¹")
    t = reglue_transitive(d1, d2)
    _expect(validate_reglue(t).ok, "composite datum is invalid")
    _expect(t.Z.n == d1.Z.n + d2.Z.n, "composite space is not the disjoint union")
    _expect(t.derived.table == g.after(f).table, "composite datum does not derive g∘f")
    back = reglue_transitive(d1, rev)
    _expect(back.derived.table == tuple(range(X.n)), "datum composed with its reverse is not the identity")
    return True


@register("P_roundtrip", "map → reglue datum → map is the identity on bijections of discrete spaces",
          exhaustive=bijection_instances, rand=rand_bijection(6), cap=4)
def _p_roundtrip(f: PointMap) -> bool:
    d = reglue_from_splithomeo(f)
    _expect(validate_reglue(d).ok, "constructed datum is invalid")
    _expect(d.Z.n == f.domain.n, "graph of the star has the wrong size")
    _expect(splithomeo_from_reglue(d).table == f.table, "round trip changed the map")
    return True


# oracle agreement ---------------------------------------------------------------


def space_pairs(max_n: int) -> Iterator[tuple]:
    spaces = list(spaces_upto(max_n))
    for X, Y in itertools.product(spaces, repeat=2):
        yield (X, Y)


def sweep_pair(X: FinSpace, Y: FinSpace, mutation: int = 0) -> tuple[int, int, int, int, int]:
    K = _kernels
    return K.sweep_ev_agreement(
        K.as_array(X.minopen), K.as_array(X.opens), K.as_array(Y.minopen), K.as_array(Y.opens), mutation
    )


def rand_agree(max_n: int):
    def gen(rng):
        X = random_space(rng, rng.randint(1, max_n))
        Y = random_space(rng, rng.randint(1, max_n))
        return (random_map(rng, X, Y),)

    return gen


def _p_agree(*inst) -> bool:
    from .multisplit import mutation_code

    if len(inst) == 2:
        X, Y = inst
        checks, bad, code, p, z = sweep_pair(X, Y, mutation_code())
        _expect(bad == 0, f"{bad} of {checks} checks disagree; first map code {code}, point {p}, set {z}")
        return True
    (f,) = inst
    for p in range(f.domain.n):
        ev = set(ev_masks(f, p))
        for z in range(1, 1 << f.codomain.n):
            d = cond_a_definitional(f, p, z) and cond_b_definitional(f, p, z)
            _expect(d == (z in ev), f"fast and definitional tests disagree at point {p}, set {z}")
    return True


REGISTRY["P_agree"] = Property(
    "P_agree",
    "the fast extended-value test agrees with the definition everywhere",
    _p_agree,
    space_pairs,
    rand_agree(4),
    3,
)


@register("P_usc_oracle", "the fast u.s.c. test agrees with the definition",
          exhaustive=lambda n: ((F,) for X in spaces_upto(n) for Y in spaces_upto(n) for F in all_multimaps(X, Y, True)),
          rand=lambda rng: (random_multimap(rng, random_space(rng, rng.randint(1, 4)),
                                            random_space(rng, rng.randint(1, 4)), True),),
          cap=2)
def _p_usc_oracle(F: MultiMap) -> bool:
    for p in range(F.domain.n):
        _expect(usc_at_mask(F, p) == usc_at_definitional(F, p), f"u.s.c. tests disagree at {p}")
    return True


@register("P_tilde_z", "the cluster set of F at p is cl(F(U_p)) and contains every selection's explicit set",
          exhaustive=lambda n: ((F,) for X in spaces_upto(n) for Y in spaces_upto(n) for F in all_multimaps(X, Y)),
          rand=lambda rng: (random_multimap(rng, random_space(rng, rng.randint(1, 4)),
                                            random_space(rng, rng.randint(1, 4))),),
          cap=2)
def _p_tilde_z(F: MultiMap) -> bool:
    for p in range(F.domain.n):
        t = tilde_z_set(F, p).mask
        _expect(t == tilde_z_set_definitional(F, p).mask, "cluster-set formulas disagree")
        for s in Selections(F):
            _expect(xp_set(s, p).mask & ~t == 0, "a selection's explicit set leaves the cluster set")
    return True


def _noop(*_):
    return True


for _name, _why in (
    ("P_compact", "every finite space is compact, so preservation of compactness holds structurally"),
    ("P_subcontinuous", "every net in a finite space has a cluster point, so subcontinuity is automatic"),
):
    REGISTRY[_name] = Property(_name, _why, _noop, None, None, 0, note="documented no-op")


# ---------------------------------------------------------------------------
# running


@dataclass
class PropertyResult:
    name: str
    mode: str
    trials: int
    skipped: int = 0
    failures: list[dict] = field(default_factory=list)
    elapsed: float = field(default=0.0, compare=False)
    note: str = ""

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self, with_time: bool = False) -> dict:
        out = {
            "name": self.name,
            "mode": self.mode,
            "trials": self.trials,
            "skipped": self.skipped,
            "passed": self.passed,
            "failures": self.failures,
        }
        if self.note:
            out["note"] = self.note
        if with_time:
            out["elapsed"] = round(self.elapsed, 3)
        return out


def trial_seed(seed: int, name: str, trial: int) -> str:
    return f"{seed}:{name}:{trial}"


def _run_check(prop: Property, inst: tuple, sample: random.Random | None) -> str | None:
    """``None`` on success, ``"skip"`` when skipped, otherwise the failure message."""
    try:
        kwargs = {"sample": sample} if sample is not None and _takes_sample(prop) else {}
        prop.check(*inst, **kwargs)
    except Skip:
        return "skip"
    except Exception as exc:  # any exception inside a theorem check is a failure
        return f"{type(exc).__name__}: {exc}"
    return None


def _takes_sample(prop: Property) -> bool:
    import inspect

    return "sample" in inspect.signature(prop.check).parameters


def run_property(name: str, mode: str = "random", budget: int = 100, seed: int = 0,
                 exhaustive_max: int = 3) -> PropertyResult:
    """Run one registered property.

    ``exhaustive`` walks every instance up to ``min(exhaustive_max, cap)``
    points; ``random`` draws ``budget`` instances, each from its own seed.
    """
    try:
        prop = REGISTRY[name]
    except KeyError:
        raise UnknownProperty(f"no property named {name!r}") from None
    start = time.perf_counter()
    result = PropertyResult(name, mode, 0, note=prop.note)
    if mode == "exhaustive":
        size = min(exhaustive_max, prop.exhaustive_cap)
        if prop.exhaustive is not None and size >= 1:
            for index, inst in enumerate(prop.exhaustive(size)):
                result.trials += 1
                msg = _run_check(prop, inst, None)
                if msg == "skip":
                    result.skipped += 1
                elif msg:
                    result.failures.append(
                        {"mode": "exhaustive", "size": size, "index": index, "error": msg, "instance": encode(inst)}
                    )
    elif mode == "random":
        if prop.random is not None:
            for trial in range(budget):
                s = trial_seed(seed, name, trial)
                rng = random.Random(s)
                inst = prop.random(rng)
                result.trials += 1
                msg = _run_check(prop, inst, rng)
                if msg == "skip":
                    result.skipped += 1
                elif msg:
                    result.failures.append(
                        {"mode": "random", "seed": s, "error": msg, "instance": encode(inst)}
                    )
    else:
        raise ValueError(f"unknown mode {mode!r}")
    result.failures.sort(key=lambda r: repr(r["instance"]))
    result.elapsed = time.perf_counter() - start
    return result


def run_all(budget: int = 20, seed: int = 0, exhaustive_max: int = 3,
            names: Iterable[str] | None = None) -> list[PropertyResult]:
    """Exhaustive pass (if ``exhaustive_max`` ≥ 1) then ``budget`` random trials, per property."""
    out = []
    for name in names or sorted(REGISTRY):
        if exhaustive_max >= 1:
            out.append(run_property(name, "exhaustive", 0, seed, exhaustive_max))
        if budget > 0:
            out.append(run_property(name, "random", budget, seed, exhaustive_max))
    return out


def replay(name: str, record: dict) -> bool:
    """Re-run a recorded failure; true if the property now holds for it."""
    prop = REGISTRY[name]
    if record.get("mode") == "random":
        rng = random.Random(record["seed"])
        inst = prop.random(rng)
        if encode(inst) != record["instance"]:
            raise InternalMismatch("seed no longer reproduces the recorded instance")
        return _run_check(prop, inst, rng) in (None, "skip")
    inst = decode(record["instance"])
    return _run_check(prop, inst, None) in (None, "skip")


__all__ = [
    "KNOWN_COUNTS",
    "PropertyResult",
    "REGISTRY",
    "all_maps",
    "all_multimaps",
    "decode",
    "encode",
    "enumerate_topologies",
    "random_instance",
    "random_space",
    "replay",
    "run_all",
    "run_property",
    "saturate_usc",
    "sweep_pair",
]
