"""Extended-value sets, star multifunctions and pre-multi-split checks.

A non-empty ``Z ⊆ Y`` is a set of extended values of ``f`` at ``p`` when

* every ``z ∈ Z`` is approached: each neighbourhood of ``z`` meets ``f(U)``
  for each neighbourhood ``U`` of ``p``;
* ``f`` eventually lands near ``Z``: each neighbourhood of ``Z`` contains
  ``f(U)`` for some neighbourhood ``U`` of ``p``.

On finite spaces the two conditions collapse to
``Z ⊆ cl(f(U_p))`` and ``f(U_p) ⊆ hull(Z)``.  That reduction is the ``fast``
strategy; the ``definitional`` strategy quantifies over every open set and is
the oracle the fast path is tested against.
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from . import _kernels
from .errors import (
    EmptyCandidate,
    EmptyValue,
    InternalMismatch,
    InvalidChoice,
    NotHausdorff,
    SearchSpaceTooLarge,
    SpaceMismatch,
)
from .multifunction import (
    DEFAULT_CAP,
    MultiMap,
    Selections,
    Verdict,
    fiber_sizes,
    graph_closure_mask,
    is_continuous,
)
from .topology import FinSpace, PointMap, PointSet, bits, separation_flags

EV_MAX_CODOMAIN = 16

# fault-injection switch for the fast test; see ``weakened_fast_check``
_MUTATION = 0
_MUTATIONS = {None: 0, "drop_cluster": 1, "drop_cover": 2}


@contextlib.contextmanager
def weakened_fast_check(which: str | None):
    """Temporarily drop one conjunct of the fast test (mutation testing only)."""
    global _MUTATION
    prev = _MUTATION
    _MUTATION = _MUTATIONS[which]
    try:
        yield
    finally:
        _MUTATION = prev


def mutation_code() -> int:
    return _MUTATION


# ---------------------------------------------------------------------------
# mask-level tests


def image_of_minopen(f: PointMap, p: int) -> int:
    return f.image_mask(f.domain.minopen[p])


def fast_test(Y: FinSpace, fu: int, cl_fu: int, z: int) -> bool:
    cluster = z & ~cl_fu == 0
    cover = fu & ~Y.hull(z) == 0
    if _MUTATION == 1:
        cluster = True
    elif _MUTATION == 2:
        cover = True
    return cluster and cover


def cond_a_definitional(f: PointMap, p: int, z: int) -> bool:
    X, Y = f.domain, f.codomain
    images = [f.image_mask(U) for U in X.opens_containing(p)]
    for y in bits(z):
        for V in Y.opens_containing(y):
            if any(fu & V == 0 for fu in images):
                return False
    return True


def cond_b_definitional(f: PointMap, p: int, z: int) -> bool:
    X, Y = f.domain, f.codomain
    images = [f.image_mask(U) for U in X.opens_containing(p)]
    for V in Y.opens:
        if z & ~V == 0 and not any(fu & ~V == 0 for fu in images):
            return False
    return True


def ev_masks(f: PointMap, p: int) -> list[int]:
    """Masks of all extended-value sets at point index ``p`` (fast test).

    Every such set lies inside ``cl(f(U_p))``, so only its subsets are
    scanned and the size limit applies to that closure, not to the codomain.
    """
    Y = f.codomain
    fu = image_of_minopen(f, p)
    cl_fu = Y.cl(fu)
    mut = _MUTATION
    # without the cluster conjunct every subset of the codomain is a candidate
    pool = Y.full if mut == 1 else cl_fu
    where = list(bits(pool))
    k = len(where)
    if k > EV_MAX_CODOMAIN:
        raise SearchSpaceTooLarge(f"{k} candidate points; at most {EV_MAX_CODOMAIN} supported")
    mo = [Y.minopen[y] for y in where]
    hull = [0] * (1 << k)
    sets = [0] * (1 << k)
    out = []
    for j in range(1, 1 << k):
        low = j & -j
        b = low.bit_length() - 1
        sets[j] = z = sets[j ^ low] | 1 << where[b]
        hull[j] = h = hull[j ^ low] | mo[b]
        if mut == 2 or fu & ~h == 0:
            out.append(z)
    return out


def _sort_key(mask: int) -> tuple:
    return (mask.bit_count(), tuple(bits(mask)))


def _point(space: FinSpace, p) -> int:
    if isinstance(p, int) and not isinstance(p, bool) and str(p) not in space._index:
        return p
    return space.index(p)


def _candidate(f: PointMap, Z) -> int:
    if isinstance(Z, PointSet):
        if Z.space != f.codomain:
            raise SpaceMismatch("candidate set is not in the codomain")
        z = Z.mask
    else:
        z = f.codomain.subset(Z).mask
    if not z:
        raise EmptyCandidate("a set of extended values must be non-empty")
    return z


# ---------------------------------------------------------------------------
# public operations


def is_ev_set(f: PointMap, p, Z, strategy: str = "fast") -> bool:
    """Whether ``Z`` is a set of extended values of ``f`` at ``p``."""
    i = _point(f.domain, p)
    z = _candidate(f, Z)
    if strategy == "fast":
        fu = image_of_minopen(f, i)
        return fast_test(f.codomain, fu, f.codomain.cl(fu), z)
    if strategy == "definitional":
        return cond_a_definitional(f, i, z) and cond_b_definitional(f, i, z)
    raise ValueError(f"unknown strategy {strategy!r}")


def satisfies_condition_b(f: PointMap, p, Z, strategy: str = "fast") -> bool:
    """Only the "eventually lands near ``Z``" half of the definition."""
    i = _point(f.domain, p)
    z = _candidate(f, Z)
    if strategy == "definitional":
        return cond_b_definitional(f, i, z)
    return image_of_minopen(f, i) & ~f.codomain.hull(z) == 0


def extract_ev(f: PointMap, p, Z) -> PointSet:
    """Shrink a condition-(b) set to its approached points.

    If ``Z`` satisfies condition (b) at ``p`` the result is a set of extended
    values contained in ``Z``.
    """
    i = _point(f.domain, p)
    z = _candidate(f, Z)
    return PointSet(f.codomain, z & f.codomain.cl(image_of_minopen(f, i)))


@dataclass(frozen=True)
class EvFamily:
    at: str
    sets: tuple[PointSet, ...]
    minimal: tuple[PointSet, ...]
    point: int = field(default=-1, compare=False)

    def __len__(self) -> int:
        return len(self.sets)

    def __contains__(self, Z: PointSet) -> bool:
        return any(s.mask == Z.mask for s in self.sets)

    def masks(self) -> list[int]:
        return [s.mask for s in self.sets]


def _family_from_masks(f: PointMap, p: int, masks: list[int]) -> EvFamily:
    masks = sorted(masks, key=_sort_key)
    minimal = [m for m in masks if not any(o != m and o & ~m == 0 for o in masks)]
    Y = f.codomain
    return EvFamily(
        f.domain.points[p],
        tuple(PointSet(Y, m) for m in masks),
        tuple(PointSet(Y, m) for m in minimal),
        p,
    )


def ev_family(f: PointMap, p, strategy: str = "fast") -> EvFamily:
    """Every set of extended values at ``p``, plus the inclusion-minimal ones."""
    i = _point(f.domain, p)
    if strategy == "fast":
        masks = ev_masks(f, i)
    elif strategy == "definitional":
        if f.codomain.n > EV_MAX_CODOMAIN:
            raise SearchSpaceTooLarge("codomain too large for exhaustive scan")
        masks = [
            z for z in range(1, 1 << f.codomain.n)
            if cond_a_definitional(f, i, z) and cond_b_definitional(f, i, z)
        ]
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return _family_from_masks(f, i, masks)


def xp_set(f: PointMap, p) -> PointSet:
    """``cl(f(U_p))``: the intersection of ``cl(f(U))`` over neighbourhoods of ``p``."""
    i = _point(f.domain, p)
    return PointSet(f.codomain, f.codomain.cl(image_of_minopen(f, i)))


def xp_set_by_neighborhoods(f: PointMap, p) -> PointSet:
    """Same set, intersected over every open neighbourhood explicitly."""
    i = _point(f.domain, p)
    Y = f.codomain
    out = Y.full
    for U in f.domain.opens_containing(i):
        out &= Y.cl(f.image_mask(U))
    return PointSet(Y, out)


def require_hausdorff(space: FinSpace, role: str = "codomain") -> None:
    if not separation_flags(space).hausdorff:
        raise NotHausdorff(f"{role} {space.name or ''} is not Hausdorff".replace("  ", " "))


def star(f: PointMap) -> MultiMap:
    """The star multifunction ``p ↦ Z_p`` of a map into a Hausdorff space.

    Each value is computed as ``cl(f(U_p))`` and cross-checked against the
    (necessarily unique) member of the extended-value family.
    """
    Y = f.codomain
    require_hausdorff(Y)
    table = []
    for p in range(f.domain.n):
        fu = image_of_minopen(f, p)
        xp = Y.cl(fu)
        fam = ev_masks(f, p)
        if fam != [xp]:
            raise InternalMismatch(
                f"at {f.domain.points[p]}: family {[Y.labels_of(m) for m in fam]} "
                f"is not the single set {Y.labels_of(xp)}"
            )
        table.append(xp)
    return MultiMap(f.domain, Y, tuple(table))


def is_multi_split(f: PointMap, at=None) -> Verdict:
    """Multi-split continuity with the extended-value families as certificate.

    Always true when the codomain is finite: ``f(U_p)`` itself qualifies.
    The witness maps point labels to their :class:`EvFamily`.
    """
    X = f.domain
    pts = [_point(X, at)] if at is not None else range(X.n)
    fams = {}
    for p in pts:
        fam = ev_family(f, p)
        fams[X.points[p]] = fam
        if not fam.sets:
            return Verdict(False, fams)
    return Verdict(True, fams)


def is_split_continuous_at(f: PointMap, fam: EvFamily) -> bool:
    fp = 1 << f.table[fam.point]
    return any(s.mask & fp and s.mask.bit_count() <= 2 for s in fam.sets)


def ev_report(f: PointMap, p) -> dict:
    """Stable record describing the extended-value family at one point."""
    i = _point(f.domain, p)
    fam = ev_family(f, i)
    return {
        "point": f.domain.points[i],
        "sets": [s.labels() for s in fam.sets],
        "minimal": [s.labels() for s in fam.minimal],
        "continuous_at": bool(is_continuous(f, f.domain.points[i])),
        "split_at": is_split_continuous_at(f, fam),
    }


def compose_ev(f: PointMap, g: PointMap, p, z_f, choice: Mapping) -> PointSet:
    """Union of the chosen extended-value sets of ``g`` over a set for ``f``.

    ``z_f`` must be a set of extended values of ``f`` at ``p`` and ``choice``
    must give, for every ``y`` in it, a set of extended values of ``g`` at
    ``y``.  The result satisfies condition (b) for ``g ∘ f`` at ``p``.
    """
    if f.codomain != g.domain:
        raise SpaceMismatch("maps are not composable")
    i = _point(f.domain, p)
    zf = _candidate(f, z_f)
    if not is_ev_set(f, i, PointSet(f.codomain, zf)):
        raise InvalidChoice(f"{f.codomain.labels_of(zf)} is not a set of extended values of f")
    lookup = {}
    for key, val in choice.items():
        y = key if isinstance(key, int) and str(key) not in f.codomain._index else f.codomain.index(key)
        lookup[y] = val
    out = 0
    for y in bits(zf):
        if y not in lookup:
            raise InvalidChoice(f"no set chosen for {f.codomain.points[y]}")
        zg = _candidate(g, lookup[y])
        if not is_ev_set(g, y, PointSet(g.codomain, zg)):
            raise InvalidChoice(
                f"{g.codomain.labels_of(zg)} is not a set of extended values of g at {f.codomain.points[y]}"
            )
        out |= zg
    return PointSet(g.codomain, out)


@dataclass
class PreMultiSplitReport:
    ok: bool
    selections: int
    certified: bool
    uncertified: int = 0
    first_uncertified: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


def _certify(F: MultiMap, pts: list[int], targets: list[int], cap: int) -> tuple[int, int, int, int]:
    """Run the selection certificate kernel, interpreted if masks are too wide."""
    sel = Selections(F, cap)
    X = F.domain
    if _kernels.ACCELERATED and not _kernels.fits(X.n, F.codomain.n):
        return _certify_python(sel, X, pts, targets)
    width = max(len(c) for c in sel.choices)
    return _kernels.certify_selections(
        _kernels.as_array(X.minopen),
        _kernels.as_matrix(sel.choices, width),
        _kernels.as_array([len(c) for c in sel.choices]),
        _kernels.as_array(targets),
        _kernels.as_array(pts),
    )


def _certify_python(sel: Selections, X: FinSpace, pts, targets):
    failures = 0
    first = (-1, -1)
    for s, table in enumerate(sel.tables()):
        for p in pts:
            t = targets[p]
            if any(not t >> table[q] & 1 for q in bits(X.minopen[p])):
                failures += 1
                if first[0] < 0:
                    first = (s, p)
    return sel.count, failures, first[0], first[1]


def is_pre_multi_split(F: MultiMap, at=None, cap: int = DEFAULT_CAP) -> PreMultiSplitReport:
    """Whether every selection of ``F`` is multi-split continuous (at ``at``).

    For each selection ``s`` and point ``p`` the value ``F(p)`` is tried as a
    condition-(b) certificate first; the report says whether it always works.
    Pairs it does not certify are settled by an explicit family scan.
    """
    X, Y = F.domain, F.codomain
    pts = [_point(X, at)] if at is not None else list(range(X.n))
    targets = [Y.hull(v) for v in F.table]
    count, failures, first_sel, first_p = _certify(F, pts, targets, cap)
    ok = True
    if failures:
        sel = Selections(F, cap)
        for s in sel:
            for p in pts:
                if image_of_minopen(s, p) & ~targets[p] and not ev_masks(s, p):
                    ok = False
                    break
            if not ok:
                break
    first = None
    if failures:
        first = (sel[first_sel].as_dict(), X.points[first_p])
    return PreMultiSplitReport(ok, count, failures == 0, failures, first)


def tilde_z_set(F: MultiMap, p) -> PointSet:
    """Cluster points of value nets along nets converging to ``p``: ``cl(F(U_p))``."""
    if not F.nonempty:
        raise EmptyValue("multimap has an empty value")
    i = _point(F.domain, p)
    Y = F.codomain
    return PointSet(Y, Y.cl(F.image_mask(F.domain.minopen[i])))


def tilde_z_set_definitional(F: MultiMap, p) -> PointSet:
    """``{y : F(W) ∩ V ≠ ∅ for every open V ∋ y and open W ∋ p}``."""
    if not F.nonempty:
        raise EmptyValue("multimap has an empty value")
    i = _point(F.domain, p)
    X, Y = F.domain, F.codomain
    images = [F.image_mask(W) for W in X.opens_containing(i)]
    out = 0
    for y in range(Y.n):
        if all(img & V for V in Y.opens_containing(y) for img in images):
            out |= 1 << y
    return PointSet(Y, out)


def continuity_equivalence(f: PointMap) -> tuple[bool, bool]:
    """``(continuous, multi-split and closed graph)``, computed independently."""
    require_hausdorff(f.codomain)
    continuous = bool(is_continuous(f))
    gr = MultiMap.from_map(f).graph_mask()
    closed = graph_closure_mask(MultiMap.from_map(f)) == gr
    return continuous, bool(is_multi_split(f)) and closed


def graph_projection_check(f: PointMap, bound: int | None = None) -> Verdict:
    """Fibre sizes of the projection from ``cl(gr f)`` to the domain.

    The witness is the per-point fibre profile; ``ok`` says whether every
    fibre has at most ``bound`` points (default: the codomain size).
    """
    require_hausdorff(f.codomain)
    if bound is None:
        bound = f.codomain.n
    sizes = fiber_sizes(graph_closure_mask(MultiMap.from_map(f)), f.domain, f.codomain)
    profile = dict(zip(f.domain.points, sizes))
    return Verdict(max(sizes, default=0) <= bound, profile)


def all_ev_choices(f: PointMap, z_f: int) -> Iterator[dict[int, int]]:
    """Every assignment of one extended-value set of ``f`` to each point of ``z_f``."""
    import itertools

    ys = list(bits(z_f))
    fams = [ev_masks(f, y) for y in ys]
    for combo in itertools.product(*fams):
        yield dict(zip(ys, combo))
