"""Set-valued maps between finite spaces and their semicontinuity checks."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Any, Iterator, NamedTuple

from .errors import EmptyValue, SearchSpaceTooLarge, SpaceMismatch
from .topology import FinSpace, PointMap, PointSet, bits, product, rectangle, submasks

DEFAULT_CAP = 10**6


class Verdict(NamedTuple):
    """A yes/no answer plus the object that certifies or refutes it."""

    ok: bool
    witness: Any = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class MultiMap:
    """A set-valued map; ``table[x]`` is the mask of ``F(x)`` (possibly 0)."""

    domain: FinSpace
    codomain: FinSpace
    table: tuple[int, ...]

    def __post_init__(self):
        if len(self.table) != self.domain.n:
            raise ValueError("multimap table must cover every domain point")
        if any(v < 0 or v >> self.codomain.n for v in self.table):
            raise ValueError("multimap value outside the codomain")

    @classmethod
    def from_labels(cls, domain: FinSpace, codomain: FinSpace, mapping: dict) -> MultiMap:
        lookup = {str(k): v for k, v in mapping.items()}
        table = []
        for x in domain.points:
            if x not in lookup:
                raise ValueError(f"multimap undefined at {x!r}")
            table.append(codomain.subset(lookup[x]).mask)
        return cls(domain, codomain, tuple(table))

    @classmethod
    def from_map(cls, f: PointMap) -> MultiMap:
        return cls(f.domain, f.codomain, tuple(1 << y for y in f.table))

    def __call__(self, label) -> PointSet:
        return PointSet(self.codomain, self.table[self.domain.index(label)])

    @property
    def nonempty(self) -> bool:
        return all(self.table)

    def image_mask(self, mask: int) -> int:
        out = 0
        t = self.table
        for x in bits(mask):
            out |= t[x]
        return out

    def graph_mask(self) -> int:
        m = self.codomain.n
        out = 0
        for x, v in enumerate(self.table):
            out |= v << (x * m)
        return out

    def is_submultifunction_of(self, other: MultiMap) -> bool:
        return all(a & ~b == 0 for a, b in zip(self.table, other.table))

    def single_valued(self) -> PointMap | None:
        if all(v and v & (v - 1) == 0 for v in self.table):
            return PointMap(self.domain, self.codomain, tuple(v.bit_length() - 1 for v in self.table))
        return None

    def as_dict(self) -> dict[str, list[str]]:
        return {x: self.codomain.labels_of(v) for x, v in zip(self.domain.points, self.table)}

    def to_dict(self) -> dict:
        return {"domain": self.domain.name, "codomain": self.codomain.name, "map": self.as_dict()}


# ---------------------------------------------------------------------------
# calculus


def _in_domain(F, A: PointSet) -> int:
    if A.space != F.domain:
        raise SpaceMismatch("set is not in the domain")
    return A.mask


def _in_codomain(F, B: PointSet) -> int:
    if B.space != F.codomain:
        raise SpaceMismatch("set is not in the codomain")
    return B.mask


def mm_image(F: MultiMap, A: PointSet) -> PointSet:
    return PointSet(F.codomain, F.image_mask(_in_domain(F, A)))


def inverse_core_masks(F: MultiMap, b: int) -> tuple[int, int]:
    inv = core = 0
    for x, v in enumerate(F.table):
        if v & b:
            inv |= 1 << x
        if v & ~b == 0:
            core |= 1 << x
    return inv, core


def mm_inverse_and_core(F: MultiMap, B: PointSet) -> tuple[PointSet, PointSet]:
    """Lower inverse ``{x : F(x) ∩ B ≠ ∅}`` and core ``{x : F(x) ⊆ B}``."""
    inv, core = inverse_core_masks(F, _in_codomain(F, B))
    return PointSet(F.domain, inv), PointSet(F.domain, core)


def mm_combine(F: MultiMap, G: MultiMap, mode: str = "union") -> MultiMap:
    if F.domain != G.domain or F.codomain != G.codomain:
        raise SpaceMismatch("multimaps have different domain or codomain")
    if mode == "union":
        table = tuple(a | b for a, b in zip(F.table, G.table))
    elif mode == "intersection":
        table = tuple(a & b for a, b in zip(F.table, G.table))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return MultiMap(F.domain, F.codomain, table)


def mm_compose(H: MultiMap, F: MultiMap) -> MultiMap:
    """``x ↦ H(F(x))``."""
    if F.codomain != H.domain:
        raise SpaceMismatch("multimaps are not composable")
    return MultiMap(F.domain, H.codomain, tuple(H.image_mask(v) for v in F.table))


def inverse_image_multifunction(f: PointMap) -> MultiMap:
    """``y ↦ f⁻¹({y})`` as a multimap from the codomain back to the domain."""
    fibers = [0] * f.codomain.n
    for x, y in enumerate(f.table):
        fibers[y] |= 1 << x
    return MultiMap(f.codomain, f.domain, tuple(fibers))


class Selections:
    """All selections of a non-empty multimap, in lexicographic order.

    The first domain point varies slowest.  ``len()`` and indexing work
    without enumerating, so a range of indices can be handed to a worker.
    """

    def __init__(self, F: MultiMap, cap: int = DEFAULT_CAP):
        if not F.nonempty:
            x = next(i for i, v in enumerate(F.table) if not v)
            raise EmptyValue(f"F({F.domain.points[x]}) is empty")
        self.F = F
        self.choices = [tuple(bits(v)) for v in F.table]
        self.count = math.prod(len(c) for c in self.choices)
        if self.count > cap:
            raise SearchSpaceTooLarge(f"{self.count} selections exceed the cap {cap}")

    def __len__(self) -> int:
        return self.count

    def __getitem__(self, index: int) -> PointMap:
        if not 0 <= index < self.count:
            raise IndexError(index)
        table = []
        for c in reversed(self.choices):
            index, r = divmod(index, len(c))
            table.append(c[r])
        return PointMap(self.F.domain, self.F.codomain, tuple(reversed(table)))

    def tables(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*self.choices)

    def __iter__(self) -> Iterator[PointMap]:
        F = self.F
        for t in self.tables():
            yield PointMap(F.domain, F.codomain, t)


def selections(F: MultiMap, cap: int = DEFAULT_CAP) -> Selections:
    return Selections(F, cap)


# ---------------------------------------------------------------------------
# continuity and semicontinuity


def is_continuous(f: PointMap, at=None) -> Verdict:
    """Continuity of ``f`` globally or at one point.

    At ``p`` the test is ``f(U_p) ⊆ U_{f(p)}``; on failure the witness is the
    offending point label.  Globally, the witness of failure is an open set
    of the codomain whose preimage is not open.
    """
    X, Y = f.domain, f.codomain
    if at is not None:
        p = X.index(at)
        ok = f.image_mask(X.minopen[p]) & ~Y.minopen[f.table[p]] == 0
        return Verdict(ok, None if ok else X.points[p])
    for p in range(X.n):
        if f.image_mask(X.minopen[p]) & ~Y.minopen[f.table[p]]:
            bad = Y.minopen[f.table[p]]
            return Verdict(False, Y.labels_of(bad))
    return Verdict(True)


def is_continuous_by_opens(f: PointMap) -> bool:
    """Definitional check: the preimage of every open is open."""
    X = f.domain
    return all(X.is_open(f.preimage_mask(o)) for o in f.codomain.opens)


def is_closed_map(f: PointMap, strategy: str = "pointwise") -> bool:
    """Whether ``f`` maps closed sets to closed sets.

    ``pointwise`` uses that every closed set of a finite space is a union of
    point closures and images commute with unions; ``brute`` enumerates every
    closed set of the domain.
    """
    Y = f.codomain
    if strategy == "brute":
        return all(Y.is_closed(f.image_mask(c)) for c in f.domain.closed_sets)
    if strategy != "pointwise":
        raise ValueError(f"unknown strategy {strategy!r}")
    return all(Y.is_closed(f.image_mask(c)) for c in f.domain.point_closures)


def usc_at_mask(F: MultiMap, p: int) -> bool:
    X, Y = F.domain, F.codomain
    return F.image_mask(X.minopen[p]) & ~Y.hull(F.table[p]) == 0


def usc_at_definitional(F: MultiMap, p: int) -> bool:
    """Every open ``V ⊇ F(p)`` has a core that contains an open around ``p``."""
    X, Y = F.domain, F.codomain
    fp = F.table[p]
    for V in Y.opens:
        if fp & ~V:
            continue
        _, core = inverse_core_masks(F, V)
        if not any(W & ~core == 0 for W in X.opens_containing(p)):
            return False
    return True


def is_usc(F: MultiMap, at=None, strategy: str = "fast") -> Verdict:
    """Upper semicontinuity, globally or at ``at``.

    The fast test at ``p`` is ``F(U_p) ⊆ hull(F(p))``: the core is monotone in
    ``V`` so the smallest open superset of ``F(p)`` is the binding case.  The
    failure witness is ``(point label, violating open)``.
    """
    check = usc_at_mask if strategy == "fast" else usc_at_definitional
    if strategy not in ("fast", "definitional"):
        raise ValueError(f"unknown strategy {strategy!r}")
    X, Y = F.domain, F.codomain
    pts = [X.index(at)] if at is not None else range(X.n)
    for p in pts:
        if not check(F, p):
            return Verdict(False, (X.points[p], Y.labels_of(Y.hull(F.table[p]))))
    return Verdict(True)


def is_subcontinuous(F: MultiMap, at=None) -> bool:
    """Always true for a non-empty multimap on a finite space.

    Every net in a finite space has a cluster point, so no computation is
    needed; kept so callers can ask the question uniformly.
    """
    return F.nonempty


def _usc_all(F: MultiMap) -> bool:
    return all(usc_at_mask(F, p) for p in range(F.domain.n))


def is_usco(F: MultiMap, mode: str = "usco", cap: int = DEFAULT_CAP) -> Verdict:
    """``usco``: non-empty and u.s.c. (finite values are compact).

    ``minimal``: additionally no proper non-empty submultifunction is usco,
    decided by exhaustive search.  A refuting witness is the smaller usco map.
    """
    if not F.nonempty or not _usc_all(F):
        return Verdict(False)
    if mode == "usco":
        return Verdict(True)
    if mode != "minimal":
        raise ValueError(f"unknown mode {mode!r}")
    space = math.prod((1 << v.bit_count()) - 1 for v in F.table)
    if space > cap:
        raise SearchSpaceTooLarge(f"{space} submultifunctions exceed the cap {cap}")
    for G in _proper_submultimaps(F):
        if _usc_all(G):
            return Verdict(False, G)
    return Verdict(True)


def _proper_submultimaps(F: MultiMap) -> Iterator[MultiMap]:
    options = [list(submasks(v)) for v in F.table]
    for table in itertools.product(*options):
        if table != F.table:
            yield MultiMap(F.domain, F.codomain, tuple(table))


# ---------------------------------------------------------------------------
# graphs


def graph_closure_mask(F: MultiMap) -> int:
    """``cl(gr F)`` inside ``product(domain, codomain)`` as a mask.

    ``(x, y)`` is in the closure iff ``U_x × U_y`` meets the graph, i.e. iff
    ``F(U_x) ∩ U_y ≠ ∅``.
    """
    X, Y = F.domain, F.codomain
    m = Y.n
    out = 0
    for x in range(X.n):
        reach = F.image_mask(X.minopen[x])
        row = 0
        for y, u in enumerate(Y.minopen):
            if u & reach:
                row |= 1 << y
        out |= row << (x * m)
    return out


def graph_and_closure(F: MultiMap | PointMap) -> tuple[PointSet, PointSet]:
    if isinstance(F, PointMap):
        F = MultiMap.from_map(F)
    P = product(F.domain, F.codomain)
    return PointSet(P, F.graph_mask()), PointSet(P, graph_closure_mask(F))


def has_closed_graph(F: MultiMap | PointMap) -> bool:
    gr, cl = graph_and_closure(F)
    return gr.mask == cl.mask


def graph_closure_by_rectangles(F: MultiMap) -> int:
    """Closure of the graph computed directly in the product space (oracle)."""
    P = product(F.domain, F.codomain)
    return P.cl(F.graph_mask())


def fiber_sizes(mask: int, X: FinSpace, Y: FinSpace) -> list[int]:
    """Sizes of the fibres of the first-coordinate projection restricted to ``mask``."""
    m = Y.n
    row = (1 << m) - 1
    return [((mask >> (x * m)) & row).bit_count() for x in range(X.n)]


def graph_rows(mask: int, X: FinSpace, Y: FinSpace) -> tuple[int, ...]:
    m = Y.n
    row = (1 << m) - 1
    return tuple((mask >> (x * m)) & row for x in range(X.n))


__all__ = [
    "DEFAULT_CAP",
    "MultiMap",
    "PointMap",
    "Selections",
    "Verdict",
    "fiber_sizes",
    "graph_and_closure",
    "graph_closure_by_rectangles",
    "graph_closure_mask",
    "graph_rows",
    "has_closed_graph",
    "inverse_image_multifunction",
    "is_closed_map",
    "is_continuous",
    "is_continuous_by_opens",
    "is_subcontinuous",
    "is_usc",
    "is_usco",
    "mm_combine",
    "mm_compose",
    "mm_image",
    "mm_inverse_and_core",
    "rectangle",
    "selections",
]
