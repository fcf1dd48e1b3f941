"""Finite topological spaces as bitmask lattices.

A space on ``n`` points stores, for every point ``p``, the mask of its minimal
open neighbourhood ``U_p``.  Open sets are exactly the unions of minimal opens,
so closure, interior and every neighbourhood quantifier reduce to a handful of
integer operations.  Point subsets are plain ``int`` masks internally and
:class:`PointSet` values at the public surface.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import DuplicateLabel, NotAPartition, NotATopology, SpaceMismatch


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def submasks(mask: int) -> Iterator[int]:
    """All non-empty submasks of ``mask`` in increasing numeric order."""
    sub = 0
    while True:
        sub = (sub - mask) & mask
        if not sub:
            return
        yield sub


def _alexandrov_opens(minopen: Sequence[int], limit: int | None = None) -> list[int]:
    opens = {0}
    for u in minopen:
        opens |= {o | u for o in opens}
        if limit is not None and len(opens) > limit:
            break
    return sorted(opens)


@dataclass(frozen=True, eq=False)
class FinSpace:
    """A finite topological space.

    ``minopen[p]`` is the bitmask of ``U_p``, the intersection of all opens
    containing point ``p``.  ``opens`` is either the family the caller supplied
    (validated by :func:`build_space`) or generated on demand from ``minopen``.
    """

    points: tuple[str, ...]
    minopen: tuple[int, ...]
    name: str = ""
    _given_opens: tuple[int, ...] | None = field(default=None, repr=False)

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, FinSpace):
            return NotImplemented
        return self.points == other.points and self.minopen == other.minopen

    def __hash__(self) -> int:
        return hash((self.points, self.minopen))

    def __len__(self) -> int:
        return len(self.points)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def full(self) -> int:
        return (1 << len(self.points)) - 1

    @cached_property
    def _index(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.points)}

    def index(self, label) -> int:
        try:
            return self._index[str(label)]
        except KeyError:
            raise KeyError(f"{label!r} is not a point of {self.name or 'space'}") from None

    @cached_property
    def opens(self) -> tuple[int, ...]:
        if self._given_opens is not None:
            return self._given_opens
        return tuple(_alexandrov_opens(self.minopen))

    @property
    def closed_sets(self) -> tuple[int, ...]:
        full = self.full
        return tuple(full ^ o for o in self.opens)

    def opens_containing(self, p: int) -> Iterator[int]:
        u = self.minopen[p]
        return (o for o in self.opens if o & u == u)

    # mask-level primitives ------------------------------------------------
    def hull(self, mask: int) -> int:
        """Smallest open set containing ``mask``: the union of its minimal opens."""
        h = 0
        mo = self.minopen
        for p in bits(mask):
            h |= mo[p]
        return h

    def is_open(self, mask: int) -> bool:
        return self.hull(mask) == mask

    def is_closed(self, mask: int) -> bool:
        return self.is_open(self.full ^ mask)

    def cl(self, mask: int) -> int:
        out = 0
        for p, u in enumerate(self.minopen):
            if u & mask:
                out |= 1 << p
        return out

    def interior(self, mask: int) -> int:
        out = 0
        for p, u in enumerate(self.minopen):
            if u & mask == u:
                out |= 1 << p
        return out

    @cached_property
    def point_closures(self) -> tuple[int, ...]:
        return tuple(self.cl(1 << p) for p in range(self.n))

    @cached_property
    def is_discrete(self) -> bool:
        return all(u == 1 << p for p, u in enumerate(self.minopen))

    # PointSet construction -----------------------------------------------
    def pointset(self, mask: int) -> PointSet:
        return PointSet(self, mask)

    def subset(self, labels: Iterable) -> PointSet:
        return PointSet(self, mask_of(self.index(x) for x in labels))

    def empty(self) -> PointSet:
        return PointSet(self, 0)

    def whole(self) -> PointSet:
        return PointSet(self, self.full)

    def labels_of(self, mask: int) -> list[str]:
        return [self.points[i] for i in bits(mask)]

    def renamed(self, name: str) -> FinSpace:
        return FinSpace(self.points, self.minopen, name, self._given_opens)

    # serialisation ---------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "points": list(self.points),
            "opens": [self.labels_of(o) for o in self.opens],
        }

    @classmethod
    def from_dict(cls, data: dict) -> FinSpace:
        return build_space(data["points"], data["opens"], name=data.get("name", ""))


@dataclass(frozen=True)
class PointSet:
    """A subset of the points of one particular space."""

    space: FinSpace
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.space.n:
            raise ValueError("point index out of range")

    def _check(self, other: PointSet) -> None:
        if other.space is not self.space and other.space != self.space:
            raise SpaceMismatch("point sets belong to different spaces")

    def __or__(self, other: PointSet) -> PointSet:
        self._check(other)
        return PointSet(self.space, self.mask | other.mask)

    def __and__(self, other: PointSet) -> PointSet:
        self._check(other)
        return PointSet(self.space, self.mask & other.mask)

    def __sub__(self, other: PointSet) -> PointSet:
        self._check(other)
        return PointSet(self.space, self.mask & ~other.mask)

    def __le__(self, other: PointSet) -> bool:
        self._check(other)
        return self.mask & ~other.mask == 0

    def __lt__(self, other: PointSet) -> bool:
        return self <= other and self.mask != other.mask

    def complement(self) -> PointSet:
        return PointSet(self.space, self.space.full ^ self.mask)

    def __iter__(self) -> Iterator[int]:
        return bits(self.mask)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __bool__(self) -> bool:
        return self.mask != 0

    def __contains__(self, label) -> bool:
        return bool(self.mask >> self.space.index(label) & 1)

    def labels(self) -> list[str]:
        return self.space.labels_of(self.mask)

    def __repr__(self) -> str:
        return "{" + ",".join(self.labels()) + "}"


@dataclass(frozen=True)
class PointMap:
    """A total single-valued map between two finite spaces."""

    domain: FinSpace
    codomain: FinSpace
    table: tuple[int, ...]

    def __post_init__(self):
        if len(self.table) != self.domain.n:
            raise ValueError("map table must cover every domain point")
        if any(not 0 <= y < self.codomain.n for y in self.table):
            raise ValueError("map value outside the codomain")

    @classmethod
    def from_labels(cls, domain: FinSpace, codomain: FinSpace, mapping: dict) -> PointMap:
        missing = [x for x in domain.points if x not in {str(k) for k in mapping}]
        if missing:
            raise ValueError(f"map undefined at {missing}")
        lookup = {str(k): v for k, v in mapping.items()}
        return cls(domain, codomain, tuple(codomain.index(lookup[x]) for x in domain.points))

    @classmethod
    def identity(cls, space: FinSpace) -> PointMap:
        return cls(space, space, tuple(range(space.n)))

    @classmethod
    def constant(cls, domain: FinSpace, codomain: FinSpace, label) -> PointMap:
        return cls(domain, codomain, (codomain.index(label),) * domain.n)

    def __call__(self, label) -> str:
        return self.codomain.points[self.table[self.domain.index(label)]]

    def image_mask(self, mask: int) -> int:
        out = 0
        t = self.table
        for x in bits(mask):
            out |= 1 << t[x]
        return out

    def preimage_mask(self, mask: int) -> int:
        out = 0
        for x, y in enumerate(self.table):
            if mask >> y & 1:
                out |= 1 << x
        return out

    def image(self, A: PointSet) -> PointSet:
        if A.space != self.domain:
            raise SpaceMismatch("set is not in the map's domain")
        return PointSet(self.codomain, self.image_mask(A.mask))

    def preimage(self, B: PointSet) -> PointSet:
        if B.space != self.codomain:
            raise SpaceMismatch("set is not in the map's codomain")
        return PointSet(self.domain, self.preimage_mask(B.mask))

    @property
    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    @property
    def is_surjective(self) -> bool:
        return len(set(self.table)) == self.codomain.n

    @property
    def is_bijective(self) -> bool:
        return self.is_injective and self.is_surjective

    def inverse(self) -> PointMap:
        if not self.is_bijective:
            raise ValueError("only bijections have an inverse map")
        inv = [0] * self.codomain.n
        for x, y in enumerate(self.table):
            inv[y] = x
        return PointMap(self.codomain, self.domain, tuple(inv))

    def after(self, inner: PointMap) -> PointMap:
        """The composite ``self ∘ inner``."""
        if inner.codomain != self.domain:
            raise SpaceMismatch("maps are not composable")
        return PointMap(inner.domain, self.codomain, tuple(self.table[y] for y in inner.table))

    def as_dict(self) -> dict[str, str]:
        return {x: self.codomain.points[y] for x, y in zip(self.domain.points, self.table)}

    def to_dict(self) -> dict:
        return {"domain": self.domain.name, "codomain": self.codomain.name, "map": self.as_dict()}


# ---------------------------------------------------------------------------
# construction and validation


def space_from_minopen(points: Sequence, minopen: Sequence[int], name: str = "") -> FinSpace:
    """Build a space from a consistent minimal-open table (trusted input)."""
    return FinSpace(tuple(str(p) for p in points), tuple(minopen), name)


def build_space(points: Sequence, opens: Iterable[Iterable], name: str = "") -> FinSpace:
    """Validate a listed family of opens and return the space it defines.

    The family must already be a topology; nothing is completed.
    """
    labels = tuple(str(p) for p in points)
    if len(set(labels)) != len(labels):
        dup = next(x for x in labels if labels.count(x) > 1)
        raise DuplicateLabel(f"duplicate point label {dup!r}")
    index = {x: i for i, x in enumerate(labels)}
    n = len(labels)
    full = (1 << n) - 1
    family: list[int] = []
    seen: set[int] = set()
    for members in opens:
        m = 0
        for x in members:
            try:
                m |= 1 << index[str(x)]
            except KeyError:
                raise NotATopology(f"open set mentions unknown point {x!r}") from None
        if m not in seen:
            seen.add(m)
            family.append(m)
    if 0 not in seen:
        raise NotATopology("the empty set is not listed as open")
    if full not in seen:
        raise NotATopology("the whole point set is not listed as open")

    minopen = []
    for p in range(n):
        u = full
        for o in family:
            if o >> p & 1:
                u &= o
        minopen.append(u)

    ok = all(u in seen for u in minopen)
    if ok:
        for o in family:
            h = 0
            for p in bits(o):
                h |= minopen[p]
            if h != o:
                ok = False
                break
    if ok:
        ok = len(_alexandrov_opens(minopen, limit=len(family))) == len(family)
    if not ok:
        raise NotATopology(_offending_pair(family, seen, labels))
    return FinSpace(labels, tuple(minopen), name, tuple(family))


def _offending_pair(family: list[int], seen: set[int], labels: tuple[str, ...]) -> str:
    def show(m):
        return "{" + ",".join(labels[i] for i in bits(m)) + "}"

    for a, b in itertools.combinations(family, 2):
        if a | b not in seen:
            return f"union of {show(a)} and {show(b)} is not open"
        if a & b not in seen:
            return f"intersection of {show(a)} and {show(b)} is not open"
    return "family is not closed under union and intersection"


def discrete(n_or_labels, name: str = "") -> FinSpace:
    labels = _labels(n_or_labels)
    return space_from_minopen(labels, [1 << i for i in range(len(labels))], name or f"D{len(labels)}")


def indiscrete(n_or_labels, name: str = "") -> FinSpace:
    labels = _labels(n_or_labels)
    full = (1 << len(labels)) - 1
    return space_from_minopen(labels, [full] * len(labels), name or f"T{len(labels)}")


def sierpinski(name: str = "S2") -> FinSpace:
    return space_from_minopen(["a", "b"], [0b01, 0b11], name)


def _labels(n_or_labels) -> list[str]:
    if isinstance(n_or_labels, int):
        return [str(i) for i in range(n_or_labels)]
    return [str(x) for x in n_or_labels]


def load_space(path) -> FinSpace:
    with open(path) as fh:
        return FinSpace.from_dict(json.load(fh))


def dump_space_text(space: FinSpace) -> str:
    return json.dumps(space.to_dict(), indent=2) + "\n"


def save_space(space: FinSpace, path) -> None:
    Path(path).write_text(dump_space_text(space))


# ---------------------------------------------------------------------------
# point-set operations


def _own(S: FinSpace, A: PointSet) -> int:
    if A.space is not S and A.space != S:
        raise SpaceMismatch("set does not belong to this space")
    return A.mask


def closure_interior_boundary(S: FinSpace, A: PointSet) -> tuple[PointSet, PointSet, PointSet]:
    m = _own(S, A)
    c, i = S.cl(m), S.interior(m)
    return PointSet(S, c), PointSet(S, i), PointSet(S, c & ~i)


class SeparationFlags(NamedTuple):
    t0: bool
    hausdorff: bool
    regular: bool


def separation_flags(S: FinSpace) -> SeparationFlags:
    """T0, Hausdorff and regularity of a finite space.

    Regularity holds iff every minimal open is also closed: the binding
    neighbourhood of ``p`` is ``U_p`` and the smallest candidate is ``U_p`` too.
    """
    mo = S.minopen
    t0 = len(set(mo)) == len(mo)
    hausdorff = S.is_discrete
    regular = all(S.cl(u) == u for u in mo)
    return SeparationFlags(t0, hausdorff, regular)


def quotient_space(S: FinSpace, classes: Sequence[Iterable], name: str = "") -> tuple[FinSpace, PointMap]:
    """Quotient by a partition; returns the quotient space and the projection."""
    cls_masks = []
    for c in classes:
        m = 0
        for x in c:
            m |= 1 << S.index(x)
        cls_masks.append(m)
    union = 0
    for m in cls_masks:
        if not m or m & union:
            raise NotAPartition("classes must be non-empty and pairwise disjoint")
        union |= m
    if union != S.full:
        raise NotAPartition("classes do not cover the space")

    proj = [0] * S.n
    for k, m in enumerate(cls_masks):
        for x in bits(m):
            proj[x] = k

    def saturate(class_mask: int) -> int:
        out = 0
        for k in bits(class_mask):
            out |= cls_masks[k]
        return out

    minopen = []
    for k in range(len(cls_masks)):
        cur = 1 << k
        while True:
            hull = S.hull(saturate(cur))
            nxt = 0
            for j, m in enumerate(cls_masks):
                if m & hull:
                    nxt |= 1 << j
            if nxt == cur:
                break
            cur = nxt
        minopen.append(cur)
    labels = ["{" + ",".join(S.labels_of(m)) + "}" for m in cls_masks]
    Q = space_from_minopen(labels, minopen, name or (S.name + "/~" if S.name else ""))
    return Q, PointMap(S, Q, tuple(proj))


@lru_cache(maxsize=4096)
def disjoint_union(S: FinSpace, T: FinSpace) -> FinSpace:
    labels = [f"0:{x}" for x in S.points] + [f"1:{y}" for y in T.points]
    shift = S.n
    minopen = list(S.minopen) + [u << shift for u in T.minopen]
    return space_from_minopen(labels, minopen, f"{S.name}+{T.name}" if S.name or T.name else "")


def rectangle(S: FinSpace, T: FinSpace, a: int, b: int) -> int:
    """Mask of ``a × b`` inside ``product(S, T)``."""
    m = T.n
    out = 0
    for i in bits(a):
        out |= b << (i * m)
    return out


@lru_cache(maxsize=4096)
def product(S: FinSpace, T: FinSpace) -> FinSpace:
    """Product space; the pair ``(i, j)`` has index ``i * len(T) + j``."""
    labels = [f"({x},{y})" for x in S.points for y in T.points]
    minopen = [rectangle(S, T, u, v) for u in S.minopen for v in T.minopen]
    return space_from_minopen(labels, minopen, f"{S.name}x{T.name}" if S.name or T.name else "")


def subspace(S: FinSpace, A: PointSet | int, name: str = "") -> tuple[FinSpace, PointMap]:
    """Subspace on ``A`` with the induced topology, plus the inclusion map."""
    m = A if isinstance(A, int) else _own(S, A)
    keep = list(bits(m))
    pos = {old: new for new, old in enumerate(keep)}
    minopen = []
    for p in keep:
        u = 0
        for q in bits(S.minopen[p] & m):
            u |= 1 << pos[q]
        minopen.append(u)
    sub = space_from_minopen([S.points[p] for p in keep], minopen, name)
    return sub, PointMap(sub, S, tuple(keep))


def isomorphic(S: FinSpace, T: FinSpace) -> PointMap | None:
    """A homeomorphism ``S -> T`` if one exists (brute force; small spaces only)."""
    if S.n != T.n or sorted(u.bit_count() for u in S.minopen) != sorted(u.bit_count() for u in T.minopen):
        return None
    for perm in itertools.permutations(range(T.n)):
        if all(_remap(S.minopen[p], perm) == T.minopen[perm[p]] for p in range(S.n)):
            return PointMap(S, T, perm)
    return None


def _remap(mask: int, perm: Sequence[int]) -> int:
    out = 0
    for i in bits(mask):
        out |= 1 << perm[i]
    return out
