"""Split homeomorphisms and equivalence by cutting and re-gluing.

A cut-and-reglue datum between ``X`` and ``Y`` is a space ``Z`` with two
continuous finite-to-one quotient surjections ``pX: Z -> X``, ``pY: Z -> Y``
and a right inverse ``pXinv`` of ``pX`` such that ``pY ∘ pXinv`` is a
bijection.  The constructions here follow the correspondence with split
homeomorphisms in both directions, on discrete spaces, which is what the
compact regular Hausdorff hypothesis amounts to for finite spaces.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import HypothesisViolated, InternalMismatch, SpaceMismatch, ValidationFailed
from .multifunction import Verdict, is_continuous
from .multisplit import ev_family, is_multi_split, star
from .topology import FinSpace, PointMap, PointSet, disjoint_union, product, subspace

EXHAUSTIVE_QUOTIENT_MAX = 16


@dataclass(frozen=True)
class ReglueDatum:
    Z: FinSpace
    pX: PointMap
    pY: PointMap
    pXinv: PointMap

    @property
    def X(self) -> FinSpace:
        return self.pX.codomain

    @property
    def Y(self) -> FinSpace:
        return self.pY.codomain

    @property
    def derived(self) -> PointMap:
        """``f = pY ∘ pXinv``."""
        return self.pY.after(self.pXinv)

    @property
    def pYinv(self) -> PointMap:
        """The right inverse of ``pY`` built from the datum: ``pXinv ∘ f⁻¹``."""
        return self.pXinv.after(self.derived.inverse())


def _require_discrete(*spaces: FinSpace) -> None:
    for S in spaces:
        if not S.is_discrete:
            raise HypothesisViolated(f"space {S.name or S.points} is not discrete")


# ---------------------------------------------------------------------------
# split homeomorphisms


def is_split_homeo(f: PointMap, strategy: str = "fast") -> bool:
    """Bijection whose map and inverse are both multi-split continuous.

    Both directions are always multi-split on finite spaces, so the answer is
    bijectivity; the function computes the full definition and checks that.
    """
    if not f.is_bijective:
        return False
    g = f.inverse()
    if strategy == "fast":
        ok = bool(is_multi_split(f)) and bool(is_multi_split(g))
    elif strategy == "definitional":
        ok = all(
            ev_family(h, p, strategy="definitional").sets
            for h in (f, g)
            for p in range(h.domain.n)
        )
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    if not ok:
        raise InternalMismatch("a bijection between finite spaces failed multi-split continuity")
    return True


def split_homeomorphic(S: FinSpace, T: FinSpace) -> Verdict:
    """Decide split homeomorphy; the witness is a verified bijection.

    Cardinality decides it, but the candidate bijection is still checked
    against the definitional extended-value test.
    """
    if S.n != T.n:
        return Verdict(False)
    f = PointMap(S, T, tuple(range(T.n)))
    if not is_split_homeo(f, strategy="definitional"):
        raise InternalMismatch("identity-order bijection failed the definitional check")
    return Verdict(True, f)


def inverse_star(f: PointMap, y0) -> PointSet:
    """``(f⁻¹)*(y0)``, computed directly and as a column of ``gr(f*)``."""
    _require_discrete(f.domain, f.codomain)
    if not f.is_bijective:
        raise HypothesisViolated("map is not a split homeomorphism")
    X, Y = f.domain, f.codomain
    y = Y.index(y0)
    direct = star(f.inverse()).table[y]
    gr = star(f).graph_mask()
    transposed = 0
    for x in range(X.n):
        if gr >> (x * Y.n + y) & 1:
            transposed |= 1 << x
    if direct != transposed:
        raise InternalMismatch(
            f"(f⁻¹)*({y0}) = {X.labels_of(direct)} but the graph column gives {X.labels_of(transposed)}"
        )
    return PointSet(X, direct)


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class ReglueReport:
    spaces_consistent: bool
    px_continuous: bool
    py_continuous: bool
    px_surjective: bool
    py_surjective: bool
    finite_fibers: bool
    px_quotient: bool
    py_quotient: bool
    right_inverse: bool
    bijective: bool

    @property
    def ok(self) -> bool:
        return all(getattr(self, fl.name) for fl in fields(self))

    def __bool__(self) -> bool:
        return self.ok

    def failed(self) -> list[str]:
        return [fl.name for fl in fields(self) if not getattr(self, fl.name)]

    def to_dict(self) -> dict:
        out = {fl.name: getattr(self, fl.name) for fl in fields(self)}
        out["ok"] = self.ok
        return out


def _quotient_minopen(p: PointMap, x: int) -> int:
    """Smallest ``B ∋ x`` whose preimage under ``p`` is open."""
    Z = p.domain
    b = 1 << x
    while True:
        nxt = b | p.image_mask(Z.hull(p.preimage_mask(b)))
        if nxt == b:
            return b
        b = nxt


def is_quotient_map(p: PointMap, exhaustive: bool | None = None) -> bool:
    """Whether the codomain carries exactly the quotient topology of ``p``."""
    if not p.is_surjective:
        return False
    T = p.codomain
    fast = all(_quotient_minopen(p, x) == T.minopen[x] for x in range(T.n))
    if exhaustive is None:
        exhaustive = T.n <= EXHAUSTIVE_QUOTIENT_MAX
    if exhaustive:
        brute = all(
            T.is_open(b) == p.domain.is_open(p.preimage_mask(b)) for b in range(1 << T.n)
        )
        if brute != fast:
            raise InternalMismatch("quotient check disagrees with the exhaustive open-set scan")
    return fast


def validate_reglue(d: ReglueDatum) -> ReglueReport:
    """Check every clause of the definition; failures are reported, not raised."""
    consistent = (
        d.pX.domain == d.Z
        and d.pY.domain == d.Z
        and d.pXinv.domain == d.X
        and d.pXinv.codomain == d.Z
    )
    if not consistent:
        return ReglueReport(False, *([False] * 9))
    px_c, py_c = bool(is_continuous(d.pX)), bool(is_continuous(d.pY))
    px_s, py_s = d.pX.is_surjective, d.pY.is_surjective
    right = d.pX.after(d.pXinv).table == tuple(range(d.X.n))
    return ReglueReport(
        True,
        px_c,
        py_c,
        px_s,
        py_s,
        True,
        px_s and is_quotient_map(d.pX),
        py_s and is_quotient_map(d.pY),
        right,
        d.derived.is_bijective,
    )


def _require_valid(d: ReglueDatum, what: str = "datum") -> None:
    report = validate_reglue(d)
    if not report.ok:
        raise ValidationFailed(f"{what} fails: {', '.join(report.failed())}")


# ---------------------------------------------------------------------------
# the correspondence


def reglue_from_splithomeo(f: PointMap) -> ReglueDatum:
    """``Z = gr(f*)`` in ``X × Y`` with the two coordinate projections."""
    X, Y = f.domain, f.codomain
    _require_discrete(X, Y)
    if not is_split_homeo(f):
        raise HypothesisViolated("map is not a split homeomorphism")
    P = product(X, Y)
    gr = star(f).graph_mask()
    Z, incl = subspace(P, gr, name="gr(f*)")
    m = Y.n
    pX = PointMap(Z, X, tuple(i // m for i in incl.table))
    pY = PointMap(Z, Y, tuple(i % m for i in incl.table))
    pos = {old: new for new, old in enumerate(incl.table)}
    pXinv = PointMap(X, Z, tuple(pos[x * m + f.table[x]] for x in range(X.n)))
    d = ReglueDatum(Z, pX, pY, pXinv)
    _require_valid(d, "constructed datum")
    return d


def splithomeo_from_reglue(d: ReglueDatum) -> PointMap:
    """``f = pY ∘ pXinv``, certified as a split homeomorphism."""
    _require_valid(d)
    f = d.derived
    if not is_split_homeo(f):
        raise InternalMismatch("derived bijection is not a split homeomorphism")
    if d.pY.after(d.pYinv).table != tuple(range(d.Y.n)):
        raise InternalMismatch("pXinv ∘ f⁻¹ is not a right inverse of pY")
    return f


def identity_datum(S: FinSpace) -> ReglueDatum:
    ident = PointMap.identity(S)
    return ReglueDatum(S, ident, ident, ident)


def reglue_reverse(d: ReglueDatum) -> ReglueDatum:
    """The symmetric datum ``(Z, pY, pX, pXinv ∘ f⁻¹)``; it derives ``f⁻¹``."""
    _require_valid(d)
    return ReglueDatum(d.Z, d.pY, d.pX, d.pYinv)


def reglue_transitive(d1: ReglueDatum, d2: ReglueDatum) -> ReglueDatum:
    """Compose ``X ⇌ Y`` and ``Y ⇌ W`` on ``Z ⊔ Z′``.

    With ``f = pY ∘ pXinv`` and ``g = qW ∘ qYinv`` the result derives
    ``g ∘ f``.
    """
    if d1.Y != d2.X:
        raise SpaceMismatch("the middle spaces of the two data differ")
    _require_valid(d1, "first datum")
    _require_valid(d2, "second datum")
    Z, Zp = d1.Z, d2.Z
    pX, pY, pYinv = d1.pX, d1.pY, d1.pYinv
    qY, qW, qYinv = d2.pX, d2.pY, d2.pXinv
    U = disjoint_union(Z, Zp)
    via_x = pX.after(pYinv).after(qY)
    via_w = qW.after(qYinv).after(pY)
    pi_x = PointMap(U, d1.X, pX.table + via_x.table)
    pi_w = PointMap(U, d2.Y, via_w.table + qW.table)
    pi_x_inv = PointMap(d1.X, U, d1.pXinv.table)
    d = ReglueDatum(U, pi_x, pi_w, pi_x_inv)
    _require_valid(d, "composite datum")
    return d


# ---------------------------------------------------------------------------
# files


def datum_to_dict(d: ReglueDatum, names: dict[str, str] | None = None) -> dict:
    """Reglue file record; values name the space and function files."""
    names = names or {}
    return {k: names.get(k, k) for k in ("Z", "pX", "pY", "pXinv")}


def save_datum(d: ReglueDatum, directory, stem: str = "reglue") -> Path:
    """Write the datum and every file it references into ``directory``."""
    from .topology import dump_space_text

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    spaces = {"Z": d.Z, "X": d.X, "Y": d.Y}
    named = {k: S.renamed(f"{stem}_{k}") for k, S in spaces.items()}
    for S in named.values():
        (directory / f"{S.name}.json").write_text(dump_space_text(S))
    for key, fn, dom, cod in (
        ("pX", d.pX, "Z", "X"),
        ("pY", d.pY, "Z", "Y"),
        ("pXinv", d.pXinv, "X", "Z"),
    ):
        rec = {"domain": named[dom].name, "codomain": named[cod].name, "map": fn.as_dict()}
        (directory / f"{stem}_{key}.json").write_text(json.dumps(rec, indent=2) + "\n")
    rec = {"Z": named["Z"].name, "pX": f"{stem}_pX", "pY": f"{stem}_pY", "pXinv": f"{stem}_pXinv"}
    path = directory / f"{stem}.json"
    path.write_text(json.dumps(rec, indent=2) + "\n")
    return path


def all_bijections(X: FinSpace, Y: FinSpace):
    if X.n != Y.n:
        return
    for perm in itertools.permutations(range(Y.n)):
        yield PointMap(X, Y, perm)


__all__ = [
    "ReglueDatum",
    "ReglueReport",
    "all_bijections",
    "identity_datum",
    "inverse_star",
    "is_quotient_map",
    "is_split_homeo",
    "reglue_from_splithomeo",
    "reglue_reverse",
    "reglue_transitive",
    "save_datum",
    "split_homeomorphic",
    "splithomeo_from_reglue",
    "validate_reglue",
]
