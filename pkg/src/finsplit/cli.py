"""``finsplit``: run any check on spaces, maps and multimaps stored as JSON.

Exit codes: 0 success, 1 negative verdict or property failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from . import gallery, multifunction as mf, multisplit as ms, splithomeo as sh, suite
from .errors import (
    DanglingReference,
    FinSplitError,
    InternalMismatch,
    NotATopology,
    DuplicateLabel,
    ParseError,
    ValidationError,
)
from .topology import (
    FinSpace,
    PointMap,
    closure_interior_boundary,
    separation_flags,
)

KINDS = ("space", "fn", "multimap", "reglue")


# ---------------------------------------------------------------------------
# workspace


@dataclass
class Workspace:
    """Loaded objects by kind and name; references resolve to sibling files."""

    spaces: dict[str, FinSpace] = field(default_factory=dict)
    maps: dict[str, PointMap] = field(default_factory=dict)
    multimaps: dict[str, mf.MultiMap] = field(default_factory=dict)
    reglues: dict[str, sh.ReglueDatum] = field(default_factory=dict)

    def _store(self, table: dict, name: str, obj, kind: str):
        old = table.get(name)
        if old is not None and old != obj:
            raise ValidationError(f"a different {kind} named {name!r} is already loaded")
        table[name] = obj
        return obj

    def _resolve(self, table: dict, name: str, kind: str, near: Path):
        if not isinstance(name, str):
            raise ValidationError(f"{kind} reference must be a name, got {name!r}")
        if name in table:
            return table[name]
        candidate = near / f"{name}.json"
        if candidate.is_file():
            return self.load(candidate, kind)
        raise DanglingReference(f"{kind} {name!r} is neither loaded nor found at {candidate}")

    def space(self, name: str, near: Path) -> FinSpace:
        return self._resolve(self.spaces, name, "space", near)

    def load(self, path, kind: str | None = None):
        path = Path(path)
        try:
            data = json.loads(path.read_text())
        except OSError as exc:
            raise ParseError(f"cannot read {path}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc.msg} at line {exc.lineno}") from None
        if not isinstance(data, dict):
            raise ParseError(f"{path}: expected a JSON object")
        kind = kind or guess_kind(data)
        near = path.parent
        stem = path.stem
        try:
            if kind == "space":
                obj = FinSpace.from_dict({**data, "name": data.get("name") or stem})
                return self._store(self.spaces, obj.name, obj, kind)
            if kind in ("fn", "multimap"):
                for key in ("domain", "codomain", "map"):
                    if key not in data:
                        raise ValidationError(f"{path}: missing field {key!r}")
                X = self.space(data["domain"], near)
                Y = self.space(data["codomain"], near)
                if not isinstance(data["map"], dict):
                    raise ValidationError(f"{path}: 'map' must be an object")
                if kind == "fn":
                    obj = PointMap.from_labels(X, Y, data["map"])
                    return self._store(self.maps, data.get("name", stem), obj, kind)
                obj = mf.MultiMap.from_labels(X, Y, data["map"])
                return self._store(self.multimaps, data.get("name", stem), obj, kind)
            if kind == "reglue":
                for key in ("Z", "pX", "pY", "pXinv"):
                    if key not in data:
                        raise ValidationError(f"{path}: missing field {key!r}")
                Z = self.space(data["Z"], near)
                pX, pY, pXinv = (self._resolve(self.maps, data[k], "fn", near) for k in ("pX", "pY", "pXinv"))
                obj = sh.ReglueDatum(Z, pX, pY, pXinv)
                return self._store(self.reglues, data.get("name", stem), obj, kind)
        except (NotATopology, DuplicateLabel) as exc:
            raise ValidationError(f"{path}: {exc}") from None
        except (ValueError, KeyError) as exc:
            if isinstance(exc, FinSplitError):
                raise
            msg = exc.args[0] if exc.args else exc
            raise ValidationError(f"{path}: {msg}") from None
        raise ValidationError(f"unknown kind {kind!r}")


def guess_kind(data: dict) -> str:
    if "opens" in data:
        return "space"
    if "pXinv" in data:
        return "reglue"
    if "map" in data:
        values = data["map"].values() if isinstance(data["map"], dict) else []
        return "multimap" if any(isinstance(v, list) for v in values) else "fn"
    raise ParseError("cannot tell what kind of object this file holds")


# ---------------------------------------------------------------------------
# reports


def render(report: dict, fmt: str) -> str:
    if fmt == "record":
        return json.dumps(report, ensure_ascii=False)
    lines = []
    for key, value in report.items():
        if isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{key}:")
            for item in value:
                lines.append("  " + json.dumps(item, ensure_ascii=False))
        else:
            text = value if isinstance(value, str) else json.dumps(value, ensure_ascii=False)
            lines.append(f"{key}: {text}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# commands


def _split_labels(text: str | None) -> list[str]:
    if not text:
        return []
    return [s.strip() for s in text.split(",") if s.strip()]


def cmd_validate(ws: Workspace, a) -> tuple[dict, int]:
    obj = ws.load(a.file, a.kind)
    out: dict[str, Any] = {"file": str(a.file), "kind": type(obj).__name__, "valid": True}
    if isinstance(obj, FinSpace):
        out.update(name=obj.name, points=len(obj.points), opens=len(obj.opens))
    elif isinstance(obj, sh.ReglueDatum):
        report = sh.validate_reglue(obj)
        out.update(report.to_dict())
        out["valid"] = report.ok
        return out, 0 if report.ok else 1
    return out, 0


def cmd_closure(ws, a):
    S = ws.load(a.space, "space")
    A = S.subset(_split_labels(a.set))
    cl, it, bd = closure_interior_boundary(S, A)
    return {"set": A.labels(), "closure": cl.labels(), "interior": it.labels(), "boundary": bd.labels()}, 0


def cmd_separation(ws, a):
    S = ws.load(a.space, "space")
    return separation_flags(S)._asdict(), 0


def _fn(ws, a) -> PointMap:
    return ws.load(a.fn, "fn")


def _mm(ws, a) -> mf.MultiMap:
    return ws.load(a.mm, "multimap")


def cmd_evsets(ws, a):
    f = _fn(ws, a)
    points = [a.point] if a.point else list(f.domain.points)
    reports = [ms.ev_report(f, p) for p in points]
    if len(reports) == 1:
        return reports[0], 0
    return {"points": reports}, 0


def cmd_star(ws, a):
    F = ms.star(_fn(ws, a))
    return {"star": F.as_dict()}, 0


def cmd_msc(ws, a):
    f = _fn(ws, a)
    v = ms.is_multi_split(f, a.point)
    cert = {p: [s.labels() for s in fam.minimal] for p, fam in v.witness.items()}
    return {"multi_split": v.ok, "minimal_certificates": cert}, 0 if v.ok else 1


def cmd_usc(ws, a):
    F = _mm(ws, a)
    v = mf.is_usc(F, a.point)
    out = {"usc": v.ok}
    if not v.ok:
        out["point"], out["open"] = v.witness
    return out, 0 if v.ok else 1


def cmd_usco(ws, a):
    F = _mm(ws, a)
    mode = "minimal" if a.minimal else "usco"
    v = mf.is_usco(F, mode)
    out = {"mode": mode, "ok": v.ok}
    if v.witness is not None:
        out["smaller_usco"] = v.witness.as_dict()
    return out, 0 if v.ok else 1


def cmd_prems(ws, a):
    F = _mm(ws, a)
    r = ms.is_pre_multi_split(F, a.point)
    out = {"pre_multi_split": r.ok, "selections": r.selections, "certified_by_values": r.certified}
    if not r.certified:
        out["uncertified"] = r.uncertified
    return out, 0 if r.ok else 1


def cmd_graphclosure(ws, a):
    if bool(a.fn) == bool(a.mm):
        raise ValidationError("give exactly one of --fn or --mm")
    F = _fn(ws, a) if a.fn else _mm(ws, a)
    gr, cl = mf.graph_and_closure(F)
    return {"graph": gr.labels(), "closure": cl.labels(), "closed": gr.mask == cl.mask}, 0


def cmd_splithomeo(ws, a):
    f = _fn(ws, a)
    ok = sh.is_split_homeo(f)
    return {"split_homeomorphism": ok, "bijective": f.is_bijective}, 0 if ok else 1


def cmd_reglue_build(ws, a):
    f = _fn(ws, a)
    d = sh.reglue_from_splithomeo(f)
    out = {"Z": list(d.Z.points), "pX": d.pX.as_dict(), "pY": d.pY.as_dict(), "pXinv": d.pXinv.as_dict()}
    if a.out:
        out["file"] = str(sh.save_datum(d, a.out, a.stem))
    return out, 0


def cmd_reglue_verify(ws, a):
    d = ws.load(a.file, "reglue")
    report = sh.validate_reglue(d).to_dict()
    if report["ok"]:
        report["derived"] = d.derived.as_dict()
    return report, 0 if report["ok"] else 1


def cmd_reglue_compose(ws, a):
    d1 = ws.load(a.first, "reglue")
    d2 = ws.load(a.second, "reglue")
    d = sh.reglue_transitive(d1, d2)
    out = {"Z": len(d.Z.points), "derived": d.derived.as_dict(), "valid": sh.validate_reglue(d).ok}
    if a.out:
        out["file"] = str(sh.save_datum(d, a.out, a.stem))
    return out, 0


def cmd_gallery(ws, a):
    ex = a.example
    if ex == "f_weird":
        n = a.n or 5
        r = gallery.f_weird_star_check(n, a.depth or 50)
        return r.to_dict(), 0 if r.passed else 1
    if ex == "f_weird_eval":
        if a.q is None:
            raise ValidationError("f_weird_eval needs --q p/q")
        x, y = gallery.f_weird_eval(gallery.parse_rat(a.q), a.depth or 50)
        return {"q": gallery.rat(x), "value": [gallery.rat(x), gallery.rat(y)]}, 0
    if ex == "circle":
        d = gallery.circle_reglue_demo(a.n or 4)
        counts = gallery.circle_counts(d)
        counts["valid"] = sh.validate_reglue(d).ok
        return counts, 0
    r = gallery.divergence_witness(ex, a.depth or 1000)
    return r.to_dict(), 0 if r.passed else 1


def cmd_suite(ws, a):
    names = [a.property] if a.property else None
    if names and names[0] not in suite.REGISTRY:
        raise suite.UnknownProperty(f"no property named {names[0]!r}")
    trials = 20 if a.trials is None else a.trials
    results = suite.run_all(trials, a.seed, a.exhaustive_max, names)
    failed = [r.name for r in results if not r.passed]
    report = {
        "properties": len({r.name for r in results}),
        "failed": failed,
        "results": [r.to_dict() for r in results],
    }
    return report, 1 if failed else 0


COMMANDS = {
    "validate": cmd_validate,
    "closure": cmd_closure,
    "separation": cmd_separation,
    "evsets": cmd_evsets,
    "star": cmd_star,
    "msc": cmd_msc,
    "usc": cmd_usc,
    "usco": cmd_usco,
    "prems": cmd_prems,
    "graphclosure": cmd_graphclosure,
    "splithomeo": cmd_splithomeo,
    "reglue-build": cmd_reglue_build,
    "reglue-verify": cmd_reglue_verify,
    "reglue-compose": cmd_reglue_compose,
    "gallery": cmd_gallery,
    "suite": cmd_suite,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "record"), default="text",
                        help="text: one field per line; record: one JSON object")
    common.add_argument("--space", action="append", default=[], metavar="FILE", dest="preload",
                        help="preload a space file so references to it resolve (repeatable)")

    p = argparse.ArgumentParser(prog="finsplit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, help_):
        return sub.add_parser(name, help=help_, parents=[common])

    s = add("validate", "load and validate a space, function, multimap or reglue file")
    s.add_argument("file", type=Path)
    s.add_argument("--kind", choices=KINDS)

    s = add("closure", "closure, interior and boundary of a set")
    s.add_argument("space", type=Path)
    s.add_argument("--set", default="", help="comma-separated point labels")

    s = add("separation", "T0, Hausdorff and regularity flags")
    s.add_argument("space", type=Path)

    for name, help_ in (
        ("evsets", "all sets of extended values at a point"),
        ("star", "star multifunction (Hausdorff codomain)"),
        ("msc", "multi-split continuity with minimal certificates"),
        ("splithomeo", "whether a map is a split homeomorphism"),
    ):
        s = add(name, help_)
        s.add_argument("--fn", type=Path, required=True)
        if name in ("evsets", "msc"):
            s.add_argument("--point")

    for name, help_ in (
        ("usc", "upper semicontinuity of a multimap"),
        ("usco", "usco or minimal usco"),
        ("prems", "pre-multi-split check over all selections"),
    ):
        s = add(name, help_)
        s.add_argument("--mm", type=Path, required=True)
        if name in ("usc", "prems"):
            s.add_argument("--point")
        if name == "usco":
            s.add_argument("--minimal", action="store_true")

    s = add("graphclosure", "graph and its closure in the product")
    s.add_argument("--fn", type=Path)
    s.add_argument("--mm", type=Path)

    s = add("reglue-build", "cut-and-reglue datum from a bijection of discrete spaces")
    s.add_argument("--fn", type=Path, required=True)
    s.add_argument("--out", type=Path, help="directory to write the datum files into")
    s.add_argument("--stem", default="reglue")

    s = add("reglue-verify", "validate a reglue file clause by clause")
    s.add_argument("file", type=Path)

    s = add("reglue-compose", "compose two reglue data X⇌Y and Y⇌W")
    s.add_argument("first", type=Path)
    s.add_argument("second", type=Path)
    s.add_argument("--out", type=Path)
    s.add_argument("--stem", default="composite")

    s = add("gallery", "exact-rational checks of the infinite examples")
    s.add_argument("example", choices=("f_weird", "f_weird_eval", "one_over_n", "quotient_line", "comb_space", "circle"))
    s.add_argument("--depth", type=int, help="sequence depth K or N")
    s.add_argument("--n", type=int, help="index n for f_weird, chain length for circle")
    s.add_argument("--q", help="rational argument p/q for f_weird_eval")

    s = add("suite", "run the registered property checks")
    s.add_argument("action", nargs="?", choices=("run",), default="run")
    s.add_argument("--property")
    s.add_argument("--trials", type=int, help="random trials per property (default 20)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--exhaustive-max", type=int, default=3, dest="exhaustive_max")
    return p


def dispatch(command: str, args: argparse.Namespace, ws: Workspace | None = None) -> tuple[dict, int]:
    ws = ws or Workspace()
    for path in getattr(args, "preload", []) or []:
        ws.load(path, "space")
    try:
        handler = COMMANDS[command]
    except KeyError:
        return {"error": "UnknownCommand", "message": command}, 2
    try:
        return handler(ws, args)
    except InternalMismatch as exc:
        return {"error": "InternalMismatch", "message": str(exc)}, 1
    except FinSplitError as exc:
        return {"error": type(exc).__name__, "message": _message(exc)}, 2
    except KeyError as exc:
        return {"error": "UnknownPoint", "message": _message(exc)}, 2
    except ValueError as exc:
        return {"error": "InvalidInput", "message": _message(exc)}, 2


def _message(exc: Exception) -> str:
    return str(exc.args[0]) if exc.args else type(exc).__name__


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report, code = dispatch(args.command, args)
    except FinSplitError as exc:
        report, code = {"error": type(exc).__name__, "message": _message(exc)}, 2
    out = sys.stdout if code != 2 else sys.stderr
    print(render(report, args.format), file=out)
    return code


if __name__ == "__main__":
    sys.exit(main())
