"""Command-line entry point.

Exit codes: 0 success with no Error diagnostics, 1 when Error diagnostics
were emitted, 2 on usage/parse/IO failure. Machine output goes to stdout,
human-readable logs to stderr, and identical invocations produce
byte-identical output.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from pathlib import Path

from .core import Direction, Model, QualitySpace
from .dot import world_to_dot
from .errors import IllFormedModelError, OntoError, ScopeTooLargeError
from .interop import compare
from .jsonio import emit_json
from .lint import lint
from .parser import ParseError, parse_text, render_dsl
from .rules import Severity, check
from .unpack import (
    apply_plan,
    derive_material_cardinalities,
    unpack_comparative,
    unpack_material,
)
from .worlds import Scope, enumerate_worlds
from . import jsonio


class _Failure(Exception):
    """Abort the invocation with an exit code and stderr lines."""

    def __init__(self, code: int, *messages: str):
        super().__init__(messages[0] if messages else "")
        self.code = code
        self.messages = messages


def _dump(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def _load_model(path: str) -> Model:
    p = Path(path)
    if not p.is_file():
        raise _Failure(2, f"no such file: {path}")
    try:
        raw = p.read_bytes()
    except OSError as exc:
        raise _Failure(2, f"cannot read {path}: {exc}")
    if p.name.endswith(".json"):
        result = jsonio.load_json(raw)
        if isinstance(result, ParseError):
            raise _Failure(2, f"{path}:{result}")
        return result
    result = parse_text(raw.decode("utf-8", errors="replace"))
    if isinstance(result, list):
        raise _Failure(2, *[f"{path}:{e}" for e in result])
    return result


_QV_ENTRY = re.compile(r"([A-Za-z_]\w*)=\{([^{}]*)\}")


def _parse_quality_values(text: str) -> dict[str, tuple]:
    matched = _QV_ENTRY.sub("", text).replace(",", "").strip()
    if matched:
        raise _Failure(2, f"bad --quality-values '{text}' (expected Name={{v1,v2,...}})")
    out: dict[str, tuple] = {}
    for name, body in _QV_ENTRY.findall(text):
        values = []
        for tok in body.split(","):
            tok = tok.strip()
            if not tok:
                continue
            values.append(int(tok) if re.fullmatch(r"-?\d+", tok) else tok)
        out[name] = tuple(values)
    return out


def _build_scope(args) -> Scope:
    per: dict[str, int] = {}
    for part in (args.scope or "").split(","):
        part = part.strip()
        if not part:
            continue
        name, eq, num = part.partition("=")
        if not eq or not re.fullmatch(r"\d+", num.strip()):
            raise _Failure(2, f"bad --scope entry '{part}' (expected Name=INT)")
        per[name.strip()] = int(num)
    kwargs = {}
    if getattr(args, "scope_default", None) is not None:
        kwargs["default_count"] = args.scope_default
    if getattr(args, "limit", None) is not None:
        kwargs["world_limit"] = args.limit
    qv = _parse_quality_values(args.quality_values) if args.quality_values else {}
    try:
        return Scope(per_classifier=per, quality_values=qv, **kwargs)
    except ValueError as exc:
        raise _Failure(2, str(exc))


def _require_format(args, *allowed: str):
    if args.format not in allowed:
        raise _Failure(
            2,
            f"--format {args.format} is not valid for '{args.command}' "
            f"(choose from: {', '.join(allowed)})",
        )


def _diag_text(diags) -> str:
    return "".join(
        f"{d.rule_id} {d.severity.value} "
        f"{d.span.line}:{d.span.column} {d.message}\n"
        for d in diags
    )


def _report_errors(diags) -> int:
    for line in _diag_text(diags).splitlines():
        print(line, file=sys.stderr)
    return 1


def _cmd_parse(args):
    _require_format(args, "json", "text")
    model = _load_model(args.input)
    if args.format == "json":
        return 0, emit_json(model).decode("utf-8")
    return 0, render_dsl(model)


def _cmd_check(args):
    _require_format(args, "json", "text")
    model = _load_model(args.input)
    diags = check(model)
    out = _dump([d.to_dict() for d in diags]) if args.format == "json" else _diag_text(diags)
    code = 1 if any(d.severity is Severity.ERROR for d in diags) else 0
    return code, out


def _cmd_unpack(args):
    _require_format(args, "json", "text")
    model = _load_model(args.input)
    try:
        if args.quality:
            if not args.space:
                raise _Failure(2, "unpack --quality also needs --space LO..HI")
            m = re.fullmatch(r"(-?\d+)\.\.(-?\d+)", args.space)
            if not m:
                raise _Failure(2, f"bad --space '{args.space}' (expected LO..HI)")
            space = QualitySpace(owner=args.quality, ordered=(int(m.group(1)), int(m.group(2))))
            plan = unpack_comparative(
                model, args.relation, args.quality, space, Direction(args.direction)
            )
        else:
            if not args.relator or not args.roles:
                raise _Failure(
                    2,
                    "unpack needs --relator NAME --roles A,B "
                    "(or --quality/--space/--direction for the comparative form)",
                )
            roles = tuple(r.strip() for r in args.roles.split(",") if r.strip())
            if len(roles) != 2:
                raise _Failure(2, f"--roles wants exactly two names, got '{args.roles}'")
            plan = unpack_material(model, args.relation, args.relator, roles)
        new_model = apply_plan(model, plan)
    except OntoError as exc:
        raise _Failure(2, f"unpack failed: {exc}")
    if args.format == "json":
        doc = {
            "plan": plan.to_dict(),
            "model": json.loads(emit_json(new_model).decode("utf-8")),
        }
        return 0, _dump(doc)
    return 0, render_dsl(new_model)


def _cmd_derive_cards(args):
    _require_format(args, "json", "text")
    model = _load_model(args.input)
    try:
        end_a, end_b, per_tuple = derive_material_cardinalities(model, args.relator)
    except OntoError as exc:
        raise _Failure(2, str(exc))
    meds = model.mediations_of(args.relator)
    doc = {
        "relator": args.relator,
        "endA": {"classifier": meds[0].target, "mult": end_a.to_dict(), "text": str(end_a)},
        "endB": {"classifier": meds[1].target, "mult": end_b.to_dict(), "text": str(end_b)},
        "perTuple": {"mult": per_tuple.to_dict(), "text": str(per_tuple)},
    }
    if args.format == "json":
        return 0, _dump(doc)
    return 0, (
        f"{args.relator}: endA {meds[0].target} {end_a}, "
        f"endB {meds[1].target} {end_b}, perTuple {per_tuple}\n"
    )


def _world_text(world, index: int) -> str:
    lines = [f"world {index}"]
    for ind, _base in world.individuals:
        lines.append(f"  {ind} : {', '.join(sorted(world.types[ind]))}")
    for rel, s, t in world.links:
        lines.append(f"  link {rel} {s} -> {t}")
    for q, b, v in world.value_rows:
        lines.append(f"  value {q}({b}) = {v}")
    return "\n".join(lines) + "\n"


def _cmd_simulate(args):
    scope = _build_scope(args)
    model = _load_model(args.input)
    try:
        worlds = enumerate_worlds(model, scope)
    except IllFormedModelError as exc:
        return _report_errors(exc.diagnostics), ""
    except ScopeTooLargeError as exc:
        raise _Failure(2, str(exc))
    if args.format == "json":
        return 0, _dump([w.to_dict() for w in worlds])
    if args.format == "dot":
        return 0, "".join(
            world_to_dot(model, w, name=f"world_{i}") for i, w in enumerate(worlds)
        )
    return 0, "".join(_world_text(w, i) for i, w in enumerate(worlds))


def _cmd_lint(args):
    scope = _build_scope(args)
    model = _load_model(args.input)
    try:
        diags = lint(model, scope)
    except IllFormedModelError as exc:
        return _report_errors(exc.diagnostics), ""
    except ScopeTooLargeError as exc:
        raise _Failure(2, str(exc))
    if args.format == "json":
        return 0, _dump([d.to_dict() for d in diags])
    if args.format == "dot":
        witnesses = [d.witness for d in diags if d.witness is not None]
        return 0, "".join(
            world_to_dot(model, w, name=f"witness_{i}") for i, w in enumerate(witnesses)
        )
    return 0, _diag_text(diags)


def _cmd_diff(args):
    _require_format(args, "json", "text")
    left = _load_model(args.left)
    right = _load_model(args.right)
    for m in (left, right):
        errors = [d for d in check(m) if d.severity is Severity.ERROR]
        if errors:
            return _report_errors(errors), ""
    pairs = None
    if args.pairs:
        pairs = []
        for part in args.pairs.split(","):
            lname, eq, rname = part.partition("=")
            if not eq:
                raise _Failure(2, f"bad --pairs entry '{part}' (expected Left=Right)")
            pairs.append((lname.strip(), rname.strip()))
    try:
        rows = compare(left, right, pairs)
    except OntoError as exc:
        raise _Failure(2, str(exc))
    if args.format == "json":
        return 0, _dump([c.to_dict() for c in rows])
    return 0, "".join(
        f"{c.left[0]}:{c.left[1]} ~ {c.right[0]}:{c.right[1]}: "
        f"{c.verdict.value} — {c.rationale}\n"
        for c in rows
    )


_DISPATCH = {
    "parse": _cmd_parse,
    "check": _cmd_check,
    "unpack": _cmd_unpack,
    "derive-cards": _cmd_derive_cards,
    "simulate": _cmd_simulate,
    "lint": _cmd_lint,
    "diff": _cmd_diff,
}


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "dot", "text"), default="json")
    common.add_argument("-o", "--output", help="write output to a file instead of stdout")

    scoped = argparse.ArgumentParser(add_help=False)
    scoped.add_argument("--scope", help="Name=INT{,Name=INT} individual caps")
    scoped.add_argument("--scope-default", type=int, help="default per-base cap")
    scoped.add_argument("--quality-values", help="Name={v1,v2,...} value subsets")
    scoped.add_argument("--limit", type=int, help="maximum number of worlds")

    parser = argparse.ArgumentParser(prog="ontounpack")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common], help="parse and echo a model")
    p.add_argument("input")
    p = sub.add_parser("check", parents=[common], help="run the well-formedness catalog")
    p.add_argument("input")
    p = sub.add_parser("unpack", parents=[common], help="unpack a material or comparative relation")
    p.add_argument("input")
    p.add_argument("relation")
    p.add_argument("--relator", help="name for the introduced relator")
    p.add_argument("--roles", help="two comma-separated role names")
    p.add_argument("--quality", help="name for the grounding quality (comparative form)")
    p.add_argument("--space", help="LO..HI ordered space for --quality")
    p.add_argument("--direction", choices=("asc", "desc"), default="desc")
    p = sub.add_parser("derive-cards", parents=[common], help="derive material cardinalities")
    p.add_argument("input")
    p.add_argument("relator")
    p = sub.add_parser("simulate", parents=[common, scoped], help="enumerate instance worlds")
    p.add_argument("input")
    p = sub.add_parser("lint", parents=[common, scoped], help="detect anti-patterns with witnesses")
    p.add_argument("input")
    p = sub.add_parser("diff", parents=[common], help="classify correspondences between two models")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--pairs", help="Left=Right{,Left=Right} explicit classifier pairs")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        code, out = _DISPATCH[args.command](args)
    except _Failure as failure:
        for message in failure.messages:
            print(message, file=sys.stderr)
        return failure.code
    if args.output:
        try:
            Path(args.output).write_text(out, encoding="utf-8")
        except OSError as exc:
            print(f"cannot write {args.output}: {exc}", file=sys.stderr)
            return 2
    else:
        try:
            sys.stdout.write(out)
            sys.stdout.flush()
        except BrokenPipeError:
            devnull = os.open(os.devnull, os.O_WRONLY)
            os.dup2(devnull, sys.stdout.fileno())
    return code


if __name__ == "__main__":
    sys.exit(main())
