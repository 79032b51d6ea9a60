"""Batch command-line front end.

Every command prints one line per item, prefixed ``OK``, ``FAIL`` or
``FUEL`` (or one JSON record per item with ``--json``).  Exit codes:
0 success, 1 semantic failure, 2 input failure, 3 fuel exhaustion.  When
several items are reported, any ``FAIL`` gives 1, otherwise any ``FUEL``
gives 3.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import corpus
from .confluence import DEFAULT_MAX_SIZE
from .embedding import (
    EmbeddingConfig, GeneratedEmbedding, back_translate, check_inhabitation_theorem,
    generate_embedding, recover_embedding, translate_context, translate_term, translate_type,
)
from .errors import FuelExhausted, LpmodError, ParseError
from .kernel import Kernel, check_rule
from .lab import run_diamond_lab
from .pts import pts_check
from .syntax import (
    Judgment, context_names, parse_context, parse_judgments, parse_lpm, parse_spec,
    parse_term, print_context, print_judgment, print_signature, print_term,
)
from .terms import PtsSort, Sort

__all__ = ["main", "build_parser", "EXIT_OK", "EXIT_FAIL", "EXIT_INPUT", "EXIT_FUEL"]

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_FUEL = 0, 1, 2, 3
DEFAULT_CLI_FUEL = 1_000_000

log = logging.getLogger("lpmod")


class InputError(Exception):
    """Unreadable or malformed input; maps to exit code 2."""


@dataclass
class Report:
    """Collects per-item outcomes and renders them as text or JSON lines."""

    as_json: bool = False
    out: object = field(default_factory=lambda: sys.stdout)
    statuses: list = field(default_factory=list)

    def emit(self, status: str, label: str, message: str = "", **extra) -> None:
        self.statuses.append(status)
        if self.as_json:
            record = {"status": status, "item": label, "message": message, **extra}
            print(json.dumps(record, ensure_ascii=False), file=self.out)
            return
        line = f"{status} {label}"
        if message:
            line += f": {message}"
        print(line, file=self.out)
        for key, value in extra.items():
            print(f"  {key}: {value}", file=self.out)

    def exit_code(self) -> int:
        if "FAIL" in self.statuses:
            return EXIT_FAIL
        if "FUEL" in self.statuses:
            return EXIT_FUEL
        return EXIT_OK


# ---------------------------------------------------------------------------
# Input helpers


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror or e}") from e


def load_spec_arg(arg: Optional[str]) -> EmbeddingConfig:
    """``--spec`` is a ``.pts`` path or the name of a bundled system."""
    if arg is None:
        raise InputError("--spec is required for this command")
    if not Path(arg).exists() and arg in corpus.SYSTEMS:
        text, file = corpus.spec_text(arg), f"<{arg}>"
    else:
        text, file = _read(arg), arg
    sf = parse_spec(text, file)
    return EmbeddingConfig(sf.spec, sf.default_sort)


def _embedding(args) -> GeneratedEmbedding:
    return generate_embedding(load_spec_arg(args.spec))


def _judgments(args, spec) -> list:
    return parse_judgments(_read(args.file), spec.sorts, args.file)


def _is_top(spec, a) -> bool:
    return isinstance(a, Sort) and isinstance(a.tag, PtsSort) and spec.is_top(a.tag.name)


def _label(j: Judgment) -> str:
    where = f"{j.span.file}:{j.span.start[0]}" if j.span and j.span.file else (
        f"line {j.span.start[0]}" if j.span else "")
    text = print_judgment(j)
    return f"{where} {text}".strip() if where else text


def _kernel(emb_or_sig, args) -> Kernel:
    if isinstance(emb_or_sig, GeneratedEmbedding):
        return Kernel(emb_or_sig.signature, emb_or_sig.rules, args.lambda_pi_minus, args.fuel,
                      args.trace)
    sig, rules = emb_or_sig
    return Kernel(sig, rules, args.lambda_pi_minus, args.fuel, args.trace)


# ---------------------------------------------------------------------------
# Commands


def cmd_pts_check(args, report: Report) -> None:
    cfg = load_spec_arg(args.spec)
    for j in _judgments(args, cfg.spec):
        try:
            pts_check(cfg.spec, j.ctx, j.term, j.type, args.fuel)
            report.emit("OK", _label(j))
        except FuelExhausted as e:
            report.emit("FUEL", _label(j), str(e))
        except LpmodError as e:
            report.emit("FAIL", _label(j), str(e))


def cmd_embed(args, report: Report) -> None:
    cfg = load_spec_arg(args.spec)
    try:
        emb = generate_embedding(cfg)
    except LpmodError as e:
        report.emit("FAIL", "embed", str(e))
        return
    text = print_signature(emb.signature, emb.rules)
    if args.output:
        try:
            Path(args.output).write_text(text, encoding="utf-8")
        except OSError as e:
            raise InputError(f"cannot write {args.output}: {e.strerror or e}") from e
        report.emit("OK", "embed", f"{len(emb.signature)} declarations, {len(emb.rules)} rules "
                    f"written to {args.output}")
    else:
        sys.stdout.write(text)
        report.statuses.append("OK")


def cmd_translate(args, report: Report) -> None:
    emb = _embedding(args)
    for j in _judgments(args, emb.spec):
        try:
            lctx = translate_context(emb, j.ctx, args.fuel)
            names = context_names(lctx)
            if args.mode == "term":
                result = print_term(translate_term(emb, j.ctx, j.term, args.fuel), names)
            elif args.mode == "type":
                result = print_term(translate_type(emb, j.ctx, j.term, args.fuel), names)
            elif args.mode == "context":
                result = print_context(lctx)
            else:
                lj = Judgment(lctx, translate_term(emb, j.ctx, j.term, args.fuel),
                              translate_type(emb, j.ctx, j.type, args.fuel))
                result = print_judgment(lj)
            report.emit("OK", _label(j), result=result)
        except FuelExhausted as e:
            report.emit("FUEL", _label(j), str(e))
        except LpmodError as e:
            report.emit("FAIL", _label(j), str(e))


def _load_lpm(path: str):
    return parse_lpm(_read(path), path)


def cmd_lpm_check(args, report: Report) -> None:
    f = _load_lpm(args.sigfile)
    judgments = list(f.judgments)
    for extra in args.judgments:
        g = _load_lpm(extra)
        if len(g.signature) or g.rules:
            raise InputError(f"{extra}: only judgments are allowed in a judgment file")
        judgments.extend(g.judgments)
    k = _kernel((f.signature, f.rules), args)
    try:
        k.check_signature()
        report.emit("OK", f"signature ({len(f.signature)} declarations)")
    except FuelExhausted as e:
        report.emit("FUEL", "signature", str(e))
        return
    except LpmodError as e:
        report.emit("FAIL", "signature", str(e))
        return
    for i, r in enumerate(f.rules):
        label = f"rule {r.name or i + 1}"
        try:
            check_rule(f.signature, r, args.fuel)
            report.emit("OK", label)
        except FuelExhausted as e:
            report.emit("FUEL", label, str(e))
        except LpmodError as e:
            report.emit("FAIL", label, str(e))
    for j in judgments:
        try:
            k.check(j.ctx, j.term, j.type)
            report.emit("OK", _label(j))
        except FuelExhausted as e:
            report.emit("FUEL", _label(j), str(e))
        except LpmodError as e:
            report.emit("FAIL", _label(j), str(e))


def cmd_normalize(args, report: Report) -> None:
    f = _load_lpm(args.sigfile)
    k = _kernel((f.signature, f.rules), args)
    ctx = parse_context(args.ctx) if args.ctx else ()
    names = [n for n, _ in ctx]
    t = parse_term(args.term, names)
    try:
        nf = k.whnf(t) if args.whnf else k.normalize(t)
        report.emit("OK", args.term, result=print_term(nf, names))
    except FuelExhausted as e:
        report.emit("FUEL", args.term, str(e))


def cmd_back(args, report: Report) -> None:
    emb = _embedding(args)
    ctx = parse_context(args.ctx) if args.ctx else ()
    names = [n for n, _ in ctx]
    t = parse_term(args.term, names)
    report.emit("OK", args.term, result=print_term(back_translate(emb, t), names))


def cmd_extract(args, report: Report) -> None:
    emb = _embedding(args)
    sorts = emb.spec.sorts
    ctx = parse_context(args.ctx, sorts) if args.ctx else ()
    names = [n for n, _ in ctx]
    a = parse_term(args.type, names, sorts)
    t = parse_term(args.term, names)
    try:
        r = check_inhabitation_theorem(emb, ctx, a, t, args.fuel)
    except LpmodError as e:
        report.emit("FAIL", args.term, str(e))
        return
    extra = {}
    if r.normal_form is not None:
        extra["normal form"] = print_term(r.normal_form, names)
    if r.expanded is not None and r.expanded != r.normal_form:
        extra["expanded"] = print_term(r.expanded, names)
    if r.ok:
        extra["witness"] = print_term(r.witness, names)
        report.emit("OK", args.term, **extra)
    else:
        report.emit("FUEL" if r.status == "fuel" else "FAIL", args.term, r.message, **extra)


def cmd_roundtrip(args, report: Report) -> None:
    emb = _embedding(args)
    for j in _judgments(args, emb.spec):
        try:
            bad = []
            if back_translate(emb, translate_term(emb, j.ctx, j.term, args.fuel)) != j.term:
                bad.append("|t|* differs from t")
            if not _is_top(emb.spec, j.type) and \
                    back_translate(emb, translate_type(emb, j.ctx, j.type, args.fuel)) != j.type:
                bad.append("‖A‖* differs from A")
            lctx = translate_context(emb, j.ctx, args.fuel)
            if tuple((n, back_translate(emb, ty)) for n, ty in lctx) != tuple(j.ctx):
                bad.append("‖Γ‖* differs from Γ")
            report.emit("FAIL" if bad else "OK", _label(j), "; ".join(bad))
        except FuelExhausted as e:
            report.emit("FUEL", _label(j), str(e))
        except LpmodError as e:
            report.emit("FAIL", _label(j), str(e))


def cmd_lab_diamond(args, report: Report) -> None:
    if args.sigfile:
        f = _load_lpm(args.sigfile)
        try:
            emb = recover_embedding(f.signature, f.rules)
        except LpmodError as e:
            report.emit("FAIL", args.sigfile, str(e))
            return
    else:
        emb = _embedding(args)
    r = run_diamond_lab(emb, args.count, args.seed, args.max_size, args.depth)
    label = f"diamond lab (seed {args.seed}, size <= {args.max_size})"
    if r.ok:
        report.emit("OK", label, f"{r.checked} terms checked")
    else:
        report.emit("FAIL", label, f"counterexample after {r.checked} terms: {r.reason}",
                    counterexample=print_term(r.counterexample))


# ---------------------------------------------------------------------------
# Argument parsing


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="PTS spec file (.pts) or a bundled system name: "
                        + ", ".join(corpus.SYSTEMS))
    common.add_argument("--fuel", type=_positive, default=DEFAULT_CLI_FUEL,
                        help="reduction budget per item (default %(default)s)")
    common.add_argument("--lambda-pi-minus", action="store_true",
                        help="check in λΠ⁻ modulo: no β in conversion, no type-family abstraction")
    common.add_argument("--json", action="store_true", help="one JSON record per item")
    common.add_argument("--trace", action="store_true", help="log conversion and whnf steps to stderr")
    common.add_argument("--seed", type=int, default=0, help="random seed for lab commands")
    common.add_argument("--max-size", type=_positive, default=DEFAULT_MAX_SIZE,
                        help="term size bound for lab commands (default %(default)s)")

    p = argparse.ArgumentParser(prog="lpmod", description="λΠ-modulo kernel and PTS embedding toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("pts-check", parents=[common], help="type-check PTS judgments")
    s.add_argument("file", help="judgment file ('-' for stdin)")
    s.set_defaults(run=cmd_pts_check)

    s = sub.add_parser("embed", parents=[common], help="print the generated signature and rules")
    s.add_argument("-o", "--output", help="write the .lpm text here instead of stdout")
    s.set_defaults(run=cmd_embed)

    s = sub.add_parser("translate", parents=[common], help="translate PTS judgments")
    s.add_argument("file", help="judgment file ('-' for stdin)")
    s.add_argument("--mode", choices=("term", "type", "context", "judgment"), default="term",
                   help="translate the subject as a term or a type, the context, "
                        "or the whole judgment (default term)")
    s.set_defaults(run=cmd_translate)

    s = sub.add_parser("lpm-check", parents=[common],
                       help="check a signature, its rules and judgments")
    s.add_argument("sigfile", help=".lpm file with declarations, rules and optional judgments")
    s.add_argument("judgments", nargs="*", help="further .lpm files holding only judgments")
    s.set_defaults(run=cmd_lpm_check)

    s = sub.add_parser("normalize", parents=[common], help="βR-normalize a term")
    s.add_argument("sigfile")
    s.add_argument("term")
    s.add_argument("--ctx", help="context [x:A, ...] for free variables")
    s.add_argument("--whnf", action="store_true", help="stop at weak head normal form")
    s.set_defaults(run=cmd_normalize)

    s = sub.add_parser("back", parents=[common], help="back-translate a λΠ term")
    s.add_argument("term")
    s.add_argument("--ctx", help="λΠ context [x:A, ...] for free variables")
    s.set_defaults(run=cmd_back)

    s = sub.add_parser("extract", parents=[common],
                       help="extract a PTS inhabitant of A from a λΠ inhabitant of ‖A‖")
    s.add_argument("term", help="candidate λΠ term")
    s.add_argument("--type", required=True, help="PTS type A")
    s.add_argument("--ctx", help="PTS context [x:A, ...]")
    s.set_defaults(run=cmd_extract)

    s = sub.add_parser("roundtrip", parents=[common], help="check |t|* = t and ‖A‖* = A")
    s.add_argument("file", help="judgment file ('-' for stdin)")
    s.set_defaults(run=cmd_roundtrip)

    s = sub.add_parser("lab-diamond", parents=[common],
                       help="check parallel-reduction properties on random terms")
    s.add_argument("sigfile", nargs="?", help="generated .lpm signature (or use --spec)")
    s.add_argument("--count", type=_positive, default=10_000)
    s.add_argument("--depth", type=_positive, default=14, help="reachability search depth")
    s.set_defaults(run=cmd_lab_diamond)
    return p


def main(argv=None) -> int:
    """Run one command; argparse usage errors already exit with code 2."""
    args = build_parser().parse_args(argv)
    if args.trace:
        logging.basicConfig(level=logging.DEBUG, format="%(message)s", stream=sys.stderr)
    report = Report(as_json=args.json)
    try:
        args.run(args, report)
    except (InputError, ParseError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except FuelExhausted as e:
        report.emit("FUEL", args.command, str(e))
        return EXIT_FUEL
    except LpmodError as e:
        report.emit("FAIL", args.command, str(e))
        return EXIT_FAIL
    return report.exit_code()


if __name__ == "__main__":
    sys.exit(main())
