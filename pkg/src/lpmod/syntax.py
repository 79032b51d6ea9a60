"""ASCII concrete syntax for terms, PTS specs, signatures and judgments.

Terms::

    !x:A. B      dependent product
    \\x:A. t      abstraction
    A -> B       non-dependent product, right associative
    f a b        application, left associative
    # ...        comment to end of line

A ``.lpm`` file holds declarations ``name : T.``, rewrite rules
``[x:A, ...] lhs --> rhs : T.`` and judgments ``[x:A, ...] |- t : T.``.
A ``.pts`` file holds ``name:``, ``sorts:``, ``axioms:``, ``rules:`` and
``default_sort:`` directives.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import DuplicateName, ParseError, UnknownSortName
from .kernel import RewriteRule, Signature
from .pts import PtsSpec
from .terms import (
    App, Const, Context, Lam, LpmSort, Pi, PtsSort, Sort, Term, Var, occurs, spine,
    subterms,
)

__all__ = [
    "SourceSpan", "Judgment", "LpmFile", "SpecFile", "parse_term", "print_term",
    "parse_context", "print_context", "parse_spec", "print_spec", "parse_signature",
    "parse_lpm", "print_signature", "print_rule", "print_judgment", "parse_judgments",
    "print_decl", "context_names",
]

KEYWORDS = {"Type": LpmSort.TYPE, "Kind": LpmSort.KIND}


@dataclass(frozen=True)
class SourceSpan:
    file: Optional[str]
    start: tuple
    end: tuple

    def __str__(self):
        (l1, c1), (l2, c2) = self.start, self.end
        where = f"{self.file}:" if self.file else ""
        return f"{where}{l1}:{c1}" if (l1, c1) == (l2, c2) else f"{where}{l1}:{c1}-{l2}:{c2}"


@dataclass(frozen=True)
class Judgment:
    ctx: Context
    term: Term
    type: Term
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass
class LpmFile:
    signature: Signature
    rules: list
    judgments: list
    spans: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SpecFile:
    spec: PtsSpec
    default_sort: Optional[str] = None


# ---------------------------------------------------------------------------
# Lexing

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<sym>-->|->|\|-|[!\\:.()\[\],])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
""", re.VERBOSE)


@dataclass(frozen=True)
class _Tok:
    text: str
    kind: str
    line: int
    col: int


def _lex(text: str, file=None) -> list:
    toks, pos, line, col = [], 0, 1, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}",
                             SourceSpan(file, (line, col), (line, col)))
        s = m.group()
        if m.lastgroup != "ws":
            toks.append(_Tok(s, m.lastgroup, line, col))
        nl = s.count("\n")
        if nl:
            line += nl
            col = len(s) - s.rfind("\n")
        else:
            col += len(s)
        pos = m.end()
    toks.append(_Tok("", "eof", line, col))
    return toks


# ---------------------------------------------------------------------------
# Parsing


class _Parser:
    def __init__(self, text, file=None, sorts=None, constants=True):
        self.toks = _lex(text, file)
        self.i = 0
        self.file = file
        self.sorts = None if sorts is None else set(sorts)
        self.constants = constants

    # token helpers

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def span(self, start: _Tok, end: Optional[_Tok] = None) -> SourceSpan:
        end = end or start
        return SourceSpan(self.file, (start.line, start.col), (end.line, end.col + max(len(end.text) - 1, 0)))

    def error(self, message, expected=(), cls=ParseError):
        return cls(message, self.span(self.tok), expected)

    def eat(self, text) -> bool:
        if self.tok.kind == "sym" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.eat(text):
            found = self.tok.text or "end of input"
            raise self.error(f"unexpected {found!r}", {text})

    def ident(self) -> str:
        if self.tok.kind != "ident":
            found = self.tok.text or "end of input"
            raise self.error(f"unexpected {found!r}", {"identifier"})
        name = self.tok.text
        self.i += 1
        return name

    # terms; ``scope`` lists bound names innermost last, None for arrows

    def term(self, scope):
        if self.tok.kind == "sym" and self.tok.text in ("!", "\\"):
            binder = self.tok.text
            self.i += 1
            name = self.ident()
            self.expect(":")
            dom = self.term(scope)
            self.expect(".")
            body = self.term(scope + [name])
            return Pi(dom, body, name) if binder == "!" else Lam(dom, body, name)
        left = self.application(scope)
        if self.eat("->"):
            return Pi(left, self.term(scope + [None]))
        return left

    def application(self, scope):
        t = self.atom(scope)
        while self.starts_atom():
            t = App(t, self.atom(scope))
        return t

    def starts_atom(self):
        return self.tok.kind == "ident" or (self.tok.kind == "sym" and self.tok.text == "(")

    def atom(self, scope):
        if self.eat("("):
            t = self.term(scope)
            self.expect(")")
            return t
        start = self.tok
        name = self.ident()
        for depth, bound in enumerate(reversed(scope)):
            if bound == name:
                return Var(depth, name)
        if self.sorts is not None and name in self.sorts:
            return Sort(PtsSort(name))
        if self.sorts is None and name in KEYWORDS:
            return Sort(KEYWORDS[name])
        if not self.constants:
            self.i -= 1
            raise ParseError(f"unknown identifier {name!r}", self.span(start))
        return Const(name)

    def context(self):
        """``[x:A, ...]``; returns the context and its name list."""
        self.expect("[")
        ctx, names = [], []
        if not self.eat("]"):
            while True:
                start = self.tok
                name = self.ident()
                if name in names:
                    raise DuplicateName(f"{name} declared twice in context", self.span(start))
                self.expect(":")
                ctx.append((name, self.term(list(names))))
                names.append(name)
                if self.eat("]"):
                    break
                self.expect(",")
        return tuple(ctx), names

    def at_eof(self):
        return self.tok.kind == "eof"

    def expect_eof(self):
        if not self.at_eof():
            raise self.error(f"unexpected {self.tok.text!r}", {"end of input"})


def parse_term(text: str, names: Sequence[str] = (), sorts: Optional[Sequence[str]] = None,
               file: Optional[str] = None) -> Term:
    """Parse one term.

    ``names`` are context entries (last is ``Var(0)``).  With ``sorts`` the
    term is a PTS term: those identifiers become sorts and unknown
    identifiers are errors.  Otherwise ``Type``/``Kind`` are the λΠ sorts
    and unknown identifiers are constants.
    """
    p = _Parser(text, file, sorts, constants=sorts is None)
    t = p.term(list(names))
    p.expect_eof()
    return t


def parse_context(text: str, sorts: Optional[Sequence[str]] = None) -> Context:
    """Parse ``[x:A, ...]`` (the brackets may be omitted)."""
    text = text.strip()
    if not text.startswith("["):
        text = f"[{text}]"
    p = _Parser(text, sorts=sorts, constants=sorts is None)
    ctx, _ = p.context()
    p.expect_eof()
    return ctx


def _judgment_or_rule(p: _Parser, ctx, names):
    """After a context: ``|- t : A.`` or ``lhs --> rhs : T.``."""
    start = p.tok
    if p.eat("|-"):
        t = p.term(list(names))
        p.expect(":")
        a = p.term(list(names))
        p.expect(".")
        return Judgment(ctx, t, a, p.span(start, p.toks[p.i - 1]))
    lhs = p.term(list(names))
    p.expect("-->")
    rhs = p.term(list(names))
    p.expect(":")
    ty = p.term(list(names))
    p.expect(".")
    return RewriteRule(ctx, lhs, rhs, ty)


def parse_lpm(text: str, file: Optional[str] = None) -> LpmFile:
    p = _Parser(text, file)
    sig, rules, judgments, spans = Signature(), [], [], {}
    while not p.at_eof():
        start = p.tok
        if p.tok.kind == "sym" and p.tok.text in ("[", "|-"):
            if p.tok.text == "[":
                ctx, names = p.context()
            else:
                ctx, names = (), []
            item = _judgment_or_rule(p, ctx, names)
            if isinstance(item, Judgment):
                judgments.append(item)
            else:
                spans[len(rules)] = p.span(start, p.toks[p.i - 1])
                rules.append(item)
            continue
        name = p.ident()
        if name in sig:
            raise DuplicateName(f"{name} is already declared", p.span(start))
        if name in KEYWORDS:
            raise ParseError(f"{name} is reserved", p.span(start))
        p.expect(":")
        ty = p.term([])
        p.expect(".")
        sig.declare(name, ty)
        spans[name] = p.span(start, p.toks[p.i - 1])
    return LpmFile(sig, rules, judgments, spans)


def parse_signature(text: str, file: Optional[str] = None) -> tuple:
    """``(Signature, rules)`` from ``.lpm`` text; judgments are not allowed."""
    f = parse_lpm(text, file)
    if f.judgments:
        raise ParseError("judgments are not allowed in a signature", f.judgments[0].span)
    return f.signature, f.rules


def parse_judgments(text: str, sorts: Sequence[str], file: Optional[str] = None) -> list:
    """PTS judgments ``[x:A, ...] |- t : B.`` over the given sort names."""
    p = _Parser(text, file, sorts, constants=False)
    out = []
    while not p.at_eof():
        if p.tok.kind == "sym" and p.tok.text == "[":
            ctx, names = p.context()
        else:
            ctx, names = (), []
        if not (p.tok.kind == "sym" and p.tok.text == "|-"):
            raise p.error(f"unexpected {p.tok.text!r}", {"|-"})
        out.append(_judgment_or_rule(p, ctx, names))
    return out


# ---------------------------------------------------------------------------
# Spec files

_DIRECTIVES = ("name", "sorts", "axioms", "rules", "default_sort")


def parse_spec(text: str, file: Optional[str] = None) -> SpecFile:
    toks = [t for t in _lex(text, file) if t.kind != "eof"]
    sections, current, seen = {}, None, set()
    i = 0
    while i < len(toks):
        t = toks[i]
        is_directive = (t.kind == "ident" and t.text in _DIRECTIVES and i + 1 < len(toks)
                        and toks[i + 1].text == ":")
        if is_directive:
            if t.text in seen:
                raise ParseError(f"directive {t.text} given twice", _tspan(file, t))
            seen.add(t.text)
            current = t.text
            sections[current] = []
            i += 2
            continue
        if current is None:
            raise ParseError(f"unexpected {t.text!r}", _tspan(file, t), set(_DIRECTIVES))
        sections[current].append(t)
        i += 1
    if "sorts" not in sections:
        raise ParseError("missing sorts directive", SourceSpan(file, (1, 1), (1, 1)), {"sorts"})
    sorts = []
    for t in sections["sorts"]:
        if t.kind != "ident":
            raise ParseError(f"unexpected {t.text!r}", _tspan(file, t), {"sort name"})
        sorts.append(t.text)
    known = set(sorts)
    axioms = _tuples(sections.get("axioms", []), 2, known, file)
    rules = _tuples(sections.get("rules", []), 3, known, file)
    name = _single(sections.get("name", []), file, "name") or ""
    default = _single(sections.get("default_sort", []), file, "default sort")
    if default is not None and default not in known:
        tok = sections["default_sort"][0]
        raise UnknownSortName(f"unknown sort {default!r}", _tspan(file, tok))
    return SpecFile(PtsSpec(tuple(sorts), axioms, rules, name), default)


def _tspan(file, t):
    return SourceSpan(file, (t.line, t.col), (t.line, t.col + max(len(t.text) - 1, 0)))


def _single(toks, file, what):
    if not toks:
        return None
    if len(toks) != 1 or toks[0].kind != "ident":
        raise ParseError(f"expected a single {what}", _tspan(file, toks[0]), {"identifier"})
    return toks[0].text


def _tuples(toks, n, known, file):
    out, i = [], 0

    def need(text):
        nonlocal i
        if i >= len(toks) or toks[i].text != text:
            where = toks[i] if i < len(toks) else toks[-1]
            raise ParseError(f"unexpected {where.text!r}", _tspan(file, where), {text})
        i += 1

    while i < len(toks):
        need("(")
        items = []
        for k in range(n):
            if k:
                need(",")
            if i >= len(toks) or toks[i].kind != "ident":
                where = toks[min(i, len(toks) - 1)]
                raise ParseError(f"unexpected {where.text!r}", _tspan(file, where), {"sort name"})
            if toks[i].text not in known:
                raise UnknownSortName(f"unknown sort {toks[i].text!r}", _tspan(file, toks[i]))
            items.append(toks[i].text)
            i += 1
        need(")")
        out.append(tuple(items))
    return out


def print_spec(spec: "PtsSpec | SpecFile", default_sort: Optional[str] = None) -> str:
    if isinstance(spec, SpecFile):
        spec, default_sort = spec.spec, default_sort or spec.default_sort
    lines = []
    if spec.name:
        lines.append(f"name: {spec.name}")
    lines.append("sorts: " + " ".join(spec.sorts))
    lines.append("axioms: " + " ".join(f"({a}, {b})" for a, b in spec.axioms))
    lines.append("rules: " + " ".join(f"({a}, {b}, {c})" for a, b, c in spec.rules))
    if default_sort:
        lines.append(f"default_sort: {default_sort}")
    return "\n".join(line.rstrip() for line in lines) + "\n"


# ---------------------------------------------------------------------------
# Printing

_UNICODE = {"!": "Π", "\\": "λ", "->": "→"}


class _Printer:
    def __init__(self, t_for_consts, reserved=(), unicode=False):
        self.taken = set(reserved) | set(KEYWORDS)
        for sub in subterms(t_for_consts):
            if isinstance(sub, Const):
                self.taken.add(sub.name)
            elif isinstance(sub, Sort) and isinstance(sub.tag, PtsSort):
                self.taken.add(sub.tag.name)
        self.sym = (lambda s: _UNICODE.get(s, s)) if unicode else (lambda s: s)

    def fresh(self, hint, scope):
        used = self.taken | set(scope)
        base = hint or "x"
        if hint and base not in used:
            return base
        root = base.rstrip("0123456789") or "x"
        k = 0
        while f"{root}{k}" in used:
            k += 1
        return f"{root}{k}"

    # precedence: 0 = binder/arrow allowed, 1 = arrow domain, 2 = app function, 3 = atom
    def show(self, t, scope, prec=0):
        match t:
            case Var(i):
                if i < len(scope):
                    return scope[len(scope) - 1 - i]
                return f"#{i}"
            case Sort(tag):
                return tag.value if isinstance(tag, LpmSort) else tag.name
            case Const(name):
                return name
            case Pi(a, b, name) if not occurs(b, 0):
                dom = self.show(a, scope, 1)
                out = f"{dom} {self.sym('->')} {self.show(b, scope + ['_'], 0)}"
                return out if prec == 0 else f"({out})"
            case Pi(a, b, name) | Lam(a, b, name):
                x = self.fresh(name, scope)
                sym = "!" if isinstance(t, Pi) else "\\"
                dom = self.show(a, scope, 3 if isinstance(a, (App, Pi, Lam)) else 0)
                out = f"{self.sym(sym)}{x}:{dom}. {self.show(b, scope + [x], 0)}"
                return out if prec == 0 else f"({out})"
            case App():
                head, args = spine(t)
                parts = [self.show(head, scope, 2)] + [self.show(a, scope, 3) for a in args]
                out = " ".join(parts)
                return out if prec == 0 else f"({out})"
        raise TypeError(f"not a term: {t!r}")


def print_term(t: Term, names: Sequence[str] = (), unicode: bool = False,
               reserved: Sequence[str] = ()) -> str:
    """Render ``t``; ``names`` are the context entries (last is ``Var(0)``)."""
    p = _Printer(t, set(reserved) | set(names), unicode)
    return p.show(t, list(names))


def context_names(ctx: Context, reserved: Sequence[str] = ()) -> list:
    """Display names for ``ctx``, made distinct and unambiguous."""
    taken = set(reserved) | set(KEYWORDS)
    for _, ty in ctx:
        taken |= {c.name for c in subterms(ty) if isinstance(c, Const)}
    names = []
    for name, _ in ctx:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", name or "") or name in taken or name in names:
            root = (name or "x").rstrip("0123456789") if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", name or "") else "x"
            k = 0
            while f"{root}{k}" in taken or f"{root}{k}" in names:
                k += 1
            name = f"{root}{k}"
        names.append(name)
    return names


def print_context(ctx: Context, unicode: bool = False, reserved: Sequence[str] = (),
                  names: Optional[list] = None) -> str:
    names = names or context_names(ctx, reserved)
    parts = []
    for i, (_, ty) in enumerate(ctx):
        p = _Printer(ty, set(reserved), unicode)
        parts.append(f"{names[i]}:{p.show(ty, names[:i])}")
    return "[" + ", ".join(parts) + "]"


def print_decl(name: str, ty: Term, unicode: bool = False) -> str:
    return f"{name} : {print_term(ty, unicode=unicode)}."


def print_rule(rule: RewriteRule, unicode: bool = False) -> str:
    names = context_names(rule.pattern_ctx)
    show = lambda t: print_term(t, names, unicode)  # noqa: E731
    arrow = "⟶" if unicode else "-->"
    return (f"{print_context(rule.pattern_ctx, unicode, names=names)} {show(rule.lhs)} {arrow} "
            f"{show(rule.rhs)} : {show(rule.rule_type)}.")


def print_judgment(j: Judgment, unicode: bool = False, reserved: Sequence[str] = ()) -> str:
    names = context_names(j.ctx, reserved)
    turnstile = "⊢" if unicode else "|-"
    show = lambda t: print_term(t, names, unicode, reserved)  # noqa: E731
    return (f"{print_context(j.ctx, unicode, reserved, names)} {turnstile} {show(j.term)}"
            f" : {show(j.type)}.")


def print_signature(sig: Signature, rules: Sequence[RewriteRule] = (),
                    judgments: Sequence[Judgment] = (), unicode: bool = False) -> str:
    lines = [print_decl(n, ty, unicode) for n, ty in sig]
    lines += [print_rule(r, unicode) for r in rules]
    lines += [print_judgment(j, unicode) for j in judgments]
    return "\n".join(lines) + "\n"
