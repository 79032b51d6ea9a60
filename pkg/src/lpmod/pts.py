"""Pure Type Systems given as data, with β-reduction and type inference.

Typing is syntax-directed: the declarative rules are run as an inference
procedure and the conversion rule is applied only at application
arguments (and by :func:`pts_check`), comparing β-normal forms.  This is
complete for functional systems, which is the only kind this module
types; :func:`validate_spec` says whether a spec qualifies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import TypeMismatch, TypingError, UntypableSort
from .terms import (
    App, Const, Context, Fuel, Lam, Pi, PtsSort, Sort, Term, Var,
    beta_contract, extend, lookup, one_step_reducts, step_leftmost, subst,
)

__all__ = [
    "PtsSpec", "validate_spec", "pts_beta_step", "pts_normalize", "pts_whnf",
    "beta_equiv", "pts_reducts", "pts_infer", "pts_check", "pts_check_context", "DEFAULT_FUEL",
    "STLC", "SYSTEM_F", "LAMBDA_PI", "COC", "sort",
]

DEFAULT_FUEL = 100_000


def _uniq(items):
    seen = {}
    for x in items:
        seen.setdefault(x, None)
    return tuple(seen)


@dataclass(frozen=True, eq=False)
class PtsSpec:
    """Sorts, axioms ``(s1, s2)`` and rules ``(s1, s2, s3)``.

    Declaration order is kept (it fixes the order of generated signatures)
    but equality treats the three components as sets.
    """

    sorts: tuple
    axioms: tuple = ()
    rules: tuple = ()
    name: str = ""
    _axiom_map: dict = field(init=False, repr=False)
    _rule_map: dict = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "sorts", _uniq(self.sorts))
        object.__setattr__(self, "axioms", _uniq(tuple(a) for a in self.axioms))
        object.__setattr__(self, "rules", _uniq(tuple(r) for r in self.rules))
        amap, rmap = {}, {}
        for s1, s2 in self.axioms:
            amap.setdefault(s1, s2)
        for s1, s2, s3 in self.rules:
            rmap.setdefault((s1, s2), s3)
        object.__setattr__(self, "_axiom_map", amap)
        object.__setattr__(self, "_rule_map", rmap)

    def __eq__(self, other):
        if not isinstance(other, PtsSpec):
            return NotImplemented
        return (set(self.sorts), set(self.axioms), set(self.rules)) == (
            set(other.sorts), set(other.axioms), set(other.rules))

    def __hash__(self):
        return hash((frozenset(self.sorts), frozenset(self.axioms), frozenset(self.rules)))

    def axiom(self, s: str) -> Optional[str]:
        return self._axiom_map.get(s)

    def rule(self, s1: str, s2: str) -> Optional[str]:
        return self._rule_map.get((s1, s2))

    def is_top(self, s: str) -> bool:
        return s in self.sorts and s not in self._axiom_map


def sort(name: str) -> Sort:
    return Sort(PtsSort(name))


def validate_spec(spec: PtsSpec) -> list:
    """Return the list of violations; an empty list means the spec is functional."""
    out = []
    known = set(spec.sorts)
    for ax in spec.axioms:
        for s in ax:
            if s not in known:
                out.append(f"axiom {ax}: unknown sort {s!r}")
    for r in spec.rules:
        for s in r:
            if s not in known:
                out.append(f"rule {r}: unknown sort {s!r}")
    by_first = {}
    for s1, s2 in spec.axioms:
        by_first.setdefault(s1, []).append(s2)
    for s1, targets in by_first.items():
        if len(targets) > 1:
            out.append(f"axioms not functional: {s1!r} has types {sorted(targets)}")
    by_pair = {}
    for s1, s2, s3 in spec.rules:
        by_pair.setdefault((s1, s2), []).append(s3)
    for pair, targets in by_pair.items():
        if len(targets) > 1:
            out.append(f"rules not functional: {pair} yields {sorted(targets)}")
    return out


STLC = PtsSpec(("Type", "Kind"), [("Type", "Kind")], [("Type", "Type", "Type")], "stlc")
SYSTEM_F = PtsSpec(("Type", "Kind"), [("Type", "Kind")],
                   [("Type", "Type", "Type"), ("Kind", "Type", "Type")], "systemf")
LAMBDA_PI = PtsSpec(("Type", "Kind"), [("Type", "Kind")],
                    [("Type", "Type", "Type"), ("Type", "Kind", "Kind")], "lambdapi")
COC = PtsSpec(("Type", "Kind"), [("Type", "Kind")],
              [("Type", "Type", "Type"), ("Type", "Kind", "Kind"),
               ("Kind", "Type", "Type"), ("Kind", "Kind", "Kind")], "coc")


# ---------------------------------------------------------------------------
# β-reduction


def pts_beta_step(t: Term) -> Optional[Term]:
    """Leftmost-outermost β-reduct, or ``None`` for a normal form."""
    return step_leftmost(t, beta_contract)


def pts_reducts(t: Term) -> list:
    """All one-step β-reducts of ``t``, one per redex."""
    return list(one_step_reducts(t, beta_contract))


def pts_normalize(t: Term, fuel: "int | Fuel" = DEFAULT_FUEL) -> Term:
    fuel = Fuel.of(fuel)
    while True:
        r = pts_beta_step(t)
        if r is None:
            return t
        fuel.spend(last=t)
        t = r


def pts_whnf(t: Term, fuel: "int | Fuel" = DEFAULT_FUEL) -> Term:
    fuel = Fuel.of(fuel)
    args = []
    while True:
        while isinstance(t, App):
            args.append(t.arg)
            t = t.fn
        if isinstance(t, Lam) and args:
            fuel.spend(last=t)
            t = subst(t.body, args.pop())
            continue
        while args:
            t = App(t, args.pop())
        return t


def beta_equiv(a: Term, b: Term, fuel: "int | Fuel" = DEFAULT_FUEL) -> bool:
    if a == b:
        return True
    fuel = Fuel.of(fuel)
    return pts_normalize(a, fuel) == pts_normalize(b, fuel)


# ---------------------------------------------------------------------------
# Typing


def pts_infer(spec: PtsSpec, ctx: Context, t: Term, fuel: "int | Fuel" = DEFAULT_FUEL) -> Term:
    """Infer the type of ``t`` in ``ctx``; raises :class:`TypingError`."""
    return _infer(spec, ctx, t, Fuel.of(fuel))


def _infer(spec, ctx, t, fuel):
    if isinstance(t, Var):
        if t.index >= len(ctx):
            raise TypingError(f"unbound variable {t.index}", "Variable", t)
        return lookup(ctx, t.index)
    if isinstance(t, Sort):
        tag = t.tag
        if not isinstance(tag, PtsSort) or tag.name not in spec.sorts:
            raise TypingError(f"{tag!r} is not a sort of {spec.name or 'this system'}", "Sort", t)
        s2 = spec.axiom(tag.name)
        if s2 is None:
            raise UntypableSort(f"top sort {tag.name} has no type", "Sort", t)
        return Sort(PtsSort(s2))
    if isinstance(t, Const):
        raise TypingError(f"constant {t.name} has no PTS type", "Variable", t)
    if isinstance(t, Pi):
        s1 = _sort_of(spec, ctx, t.domain, fuel)
        s2 = _sort_of(spec, extend(ctx, t.name, t.domain), t.codomain, fuel)
        s3 = spec.rule(s1, s2)
        if s3 is None:
            raise TypingError(f"no rule ({s1}, {s2}, _)", "Product", t)
        return Sort(PtsSort(s3))
    if isinstance(t, Lam):
        s1 = _sort_of(spec, ctx, t.annotation, fuel)
        inner = extend(ctx, t.name, t.annotation)
        body_ty = _infer(spec, inner, t.body, fuel)
        try:
            s2 = _sort_of(spec, inner, body_ty, fuel)
        except UntypableSort as e:
            raise TypingError(f"body type {body_ty!r} is a top sort", "Abstraction", t) from e
        if spec.rule(s1, s2) is None:
            raise TypingError(f"no rule ({s1}, {s2}, _)", "Abstraction", t)
        return Pi(t.annotation, body_ty, t.name)
    if isinstance(t, App):
        fty = pts_whnf(_infer(spec, ctx, t.fn, fuel), fuel)
        if not isinstance(fty, Pi):
            raise TypingError(f"function has non-product type {fty!r}", "Application", t)
        aty = _infer(spec, ctx, t.arg, fuel)
        if not beta_equiv(aty, fty.domain, fuel):
            raise TypeMismatch("argument type mismatch", expected=pts_normalize(fty.domain, fuel),
                               inferred=pts_normalize(aty, fuel), rule="Application", term=t)
        return subst(fty.codomain, t.arg)
    raise TypeError(f"not a term: {t!r}")


def _sort_of(spec, ctx, a, fuel) -> str:
    ty = pts_whnf(_infer(spec, ctx, a, fuel), fuel)
    if isinstance(ty, Sort) and isinstance(ty.tag, PtsSort):
        return ty.tag.name
    raise TypingError(f"{a!r} is not a type (its type is {ty!r})", "Declaration", a)


def pts_check(spec: PtsSpec, ctx: Context, t: Term, expected: Term,
              fuel: "int | Fuel" = DEFAULT_FUEL) -> None:
    """Raise unless ``ctx ⊢ t : expected``; ``expected`` may be a top sort."""
    fuel = Fuel.of(fuel)
    inferred = _infer(spec, ctx, t, fuel)
    if not (isinstance(expected, Sort) and isinstance(expected.tag, PtsSort)
            and spec.is_top(expected.tag.name)):
        _sort_of(spec, ctx, expected, fuel)
    if not beta_equiv(inferred, expected, fuel):
        raise TypeMismatch("type mismatch", expected=pts_normalize(expected, fuel),
                           inferred=pts_normalize(inferred, fuel), term=t)


def pts_check_context(spec: PtsSpec, ctx: Context, fuel: "int | Fuel" = DEFAULT_FUEL) -> None:
    """Raise unless every entry of ``ctx`` is declared with a type of some sort."""
    fuel = Fuel.of(fuel)
    for i, (name, ty) in enumerate(ctx):
        try:
            _sort_of(spec, ctx[:i], ty, fuel)
        except TypingError as e:
            raise TypingError(f"declaration of {name}: {e}", "Declaration", ty) from e
