"""λΠ-calculus modulo a rewrite system.

A :class:`Kernel` bundles a signature with a list of first-order,
left-linear rewrite rules and answers typing and conversion questions
modulo β and those rules.  All reduction is fuel-bounded: a judgment gets
one :class:`~lpmod.terms.Fuel` budget shared by every conversion it needs.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .errors import (
    KindHasNoType, RuleError, TypeMismatch, TypingError,
)
from .terms import (
    KIND, TYPE, App, Const, Context, Fuel, Lam, LpmSort, Pi, Sort,
    Term, Var, app, beta_contract, extend, instantiate, lookup, occurs, one_step_reducts, spine,
    step_leftmost, subst,
)

__all__ = [
    "Signature", "RewriteRule", "ConversionVerdict", "Kernel", "check_rule",
    "DEFAULT_FUEL", "is_beta_normal", "rewrite_step", "betaR_whnf", "convertible",
    "lpm_infer", "lpm_check",
]

log = logging.getLogger(__name__)

DEFAULT_FUEL = 1_000_000


class Signature:
    """Ordered, name-unique constant declarations."""

    def __init__(self, decls: Sequence[tuple] = ()):
        self._decls = []
        self._types = {}
        for name, ty in decls:
            self.declare(name, ty)

    def declare(self, name: str, ty: Term) -> None:
        if name in self._types:
            raise ValueError(f"duplicate constant {name}")
        self._decls.append((name, ty))
        self._types[name] = ty

    def __iter__(self):
        return iter(self._decls)

    def __len__(self):
        return len(self._decls)

    def __contains__(self, name):
        return name in self._types

    def __getitem__(self, name) -> Term:
        return self._types[name]

    def __eq__(self, other):
        return isinstance(other, Signature) and self._decls == other._decls

    def __repr__(self):
        return f"Signature({[n for n, _ in self._decls]})"

    def prefix(self, name: str) -> "Signature":
        out = Signature()
        for n, ty in self._decls:
            if n == name:
                break
            out.declare(n, ty)
        return out

    @property
    def names(self):
        return [n for n, _ in self._decls]


@dataclass(frozen=True)
class RewriteRule:
    """``lhs --> rhs`` in ``pattern_ctx`` with type ``rule_type``.

    Pattern variables are the de Bruijn indices of ``pattern_ctx``;
    ``name`` is a display label only.
    """

    pattern_ctx: Context
    lhs: Term
    rhs: Term
    rule_type: Term
    name: str = field(default="", compare=False)

    @property
    def head(self) -> Optional[str]:
        h, _ = spine(self.lhs)
        return h.name if isinstance(h, Const) else None

    @property
    def arity(self) -> int:
        return len(spine(self.lhs)[1])


@dataclass(frozen=True)
class ConversionVerdict:
    convertible: bool
    fuel_spent: int
    witness: Optional[tuple] = None

    def __bool__(self):
        return self.convertible


def is_beta_normal(t: Term) -> bool:
    return step_leftmost(t, beta_contract) is None


def _pattern_problem(rule: RewriteRule) -> Optional[tuple]:
    """Return ``(code, message)`` if ``rule.lhs`` is not a linear pattern."""
    head, args = spine(rule.lhs)
    if not isinstance(head, Const):
        return "non-pattern-lhs", "left-hand side must be headed by a constant"
    seen = set()

    def walk(p):
        if isinstance(p, Var):
            if p.index in seen:
                return "non-linear-lhs", f"pattern variable {p.index} occurs twice"
            seen.add(p.index)
            return None
        h, sub = spine(p)
        if not isinstance(h, Const):
            return "non-pattern-lhs", f"subpattern {p!r} is not constant-headed"
        for q in sub:
            err = walk(q)
            if err:
                return err
        return None

    for a in args:
        err = walk(a)
        if err:
            return err
    n = len(rule.pattern_ctx)
    missing = [i for i in range(n) if i not in seen and occurs(rule.rhs, i)]
    if missing:
        return "non-pattern-lhs", f"right-hand side uses variables {missing} absent from the left"
    return None


class Kernel:
    """Typing and conversion for λΠ modulo ``rules`` over ``signature``.

    With ``lambda_pi_minus=True`` the kernel is λΠ⁻ modulo: conversion uses
    the rewrite rules alone and type-family abstraction is disabled.
    """

    def __init__(self, signature: Signature, rules: Sequence[RewriteRule] = (),
                 lambda_pi_minus: bool = False, fuel: int = DEFAULT_FUEL,
                 trace: bool = False):
        self.signature = signature
        self.rules = tuple(rules)
        self.beta = not lambda_pi_minus
        self.default_fuel = fuel
        self.trace = trace
        self._by_head = {}
        for r in self.rules:
            self._by_head.setdefault(r.head, []).append(r)

    def _fuel(self, fuel) -> Fuel:
        return Fuel.of(self.default_fuel if fuel is None else fuel)

    # -- matching ---------------------------------------------------------

    def _match(self, pattern, t, theta, fuel, reduce):
        if isinstance(pattern, Var):
            theta[pattern.index] = t
            return True
        if reduce:
            t = self._whnf(t, fuel)
        ph, pargs = spine(pattern)
        th, targs = spine(t)
        if th != ph or len(pargs) != len(targs):
            return False
        return all(self._match(p, a, theta, fuel, reduce) for p, a in zip(pargs, targs))

    def _try_rules(self, head, args, fuel, reduce):
        """Contract a rule redex at the root of ``head args``; ``None`` if none."""
        for rule in self._by_head.get(head.name, ()):
            _, pargs = spine(rule.lhs)
            k = len(pargs)
            if len(args) < k or (not reduce and len(args) != k):
                continue
            theta = {}
            if all(self._match(p, a, theta, fuel, reduce) for p, a in zip(pargs, args)):
                n = len(rule.pattern_ctx)
                rhs = instantiate(rule.rhs, [theta.get(i, Var(i)) for i in range(n)])
                return app(rhs, *args[k:])
        return None

    def _rule_contract(self, t):
        head, args = spine(t)
        if isinstance(head, Const):
            return self._try_rules(head, args, None, reduce=False)
        return None

    def _root_contract(self, t):
        if self.beta:
            r = beta_contract(t)
            if r is not None:
                return r
        return self._rule_contract(t)

    # -- reduction --------------------------------------------------------

    def rewrite_step(self, t: Term) -> Optional[Term]:
        """One leftmost-outermost R step (syntactic matching), or ``None``."""
        return step_leftmost(t, self._rule_contract)

    def step(self, t: Term) -> Optional[Term]:
        """One leftmost-outermost βR step, or ``None`` for a normal form."""
        return step_leftmost(t, self._root_contract)

    def reducts(self, t: Term) -> Iterator[tuple]:
        """Every one-step reduct as ``(kind, term)`` with kind ``'beta'`` or ``'R'``."""
        if self.beta:
            for r in one_step_reducts(t, beta_contract):
                yield "beta", r
        for r in one_step_reducts(t, self._rule_contract):
            yield "R", r

    def whnf(self, t: Term, fuel: "int | Fuel | None" = None) -> Term:
        return self._whnf(t, self._fuel(fuel))

    def _whnf(self, t, fuel):
        while True:
            head, args = spine(t)
            nxt = None
            if self.beta and isinstance(head, Lam) and args:
                nxt = app(subst(head.body, args[0]), *args[1:])
            elif isinstance(head, Const) and head.name in self._by_head:
                nxt = self._try_rules(head, args, fuel, reduce=True)
            if nxt is None:
                return t
            fuel.spend(last=t)
            if self.trace:
                log.debug("whnf step: %r", nxt)
            t = nxt

    def normalize(self, t: Term, fuel: "int | Fuel | None" = None) -> Term:
        return self._nf(t, self._fuel(fuel))

    def _nf(self, t, fuel):
        t = self._whnf(t, fuel)
        if isinstance(t, Lam):
            return Lam(self._nf(t.annotation, fuel), self._nf(t.body, fuel), t.name)
        if isinstance(t, Pi):
            return Pi(self._nf(t.domain, fuel), self._nf(t.codomain, fuel), t.name)
        head, args = spine(t)
        if not args:
            return t
        out = app(head, *(self._nf(a, fuel) for a in args))
        if out != t:
            # a normal argument can complete a nested pattern
            w = self._whnf(out, fuel)
            if w != out:
                return self._nf(w, fuel)
        return out

    def is_normal(self, t: Term) -> bool:
        return self.step(t) is None

    # -- conversion -------------------------------------------------------

    def convertible(self, a: Term, b: Term, fuel: "int | Fuel | None" = None,
                    witness: bool = False) -> ConversionVerdict:
        fuel = self._fuel(fuel)
        start = fuel.spent
        ok = self._conv(a, b, fuel)
        wit = None
        if ok and witness:
            wit = (self._nf(a, fuel), self._nf(b, fuel))
        return ConversionVerdict(ok, fuel.spent - start, wit)

    def _conv(self, a, b, fuel):
        if a == b:
            return True
        a, b = self._whnf(a, fuel), self._whnf(b, fuel)
        if a == b:
            return True
        if self.trace:
            log.debug("conv: %r =?= %r", a, b)
        if isinstance(a, Sort) or isinstance(b, Sort):
            return False
        if isinstance(a, Pi) and isinstance(b, Pi):
            return self._conv(a.domain, b.domain, fuel) and self._conv(a.codomain, b.codomain, fuel)
        if isinstance(a, Lam) and isinstance(b, Lam):
            return self._conv(a.annotation, b.annotation, fuel) and self._conv(a.body, b.body, fuel)
        ha, xs = spine(a)
        hb, ys = spine(b)
        if isinstance(ha, (Var, Const)) and ha == hb and len(xs) == len(ys):
            return all(self._conv(x, y, fuel) for x, y in zip(xs, ys))
        return False

    # -- typing -----------------------------------------------------------

    def infer(self, ctx: Context, t: Term, fuel: "int | Fuel | None" = None) -> Term:
        """Type of ``t`` in ``ctx`` (which is assumed well formed)."""
        return self._infer(ctx, t, self._fuel(fuel))

    def _infer(self, ctx, t, fuel):
        if isinstance(t, Sort):
            if t.tag is LpmSort.TYPE:
                return KIND
            if t.tag is LpmSort.KIND:
                raise KindHasNoType("Kind has no type", "Sort", t)
            raise TypingError(f"foreign sort {t.tag!r}", "Sort", t)
        if isinstance(t, Var):
            if t.index >= len(ctx):
                raise TypingError(f"unbound variable {t.index}", "Variable", t)
            return lookup(ctx, t.index)
        if isinstance(t, Const):
            if t.name not in self.signature:
                raise TypingError(f"undeclared constant {t.name}", "Variable", t)
            return self.signature[t.name]
        if isinstance(t, Pi):
            self._expect_type(ctx, t.domain, fuel, "Product")
            s = self._sort_of(extend(ctx, t.name, t.domain), t.codomain, fuel, "Product")
            return s
        if isinstance(t, Lam):
            self._expect_type(ctx, t.annotation, fuel, "Abstraction")
            inner = extend(ctx, t.name, t.annotation)
            body_ty = self._infer(inner, t.body, fuel)
            if body_ty == KIND:
                raise TypingError("abstraction body is a kind", "Abstraction", t)
            s = self._sort_of(inner, body_ty, fuel, "Abstraction")
            if s == KIND and not self.beta:
                raise TypingError("type-family abstraction needs Abstraction2", "Abstraction2", t)
            return Pi(t.annotation, body_ty, t.name)
        if isinstance(t, App):
            fty = self._whnf(self._infer(ctx, t.fn, fuel), fuel)
            if not isinstance(fty, Pi):
                raise TypingError(f"function has non-product type {fty!r}", "Application", t)
            aty = self._infer(ctx, t.arg, fuel)
            if not self._conv(aty, fty.domain, fuel):
                raise TypeMismatch("argument type mismatch", expected=fty.domain,
                                   inferred=aty, rule="Application", term=t)
            return subst(fty.codomain, t.arg)
        raise TypeError(f"not a term: {t!r}")

    def _sort_of(self, ctx, a, fuel, rule) -> Term:
        ty = self._whnf(self._infer(ctx, a, fuel), fuel)
        if ty == TYPE or ty == KIND:
            return ty
        raise TypingError(f"{a!r} is not a type or kind (its type is {ty!r})", rule, a)

    def _expect_type(self, ctx, a, fuel, rule):
        if self._sort_of(ctx, a, fuel, rule) != TYPE:
            raise TypingError(f"{a!r} must have type Type", rule, a)

    def check(self, ctx: Context, t: Term, expected: Term,
              fuel: "int | Fuel | None" = None) -> None:
        """Raise unless ``ctx ⊢ t : expected`` modulo βR."""
        fuel = self._fuel(fuel)
        inferred = self._infer(ctx, t, fuel)
        if expected != KIND:
            self._sort_of(ctx, expected, fuel, "Conversion")
        if not self._conv(inferred, expected, fuel):
            raise TypeMismatch("type mismatch", expected=expected, inferred=inferred, term=t)

    def check_context(self, ctx: Context, fuel: "int | Fuel | None" = None) -> None:
        fuel = self._fuel(fuel)
        for i, (name, ty) in enumerate(ctx):
            try:
                self._sort_of(ctx[:i], ty, fuel, "Declaration")
            except TypingError as e:
                raise TypingError(f"declaration of {name}: {e}", "Declaration", ty) from e

    def check_signature(self, fuel: "int | Fuel | None" = None) -> None:
        """Every declared type is a type or kind in the preceding prefix."""
        fuel = self._fuel(fuel)
        prefix = Kernel(Signature(), (), not self.beta)
        for name, ty in self.signature:
            try:
                prefix._sort_of((), ty, fuel, "Declaration")
            except TypingError as e:
                raise TypingError(f"declaration of {name}: {e}", "Declaration", ty) from e
            prefix.signature.declare(name, ty)


def check_rule(signature: Signature, rule: RewriteRule, fuel: int = DEFAULT_FUEL) -> None:
    """Raise :class:`RuleError` unless ``rule`` is well typed in ``signature``.

    Both sides are typed in plain λΠ (β conversion, no rewriting).
    """
    for side, t in (("lhs", rule.lhs), ("rhs", rule.rhs)):
        if not is_beta_normal(t):
            raise RuleError("non-normal-side", f"{side} is not β-normal")
    problem = _pattern_problem(rule)
    if problem:
        raise RuleError(*problem)
    plain = Kernel(signature, (), fuel=fuel)
    try:
        plain.check_context(rule.pattern_ctx)
    except TypingError as e:
        raise RuleError("ill-typed-lhs", f"pattern context: {e}") from e
    for side, t in (("lhs", rule.lhs), ("rhs", rule.rhs)):
        try:
            plain.check(rule.pattern_ctx, t, rule.rule_type)
        except TypingError as e:
            raise RuleError(f"ill-typed-{side}", str(e)) from e


# Free-function forms of the kernel operations.


def rewrite_step(sig: Signature, rules: Sequence[RewriteRule], t: Term) -> Optional[Term]:
    return Kernel(sig, rules).rewrite_step(t)


def betaR_whnf(sig: Signature, rules: Sequence[RewriteRule], t: Term,
               fuel: int = DEFAULT_FUEL) -> Term:
    return Kernel(sig, rules).whnf(t, fuel)


def convertible(sig: Signature, rules: Sequence[RewriteRule], a: Term, b: Term,
                fuel: int = DEFAULT_FUEL) -> ConversionVerdict:
    return Kernel(sig, rules).convertible(a, b, fuel)


def lpm_infer(sig: Signature, rules: Sequence[RewriteRule], ctx: Context, t: Term,
              fuel: int = DEFAULT_FUEL) -> Term:
    return Kernel(sig, rules).infer(ctx, t, fuel)


def lpm_check(sig: Signature, rules: Sequence[RewriteRule], ctx: Context, t: Term,
              expected: Term, fuel: int = DEFAULT_FUEL) -> None:
    Kernel(sig, rules).check(ctx, t, expected, fuel)
