"""Embedding a functional PTS into the λΠ-calculus modulo.

:func:`generate_embedding` builds the signature of universes ``U_s``,
decoding functions ``eps_s``, codes ``dot_s`` for typable sorts and codes
``dotPi_s1_s2_s3`` for products, plus the universe-reduction rules.  The
translations go from PTS terms to λΠ terms; :func:`back_translate` is their
right inverse, and :func:`extract_inhabitant` turns a normal λΠ inhabitant
of a translated type back into a checked PTS inhabitant.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .errors import (
    ExtractionFailed, FuelExhausted, LpmodError, NotAType, PreconditionViolated,
    SpecInvalid, TopSortUntranslatable, TypingError, UnsupportedSignature,
)
from .kernel import DEFAULT_FUEL, Kernel, RewriteRule, Signature
from .pts import PtsSpec, pts_check, pts_infer, pts_normalize, pts_whnf, validate_spec
from .terms import (
    TYPE, App, Const, Context, Fuel, Lam, LpmSort, Pi, PtsSort, Sort, Term, Var,
    app, arrow, extend, shift, spine, subst,
)

__all__ = [
    "Naming", "EmbeddingConfig", "GeneratedEmbedding", "generate_embedding",
    "translate_term", "translate_type", "translate_context", "back_translate",
    "weak_eta_expand", "is_weak_eta_long", "expand_families", "extract_inhabitant",
    "check_inhabitation_theorem", "InhabitationReport", "recover_embedding",
]


@dataclass(frozen=True)
class Naming:
    """Format strings for the generated constants."""

    universe: str = "U_{}"
    decode: str = "eps_{}"
    code: str = "dot_{}"
    product: str = "dotPi_{}_{}_{}"

    def U(self, s):
        return self.universe.format(s)

    def eps(self, s):
        return self.decode.format(s)

    def dot(self, s):
        return self.code.format(s)

    def dotpi(self, s1, s2, s3):
        return self.product.format(s1, s2, s3)


@dataclass(frozen=True)
class EmbeddingConfig:
    spec: PtsSpec
    default_sort: Optional[str] = None
    naming: Naming = Naming()

    @property
    def s0(self) -> str:
        if self.default_sort is not None:
            return self.default_sort
        return "Type" if "Type" in self.spec.sorts else self.spec.sorts[0]


@dataclass(frozen=True, eq=False)
class GeneratedEmbedding:
    """Σ_P, its universe-reduction rules, and a role table for every constant.

    ``roles`` maps a generated name to ``("U", s)``, ``("eps", s)``,
    ``("dot", s1, s2)`` or ``("dotPi", s1, s2, s3)``.
    """

    signature: Signature
    rules: tuple
    config: EmbeddingConfig
    roles: dict = field(repr=False)

    @property
    def spec(self) -> PtsSpec:
        return self.config.spec

    @property
    def naming(self) -> Naming:
        return self.config.naming

    def kernel(self, fuel: int = DEFAULT_FUEL, lambda_pi_minus: bool = False) -> Kernel:
        return Kernel(self.signature, self.rules, lambda_pi_minus=lambda_pi_minus, fuel=fuel)

    def role(self, t: Term) -> Optional[tuple]:
        return self.roles.get(t.name) if isinstance(t, Const) else None

    def __eq__(self, other):
        return (isinstance(other, GeneratedEmbedding) and self.signature == other.signature
                and self.rules == other.rules and self.spec == other.spec)

    __hash__ = None


# ---------------------------------------------------------------------------
# Generation


def generate_embedding(config: "EmbeddingConfig | PtsSpec") -> GeneratedEmbedding:
    if isinstance(config, PtsSpec):
        config = EmbeddingConfig(config)
    spec, nm = config.spec, config.naming
    problems = validate_spec(spec)
    if config.s0 not in spec.sorts:
        problems.append(f"default sort {config.s0!r} is not a sort")
    roles = {}
    for s in spec.sorts:
        roles[nm.U(s)] = ("U", s)
    for s in spec.sorts:
        roles[nm.eps(s)] = ("eps", s)
    for s1, s2 in spec.axioms:
        roles[nm.dot(s1)] = ("dot", s1, s2)
    for s1, s2, s3 in spec.rules:
        roles[nm.dotpi(s1, s2, s3)] = ("dotPi", s1, s2, s3)
    expected = 2 * len(spec.sorts) + len(spec.axioms) + len(spec.rules)
    if len(roles) != expected:
        names = ([nm.U(s) for s in spec.sorts] + [nm.eps(s) for s in spec.sorts]
                 + [nm.dot(a) for a, _ in spec.axioms] + [nm.dotpi(*r) for r in spec.rules])
        clashes = sorted(n for n, k in Counter(names).items() if k > 1)
        problems.append(f"naming scheme is not injective: {clashes}")
    if problems:
        raise SpecInvalid(problems)

    U = lambda s: Const(nm.U(s))  # noqa: E731
    eps = lambda s: Const(nm.eps(s))  # noqa: E731
    sig = Signature()
    for s in spec.sorts:
        sig.declare(nm.U(s), TYPE)
    for s in spec.sorts:
        sig.declare(nm.eps(s), arrow(U(s), TYPE))
    for s1, s2 in spec.axioms:
        sig.declare(nm.dot(s1), U(s2))
    for s1, s2, s3 in spec.rules:
        # !X:U_s1. ((eps_s1 X) -> U_s2) -> U_s3
        family = arrow(App(eps(s1), Var(0, "X")), U(s2))
        sig.declare(nm.dotpi(s1, s2, s3), Pi(U(s1), arrow(family, U(s3)), "X"))

    rules = []
    for s1, s2 in spec.axioms:
        rules.append(RewriteRule((), App(eps(s2), Const(nm.dot(s1))), U(s1), TYPE,
                                 f"{nm.eps(s2)}-{nm.dot(s1)}"))
    for s1, s2, s3 in spec.rules:
        X, Y = Var(1, "X"), Var(0, "Y")
        ctx = (("X", U(s1)), ("Y", arrow(App(eps(s1), Var(0, "X")), U(s2))))
        lhs = App(eps(s3), app(Const(nm.dotpi(s1, s2, s3)), X, Y))
        rhs = Pi(App(eps(s1), X), App(eps(s2), App(Var(1, "Y"), Var(0, "x"))), "x")
        rules.append(RewriteRule(ctx, lhs, rhs, TYPE, f"{nm.eps(s3)}-{nm.dotpi(s1, s2, s3)}"))
    return GeneratedEmbedding(sig, tuple(rules), config, roles)


def recover_embedding(signature: Signature, rules) -> GeneratedEmbedding:
    """Recognise ``(signature, rules)`` as a generated embedding.

    The spec is read off the types of the constants named like generated
    ones; it is then regenerated and must reproduce every rule and every
    generated declaration.  Extra declarations are allowed.
    """
    nm = Naming()
    sorts, axioms, prods = [], [], []
    for name, ty in signature:
        if name.startswith("U_") and ty == TYPE:
            sorts.append(name[2:])
    uname = {nm.U(s): s for s in sorts}
    for name, ty in signature:
        if name.startswith("dot_") and isinstance(ty, Const) and ty.name in uname:
            axioms.append((name[4:], uname[ty.name]))
        elif name.startswith("dotPi_"):
            triple = _product_sorts(ty, uname)
            if triple:
                prods.append(triple)
    try:
        emb = generate_embedding(PtsSpec(tuple(sorts), axioms, prods))
    except (SpecInvalid, IndexError) as e:
        raise UnsupportedSignature(f"not a generated embedding: {e}") from e
    for name, ty in emb.signature:
        if name not in signature or signature[name] != ty:
            raise UnsupportedSignature(f"declaration {name} differs from the generated one")
    if [_rule_key(r) for r in rules] != [_rule_key(r) for r in emb.rules]:
        raise UnsupportedSignature("rewrite rules differ from the universe-reduction rules")
    return emb


def _rule_key(r):
    return tuple(ty for _, ty in r.pattern_ctx), r.lhs, r.rhs, r.rule_type


def _product_sorts(ty, uname):
    match ty:
        case Pi(Const(a), Pi(Pi(App(Const(_), Var(0)), Const(b)), Const(c))):
            if a in uname and b in uname and c in uname:
                return uname[a], uname[b], uname[c]
    return None


# ---------------------------------------------------------------------------
# Translation


class _Translator:
    """Memoizes PTS sort inference across one translation."""

    def __init__(self, emb: GeneratedEmbedding, fuel):
        self.emb = emb
        self.spec = emb.spec
        self.nm = emb.naming
        self.fuel = Fuel.of(fuel)
        self.sorts = {}

    def sort_of(self, ctx, a) -> str:
        key = (ctx, a)
        s = self.sorts.get(key)
        if s is None:
            ty = pts_whnf(pts_infer(self.spec, ctx, a, self.fuel), self.fuel)
            if not (isinstance(ty, Sort) and isinstance(ty.tag, PtsSort)):
                raise NotAType(f"{a!r} has type {ty!r}, which is not a sort")
            s = self.sorts[key] = ty.tag.name
        return s

    def term(self, ctx, t):
        match t:
            case Var():
                return t
            case Sort(PtsSort(s)):
                s2 = self.spec.axiom(s)
                if s2 is None:
                    raise TopSortUntranslatable(f"top sort {s} has no translation as a term")
                return Const(self.nm.dot(s))
            case Sort():
                raise TypingError(f"{t!r} is not a sort of the PTS", "Sort", t)
            case Pi(a, b, x):
                s1 = self.sort_of(ctx, a)
                inner = extend(ctx, x, a)
                s2 = self.sort_of(inner, b)
                s3 = self.spec.rule(s1, s2)
                if s3 is None:
                    raise TypingError(f"no rule ({s1}, {s2}, _)", "Product", t)
                ta = self.term(ctx, a)
                body = Lam(App(Const(self.nm.eps(s1)), ta), self.term(inner, b), x)
                return app(Const(self.nm.dotpi(s1, s2, s3)), ta, body)
            case Lam(a, body, x):
                s = self.sort_of(ctx, a)
                return Lam(App(Const(self.nm.eps(s)), self.term(ctx, a)),
                           self.term(extend(ctx, x, a), body), x)
            case App(f, a):
                return App(self.term(ctx, f), self.term(ctx, a))
            case Const(name):
                raise TypingError(f"constant {name} has no PTS type", "Variable", t)
        raise TypeError(f"not a term: {t!r}")

    def type(self, ctx, a):
        if isinstance(a, Sort) and isinstance(a.tag, PtsSort) and self.spec.is_top(a.tag.name):
            return Const(self.nm.U(a.tag.name))
        try:
            s = self.sort_of(ctx, a)
        except TypingError as e:
            raise NotAType(f"{a!r} is not a type: {e}") from e
        return App(Const(self.nm.eps(s)), self.term(ctx, a))


def translate_term(emb: GeneratedEmbedding, ctx: Context, t: Term,
                   fuel: int = DEFAULT_FUEL) -> Term:
    """``|t|``; ``t`` must be well typed in ``ctx``."""
    tr = _Translator(emb, fuel)
    if not (isinstance(t, Sort) and isinstance(t.tag, PtsSort) and emb.spec.is_top(t.tag.name)):
        pts_infer(emb.spec, ctx, t, tr.fuel)
    return tr.term(ctx, t)


def translate_type(emb: GeneratedEmbedding, ctx: Context, a: Term,
                   fuel: int = DEFAULT_FUEL) -> Term:
    """``‖a‖``: ``eps_s |a|`` when ``a : s``, ``U_s`` for a top sort ``s``."""
    return _Translator(emb, fuel).type(ctx, a)


def translate_context(emb: GeneratedEmbedding, ctx: Context,
                      fuel: int = DEFAULT_FUEL) -> Context:
    tr = _Translator(emb, fuel)
    return tuple((name, tr.type(ctx[:i], ty)) for i, (name, ty) in enumerate(ctx))


# ---------------------------------------------------------------------------
# Back translation


def back_translate(emb: GeneratedEmbedding, t: Term) -> Term:
    """``t*``, the erasing map from λΠ terms to PTS terms.

    A code ``dotPi A B`` becomes ``!x:A*. (B x)*``, where ``B x`` is read
    as the λΠ application and a λ in ``B`` is opened directly instead of
    leaving a β-redex.  For the same reason a product whose codomain is
    ``eps_s ((\\y:C. D) x)``, the shape produced by the product rule, is
    read as if the redex were contracted.  Both choices make rewriting
    invisible: ``t --> u`` by a rule implies ``t* = u*``.
    """
    s0 = Sort(PtsSort(emb.config.s0))

    def go(t):
        match t:
            case Var():
                return t
            case Sort(LpmSort()):
                return s0
            case Sort():
                return t
            case Const():
                role = emb.role(t)
                if role and role[0] in ("U", "dot"):
                    return Sort(PtsSort(role[1]))
                return t
            case Pi(a, App(Const() as e, App(Lam(_, d, y), Var(0)))) if _is(emb, e, "eps"):
                return Pi(go(a), go(subst(d, Var(0))), t.name or y)
            case Pi(a, b, x):
                return Pi(go(a), go(b), x)
            case Lam(a, b, x):
                return Lam(go(a), go(b), x)
        head, args = spine(t)
        role = emb.role(head)
        if role and role[0] == "eps":
            return app(go(args[0]), *map(go, args[1:]))
        if role and role[0] == "dotPi" and len(args) >= 2:
            a, b = args[0], args[1]
            if isinstance(b, Lam):
                prod = Pi(go(a), go(b.body), b.name)
            else:
                prod = Pi(go(a), go(App(shift(b, 1), Var(0, "x"))), "x")
            return app(prod, *map(go, args[2:]))
        return app(go(head), *map(go, args))

    return go(t)


def _is(emb, t, role):
    r = emb.role(t)
    return r is not None and r[0] == role


# ---------------------------------------------------------------------------
# Weak η-long forms


def weak_eta_expand(emb: GeneratedEmbedding, t: Term) -> Term:
    """η-expand every ``dotPi`` applied to fewer than two arguments."""
    nm = emb.naming

    def go(t):
        match t:
            case Lam(a, b, x):
                return Lam(go(a), go(b), x)
            case Pi(a, b, x):
                return Pi(go(a), go(b), x)
        head, args = spine(t)
        args = [go(a) for a in args]
        role = emb.role(head)
        if role is None or role[0] != "dotPi":
            return app(go(head) if args else head, *args)
        if len(args) >= 2:
            return app(head, *args)
        _, s1, s2, _ = role
        eps1, U2 = Const(nm.eps(s1)), Const(nm.U(s2))
        if len(args) == 1:
            t1 = args[0]
            return Lam(arrow(App(eps1, t1), U2), app(head, shift(t1, 1), Var(0, "Y")), "Y")
        family = arrow(App(eps1, Var(0, "X")), U2)
        return Lam(Const(nm.U(s1)),
                   Lam(family, app(head, Var(1, "X"), Var(0, "Y")), "Y"), "X")

    return go(t)


def is_weak_eta_long(t: Term, emb: Optional[GeneratedEmbedding] = None) -> bool:
    """Every product code occurs applied to at least two arguments.

    Without ``emb``, product codes are recognised by the default naming
    scheme.
    """
    if emb is not None:
        is_code = lambda h: _is(emb, h, "dotPi")  # noqa: E731
    else:
        is_code = lambda h: isinstance(h, Const) and h.name.startswith("dotPi_")  # noqa: E731

    def go(t):
        match t:
            case Lam(a, b) | Pi(a, b):
                return go(a) and go(b)
        head, args = spine(t)
        if is_code(head) and len(args) < 2:
            return False
        return (not isinstance(head, (Lam, Pi)) or go(head)) and all(go(a) for a in args)

    return go(t)


def _families_abstracted(emb, t) -> bool:
    """Every full ``dotPi A B`` application has an abstraction as ``B``."""
    match t:
        case Lam(a, b) | Pi(a, b):
            return _families_abstracted(emb, a) and _families_abstracted(emb, b)
    head, args = spine(t)
    if _is(emb, head, "dotPi") and len(args) >= 2 and not isinstance(args[1], Lam):
        return False
    return ((not isinstance(head, (Lam, Pi)) or _families_abstracted(emb, head))
            and all(_families_abstracted(emb, a) for a in args))


def expand_families(emb: GeneratedEmbedding, t: Term) -> Term:
    """η-expand the family argument ``B`` of every ``dotPi A B`` that is not an abstraction.

    ``B`` has type ``(eps_s1 A) -> U_s2``, so the expansion is
    ``λx:(eps_s1 A). B x``; typing is preserved.
    """
    nm = emb.naming

    def go(t):
        match t:
            case Lam(a, b, x):
                return Lam(go(a), go(b), x)
            case Pi(a, b, x):
                return Pi(go(a), go(b), x)
        head, args = spine(t)
        args = [go(a) for a in args]
        if isinstance(head, (Lam, Pi)):
            head = go(head)
        role = emb.role(head)
        if role is not None and role[0] == "dotPi" and len(args) >= 2 and not isinstance(args[1], Lam):
            dom = App(Const(nm.eps(role[1])), args[0])
            args[1] = Lam(dom, App(shift(args[1], 1), Var(0, "x")), "x")
        return app(head, *args)

    return go(t)


# ---------------------------------------------------------------------------
# Extraction


def extract_inhabitant(emb: GeneratedEmbedding, ctx: Context, a: Term, t: Term,
                       fuel: int = DEFAULT_FUEL) -> Term:
    """A PTS term ``u`` with ``ctx ⊢ u : a`` and ``|u| ≡ t``.

    ``t`` must be βR-normal, weak η-long with every product family an
    abstraction (see :func:`expand_families`), and an inhabitant of ``‖a‖``
    in ``‖ctx‖``.  The candidate is the β-normal form of ``t*``; both
    postconditions are checked and a failure raises
    :class:`ExtractionFailed`.
    """
    fuel = Fuel.of(fuel)
    k = emb.kernel()
    if not k.is_normal(t):
        raise PreconditionViolated("candidate is not βR-normal")
    if not is_weak_eta_long(t, emb):
        raise PreconditionViolated("candidate is not weak η-long")
    if not _families_abstracted(emb, t):
        raise PreconditionViolated("a product code has a family argument that is not an abstraction")
    try:
        lctx = translate_context(emb, ctx, fuel)
        k.check(lctx, t, translate_type(emb, ctx, a, fuel), fuel)
    except FuelExhausted:
        raise
    except LpmodError as e:
        raise PreconditionViolated(f"candidate does not inhabit the translated type: {e}") from e
    u = pts_normalize(back_translate(emb, t), fuel)
    try:
        pts_check(emb.spec, ctx, u, a, fuel)
    except TypingError as e:
        raise ExtractionFailed(f"extracted term is ill typed: {e}") from e
    if not k.convertible(translate_term(emb, ctx, u, fuel), t, fuel):
        raise ExtractionFailed("translation of the extracted term is not convertible to the candidate")
    return u


@dataclass(frozen=True)
class InhabitationReport:
    """Outcome of running a candidate inhabitant through extraction.

    ``status`` is ``"witness"``, ``"not-an-inhabitant"`` or ``"fuel"``.
    """

    status: str
    witness: Optional[Term] = None
    normal_form: Optional[Term] = None
    expanded: Optional[Term] = None
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "witness"


def check_inhabitation_theorem(emb: GeneratedEmbedding, ctx: Context, a: Term,
                               candidate: Term, fuel: int = DEFAULT_FUEL) -> InhabitationReport:
    """Normalize, η-expand and extract a candidate inhabitant of ``‖a‖``.

    The expansion is :func:`weak_eta_expand` followed by
    :func:`expand_families`; conversion has no η, so a family variable
    ``Y`` would otherwise never match the ``λx. |Y x|`` of a translation.
    """
    fuel = Fuel.of(fuel)
    k = emb.kernel()
    nf = expanded = None
    try:
        lctx = translate_context(emb, ctx, fuel)
        target = translate_type(emb, ctx, a, fuel)
        try:
            k.check(lctx, candidate, target, fuel)
        except TypingError as e:
            return InhabitationReport("not-an-inhabitant", message=str(e))
        nf = k.normalize(candidate, fuel)
        expanded = k.normalize(expand_families(emb, k.normalize(weak_eta_expand(emb, nf), fuel)), fuel)
        u = extract_inhabitant(emb, ctx, a, expanded, fuel)
    except FuelExhausted as e:
        return InhabitationReport("fuel", normal_form=nf, expanded=expanded, message=str(e))
    return InhabitationReport("witness", u, nf, expanded)
