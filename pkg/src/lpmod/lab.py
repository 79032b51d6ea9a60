"""Seeded random terms and the bounded checks run over them.

Two generators: well-typed simply typed terms (with their types), and
untyped terms over a generated Σ_P biased towards β-, axiom- and
product-redexes.  :func:`diamond_violation` checks one term against the
parallel-reduction properties.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Optional

from .confluence import DEFAULT_MAX_SIZE, ParallelReduction
from .embedding import GeneratedEmbedding
from .kernel import Kernel
from .pts import sort
from .terms import TYPE, KIND, App, Const, Lam, Pi, Term, Var, app, size

__all__ = [
    "STLC_CONTEXT", "random_stlc_judgment", "stlc_judgments", "random_signature_term",
    "signature_terms", "diamond_violation", "reachable_within", "DiamondReport",
    "run_diamond_lab",
]

# Simple types are nested tuples: a base name, or ("->", a, b).
_BASES = ("nat", "bool")
_CONSTS = (("zero", "nat"), ("succ", ("->", "nat", "nat")), ("tt", "bool"),
           ("iszero", ("->", "nat", "bool")))


def _simple_to_term(ty, env):
    """``env`` lists context names innermost last; base types are entries."""
    if isinstance(ty, str):
        return Var(len(env) - 1 - _last_index(env, ty), ty)
    _, a, b = ty
    return Pi(_simple_to_term(a, env), _simple_to_term(b, env + [None]))


def _last_index(env, name):
    for i in range(len(env) - 1, -1, -1):
        if env[i] == name:
            return i
    raise KeyError(name)


def _stlc_context():
    names, ctx = [], []
    for b in _BASES:
        ctx.append((b, sort("Type")))
        names.append(b)
    for c, ty in _CONSTS:
        ctx.append((c, _simple_to_term(ty, names)))
        names.append(c)
    return tuple(ctx)


STLC_CONTEXT = _stlc_context()


def _random_type(rng, depth):
    if depth <= 0 or rng.random() < 0.45:
        return rng.choice(_BASES)
    return ("->", _random_type(rng, depth - 1), _random_type(rng, depth - 1))


def _result(ty, n):
    for _ in range(n):
        ty = ty[2]
    return ty


def _args(ty):
    out = []
    while not isinstance(ty, str):
        out.append(ty[1])
        ty = ty[2]
    return out


def _gen_term(rng, ty, env, tys, budget):
    """A term of simple type ``ty``; ``tys[i]`` is the type of ``env[i]`` or None."""
    heads = []
    for i, vty in enumerate(tys):
        if vty is None:
            continue
        params = _args(vty)
        for n in range(len(params) + 1):
            if _result(vty, n) == ty:
                heads.append((i, params[:n]))
    options = []
    if heads:
        options.append("head")
    if not isinstance(ty, str):
        options.append("lam")
    if budget > 2:
        options.append("redex")
    if budget <= 0:
        heads = [h for h in heads if not h[1]] or heads
        options = ["head"] if heads else ["lam"]
    choice = rng.choice(options)
    if choice == "lam":
        _, a, b = ty
        name = f"x{len(env)}"
        body = _gen_term(rng, b, env + [name], tys + [a], budget - 1)
        return Lam(_simple_to_term(a, env), body, name)
    if choice == "head":
        i, params = rng.choice(heads)
        t = Var(len(env) - 1 - i, env[i])
        for p in params:
            t = App(t, _gen_term(rng, p, env, tys, (budget - 1) // max(len(params), 1)))
        return t
    a = _random_type(rng, 1)
    name = f"x{len(env)}"
    body = _gen_term(rng, ty, env + [name], tys + [a], (budget - 1) // 2)
    arg = _gen_term(rng, a, env, tys, (budget - 1) // 2)
    return App(Lam(_simple_to_term(a, env), body, name), arg)


def random_stlc_judgment(rng: random.Random, budget: int = 8):
    """``(ctx, t, A)`` with ``ctx ⊢ t : A`` in λ→; sometimes ``t`` is a type."""
    env = [n for n, _ in STLC_CONTEXT]
    tys = [None] * len(_BASES) + [ty for _, ty in _CONSTS]
    if rng.random() < 0.1:
        return STLC_CONTEXT, _simple_to_term(_random_type(rng, 3), env), sort("Type")
    ty = _random_type(rng, 2)
    t = _gen_term(rng, ty, env, tys, budget)
    return STLC_CONTEXT, t, _simple_to_term(ty, env)


def stlc_judgments(count: int, seed: int = 0, budget: int = 8) -> list:
    rng = random.Random(seed)
    return [random_stlc_judgment(rng, budget) for _ in range(count)]


# ---------------------------------------------------------------------------
# Untyped terms over a generated signature


def random_signature_term(rng: random.Random, emb: GeneratedEmbedding,
                          max_size: int = DEFAULT_MAX_SIZE, depth: int = 0) -> Term:
    nm = emb.naming
    consts = [Const(n) for n in emb.signature.names]
    axioms = [(Const(nm.eps(s2)), Const(nm.dot(s1))) for s1, s2 in emb.spec.axioms]
    products = [(Const(nm.eps(s3)), Const(nm.dotpi(s1, s2, s3))) for s1, s2, s3 in emb.spec.rules]

    def gen(budget, depth):
        if budget <= 1:
            leaves = consts + [TYPE, KIND] + [Var(i) for i in range(depth)] * 3
            return rng.choice(leaves)
        r = rng.random()
        if (r < 0.1 or budget < 4) and axioms:
            e, d = rng.choice(axioms)
            return App(e, d) if budget < 5 else App(App(e, d), gen(budget - 4, depth))
        if r < 0.35 and products and budget >= 5:
            e, p = rng.choice(products)
            rest = budget - 5
            a = gen(rest // 2, depth)
            if rng.random() < 0.6 and rest >= 2:
                b = Lam(gen(1, depth), gen(rest - rest // 2 - 2, depth + 1), "y")
            else:
                b = gen(rest - rest // 2, depth)
            return App(e, app(p, a, b))
        if r < 0.6 and budget >= 4:
            rest = budget - 3
            k = rng.randint(0, rest)
            return App(Lam(gen(1, depth), gen(k, depth + 1), "x"), gen(rest - k, depth))
        if r < 0.72:
            k = rng.randint(1, budget - 2)
            return Lam(gen(k, depth), gen(budget - 1 - k, depth + 1), "x")
        if r < 0.8:
            k = rng.randint(1, budget - 2)
            return Pi(gen(k, depth), gen(budget - 1 - k, depth + 1), "x")
        k = rng.randint(1, budget - 2)
        return App(gen(k, depth), gen(budget - 1 - k, depth))

    while True:
        t = gen(rng.randint(max_size // 2, max_size), depth)
        if size(t) <= max_size:
            return t


def signature_terms(emb: GeneratedEmbedding, count: int, seed: int = 0,
                    max_size: int = DEFAULT_MAX_SIZE) -> list:
    rng = random.Random(seed)
    return [random_signature_term(rng, emb, max_size) for _ in range(count)]


# ---------------------------------------------------------------------------
# Diamond lab


def reachable_within(kernel: Kernel, t: Term, targets, depth: int = 14,
                     limit: int = 200_000) -> set:
    """The subset of ``targets`` reachable from ``t`` in at most ``depth`` steps."""
    targets = set(targets)
    found = targets & {t}
    seen = {t}
    frontier = deque([(t, 0)])
    while frontier and found != targets:
        u, d = frontier.popleft()
        if d == depth:
            continue
        for _, v in kernel.reducts(u):
            if v not in seen:
                seen.add(v)
                if v in targets:
                    found.add(v)
                frontier.append((v, d + 1))
                if len(seen) > limit:
                    return found
    return found


def diamond_violation(pr: ParallelReduction, kernel: Kernel, t: Term,
                      depth: int = 14) -> Optional[str]:
    """``None`` if ``t`` passes every parallel-reduction check, else the reason."""
    reducts = pr.enumerate(t)
    dev = pr.develop(t)
    if dev not in reducts:
        return "t† is not a parallel reduct of t"
    for t2 in reducts:
        if dev not in pr.enumerate(t2, bounded=False):
            return f"t† is not a parallel reduct of {t2!r}"
    for kind, t2 in kernel.reducts(t):
        if t2 not in reducts:
            return f"{kind}-reduct {t2!r} is not a parallel reduct"
    missing = set(reducts) - reachable_within(kernel, t, reducts, depth)
    if missing:
        return f"parallel reduct {next(iter(missing))!r} not reachable in {depth} steps"
    return None


@dataclass(frozen=True)
class DiamondReport:
    checked: int
    counterexample: Optional[Term] = None
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.counterexample is None


def run_diamond_lab(emb: GeneratedEmbedding, count: int = 10_000, seed: int = 0,
                    max_size: int = DEFAULT_MAX_SIZE, depth: int = 14) -> DiamondReport:
    pr = ParallelReduction(emb, max_size)
    kernel = emb.kernel()
    rng = random.Random(seed)
    for i in range(count):
        t = random_signature_term(rng, emb, max_size)
        reason = diamond_violation(pr, kernel, t, depth)
        if reason:
            return DiamondReport(i + 1, t, reason)
    return DiamondReport(count)
