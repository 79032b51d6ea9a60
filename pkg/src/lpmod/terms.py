"""Shared term language for PTS terms and λΠ-modulo terms.

Variables are de Bruijn indices: ``Var(0)`` is the innermost binder (or the
last context entry).  Display names ride along for printing only and are
ignored by equality and hashing, so α-equivalence is plain ``==``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Sequence, Tuple, Union

from .errors import FuelExhausted

__all__ = [
    "LpmSort", "PtsSort", "SortTag", "Term", "Var", "Sort", "Const", "Pi",
    "Lam", "App", "TYPE", "KIND", "Context", "Side", "Violation", "Fuel",
    "app", "arrow", "spine", "shift", "subst", "instantiate", "occurs",
    "size", "alpha_eq", "scope_audit", "step_leftmost", "beta_contract",
    "lookup", "extend", "subterms", "ctx_names", "one_step_reducts",
]


class LpmSort(enum.Enum):
    TYPE = "Type"
    KIND = "Kind"

    def __repr__(self):
        return self.value


@dataclass(frozen=True)
class PtsSort:
    name: str

    def __repr__(self):
        return f"PtsSort({self.name})"


SortTag = Union[LpmSort, PtsSort]


def _cached_hash(self):
    h = self.__dict__.get("_hash")
    if h is None:
        h = hash(self._key())
        object.__setattr__(self, "_hash", h)
    return h


@dataclass(frozen=True, repr=False)
class Var:
    index: int
    name: Optional[str] = field(default=None, compare=False)

    __hash__ = _cached_hash

    def _key(self):
        return ("V", self.index)

    def __repr__(self):
        return f"Var({self.index})"


@dataclass(frozen=True, repr=False)
class Sort:
    tag: SortTag

    __hash__ = _cached_hash

    def _key(self):
        return ("S", self.tag)

    def __repr__(self):
        return f"Sort({self.tag!r})"


@dataclass(frozen=True, repr=False)
class Const:
    name: str

    __hash__ = _cached_hash

    def _key(self):
        return ("C", self.name)

    def __repr__(self):
        return f"Const({self.name})"


@dataclass(frozen=True, repr=False)
class Pi:
    domain: "Term"
    codomain: "Term"
    name: Optional[str] = field(default=None, compare=False)

    __hash__ = _cached_hash

    def _key(self):
        return ("P", self.domain, self.codomain)

    def __repr__(self):
        return f"Pi({self.domain!r}, {self.codomain!r})"


@dataclass(frozen=True, repr=False)
class Lam:
    annotation: "Term"
    body: "Term"
    name: Optional[str] = field(default=None, compare=False)

    __hash__ = _cached_hash

    def _key(self):
        return ("L", self.annotation, self.body)

    def __repr__(self):
        return f"Lam({self.annotation!r}, {self.body!r})"


@dataclass(frozen=True, repr=False)
class App:
    fn: "Term"
    arg: "Term"

    __hash__ = _cached_hash

    def _key(self):
        return ("A", self.fn, self.arg)

    def __repr__(self):
        return f"App({self.fn!r}, {self.arg!r})"


Term = Union[Var, Sort, Const, Pi, Lam, App]

TYPE = Sort(LpmSort.TYPE)
KIND = Sort(LpmSort.KIND)

# A context is a tuple of (display name, type); each type is scoped over the
# entries before it.  The last entry is Var(0).
Context = Tuple[Tuple[str, Term], ...]


class Side(enum.Enum):
    PTS = "pts"
    LPM = "lpm"


@dataclass(frozen=True)
class Violation:
    kind: str
    path: str
    detail: str = ""

    def __str__(self):
        where = self.path or "root"
        return f"{self.kind} at {where}" + (f": {self.detail}" if self.detail else "")


class Fuel:
    """Step budget shared by every reduction performed for one judgment."""

    def __init__(self, limit: int):
        if limit <= 0:
            raise ValueError("fuel must be positive")
        self.limit = limit
        self.spent = 0

    @classmethod
    def of(cls, fuel: "int | Fuel") -> "Fuel":
        return fuel if isinstance(fuel, Fuel) else cls(fuel)

    def spend(self, last: Optional[Term] = None, n: int = 1) -> None:
        self.spent += n
        if self.spent > self.limit:
            raise FuelExhausted(self.limit, last)

    @property
    def remaining(self) -> int:
        return self.limit - self.spent


# ---------------------------------------------------------------------------
# Construction helpers


def app(head: Term, *args: Term) -> Term:
    for a in args:
        head = App(head, a)
    return head


def arrow(a: Term, b: Term) -> Pi:
    """Non-dependent product; ``b`` is scoped outside the new binder."""
    return Pi(a, shift(b, 1))


def spine(t: Term) -> Tuple[Term, list]:
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return t, args


def lookup(ctx: Context, index: int) -> Term:
    """Type of ``Var(index)`` in ``ctx``, lifted to the full context."""
    if not 0 <= index < len(ctx):
        raise IndexError(index)
    return shift(ctx[len(ctx) - 1 - index][1], index + 1)


def extend(ctx: Context, name: Optional[str], ty: Term) -> Context:
    return ctx + ((name or "_", ty),)


def ctx_names(ctx: Context) -> list:
    return [n for n, _ in ctx]


# ---------------------------------------------------------------------------
# Index manipulation


def shift(t: Term, d: int, cutoff: int = 0) -> Term:
    if d == 0:
        return t
    return _shift(t, d, cutoff)


def _shift(t, d, c):
    if isinstance(t, Var):
        return Var(t.index + d, t.name) if t.index >= c else t
    if isinstance(t, App):
        f, a = _shift(t.fn, d, c), _shift(t.arg, d, c)
        return t if f is t.fn and a is t.arg else App(f, a)
    if isinstance(t, Lam):
        a, b = _shift(t.annotation, d, c), _shift(t.body, d, c + 1)
        return t if a is t.annotation and b is t.body else Lam(a, b, t.name)
    if isinstance(t, Pi):
        a, b = _shift(t.domain, d, c), _shift(t.codomain, d, c + 1)
        return t if a is t.domain and b is t.codomain else Pi(a, b, t.name)
    return t


def subst(body: Term, arg: Term) -> Term:
    """``(arg/x)body`` where ``x`` is ``Var(0)`` of ``body``."""
    return _subst(body, arg, 0)


def _subst(t, arg, depth):
    if isinstance(t, Var):
        if t.index == depth:
            return shift(arg, depth)
        if t.index > depth:
            return Var(t.index - 1, t.name)
        return t
    if isinstance(t, App):
        return App(_subst(t.fn, arg, depth), _subst(t.arg, arg, depth))
    if isinstance(t, Lam):
        return Lam(_subst(t.annotation, arg, depth), _subst(t.body, arg, depth + 1), t.name)
    if isinstance(t, Pi):
        return Pi(_subst(t.domain, arg, depth), _subst(t.codomain, arg, depth + 1), t.name)
    return t


def instantiate(t: Term, values: Sequence[Term], outer_shift: int = 0) -> Term:
    """Simultaneous substitution of the ``len(values)`` outermost free indices.

    ``values[i]`` replaces ``Var(i)``.  Free indices beyond the substituted
    block are moved by ``outer_shift - len(values)``.
    """
    n = len(values)

    def go(t, depth):
        if isinstance(t, Var):
            k = t.index
            if k < depth:
                return t
            if k - depth < n:
                return shift(values[k - depth], depth)
            return Var(k - n + outer_shift, t.name)
        if isinstance(t, App):
            return App(go(t.fn, depth), go(t.arg, depth))
        if isinstance(t, Lam):
            return Lam(go(t.annotation, depth), go(t.body, depth + 1), t.name)
        if isinstance(t, Pi):
            return Pi(go(t.domain, depth), go(t.codomain, depth + 1), t.name)
        return t

    return go(t, 0)


def occurs(t: Term, index: int) -> bool:
    if isinstance(t, Var):
        return t.index == index
    if isinstance(t, App):
        return occurs(t.fn, index) or occurs(t.arg, index)
    if isinstance(t, Lam):
        return occurs(t.annotation, index) or occurs(t.body, index + 1)
    if isinstance(t, Pi):
        return occurs(t.domain, index) or occurs(t.codomain, index + 1)
    return False


def size(t: Term) -> int:
    if isinstance(t, App):
        return 1 + size(t.fn) + size(t.arg)
    if isinstance(t, Lam):
        return 1 + size(t.annotation) + size(t.body)
    if isinstance(t, Pi):
        return 1 + size(t.domain) + size(t.codomain)
    return 1


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, App):
        yield from subterms(t.fn)
        yield from subterms(t.arg)
    elif isinstance(t, Lam):
        yield from subterms(t.annotation)
        yield from subterms(t.body)
    elif isinstance(t, Pi):
        yield from subterms(t.domain)
        yield from subterms(t.codomain)


def alpha_eq(a: Term, b: Term) -> bool:
    return a == b


def scope_audit(t: Term, side: Side, ctx_len: int = 0) -> list:
    """List every scoping or sort-fragment violation in ``t``."""
    out = []

    def go(t, depth, path):
        if isinstance(t, Var):
            if t.index >= depth + ctx_len:
                out.append(Violation("unbound-variable", path, f"index {t.index}"))
        elif isinstance(t, Sort):
            foreign = isinstance(t.tag, LpmSort) if side is Side.PTS else isinstance(t.tag, PtsSort)
            if foreign:
                out.append(Violation("foreign-sort", path, repr(t.tag)))
        elif isinstance(t, Const):
            if side is Side.PTS:
                out.append(Violation("foreign-constant", path, t.name))
        elif isinstance(t, App):
            go(t.fn, depth, path + "/fn")
            go(t.arg, depth, path + "/arg")
        elif isinstance(t, Lam):
            go(t.annotation, depth, path + "/ann")
            go(t.body, depth + 1, path + "/body")
        elif isinstance(t, Pi):
            go(t.domain, depth, path + "/dom")
            go(t.codomain, depth + 1, path + "/cod")

    go(t, 0, "")
    return out


# ---------------------------------------------------------------------------
# Reduction scaffolding


def beta_contract(t: Term) -> Optional[Term]:
    if isinstance(t, App) and isinstance(t.fn, Lam):
        return subst(t.fn.body, t.arg)
    return None


def step_leftmost(t: Term, contract: Callable[[Term], Optional[Term]]) -> Optional[Term]:
    """One leftmost-outermost step using ``contract`` as the root rewrite."""
    r = contract(t)
    if r is not None:
        return r
    if isinstance(t, App):
        r = step_leftmost(t.fn, contract)
        if r is not None:
            return App(r, t.arg)
        r = step_leftmost(t.arg, contract)
        if r is not None:
            return App(t.fn, r)
    elif isinstance(t, Lam):
        r = step_leftmost(t.annotation, contract)
        if r is not None:
            return Lam(r, t.body, t.name)
        r = step_leftmost(t.body, contract)
        if r is not None:
            return Lam(t.annotation, r, t.name)
    elif isinstance(t, Pi):
        r = step_leftmost(t.domain, contract)
        if r is not None:
            return Pi(r, t.codomain, t.name)
        r = step_leftmost(t.codomain, contract)
        if r is not None:
            return Pi(t.domain, r, t.name)
    return None


def one_step_reducts(t: Term, contract: Callable[[Term], Optional[Term]]) -> Iterator[Term]:
    """Every term obtained by contracting one ``contract`` redex of ``t``."""
    r = contract(t)
    if r is not None:
        yield r
    if isinstance(t, App):
        for r in one_step_reducts(t.fn, contract):
            yield App(r, t.arg)
        for r in one_step_reducts(t.arg, contract):
            yield App(t.fn, r)
    elif isinstance(t, Lam):
        for r in one_step_reducts(t.annotation, contract):
            yield Lam(r, t.body, t.name)
        for r in one_step_reducts(t.body, contract):
            yield Lam(t.annotation, r, t.name)
    elif isinstance(t, Pi):
        for r in one_step_reducts(t.domain, contract):
            yield Pi(r, t.codomain, t.name)
        for r in one_step_reducts(t.codomain, contract):
            yield Pi(t.domain, r, t.name)
