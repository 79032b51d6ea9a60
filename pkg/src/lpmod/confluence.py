"""Parallel reduction and complete development over a generated Σ_P.

Both operations are defined only for the universe-reduction system of a
functional PTS, whose redex shapes are known in advance: the β-redex, the
axiom redex ``eps_s2 dot_s1`` and the product redex
``eps_s3 (dotPi_s1_s2_s3 A B)``.
"""

from __future__ import annotations

from functools import lru_cache

from .embedding import GeneratedEmbedding, recover_embedding
from .errors import PreconditionViolated
from .terms import App, Const, Lam, Pi, Term, Var, shift, size, spine, subst

__all__ = ["ParallelReduction", "par_step_enumerate", "complete_development", "DEFAULT_MAX_SIZE"]

DEFAULT_MAX_SIZE = 14


class ParallelReduction:
    """``⇛`` and ``†`` for one embedding.

    Reduct sets are memoized per term, so enumerating the reducts of many
    related terms (the diamond lab does this) stays cheap.
    """

    def __init__(self, emb: GeneratedEmbedding, max_size: int = DEFAULT_MAX_SIZE,
                 cache_size: int = 1 << 16):
        self.emb = emb
        self.max_size = max_size
        nm = emb.naming
        # (eps_s2, dot_s1) -> U_s1 for each axiom
        self._axiom = {(nm.eps(s2), nm.dot(s1)): Const(nm.U(s1)) for s1, s2 in emb.spec.axioms}
        # (eps_s3, dotPi) -> (eps_s1, eps_s2) for each rule
        self._product = {(nm.eps(s3), nm.dotpi(s1, s2, s3)): (Const(nm.eps(s1)), Const(nm.eps(s2)))
                         for s1, s2, s3 in emb.spec.rules}
        self._enum = lru_cache(maxsize=cache_size)(self._enumerate)

    def _axiom_redex(self, m, n):
        if isinstance(m, Const) and isinstance(n, Const):
            return self._axiom.get((m.name, n.name))
        return None

    def _product_redex(self, m, n):
        """``(eps_s1, eps_s2, A, B)`` when ``m n`` is a product redex."""
        if not isinstance(m, Const):
            return None
        head, args = spine(n)
        if not isinstance(head, Const) or len(args) != 2:
            return None
        decoders = self._product.get((m.name, head.name))
        return decoders and (decoders[0], decoders[1], args[0], args[1])

    @staticmethod
    def _unfold(eps1, eps2, a, b):
        return Pi(App(eps1, a), App(eps2, App(shift(b, 1), Var(0, "x"))), "x")

    def enumerate(self, t: Term, bounded: bool = True) -> frozenset:
        """Every ``t'`` with ``t ⇛ t'``.

        The size gate applies to ``t`` only when ``bounded``; reducts of a
        gated term may be larger than the bound.
        """
        if bounded and size(t) > self.max_size:
            raise PreconditionViolated(
                f"term of size {size(t)} exceeds the enumeration bound {self.max_size}")
        return self._enum(t)

    def _enumerate(self, t):
        match t:
            case Lam(a, m, x):
                return frozenset(Lam(a2, m2, x) for a2 in self._enum(a) for m2 in self._enum(m))
            case Pi(a, b, x):
                return frozenset(Pi(a2, b2, x) for a2 in self._enum(a) for b2 in self._enum(b))
            case App(m, n):
                ms, ns = self._enum(m), self._enum(n)
                out = {App(m2, n2) for m2 in ms for n2 in ns}
                if isinstance(m, Lam):
                    out.update(subst(b2, n2) for b2 in self._enum(m.body) for n2 in ns)
                u = self._axiom_redex(m, n)
                if u is not None:
                    out.add(u)
                red = self._product_redex(m, n)
                if red:
                    eps1, eps2, a, b = red
                    out.update(self._unfold(eps1, eps2, a2, b2)
                               for a2 in self._enum(a) for b2 in self._enum(b))
                return frozenset(out)
        return frozenset((t,))

    def develop(self, t: Term) -> Term:
        """``t†``: contract every redex of ``t`` at once."""
        match t:
            case Lam(a, m, x):
                return Lam(self.develop(a), self.develop(m), x)
            case Pi(a, b, x):
                return Pi(self.develop(a), self.develop(b), x)
            case App(m, n):
                if isinstance(m, Lam):
                    return subst(self.develop(m.body), self.develop(n))
                u = self._axiom_redex(m, n)
                if u is not None:
                    return u
                red = self._product_redex(m, n)
                if red:
                    eps1, eps2, a, b = red
                    return self._unfold(eps1, eps2, self.develop(a), self.develop(b))
                return App(self.develop(m), self.develop(n))
        return t


def _system(emb_or_sig, rules=None) -> GeneratedEmbedding:
    if isinstance(emb_or_sig, GeneratedEmbedding):
        return emb_or_sig
    return recover_embedding(emb_or_sig, rules or ())


def par_step_enumerate(emb, t: Term, max_size: int = DEFAULT_MAX_SIZE, rules=None) -> frozenset:
    """All ``t'`` with ``t ⇛ t'``.

    ``emb`` is a generated embedding, or a signature (with ``rules``) that
    must be recognisable as one; anything else raises
    :class:`~lpmod.errors.UnsupportedSignature`.
    """
    return ParallelReduction(_system(emb, rules), max_size).enumerate(t)


def complete_development(emb, t: Term, rules=None) -> Term:
    return ParallelReduction(_system(emb, rules)).develop(t)

