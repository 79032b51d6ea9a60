import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpmod.errors import FuelExhausted
from lpmod.pts import sort
from lpmod.syntax import parse_term
from lpmod.terms import (
    KIND, TYPE, App, Const, Fuel, Lam, Pi, Side, Var, alpha_eq, app, arrow, beta_contract,
    instantiate, occurs, one_step_reducts, scope_audit, shift, size, spine, step_leftmost,
    subst,
)

from oracles import one_step, oracle_beta_contract, oracle_subst, oracle_subst2
from strategies import terms

A = Const("A")
c = Const("c")


class TestSubst:
    def test_identity_binder(self):
        assert subst(Var(0), c) == c

    def test_free_variable_shifts_down(self):
        assert subst(Var(1), c) == Var(0)

    def test_duplicating_substitution_matches_named_oracle(self):
        ident = Lam(A, Var(0), "y")
        body = App(Var(0), Var(0))
        expected = App(ident, ident)
        assert subst(body, ident) == expected
        assert oracle_subst(body, ident) == expected

    def test_argument_shifted_under_binders(self):
        # (λz. x) with x := Var 0 of the outer context becomes λz. Var 1.
        body = Lam(A, Var(1), "z")
        assert subst(body, Var(0)) == Lam(A, Var(1))

    def test_instantiate_several_values(self):
        t = Lam(A, app(Var(2), Var(1), Var(0)))
        assert instantiate(t, [Const("x"), Const("y")]) == Lam(A, app(Const("y"), Const("x"), Var(0)))

    @settings(max_examples=300, deadline=None)
    @given(terms(free=1, max_size=12), terms(free=0, max_size=6))
    def test_matches_named_oracle(self, body, arg):
        assert subst(body, arg) == oracle_subst(body, arg)

    @settings(max_examples=300, deadline=None)
    @given(terms(free=0, max_size=12), terms(free=0, max_size=6))
    def test_weakening_cancels(self, t, u):
        assert subst(shift(t, 1), u) == t

    @settings(max_examples=300, deadline=None)
    @given(terms(free=2, max_size=10), terms(free=1, max_size=5), terms(free=0, max_size=5))
    def test_composition_matches_simultaneous_oracle(self, t, v, u):
        assert subst(subst(t, v), u) == oracle_subst2(t, v, u)

    @settings(max_examples=200, deadline=None)
    @given(terms(free=1, max_size=10), terms(free=0, max_size=5))
    def test_size_bound(self, body, arg):
        n = sum(1 for _ in _var_zero_occurrences(body, 0))
        assert size(subst(body, arg)) <= size(body) + n * size(arg)


def _var_zero_occurrences(t, depth):
    if isinstance(t, Var):
        if t.index == depth:
            yield t
    elif isinstance(t, App):
        yield from _var_zero_occurrences(t.fn, depth)
        yield from _var_zero_occurrences(t.arg, depth)
    elif isinstance(t, (Lam, Pi)):
        a, b = (t.annotation, t.body) if isinstance(t, Lam) else (t.domain, t.codomain)
        yield from _var_zero_occurrences(a, depth)
        yield from _var_zero_occurrences(b, depth + 1)


class TestAlpha:
    def test_renamed_binder(self):
        assert alpha_eq(Lam(A, Var(0), "x"), Lam(A, Var(0), "y"))

    def test_distinct_bodies(self):
        assert not alpha_eq(Lam(A, Var(0), "x"), Lam(A, A, "x"))

    def test_parsed_products(self):
        a = parse_term("!x:iota. P x")
        b = parse_term("!z:iota. P z")
        assert alpha_eq(a, b)

    @given(terms(max_size=10), terms(max_size=10), terms(max_size=10))
    def test_equivalence_relation(self, a, b, c):
        assert alpha_eq(a, a)
        assert alpha_eq(a, b) == alpha_eq(b, a)
        if alpha_eq(a, b) and alpha_eq(b, c):
            assert alpha_eq(a, c)

    def test_names_ignored_in_hash(self):
        assert hash(Lam(A, Var(0, "x"), "x")) == hash(Lam(A, Var(0, "q"), "q"))


class TestScopeAudit:
    def test_bound_variable(self):
        assert scope_audit(Var(0), Side.LPM, 1) == []

    def test_unbound_variable_at_root(self):
        (v,) = scope_audit(Var(3), Side.LPM, 2)
        assert v.kind == "unbound-variable" and v.path == ""

    def test_foreign_sort_on_pts_side(self):
        (v,) = scope_audit(Pi(sort("Type"), KIND), Side.PTS, 0)
        assert v.kind == "foreign-sort"

    def test_pts_sort_on_lpm_side(self):
        assert [v.kind for v in scope_audit(sort("Type"), Side.LPM)] == ["foreign-sort"]

    def test_constant_on_pts_side(self):
        assert [v.kind for v in scope_audit(c, Side.PTS)] == ["foreign-constant"]

    def test_binders_extend_scope(self):
        assert scope_audit(Lam(TYPE, Pi(Var(0), Var(1))), Side.LPM) == []


class TestHelpers:
    def test_app_and_spine(self):
        t = app(Const("f"), A, c)
        assert t == App(App(Const("f"), A), c)
        assert spine(t) == (Const("f"), [A, c])

    def test_arrow_shifts_codomain(self):
        assert arrow(Var(0), Var(0)) == Pi(Var(0), Var(1))

    def test_occurs(self):
        assert occurs(Lam(A, Var(1)), 0)
        assert not occurs(Lam(A, Var(0)), 0)

    def test_size(self):
        assert size(App(Lam(A, Var(0)), c)) == 5

    def test_fuel(self):
        f = Fuel(2)
        f.spend()
        f.spend()
        with pytest.raises(FuelExhausted):
            f.spend()
        assert Fuel.of(f) is f


class TestReducts:
    def test_leftmost_outermost(self):
        inner = App(Lam(A, Var(0)), c)
        t = App(Lam(A, Const("k")), inner)
        assert step_leftmost(t, beta_contract) == Const("k")

    @settings(max_examples=300, deadline=None)
    @given(terms(max_size=12))
    def test_one_step_reducts_match_position_oracle(self, t):
        assert set(one_step_reducts(t, beta_contract)) == one_step(t, (oracle_beta_contract,))

    @settings(max_examples=200, deadline=None)
    @given(terms(max_size=12))
    def test_leftmost_step_is_a_reduct(self, t):
        r = step_leftmost(t, beta_contract)
        reducts = one_step(t)
        assert (r is None) == (not reducts)
        if r is not None:
            assert r in reducts


def test_terms_are_immutable():
    t = Var(0)
    with pytest.raises(AttributeError):
        t.index = 1  # type: ignore[misc]


@given(st.integers(0, 5))
def test_var_equality_ignores_names(i):
    assert Var(i, "a") == Var(i, "b")
