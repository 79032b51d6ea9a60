import itertools
import random

import pytest

from lpmod.corpus import load_corpus, load_spec
from lpmod.embedding import (
    EmbeddingConfig, Naming, back_translate, check_inhabitation_theorem, expand_families,
    extract_inhabitant, generate_embedding, is_weak_eta_long, recover_embedding,
    translate_context, translate_term, translate_type, weak_eta_expand,
)
from lpmod.errors import (
    NotAType, PreconditionViolated, SpecInvalid, TopSortUntranslatable, TypingError,
    UnsupportedSignature,
)
from lpmod.kernel import RewriteRule, Signature, check_rule
from lpmod.lab import signature_terms, stlc_judgments
from lpmod.pts import (
    COC, LAMBDA_PI, STLC, SYSTEM_F, PtsSpec, beta_equiv, pts_beta_step, pts_check,
    pts_infer, pts_normalize, pts_reducts, sort,
)
from lpmod.syntax import parse_context, parse_signature, parse_term, print_signature
from lpmod.terms import KIND, TYPE, App, Const, Lam, Pi, Var, app, arrow, subst

from oracles import (
    expected_counts, one_step, oracle_beta_contract, reduction_graph, universe_contract,
    weak_eta_long_oracle,
)

SYSTEMS = [STLC, SYSTEM_F, LAMBDA_PI, COC]
CoC = generate_embedding(COC)
Stlc = generate_embedding(STLC)
CORPUS = load_corpus()
U_Type, U_Kind = Const("U_Type"), Const("U_Kind")
eps_Type, eps_Kind = Const("eps_Type"), Const("eps_Kind")
dot_Type = Const("dot_Type")
dotPi = {r: Const("dotPi_" + "_".join(r)) for r in COC.rules}
TTT, KTT = ("Type", "Type", "Type"), ("Kind", "Type", "Type")


def pts(text, ctx=(), spec=COC):
    return parse_term(text, [n for n, _ in ctx], spec.sorts)


def lpm(text, names=()):
    return parse_term(text, list(names))


def _subterms_with_ctx(ctx, t):
    yield ctx, t
    match t:
        case App(f, a):
            yield from _subterms_with_ctx(ctx, f)
            yield from _subterms_with_ctx(ctx, a)
        case Lam(a, b, x) | Pi(a, b, x):
            yield from _subterms_with_ctx(ctx, a)
            yield from _subterms_with_ctx(ctx + ((x, a),), b)


def _emb(spec):
    return {"stlc": Stlc, "coc": CoC}.get(spec.name) or generate_embedding(spec)


class TestGenerate:
    def test_coc_signature(self):
        assert CoC.signature.names == [
            "U_Type", "U_Kind", "eps_Type", "eps_Kind", "dot_Type",
            "dotPi_Type_Type_Type", "dotPi_Type_Kind_Kind", "dotPi_Kind_Type_Type",
            "dotPi_Kind_Kind_Kind"]
        assert len(CoC.rules) == 5

    def test_coc_declared_types(self):
        sig = CoC.signature
        assert sig["U_Type"] == TYPE
        assert sig["eps_Kind"] == arrow(U_Kind, TYPE)
        assert sig["dot_Type"] == U_Kind
        assert sig["dotPi_Kind_Type_Type"] == lpm("!X:U_Kind. ((eps_Kind X) -> U_Type) -> U_Type")

    def test_stlc_counts(self):
        assert len(Stlc.signature) == 6 and len(Stlc.rules) == 2

    @pytest.mark.parametrize("spec", SYSTEMS, ids=lambda s: s.name)
    def test_count_formula(self, spec):
        emb = generate_embedding(spec)
        assert (len(emb.signature), len(emb.rules)) == expected_counts(spec)

    @pytest.mark.parametrize("spec", SYSTEMS, ids=lambda s: s.name)
    def test_rules_well_typed(self, spec):
        emb = generate_embedding(spec)
        emb.kernel().check_signature()
        for r in emb.rules:
            check_rule(emb.signature, r)

    def test_no_rules(self):
        spec = PtsSpec(("Type", "Kind"), [("Type", "Kind")], [])
        emb = generate_embedding(spec)
        assert not any(n.startswith("dotPi") for n in emb.signature.names)
        assert len(emb.rules) == 1

    def test_axiom_rules_come_first(self):
        assert CoC.rules[0] == RewriteRule((), App(eps_Kind, dot_Type), U_Type, TYPE)
        assert all(r.head == "eps_" + r.lhs.arg.fn.fn.name.split("_")[-1] for r in CoC.rules[1:])

    def test_nonfunctional_rejected(self):
        with pytest.raises(SpecInvalid):
            generate_embedding(load_spec("nonfunctional").spec)

    def test_default_sort_must_exist(self):
        with pytest.raises(SpecInvalid):
            generate_embedding(EmbeddingConfig(COC, default_sort="Prop"))

    def test_naming_must_be_injective(self):
        clash = Naming(universe="T_{}", decode="T_{}")
        with pytest.raises(SpecInvalid):
            generate_embedding(EmbeddingConfig(COC, naming=clash))

    def test_custom_naming(self):
        emb = generate_embedding(EmbeddingConfig(STLC, naming=Naming(universe="Univ{}")))
        assert "UnivType" in emb.signature

    def test_recover_from_printed_signature(self):
        sig, rules = parse_signature(print_signature(CoC.signature, CoC.rules))
        assert recover_embedding(sig, rules) == CoC

    def test_recover_rejects_foreign_rules(self):
        sig = Signature(list(CoC.signature))
        rules = list(CoC.rules[:-1])
        with pytest.raises(UnsupportedSignature):
            recover_embedding(sig, rules)

    def test_recover_rejects_hand_signature(self):
        with pytest.raises(UnsupportedSignature):
            recover_embedding(Signature([("A", TYPE)]), [])


class TestTranslate:
    def test_polymorphic_identity(self):
        t = translate_term(CoC, (), pts(r"\X:Type. \x:X. x"))
        assert t == lpm(r"\X:eps_Kind dot_Type. \x:eps_Type X. x")

    def test_polymorphic_identity_normalizes_to_universe_form(self):
        t = translate_term(CoC, (), pts(r"\X:Type. \x:X. x"))
        assert CoC.kernel().normalize(t) == lpm(r"\X:U_Type. \x:eps_Type X. x")

    def test_variable(self):
        ctx = parse_context("[nat:Type]", COC.sorts)
        assert translate_term(CoC, ctx, Var(0)) == Var(0)

    def test_product_by_hand(self):
        t = translate_term(CoC, (), pts("!X:Type. X -> X"))
        inner = app(dotPi[TTT], Var(0), Lam(App(eps_Type, Var(0)), Var(1)))
        expected = app(dotPi[KTT], dot_Type, Lam(App(eps_Kind, dot_Type), inner))
        assert t == expected

    def test_type_of_identity(self):
        a = translate_type(CoC, (), pts("!X:Type. X -> X"))
        nf = CoC.kernel().normalize(a)
        assert nf == lpm("!X:U_Type. (eps_Type X) -> eps_Type X")

    def test_sort_as_type(self):
        a = translate_type(CoC, (), sort("Type"))
        assert a == App(eps_Kind, dot_Type)
        assert CoC.kernel().normalize(a) == U_Type

    def test_top_sort_as_type(self):
        assert translate_type(CoC, (), sort("Kind")) == U_Kind

    def test_top_sort_as_term(self):
        with pytest.raises(TopSortUntranslatable):
            translate_term(CoC, (), sort("Kind"))

    def test_not_a_type(self):
        ctx = parse_context("[nat:Type, n:nat]", COC.sorts)
        with pytest.raises(NotAType):
            translate_type(CoC, ctx, Var(0))

    def test_ill_typed(self):
        ctx = parse_context("[nat:Type]", STLC.sorts)
        with pytest.raises(TypingError):
            translate_term(Stlc, ctx, pts(r"(\X:Type. \x:X. x) nat", ctx, STLC))

    def test_context(self):
        ctx = parse_context("[nat:Type, n:nat]", COC.sorts)
        assert translate_context(CoC, ctx) == (
            ("nat", App(eps_Kind, dot_Type)), ("n", App(eps_Type, Var(0))))


class TestBackTranslate:
    def test_identity_example(self):
        t = lpm(r"\X:U_Type. \x:eps_Type X. x")
        assert back_translate(CoC, t) == pts(r"\X:Type. \x:X. x")

    def test_universe(self):
        assert back_translate(CoC, U_Kind) == sort("Kind")

    def test_lpm_sort_goes_to_default(self):
        assert back_translate(CoC, TYPE) == sort("Type")
        assert back_translate(CoC, KIND) == sort("Type")
        emb = generate_embedding(EmbeddingConfig(COC, default_sort="Kind"))
        assert back_translate(emb, TYPE) == sort("Kind")

    def test_sort_code(self):
        assert back_translate(CoC, dot_Type) == sort("Type")

    def test_product_code_with_abstraction(self):
        t = app(dotPi[TTT], Var(0), Lam(App(eps_Type, Var(0)), Var(1)))
        assert back_translate(CoC, t) == Pi(Var(0), Var(1))

    def test_product_code_with_family_variable(self):
        # (dotPi A B)* = !x:A*. (B x)*
        t = app(dotPi[TTT], Var(1), Var(0))
        assert back_translate(CoC, t) == Pi(Var(1), App(Var(1), Var(0)))

    def test_decoding_is_erased(self):
        assert back_translate(CoC, App(eps_Type, Var(0))) == Var(0)

    def test_foreign_constants_kept(self):
        assert back_translate(CoC, App(Const("f"), U_Type)) == App(Const("f"), sort("Type"))

    @pytest.mark.parametrize("entry", CORPUS, ids=lambda e: e.label)
    def test_right_inverse(self, entry):
        emb = _emb(entry.spec)
        assert back_translate(emb, translate_term(emb, entry.ctx, entry.term)) == entry.term
        if not (entry.type == sort("Kind")):
            assert back_translate(emb, translate_type(emb, entry.ctx, entry.type)) == entry.type
        lctx = translate_context(emb, entry.ctx)
        assert tuple((n, back_translate(emb, a)) for n, a in lctx) == entry.ctx

    def test_right_inverse_random_stlc(self):
        for ctx, t, a in stlc_judgments(2000, seed=5):
            assert back_translate(Stlc, translate_term(Stlc, ctx, t)) == t
            assert back_translate(Stlc, translate_type(Stlc, ctx, a)) == a

    @pytest.mark.parametrize("spec", SYSTEMS, ids=lambda s: s.name)
    def test_rule_steps_are_invisible(self, spec):
        emb = generate_embedding(spec)
        k = emb.kernel()
        steps = 0
        for t in signature_terms(emb, 500, seed=2):
            for kind, u in k.reducts(t):
                if kind == "R":
                    assert back_translate(emb, t) == back_translate(emb, u)
                    steps += 1
        assert steps > 200

    def test_beta_steps_simulated(self):
        k = CoC.kernel()
        checked = 0
        decodes = lambda h: isinstance(h, Const) and h.name.startswith("eps_")  # noqa: E731
        for t in signature_terms(CoC, 1000, seed=4, max_size=10):
            # Bare codes and decodings have no counterpart; simulation is stated for applied ones.
            if not (weak_eta_long_oracle(t, decodes, arity=1) and is_weak_eta_long(t, CoC)):
                continue
            for kind, u in k.reducts(t):
                if kind != "beta":
                    continue
                graph = reduction_graph(back_translate(CoC, t), limit=300)
                if graph is None:
                    continue
                assert back_translate(CoC, u) in graph
                checked += 1
        assert checked > 50

    def test_beta_steps_simulated_on_translations(self):
        k = Stlc.kernel()
        checked = 0
        for ctx, t, _ in stlc_judgments(600, seed=3):
            tt = translate_term(Stlc, ctx, t)
            for kind, u in k.reducts(tt):
                if kind == "beta":
                    assert back_translate(Stlc, u) in one_step(t)
                    checked += 1
        assert checked > 200


class TestTranslationProperties:
    @pytest.mark.parametrize("entry", CORPUS, ids=lambda e: e.label)
    def test_soundness(self, entry):
        emb = _emb(entry.spec)
        k = emb.kernel()
        lctx = translate_context(emb, entry.ctx)
        k.check_context(lctx)
        k.check(lctx, translate_term(emb, entry.ctx, entry.term),
                translate_type(emb, entry.ctx, entry.type))

    @pytest.mark.parametrize("entry", CORPUS, ids=lambda e: e.label)
    def test_substitution_commutes(self, entry):
        emb = _emb(entry.spec)
        for ctx, sub in _subterms_with_ctx(entry.ctx, entry.term):
            if isinstance(sub, App) and isinstance(sub.fn, Lam):
                lam = sub.fn
                inner = ctx + ((lam.name, lam.annotation),)
                lhs = translate_term(emb, ctx, subst(lam.body, sub.arg))
                rhs = subst(translate_term(emb, inner, lam.body), translate_term(emb, ctx, sub.arg))
                assert lhs == rhs

    def test_stlc_step_simulation_is_one_step(self):
        checked = 0
        for ctx, t, a in stlc_judgments(600, seed=9):
            tt = translate_term(Stlc, ctx, t)
            for v in pts_reducts(t):
                assert translate_term(Stlc, ctx, v) in one_step(tt, (oracle_beta_contract,))
                checked += 1
        assert checked > 200

    @pytest.mark.parametrize("entry", CORPUS, ids=lambda e: e.label)
    def test_step_simulation_reachable(self, entry):
        emb = _emb(entry.spec)
        tt = translate_term(emb, entry.ctx, entry.term)
        graph = reduction_graph(tt, limit=2000)
        for v in pts_reducts(entry.term):
            tv = translate_term(emb, entry.ctx, v)
            assert tv != tt and tv in graph

    @pytest.mark.parametrize("entry", CORPUS, ids=lambda e: e.label)
    def test_reduction_sequences_transfer(self, entry):
        """Each PTS step maps to at least one β-step, so λΠ_P sequences are no shorter."""
        emb = _emb(entry.spec)
        t, pts_len, lpm_len = entry.term, 0, 0
        while (u := pts_beta_step(t)) is not None:
            tt, tu = translate_term(emb, entry.ctx, t), translate_term(emb, entry.ctx, u)
            lpm_len += _beta_distance(tt, tu)
            pts_len += 1
            t = u
        assert lpm_len >= pts_len
        if entry.system == "stlc":
            assert lpm_len == pts_len

    @pytest.mark.parametrize("spec", SYSTEMS, ids=lambda s: s.name)
    def test_conversion_reflection(self, spec):
        emb = _emb(spec)
        k = emb.kernel()
        types = {e.type for e in CORPUS if e.spec == spec and not e.ctx and e.type != sort("Kind")}
        for a, b in itertools.combinations(sorted(types, key=repr), 2):
            ta, tb = translate_type(emb, (), a), translate_type(emb, (), b)
            assert bool(k.convertible(ta, tb)) == beta_equiv(a, b)

    @pytest.mark.parametrize("entry", CORPUS, ids=lambda e: e.label)
    def test_pi_equivalence(self, entry):
        emb = _emb(entry.spec)
        k = emb.kernel()
        for ctx, sub in _subterms_with_ctx(entry.ctx, entry.term):
            if isinstance(sub, Pi):
                inner = ctx + ((sub.name, sub.domain),)
                whole = translate_type(emb, ctx, sub)
                split = Pi(translate_type(emb, ctx, sub.domain), translate_type(emb, inner, sub.codomain))
                assert k.convertible(whole, split, fuel=10_000)


def _beta_distance(a, b, limit=5000):
    """Length of the shortest β-sequence from ``a`` to ``b``."""
    frontier, seen, d = {a}, {a}, 0
    while frontier and d < 20:
        if b in frontier:
            return d
        d += 1
        nxt = set()
        for t in frontier:
            nxt |= one_step(t) - seen
        seen |= nxt
        frontier = nxt
        assert len(seen) < limit
    raise AssertionError("target not reachable")


class TestWeakEta:
    def test_bare_product_code(self):
        exp = weak_eta_expand(CoC, dotPi[TTT])
        assert exp == lpm(r"\X:U_Type. \Y:(eps_Type X) -> U_Type. dotPi_Type_Type_Type X Y")

    def test_partial_application(self):
        exp = weak_eta_expand(CoC, App(dotPi[TTT], Var(0)))
        assert exp == Lam(arrow(App(eps_Type, Var(0)), U_Type), app(dotPi[TTT], Var(1), Var(0)))
        full = App(weak_eta_expand(CoC, dotPi[TTT]), Var(0))
        assert beta_equiv(exp, full)

    def test_variable_untouched(self):
        assert weak_eta_expand(CoC, Var(0)) == Var(0)

    def test_long_form_reduces_back(self):
        t = app(dotPi[TTT], Var(1), Var(0))
        assert weak_eta_expand(CoC, t) == t

    def test_predicate(self):
        assert is_weak_eta_long(app(dotPi[TTT], Const("A"), Const("B")))
        assert not is_weak_eta_long(App(dotPi[TTT], Const("A")))
        assert is_weak_eta_long(app(dotPi[TTT], Const("A"), Const("B")), CoC)

    @pytest.mark.parametrize("entry", CORPUS, ids=lambda e: e.label)
    def test_translations_are_long(self, entry):
        emb = _emb(entry.spec)
        t = translate_term(emb, entry.ctx, entry.term)
        assert is_weak_eta_long(t, emb)
        assert weak_eta_long_oracle(t, lambda h: emb.role(h) is not None and emb.role(h)[0] == "dotPi")

    def test_predicate_matches_oracle(self):
        code = lambda h: isinstance(h, Const) and h.name.startswith("dotPi_")  # noqa: E731
        for t in signature_terms(CoC, 2000, seed=8):
            assert is_weak_eta_long(t, CoC) == weak_eta_long_oracle(t, code)
            e = weak_eta_expand(CoC, t)
            assert weak_eta_long_oracle(e, code)
            if is_weak_eta_long(t, CoC):
                assert t in reduction_graph(e, limit=2000)

    @pytest.mark.parametrize("entry", CORPUS, ids=lambda e: e.label)
    def test_expansion_preserves_type(self, entry):
        emb = _emb(entry.spec)
        k = emb.kernel()
        lctx = translate_context(emb, entry.ctx)
        t = k.normalize(translate_term(emb, entry.ctx, entry.term))
        a = translate_type(emb, entry.ctx, entry.type)
        k.check(lctx, weak_eta_expand(emb, t), a)
        assert k.convertible(weak_eta_expand(emb, a), a)

    def test_expand_families(self):
        t = app(dotPi[TTT], Var(1), Var(0))
        assert expand_families(CoC, t) == app(
            dotPi[TTT], Var(1), Lam(App(eps_Type, Var(1)), App(Var(1), Var(0))))
        fam = Lam(App(eps_Type, Var(0)), Var(1))
        assert expand_families(CoC, app(dotPi[TTT], Var(0), fam)) == app(dotPi[TTT], Var(0), fam)


class TestExtraction:
    def test_polymorphic_identity(self):
        t = lpm(r"\X:U_Type. \x:eps_Type X. x")
        u = extract_inhabitant(CoC, (), pts("!X:Type. X -> X"), t)
        assert u == pts(r"\X:Type. \x:X. x")

    def test_stlc_identity(self):
        ctx = parse_context("[nat:Type]", STLC.sorts)
        t = lpm(r"\x:eps_Type nat. x", ["nat"])
        assert extract_inhabitant(Stlc, ctx, pts("nat -> nat", ctx, STLC), t) == pts(r"\x:nat. x", ctx, STLC)

    def test_sort_code(self):
        assert extract_inhabitant(CoC, (), sort("Kind"), dot_Type) == sort("Type")

    def test_rejects_non_normal(self):
        t = App(Lam(U_Type, Var(0)), App(eps_Kind, dot_Type))
        with pytest.raises(PreconditionViolated):
            extract_inhabitant(CoC, (), sort("Kind"), t)

    def test_rejects_non_long(self):
        ty = pts("!X:Type. (X -> Type) -> Type")
        with pytest.raises(PreconditionViolated):
            extract_inhabitant(CoC, (), ty, dotPi[TTT])

    def test_rejects_family_variable(self):
        ty = pts("!X:Type. (X -> Type) -> Type")
        with pytest.raises(PreconditionViolated):
            extract_inhabitant(CoC, (), ty, CoC.kernel().normalize(weak_eta_expand(CoC, dotPi[TTT])))

    def test_rejects_non_inhabitant(self):
        with pytest.raises(PreconditionViolated):
            extract_inhabitant(CoC, (), pts("!X:Type. X -> X"), U_Type)


class TestInhabitation:
    @pytest.mark.parametrize("entry", CORPUS, ids=lambda e: e.label)
    def test_round_trip(self, entry):
        emb = _emb(entry.spec)
        r = check_inhabitation_theorem(emb, entry.ctx, entry.type, translate_term(emb, entry.ctx, entry.term))
        assert r.ok, r.message
        pts_check(entry.spec, entry.ctx, r.witness, entry.type)
        assert beta_equiv(r.witness, entry.term)

    def test_non_normal_candidate_in_stlc(self):
        ctx = parse_context("[nat:Type]", STLC.sorts)
        nat_names = ["nat"]
        candidate = lpm(r"(\X:eps_Kind dot_Type. \x:eps_Type X. x) nat", nat_names)
        a = pts("nat -> nat", ctx, STLC)
        Stlc.kernel().check(translate_context(Stlc, ctx), candidate, translate_type(Stlc, ctx, a))
        with pytest.raises(TypingError):
            pts_infer(STLC, ctx, back_translate(Stlc, candidate))
        r = check_inhabitation_theorem(Stlc, ctx, a, candidate)
        assert r.ok
        assert r.normal_form == lpm(r"\x:eps_Type nat. x", nat_names)
        assert r.witness == pts(r"\x:nat. x", ctx, STLC)

    def test_bare_product_code(self):
        r = check_inhabitation_theorem(CoC, (), pts("!X:Type. (X -> Type) -> Type"), dotPi[TTT])
        assert r.ok
        assert r.witness == pts(r"\X:Type. \Y:X -> Type. !x:X. Y x")

    def test_not_an_inhabitant(self):
        r = check_inhabitation_theorem(CoC, (), pts("!X:Type. X -> X"), U_Type)
        assert r.status == "not-an-inhabitant" and not r.ok

    def test_fuel(self):
        r = check_inhabitation_theorem(CoC, (), pts("!X:Type. X -> X"),
                                       lpm(r"\X:U_Type. \x:eps_Type X. x"), fuel=3)
        assert r.status == "fuel"

    def test_random_stlc(self):
        rng = random.Random(1)
        for ctx, t, a in rng.sample(stlc_judgments(500, seed=12), 100):
            if a == sort("Kind"):
                continue
            r = check_inhabitation_theorem(Stlc, ctx, a, translate_term(Stlc, ctx, t))
            assert r.ok
            assert r.witness == pts_normalize(t)


def test_universe_contract_oracle_agrees_with_kernel():
    k = CoC.kernel()
    contract = universe_contract(CoC)
    for t in signature_terms(CoC, 300, seed=21):
        assert {u for kind, u in k.reducts(t) if kind == "R"} == one_step(t, (contract,))


def test_translated_products_need_beta_in_conversion():
    a = translate_type(CoC, (), pts("!X:Type. X -> X"))
    t = translate_term(CoC, (), pts(r"\X:Type. \x:X. x"))
    CoC.kernel().check((), t, a)
    with pytest.raises(TypingError):
        CoC.kernel(lambda_pi_minus=True).check((), t, a)
