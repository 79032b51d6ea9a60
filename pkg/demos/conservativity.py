"""
Extracting PTS inhabitants from lambda-Pi terms
===============================================

In the embedding of the simply typed lambda calculus, a non-normal
lambda-Pi term can inhabit a translated type even though its direct back
translation is ill-typed.  Normalizing first recovers an honest witness.
"""

from lpmod import COC, STLC, Const, TypingError, back_translate, check_inhabitation_theorem
from lpmod import generate_embedding, parse_context, parse_term, print_term, pts_infer
from lpmod import translate_context, translate_type

emb = generate_embedding(STLC)
ctx = parse_context("[nat:Type]", STLC.sorts)
a = parse_term("nat -> nat", ["nat"], STLC.sorts)

# The candidate applies a polymorphic identity to nat.  Polymorphism is not
# available in the simply typed calculus, yet the candidate type-checks.
candidate = parse_term(r"(\X:eps_Kind dot_Type. \x:eps_Type X. x) nat", ["nat"])
emb.kernel().check(translate_context(emb, ctx), candidate, translate_type(emb, ctx, a))
print("candidate checks against", print_term(translate_type(emb, ctx, a), ["nat"]))

# Back-translating it directly gives a term the PTS rejects.
direct = back_translate(emb, candidate)
try:
    pts_infer(STLC, ctx, direct)
except TypingError as e:
    print("direct back translation", print_term(direct, ["nat"]), "is rejected:", e)

# Normalize, expand to weak eta-long form, then back-translate.
report = check_inhabitation_theorem(emb, ctx, a, candidate)
print("normal form ", print_term(report.normal_form, ["nat"]))
print("witness     ", print_term(report.witness, ["nat"]))

# A bare product code in CoC is not the translation of anything, but after
# eta-expansion it yields a genuine CoC inhabitant of its own type.
coc = generate_embedding(COC)
ty = parse_term("!X:Type. (X -> Type) -> Type", sorts=COC.sorts)
r = check_inhabitation_theorem(coc, (), ty, Const("dotPi_Type_Type_Type"))
print("expanded    ", print_term(r.expanded))
print("witness     ", print_term(r.witness))
