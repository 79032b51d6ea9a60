"""
Why one PTS step can cost two lambda-Pi steps
=============================================

The translation of a product mentions the translation of its domain twice:
once as the code argument and once inside the decoded binder annotation.
A redex in the domain is therefore duplicated.
"""

from lpmod import COC, generate_embedding, parse_context, parse_term, print_term
from lpmod import translate_term
from lpmod.pts import pts_reducts
from lpmod.syntax import context_names
from lpmod.terms import beta_contract, one_step_reducts

emb = generate_embedding(COC)
ctx = parse_context("[nat:Type]", COC.sorts)
names = context_names(ctx)
t = parse_term(r"!x:(\X:Type. X) nat. nat", names, COC.sorts)
(v,) = pts_reducts(t)
print("PTS term     ", print_term(t, names))
print("one step to  ", print_term(v, names))

tt, tv = translate_term(emb, ctx, t), translate_term(emb, ctx, v)
print("translation  ", print_term(tt, names))
print("target       ", print_term(tv, names))

# Breadth-first search over beta steps finds the target at depth two.
frontier, depth = {tt}, 0
while tv not in frontier:
    frontier = {r for u in frontier for r in one_step_reducts(u, beta_contract)}
    depth += 1
print("beta steps   ", depth)
