"""
Embedding the Calculus of Constructions
=======================================

Generate the universe-reduction signature for CoC, translate the
polymorphic identity into it, and check the translation with the kernel.
"""

from lpmod import COC, generate_embedding, parse_term, print_signature, print_term
from lpmod import translate_term, translate_type

# The signature has a universe, a decoding and a sort code per sort, and a
# product code per product rule.  Each axiom and rule adds one rewrite rule.
emb = generate_embedding(COC)
print(print_signature(emb.signature, emb.rules))

# A PTS term and its type, parsed over the CoC sort names.
t = parse_term(r"\X:Type. \x:X. x", sorts=COC.sorts)
a = parse_term("!X:Type. X -> X", sorts=COC.sorts)

# Sorts translate to codes, so the type annotation of X becomes eps_Kind dot_Type.
tt = translate_term(emb, (), t)
ta = translate_type(emb, (), a)
print("term      ", print_term(tt))
print("type      ", print_term(ta))

# The kernel checks modulo beta and the generated rules.  Normalizing the
# type unfolds the product codes into real products.
kernel = emb.kernel()
kernel.check((), tt, ta)
print("checks    ", "yes")
print("type nf   ", print_term(kernel.normalize(ta)))
print("term nf   ", print_term(kernel.normalize(tt)))
