"""
Parallel reduction and the diamond lab
======================================

Enumerate parallel reducts, compute complete developments, and run the
seeded diamond lab over random terms of the CoC signature.
"""

from lpmod import COC, Const, Lam, App, Var, generate_embedding, print_term
from lpmod.confluence import ParallelReduction
from lpmod.lab import run_diamond_lab

emb = generate_embedding(COC)
pr = ParallelReduction(emb)

# (\x:A. x x) ((\y:B. y) c) has two redexes.  One parallel step can contract
# either, both, or neither, but not the copies created by substitution.
ident = Lam(Const("B"), Var(0), "y")
t = App(Lam(Const("A"), App(Var(0), Var(0)), "x"), App(ident, Const("c")))
print("term         ", print_term(t))
for r in sorted(pr.enumerate(t), key=print_term):
    print("  =>         ", print_term(r))
print("development  ", print_term(pr.develop(t)))

# Universe-reduction redexes take part in parallel steps too.
u = App(Const("eps_Kind"), Const("dot_Type"))
print("development  ", print_term(u), "=>", print_term(pr.develop(u)))

# Every parallel reduct reaches the development in one more parallel step.
report = run_diamond_lab(emb, count=2000, seed=1)
print("diamond lab  ", "ok" if report.ok else report.reason, f"({report.checked} terms)")
