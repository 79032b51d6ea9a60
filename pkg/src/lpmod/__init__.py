"""λΠ-calculus modulo rewriting and the embedding of functional PTSs into it.

Submodules:

- ``terms``: de Bruijn terms, substitution, fuel
- ``pts``: Pure Type System specs, β-reduction and type inference
- ``kernel``: the λΠ-modulo kernel (signatures, rewrite rules, conversion, typing)
- ``embedding``: generated signatures, translations, back translation, extraction
- ``confluence``: parallel reduction and complete development
- ``syntax``: the ASCII concrete syntax
- ``lab``, ``corpus``: random term generators and the bundled judgment corpus
"""

from .confluence import ParallelReduction, complete_development, par_step_enumerate
from .embedding import (
    EmbeddingConfig, GeneratedEmbedding, InhabitationReport, Naming, back_translate,
    check_inhabitation_theorem, expand_families, extract_inhabitant, generate_embedding,
    is_weak_eta_long, recover_embedding, translate_context, translate_term, translate_type,
    weak_eta_expand,
)
from .errors import (
    DuplicateName, ExtractionFailed, FuelExhausted, KindHasNoType, LpmodError, NotAType,
    ParseError, PreconditionViolated, RuleError, SpecInvalid, TopSortUntranslatable,
    TypeMismatch, TypingError, UnknownSortName, UnsupportedSignature, UntypableSort,
)
from .kernel import (
    ConversionVerdict, Kernel, RewriteRule, Signature, betaR_whnf, check_rule, convertible,
    lpm_check, lpm_infer, rewrite_step,
)
from .pts import (
    COC, LAMBDA_PI, STLC, SYSTEM_F, PtsSpec, beta_equiv, pts_beta_step, pts_check,
    pts_check_context, pts_infer, pts_normalize, pts_whnf, sort, validate_spec,
)
from .syntax import (
    parse_context, parse_judgments, parse_lpm, parse_signature, parse_spec, parse_term,
    print_judgment, print_signature, print_spec, print_term,
)
from .terms import (
    KIND, TYPE, App, Const, Fuel, Lam, Pi, Sort, Term, Var, alpha_eq, app, arrow, shift,
    subst,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_") and name not in {
    "confluence", "embedding", "errors", "kernel", "pts", "syntax", "terms"}]
