"""Explicit and substitution-free syntax for multimode type theory over finite mode theories."""

from .bridge import embed_atomic, embed_expr, embed_rensub, embed_var, translate_expr, translate_sub
from .equivalence import Decision, obs_eq_bounded, sigma_eq_decide, sub_decide
from .errors import GenerationExhausted, ModeTheoryError, MttError, ScopeError, SyntaxParseError
from .generators import Gen, GenConfig, gen_wexpr, gen_wsub
from .modes import Cell, Modality, ModeTheory, dump_mode_theory, load_mode_theory, load_mode_theory_file, validate_laws
from .oracle import oracle_subst_trivial
from .rules import Instance, RuleId, instance_holds, sigma_axiom_instance
from .scoping import LockEntry, LockTele, SCtx, ScopeTele, VarEntry, locks_of
from .sexpr import format_expr, format_sub, parse_ctx, parse_expr, parse_sexpr, parse_sub

__all__ = [
    "Cell",
    "Decision",
    "Gen",
    "GenConfig",
    "GenerationExhausted",
    "Instance",
    "LockEntry",
    "LockTele",
    "Modality",
    "ModeTheory",
    "ModeTheoryError",
    "MttError",
    "RuleId",
    "SCtx",
    "ScopeError",
    "ScopeTele",
    "SyntaxParseError",
    "VarEntry",
    "dump_mode_theory",
    "embed_atomic",
    "embed_expr",
    "embed_rensub",
    "embed_var",
    "format_expr",
    "format_sub",
    "gen_wexpr",
    "gen_wsub",
    "instance_holds",
    "load_mode_theory",
    "load_mode_theory_file",
    "locks_of",
    "obs_eq_bounded",
    "oracle_subst_trivial",
    "parse_ctx",
    "parse_expr",
    "parse_sexpr",
    "parse_sub",
    "sigma_axiom_instance",
    "sigma_eq_decide",
    "sub_decide",
    "translate_expr",
    "translate_sub",
    "validate_laws",
]
