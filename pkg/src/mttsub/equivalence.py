"""Deciding equivalence of explicit-calculus terms by translation.

Expressions are equivalent exactly when their translations coincide.
Substitutions only translate to something determined up to observation,
so for them :func:`sub_decide` gives a three-valued answer.
"""

from __future__ import annotations

import dataclasses
import enum

from .bridge import translate_expr, translate_sub
from .errors import ScopeError
from .modes import Cell, Modality, ModeTheory, load_mode_theory
from .scoping import LockTele, SCtx, append_lock_tele, enumerate_lock_teles, enumerate_vars
from .sfmtt import RenSub, apply_rensub_expr, check_rensub, seq_append_tele
from .terms import Expr, SVar, Var
from .wsmtt import WSub, check_wexpr, check_wsub

__all__ = [
    "Decision",
    "sigma_eq_decide",
    "obs_diff",
    "obs_eq_bounded",
    "sub_decide",
    "sub_obs_diff",
    "erase",
    "TRIVIAL",
    "DEFAULT_DEPTH",
]

DEFAULT_DEPTH = 3

# The terminal 2-category: one mode, only identities.
TRIVIAL = load_mode_theory("mode pt\n")
_UNIT = TRIVIAL.identity("pt")
_UNIT_CELL = TRIVIAL.id_cell(_UNIT)


class Decision(enum.Enum):
    EQUIV = "EQUIV"
    DISTINCT = "DISTINCT"
    UNKNOWN = "UNKNOWN"

    def __str__(self) -> str:
        return self.value


def sigma_eq_decide(mt: ModeTheory, ctx: SCtx, t: Expr, s: Expr, mode: str | None = None) -> bool:
    """Decide equivalence of two explicit-calculus expressions in ``ctx``.

    Raises :class:`ScopeError` when either side does not scope-check.
    """
    for side in (t, s):
        v = check_wexpr(mt, ctx, side, mode)
        if not v:
            raise ScopeError(v.reason, v.culprit)
    return translate_expr(mt, ctx, t) == translate_expr(mt, ctx, s)


def _observe(mt: ModeTheory, seq: RenSub, src: SCtx, tele: LockTele, v: SVar) -> Expr:
    return apply_rensub_expr(mt, append_lock_tele(src, tele), Var(v), seq_append_tele(mt, seq, tele))


def obs_diff(
    mt: ModeTheory, sigma: RenSub, tau: RenSub, src: SCtx, tgt: SCtx, depth: int = DEFAULT_DEPTH
) -> tuple[LockTele, SVar, Expr, Expr] | None:
    """First telescope and variable on which the two substitutions disagree, if any."""
    for seq in (sigma, tau):
        v = check_rensub(mt, src, seq, tgt)
        if not v:
            raise ScopeError(v.reason, v.culprit)
    for tele in enumerate_lock_teles(mt, tgt.mode, depth):
        for v in enumerate_vars(mt, append_lock_tele(tgt, tele)):
            a, b = _observe(mt, sigma, src, tele, v), _observe(mt, tau, src, tele, v)
            if a != b:
                return tele, v, a, b
    return None


def obs_eq_bounded(
    mt: ModeTheory,
    sigma: RenSub,
    tau: RenSub,
    src: SCtx,
    tgt: SCtx,
    mode: str | None = None,
    depth: int = DEFAULT_DEPTH,
) -> bool:
    """Compare the images of every variable under every lock telescope up to ``depth``.

    A ``False`` answer is definitive.  ``True`` only means no difference was
    seen within the bound.
    """
    if mode is not None and (src.mode != mode or tgt.mode != mode):
        raise ScopeError(f"contexts are not both at mode {mode}", src)
    return obs_diff(mt, sigma, tau, src, tgt, depth) is None


# Erasure to the trivial theory.  Every modality becomes the unit and every
# cell its identity, which is a strict 2-functor, so equivalent terms stay
# equivalent and a difference seen after erasure is a real difference.


def erase(x):
    match x:
        case Modality():
            return _UNIT
        case Cell():
            return _UNIT_CELL
        case SCtx(_, entries):
            return SCtx("pt", tuple(erase(e) for e in entries))
        case LockTele(_, mods):
            return LockTele("pt", tuple(_UNIT for _ in mods))
        case tuple():
            return tuple(erase(e) for e in x)
        case _ if dataclasses.is_dataclass(x) and not isinstance(x, type):
            kw = {f.name: erase(getattr(x, f.name)) for f in dataclasses.fields(x) if f.init and f.compare}
            return type(x)(**kw)
    return x


def sub_obs_diff(
    mt: ModeTheory, src: SCtx, sigma: WSub, tau: WSub, tgt: SCtx, depth: int = DEFAULT_DEPTH
) -> tuple[str, LockTele, SVar, Expr, Expr] | None:
    """A witness that two substitutions differ, found in ``mt`` or after erasure."""
    got = obs_diff(mt, translate_sub(mt, src, sigma), translate_sub(mt, src, tau), src, tgt, depth)
    if got is not None:
        return ("theory", *got)
    esrc, etgt = erase(src), erase(tgt)
    es, et = erase(sigma), erase(tau)
    got = obs_diff(TRIVIAL, translate_sub(TRIVIAL, esrc, es), translate_sub(TRIVIAL, esrc, et), esrc, etgt, depth)
    if got is not None:
        return ("erased", *got)
    return None


def sub_decide(
    mt: ModeTheory, src: SCtx, sigma: WSub, tau: WSub, tgt: SCtx, depth: int = DEFAULT_DEPTH
) -> Decision:
    """Three-valued comparison of two explicit substitutions ``src -> tgt``.

    Equal translations mean equivalent.  A variable image that differs,
    either in ``mt`` or once every modality is erased to the unit, means
    distinct.  Anything else is reported as unknown.
    """
    for side in (sigma, tau):
        v = check_wsub(mt, src, side, tgt)
        if not v:
            raise ScopeError(v.reason, v.culprit)
    if translate_sub(mt, src, sigma) == translate_sub(mt, src, tau):
        return Decision.EQUIV
    if sub_obs_diff(mt, src, sigma, tau, tgt, depth) is not None:
        return Decision.DISTINCT
    return Decision.UNKNOWN
