"""Explicit substitutions and the scope checker for the explicit calculus."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import MttError, ScopeError
from .modes import Cell, Modality, ModeTheory
from .scoping import LockEntry, LockTele, SCtx, VarEntry, Verdict, append_lock_tele
from .terms import (
    App,
    Arrow,
    BoolTy,
    Expr,
    FalseTm,
    If,
    Lam,
    LetMod,
    ModTm,
    ModTy,
    Sub,
    TrueTm,
    Var0,
)

__all__ = [
    "Bang",
    "IdS",
    "Weaken",
    "Compose",
    "LockS",
    "Key",
    "Extend",
    "WSub",
    "check_wexpr",
    "check_wsub",
    "wsub_target",
    "wsub_lift",
    "wsub_lock_tele",
    "wsub_size",
]


@dataclass(frozen=True, slots=True)
class Bang:
    pass


@dataclass(frozen=True, slots=True)
class IdS:
    pass


@dataclass(frozen=True, slots=True)
class Weaken:
    pass


@dataclass(frozen=True, slots=True)
class Compose:
    """``outer . inner``: ``inner`` maps out of the source first."""

    outer: "WSub"
    inner: "WSub"


@dataclass(frozen=True, slots=True)
class LockS:
    sub: "WSub"
    mu: Modality


@dataclass(frozen=True, slots=True)
class Key:
    """Maps ``base ++ psi`` to ``base ++ theta`` along ``cell : locks theta => locks psi``."""

    cell: Cell
    theta: LockTele
    psi: LockTele
    base: SCtx


@dataclass(frozen=True, slots=True)
class Extend:
    sub: "WSub"
    tm: Expr
    mu: Modality


WSub = Union[Bang, IdS, Weaken, Compose, LockS, Key, Extend]


def wsub_lift(sigma: WSub, mu: Modality) -> WSub:
    return Extend(Compose(sigma, Weaken()), Var0(), mu)


def wsub_lock_tele(sigma: WSub, mods: tuple[Modality, ...]) -> WSub:
    for mu in mods:
        sigma = LockS(sigma, mu)
    return sigma


def wsub_size(s: WSub) -> int:
    from .terms import expr_size

    match s:
        case Bang() | IdS() | Weaken() | Key():
            return 1
        case Compose(a, b):
            return 1 + wsub_size(a) + wsub_size(b)
        case LockS(a, _):
            return 1 + wsub_size(a)
        case Extend(a, t, _):
            return 1 + wsub_size(a) + expr_size(t)
    raise TypeError(f"not a substitution: {s!r}")


def _known_modality(mt: ModeTheory, mu: Modality) -> None:
    if mt.modalities.get(mu.name) != mu:
        raise ScopeError(f"modality {mu.name} is not part of the theory", mu)


def _known_cell(mt: ModeTheory, c: Cell) -> None:
    if mt.cells.get(c.name) != c:
        raise ScopeError(f"cell {c.name} is not part of the theory", c)


def key_target(mt: ModeTheory, src: SCtx, cell: Cell, theta: LockTele, psi: LockTele, base: SCtx) -> SCtx:
    """Validate a key's data against its source and return its target."""
    _known_cell(mt, cell)
    if theta.outer != base.mode or psi.outer != base.mode:
        raise ScopeError("key telescopes do not start at the base mode", base)
    if theta.inner != psi.inner:
        raise ScopeError("key telescopes end at different modes", base)
    if append_lock_tele(base, psi) != src:
        raise ScopeError("key source is not its base extended by the second telescope", src)
    lt, lp = mt.compose_all(theta.mods, theta.outer), mt.compose_all(psi.mods, psi.outer)
    if cell.dom != lt or cell.cod != lp:
        raise ScopeError(f"cell {cell.name} does not go from {lt.name} to {lp.name}", cell)
    return append_lock_tele(base, theta)


def wsub_target(mt: ModeTheory, src: SCtx, sigma: WSub, check: bool = True) -> SCtx:
    """Infer the target context of ``sigma`` out of ``src``.

    With ``check`` the extension payloads are scope-checked as well.
    Raises :class:`ScopeError` when no target exists.
    """
    match sigma:
        case Bang():
            return SCtx(src.mode)
        case IdS():
            return src
        case Weaken():
            return src.drop_var()
        case Compose(outer, inner):
            return wsub_target(mt, wsub_target(mt, src, inner, check), outer, check)
        case LockS(inner, mu):
            _known_modality(mt, mu)
            return wsub_target(mt, src.drop_lock(mu), inner, check).lock(mu)
        case Key(cell, theta, psi, base):
            return key_target(mt, src, cell, theta, psi, base)
        case Extend(inner, tm, mu):
            _known_modality(mt, mu)
            tgt = wsub_target(mt, src, inner, check)
            if check:
                _check_expr(mt, src.lock(mu), tm)
            return tgt.ext(mu)
    raise TypeError(f"not a substitution: {sigma!r}")


def _check_expr(mt: ModeTheory, ctx: SCtx, e: Expr) -> None:
    match e:
        case Var0():
            es = ctx.entries
            if len(es) < 2 or not (
                isinstance(es[-1], LockEntry) and isinstance(es[-2], VarEntry) and es[-1].mu == es[-2].mu
            ):
                raise ScopeError("v0 needs a context ending in a variable and a lock at the same modality", e)
        case Sub(body, sigma):
            _check_expr(mt, wsub_target(mt, ctx, sigma), body)
        case BoolTy() | TrueTm() | FalseTm():
            pass
        case If(a, s, t, u):
            _check_expr(mt, ctx.ext(mt.identity(ctx.mode)), a)
            _check_expr(mt, ctx, s)
            _check_expr(mt, ctx, t)
            _check_expr(mt, ctx, u)
        case Arrow(mu, a, b):
            _known_modality(mt, mu)
            _check_expr(mt, ctx.lock(mu), a)
            _check_expr(mt, ctx.ext(mu), b)
        case Lam(mu, t):
            _known_modality(mt, mu)
            _check_expr(mt, ctx.ext(mu), t)
        case App(mu, f, t):
            _known_modality(mt, mu)
            _check_expr(mt, ctx, f)
            _check_expr(mt, ctx.lock(mu), t)
        case ModTy(mu, t) | ModTm(mu, t):
            _known_modality(mt, mu)
            _check_expr(mt, ctx.lock(mu), t)
        case LetMod(nu, mu, a, b, t, s):
            _known_modality(mt, nu)
            _known_modality(mt, mu)
            _check_expr(mt, ctx.lock(nu).lock(mu), a)
            _check_expr(mt, ctx.ext(nu), b)
            _check_expr(mt, ctx.lock(nu), t)
            _check_expr(mt, ctx.ext(mt.compose(nu, mu)), s)
        case _:
            raise ScopeError(f"not an explicit-calculus expression: {type(e).__name__}", e)


def check_wexpr(mt: ModeTheory, ctx: SCtx, e: Expr, mode: str | None = None) -> Verdict:
    if mode is not None and mode != ctx.mode:
        return Verdict(False, f"context is at mode {ctx.mode}, not {mode}", ctx)
    try:
        _check_expr(mt, ctx, e)
    except ScopeError as err:
        return Verdict(False, str(err), err.culprit)
    except MttError as err:
        return Verdict(False, str(err), e)
    return Verdict(True)


def check_wsub(mt: ModeTheory, src: SCtx, sigma: WSub, tgt: SCtx, mode: str | None = None) -> Verdict:
    if mode is not None and (mode != src.mode or mode != tgt.mode):
        return Verdict(False, f"contexts are not both at mode {mode}", sigma)
    try:
        got = wsub_target(mt, src, sigma)
    except ScopeError as err:
        return Verdict(False, str(err), err.culprit)
    except MttError as err:
        return Verdict(False, str(err), sigma)
    if got != tgt:
        return Verdict(False, "substitution lands in a different context", got)
    return Verdict(True)
