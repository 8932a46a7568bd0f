"""Translation from the explicit calculus into the substitution-free one, and back."""

from __future__ import annotations

from .errors import ScopeError
from .modes import ModeTheory
from .scoping import LockEntry, LockTele, SCtx, VarEntry
from .sfmtt import (
    AEmpty,
    AExtend,
    AId,
    AKey,
    ALock,
    AWeaken,
    Atomic,
    PI,
    RenSub,
    apply_rensub_expr,
    atomic_target,
    rensub_lift,
    rensub_lock,
)
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
    SVar,
    Sub,
    Suc,
    TrueTm,
    Var,
    Var0,
    VZero,
)
from .wsmtt import Bang, Compose, Extend, IdS, Key, LockS, Weaken, WSub, wsub_target

__all__ = [
    "translate_expr",
    "translate_sub",
    "embed_expr",
    "embed_var",
    "embed_atomic",
    "embed_rensub",
]


def translate_expr(mt: ModeTheory, ctx: SCtx, t: Expr) -> Expr:
    match t:
        case Var0():
            es = ctx.entries
            if len(es) < 2 or not isinstance(es[-1], LockEntry) or es[-2] != VarEntry(es[-1].mu):
                raise ScopeError("v0 outside a context ending in a variable and its lock", t)
            return Var(VZero(mt.id_cell(es[-1].mu)))
        case Sub(body, sigma):
            tgt = wsub_target(mt, ctx, sigma, check=False)
            return apply_rensub_expr(mt, ctx, translate_expr(mt, tgt, body), translate_sub(mt, ctx, sigma))
        case BoolTy() | TrueTm() | FalseTm():
            return t
        case If(a, s, u, w):
            return If(
                translate_expr(mt, ctx.ext(mt.identity(ctx.mode)), a),
                translate_expr(mt, ctx, s),
                translate_expr(mt, ctx, u),
                translate_expr(mt, ctx, w),
            )
        case Arrow(mu, a, b):
            return Arrow(mu, translate_expr(mt, ctx.lock(mu), a), translate_expr(mt, ctx.ext(mu), b))
        case Lam(mu, body):
            return Lam(mu, translate_expr(mt, ctx.ext(mu), body))
        case App(mu, f, a):
            return App(mu, translate_expr(mt, ctx, f), translate_expr(mt, ctx.lock(mu), a))
        case ModTy(mu, a):
            return ModTy(mu, translate_expr(mt, ctx.lock(mu), a))
        case ModTm(mu, a):
            return ModTm(mu, translate_expr(mt, ctx.lock(mu), a))
        case LetMod(nu, mu, a, b, s, body):
            return LetMod(
                nu,
                mu,
                translate_expr(mt, ctx.lock(nu).lock(mu), a),
                translate_expr(mt, ctx.ext(nu), b),
                translate_expr(mt, ctx.lock(nu), s),
                translate_expr(mt, ctx.ext(mt.compose(nu, mu)), body),
            )
    raise ScopeError(f"not an explicit-calculus expression: {type(t).__name__}", t)


def translate_sub(mt: ModeTheory, src: SCtx, sigma: WSub) -> RenSub:
    """Translate ``sigma`` out of ``src`` into a regular substitution."""
    match sigma:
        case IdS():
            return ()
        case Bang():
            return (AEmpty(),)
        case Weaken():
            return (PI,)
        case Compose(outer, inner):
            mid = wsub_target(mt, src, inner, check=False)
            return translate_sub(mt, mid, outer) + translate_sub(mt, src, inner)
        case LockS(inner, mu):
            return rensub_lock(translate_sub(mt, src.drop_lock(mu), inner), mu)
        case Key(cell, theta, psi, base):
            return (AKey(cell, theta, psi, base),)
        case Extend(inner, t, mu):
            head = rensub_lift(mt, translate_sub(mt, src, inner), mu)
            return head + (AExtend(AId(), translate_expr(mt, src.lock(mu), t), mu),)
    raise TypeError(f"not a substitution: {sigma!r}")


def embed_var(mt: ModeTheory, ctx: SCtx, v: SVar) -> Expr:
    """Spell a variable with ``v0``, keys and weakenings."""
    theta = ctx.trailing_locks()
    below = ctx.strip_locks(theta)
    if not below.entries:
        raise ScopeError("variable index out of range", v)
    match v:
        case VZero(cell):
            mu = below.entries[-1].mu
            key = Key(cell, LockTele(below.mode, (mu,)), LockTele(below.mode, theta), below)
            return Sub(Var0(), key)
        case Suc(w):
            pi = Weaken()
            for lam in theta:
                pi = LockS(pi, lam)
            return Sub(embed_var(mt, below.drop_var().locks(theta), w), pi)
    raise TypeError(f"not a variable: {v!r}")


def embed_expr(mt: ModeTheory, ctx: SCtx, e: Expr) -> Expr:
    match e:
        case Var(v):
            return embed_var(mt, ctx, v)
        case BoolTy() | TrueTm() | FalseTm():
            return e
        case If(a, s, u, w):
            return If(
                embed_expr(mt, ctx.ext(mt.identity(ctx.mode)), a),
                embed_expr(mt, ctx, s),
                embed_expr(mt, ctx, u),
                embed_expr(mt, ctx, w),
            )
        case Arrow(mu, a, b):
            return Arrow(mu, embed_expr(mt, ctx.lock(mu), a), embed_expr(mt, ctx.ext(mu), b))
        case Lam(mu, body):
            return Lam(mu, embed_expr(mt, ctx.ext(mu), body))
        case App(mu, f, a):
            return App(mu, embed_expr(mt, ctx, f), embed_expr(mt, ctx.lock(mu), a))
        case ModTy(mu, a):
            return ModTy(mu, embed_expr(mt, ctx.lock(mu), a))
        case ModTm(mu, a):
            return ModTm(mu, embed_expr(mt, ctx.lock(mu), a))
        case LetMod(nu, mu, a, b, s, body):
            return LetMod(
                nu,
                mu,
                embed_expr(mt, ctx.lock(nu).lock(mu), a),
                embed_expr(mt, ctx.ext(nu), b),
                embed_expr(mt, ctx.lock(nu), s),
                embed_expr(mt, ctx.ext(mt.compose(nu, mu)), body),
            )
    raise ScopeError(f"not a substitution-free expression: {type(e).__name__}", e)


def embed_atomic(mt: ModeTheory, src: SCtx, a: Atomic) -> WSub:
    match a:
        case AEmpty():
            return Bang()
        case AId():
            return IdS()
        case AWeaken(inner):
            return Compose(embed_atomic(mt, src.drop_var(), inner), Weaken())
        case ALock(inner, mu):
            return LockS(embed_atomic(mt, src.drop_lock(mu), inner), mu)
        case AKey(cell, theta, psi, base):
            return Key(cell, theta, psi, base)
        case AExtend(inner, p, mu):
            payload = p if not isinstance(p, (VZero, Suc)) else Var(p)
            return Extend(embed_atomic(mt, src, inner), embed_expr(mt, src.lock(mu), payload), mu)
    raise TypeError(f"not an atomic rensub: {a!r}")


def embed_rensub(mt: ModeTheory, src: SCtx, seq: RenSub) -> WSub:
    """``[]`` becomes ``id`` and ``seq ++ [a]`` becomes ``embed(seq) . embed(a)``."""
    if not seq:
        return IdS()
    *init, last = seq
    mid = atomic_target(mt, src, last, check=False)
    return Compose(embed_rensub(mt, mid, tuple(init)), embed_atomic(mt, src, last))
