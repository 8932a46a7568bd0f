"""Substitution-free syntax and the algorithm that applies rensubs to it.

Atomic rensubs come in two flavours that share constructors: renamings,
whose extensions carry a variable, and substitutions, whose extensions
carry an expression.  A regular rensub is a tuple of atomics applied
head first; a mixed sequence tags every item with its flavour.

Every application function takes the *source* context of the rensub,
which is also the context the result lives in.  Intermediate contexts
are recovered by target inference, so callers never have to supply them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence, Union

from .errors import MttError, ScopeError
from .modes import Cell, Modality, ModeTheory
from .scoping import (
    LockEntry,
    LockTele,
    SCtx,
    ScopeTele,
    VarEntry,
    Verdict,
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
    Suc,
    TrueTm,
    Var,
    VZero,
)
from .wsmtt import _known_cell, _known_modality, key_target

__all__ = [
    "AEmpty",
    "AId",
    "AWeaken",
    "ALock",
    "AKey",
    "AExtend",
    "Atomic",
    "RenSub",
    "MixItem",
    "MixSeq",
    "PI",
    "flavour",
    "pi_tele",
    "aren_lift",
    "asub_lift",
    "atomic_lock",
    "rensub_lift",
    "rensub_lock",
    "mixseq_lift",
    "mixseq_lock",
    "seq_append_tele",
    "mixseq_append_tele",
    "transport_var",
    "aren_var",
    "asub_var",
    "apply_aren_expr",
    "apply_asub_expr",
    "apply_atomic_expr",
    "apply_rensub_expr",
    "apply_mixseq_expr",
    "atomic_target",
    "rensub_target",
    "mixseq_target",
    "check_svar",
    "check_sexpr",
    "check_arensub",
    "check_rensub",
    "check_mixseq",
]


@dataclass(frozen=True, slots=True)
class AEmpty:
    pass


@dataclass(frozen=True, slots=True)
class AId:
    pass


@dataclass(frozen=True, slots=True)
class AWeaken:
    """Precompose with a weakening: source gains one trailing variable."""

    sub: "Atomic"


@dataclass(frozen=True, slots=True)
class ALock:
    sub: "Atomic"
    mu: Modality


@dataclass(frozen=True, slots=True)
class AKey:
    cell: Cell
    theta: LockTele
    psi: LockTele
    base: SCtx


@dataclass(frozen=True, slots=True)
class AExtend:
    sub: "Atomic"
    payload: Union[SVar, Expr]
    mu: Modality


Atomic = Union[AEmpty, AId, AWeaken, ALock, AKey, AExtend]
RenSub = tuple  # tuple[Atomic, ...]; the empty tuple is the identity

PI = AWeaken(AId())


@dataclass(frozen=True, slots=True)
class MixItem:
    kind: Literal["ren", "sub"]
    atom: Atomic


MixSeq = tuple  # tuple[MixItem, ...]


def flavour(a: Atomic) -> str | None:
    """``"ren"`` or ``"sub"`` from the first extension payload, ``None`` if there is none."""
    while True:
        match a:
            case AExtend(_, p, _):
                return "ren" if isinstance(p, (VZero, Suc)) else "sub"
            case AWeaken(inner) | ALock(inner, _):
                a = inner
            case _:
                return None


def pi_tele(mods: Sequence[Modality]) -> Atomic:
    """Weakening pushed under a lock telescope."""
    a: Atomic = PI
    for mu in mods:
        a = ALock(a, mu)
    return a


def _lift(mt: ModeTheory, a: Atomic, mu: Modality, as_sub: bool) -> Atomic:
    v0 = VZero(mt.id_cell(mu))
    return AExtend(AWeaken(a), Var(v0) if as_sub else v0, mu)


def aren_lift(mt: ModeTheory, a: Atomic, mu: Modality) -> Atomic:
    return _lift(mt, a, mu, False)


def asub_lift(mt: ModeTheory, a: Atomic, mu: Modality) -> Atomic:
    return _lift(mt, a, mu, True)


def atomic_lock(a: Atomic, mu: Modality) -> Atomic:
    return ALock(a, mu)


def rensub_lift(mt: ModeTheory, seq: RenSub, mu: Modality, as_sub: bool = True) -> RenSub:
    return tuple(_lift(mt, a, mu, as_sub) for a in seq)


def rensub_lock(seq: RenSub, mu: Modality) -> RenSub:
    return tuple(ALock(a, mu) for a in seq)


def mixseq_lift(mt: ModeTheory, seq: MixSeq, mu: Modality) -> MixSeq:
    return tuple(MixItem(i.kind, _lift(mt, i.atom, mu, i.kind == "sub")) for i in seq)


def mixseq_lock(seq: MixSeq, mu: Modality) -> MixSeq:
    return tuple(MixItem(i.kind, ALock(i.atom, mu)) for i in seq)


def seq_append_tele(mt: ModeTheory, seq: RenSub, tele: ScopeTele | LockTele, as_sub: bool = True) -> RenSub:
    for e in _tele_entries(tele):
        seq = rensub_lift(mt, seq, e.mu, as_sub) if isinstance(e, VarEntry) else rensub_lock(seq, e.mu)
    return seq


def mixseq_append_tele(mt: ModeTheory, seq: MixSeq, tele: ScopeTele | LockTele) -> MixSeq:
    for e in _tele_entries(tele):
        seq = mixseq_lift(mt, seq, e.mu) if isinstance(e, VarEntry) else mixseq_lock(seq, e.mu)
    return seq


def _tele_entries(tele: ScopeTele | LockTele):
    return tele.entries() if isinstance(tele, LockTele) else tele.entries


# variables


def transport_var(mt: ModeTheory, base: SCtx, alpha: Cell, v: SVar) -> SVar:
    """Move ``v`` from ``base ++ theta`` to ``base ++ psi`` along ``alpha : locks theta => locks psi``.

    Only the zero case changes anything: its cell ``beta`` becomes
    ``(1_{locks L} * alpha) . beta`` where ``L`` holds the locks of ``base``
    that sit between the variable's binder and the end of ``base``.
    """
    skip = 0
    w = v
    while isinstance(w, Suc):
        skip += 1
        w = w.var
    seen = 0
    between: list[Modality] = []
    for e in reversed(base.entries):
        if isinstance(e, LockEntry):
            between.append(e.mu)
        elif seen == skip:
            binder_mode = e.mu.cod
            break
        else:
            seen += 1
    else:
        raise ScopeError("variable points past the start of the context", v)
    lam = mt.compose_all(reversed(between), binder_mode)
    out: SVar = VZero(mt.vcomp(mt.hcomp(mt.id_cell(lam), alpha), w.cell))
    for _ in range(skip):
        out = Suc(out)
    return out


def _key_cell(mt: ModeTheory, key: AKey, lam: tuple[Modality, ...]) -> Cell:
    return mt.hcomp(key.cell, mt.id_cell(mt.compose_all(lam, key.theta.inner)))


def aren_var(mt: ModeTheory, src: SCtx, v: SVar, a: Atomic, lam: tuple[Modality, ...] = ()) -> SVar:
    """Rename ``v``, which sits behind the extra locks ``lam`` in the target of ``a``."""
    match a:
        case AId():
            return v
        case AWeaken(inner):
            return Suc(aren_var(mt, src.drop_var(), v, inner, lam))
        case ALock(inner, mu):
            return aren_var(mt, src.drop_lock(mu), v, inner, (mu,) + lam)
        case AKey():
            return transport_var(mt, a.base, _key_cell(mt, a, lam), v)
        case AExtend(inner, w, mu):
            if isinstance(v, VZero):
                if not isinstance(w, (VZero, Suc)):
                    raise ScopeError("renaming extension carries an expression", a)
                return transport_var(mt, src, v.cell, w)
            return aren_var(mt, src, v.var, inner, lam)
        case AEmpty():
            raise ScopeError("the empty context has no variables", v)
    raise TypeError(f"not an atomic rensub: {a!r}")


def asub_var(mt: ModeTheory, src: SCtx, v: SVar, a: Atomic, lam: tuple[Modality, ...] = ()) -> Expr:
    match a:
        case AId():
            return Var(v)
        case AWeaken(inner):
            below = src.drop_var()
            r = asub_var(mt, below, v, inner, lam)
            return apply_aren_expr(mt, src.locks(lam), r, pi_tele(lam))
        case ALock(inner, mu):
            return asub_var(mt, src.drop_lock(mu), v, inner, (mu,) + lam)
        case AKey():
            return Var(transport_var(mt, a.base, _key_cell(mt, a, lam), v))
        case AExtend(inner, t, mu):
            if isinstance(v, VZero):
                if isinstance(t, (VZero, Suc)):
                    raise ScopeError("substitution extension carries a bare variable", a)
                key = AKey(v.cell, LockTele(src.mode, (mu,)), LockTele(src.mode, lam), src)
                return apply_aren_expr(mt, src.locks(lam), t, key)
            return asub_var(mt, src, v.var, inner, lam)
        case AEmpty():
            raise ScopeError("the empty context has no variables", v)
    raise TypeError(f"not an atomic rensub: {a!r}")


# expressions


def _push(mt: ModeTheory, ctx: SCtx, e: Expr, a: Atomic, as_sub: bool) -> Expr:
    match e:
        case Var(v):
            return asub_var(mt, ctx, v, a) if as_sub else Var(aren_var(mt, ctx, v, a))
        case BoolTy() | TrueTm() | FalseTm():
            return e
        case If(mot, s, t, u):
            one = mt.identity(ctx.mode)
            return If(
                _push(mt, ctx.ext(one), mot, _lift(mt, a, one, as_sub), as_sub),
                _push(mt, ctx, s, a, as_sub),
                _push(mt, ctx, t, a, as_sub),
                _push(mt, ctx, u, a, as_sub),
            )
        case Arrow(mu, dom, cod):
            return Arrow(
                mu,
                _push(mt, ctx.lock(mu), dom, ALock(a, mu), as_sub),
                _push(mt, ctx.ext(mu), cod, _lift(mt, a, mu, as_sub), as_sub),
            )
        case Lam(mu, body):
            return Lam(mu, _push(mt, ctx.ext(mu), body, _lift(mt, a, mu, as_sub), as_sub))
        case App(mu, f, t):
            return App(mu, _push(mt, ctx, f, a, as_sub), _push(mt, ctx.lock(mu), t, ALock(a, mu), as_sub))
        case ModTy(mu, t):
            return ModTy(mu, _push(mt, ctx.lock(mu), t, ALock(a, mu), as_sub))
        case ModTm(mu, t):
            return ModTm(mu, _push(mt, ctx.lock(mu), t, ALock(a, mu), as_sub))
        case LetMod(nu, mu, ty, mot, scrut, body):
            numu = mt.compose(nu, mu)
            return LetMod(
                nu,
                mu,
                _push(mt, ctx.lock(nu).lock(mu), ty, ALock(ALock(a, nu), mu), as_sub),
                _push(mt, ctx.ext(nu), mot, _lift(mt, a, nu, as_sub), as_sub),
                _push(mt, ctx.lock(nu), scrut, ALock(a, nu), as_sub),
                _push(mt, ctx.ext(numu), body, _lift(mt, a, numu, as_sub), as_sub),
            )
    raise ScopeError(f"not a substitution-free expression: {type(e).__name__}", e)


def apply_aren_expr(mt: ModeTheory, ctx: SCtx, e: Expr, a: Atomic) -> Expr:
    """Apply an atomic renaming; ``ctx`` is its source."""
    return _push(mt, ctx, e, a, False)


def apply_asub_expr(mt: ModeTheory, ctx: SCtx, e: Expr, a: Atomic) -> Expr:
    """Apply an atomic substitution; ``ctx`` is its source."""
    return _push(mt, ctx, e, a, True)


def apply_atomic_expr(mt: ModeTheory, ctx: SCtx, e: Expr, a: Atomic) -> Expr:
    """Apply ``a`` with the flavour its payloads indicate."""
    return _push(mt, ctx, e, a, flavour(a) == "sub")


def _sources(mt: ModeTheory, src: SCtx, atoms: Sequence[Atomic]) -> list[SCtx]:
    # the last atom maps out of src; each earlier one maps out of its successor's target
    out = []
    ctx = src
    for a in reversed(atoms):
        out.append(ctx)
        ctx = atomic_target(mt, ctx, a, check=False)
    out.reverse()
    return out


def apply_rensub_expr(mt: ModeTheory, ctx: SCtx, e: Expr, seq: RenSub) -> Expr:
    for a, s in zip(seq, _sources(mt, ctx, seq)):
        e = apply_atomic_expr(mt, s, e, a)
    return e


def apply_mixseq_expr(mt: ModeTheory, ctx: SCtx, e: Expr, seq: MixSeq) -> Expr:
    srcs = _sources(mt, ctx, [i.atom for i in seq])
    for i, s in zip(seq, srcs):
        e = _push(mt, s, e, i.atom, i.kind == "sub")
    return e


# scope checking


def atomic_target(mt: ModeTheory, src: SCtx, a: Atomic, check: bool = True, kind: str | None = None) -> SCtx:
    """Infer the target of ``a`` out of ``src``, optionally checking payloads.

    ``kind`` pins the flavour expected of extension payloads.
    """
    match a:
        case AEmpty():
            return SCtx(src.mode)
        case AId():
            return src
        case AWeaken(inner):
            return atomic_target(mt, src.drop_var(), inner, check, kind)
        case ALock(inner, mu):
            _known_modality(mt, mu)
            return atomic_target(mt, src.drop_lock(mu), inner, check, kind).lock(mu)
        case AKey(cell, theta, psi, base):
            return key_target(mt, src, cell, theta, psi, base)
        case AExtend(inner, p, mu):
            _known_modality(mt, mu)
            tgt = atomic_target(mt, src, inner, check, kind)
            if check:
                is_var = isinstance(p, (VZero, Suc))
                if kind is not None and is_var != (kind == "ren"):
                    raise ScopeError(f"extension payload has the wrong flavour for a {kind}", a)
                inner_ctx = src.lock(mu)
                if is_var:
                    _check_var(mt, inner_ctx, p)
                else:
                    _check_sexpr(mt, inner_ctx, p)
            return tgt.ext(mu)
    raise TypeError(f"not an atomic rensub: {a!r}")


def rensub_target(mt: ModeTheory, src: SCtx, seq: RenSub, check: bool = True) -> SCtx:
    ctx = src
    for a in reversed(seq):
        ctx = atomic_target(mt, ctx, a, check)
    return ctx


def mixseq_target(mt: ModeTheory, src: SCtx, seq: MixSeq, check: bool = True) -> SCtx:
    ctx = src
    for i in reversed(seq):
        ctx = atomic_target(mt, ctx, i.atom, check, i.kind)
    return ctx


def _check_var(mt: ModeTheory, ctx: SCtx, v: SVar) -> None:
    skip = 0
    w = v
    while isinstance(w, Suc):
        skip += 1
        w = w.var
    if not isinstance(w, VZero):
        raise ScopeError(f"not a variable: {v!r}", v)
    _known_cell(mt, w.cell)
    seen = 0
    between: list[Modality] = []
    for e in reversed(ctx.entries):
        if isinstance(e, LockEntry):
            between.append(e.mu)
        elif seen == skip:
            binder = e.mu
            break
        else:
            seen += 1
    else:
        raise ScopeError("variable index out of range", v)
    if binder.dom != ctx.mode:
        raise ScopeError(f"binder at {binder.name} is not reachable from mode {ctx.mode}", v)
    lam = mt.compose_all(reversed(between), binder.cod)
    if w.cell.dom != binder or w.cell.cod != lam:
        raise ScopeError(f"cell {w.cell.name} does not go from {binder.name} to {lam.name}", v)


def _check_sexpr(mt: ModeTheory, ctx: SCtx, e: Expr) -> None:
    match e:
        case Var(v):
            _check_var(mt, ctx, v)
        case BoolTy() | TrueTm() | FalseTm():
            pass
        case If(a, s, t, u):
            _check_sexpr(mt, ctx.ext(mt.identity(ctx.mode)), a)
            _check_sexpr(mt, ctx, s)
            _check_sexpr(mt, ctx, t)
            _check_sexpr(mt, ctx, u)
        case Arrow(mu, a, b):
            _known_modality(mt, mu)
            _check_sexpr(mt, ctx.lock(mu), a)
            _check_sexpr(mt, ctx.ext(mu), b)
        case Lam(mu, t):
            _known_modality(mt, mu)
            _check_sexpr(mt, ctx.ext(mu), t)
        case App(mu, f, t):
            _known_modality(mt, mu)
            _check_sexpr(mt, ctx, f)
            _check_sexpr(mt, ctx.lock(mu), t)
        case ModTy(mu, t) | ModTm(mu, t):
            _known_modality(mt, mu)
            _check_sexpr(mt, ctx.lock(mu), t)
        case LetMod(nu, mu, a, b, t, s):
            _known_modality(mt, nu)
            _known_modality(mt, mu)
            _check_sexpr(mt, ctx.lock(nu).lock(mu), a)
            _check_sexpr(mt, ctx.ext(nu), b)
            _check_sexpr(mt, ctx.lock(nu), t)
            _check_sexpr(mt, ctx.ext(mt.compose(nu, mu)), s)
        case _:
            raise ScopeError(f"not a substitution-free expression: {type(e).__name__}", e)


def _verdict(fn, *args) -> Verdict:
    try:
        fn(*args)
    except ScopeError as err:
        return Verdict(False, str(err), err.culprit)
    except MttError as err:
        return Verdict(False, str(err), args[-1])
    return Verdict(True)


def _mode_ok(mode: str | None, *ctxs: SCtx) -> Verdict | None:
    if mode is not None and any(c.mode != mode for c in ctxs):
        return Verdict(False, f"context not at mode {mode}")
    return None


def check_svar(mt: ModeTheory, ctx: SCtx, v: SVar, mode: str | None = None) -> Verdict:
    return _mode_ok(mode, ctx) or _verdict(_check_var, mt, ctx, v)


def check_sexpr(mt: ModeTheory, ctx: SCtx, e: Expr, mode: str | None = None) -> Verdict:
    return _mode_ok(mode, ctx) or _verdict(_check_sexpr, mt, ctx, e)


def _expect_target(got_fn, tgt: SCtx):
    def run(*args):
        got = got_fn(*args)
        if got != tgt:
            raise ScopeError("rensub lands in a different context", got)

    return run


def check_arensub(
    mt: ModeTheory, src: SCtx, a: Atomic, tgt: SCtx, mode: str | None = None, kind: str | None = None
) -> Verdict:
    return _mode_ok(mode, src, tgt) or _verdict(
        _expect_target(lambda *x: atomic_target(mt, src, a, True, kind), tgt), a
    )


def check_rensub(
    mt: ModeTheory, src: SCtx, seq: RenSub, tgt: SCtx, mode: str | None = None, kind: str | None = None
) -> Verdict:
    def run(*_):
        ctx = src
        for a in reversed(seq):
            ctx = atomic_target(mt, ctx, a, True, kind)
        return ctx

    return _mode_ok(mode, src, tgt) or _verdict(_expect_target(run, tgt), seq)


def check_mixseq(mt: ModeTheory, src: SCtx, seq: MixSeq, tgt: SCtx, mode: str | None = None) -> Verdict:
    return _mode_ok(mode, src, tgt) or _verdict(
        _expect_target(lambda *x: mixseq_target(mt, src, seq), tgt), seq
    )
