"""A naive De Bruijn reference for the trivial mode theory.

Written from scratch with its own shifting, lookup and substitution
vectors, sharing nothing with the substitution-free machinery, so it can
serve as a check on it.  In the trivial theory every variable carries the
identity cell of the unit modality and locks are invisible, so a variable
is just an index and a substitution is a list of terms.
"""

from __future__ import annotations

from collections.abc import Sequence

from .modes import ModeTheory
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
    Suc,
    TrueTm,
    Var,
    Var0,
    VZero,
)
from .wsmtt import Bang, Compose, Extend, IdS, Key, LockS, Weaken, WSub

__all__ = ["oracle_subst_trivial", "oracle_shift", "oracle_plain", "oracle_vector", "plain_var"]


def _split(v) -> tuple[int, VZero]:
    n = 0
    while isinstance(v, Suc):
        v, n = v.var, n + 1
    return n, v


def _with_index(zero: VZero, i: int):
    v = zero
    for _ in range(i):
        v = Suc(v)
    return v


def plain_var(mt: ModeTheory, index: int) -> Var:
    """Variable ``index`` of a trivial theory."""
    (mode,) = mt.modes
    return Var(_with_index(VZero(mt.id_cell(mt.identity(mode))), index))


def _walk(e: Expr, on_var, depth: int = 0) -> Expr:
    """Rebuild ``e`` with ``on_var(index, zero, depth)`` at each variable."""
    match e:
        case Var(v):
            i, zero = _split(v)
            return on_var(i, zero, depth)
        case BoolTy() | TrueTm() | FalseTm():
            return e
        case If(a, s, t, u):
            return If(_walk(a, on_var, depth + 1), _walk(s, on_var, depth), _walk(t, on_var, depth), _walk(u, on_var, depth))
        case Arrow(mu, a, b):
            return Arrow(mu, _walk(a, on_var, depth), _walk(b, on_var, depth + 1))
        case Lam(mu, t):
            return Lam(mu, _walk(t, on_var, depth + 1))
        case App(mu, f, t):
            return App(mu, _walk(f, on_var, depth), _walk(t, on_var, depth))
        case ModTy(mu, t):
            return ModTy(mu, _walk(t, on_var, depth))
        case ModTm(mu, t):
            return ModTm(mu, _walk(t, on_var, depth))
        case LetMod(nu, mu, a, b, s, t):
            return LetMod(
                nu,
                mu,
                _walk(a, on_var, depth),
                _walk(b, on_var, depth + 1),
                _walk(s, on_var, depth),
                _walk(t, on_var, depth + 1),
            )
    raise TypeError(f"not a plain De Bruijn expression: {type(e).__name__}")


def oracle_shift(e: Expr, by: int, cutoff: int = 0) -> Expr:
    """Add ``by`` to every variable of ``e`` that is free above ``cutoff`` binders."""

    def on_var(i, zero, depth):
        return Var(_with_index(zero, i + by if i >= cutoff + depth else i))

    return _walk(e, on_var)


def oracle_subst_trivial(e: Expr, payloads: Sequence[Expr]) -> Expr:
    """Replace free variable ``i`` of ``e`` by ``payloads[i]``, simultaneously.

    Raises :class:`IndexError` for a free variable without a payload.
    """

    def on_var(i, zero, depth):
        if i < depth:
            return Var(_with_index(zero, i))
        if i - depth >= len(payloads):
            raise IndexError(f"variable {i - depth} has no payload (only {len(payloads)})")
        return oracle_shift(payloads[i - depth], depth)

    return _walk(e, on_var)


def oracle_plain(mt: ModeTheory, n: int, t: Expr) -> Expr:
    """Compute away explicit substitutions of ``t`` over ``n`` variables."""
    match t:
        case Var0():
            return plain_var(mt, 0)
        case Sub(body, sigma):
            vec = oracle_vector(mt, n, sigma)
            return oracle_subst_trivial(oracle_plain(mt, len(vec), body), vec)
        case BoolTy() | TrueTm() | FalseTm():
            return t
        case If(a, s, u, w):
            return If(oracle_plain(mt, n + 1, a), oracle_plain(mt, n, s), oracle_plain(mt, n, u), oracle_plain(mt, n, w))
        case Arrow(mu, a, b):
            return Arrow(mu, oracle_plain(mt, n, a), oracle_plain(mt, n + 1, b))
        case Lam(mu, b):
            return Lam(mu, oracle_plain(mt, n + 1, b))
        case App(mu, f, a):
            return App(mu, oracle_plain(mt, n, f), oracle_plain(mt, n, a))
        case ModTy(mu, a):
            return ModTy(mu, oracle_plain(mt, n, a))
        case ModTm(mu, a):
            return ModTm(mu, oracle_plain(mt, n, a))
        case LetMod(nu, mu, a, b, s, body):
            return LetMod(
                nu, mu, oracle_plain(mt, n, a), oracle_plain(mt, n + 1, b), oracle_plain(mt, n, s), oracle_plain(mt, n + 1, body)
            )
    raise TypeError(f"not an explicit-calculus expression: {type(t).__name__}")


def oracle_vector(mt: ModeTheory, n: int, sigma: WSub) -> list[Expr]:
    """The images of the target's variables, innermost first, over ``n`` source variables."""
    match sigma:
        case IdS() | Key():
            return [plain_var(mt, i) for i in range(n)]
        case Bang():
            return []
        case Weaken():
            return [plain_var(mt, i + 1) for i in range(n - 1)]
        case LockS(inner, _):
            return oracle_vector(mt, n, inner)
        case Compose(outer, inner):
            first = oracle_vector(mt, n, inner)
            return [oracle_subst_trivial(p, first) for p in oracle_vector(mt, len(first), outer)]
        case Extend(inner, t, _):
            return [oracle_plain(mt, n, t)] + oracle_vector(mt, n, inner)
    raise TypeError(f"not a substitution: {sigma!r}")
