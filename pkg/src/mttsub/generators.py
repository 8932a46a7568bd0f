"""Seeded random generation of well-scoped syntax.

Every generator is driven by a :class:`random.Random` owned by a
:class:`Gen`, so a seed fixes the whole stream.  Size budgets are upper
bounds on :func:`expr_size` / :func:`wsub_size`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .bridge import embed_var
from .errors import GenerationExhausted
from .modes import Cell, Modality, ModeTheory
from .scoping import (
    LockEntry,
    LockTele,
    SCtx,
    ScopeTele,
    VarEntry,
    append_lock_tele,
    enumerate_lock_teles,
    enumerate_vars,
)
from .sfmtt import AEmpty, AExtend, AId, AKey, ALock, AWeaken, Atomic, MixItem
from .terms import (
    BOOL,
    FALSE,
    TRUE,
    App,
    Arrow,
    Expr,
    If,
    Lam,
    LetMod,
    ModTm,
    ModTy,
    Sub,
    SVar,
    Var,
    Var0,
    expr_size,
)
from .wsmtt import Bang, Compose, Extend, IdS, Key, LockS, Weaken, WSub

__all__ = ["GenConfig", "Gen", "gen_wexpr", "gen_wsub"]


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    max_size: int = 8
    max_depth: int = 2
    count: int = 100
    max_ctx: int = 4

    def __post_init__(self) -> None:
        if min(self.max_size, self.max_depth, self.count, self.max_ctx) < 0:
            raise ValueError("generator bounds must be non-negative")


_LEAVES = (BOOL, TRUE, FALSE)


class Gen:
    def __init__(self, mt: ModeTheory, cfg: GenConfig = GenConfig(), rng: random.Random | None = None):
        self.mt = mt
        self.cfg = cfg
        self.rng = rng if rng is not None else random.Random(cfg.seed)
        self._teles: dict[tuple[str, int], list[LockTele]] = {}
        self._sources: dict[tuple[str, tuple[Modality, ...], int], list[tuple[LockTele, Cell]]] = {}

    # small helpers

    def pick(self, xs):
        return xs[self.rng.randrange(len(xs))]

    def split(self, n: int, parts: int) -> list[int]:
        """Split ``n`` into ``parts`` non-negative integers."""
        cuts = sorted(self.rng.randint(0, n) for _ in range(parts - 1))
        return [b - a for a, b in zip([0] + cuts, cuts + [n])]

    def teles(self, mode: str, depth: int | None = None) -> list[LockTele]:
        depth = self.cfg.max_depth if depth is None else depth
        key = (mode, depth)
        if key not in self._teles:
            self._teles[key] = enumerate_lock_teles(self.mt, mode, depth)
        return self._teles[key]

    def key_sources(self, psi: LockTele, depth: int | None = None) -> list[tuple[LockTele, Cell]]:
        """Telescopes ``theta`` with a cell ``locks theta => locks psi``."""
        depth = self.cfg.max_depth if depth is None else depth
        key = (psi.outer, psi.mods, depth)
        if key not in self._sources:
            lp = self.mt.compose_all(psi.mods, psi.outer)
            out = []
            for theta in self.teles(psi.outer, depth):
                if theta.inner != psi.inner:
                    continue
                lt = self.mt.compose_all(theta.mods, theta.outer)
                out.extend((theta, c) for c in self.mt.cells_between(lt, lp))
            self._sources[key] = out
        return self._sources[key]

    def lock_suffix(self, ctx: SCtx) -> tuple[SCtx, LockTele]:
        """Split ``ctx`` as ``base ++ psi`` with ``psi`` a random suffix of its trailing locks."""
        trail = ctx.trailing_locks()
        k = self.rng.randint(0, len(trail))
        psi = trail[len(trail) - k :]
        base = ctx.strip_locks(psi)
        return base, LockTele(base.mode, psi)

    def modality_into(self, mode: str) -> Modality:
        return self.pick(self.mt.modalities_into(mode))

    # contexts and telescopes

    def ctx(self, root: str | None = None, max_len: int | None = None) -> SCtx:
        root = root if root is not None else self.pick(self.mt.modes)
        n = self.rng.randint(0, self.cfg.max_ctx if max_len is None else max_len)
        ctx = SCtx(root)
        for _ in range(n):
            mu = self.modality_into(ctx.mode)
            ctx = ctx.ext(mu) if self.rng.random() < 0.6 else ctx.lock(mu)
        return ctx

    def lock_tele(self, mode: str, max_len: int | None = None) -> LockTele:
        return self.pick(self.teles(mode, max_len))

    def scope_tele(self, mode: str, max_len: int | None = None) -> ScopeTele:
        n = self.rng.randint(0, self.cfg.max_depth if max_len is None else max_len)
        entries = []
        cur = mode
        for _ in range(n):
            mu = self.modality_into(cur)
            if self.rng.random() < 0.5:
                entries.append(VarEntry(mu))
            else:
                entries.append(LockEntry(mu))
                cur = mu.dom
        return ScopeTele(mode, tuple(entries))

    # explicit calculus

    def wexpr(self, ctx: SCtx, size: int | None = None) -> Expr:
        size = self.cfg.max_size if size is None else size
        opts = ["leaf"]
        es = ctx.entries
        if len(es) >= 2 and isinstance(es[-1], LockEntry) and es[-2] == VarEntry(es[-1].mu):
            opts.append("v0")
        if size >= 3 and enumerate_vars(self.mt, ctx):
            opts += ["var"] * 3
        if size >= 2:
            opts += ["lam", "modty", "mod"]
        if size >= 3:
            opts += ["app", "arr", "sub", "sub"]
        if size >= 5:
            opts += ["if", "letmod"]
        while True:
            e = self._wexpr_node(ctx, size, self.pick(opts))
            if e is not None:
                return e

    def _wexpr_node(self, ctx: SCtx, size: int, kind: str) -> Expr | None:
        mt = self.mt
        match kind:
            case "leaf":
                return self.pick(_LEAVES)
            case "v0":
                return Var0()
            case "var":
                e = embed_var(mt, ctx, self.pick(enumerate_vars(mt, ctx)))
                return e if expr_size(e) <= size else None
            case "lam":
                mu = self.modality_into(ctx.mode)
                return Lam(mu, self.wexpr(ctx.ext(mu), size - 1))
            case "modty" | "mod":
                mu = self.modality_into(ctx.mode)
                body = self.wexpr(ctx.lock(mu), size - 1)
                return ModTy(mu, body) if kind == "modty" else ModTm(mu, body)
            case "app" | "arr":
                mu = self.modality_into(ctx.mode)
                a, b = self.split(size - 3, 2)
                if kind == "app":
                    return App(mu, self.wexpr(ctx, a + 1), self.wexpr(ctx.lock(mu), b + 1))
                return Arrow(mu, self.wexpr(ctx.lock(mu), a + 1), self.wexpr(ctx.ext(mu), b + 1))
            case "sub":
                sigma, tgt = self.wsub(ctx, self.rng.randint(1, max(1, min(4, size - 2))))
                return Sub(self.wexpr(tgt, size - 2), sigma)
            case "if":
                a, b, c, d = self.split(size - 5, 4)
                return If(
                    self.wexpr(ctx.ext(mt.identity(ctx.mode)), a + 1),
                    self.wexpr(ctx, b + 1),
                    self.wexpr(ctx, c + 1),
                    self.wexpr(ctx, d + 1),
                )
            case "letmod":
                nu = self.modality_into(ctx.mode)
                mu = self.modality_into(nu.dom)
                a, b, c, d = self.split(size - 5, 4)
                return LetMod(
                    nu,
                    mu,
                    self.wexpr(ctx.lock(nu).lock(mu), a + 1),
                    self.wexpr(ctx.ext(nu), b + 1),
                    self.wexpr(ctx.lock(nu), c + 1),
                    self.wexpr(ctx.ext(mt.compose(nu, mu)), d + 1),
                )
        raise ValueError(kind)

    def key(self, src: SCtx) -> tuple[Key, SCtx] | None:
        base, psi = self.lock_suffix(src)
        srcs = self.key_sources(psi)
        if not srcs:
            return None
        theta, cell = self.pick(srcs)
        return Key(cell, theta, psi, base), append_lock_tele(base, theta)

    def wsub(self, src: SCtx, size: int | None = None) -> tuple[WSub, SCtx]:
        """A random substitution out of ``src`` together with its target."""
        size = self.cfg.max_size if size is None else size
        opts = ["id", "bang", "key"]
        if src.entries and isinstance(src.entries[-1], VarEntry):
            opts += ["pi", "pi"]
        if size >= 2:
            opts += ["ext", "ext", "comp"]
            if src.entries and isinstance(src.entries[-1], LockEntry):
                opts += ["lock", "lock"]
        while True:
            got = self._wsub_node(src, size, self.pick(opts))
            if got is not None:
                return got

    def _wsub_node(self, src: SCtx, size: int, kind: str) -> tuple[WSub, SCtx] | None:
        match kind:
            case "id":
                return IdS(), src
            case "bang":
                return Bang(), SCtx(src.mode)
            case "pi":
                return Weaken(), src.drop_var()
            case "key":
                return self.key(src)
            case "lock":
                mu = src.entries[-1].mu
                inner, tgt = self.wsub(src.drop_lock(mu), size - 1)
                return LockS(inner, mu), tgt.lock(mu)
            case "comp":
                a, b = self.split(size - 1, 2)
                inner, mid = self.wsub(src, max(1, a))
                outer, tgt = self.wsub(mid, max(1, b))
                return Compose(outer, inner), tgt
            case "ext":
                a, b = self.split(size - 1, 2)
                inner, tgt = self.wsub(src, max(1, a))
                mu = self.modality_into(tgt.mode)
                return Extend(inner, self.wexpr(src.lock(mu), max(1, b)), mu), tgt.ext(mu)
        raise ValueError(kind)

    def wsub_shaped(self, src: SCtx, want, size: int | None = None, tries: int = 100) -> tuple[WSub, SCtx]:
        """Retry :meth:`wsub` until the target satisfies ``want``."""
        for _ in range(tries):
            sigma, tgt = self.wsub(src, size)
            if want(tgt):
                return sigma, tgt
        raise GenerationExhausted("no substitution with the requested target shape")

    # substitution-free calculus

    def svar(self, ctx: SCtx) -> SVar | None:
        vs = enumerate_vars(self.mt, ctx)
        return self.pick(vs) if vs else None

    def sexpr(self, ctx: SCtx, size: int | None = None) -> Expr:
        size = self.cfg.max_size if size is None else size
        vs = enumerate_vars(self.mt, ctx)
        opts = ["leaf"] + ["var"] * (3 if vs else 0)
        if size >= 2:
            opts += ["lam", "modty", "mod"]
        if size >= 3:
            opts += ["app", "arr"]
        if size >= 5:
            opts += ["if", "letmod"]
        kind = self.pick(opts)
        mt = self.mt
        match kind:
            case "leaf":
                return self.pick(_LEAVES)
            case "var":
                return Var(self.pick(vs))
            case "lam":
                mu = self.modality_into(ctx.mode)
                return Lam(mu, self.sexpr(ctx.ext(mu), size - 1))
            case "modty" | "mod":
                mu = self.modality_into(ctx.mode)
                body = self.sexpr(ctx.lock(mu), size - 1)
                return ModTy(mu, body) if kind == "modty" else ModTm(mu, body)
            case "app" | "arr":
                mu = self.modality_into(ctx.mode)
                a, b = self.split(size - 3, 2)
                if kind == "app":
                    return App(mu, self.sexpr(ctx, a + 1), self.sexpr(ctx.lock(mu), b + 1))
                return Arrow(mu, self.sexpr(ctx.lock(mu), a + 1), self.sexpr(ctx.ext(mu), b + 1))
            case "if":
                a, b, c, d = self.split(size - 5, 4)
                return If(
                    self.sexpr(ctx.ext(mt.identity(ctx.mode)), a + 1),
                    self.sexpr(ctx, b + 1),
                    self.sexpr(ctx, c + 1),
                    self.sexpr(ctx, d + 1),
                )
            case _:
                nu = self.modality_into(ctx.mode)
                mu = self.modality_into(nu.dom)
                a, b, c, d = self.split(size - 5, 4)
                return LetMod(
                    nu,
                    mu,
                    self.sexpr(ctx.lock(nu).lock(mu), a + 1),
                    self.sexpr(ctx.ext(nu), b + 1),
                    self.sexpr(ctx.lock(nu), c + 1),
                    self.sexpr(ctx.ext(mt.compose(nu, mu)), d + 1),
                )

    def akey(self, src: SCtx) -> tuple[AKey, SCtx] | None:
        got = self.key(src)
        if got is None:
            return None
        k, tgt = got
        return AKey(k.cell, k.theta, k.psi, k.base), tgt

    def atomic(self, src: SCtx, kind: str = "sub", depth: int = 3) -> tuple[Atomic, SCtx]:
        """A random atomic rensub of flavour ``kind`` out of ``src``."""
        opts = ["id", "key"] + (["empty"] if depth <= 1 else [])
        if depth > 0:
            if src.entries and isinstance(src.entries[-1], VarEntry):
                opts += ["wk", "wk"]
            if src.entries and isinstance(src.entries[-1], LockEntry):
                opts += ["lock", "lock"]
            opts += ["ext", "ext"]
        while True:
            got = self._atomic_node(src, kind, depth, self.pick(opts))
            if got is not None:
                return got

    def _atomic_node(self, src: SCtx, kind: str, depth: int, choice: str) -> tuple[Atomic, SCtx] | None:
        match choice:
            case "id":
                return AId(), src
            case "empty":
                return AEmpty(), SCtx(src.mode)
            case "key":
                return self.akey(src)
            case "wk":
                inner, tgt = self.atomic(src.drop_var(), kind, depth - 1)
                return AWeaken(inner), tgt
            case "lock":
                mu = src.entries[-1].mu
                inner, tgt = self.atomic(src.drop_lock(mu), kind, depth - 1)
                return ALock(inner, mu), tgt.lock(mu)
            case "ext":
                inner, tgt = self.atomic(src, kind, depth - 1)
                mu = self.modality_into(tgt.mode)
                where = src.lock(mu)
                if kind == "ren":
                    v = self.svar(where)
                    if v is None:
                        return None
                    return AExtend(inner, v, mu), tgt.ext(mu)
                return AExtend(inner, self.sexpr(where, self.rng.randint(1, 4)), mu), tgt.ext(mu)
        raise ValueError(choice)

    def rensub(self, src: SCtx, length: int, kind: str = "sub") -> tuple[tuple[Atomic, ...], SCtx]:
        atoms: list[Atomic] = []
        ctx = src
        for _ in range(length):
            a, ctx = self.atomic(ctx, kind)
            atoms.append(a)
        atoms.reverse()
        return tuple(atoms), ctx

    def mixseq(self, src: SCtx, length: int) -> tuple[tuple[MixItem, ...], SCtx]:
        items: list[MixItem] = []
        ctx = src
        for _ in range(length):
            kind = self.pick(("ren", "sub"))
            a, ctx = self.atomic(ctx, kind)
            items.append(MixItem(kind, a))
        items.reverse()
        return tuple(items), ctx


def gen_wexpr(mt: ModeTheory, ctx: SCtx, cfg: GenConfig = GenConfig(), rng: random.Random | None = None) -> Expr:
    return Gen(mt, cfg, rng).wexpr(ctx)


def gen_wsub(
    mt: ModeTheory,
    src: SCtx,
    tgt: SCtx | None = None,
    cfg: GenConfig = GenConfig(),
    rng: random.Random | None = None,
) -> tuple[WSub, SCtx]:
    g = Gen(mt, cfg, rng)
    if tgt is None:
        return g.wsub(src)
    return g.wsub_shaped(src, lambda t: t == tgt)
