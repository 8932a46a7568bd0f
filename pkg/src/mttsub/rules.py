"""Random instances of every equivalence rule of the explicit calculus.

Each rule has a generator producing both sides in a common context.
Substitution rules also report the shared target.  Generators signal an
unsatisfiable draw (say, a theory without a suitable cell) by returning
``None``; :func:`sigma_axiom_instance` retries and eventually gives up
with :class:`GenerationExhausted`.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass

from .bridge import embed_expr, embed_rensub, translate_expr, translate_sub
from .equivalence import DEFAULT_DEPTH, obs_eq_bounded, sigma_eq_decide
from .errors import GenerationExhausted, ScopeError
from .generators import Gen, GenConfig
from .modes import ModeTheory
from .scoping import LockTele, SCtx, VarEntry, append_lock_tele
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
    Var0,
)
from .wsmtt import Bang, Compose, Extend, IdS, Key, LockS, Weaken, WSub, check_wexpr, check_wsub, wsub_lift, wsub_lock_tele

__all__ = ["RuleId", "Instance", "sigma_axiom_instance", "instance_holds", "RETRY_BUDGET"]

RETRY_BUDGET = 100


class RuleId(enum.Enum):
    # equivalence relation
    EXPR_REFL = "expr-refl"
    EXPR_SYM = "expr-sym"
    EXPR_TRANS = "expr-trans"
    SUB_REFL = "sub-refl"
    SUB_SYM = "sub-sym"
    SUB_TRANS = "sub-trans"
    # category of contexts and substitutions
    SUB_ID_LEFT = "sub-id-left"
    SUB_ID_RIGHT = "sub-id-right"
    SUB_ASSOC = "sub-assoc"
    # functoriality of explicit substitution
    EXPR_SUB_ID = "expr-sub-id"
    EXPR_SUB_COMPOSE = "expr-sub-compose"
    # congruence
    EXPR_CONG_SUB = "expr-cong-sub"
    EXPR_CONG_LAM = "expr-cong-lam"
    EXPR_CONG_APP = "expr-cong-app"
    EXPR_CONG_ARROW = "expr-cong-arrow"
    EXPR_CONG_IF = "expr-cong-if"
    EXPR_CONG_MODTY = "expr-cong-modty"
    EXPR_CONG_MODTM = "expr-cong-modtm"
    EXPR_CONG_LETMOD = "expr-cong-letmod"
    SUB_CONG_COMPOSE = "sub-cong-compose"
    SUB_CONG_EXTEND = "sub-cong-extend"
    SUB_CONG_LOCK = "sub-cong-lock"
    # pushing a substitution through a constructor
    EXPR_BOOL_SUB = "expr-bool-sub"
    EXPR_TRUE_SUB = "expr-true-sub"
    EXPR_FALSE_SUB = "expr-false-sub"
    EXPR_IF_SUB = "expr-if-sub"
    EXPR_ARROW_SUB = "expr-arrow-sub"
    EXPR_LAM_SUB = "expr-lam-sub"
    EXPR_APP_SUB = "expr-app-sub"
    EXPR_MODTY_SUB = "expr-modty-sub"
    EXPR_MODTM_SUB = "expr-modtm-sub"
    EXPR_LETMOD_SUB = "expr-letmod-sub"
    # empty context and context extension
    SUB_EMPTY_UNIQUE = "sub-empty-unique"
    EXPR_EXTEND_VAR = "expr-extend-var"
    SUB_EXTEND_WEAKEN = "sub-extend-weaken"
    SUB_EXTEND_ETA = "sub-extend-eta"
    # locks are functors
    SUB_LOCK_ID = "sub-lock-id"
    SUB_LOCK_COMPOSE = "sub-lock-compose"
    # keys
    SUB_KEY_UNIT = "sub-key-unit"
    SUB_KEY_VERTICAL = "sub-key-compose-vertical"
    SUB_KEY_HORIZONTAL = "sub-key-compose-horizontal"
    SUB_KEY_NATURAL = "sub-key-natural"

    @property
    def is_sub(self) -> bool:
        return self.value.startswith("sub-")

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Instance:
    """Two sides of a rule in ``ctx``; ``target`` is set for substitution rules."""

    rule: RuleId
    ctx: SCtx
    lhs: Expr | WSub
    rhs: Expr | WSub
    target: SCtx | None = None


class _Rules:
    def __init__(self, g: Gen):
        self.g = g
        self.mt = g.mt

    @property
    def size(self) -> int:
        return max(1, self.g.cfg.max_size)

    def small(self) -> int:
        return self.g.rng.randint(1, max(1, min(4, self.size)))

    def ctx(self) -> SCtx:
        return self.g.ctx()

    # equivalent pairs built from other rules, used as premises

    def expr_pair(self, ctx: SCtx, size: int, depth: int = 2) -> tuple[Expr, Expr]:
        g, mt = self.g, self.mt
        choice = g.pick(("refl", "id", "roundtrip", "compose", "push") if depth > 0 else ("refl", "id", "roundtrip"))
        if choice == "push":
            rule = g.pick(_PUSH)
            got = _GENERATORS[rule](self, ctx)
            if got is not None:
                return got
            choice = "id"
        if choice == "compose":
            return self.expr_sub_compose(ctx)
        t = g.wexpr(ctx, size)
        match choice:
            case "refl":
                return t, t
            case "id":
                return Sub(t, IdS()), t
            case _:
                return t, embed_expr(mt, ctx, translate_expr(mt, ctx, t))

    def sub_pair(self, src: SCtx, tgt: SCtx | None = None) -> tuple[WSub, WSub, SCtx]:
        """Two equivalent substitutions out of ``src``, landing in ``tgt`` when given."""
        g, mt = self.g, self.mt
        if tgt is None:
            sigma, tgt = g.wsub(src, self.small())
        else:
            sigma, _ = g.wsub_shaped(src, lambda t: t == tgt, self.small(), tries=RETRY_BUDGET)
        match g.pick(("refl", "left", "right", "roundtrip", "weaken")):
            case "refl":
                return sigma, sigma, tgt
            case "left":
                return Compose(IdS(), sigma), sigma, tgt
            case "right":
                return sigma, Compose(sigma, IdS()), tgt
            case "roundtrip":
                return sigma, embed_rensub(mt, src, translate_sub(mt, src, sigma)), tgt
            case _:
                mu = g.modality_into(tgt.mode)
                ext = Extend(sigma, g.wexpr(src.lock(mu), self.small()), mu)
                return Compose(Weaken(), ext), sigma, tgt

    def sub_to(self, src: SCtx, want) -> tuple[WSub, SCtx] | None:
        try:
            return self.g.wsub_shaped(src, want, self.small(), tries=RETRY_BUDGET)
        except GenerationExhausted:
            return None

    # equivalence relation

    def expr_refl(self, ctx):
        t = self.g.wexpr(ctx, self.size)
        return t, t

    def expr_sym(self, ctx):
        a, b = self.expr_pair(ctx, self.size)
        return b, a

    def expr_trans(self, ctx):
        a, b = self.expr_pair(ctx, self.size)
        if self.g.rng.random() < 0.5:
            return a, Sub(b, IdS())
        return a, embed_expr(self.mt, ctx, translate_expr(self.mt, ctx, b))

    def sub_refl(self, src):
        sigma, tgt = self.g.wsub(src, self.size)
        return sigma, sigma, tgt

    def sub_sym(self, src):
        a, b, tgt = self.sub_pair(src)
        return b, a, tgt

    def sub_trans(self, src):
        a, b, tgt = self.sub_pair(src)
        return a, Compose(IdS(), b), tgt

    # category laws

    def sub_id_left(self, src):
        sigma, tgt = self.g.wsub(src, self.size)
        return Compose(IdS(), sigma), sigma, tgt

    def sub_id_right(self, src):
        sigma, tgt = self.g.wsub(src, self.size)
        return Compose(sigma, IdS()), sigma, tgt

    def sub_assoc(self, src):
        g = self.g
        rho, a = g.wsub(src, self.small())
        tau, b = g.wsub(a, self.small())
        sigma, tgt = g.wsub(b, self.small())
        return Compose(Compose(sigma, tau), rho), Compose(sigma, Compose(tau, rho)), tgt

    # functoriality

    def expr_sub_id(self, ctx):
        t = self.g.wexpr(ctx, self.size)
        return Sub(t, IdS()), t

    def expr_sub_compose(self, ctx):
        g = self.g
        tau, mid = g.wsub(ctx, self.small())
        sigma, tgt = g.wsub(mid, self.small())
        t = g.wexpr(tgt, self.size)
        return Sub(t, Compose(sigma, tau)), Sub(Sub(t, sigma), tau)

    # congruence

    def _pairs(self, *ctxs: SCtx) -> list[tuple[Expr, Expr]]:
        return [self.expr_pair(c, self.small(), depth=1) for c in ctxs]

    def expr_cong_sub(self, ctx):
        s1, s2, tgt = self.sub_pair(ctx)
        (t1, t2), = self._pairs(tgt)
        return Sub(t1, s1), Sub(t2, s2)

    def expr_cong_lam(self, ctx):
        mu = self.g.modality_into(ctx.mode)
        (a, b), = self._pairs(ctx.ext(mu))
        return Lam(mu, a), Lam(mu, b)

    def expr_cong_app(self, ctx):
        mu = self.g.modality_into(ctx.mode)
        (f1, f2), (a1, a2) = self._pairs(ctx, ctx.lock(mu))
        return App(mu, f1, a1), App(mu, f2, a2)

    def expr_cong_arrow(self, ctx):
        mu = self.g.modality_into(ctx.mode)
        (a1, a2), (b1, b2) = self._pairs(ctx.lock(mu), ctx.ext(mu))
        return Arrow(mu, a1, b1), Arrow(mu, a2, b2)

    def expr_cong_if(self, ctx):
        one = self.mt.identity(ctx.mode)
        ps = self._pairs(ctx.ext(one), ctx, ctx, ctx)
        return If(*(p[0] for p in ps)), If(*(p[1] for p in ps))

    def expr_cong_modty(self, ctx):
        mu = self.g.modality_into(ctx.mode)
        (a, b), = self._pairs(ctx.lock(mu))
        return ModTy(mu, a), ModTy(mu, b)

    def expr_cong_modtm(self, ctx):
        mu = self.g.modality_into(ctx.mode)
        (a, b), = self._pairs(ctx.lock(mu))
        return ModTm(mu, a), ModTm(mu, b)

    def expr_cong_letmod(self, ctx):
        g = self.g
        nu = g.modality_into(ctx.mode)
        mu = g.modality_into(nu.dom)
        ps = self._pairs(ctx.lock(nu).lock(mu), ctx.ext(nu), ctx.lock(nu), ctx.ext(self.mt.compose(nu, mu)))
        return LetMod(nu, mu, *(p[0] for p in ps)), LetMod(nu, mu, *(p[1] for p in ps))

    def sub_cong_compose(self, src):
        t1, t2, mid = self.sub_pair(src)
        s1, s2, tgt = self.sub_pair(mid)
        return Compose(s1, t1), Compose(s2, t2), tgt

    def sub_cong_extend(self, src):
        s1, s2, tgt = self.sub_pair(src)
        mu = self.g.modality_into(tgt.mode)
        (a, b), = self._pairs(src.lock(mu))
        return Extend(s1, a, mu), Extend(s2, b, mu), tgt.ext(mu)

    def sub_cong_lock(self, src):
        if not src.entries or isinstance(src.entries[-1], VarEntry):
            return None
        mu = src.entries[-1].mu
        s1, s2, tgt = self.sub_pair(src.drop_lock(mu))
        return LockS(s1, mu), LockS(s2, mu), tgt.lock(mu)

    # pushing substitutions inward

    def _push_setup(self, ctx):
        return self.g.wsub(ctx, self.small())

    def expr_const_sub(self, ctx, c):
        sigma, _ = self._push_setup(ctx)
        return Sub(c, sigma), c

    def expr_bool_sub(self, ctx):
        return self.expr_const_sub(ctx, BOOL)

    def expr_true_sub(self, ctx):
        return self.expr_const_sub(ctx, TRUE)

    def expr_false_sub(self, ctx):
        return self.expr_const_sub(ctx, FALSE)

    def expr_if_sub(self, ctx):
        g, mt = self.g, self.mt
        sigma, tgt = self._push_setup(ctx)
        one = mt.identity(tgt.mode)
        a = g.wexpr(tgt.ext(one), self.small())
        s, t, u = (g.wexpr(tgt, self.small()) for _ in range(3))
        rhs = If(Sub(a, wsub_lift(sigma, one)), Sub(s, sigma), Sub(t, sigma), Sub(u, sigma))
        return Sub(If(a, s, t, u), sigma), rhs

    def expr_arrow_sub(self, ctx):
        g = self.g
        sigma, tgt = self._push_setup(ctx)
        mu = g.modality_into(tgt.mode)
        a, b = g.wexpr(tgt.lock(mu), self.small()), g.wexpr(tgt.ext(mu), self.small())
        return Sub(Arrow(mu, a, b), sigma), Arrow(mu, Sub(a, LockS(sigma, mu)), Sub(b, wsub_lift(sigma, mu)))

    def expr_lam_sub(self, ctx):
        g = self.g
        sigma, tgt = self._push_setup(ctx)
        mu = g.modality_into(tgt.mode)
        t = g.wexpr(tgt.ext(mu), self.size)
        return Sub(Lam(mu, t), sigma), Lam(mu, Sub(t, wsub_lift(sigma, mu)))

    def expr_app_sub(self, ctx):
        g = self.g
        sigma, tgt = self._push_setup(ctx)
        mu = g.modality_into(tgt.mode)
        f, t = g.wexpr(tgt, self.small()), g.wexpr(tgt.lock(mu), self.small())
        return Sub(App(mu, f, t), sigma), App(mu, Sub(f, sigma), Sub(t, LockS(sigma, mu)))

    def _modal_sub(self, ctx, cons):
        g = self.g
        sigma, tgt = self._push_setup(ctx)
        mu = g.modality_into(tgt.mode)
        t = g.wexpr(tgt.lock(mu), self.size)
        return Sub(cons(mu, t), sigma), cons(mu, Sub(t, LockS(sigma, mu)))

    def expr_modty_sub(self, ctx):
        return self._modal_sub(ctx, ModTy)

    def expr_modtm_sub(self, ctx):
        return self._modal_sub(ctx, ModTm)

    def expr_letmod_sub(self, ctx):
        g, mt = self.g, self.mt
        sigma, tgt = self._push_setup(ctx)
        nu = g.modality_into(tgt.mode)
        mu = g.modality_into(nu.dom)
        nm = mt.compose(nu, mu)
        a = g.wexpr(tgt.lock(nu).lock(mu), self.small())
        b = g.wexpr(tgt.ext(nu), self.small())
        s = g.wexpr(tgt.lock(nu), self.small())
        t = g.wexpr(tgt.ext(nm), self.small())
        rhs = LetMod(
            nu,
            mu,
            Sub(a, LockS(LockS(sigma, nu), mu)),
            Sub(b, wsub_lift(sigma, nu)),
            Sub(s, LockS(sigma, nu)),
            Sub(t, wsub_lift(sigma, nm)),
        )
        return Sub(LetMod(nu, mu, a, b, s, t), sigma), rhs

    # empty context and extension

    def sub_empty_unique(self, src):
        got = self.sub_to(src, lambda t: not t.entries)
        if got is None:
            return None
        sigma, tgt = got
        return sigma, Bang(), tgt

    def expr_extend_var(self, ctx):
        # the instance context is ``ctx`` locked, see the dispatcher
        g = self.g
        sigma, tgt = g.wsub(ctx, self.small())
        mu = g.modality_into(tgt.mode)
        t = g.wexpr(ctx.lock(mu), self.size)
        return ctx.lock(mu), Sub(Var0(), LockS(Extend(sigma, t, mu), mu)), t

    def sub_extend_weaken(self, src):
        g = self.g
        sigma, tgt = g.wsub(src, self.small())
        mu = g.modality_into(tgt.mode)
        t = g.wexpr(src.lock(mu), self.small())
        return Compose(Weaken(), Extend(sigma, t, mu)), sigma, tgt

    def sub_extend_eta(self, src):
        got = self.sub_to(src, lambda t: bool(t.entries) and isinstance(t.entries[-1], VarEntry))
        if got is None:
            return None
        sigma, tgt = got
        mu = tgt.entries[-1].mu
        return sigma, Extend(Compose(Weaken(), sigma), Sub(Var0(), LockS(sigma, mu)), mu), tgt

    # locks

    def sub_lock_id(self, src):
        if not src.entries or isinstance(src.entries[-1], VarEntry):
            return None
        return LockS(IdS(), src.entries[-1].mu), IdS(), src

    def sub_lock_compose(self, src):
        if not src.entries or isinstance(src.entries[-1], VarEntry):
            return None
        g = self.g
        mu = src.entries[-1].mu
        tau, mid = g.wsub(src.drop_lock(mu), self.small())
        sigma, tgt = g.wsub(mid, self.small())
        return LockS(Compose(sigma, tau), mu), Compose(LockS(sigma, mu), LockS(tau, mu)), tgt.lock(mu)

    # keys; these pick their own context shape, see the dispatcher

    def sub_key_unit(self, base):
        lam = self.g.lock_tele(base.mode)
        src = append_lock_tele(base, lam)
        cell = self.mt.id_cell(self.mt.compose_all(lam.mods, lam.outer))
        return src, Key(cell, lam, lam, base), IdS(), src

    def sub_key_vertical(self, base):
        g, mt = self.g, self.mt
        psi = g.lock_tele(base.mode)
        mids = g.key_sources(psi)
        if not mids:
            return None
        theta, beta = g.pick(mids)
        lam, alpha = g.pick(g.key_sources(theta))
        lhs = Key(mt.vcomp(beta, alpha), lam, psi, base)
        rhs = Compose(Key(alpha, lam, theta, base), Key(beta, theta, psi, base))
        return append_lock_tele(base, psi), lhs, rhs, append_lock_tele(base, lam)

    def sub_key_horizontal(self, base):
        g, mt = self.g, self.mt
        lam2 = g.lock_tele(base.mode)
        lam1, beta = g.pick(g.key_sources(lam2))
        theta2 = g.lock_tele(lam2.inner)
        theta1, alpha = g.pick(g.key_sources(theta2))
        lhs = Key(mt.hcomp(beta, alpha), lam1 + theta1, lam2 + theta2, base)
        inner = Key(alpha, theta1, theta2, append_lock_tele(base, lam2))
        rhs = Compose(wsub_lock_tele(Key(beta, lam1, lam2, base), theta1.mods), inner)
        src = append_lock_tele(append_lock_tele(base, lam2), theta2)
        return src, lhs, rhs, append_lock_tele(append_lock_tele(base, lam1), theta1)

    def sub_key_natural(self, gamma):
        g = self.g
        sigma, delta = g.wsub(gamma, self.small())
        theta = g.lock_tele(gamma.mode)
        lam, alpha = g.pick(g.key_sources(theta))
        lhs = Compose(Key(alpha, lam, theta, delta), wsub_lock_tele(sigma, theta.mods))
        rhs = Compose(wsub_lock_tele(sigma, lam.mods), Key(alpha, lam, theta, gamma))
        return append_lock_tele(gamma, theta), lhs, rhs, append_lock_tele(delta, lam)


_PUSH = (
    RuleId.EXPR_BOOL_SUB,
    RuleId.EXPR_TRUE_SUB,
    RuleId.EXPR_FALSE_SUB,
    RuleId.EXPR_IF_SUB,
    RuleId.EXPR_ARROW_SUB,
    RuleId.EXPR_LAM_SUB,
    RuleId.EXPR_APP_SUB,
    RuleId.EXPR_MODTY_SUB,
    RuleId.EXPR_MODTM_SUB,
    RuleId.EXPR_LETMOD_SUB,
)

# rules whose generator chooses the instance context itself
_OWN_CTX = {
    RuleId.EXPR_EXTEND_VAR,
    RuleId.SUB_KEY_UNIT,
    RuleId.SUB_KEY_VERTICAL,
    RuleId.SUB_KEY_HORIZONTAL,
    RuleId.SUB_KEY_NATURAL,
}


_GENERATORS = {rule: getattr(_Rules, rule.name.lower()) for rule in RuleId}


def _draw(rules: _Rules, rule: RuleId) -> Instance | None:
    ctx = rules.ctx()
    got = _GENERATORS[rule](rules, ctx)
    if got is None:
        return None
    if rule in _OWN_CTX:
        if rule.is_sub:
            src, lhs, rhs, tgt = got
            return Instance(rule, src, lhs, rhs, tgt)
        ctx, lhs, rhs = got
        return Instance(rule, ctx, lhs, rhs)
    if rule.is_sub:
        lhs, rhs, tgt = got
        return Instance(rule, ctx, lhs, rhs, tgt)
    lhs, rhs = got
    return Instance(rule, ctx, lhs, rhs)


def check_instance(mt: ModeTheory, inst: Instance) -> None:
    """Raise :class:`ScopeError` unless both sides scope-check."""
    for side in (inst.lhs, inst.rhs):
        if inst.target is None:
            v = check_wexpr(mt, inst.ctx, side)
        else:
            v = check_wsub(mt, inst.ctx, side, inst.target)
        if not v:
            raise ScopeError(f"{inst.rule}: {v.reason}", v.culprit)


def sigma_axiom_instance(
    mt: ModeTheory, rule: RuleId, cfg: GenConfig = GenConfig(), gen: Gen | None = None
) -> Instance:
    """A random scope-checked instance of ``rule``."""
    rules = _Rules(gen if gen is not None else Gen(mt, cfg))
    for _ in range(RETRY_BUDGET):
        try:
            inst = _draw(rules, rule)
        except GenerationExhausted:
            inst = None
        if inst is not None:
            check_instance(mt, inst)
            return inst
    raise GenerationExhausted(f"no instance of {rule} after {RETRY_BUDGET} draws")


def instance_holds(
    mt: ModeTheory, inst: Instance, rng: random.Random | None = None, probes: int = 3, depth: int = DEFAULT_DEPTH
) -> bool:
    """Whether the decision procedure confirms ``inst``.

    Expression rules need equal translations.  Substitution rules need
    observationally equal translations, and equal translations for a few
    random expressions put under either side.
    """
    if inst.target is None:
        return sigma_eq_decide(mt, inst.ctx, inst.lhs, inst.rhs)
    src, tgt = inst.ctx, inst.target
    ls, rs = translate_sub(mt, src, inst.lhs), translate_sub(mt, src, inst.rhs)
    if not obs_eq_bounded(mt, ls, rs, src, tgt, depth=depth):
        return False
    g = Gen(mt, GenConfig(max_size=6, max_depth=1), rng if rng is not None else random.Random(0))
    for _ in range(probes):
        tele: LockTele = g.lock_tele(tgt.mode, 1)
        e = g.wexpr(append_lock_tele(tgt, tele), 6)
        lhs = Sub(e, wsub_lock_tele(inst.lhs, tele.mods))
        rhs = Sub(e, wsub_lock_tele(inst.rhs, tele.mods))
        if not sigma_eq_decide(mt, append_lock_tele(src, tele), lhs, rhs):
            return False
    return True
