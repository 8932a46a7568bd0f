"""Property suites shared by the unit tests and the acceptance runner.

Each suite returns a list of failure descriptions, empty on success.
Every output produced along the way is fed back to its scope checker;
a rejected output counts as a failure of the suite that produced it.
"""

from __future__ import annotations

import random

from mttsub.bridge import embed_expr, embed_rensub, translate_expr, translate_sub
from mttsub.equivalence import Decision, obs_eq_bounded, sub_decide
from mttsub.errors import GenerationExhausted
from mttsub.generators import Gen, GenConfig
from mttsub.modes import validate_laws
from mttsub.oracle import oracle_subst_trivial, oracle_vector
from mttsub.rules import RuleId, instance_holds, sigma_axiom_instance
from mttsub.scoping import SCtx, append_lock_tele, append_scope_tele, enumerate_vars
from mttsub.sfmtt import (
    PI,
    AKey,
    apply_aren_expr,
    apply_asub_expr,
    apply_mixseq_expr,
    apply_rensub_expr,
    aren_lift,
    aren_var,
    asub_lift,
    asub_var,
    check_rensub,
    check_sexpr,
    mixseq_append_tele,
    mixseq_lift,
    pi_tele,
    seq_append_tele,
)
from mttsub.terms import Suc, TRUE, FALSE, Var, VZero, expr_size
from mttsub.wsmtt import Bang, Extend, LockS, check_wexpr, check_wsub

from _support import theory, var_count

# -- scope re-checks --------------------------------------------------------


class Sweep:
    """Collects scope-check failures of produced outputs."""

    def __init__(self):
        self.failures: list[str] = []
        self.checked = 0

    def sexpr(self, mt, ctx, e, what: str):
        self.checked += 1
        v = check_sexpr(mt, ctx, e)
        if not v:
            self.failures.append(f"{what}: {v.reason}")
        return e

    def wexpr(self, mt, ctx, e, what: str):
        self.checked += 1
        v = check_wexpr(mt, ctx, e)
        if not v:
            self.failures.append(f"{what}: {v.reason}")
        return e

    def wsub(self, mt, src, s, tgt, what: str):
        self.checked += 1
        v = check_wsub(mt, src, s, tgt)
        if not v:
            self.failures.append(f"{what}: {v.reason}")
        return s

    def rensub(self, mt, src, seq, tgt, what: str):
        self.checked += 1
        v = check_rensub(mt, src, seq, tgt)
        if not v:
            self.failures.append(f"{what}: {v.reason}")
        return seq


SWEEP = Sweep()


# -- mode theory laws -------------------------------------------------------


def suite_laws() -> list[str]:
    out = []
    for name in ("trivial", "walking_arrow"):
        found = validate_laws(theory(name))
        if found:
            out.append(f"{name}: {found[0]}")
    if not validate_laws(theory("chain3_broken")):
        out.append("chain3_broken: no violation reported")
    return out


# -- completeness per rule --------------------------------------------------


def suite_completeness(names=("trivial", "walking_arrow"), per_rule: int = 200, seed: int = 0) -> list[str]:
    out = []
    for name in names:
        mt = theory(name)
        for k, rule in enumerate(RuleId):
            gen = Gen(mt, GenConfig(seed=seed * 7919 + k))
            rng = random.Random(seed + k)
            bad = 0
            for _ in range(per_rule):
                try:
                    inst = sigma_axiom_instance(mt, rule, gen=gen)
                except GenerationExhausted:
                    out.append(f"{name}/{rule}: no instance could be generated")
                    break
                if not instance_holds(mt, inst, rng):
                    bad += 1
            if bad:
                out.append(f"{name}/{rule}: {bad}/{per_rule} instances not confirmed")
    return out


# -- soundness round trips --------------------------------------------------


def suite_soundness_exprs(name: str, count: int = 1000, max_size: int = 12, seed: int = 1) -> list[str]:
    mt = theory(name)
    g = Gen(mt, GenConfig(seed=seed, max_size=max_size))
    out = []
    for i in range(count):
        ctx = g.ctx()
        t = g.wexpr(ctx, max_size)
        if expr_size(t) > max_size:
            out.append(f"case {i}: generator exceeded the size bound")
        once = SWEEP.sexpr(mt, ctx, translate_expr(mt, ctx, t), "translate")
        back = SWEEP.wexpr(mt, ctx, embed_expr(mt, ctx, once), "embed")
        twice = SWEEP.sexpr(mt, ctx, translate_expr(mt, ctx, back), "translate")
        if once != twice:
            out.append(f"case {i}: translate(embed(translate t)) differs from translate t")
    return out


def suite_soundness_subs(name: str, count: int = 500, probes: int = 10, seed: int = 2) -> list[str]:
    mt = theory(name)
    g = Gen(mt, GenConfig(seed=seed))
    out = []
    for i in range(count):
        src = g.ctx()
        sigma, tgt = g.wsub(src, 6)
        seq = SWEEP.rensub(mt, src, translate_sub(mt, src, sigma), tgt, "translate_sub")
        back = SWEEP.wsub(mt, src, embed_rensub(mt, src, seq), tgt, "embed_rensub")
        again = SWEEP.rensub(mt, src, translate_sub(mt, src, back), tgt, "translate_sub")
        for _ in range(probes):
            tele = g.lock_tele(tgt.mode, 1)
            e = g.sexpr(append_lock_tele(tgt, tele), 8)
            where = append_lock_tele(src, tele)
            a = SWEEP.sexpr(mt, where, apply_rensub_expr(mt, where, e, seq_append_tele(mt, seq, tele)), "apply")
            b = SWEEP.sexpr(mt, where, apply_rensub_expr(mt, where, e, seq_append_tele(mt, again, tele)), "apply")
            if a != b:
                out.append(f"case {i}: a probe tells the substitution and its round trip apart")
                break
    return out


# -- lemma suites ----------------------------------------------------------


def _cases(count: int, make):
    """Call ``make`` until it has produced ``count`` cases; it returns None to skip a draw."""
    done = 0
    for _ in range(count * 50):
        if done == count:
            return
        got = make()
        if got is None:
            continue
        done += 1
        yield got
    raise GenerationExhausted(f"only {done} of {count} cases could be drawn")


def lemma_lift_var(name: str, flavour: str, count: int = 300, seed: int = 3) -> list[str]:
    """Lifted rensubs fix the fresh zero and shift successors."""
    mt = theory(name)
    g = Gen(mt, GenConfig(seed=seed))
    out = []

    def make():
        src = g.ctx()
        a, tgt = g.atomic(src, flavour)
        mu = g.modality_into(tgt.mode)
        lam = g.lock_tele(tgt.mode)
        vs = enumerate_vars(mt, append_lock_tele(tgt.ext(mu), lam))
        return (src, a, tgt, mu, lam, g.pick(vs)) if vs else None

    for src, a, tgt, mu, lam, v in _cases(count, make):
        lifted_src = src.ext(mu)
        where = append_lock_tele(lifted_src, lam)
        if flavour == "ren":
            got = aren_var(mt, lifted_src, v, aren_lift(mt, a, mu), lam.mods)
            want = v if isinstance(v, VZero) else Suc(aren_var(mt, src, v.var, a, lam.mods))
            SWEEP.sexpr(mt, where, Var(got), "aren_var")
            if got != want:
                out.append(f"{name}: lifted renaming moved {v}")
        else:
            got = asub_var(mt, lifted_src, v, asub_lift(mt, a, mu), lam.mods)
            if isinstance(v, VZero):
                want = Var(v)
            else:
                inner = asub_var(mt, src, v.var, a, lam.mods)
                want = apply_aren_expr(mt, where, inner, pi_tele(lam.mods))
            SWEEP.sexpr(mt, where, got, "asub_var")
            if got != want:
                out.append(f"{name}: lifted substitution disagrees on {v}")
    return out


def lemma_pi_commute(name: str, flavour: str, count: int = 300, seed: int = 4) -> list[str]:
    """``t[pi<Phi>][sigma+<Phi>] = t[sigma<Phi>][pi<Phi>]`` for renamings, substitutions and mixed sequences."""
    mt = theory(name)
    g = Gen(mt, GenConfig(seed=seed))
    out = []

    def make():
        src = g.ctx(max_len=3)
        if flavour == "mix":
            seq, tgt = g.mixseq(src, g.rng.randint(1, 3))
        else:
            a, tgt = g.atomic(src, flavour)
            seq = a
        mu = g.modality_into(tgt.mode)
        phi = g.scope_tele(tgt.mode)
        t = g.sexpr(append_scope_tele(tgt, phi), 8)
        return src, seq, tgt, mu, phi, t

    for src, seq, tgt, mu, phi, t in _cases(count, make):
        (pi_phi,) = seq_append_tele(mt, (PI,), phi, as_sub=False)
        lifted_src = append_scope_tele(src.ext(mu), phi)
        # left: weaken first, then the lifted rensub
        weakened = apply_aren_expr(mt, append_scope_tele(tgt.ext(mu), phi), t, pi_phi)
        # right: the rensub first, then weaken
        plain_src = append_scope_tele(src, phi)
        if flavour == "mix":
            lifted = mixseq_append_tele(mt, mixseq_lift(mt, seq, mu), phi)
            left = apply_mixseq_expr(mt, lifted_src, weakened, lifted)
            mid = apply_mixseq_expr(mt, plain_src, t, mixseq_append_tele(mt, seq, phi))
        elif flavour == "ren":
            (lifted,) = seq_append_tele(mt, (aren_lift(mt, seq, mu),), phi, as_sub=False)
            left = apply_aren_expr(mt, lifted_src, weakened, lifted)
            (here,) = seq_append_tele(mt, (seq,), phi, as_sub=False)
            mid = apply_aren_expr(mt, plain_src, t, here)
        else:
            (lifted,) = seq_append_tele(mt, (asub_lift(mt, seq, mu),), phi, as_sub=True)
            left = apply_asub_expr(mt, lifted_src, weakened, lifted)
            (here,) = seq_append_tele(mt, (seq,), phi, as_sub=True)
            mid = apply_asub_expr(mt, plain_src, t, here)
        right = apply_aren_expr(mt, lifted_src, mid, pi_phi)
        SWEEP.sexpr(mt, lifted_src, left, "pi-commute")
        SWEEP.sexpr(mt, lifted_src, right, "pi-commute")
        if left != right:
            out.append(f"{name}/{flavour}: weakening does not commute")
    return out


def _key_draw(g: Gen, mode: str):
    """Telescopes ``theta, psi`` at ``mode`` and a cell ``locks theta => locks psi``."""
    psi = g.lock_tele(mode)
    theta, cell = g.pick(g.key_sources(psi))
    return theta, psi, cell


def lemma_key(name: str, law: str, count: int = 300, seed: int = 5) -> list[str]:
    mt = theory(name)
    g = Gen(mt, GenConfig(seed=seed))
    out = []

    def ren(ctx, e, a):
        return SWEEP.sexpr(mt, ctx, apply_aren_expr(mt, ctx, e, a), f"key-{law}")

    for i in range(count):
        base = g.ctx(max_len=3)
        if law == "unit":
            lam = g.lock_tele(base.mode)
            ctx = append_lock_tele(base, lam)
            t = g.sexpr(ctx, 8)
            key = AKey(mt.id_cell(mt.compose_all(lam.mods, lam.outer)), lam, lam, base)
            ok = ren(ctx, t, key) == t
        elif law == "vertical":
            l2, l3, beta = _key_draw(g, base.mode)
            l1, alpha = g.pick(g.key_sources(l2))
            t = g.sexpr(append_lock_tele(base, l1), 8)
            c2, c3 = append_lock_tele(base, l2), append_lock_tele(base, l3)
            lhs = ren(c3, t, AKey(mt.vcomp(beta, alpha), l1, l3, base))
            rhs = ren(c3, ren(c2, t, AKey(alpha, l1, l2, base)), AKey(beta, l2, l3, base))
            ok = lhs == rhs
        elif law == "horizontal":
            lam1, lam2, beta = _key_draw(g, base.mode)
            th1, th2, alpha = _key_draw(g, lam2.inner)
            t = g.sexpr(append_lock_tele(append_lock_tele(base, lam1), th1), 8)
            g1, g2 = append_lock_tele(base, lam1), append_lock_tele(base, lam2)
            end = append_lock_tele(g2, th2)
            lhs = ren(end, t, AKey(mt.hcomp(beta, alpha), lam1 + th1, lam2 + th2, base))
            (beta_th1,) = seq_append_tele(mt, (AKey(beta, lam1, lam2, base),), th1, as_sub=False)
            (beta_th2,) = seq_append_tele(mt, (AKey(beta, lam1, lam2, base),), th2, as_sub=False)
            first = ren(end, ren(append_lock_tele(g2, th1), t, beta_th1), AKey(alpha, th1, th2, g2))
            second = ren(end, ren(append_lock_tele(g1, th2), t, AKey(alpha, th1, th2, g1)), beta_th2)
            ok = lhs == first == second
        elif law == "natural":
            gamma = base
            seq, delta = g.rensub(gamma, g.rng.randint(1, 2), "sub")
            lam, theta, alpha = _key_draw(g, delta.mode)
            t = g.sexpr(append_lock_tele(delta, lam), 8)
            gt = append_lock_tele(gamma, theta)
            moved = ren(append_lock_tele(delta, theta), t, AKey(alpha, lam, theta, delta))
            lhs = apply_rensub_expr(mt, gt, moved, seq_append_tele(mt, seq, theta))
            subst = apply_rensub_expr(mt, append_lock_tele(gamma, lam), t, seq_append_tele(mt, seq, lam))
            rhs = ren(gt, subst, AKey(alpha, lam, theta, gamma))
            SWEEP.sexpr(mt, gt, lhs, "key-natural")
            ok = lhs == rhs
        elif law == "pi":
            lam, theta, alpha = _key_draw(g, base.mode)
            mu = g.modality_into(base.mode)
            t = g.sexpr(append_lock_tele(base, lam), 8)
            wide = base.ext(mu)
            end = append_lock_tele(wide, theta)
            lhs = ren(end, ren(append_lock_tele(base, theta), t, AKey(alpha, lam, theta, base)), pi_tele(theta.mods))
            rhs = ren(end, ren(append_lock_tele(wide, lam), t, pi_tele(lam.mods)), AKey(alpha, lam, theta, wide))
            ok = lhs == rhs
        elif law == "ren-sub":
            lam, theta, alpha = _key_draw(g, base.mode)
            t = g.sexpr(append_lock_tele(base, lam), 8)
            ctx = append_lock_tele(base, theta)
            key = AKey(alpha, lam, theta, base)
            ok = apply_aren_expr(mt, ctx, t, key) == apply_asub_expr(mt, ctx, t, key)
        else:
            raise ValueError(law)
        if not ok:
            out.append(f"{name}/key-{law}: case {i} differs")
    return out


LEMMAS = {
    "lift-var-ren": lambda n, c: lemma_lift_var(n, "ren", c),
    "lift-var-sub": lambda n, c: lemma_lift_var(n, "sub", c),
    "pi-commute-ren": lambda n, c: lemma_pi_commute(n, "ren", c),
    "pi-commute-sub": lambda n, c: lemma_pi_commute(n, "sub", c),
    "pi-commute-mix": lambda n, c: lemma_pi_commute(n, "mix", c),
    "key-unit": lambda n, c: lemma_key(n, "unit", c),
    "key-vertical": lambda n, c: lemma_key(n, "vertical", c),
    "key-horizontal": lambda n, c: lemma_key(n, "horizontal", c),
    "key-natural": lambda n, c: lemma_key(n, "natural", c),
    "key-pi": lambda n, c: lemma_key(n, "pi", c),
    "key-ren-sub": lambda n, c: lemma_key(n, "ren-sub", c),
}


# -- oracle agreement --------------------------------------------------------


def suite_oracle(count: int = 500, max_size: int = 6, seed: int = 6) -> list[str]:
    """Application of translated substitutions against the naive vector oracle."""
    mt = theory("trivial")
    g = Gen(mt, GenConfig(seed=seed, max_size=max_size))
    out = []
    with_vars = 0
    for i in range(count):
        src = g.ctx()
        sigma, tgt = g.wsub(src, max_size)
        e = g.sexpr(tgt, max_size)
        seq = translate_sub(mt, src, sigma)
        got = SWEEP.sexpr(mt, src, apply_rensub_expr(mt, src, e, seq), "apply")
        want = oracle_subst_trivial(e, oracle_vector(mt, var_count(src), sigma))
        with_vars += "Suc" in repr(e) or "VZero" in repr(e)
        if got != want:
            out.append(f"case {i}: disagrees with the oracle")
    if with_vars < count // 5:
        out.append(f"only {with_vars} of {count} probes mention a variable")
    return out


# -- walking-arrow regressions ---------------------------------------------


def suite_walking_arrow(max_depth: int = 4, samples: int = 30, seed: int = 7) -> list[str]:
    mt = theory("walking_arrow")
    mu, one = mt.modality("mu"), mt.identity("n")
    out = []
    target = SCtx("n").ext(one).lock(mu)
    # (a) nothing can be observed in the unit-variable-behind-mu context.
    # Each source gets a pool: some built directly in the (sigma . t) lock mu
    # shape, some found by the generic generator; every pair in it is compared.
    g = Gen(mt, GenConfig(seed=seed))
    pairs = 0
    while pairs < samples:
        base = g.ctx(root="n", max_len=2)
        if base.mode != "n":
            continue
        src = base.lock(mu)
        pool = []
        for _ in range(3):
            t = g.wexpr(base.lock(one), 6)
            pool.append(LockS(Extend(Bang(), t, one), mu))
        try:
            pool.append(g.wsub_shaped(src, lambda t: t == target, 6, tries=40)[0])
        except GenerationExhausted:
            pass
        seqs = [translate_sub(mt, src, s) for s in pool]
        for i, a in enumerate(seqs):
            for b in seqs[i + 1 :]:
                pairs += 1
                for d in range(max_depth + 1):
                    if not obs_eq_bounded(mt, a, b, src, target, depth=d):
                        out.append(f"(a) depth {d}: substitutions into the locked unit context told apart")
    # the two from the counterexample, too
    src = SCtx("n").lock(mu)
    yes = LockS(Extend(Bang(), TRUE, one), mu)
    no = LockS(Extend(Bang(), FALSE, one), mu)
    ty, tn = translate_sub(mt, src, yes), translate_sub(mt, src, no)
    for d in range(max_depth + 1):
        if not obs_eq_bounded(mt, ty, tn, src, target, depth=d):
            out.append(f"(a) depth {d}: the true/false pair told apart")
    # (b) their embeddings are not equivalent
    ey = SWEEP.wsub(mt, src, embed_rensub(mt, src, ty), target, "embed_rensub")
    en = SWEEP.wsub(mt, src, embed_rensub(mt, src, tn), target, "embed_rensub")
    if sub_decide(mt, src, ey, en, target) is not Decision.DISTINCT:
        out.append("(b) embedded true/false substitutions not decided distinct")
    return out
