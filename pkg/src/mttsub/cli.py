"""Command-line front end.

Exit status: 0 on success, 1 on a negative verdict (distinct terms, a
scope failure, a law violation), 2 on bad usage or unreadable input.
"""

from __future__ import annotations

import argparse
import contextlib
import random
import sys
from importlib import resources
from pathlib import Path

from .bridge import embed_expr, translate_expr, translate_sub
from .equivalence import DEFAULT_DEPTH, Decision, obs_diff, sub_decide
from .errors import GenerationExhausted, ModeTheoryError, MttError, ScopeError, SyntaxParseError
from .generators import Gen, GenConfig
from .modes import ModeTheory, load_mode_theory, validate_laws
from .rules import RuleId, instance_holds, sigma_axiom_instance
from .scoping import SCtx
from .sexpr import (
    format_expr,
    format_rensub,
    format_var,
    parse_ctx,
    parse_expr,
    parse_rensub,
    parse_sexpr,
    parse_sub,
)
from .sfmtt import check_sexpr
from .wsmtt import check_wexpr, check_wsub

OK, NEGATIVE, USAGE = 0, 1, 2


class _Usage(Exception):
    pass


def load_theory(source: str) -> ModeTheory:
    """Load a theory file, or a bundled theory by name (``walking_arrow``)."""
    path = Path(source)
    if path.is_file():
        return load_mode_theory(path.read_text(encoding="utf-8"))
    bundled = resources.files("mttsub") / "theories" / f"{source}.mt"
    if bundled.is_file():
        return load_mode_theory(bundled.read_text(encoding="utf-8"))
    raise _Usage(f"no mode theory file or bundled theory named {source!r}")


def _root(mt: ModeTheory, given: str | None) -> str:
    if given is not None:
        return given
    if len(mt.modes) == 1:
        return mt.modes[0]
    raise _Usage("--root is required when the theory has several modes")


def _ctx(mt: ModeTheory, args, text_attr: str = "ctx", root_attr: str = "root") -> SCtx:
    return parse_ctx(mt, getattr(args, text_attr), _root(mt, getattr(args, root_attr)))


def _say(out, *lines: str) -> None:
    for line in lines:
        print(line, file=out)


def cmd_laws(mt: ModeTheory, args, out) -> int:
    found = validate_laws(mt)
    if not found:
        _say(out, "ok: all laws hold")
        return OK
    _say(out, *(str(v) for v in found))
    _say(out, f"{len(found)} violation(s)")
    return NEGATIVE


def cmd_check(mt: ModeTheory, args, out) -> int:
    ctx = _ctx(mt, args)
    if (args.expr is None) == (args.sub is None):
        raise _Usage("check needs exactly one of --expr and --sub")
    if args.expr is not None:
        v = check_wexpr(mt, ctx, parse_expr(mt, args.expr))
    else:
        if args.to is None:
            raise _Usage("check --sub needs --to")
        tgt = parse_ctx(mt, args.to, args.to_root or _root(mt, args.root))
        v = check_wsub(mt, ctx, parse_sub(mt, args.sub), tgt)
    if v:
        _say(out, "ok")
        return OK
    _say(out, f"scope error: {v.reason}")
    return NEGATIVE


def _checked(mt: ModeTheory, ctx: SCtx, e, checker) -> None:
    v = checker(mt, ctx, e)
    if not v:
        raise ScopeError(v.reason, v.culprit)


def cmd_normalize(mt: ModeTheory, args, out) -> int:
    ctx = _ctx(mt, args)
    e = parse_expr(mt, args.expr)
    _checked(mt, ctx, e, check_wexpr)
    _say(out, format_expr(translate_expr(mt, ctx, e)))
    return OK


def cmd_eq(mt: ModeTheory, args, out) -> int:
    ctx = _ctx(mt, args)
    if args.to is None:
        lhs, rhs = parse_expr(mt, args.lhs), parse_expr(mt, args.rhs)
        _checked(mt, ctx, lhs, check_wexpr)
        _checked(mt, ctx, rhs, check_wexpr)
        a, b = translate_expr(mt, ctx, lhs), translate_expr(mt, ctx, rhs)
        if a == b:
            _say(out, "EQUIV")
            return OK
        _say(out, "DISTINCT", f"lhs: {format_expr(a)}", f"rhs: {format_expr(b)}")
        return NEGATIVE
    tgt = parse_ctx(mt, args.to, args.to_root or _root(mt, args.root))
    lhs, rhs = parse_sub(mt, args.lhs), parse_sub(mt, args.rhs)
    verdict = sub_decide(mt, ctx, lhs, rhs, tgt, args.depth)
    _say(out, str(verdict))
    if verdict is Decision.EQUIV:
        return OK
    _say(
        out,
        f"lhs: {format_rensub(translate_sub(mt, ctx, lhs))}",
        f"rhs: {format_rensub(translate_sub(mt, ctx, rhs))}",
    )
    return NEGATIVE


def cmd_embed(mt: ModeTheory, args, out) -> int:
    ctx = _ctx(mt, args)
    e = parse_sexpr(mt, args.sexpr)
    _checked(mt, ctx, e, check_sexpr)
    _say(out, format_expr(embed_expr(mt, ctx, e)))
    return OK


def _rensub_arg(mt: ModeTheory, src: SCtx, text: str):
    if text.lstrip().startswith("(seq"):
        return parse_rensub(mt, text)
    return translate_sub(mt, src, parse_sub(mt, text))


def cmd_obs_eq(mt: ModeTheory, args, out) -> int:
    src = _ctx(mt, args)
    tgt = parse_ctx(mt, args.to, args.to_root or _root(mt, args.root))
    sigma, tau = _rensub_arg(mt, src, args.lhs), _rensub_arg(mt, src, args.rhs)
    for side in (args.lhs, args.rhs):
        if not side.lstrip().startswith("(seq"):
            _checked_sub(mt, src, parse_sub(mt, side), tgt)
    diff = obs_diff(mt, sigma, tau, src, tgt, args.depth)
    if diff is None:
        _say(out, f"OBS-EQUAL up to depth {args.depth}")
        return OK
    tele, v, a, b = diff
    locks = "[" + " ".join(mu.name for mu in tele.mods) + "]"
    _say(out, "DISTINCT", f"locks: {locks}", f"var: {format_var(v)}", f"lhs: {format_expr(a)}", f"rhs: {format_expr(b)}")
    return NEGATIVE


def _checked_sub(mt: ModeTheory, src: SCtx, sigma, tgt: SCtx) -> None:
    v = check_wsub(mt, src, sigma, tgt)
    if not v:
        raise ScopeError(v.reason, v.culprit)


def cmd_fuzz(mt: ModeTheory, args, out) -> int:
    if args.rule is None:
        rules = list(RuleId)
    else:
        try:
            rules = [RuleId(args.rule)]
        except ValueError:
            raise _Usage(f"unknown rule {args.rule!r}") from None
    failed = 0
    for rule in rules:
        seed = args.seed * 1009 + list(RuleId).index(rule)
        gen = Gen(mt, GenConfig(seed=seed, max_size=args.size))
        rng = random.Random(seed)
        held = 0
        try:
            for _ in range(args.count):
                if instance_holds(mt, sigma_axiom_instance(mt, rule, gen=gen), rng):
                    held += 1
        except GenerationExhausted:
            _say(out, f"{rule}: skipped (no instance in this theory)")
            continue
        failed += args.count - held
        _say(out, f"{rule}: {held}/{args.count}")
    _say(out, "ok" if not failed else f"{failed} failing instance(s)")
    return OK if not failed else NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mttsub", description="Substitution calculus for modal type theory.")
    sub = p.add_subparsers(dest="command", required=True)

    def command(name, fn, help_text, ctx=True):
        c = sub.add_parser(name, help=help_text)
        c.add_argument("--modes", required=True, help="mode theory file or bundled theory name")
        if ctx:
            c.add_argument("--root", help="root mode of the context (default: the only mode)")
            c.add_argument("--ctx", default="()", help="context, e.g. '() . mu lock mu'")
        c.set_defaults(run=fn)
        return c

    command("laws", cmd_laws, "validate the 2-category laws", ctx=False)

    c = command("check", cmd_check, "scope-check an expression or a substitution")
    c.add_argument("--expr")
    c.add_argument("--sub")
    c.add_argument("--to", help="target context of --sub")
    c.add_argument("--to-root", help="root mode of --to (default: --root)")

    c = command("normalize", cmd_normalize, "compute all substitutions away")
    c.add_argument("--expr", required=True)

    c = command("eq", cmd_eq, "decide equivalence of two expressions, or of two substitutions with --to")
    c.add_argument("--lhs", required=True)
    c.add_argument("--rhs", required=True)
    c.add_argument("--to", help="target context; compares substitutions")
    c.add_argument("--to-root")
    c.add_argument("--depth", type=int, default=DEFAULT_DEPTH)

    c = command("embed", cmd_embed, "embed a substitution-free expression")
    c.add_argument("--sexpr", required=True)

    c = command("obs-eq", cmd_obs_eq, "bounded observational comparison of two substitutions")
    c.add_argument("--lhs", required=True, help="explicit substitution or (seq ...)")
    c.add_argument("--rhs", required=True)
    c.add_argument("--to", required=True)
    c.add_argument("--to-root")
    c.add_argument("--depth", type=int, default=DEFAULT_DEPTH)

    c = command("fuzz", cmd_fuzz, "check random instances of the equivalence rules", ctx=False)
    c.add_argument("--seed", type=int, required=True)
    c.add_argument("--count", type=int, default=20)
    c.add_argument("--rule", help="a single rule, e.g. expr-lam-sub")
    c.add_argument("--size", type=int, default=GenConfig().max_size)
    return p


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    if getattr(args, "depth", 0) < 0 or getattr(args, "count", 0) < 0:
        print("error: bounds must be non-negative", file=err)
        return USAGE
    try:
        mt = load_theory(args.modes)
        return args.run(mt, args, out)
    except (_Usage, SyntaxParseError, ModeTheoryError) as exc:
        print(f"error: {exc}", file=err)
        return USAGE
    except ScopeError as exc:
        print(f"scope error: {exc}", file=out)
        return NEGATIVE
    except MttError as exc:
        print(f"error: {exc}", file=err)
        return NEGATIVE


def main() -> None:
    sys.exit(run())
