"""Reading and printing terms, substitutions and contexts as S-expressions."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .errors import MttError, SyntaxParseError
from .modes import Cell, Modality, ModeTheory
from .scoping import LockTele, SCtx, VarEntry
from .sfmtt import AEmpty, AExtend, AId, AKey, ALock, AWeaken, Atomic, MixItem
from .terms import (
    BOOL,
    FALSE,
    TRUE,
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
    make_var,
    var_cell,
    var_index,
)
from .wsmtt import Bang, Compose, Extend, IdS, Key, LockS, Weaken, WSub

__all__ = [
    "parse_ctx",
    "parse_expr",
    "parse_sexpr",
    "parse_sub",
    "parse_atomic",
    "parse_rensub",
    "format_ctx",
    "format_expr",
    "format_sub",
    "format_atomic",
    "format_rensub",
    "format_mixseq",
    "format_var",
]

_TOKEN = re.compile(r"\s*(?:([()\[\]])|([^\s()\[\]]+(?:\([^\s()\[\]]*\))?))")


@dataclass
class _Atom:
    text: str
    pos: int


@dataclass
class _List:
    items: list["_Node"]
    pos: int
    bracket: bool = False


_Node = Union[_Atom, _List]


def _tokenize(text: str) -> list[tuple[str, int]]:
    out = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        tok = m.group(1) or m.group(2)
        out.append((tok, m.start(1) if m.group(1) else m.start(2)))
        pos = m.end()
    if text[pos:].strip():
        raise SyntaxParseError("unreadable input", pos)
    return out


def _read(text: str) -> _Node:
    toks = _tokenize(text)
    if not toks:
        raise SyntaxParseError("empty input", 0)
    node, i = _read_at(toks, 0, len(text))
    if i != len(toks):
        raise SyntaxParseError(f"trailing input {toks[i][0]!r}", toks[i][1])
    return node


def _read_at(toks: list[tuple[str, int]], i: int, end: int) -> tuple[_Node, int]:
    tok, pos = toks[i]
    if tok in ("(", "["):
        close = ")" if tok == "(" else "]"
        items = []
        i += 1
        while True:
            if i >= len(toks):
                raise SyntaxParseError(f"unclosed {tok!r} at end of input", end)
            if toks[i][0] == close:
                return _List(items, pos, tok == "["), i + 1
            if toks[i][0] in (")", "]"):
                raise SyntaxParseError(f"mismatched {toks[i][0]!r}", toks[i][1])
            node, i = _read_at(toks, i, end)
            items.append(node)
    if tok in (")", "]"):
        raise SyntaxParseError(f"unexpected {tok!r}", pos)
    return _Atom(tok, pos), i + 1


class _Reader:
    def __init__(self, mt: ModeTheory, allow_sub: bool, allow_var: bool):
        self.mt = mt
        self.allow_sub = allow_sub
        self.allow_var = allow_var

    def atom(self, n: _Node, what: str) -> str:
        if not isinstance(n, _Atom):
            raise SyntaxParseError(f"expected {what}", n.pos)
        return n.text

    def modality(self, n: _Node) -> Modality:
        name = self.atom(n, "a modality name")
        try:
            return self.mt.modality(name)
        except MttError:
            raise SyntaxParseError(f"unknown modality {name!r}", n.pos) from None

    def cell(self, n: _Node) -> Cell:
        name = self.atom(n, "a cell name")
        try:
            return self.mt.cell(name)
        except MttError:
            raise SyntaxParseError(f"unknown cell {name!r}", n.pos) from None

    def head(self, n: _List, arity: dict[str, int]) -> str:
        if n.bracket or not n.items or not isinstance(n.items[0], _Atom):
            raise SyntaxParseError("expected a form", n.pos)
        h = n.items[0].text
        if h not in arity:
            raise SyntaxParseError(f"unknown form {h!r}", n.items[0].pos)
        if len(n.items) - 1 != arity[h]:
            raise SyntaxParseError(f"{h!r} takes {arity[h]} arguments, got {len(n.items) - 1}", n.pos)
        return h

    _EXPR = {"sub": 2, "lam": 2, "app": 3, "if": 4, "arr": 3, "modty": 2, "mod": 2, "letmod": 6, "var": 2}

    def expr(self, n: _Node) -> Expr:
        if isinstance(n, _Atom):
            match n.text:
                case "Bool":
                    return BOOL
                case "true":
                    return TRUE
                case "false":
                    return FALSE
                case "v0" if self.allow_sub:
                    return Var0()
            raise SyntaxParseError(f"unexpected atom {n.text!r}", n.pos)
        h = self.head(n, self._EXPR)
        a = n.items[1:]
        match h:
            case "sub" if self.allow_sub:
                return Sub(self.expr(a[0]), self.sub(a[1]))
            case "var" if self.allow_var:
                return Var(self.var(a[0], a[1]))
            case "lam":
                return Lam(self.modality(a[0]), self.expr(a[1]))
            case "app":
                return App(self.modality(a[0]), self.expr(a[1]), self.expr(a[2]))
            case "if":
                return If(*(self.expr(x) for x in a))
            case "arr":
                return Arrow(self.modality(a[0]), self.expr(a[1]), self.expr(a[2]))
            case "modty":
                return ModTy(self.modality(a[0]), self.expr(a[1]))
            case "mod":
                return ModTm(self.modality(a[0]), self.expr(a[1]))
            case "letmod":
                return LetMod(self.modality(a[0]), self.modality(a[1]), *(self.expr(x) for x in a[2:]))
        raise SyntaxParseError(f"form {h!r} is not allowed here", n.pos)

    def var(self, idx: _Node, cell: _Node) -> SVar:
        text = self.atom(idx, "a variable index")
        if not text.isdigit():
            raise SyntaxParseError(f"bad variable index {text!r}", idx.pos)
        return make_var(int(text), self.cell(cell))

    def locktele(self, n: _Node, outer: str) -> LockTele:
        if not (isinstance(n, _List) and n.bracket):
            raise SyntaxParseError("expected a bracketed lock list", n.pos)
        mods = tuple(self.modality(x) for x in n.items)
        try:
            return LockTele(outer, mods)
        except MttError as err:
            raise SyntaxParseError(str(err), n.pos) from None

    def ctx(self, n: _Node) -> SCtx:
        if not (isinstance(n, _List) and not n.bracket and len(n.items) >= 2):
            raise SyntaxParseError("expected (ctx ROOT ...)", n.pos)
        if self.atom(n.items[0], "ctx") != "ctx":
            raise SyntaxParseError("expected (ctx ROOT ...)", n.pos)
        root = self.atom(n.items[1], "a mode")
        if root not in self.mt.modes:
            raise SyntaxParseError(f"unknown mode {root!r}", n.items[1].pos)
        rest = n.items[2:]
        if len(rest) % 2:
            raise SyntaxParseError("context entries come in pairs", n.pos)
        ctx = SCtx(root)
        for i in range(0, len(rest), 2):
            kind = self.atom(rest[i], "'.' or 'lock'")
            mu = self.modality(rest[i + 1])
            try:
                if kind == ".":
                    ctx = ctx.ext(mu)
                elif kind == "lock":
                    ctx = ctx.lock(mu)
                else:
                    raise SyntaxParseError(f"expected '.' or 'lock', got {kind!r}", rest[i].pos)
            except SyntaxParseError:
                raise
            except MttError as err:
                raise SyntaxParseError(str(err), rest[i].pos) from None
        return ctx

    def key_parts(self, a: list[_Node]) -> tuple[Cell, LockTele, LockTele, SCtx]:
        base = self.ctx(a[3])
        return self.cell(a[0]), self.locktele(a[1], base.mode), self.locktele(a[2], base.mode), base

    _SUB = {"comp": 2, "lock": 2, "key": 4, "ext": 3}

    def sub(self, n: _Node) -> WSub:
        if isinstance(n, _Atom):
            match n.text:
                case "!":
                    return Bang()
                case "id":
                    return IdS()
                case "pi":
                    return Weaken()
            raise SyntaxParseError(f"unexpected atom {n.text!r}", n.pos)
        h = self.head(n, self._SUB)
        a = n.items[1:]
        match h:
            case "comp":
                return Compose(self.sub(a[0]), self.sub(a[1]))
            case "lock":
                return LockS(self.sub(a[1]), self.modality(a[0]))
            case "key":
                return Key(*self.key_parts(a))
            case _:
                return Extend(self.sub(a[1]), self.expr(a[2]), self.modality(a[0]))

    _ATOMIC = {"wk": 1, "lock": 2, "key": 4, "ext": 3, "rv": 2}

    def atomic(self, n: _Node) -> Atomic:
        if isinstance(n, _Atom):
            match n.text:
                case "!":
                    return AEmpty()
                case "ida":
                    return AId()
            raise SyntaxParseError(f"unexpected atom {n.text!r}", n.pos)
        h = self.head(n, self._ATOMIC)
        a = n.items[1:]
        match h:
            case "wk":
                return AWeaken(self.atomic(a[0]))
            case "lock":
                return ALock(self.atomic(a[1]), self.modality(a[0]))
            case "key":
                return AKey(*self.key_parts(a))
            case "ext":
                p = a[2]
                is_rv = isinstance(p, _List) and p.items and isinstance(p.items[0], _Atom) and p.items[0].text == "rv"
                payload = self.var(p.items[1], p.items[2]) if is_rv and len(p.items) == 3 else self.expr(p)
                return AExtend(self.atomic(a[1]), payload, self.modality(a[0]))
        raise SyntaxParseError(f"form {h!r} is not allowed here", n.pos)


def parse_expr(mt: ModeTheory, text: str) -> Expr:
    """Read an explicit-calculus expression."""
    return _Reader(mt, True, False).expr(_read(text))


def parse_sexpr(mt: ModeTheory, text: str) -> Expr:
    """Read a substitution-free expression."""
    return _Reader(mt, False, True).expr(_read(text))


def parse_sub(mt: ModeTheory, text: str) -> WSub:
    return _Reader(mt, True, False).sub(_read(text))


def parse_atomic(mt: ModeTheory, text: str) -> Atomic:
    return _Reader(mt, False, True).atomic(_read(text))


def parse_rensub(mt: ModeTheory, text: str) -> tuple[Atomic, ...]:
    n = _read(text)
    r = _Reader(mt, False, True)
    if not (isinstance(n, _List) and n.items and isinstance(n.items[0], _Atom) and n.items[0].text == "seq"):
        raise SyntaxParseError("expected (seq ...)", n.pos)
    return tuple(r.atomic(x) for x in n.items[1:])


_CTX_TOKEN = re.compile(r"\s*(?:(\(\s*\))|(\.)|([^\s.()]+))")


def parse_ctx(mt: ModeTheory, text: str, root: str) -> SCtx:
    """Read the infix context notation ``() . mu lock nu``."""
    if root not in mt.modes:
        raise SyntaxParseError(f"unknown mode {root!r}", 0)
    toks = []
    pos = 0
    while True:
        m = _CTX_TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex)
        toks.append(("()" if m.group(1) else m.group(m.lastindex), start))
        pos = m.end()
    if text[pos:].strip():
        raise SyntaxParseError("unreadable context", pos)
    if not toks or toks[0][0] != "()":
        raise SyntaxParseError("a context starts with ()", toks[0][1] if toks else 0)
    ctx = SCtx(root)
    i = 1
    while i < len(toks):
        kind, kpos = toks[i]
        if kind not in (".", "lock"):
            raise SyntaxParseError(f"expected '.' or 'lock', got {kind!r}", kpos)
        if i + 1 >= len(toks):
            raise SyntaxParseError("missing modality at end of input", len(text))
        name, npos = toks[i + 1]
        try:
            mu = mt.modality(name)
            ctx = ctx.ext(mu) if kind == "." else ctx.lock(mu)
        except MttError as err:
            raise SyntaxParseError(str(err), npos) from None
        i += 2
    return ctx


# printing


def format_ctx(ctx: SCtx) -> str:
    parts = ["()"]
    for e in ctx.entries:
        parts.append(f". {e.mu.name}" if isinstance(e, VarEntry) else f"lock {e.mu.name}")
    return " ".join(parts)


def _ctx_sexp(ctx: SCtx) -> str:
    parts = ["ctx", ctx.root]
    for e in ctx.entries:
        parts += [".", e.mu.name] if isinstance(e, VarEntry) else ["lock", e.mu.name]
    return "(" + " ".join(parts) + ")"


def _lt(t: LockTele) -> str:
    return "[" + " ".join(mu.name for mu in t.mods) + "]"


def format_var(v: SVar) -> str:
    return f"(var {var_index(v)} {var_cell(v).name})"


def format_expr(e: Expr) -> str:
    match e:
        case Var(v):
            return format_var(v)
        case Var0():
            return "v0"
        case Sub(t, s):
            return f"(sub {format_expr(t)} {format_sub(s)})"
        case BoolTy():
            return "Bool"
        case TrueTm():
            return "true"
        case FalseTm():
            return "false"
        case If(a, s, t, u):
            return f"(if {format_expr(a)} {format_expr(s)} {format_expr(t)} {format_expr(u)})"
        case Arrow(mu, a, b):
            return f"(arr {mu.name} {format_expr(a)} {format_expr(b)})"
        case Lam(mu, t):
            return f"(lam {mu.name} {format_expr(t)})"
        case App(mu, f, t):
            return f"(app {mu.name} {format_expr(f)} {format_expr(t)})"
        case ModTy(mu, t):
            return f"(modty {mu.name} {format_expr(t)})"
        case ModTm(mu, t):
            return f"(mod {mu.name} {format_expr(t)})"
        case LetMod(nu, mu, a, b, t, s):
            body = " ".join(format_expr(x) for x in (a, b, t, s))
            return f"(letmod {nu.name} {mu.name} {body})"
    raise TypeError(f"not an expression: {e!r}")


def format_sub(s: WSub) -> str:
    match s:
        case Bang():
            return "!"
        case IdS():
            return "id"
        case Weaken():
            return "pi"
        case Compose(a, b):
            return f"(comp {format_sub(a)} {format_sub(b)})"
        case LockS(a, mu):
            return f"(lock {mu.name} {format_sub(a)})"
        case Key(c, th, ps, base):
            return f"(key {c.name} {_lt(th)} {_lt(ps)} {_ctx_sexp(base)})"
        case Extend(a, t, mu):
            return f"(ext {mu.name} {format_sub(a)} {format_expr(t)})"
    raise TypeError(f"not a substitution: {s!r}")


def format_atomic(a: Atomic) -> str:
    match a:
        case AEmpty():
            return "!"
        case AId():
            return "ida"
        case AWeaken(x):
            return f"(wk {format_atomic(x)})"
        case ALock(x, mu):
            return f"(lock {mu.name} {format_atomic(x)})"
        case AKey(c, th, ps, base):
            return f"(key {c.name} {_lt(th)} {_lt(ps)} {_ctx_sexp(base)})"
        case AExtend(x, p, mu):
            payload = f"(rv {var_index(p)} {var_cell(p).name})" if isinstance(p, (VZero, Suc)) else format_expr(p)
            return f"(ext {mu.name} {format_atomic(x)} {payload})"
    raise TypeError(f"not an atomic rensub: {a!r}")


def format_rensub(seq: tuple[Atomic, ...]) -> str:
    return "(seq" + "".join(" " + format_atomic(a) for a in seq) + ")"


def format_mixseq(seq: tuple[MixItem, ...]) -> str:
    return "(mix" + "".join(f" ({i.kind} {format_atomic(i.atom)})" for i in seq) + ")"
