"""Expression syntax shared by both calculi.

The explicit-substitution calculus uses ``Var0`` and ``Sub``; the
substitution-free calculus uses ``Var``.  Every other node is common.
Checkers in :mod:`mttsub.wsmtt` and :mod:`mttsub.sfmtt` enforce which
nodes may appear where.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Union

from .modes import Cell, Modality

if TYPE_CHECKING:
    from .wsmtt import WSub

__all__ = [
    "VZero",
    "Suc",
    "SVar",
    "Var",
    "Var0",
    "Sub",
    "BoolTy",
    "TrueTm",
    "FalseTm",
    "BOOL",
    "TRUE",
    "FALSE",
    "If",
    "Arrow",
    "Lam",
    "App",
    "ModTy",
    "ModTm",
    "LetMod",
    "Expr",
    "var_index",
    "var_cell",
    "make_var",
    "expr_size",
]


@dataclass(frozen=True, slots=True)
class VZero:
    cell: Cell


@dataclass(frozen=True, slots=True)
class Suc:
    var: "SVar"


SVar = Union[VZero, Suc]


def var_index(v: SVar) -> int:
    n = 0
    while isinstance(v, Suc):
        n += 1
        v = v.var
    return n


def var_cell(v: SVar) -> Cell:
    while isinstance(v, Suc):
        v = v.var
    return v.cell


def make_var(index: int, cell: Cell) -> SVar:
    v: SVar = VZero(cell)
    for _ in range(index):
        v = Suc(v)
    return v


@dataclass(frozen=True, slots=True)
class Var:
    var: SVar


@dataclass(frozen=True, slots=True)
class Var0:
    pass


@dataclass(frozen=True, slots=True)
class Sub:
    body: "Expr"
    sub: "WSub"


@dataclass(frozen=True, slots=True)
class BoolTy:
    pass


@dataclass(frozen=True, slots=True)
class TrueTm:
    pass


@dataclass(frozen=True, slots=True)
class FalseTm:
    pass


BOOL = BoolTy()
TRUE = TrueTm()
FALSE = FalseTm()


@dataclass(frozen=True, slots=True)
class If:
    motive: "Expr"  # scoped under one extra variable at the unit modality
    scrut: "Expr"
    then: "Expr"
    else_: "Expr"


@dataclass(frozen=True, slots=True)
class Arrow:
    mu: Modality
    dom: "Expr"
    cod: "Expr"


@dataclass(frozen=True, slots=True)
class Lam:
    mu: Modality
    body: "Expr"


@dataclass(frozen=True, slots=True)
class App:
    mu: Modality
    fn: "Expr"
    arg: "Expr"


@dataclass(frozen=True, slots=True)
class ModTy:
    mu: Modality
    ty: "Expr"


@dataclass(frozen=True, slots=True)
class ModTm:
    mu: Modality
    tm: "Expr"


@dataclass(frozen=True, slots=True)
class LetMod:
    """Modal elimination ``let mod^mu x = scrut in body`` under modality ``nu``."""

    nu: Modality
    mu: Modality
    ty: "Expr"  # behind two locks: nu then mu
    motive: "Expr"  # binds one variable at nu
    scrut: "Expr"  # behind the lock nu
    body: "Expr"  # binds one variable at nu . mu


Expr = Union[
    Var, Var0, Sub, BoolTy, TrueTm, FalseTm, If, Arrow, Lam, App, ModTy, ModTm, LetMod
]


def expr_size(e: Expr) -> int:
    """Node count; substitutions inside ``Sub`` count as one node each."""
    match e:
        case Var() | Var0() | BoolTy() | TrueTm() | FalseTm():
            return 1
        case Sub(body, _):
            return 2 + expr_size(body)
        case If(a, s, t, u):
            return 1 + expr_size(a) + expr_size(s) + expr_size(t) + expr_size(u)
        case Arrow(_, a, b) | App(_, a, b):
            return 1 + expr_size(a) + expr_size(b)
        case Lam(_, t) | ModTy(_, t) | ModTm(_, t):
            return 1 + expr_size(t)
        case LetMod(_, _, a, b, t, s):
            return 1 + expr_size(a) + expr_size(b) + expr_size(t) + expr_size(s)
    raise TypeError(f"not an expression: {e!r}")
