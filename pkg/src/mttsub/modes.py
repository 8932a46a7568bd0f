"""Finitely tabulated strict 2-categories used as mode theories.

A theory is read from a small line-oriented text format.  Identity
modalities (``1@m``) and identity cells (``id(mu)``) are implicit, and
every composite that a unit law determines is filled in at load time.
Everything else must be tabulated explicitly; ``validate_laws`` reports
missing composites and failed equations.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import (
    ConflictingEntry,
    DanglingReference,
    MissingEntry,
    ModeMismatch,
    TheoryParseError,
)

__all__ = [
    "Modality",
    "Cell",
    "ModeTheory",
    "Violation",
    "load_mode_theory",
    "load_mode_theory_file",
    "dump_mode_theory",
    "validate_laws",
    "identity_name",
    "id_cell_name",
]


@dataclass(frozen=True, slots=True)
class Modality:
    name: str
    dom: str
    cod: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Cell:
    name: str
    dom: Modality
    cod: Modality

    def __str__(self) -> str:
        return self.name


def identity_name(mode: str) -> str:
    return f"1@{mode}"


def id_cell_name(modality: str) -> str:
    return f"id({modality})"


def _is_identity_modality(name: str) -> bool:
    return name.startswith("1@")


def _is_identity_cell(name: str) -> bool:
    return name.startswith("id(") and name.endswith(")")


class ModeTheory:
    """An immutable mode theory.  Build one with :func:`load_mode_theory`."""

    def __init__(
        self,
        modes: tuple[str, ...],
        modalities: dict[str, Modality],
        cells: dict[str, Cell],
        compose: dict[tuple[str, str], Modality],
        vcomp: dict[tuple[str, str], Cell],
        hcomp: dict[tuple[str, str], Cell],
    ):
        self.modes = modes
        self.modalities = modalities
        self.cells = cells
        self._compose = compose
        self._vcomp = vcomp
        self._hcomp = hcomp
        self._between: dict[tuple[str, str], tuple[Cell, ...]] = {}
        for c in cells.values():
            key = (c.dom.name, c.cod.name)
            self._between[key] = self._between.get(key, ()) + (c,)
        self._into: dict[str, tuple[Modality, ...]] = {m: () for m in modes}
        for mu in modalities.values():
            self._into[mu.cod] += (mu,)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ModeTheory):
            return NotImplemented
        return (
            set(self.modes) == set(other.modes)
            and self.modalities == other.modalities
            and self.cells == other.cells
            and self._compose == other._compose
            and self._vcomp == other._vcomp
            and self._hcomp == other._hcomp
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return (
            f"<ModeTheory {len(self.modes)} modes, {len(self.modalities)} modalities, "
            f"{len(self.cells)} cells>"
        )

    # lookups

    def modality(self, name: str) -> Modality:
        try:
            return self.modalities[name]
        except KeyError:
            raise DanglingReference(f"unknown modality {name!r}") from None

    def cell(self, name: str) -> Cell:
        try:
            return self.cells[name]
        except KeyError:
            raise DanglingReference(f"unknown cell {name!r}") from None

    def identity(self, mode: str) -> Modality:
        try:
            return self.modalities[identity_name(mode)]
        except KeyError:
            raise DanglingReference(f"unknown mode {mode!r}") from None

    def id_cell(self, mu: Modality) -> Cell:
        try:
            return self.cells[id_cell_name(mu.name)]
        except KeyError:
            raise DanglingReference(f"unknown modality {mu.name!r}") from None

    def compose(self, outer: Modality, inner: Modality) -> Modality:
        """``outer . inner``; defined when inner lands where outer starts."""
        if inner.cod != outer.dom:
            raise ModeMismatch(
                f"cannot compose {outer.name} ({outer.dom} -> {outer.cod}) after "
                f"{inner.name} ({inner.dom} -> {inner.cod})"
            )
        try:
            return self._compose[outer.name, inner.name]
        except KeyError:
            raise MissingEntry(f"no compose entry for {outer.name} . {inner.name}") from None

    def vcomp(self, later: Cell, earlier: Cell) -> Cell:
        if earlier.cod != later.dom:
            raise ModeMismatch(f"cells {later.name} and {earlier.name} do not chain")
        try:
            return self._vcomp[later.name, earlier.name]
        except KeyError:
            raise MissingEntry(f"no vcomp entry for {later.name} . {earlier.name}") from None

    def hcomp(self, outer: Cell, inner: Cell) -> Cell:
        if inner.dom.cod != outer.dom.dom:
            raise ModeMismatch(f"cells {outer.name} and {inner.name} do not compose horizontally")
        try:
            return self._hcomp[outer.name, inner.name]
        except KeyError:
            raise MissingEntry(f"no hcomp entry for {outer.name} * {inner.name}") from None

    def cells_between(self, mu: Modality, nu: Modality) -> tuple[Cell, ...]:
        return self._between.get((mu.name, nu.name), ())

    def modalities_into(self, mode: str) -> tuple[Modality, ...]:
        """Modalities with codomain ``mode``, i.e. the locks allowed at that mode."""
        return self._into.get(mode, ())

    def compose_all(self, mods: Iterable[Modality], at_mode: str) -> Modality:
        """Left fold of ``compose`` starting from the identity at ``at_mode``."""
        acc = self.identity(at_mode)
        for mu in mods:
            acc = self.compose(acc, mu)
        return acc

    # raw table access for serialization and validation

    def compose_entries(self) -> dict[tuple[str, str], Modality]:
        return dict(self._compose)

    def vcomp_entries(self) -> dict[tuple[str, str], Cell]:
        return dict(self._vcomp)

    def hcomp_entries(self) -> dict[tuple[str, str], Cell]:
        return dict(self._hcomp)


# loading

_TOKEN = re.compile(r"(->|=>|[:.*=])|([A-Za-z0-9_@()']+)|(\S)")


def _tokens(line: str, lineno: int) -> list[tuple[str, int]]:
    out = []
    for m in _TOKEN.finditer(line):
        if m.group(3):
            raise TheoryParseError(f"unexpected character {m.group(3)!r}", lineno, m.start() + 1)
        out.append((m.group(0), m.start() + 1))
    return out


_SHAPES = {
    "mode": ["NAME"],
    "modality": ["NAME", ":", "NAME", "->", "NAME"],
    "cell": ["NAME", ":", "NAME", "=>", "NAME"],
    "compose": ["NAME", ".", "NAME", "=", "NAME"],
    "vcomp": ["NAME", ".", "NAME", "=", "NAME"],
    "hcomp": ["NAME", "*", "NAME", "=", "NAME"],
}
_PUNCT = {":", ".", "*", "=", "->", "=>"}


@dataclass
class _Decl:
    kind: str
    args: list[str]
    cols: list[int]
    line: int


def _parse(text: str) -> list[_Decl]:
    decls = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line, lineno)
        if not toks:
            continue
        kw, kw_col = toks[0]
        if kw not in _SHAPES:
            raise TheoryParseError(f"unknown declaration {kw!r}", lineno, kw_col)
        shape = _SHAPES[kw]
        rest = toks[1:]
        args, cols = [], []
        for i, want in enumerate(shape):
            if i >= len(rest):
                col = len(line.rstrip()) + 1
                raise TheoryParseError(f"expected {want.lower()} after {kw!r}", lineno, col)
            tok, col = rest[i]
            if want == "NAME":
                if tok in _PUNCT:
                    raise TheoryParseError(f"expected a name, found {tok!r}", lineno, col)
                args.append(tok)
                cols.append(col)
            elif tok != want:
                raise TheoryParseError(f"expected {want!r}, found {tok!r}", lineno, col)
        if len(rest) > len(shape):
            tok, col = rest[len(shape)]
            raise TheoryParseError(f"trailing token {tok!r}", lineno, col)
        decls.append(_Decl(kw, args, cols, lineno))
    return decls


def _where(d: _Decl, i: int) -> str:
    return f"line {d.line}, col {d.cols[i]}"


def load_mode_theory(text: str) -> ModeTheory:
    """Parse and tabulate a theory.  Laws are not checked here."""
    decls = _parse(text)
    modes: list[str] = []
    modalities: dict[str, Modality] = {}
    cells: dict[str, Cell] = {}

    for d in decls:
        if d.kind == "mode":
            if d.args[0] not in modes:
                modes.append(d.args[0])
    for m in modes:
        ident = identity_name(m)
        modalities[ident] = Modality(ident, m, m)

    def mode_ref(d: _Decl, i: int) -> str:
        if d.args[i] not in modes:
            raise DanglingReference(f"{_where(d, i)}: unknown mode {d.args[i]!r}")
        return d.args[i]

    for d in decls:
        if d.kind != "modality":
            continue
        name = d.args[0]
        if _is_identity_modality(name):
            raise ConflictingEntry(f"{_where(d, 0)}: identity modality {name!r} cannot be declared")
        mu = Modality(name, mode_ref(d, 1), mode_ref(d, 2))
        if modalities.get(name, mu) != mu:
            raise ConflictingEntry(f"{_where(d, 0)}: modality {name!r} redeclared differently")
        modalities[name] = mu

    def mod_ref(d: _Decl, i: int) -> Modality:
        try:
            return modalities[d.args[i]]
        except KeyError:
            raise DanglingReference(f"{_where(d, i)}: unknown modality {d.args[i]!r}") from None

    for mu in list(modalities.values()):
        ident = id_cell_name(mu.name)
        cells[ident] = Cell(ident, mu, mu)
    for d in decls:
        if d.kind != "cell":
            continue
        name = d.args[0]
        if _is_identity_cell(name):
            raise ConflictingEntry(f"{_where(d, 0)}: identity cell {name!r} cannot be declared")
        dom, cod = mod_ref(d, 1), mod_ref(d, 2)
        if (dom.dom, dom.cod) != (cod.dom, cod.cod):
            raise ModeMismatch(f"{_where(d, 0)}: cell {name!r} between non-parallel modalities")
        c = Cell(name, dom, cod)
        if cells.get(name, c) != c:
            raise ConflictingEntry(f"{_where(d, 0)}: cell {name!r} redeclared differently")
        cells[name] = c

    def cell_ref(d: _Decl, i: int) -> Cell:
        try:
            return cells[d.args[i]]
        except KeyError:
            raise DanglingReference(f"{_where(d, i)}: unknown cell {d.args[i]!r}") from None

    compose: dict[tuple[str, str], Modality] = {}
    vcomp: dict[tuple[str, str], Cell] = {}
    hcomp: dict[tuple[str, str], Cell] = {}

    def put(table: dict, key: tuple[str, str], value, where: str) -> None:
        old = table.get(key)
        if old is not None and old != value:
            raise ConflictingEntry(
                f"{where}: entry for {key[0]}, {key[1]} is both {old.name} and {value.name}"
            )
        table[key] = value

    for mu in modalities.values():
        put(compose, (mu.name, identity_name(mu.dom)), mu, "unit")
        put(compose, (identity_name(mu.cod), mu.name), mu, "unit")
    for c in cells.values():
        put(vcomp, (c.name, id_cell_name(c.dom.name)), c, "unit")
        put(vcomp, (id_cell_name(c.cod.name), c.name), c, "unit")
        put(hcomp, (id_cell_name(identity_name(c.dom.cod)), c.name), c, "unit")
        put(hcomp, (c.name, id_cell_name(identity_name(c.dom.dom))), c, "unit")

    for d in decls:
        if d.kind == "compose":
            outer, inner, res = mod_ref(d, 0), mod_ref(d, 1), mod_ref(d, 2)
            if inner.cod != outer.dom:
                raise ModeMismatch(f"{_where(d, 0)}: {outer.name} . {inner.name} is not composable")
            put(compose, (outer.name, inner.name), res, _where(d, 0))
    for mu in modalities.values():
        for nu in modalities.values():
            comp = compose.get((mu.name, nu.name))
            if comp is not None:
                put(
                    hcomp,
                    (id_cell_name(mu.name), id_cell_name(nu.name)),
                    cells[id_cell_name(comp.name)],
                    "identity",
                )
    for d in decls:
        if d.kind == "vcomp":
            later, earlier, res = cell_ref(d, 0), cell_ref(d, 1), cell_ref(d, 2)
            if earlier.cod != later.dom:
                raise ModeMismatch(f"{_where(d, 0)}: {later.name} . {earlier.name} does not chain")
            put(vcomp, (later.name, earlier.name), res, _where(d, 0))
        elif d.kind == "hcomp":
            outer, inner, res = cell_ref(d, 0), cell_ref(d, 1), cell_ref(d, 2)
            if inner.dom.cod != outer.dom.dom:
                raise ModeMismatch(f"{_where(d, 0)}: {outer.name} * {inner.name} is not composable")
            put(hcomp, (outer.name, inner.name), res, _where(d, 0))

    return ModeTheory(tuple(modes), modalities, cells, compose, vcomp, hcomp)


def load_mode_theory_file(path) -> ModeTheory:
    with open(path, encoding="utf-8") as fh:
        return load_mode_theory(fh.read())


def _auto_compose(key: tuple[str, str]) -> bool:
    return _is_identity_modality(key[0]) or _is_identity_modality(key[1])


def dump_mode_theory(mt: ModeTheory) -> str:
    """Serialize, omitting everything that loading re-synthesizes."""
    lines = [f"mode {m}" for m in mt.modes]
    for mu in mt.modalities.values():
        if not _is_identity_modality(mu.name):
            lines.append(f"modality {mu.name} : {mu.dom} -> {mu.cod}")
    for c in mt.cells.values():
        if not _is_identity_cell(c.name):
            lines.append(f"cell {c.name} : {c.dom.name} => {c.cod.name}")
    for (o, i), r in sorted(mt.compose_entries().items()):
        if not _auto_compose((o, i)):
            lines.append(f"compose {o} . {i} = {r.name}")
    for (l, e), r in sorted(mt.vcomp_entries().items()):
        if not (_is_identity_cell(l) or _is_identity_cell(e)):
            lines.append(f"vcomp {l} . {e} = {r.name}")
    for (o, i), r in sorted(mt.hcomp_entries().items()):
        unit = o.startswith("id(1@") or i.startswith("id(1@")
        both_ids = _is_identity_cell(o) and _is_identity_cell(i)
        if not (unit or both_ids):
            lines.append(f"hcomp {o} * {i} = {r.name}")
    return "\n".join(lines) + "\n"


# law checking


@dataclass(frozen=True)
class Violation:
    law: str
    witness: tuple[str, ...]
    detail: str

    def __str__(self) -> str:
        return f"{self.law}: ({', '.join(self.witness)}) {self.detail}"


def validate_laws(mt: ModeTheory, per_law: int = 5) -> list[Violation]:
    """Exhaustively check the strict 2-category laws.

    At most ``per_law`` witnesses are reported for each law.
    """
    found: dict[str, int] = {}
    out: list[Violation] = []
    for v in _violations(mt):
        n = found.get(v.law, 0)
        if n < per_law:
            out.append(v)
        found[v.law] = n + 1
    return out


def _violations(mt: ModeTheory) -> Iterator[Violation]:
    mods = list(mt.modalities.values())
    cells = list(mt.cells.values())
    comp = mt.compose_entries()
    vc = mt.vcomp_entries()
    hc = mt.hcomp_entries()

    def c(o: Modality, i: Modality) -> Modality | None:
        return comp.get((o.name, i.name))

    def v(l: Cell, e: Cell) -> Cell | None:
        return vc.get((l.name, e.name))

    def h(o: Cell, i: Cell) -> Cell | None:
        return hc.get((o.name, i.name))

    for o in mods:
        for i in mods:
            if i.cod != o.dom:
                continue
            r = c(o, i)
            if r is None:
                yield Violation("compose-closure", (o.name, i.name), "missing entry")
            elif (r.dom, r.cod) != (i.dom, o.cod):
                yield Violation("compose-bookkeeping", (o.name, i.name), f"result {r.name} has wrong modes")
    for mu in mods:
        if c(mu, mt.identity(mu.dom)) != mu or c(mt.identity(mu.cod), mu) != mu:
            yield Violation("compose-unit", (mu.name,), "identity is not a unit")
    for a in mods:
        for b in mods:
            if b.cod != a.dom:
                continue
            ab = c(a, b)
            for x in mods:
                if x.cod != b.dom:
                    continue
                bx = c(b, x)
                if ab is None or bx is None:
                    continue
                lhs, rhs = c(ab, x), c(a, bx)
                if lhs is not None and rhs is not None and lhs != rhs:
                    yield Violation(
                        "compose-assoc",
                        (a.name, b.name, x.name),
                        f"({a.name} . {b.name}) . {x.name} = {lhs.name} but "
                        f"{a.name} . ({b.name} . {x.name}) = {rhs.name}",
                    )

    for l in cells:
        for e in cells:
            if e.cod != l.dom:
                continue
            r = v(l, e)
            if r is None:
                yield Violation("vcomp-closure", (l.name, e.name), "missing entry")
            elif (r.dom, r.cod) != (e.dom, l.cod):
                yield Violation("vcomp-bookkeeping", (l.name, e.name), f"result {r.name} has wrong type")
    for a in cells:
        if v(a, mt.id_cell(a.dom)) != a or v(mt.id_cell(a.cod), a) != a:
            yield Violation("vcomp-unit", (a.name,), "identity cell is not a unit")
    for g in cells:
        for b in cells:
            if b.cod != g.dom:
                continue
            gb = v(g, b)
            for a in cells:
                if a.cod != b.dom:
                    continue
                ba = v(b, a)
                if gb is None or ba is None:
                    continue
                lhs, rhs = v(gb, a), v(g, ba)
                if lhs is not None and rhs is not None and lhs != rhs:
                    yield Violation("vcomp-assoc", (g.name, b.name, a.name), f"{lhs.name} != {rhs.name}")

    for o in cells:
        for i in cells:
            if i.dom.cod != o.dom.dom:
                continue
            r = h(o, i)
            if r is None:
                yield Violation("hcomp-closure", (o.name, i.name), "missing entry")
                continue
            want_dom, want_cod = c(o.dom, i.dom), c(o.cod, i.cod)
            if r.dom != want_dom or r.cod != want_cod:
                yield Violation("hcomp-bookkeeping", (o.name, i.name), f"result {r.name} has wrong type")
    for a in cells:
        left = mt.id_cell(mt.identity(a.dom.cod))
        right = mt.id_cell(mt.identity(a.dom.dom))
        if h(left, a) != a or h(a, right) != a:
            yield Violation("hcomp-unit", (a.name,), "identity of the unit modality is not a unit")
    for g in cells:
        for b in cells:
            if b.dom.cod != g.dom.dom:
                continue
            gb = h(g, b)
            for a in cells:
                if a.dom.cod != b.dom.dom:
                    continue
                ba = h(b, a)
                if gb is None or ba is None:
                    continue
                lhs, rhs = h(gb, a), h(g, ba)
                if lhs is not None and rhs is not None and lhs != rhs:
                    yield Violation("hcomp-assoc", (g.name, b.name, a.name), f"{lhs.name} != {rhs.name}")

    for mu in mods:
        for nu in mods:
            if nu.cod != mu.dom:
                continue
            mn = c(mu, nu)
            got = h(mt.id_cell(mu), mt.id_cell(nu))
            if mn is not None and got != mt.id_cell(mn):
                yield Violation("hcomp-identity", (mu.name, nu.name), "1_mu * 1_nu is not 1_(mu . nu)")

    # (b2 * a2) . (b1 * a1) = (b2 . b1) * (a2 . a1)
    for b1 in cells:
        for b2 in cells:
            if b2.dom != b1.cod:
                continue
            b21 = v(b2, b1)
            for a1 in cells:
                if a1.dom.cod != b1.dom.dom:
                    continue
                h1 = h(b1, a1)
                for a2 in cells:
                    if a2.dom != a1.cod:
                        continue
                    h2, a21 = h(b2, a2), v(a2, a1)
                    if None in (b21, h1, h2, a21):
                        continue
                    lhs, rhs = v(h2, h1), h(b21, a21)
                    if lhs is not None and rhs is not None and lhs != rhs:
                        yield Violation(
                            "interchange",
                            (b2.name, a2.name, b1.name, a1.name),
                            f"{lhs.name} != {rhs.name}",
                        )
