"""Scoping contexts and the telescopes appended to them."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Union

from .errors import ScopeError
from .modes import Modality, ModeTheory
from .terms import SVar, make_var

__all__ = [
    "VarEntry",
    "LockEntry",
    "Entry",
    "SCtx",
    "LockTele",
    "ScopeTele",
    "Verdict",
    "mode_of",
    "locks_of",
    "append_scope_tele",
    "append_lock_tele",
    "enumerate_lock_teles",
    "enumerate_vars",
    "enumerate_contexts",
]


@dataclass(frozen=True, slots=True)
class VarEntry:
    mu: Modality


@dataclass(frozen=True, slots=True)
class LockEntry:
    mu: Modality


Entry = Union[VarEntry, LockEntry]


def _walk(mode: str, entries: Iterable[Entry]) -> str:
    for e in entries:
        if e.mu.cod != mode:
            kind = "variable" if isinstance(e, VarEntry) else "lock"
            raise ScopeError(
                f"{kind} at {e.mu.name} ({e.mu.dom} -> {e.mu.cod}) appended at mode {mode}", e
            )
        if isinstance(e, LockEntry):
            mode = e.mu.dom
    return mode


@dataclass(frozen=True, slots=True)
class SCtx:
    """A scoping context: a root mode and a list of entries.

    The current mode is derived from the entries and cached.  Construction
    fails with :class:`ScopeError` on a badly chaining entry list.
    """

    root: str
    entries: tuple[Entry, ...] = ()
    mode: str = field(default="", compare=False, repr=False)

    def __post_init__(self) -> None:
        if not self.mode:
            object.__setattr__(self, "mode", _walk(self.root, self.entries))

    def ext(self, mu: Modality) -> SCtx:
        if mu.cod != self.mode:
            raise ScopeError(f"cannot bind a variable at {mu.name} in a context at mode {self.mode}", mu)
        return SCtx(self.root, self.entries + (VarEntry(mu),), self.mode)

    def lock(self, mu: Modality) -> SCtx:
        if mu.cod != self.mode:
            raise ScopeError(f"cannot lock {mu.name} in a context at mode {self.mode}", mu)
        return SCtx(self.root, self.entries + (LockEntry(mu),), mu.dom)

    def locks(self, mods: Iterable[Modality]) -> SCtx:
        ctx = self
        for mu in mods:
            ctx = ctx.lock(mu)
        return ctx

    def drop_var(self) -> SCtx:
        """Remove a trailing variable entry."""
        if not self.entries or not isinstance(self.entries[-1], VarEntry):
            raise ScopeError("context does not end in a variable", self)
        return SCtx(self.root, self.entries[:-1], self.mode)

    def drop_lock(self, mu: Modality) -> SCtx:
        """Remove a trailing lock, which must be at ``mu``."""
        if not self.entries or self.entries[-1] != LockEntry(mu):
            raise ScopeError(f"context does not end in a lock at {mu.name}", self)
        return SCtx(self.root, self.entries[:-1], mu.cod)

    def trailing_locks(self) -> tuple[Modality, ...]:
        out = []
        for e in reversed(self.entries):
            if isinstance(e, VarEntry):
                break
            out.append(e.mu)
        return tuple(reversed(out))

    def strip_locks(self, mods: tuple[Modality, ...]) -> SCtx:
        """Remove the trailing lock telescope ``mods``; inverse of :meth:`locks`."""
        n = len(mods)
        if n == 0:
            return self
        tail = self.entries[-n:]
        if len(self.entries) < n or tail != tuple(LockEntry(mu) for mu in mods):
            raise ScopeError("context does not end in the expected lock telescope", self)
        return SCtx(self.root, self.entries[:-n], mods[0].cod)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True, slots=True)
class LockTele:
    """A sequence of locks appended at mode ``outer``."""

    outer: str
    mods: tuple[Modality, ...] = ()
    inner: str = field(default="", compare=False, repr=False)

    def __post_init__(self) -> None:
        mode = self.outer
        for mu in self.mods:
            if mu.cod != mode:
                raise ScopeError(f"lock {mu.name} does not chain at mode {mode}", mu)
            mode = mu.dom
        object.__setattr__(self, "inner", mode)

    def __len__(self) -> int:
        return len(self.mods)

    def __add__(self, other: LockTele) -> LockTele:
        if other.outer != self.inner:
            raise ScopeError("lock telescopes do not chain", other)
        return LockTele(self.outer, self.mods + other.mods)

    def entries(self) -> tuple[Entry, ...]:
        return tuple(LockEntry(mu) for mu in self.mods)


@dataclass(frozen=True, slots=True)
class ScopeTele:
    """A sequence of variable and lock entries appended at mode ``outer``."""

    outer: str
    entries: tuple[Entry, ...] = ()
    inner: str = field(default="", compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "inner", _walk(self.outer, self.entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __add__(self, other: ScopeTele) -> ScopeTele:
        if other.outer != self.inner:
            raise ScopeError("scoping telescopes do not chain", other)
        return ScopeTele(self.outer, self.entries + other.entries)


@dataclass(frozen=True)
class Verdict:
    """Outcome of a scope check; truthy on success."""

    ok: bool
    reason: str = ""
    culprit: object = None

    def __bool__(self) -> bool:
        return self.ok


def mode_of(ctx: SCtx) -> str:
    return ctx.mode


def locks_of(mt: ModeTheory, tele: LockTele) -> Modality:
    return mt.compose_all(tele.mods, tele.outer)


def append_scope_tele(ctx: SCtx, tele: ScopeTele) -> SCtx:
    if tele.outer != ctx.mode:
        raise ScopeError(f"telescope starts at {tele.outer}, context is at {ctx.mode}", tele)
    return SCtx(ctx.root, ctx.entries + tele.entries, tele.inner)


def append_lock_tele(ctx: SCtx, tele: LockTele) -> SCtx:
    if tele.outer != ctx.mode:
        raise ScopeError(f"telescope starts at {tele.outer}, context is at {ctx.mode}", tele)
    return SCtx(ctx.root, ctx.entries + tele.entries(), tele.inner)


def enumerate_lock_teles(mt: ModeTheory, start_mode: str, max_len: int) -> list[LockTele]:
    """All lock telescopes at ``start_mode`` of length at most ``max_len``, shortest first."""
    out = [LockTele(start_mode)]
    frontier = [LockTele(start_mode)]
    for _ in range(max_len):
        nxt = []
        for tele in frontier:
            for mu in mt.modalities_into(tele.inner):
                nxt.append(LockTele(start_mode, tele.mods + (mu,)))
        out.extend(nxt)
        frontier = nxt
    return out


def enumerate_vars(mt: ModeTheory, ctx: SCtx, target_mode: str | None = None) -> list[SVar]:
    """Every well-scoped variable of ``ctx``, innermost binder first."""
    if target_mode is not None and target_mode != ctx.mode:
        return []
    out: list[SVar] = []
    locks: list[Modality] = []
    skipped = 0
    for e in reversed(ctx.entries):
        if isinstance(e, LockEntry):
            locks.append(e.mu)
            continue
        if e.mu.dom == ctx.mode:
            lam = mt.compose_all(reversed(locks), e.mu.cod)
            for alpha in mt.cells_between(e.mu, lam):
                out.append(make_var(skipped, alpha))
        skipped += 1
    return out


def enumerate_contexts(mt: ModeTheory, root: str, max_len: int) -> list[SCtx]:
    """All contexts rooted at ``root`` with at most ``max_len`` entries."""
    out = [SCtx(root)]
    frontier = [SCtx(root)]
    for _ in range(max_len):
        nxt = []
        for ctx in frontier:
            for mu, kind in product(mt.modalities_into(ctx.mode), (VarEntry, LockEntry)):
                nxt.append(ctx.ext(mu) if kind is VarEntry else ctx.lock(mu))
        out.extend(nxt)
        frontier = nxt
    return out
