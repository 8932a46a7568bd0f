import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mttsub.errors import ScopeError
from mttsub.scoping import (
    LockEntry,
    LockTele,
    SCtx,
    ScopeTele,
    VarEntry,
    append_lock_tele,
    append_scope_tele,
    enumerate_contexts,
    enumerate_lock_teles,
    enumerate_vars,
    locks_of,
)
from mttsub.terms import Suc, VZero, make_var

from _support import VALID_THEORIES, theory


def test_lock_changes_mode_and_ext_keeps_it():
    mt = theory("walking_arrow")
    mu = mt.modality("mu")
    ctx = SCtx("n").ext(mu)
    assert ctx.mode == "n"
    assert ctx.lock(mu).mode == "m"
    with pytest.raises(ScopeError):
        ctx.lock(mu).ext(mu)


def test_locks_of_empty_is_identity():
    mt = theory("retract")
    assert locks_of(mt, LockTele("n")) == mt.identity("n")


def test_locks_of_walking_arrow():
    mt = theory("walking_arrow")
    mu = mt.modality("mu")
    assert locks_of(mt, LockTele("n", (mt.identity("n"), mu, mt.identity("m")))) == mu


@st.composite
def theory_and_teles(draw):
    mt = theory(draw(st.sampled_from(VALID_THEORIES)))
    mode = draw(st.sampled_from(mt.modes))
    first = draw(st.sampled_from(enumerate_lock_teles(mt, mode, 2)))
    second = draw(st.sampled_from(enumerate_lock_teles(mt, first.inner, 2)))
    return mt, first, second


@settings(max_examples=200, deadline=None)
@given(theory_and_teles())
def test_locks_of_is_a_homomorphism(data):
    mt, a, b = data
    assert locks_of(mt, a + b) == mt.compose(locks_of(mt, a), locks_of(mt, b))


@settings(max_examples=200, deadline=None)
@given(theory_and_teles())
def test_append_lock_tele_associates(data):
    mt, a, b = data
    root = SCtx(a.outer)
    assert append_lock_tele(append_lock_tele(root, a), b) == append_lock_tele(root, a + b)


def test_append_scope_tele_mode():
    mt = theory("walking_arrow")
    mu = mt.modality("mu")
    tele = ScopeTele("n", (VarEntry(mu), LockEntry(mu)))
    assert tele.inner == "m"
    assert append_scope_tele(SCtx("n"), tele).mode == "m"
    with pytest.raises(ScopeError):
        append_scope_tele(SCtx("m"), tele)


def _derivable(mt, entries, mode, v) -> bool:
    """Search the two variable rules directly: zero under a lock telescope, or a successor."""
    # split entries = before ++ [VarEntry mu] ++ theta with theta only locks
    for cut in range(len(entries) - 1, -1, -1):
        theta = entries[cut + 1 :]
        if not all(isinstance(e, LockEntry) for e in theta):
            break
        if not isinstance(entries[cut], VarEntry):
            continue
        mu = entries[cut].mu
        before = entries[:cut]
        lam = mt.identity(mu.cod)
        for e in theta:
            lam = mt.compose(lam, e.mu)
        if isinstance(v, VZero):
            if mu.dom == mode and v.cell in mt.cells_between(mu, lam):
                return True
        else:
            if _derivable(mt, before + theta, mode, v.var):
                return True
    return False


@pytest.mark.parametrize("name", VALID_THEORIES)
def test_enumerate_vars_matches_rule_search(name):
    mt = theory(name)
    cells = list(mt.cells.values())
    for root in mt.modes:
        for ctx in enumerate_contexts(mt, root, 4):
            got = enumerate_vars(mt, ctx)
            want = {
                make_var(i, c)
                for i in range(len(ctx.entries))
                for c in cells
                if _derivable(mt, ctx.entries, ctx.mode, make_var(i, c))
            }
            assert set(got) == want, ctx
            assert len(got) == len(set(got))


def test_enumerate_vars_innermost_first():
    mt = theory("trivial")
    one = mt.identity("m")
    ctx = SCtx("m").ext(one).ext(one).lock(one)
    idx = []
    for v in enumerate_vars(mt, ctx):
        n = 0
        while isinstance(v, Suc):
            v, n = v.var, n + 1
        idx.append(n)
    assert idx == [0, 1]


def test_walking_arrow_locked_variable_is_unreachable():
    # a unit variable at n behind a mu lock lives at n, the context is at m
    mt = theory("walking_arrow")
    ctx = SCtx("n").ext(mt.identity("n")).lock(mt.modality("mu"))
    assert enumerate_vars(mt, ctx) == []


def test_enumerate_lock_teles_shortest_first():
    mt = theory("walking_arrow")
    teles = enumerate_lock_teles(mt, "n", 2)
    assert teles[0] == LockTele("n")
    assert [len(t) for t in teles] == sorted(len(t) for t in teles)
    # n admits 1@n and mu, m admits only 1@m
    assert len(teles) == 1 + 2 + 3
