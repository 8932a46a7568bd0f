"""Command-line behaviour: golden outputs and exit codes."""

import io
import subprocess
import sys

import pytest

from mttsub.cli import NEGATIVE, OK, USAGE, run

from _support import THEORY_DIR

WA_VAR = ["--modes", "walking_arrow", "--root", "n", "--ctx", "() . mu lock mu"]
WA_PAIR = [
    "--modes", "walking_arrow", "--root", "n", "--ctx", "() lock mu",
    "--lhs", "(lock mu (ext 1@n ! true))", "--rhs", "(lock mu (ext 1@n ! false))",
    "--to", "() . 1@n lock mu",
]  # fmt: skip

# (argv, stdout, stderr, exit code); outputs checked by hand once, then frozen
GOLDEN = {
    "laws-ok": (["laws", "--modes", "walking_arrow"], "ok: all laws hold\n", "", OK),
    "laws-broken": (
        ["laws", "--modes", "chain3_broken"],
        "compose-assoc: (a, a, a) (a . a) . a = a but a . (a . a) = b\n"
        "compose-assoc: (a, b, a) (a . b) . a = a but a . (b . a) = b\n"
        "hcomp-assoc: (id(a), id(a), id(a)) id(a) != id(b)\n"
        "hcomp-assoc: (id(a), id(b), id(a)) id(a) != id(b)\n"
        "4 violation(s)\n",
        "",
        NEGATIVE,
    ),
    "normalize-v0": (["normalize", *WA_VAR, "--expr", "v0"], "(var 0 id(mu))\n", "", OK),
    "eq-sub-id": (["eq", *WA_VAR, "--lhs", "(sub v0 id)", "--rhs", "v0"], "EQUIV\n", "", OK),
    "eq-distinct": (
        ["eq", "--modes", "trivial", "--lhs", "true", "--rhs", "(sub false id)"],
        "DISTINCT\nlhs: true\nrhs: false\n",
        "",
        NEGATIVE,
    ),
    "check-unbound": (
        ["check", "--modes", "trivial", "--expr", "v0"],
        "scope error: v0 needs a context ending in a variable and a lock at the same modality\n",
        "",
        NEGATIVE,
    ),
    "check-weakening": (
        ["check", "--modes", "walking_arrow", "--root", "n", "--ctx", "() . mu", "--sub", "pi", "--to", "()"],
        "ok\n",
        "",
        OK,
    ),
    "embed-var": (
        ["embed", *WA_VAR, "--sexpr", "(var 0 id(mu))"],
        "(sub v0 (key id(mu) [mu] [mu] (ctx n . mu)))\n",
        "",
        OK,
    ),
    "obs-eq-unobservable": (["obs-eq", *WA_PAIR, "--depth", "4"], "OBS-EQUAL up to depth 4\n", "", OK),
    "eq-embedded-pair": (
        ["eq", *WA_PAIR],
        "DISTINCT\n"
        "lhs: (seq (lock mu (ext 1@n (wk !) (var 0 id(1@n)))) (lock mu (ext 1@n ida true)))\n"
        "rhs: (seq (lock mu (ext 1@n (wk !) (var 0 id(1@n)))) (lock mu (ext 1@n ida false)))\n",
        "",
        NEGATIVE,
    ),
    "obs-eq-swap": (
        [
            "obs-eq", "--modes", "trivial", "--ctx", "() . 1@m . 1@m",
            "--lhs", "(ext 1@m (ext 1@m ! v0) (sub v0 (lock 1@m pi)))", "--rhs", "id",
            "--to", "() . 1@m . 1@m",
        ],  # fmt: skip
        "DISTINCT\nlocks: []\nvar: (var 0 id(1@m))\nlhs: (var 1 id(1@m))\nrhs: (var 0 id(1@m))\n",
        "",
        NEGATIVE,
    ),
    "parse-error": (
        ["normalize", "--modes", "trivial", "--expr", "(lam"],
        "",
        "error: at offset 4: unclosed '(' at end of input\n",
        USAGE,
    ),
}


def invoke(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out, err)
    return out.getvalue(), err.getvalue(), code


@pytest.mark.parametrize("case", list(GOLDEN))
def test_golden(case):
    argv, stdout, stderr, code = GOLDEN[case]
    assert invoke(argv) == (stdout, stderr, code)


def golden_failures() -> list[str]:
    """Names of golden cases whose output or exit code changed."""
    return [name for name, (argv, *want) in GOLDEN.items() if invoke(argv) != tuple(want)]


def test_fuzz_requires_a_seed():
    _, err, code = invoke(["fuzz", "--modes", "trivial", "--count", "5"])
    assert code == USAGE
    assert "--seed" in err


def test_fuzz_is_reproducible():
    argv = ["fuzz", "--modes", "walking_arrow", "--seed", "7", "--count", "5", "--rule", "sub-key-compose-vertical"]
    first = invoke(argv)
    assert first == ("sub-key-compose-vertical: 5/5\nok\n", "", OK)
    assert invoke(argv) == first


def test_unknown_rule_and_theory():
    assert invoke(["fuzz", "--modes", "trivial", "--seed", "1", "--rule", "nope"])[2] == USAGE
    assert invoke(["laws", "--modes", "no_such_theory"])[2] == USAGE


def test_theory_by_path():
    assert invoke(["laws", "--modes", str(THEORY_DIR / "trivial.mt")]) == ("ok: all laws hold\n", "", OK)


def test_module_entry_point():
    done = subprocess.run(
        [sys.executable, "-m", "mttsub", "normalize", *WA_VAR, "--expr", "v0"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert (done.stdout, done.returncode) == ("(var 0 id(mu))\n", 0)
