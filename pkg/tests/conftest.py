"""Shared test helpers: finite-difference oracle and random AST corpus."""

from __future__ import annotations

import math
import random

import numpy as np

from paranorms import expr as ex

EPS = np.finfo(float).eps
FD_REL_TOL = 1e-6

# expression texts for every built-in family shape
FAMILY_EXPRESSIONS = [
    "t^2",
    "t^3",
    "t^4",
    "exp(t)-1",
    "exp(0.6931471805599453*t)-1",   # a = 2
    "t*exp(t)",
    "t^2*exp(t)",
    "t^3/(t+1)",
    "t^2/(t+1)",
]


def _eval_or_none(e, t):
    try:
        v = ex.evaluate(e, t)
    except ex.EvalDomainError:
        return None
    return v if math.isfinite(v) else None


def central_difference(e, t):
    """Central difference with h = cbrt(machine eps) * max(1, |t|).

    Returns None when the oracle cannot vouch for its own accuracy at t:
    out-of-domain evaluations, or the h and h/2 estimates disagreeing by
    more than a quarter of the comparison tolerance."""
    h = EPS ** (1.0 / 3.0) * max(1.0, abs(t))
    vals = [_eval_or_none(e, t + d) for d in (-h, -h / 2, h / 2, h)]
    if any(v is None for v in vals):
        return None
    fm, fm2, fp2, fp = vals
    fd_h = (fp - fm) / (2.0 * h)
    fd_h2 = (fp2 - fm2) / h
    if not (math.isfinite(fd_h) and math.isfinite(fd_h2)):
        return None
    if abs(fd_h - fd_h2) > 0.25 * FD_REL_TOL * max(1.0, abs(fd_h2)):
        return None
    return fd_h2


def fd_matches_symbolic(e, ts, min_checked):
    """Assert symbolic-vs-FD agreement at every t the oracle trusts."""
    d = ex.simplify(ex.differentiate(e))
    checked = 0
    for t in ts:
        cd = central_difference(e, float(t))
        if cd is None:
            continue
        try:
            sym = ex.evaluate(d, float(t))
        except ex.EvalDomainError:
            continue
        tol = FD_REL_TOL * max(1.0, abs(cd))
        assert abs(sym - cd) <= tol, \
            f"{ex.to_text(e)} at t={t}: symbolic {sym} vs FD {cd}"
        checked += 1
    assert checked >= min_checked, \
        f"only {checked} FD-checkable points for {ex.to_text(e)}"
    return checked


def random_expr(rng: random.Random, depth: int = 3) -> ex.Expr:
    """Random AST over the grammar, excluding log and fractional exponents
    (their curvature near 0 exceeds what the FD oracle can resolve)."""
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.4:
            return ex.Const(round(rng.uniform(0.25, 4.0), 3))
        return ex.Var()
    kind = rng.choice(["add", "sub", "mul", "div", "pow", "exp", "neg"])
    a = random_expr(rng, depth - 1)
    if kind == "pow":
        return ex.Pow(a, ex.Const(float(rng.choice([2, 3]))))
    if kind == "exp":
        return ex.Exp(a)
    if kind == "neg":
        return ex.Neg(a)
    b = random_expr(rng, depth - 1)
    return {"add": ex.Add, "sub": ex.Sub, "mul": ex.Mul, "div": ex.Div}[kind](a, b)


def random_ast_corpus(n: int, seed: int, ts) -> list:
    """n random ASTs that evaluate finitely at enough sample points."""
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        e = random_expr(rng)
        usable = sum(1 for t in ts
                     if central_difference(e, float(t)) is not None)
        if usable >= 20:
            out.append(e)
    return out


TS_LOG = np.logspace(-6, math.log10(50.0), 200)
