"""Generator bijections phi: [0, inf) -> [0, inf) with phi(0) = 0.

A Generator bundles vectorized evaluation of phi, its first two derivatives
and a numerically robust inverse.  Built-in families carry closed forms; any
other shape comes in through a parsed expression with symbolic derivatives.

Bijectivity is audited on a finite grid at construction time, not proved;
certificates downstream carry the same "grid-audited" caveat.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from . import expr as ex

AUDIT_GRID_POINTS = 200
PHI0_TOL = 1e-12
INVERSE_REL_TOL = 1e-12


class GeneratorError(Exception):
    """Invalid generator or failed generator operation."""


class NotBijectiveError(GeneratorError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InverseOverflowError(GeneratorError):
    def __init__(self, y, t_max):
        super().__init__(
            f"inverse bracket growth failed: phi stays below {y!r} on (0, {t_max!r}]"
        )
        self.y = y
        self.t_max = t_max


class Generator:
    """Immutable evaluatable generator.

    The callables phi, d1, d2 take numpy arrays (any shape, including 0-d)
    and return arrays; overflow produces inf, never an exception.  Scalar
    entry points wrap them.  ``inverse`` uses the closed form when one
    exists, otherwise bracketing bisection grown geometrically from [0, 1]
    followed by Newton polishing.
    """

    def __init__(self, name, phi, d1, d2, t_max, inverse=None, family=None,
                 source_expr=None):
        self.name = name
        self._phi = phi
        self._d1 = d1
        self._d2 = d2
        self.t_max = float(t_max)
        self._inverse_closed = inverse
        self.family = family  # (kind, params dict) for built-ins
        self.source_expr = source_expr
        self._cache = {}
        self._audit()

    def __repr__(self):
        return f"Generator({self.name!r})"

    @property
    def has_closed_inverse(self) -> bool:
        return self._inverse_closed is not None

    # -- evaluation ---------------------------------------------------------

    def value(self, t) -> float:
        return float(self.value_array(np.asarray(t, dtype=float)))

    def deriv1(self, t) -> float:
        return float(self.deriv1_array(np.asarray(t, dtype=float)))

    def deriv2(self, t) -> float:
        return float(self.deriv2_array(np.asarray(t, dtype=float)))

    def value_array(self, t) -> np.ndarray:
        with np.errstate(all="ignore"):
            return np.asarray(self._phi(np.asarray(t, dtype=float)))

    def deriv1_array(self, t) -> np.ndarray:
        with np.errstate(all="ignore"):
            return np.asarray(self._d1(np.asarray(t, dtype=float)))

    def deriv2_array(self, t) -> np.ndarray:
        with np.errstate(all="ignore"):
            return np.asarray(self._d2(np.asarray(t, dtype=float)))

    # -- inverse ------------------------------------------------------------

    def inverse(self, y: float) -> float:
        """t >= 0 with |phi(t) - y| <= 1e-12 * max(1, y)."""
        y = float(y)
        if y < 0:
            raise GeneratorError(f"inverse of negative value {y!r}")
        if y == 0.0:
            return 0.0
        if self._inverse_closed is not None:
            with np.errstate(all="ignore"):
                return float(self._inverse_closed(np.asarray(y)))
        return self._inverse_bisect(y)

    def inverse_array(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        if self._inverse_closed is not None:
            with np.errstate(all="ignore"):
                out = np.asarray(self._inverse_closed(y))
            return np.where(y == 0.0, 0.0, out)
        return self._inverse_bisect_array(y)

    def _inverse_bisect(self, y: float) -> float:
        hi = 1.0
        while self.value(hi) < y:
            if hi >= self.t_max:
                raise InverseOverflowError(y, self.t_max)
            hi = min(hi * 2.0, self.t_max)
        lo = 0.0
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            if self.value(mid) < y:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-16 * max(1.0, hi):
                break
        t = 0.5 * (lo + hi)
        # Newton polish; the bracket keeps it from escaping the domain
        for _ in range(4):
            d = self.deriv1(t)
            if not (d > 0 and math.isfinite(d)):
                break
            step = (self.value(t) - y) / d
            t2 = t - step
            if not (lo <= t2 <= hi):
                break
            t = t2
            if abs(step) <= 1e-17 * max(1.0, t):
                break
        if abs(self.value(t) - y) > INVERSE_REL_TOL * max(1.0, y):
            raise GeneratorError(
                f"inverse residual too large at y={y!r}: t={t!r}, phi(t)={self.value(t)!r}"
            )
        return t

    def _inverse_bisect_array(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        shape = y.shape
        y = np.atleast_1d(y)
        hi = np.ones_like(y)
        with np.errstate(all="ignore"):
            for _ in range(64):
                need = self.value_array(hi) < y
                if not need.any():
                    break
                if np.any(need & (hi >= self.t_max)):
                    raise InverseOverflowError(
                        float(np.max(y[need & (hi >= self.t_max)])), self.t_max)
                hi = np.where(need, np.minimum(hi * 2.0, self.t_max), hi)
            else:
                raise InverseOverflowError(float(np.max(y)), self.t_max)
            lo = np.zeros_like(y)
            for _ in range(100):
                mid = 0.5 * (lo + hi)
                below = self.value_array(mid) < y
                lo = np.where(below, mid, lo)
                hi = np.where(below, hi, mid)
                if np.max(hi - lo) <= 1e-16 * max(1.0, float(np.max(hi))):
                    break
            t = 0.5 * (lo + hi)
            for _ in range(3):
                d = self.deriv1_array(t)
                ok = np.isfinite(d) & (d > 0)
                step = np.where(ok, (self.value_array(t) - y) / np.where(ok, d, 1.0), 0.0)
                t2 = t - step
                inside = (t2 >= lo) & (t2 <= hi)
                t = np.where(ok & inside, t2, t)
        return np.where(y == 0.0, 0.0, t).reshape(shape)

    # -- construction-time audit ---------------------------------------------

    def audit_grid(self) -> np.ndarray:
        grid = np.logspace(-6, math.log10(self.t_max), AUDIT_GRID_POINTS)
        return np.minimum(grid, self.t_max)

    def _audit(self):
        v0 = self.value(0.0)
        if not abs(v0) <= PHI0_TOL:
            raise GeneratorError(f"phi(0) = {v0!r}, expected 0 within {PHI0_TOL}")
        grid = self.audit_grid()
        vals = self.value_array(grid)
        bad = ~np.isfinite(vals)
        if bad.any():
            t_bad = float(grid[bad][0])
            raise GeneratorError(
                f"phi is not finite at t={t_bad!r} (within t_max={self.t_max!r})"
            )
        if vals[0] <= 0.0:
            raise NotBijectiveError(
                f"phi({float(grid[0])!r}) = {float(vals[0])!r} <= 0 = phi(0)",
                witness=(0.0, float(grid[0])),
            )
        drops = np.nonzero(np.diff(vals) <= 0.0)[0]
        if drops.size:
            i = int(drops[0])
            raise NotBijectiveError(
                "phi is not strictly increasing on the audit grid: "
                f"phi({float(grid[i])!r}) = {float(vals[i])!r} >= "
                f"phi({float(grid[i + 1])!r}) = {float(vals[i + 1])!r}",
                witness=(float(grid[i]), float(grid[i + 1])),
            )


# ---------------------------------------------------------------------------
# built-in families

def power(p: float) -> Generator:
    """phi(t) = t**p, p >= 1.  Closed-form inverse y**(1/p)."""
    p = float(p)
    if not p >= 1.0:
        raise GeneratorError(f"power family needs p >= 1, got {p!r}")
    c2 = p * (p - 1.0)

    def d2(t):
        if c2 == 0.0:
            return np.zeros_like(t)
        return c2 * np.power(t, p - 2.0)

    return Generator(
        name=f"power(p={p:g})",
        phi=lambda t: np.power(t, p),
        d1=lambda t: p * np.power(t, p - 1.0),
        d2=d2,
        inverse=lambda y: np.power(y, 1.0 / p),
        t_max=1e8,
        family=("power", {"p": p}),
    )


def exp_minus_one(a: float = math.e) -> Generator:
    """phi(t) = a**t - 1, a > 1.  Closed-form inverse log1p(y)/log(a)."""
    a = float(a)
    if not a > 1.0:
        raise GeneratorError(f"exp family needs a > 1, got {a!r}")
    c = math.log(a)
    return Generator(
        name=f"exp(a={a:g})",
        phi=lambda t: np.expm1(c * t),
        d1=lambda t: c * np.exp(c * t),
        d2=lambda t: c * c * np.exp(c * t),
        inverse=lambda y: np.log1p(y) / c,
        t_max=700.0 / c,
        family=("exp", {"a": a}),
    )


def power_times_exp(p: float, a: float) -> Generator:
    """phi(t) = t**p * a**t with p >= 1, a > 1."""
    p, a = float(p), float(a)
    if not p >= 1.0:
        raise GeneratorError(f"powexp family needs p >= 1, got p={p!r}")
    if not a > 1.0:
        raise GeneratorError(f"powexp family needs a > 1, got a={a!r}")
    c = math.log(a)
    c2 = p * (p - 1.0)

    # largest t keeping t**p * e**(c t) clear of double overflow
    t_hi = 700.0 / c
    while c * t_hi + p * math.log(t_hi) > 700.0:
        t_hi *= 0.99

    def d2(t):
        first = c2 * np.power(t, p - 2.0) if c2 != 0.0 else 0.0
        return np.exp(c * t) * (first + 2.0 * p * c * np.power(t, p - 1.0)
                                + c * c * np.power(t, p))

    return Generator(
        name=f"powexp(p={p:g},a={a:g})",
        phi=lambda t: np.power(t, p) * np.exp(c * t),
        d1=lambda t: np.exp(c * t) * (p * np.power(t, p - 1.0) + c * np.power(t, p)),
        d2=d2,
        t_max=t_hi,
        family=("powexp", {"p": p, "a": a}),
    )


def cubic_rational(p: float) -> Generator:
    """phi(t) = t**p / (t + 1) with p >= 1."""
    p = float(p)
    if not p >= 1.0:
        raise GeneratorError(f"cubicrational family needs p >= 1, got {p!r}")

    def d2(t):
        quad = ((p - 1.0) * (p - 2.0) * t * t + 2.0 * p * (p - 2.0) * t
                + p * (p - 1.0))
        return np.power(t, p - 2.0) * quad / (t + 1.0) ** 3

    return Generator(
        name=f"cubicrational(p={p:g})",
        phi=lambda t: np.power(t, p) / (t + 1.0),
        d1=lambda t: np.power(t, p - 1.0) * ((p - 1.0) * t + p) / (t + 1.0) ** 2,
        d2=d2,
        t_max=1e8,
        family=("cubicrational", {"p": p}),
    )


def from_expression(source, t_max: Optional[float] = None) -> Generator:
    """Generator from an expression text or AST; derivatives are symbolic."""
    tree = ex.parse(source) if isinstance(source, str) else source
    d1_tree = ex.simplify(ex.differentiate(tree))
    d2_tree = ex.simplify(ex.differentiate(d1_tree))
    if t_max is None:
        t_max = 700.0 if ex.contains_exp(tree) else 1e8
        # shapes like t^p * e^t overflow below t = 700; back the cap off
        for _ in range(500):
            if np.isfinite(ex.evaluate_array(tree, np.asarray(t_max))):
                break
            t_max *= 0.95

    def make_eval(node):
        return lambda t: ex.evaluate_array(node, t)

    return Generator(
        name=f"expr:{ex.to_text(tree)}",
        phi=make_eval(tree),
        d1=make_eval(d1_tree),
        d2=make_eval(d2_tree),
        t_max=t_max,
        family=("expr", {"text": ex.to_text(tree)}),
        source_expr=tree,
    )


def make_generator(spec) -> Generator:
    """Build a Generator from an Expr AST or expression text; Generators pass
    through unchanged."""
    if isinstance(spec, Generator):
        return spec
    return from_expression(spec)


def parse_family_spec(spec: str) -> Generator:
    """CLI generator syntax: power:p=V | exp:a=V | powexp:p=V,a=V |
    cubicrational:p=V | expr:TEXT.  The literal 'e' is accepted for a."""
    if ":" not in spec:
        raise GeneratorError(
            f"malformed generator spec {spec!r} (expected family:params)"
        )
    kind, _, rest = spec.partition(":")
    kind = kind.strip().lower()
    if kind == "expr":
        try:
            return from_expression(rest)
        except ex.ExprError as err:
            raise GeneratorError(f"bad expression in {spec!r}: {err}") from err
    params = {}
    for item in rest.split(","):
        if not item.strip():
            continue
        if "=" not in item:
            raise GeneratorError(f"malformed parameter {item!r} in {spec!r}")
        key, _, value = item.partition("=")
        value = value.strip()
        if value == "e":
            params[key.strip()] = math.e
            continue
        try:
            params[key.strip()] = float(value)
        except ValueError:
            raise GeneratorError(f"malformed number {value!r} in {spec!r}") from None
    try:
        if kind == "power":
            return power(params["p"])
        if kind == "exp":
            return exp_minus_one(params["a"])
        if kind == "powexp":
            return power_times_exp(params["p"], params["a"])
        if kind == "cubicrational":
            return cubic_rational(params["p"])
    except KeyError as missing:
        raise GeneratorError(f"missing parameter {missing} in {spec!r}") from None
    raise GeneratorError(f"unknown generator family {kind!r}")


def is_exp_e(g: Generator) -> bool:
    """True for the natural-base exponential family a = e."""
    return (g.family is not None and g.family[0] == "exp"
            and g.family[1]["a"] == math.e)
