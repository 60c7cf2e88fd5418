"""Moduli of convexity: closed form, implicit equation, and the exact
two-dimensional exponential-generator modulus.

Domains: Delta = {(r, eps): 0 < eps < 2r} for moduli proper, and
Delta_phi = {(r, eps): phi(eps) <= 2 phi(r)} for the exponential arc
analysis.  Every returned delta lies strictly inside (0, r).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import conditions
from .generator import Generator


class ModulusError(Exception):
    pass


class DomainError(ModulusError):
    """(r, eps) outside the domain a method needs."""


class RouteUnavailableError(ModulusError):
    """The certification a method requires is absent."""


class UncertifiedUseWarning(UserWarning):
    """A modulus formula was evaluated without its certification."""


def in_delta(r: float, eps: float) -> bool:
    return r > 0 and 0 < eps < 2 * r


def in_delta_phi_exp(r: float, eps: float) -> bool:
    """Membership in Delta_phi for phi(t) = e^t - 1."""
    return r > 0 and eps > 0 and math.expm1(eps) <= 2.0 * math.expm1(r)


@dataclass(frozen=True)
class DeltaQuery:
    r: float
    eps: float
    domain: str = "Delta"          # "Delta" or "DeltaPhi"

    def __post_init__(self):
        if self.domain not in ("Delta", "DeltaPhi"):
            raise DomainError(f"unknown domain {self.domain!r}")
        if self.domain == "Delta" and not in_delta(self.r, self.eps):
            raise DomainError(
                f"(r, eps) = ({self.r!r}, {self.eps!r}) not in Delta (0 < eps < 2r)")
        if self.domain == "DeltaPhi" and not in_delta_phi_exp(self.r, self.eps):
            raise DomainError(
                f"(r, eps) = ({self.r!r}, {self.eps!r}) not in Delta_phi "
                "(phi(eps) <= 2 phi(r) for phi = e^t - 1)")


def _require_delta(r: float, eps: float):
    if not in_delta(r, eps):
        raise DomainError(
            f"(r, eps) = ({r!r}, {eps!r}) not in Delta (0 < eps < 2r)")


# ---------------------------------------------------------------------------
# closed-form modulus for superquadratic generators

def delta_eA(g: Generator, r: float, eps: float, *, certified: bool = False) -> float:
    """r - phi^-1(phi(r) - phi(eps/2)); valid under superquadraticity.

    Computes regardless of certification but warns when the caller has not
    certified the superquadratic route."""
    _require_delta(r, eps)
    if not certified:
        warnings.warn(
            f"delta_eA on {g.name} without a superquadratic certification",
            UncertifiedUseWarning, stacklevel=2)
    value = r - g.inverse(g.value(r) - g.value(eps / 2.0))
    if not 0.0 < value < r:
        raise ModulusError(f"delta_eA({r!r}, {eps!r}) = {value!r} not in (0, r)")
    return value


def delta_eA_residual(g: Generator, r: float, eps: float, delta: float) -> float:
    """|phi(r - delta) - (phi(r) - phi(eps/2))|, the defining identity."""
    return abs(g.value(r - delta) - (g.value(r) - g.value(eps / 2.0)))


def clarkson_delta(p: float, r: float, eps: float) -> float:
    """Power-generator specialization r - (r^p - (eps/2)^p)^(1/p).

    Uses the same power primitive as the generator evaluations, so the
    reduction from the general formula is exact to the last bit."""
    _require_delta(r, eps)
    y = float(np.power(np.asarray(r), p)) - float(np.power(np.asarray(eps / 2.0), p))
    return r - float(np.power(np.asarray(y), 1.0 / p))


# ---------------------------------------------------------------------------
# implicit modulus for strictly convex generators

def _lambda(g: Generator, u: float, v: float) -> float:
    return g.value(u + v) + g.value(abs(u - v))


def _is_strictly_convex(g: Generator) -> bool:
    if "strictly_convex" not in g._cache:
        report = conditions.check_strictly_convex(g, conditions.default_grid(g))
        g._cache["strictly_convex"] = report.holds
    return g._cache["strictly_convex"]


EF_REL_TOL = 1e-10
KINK_GUARD = 1e-8


def delta_eF(g: Generator, r: float, eps: float) -> float:
    """The unique delta in (0, r) with
    phi(r - delta + eps/2) + phi(|r - delta - eps/2|) = 2 phi(r).

    Bisection on u = r - delta (the map u -> lambda(u, eps/2) is strictly
    increasing for strictly convex phi), then Newton polish away from the
    |u - v| kink.  Refuses non-strictly-convex generators: monotonicity of
    lambda is unproven there."""
    _require_delta(r, eps)
    if not _is_strictly_convex(g):
        raise RouteUnavailableError(
            f"delta_eF needs a strictly convex generator; {g.name} failed "
            "the grid audit")
    v = eps / 2.0
    target = 2.0 * g.value(r)

    lo, hi = 0.0, r
    f_lo = _lambda(g, lo, v) - target       # = 2 phi(eps/2) - 2 phi(r) < 0
    if f_lo >= 0:
        raise DomainError(f"lambda(0, eps/2) >= 2 phi(r) at ({r!r}, {eps!r})")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _lambda(g, mid, v) - target < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-17 * max(1.0, hi):
            break
    u = 0.5 * (lo + hi)

    # Newton polish using d lambda/du, disabled near the kink u = v
    for _ in range(4):
        if abs(u - v) <= KINK_GUARD * max(1.0, v):
            break
        slope = g.deriv1(u + v) + math.copysign(1.0, u - v) * g.deriv1(abs(u - v))
        if not (slope > 0 and math.isfinite(slope)):
            break
        step = (_lambda(g, u, v) - target) / slope
        u2 = u - step
        if not (lo <= u2 <= hi):
            break
        u = u2
        if abs(step) <= 1e-17 * max(1.0, u):
            break

    residual = abs(_lambda(g, u, v) - target)
    if residual > EF_REL_TOL * g.value(r):
        raise ModulusError(
            f"eF residual {residual!r} above {EF_REL_TOL:g} * phi(r) "
            f"at ({r!r}, {eps!r})")
    delta = r - u
    if not 0.0 < delta < r:
        raise ModulusError(f"delta_eF({r!r}, {eps!r}) = {delta!r} not in (0, r)")
    return delta


def delta_eF_residual(g: Generator, r: float, eps: float, delta: float) -> float:
    """|lambda(r - delta, eps/2) - 2 phi(r)| at a candidate delta."""
    return abs(_lambda(g, r - delta, eps / 2.0) - 2.0 * g.value(r))


# ---------------------------------------------------------------------------
# modulus transport along a subadditive reparametrization

def _is_subadditive(psi: Generator) -> bool:
    if "subadditive" not in psi._cache:
        grid = conditions.default_grid(psi)
        pts = grid.points()
        s = pts[:, None]
        t = pts[None, :]
        lhs = psi.value_array(s) + psi.value_array(t)
        rhs = psi.value_array(s + t)
        scale = np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
        margins = (lhs - rhs) / scale
        ok = np.isfinite(margins)
        psi._cache["subadditive"] = bool(ok.any()) and \
            float(np.min(margins[ok])) >= -conditions.HOLD_SLACK
    return psi._cache["subadditive"]


def delta_psi_transform(delta_base, psi: Generator, r: float, eps: float) -> float:
    """Modulus of the composition psi(p(.)) given a modulus of p:
    r - psi(psi^-1(r) - delta_base(psi^-1(r), psi^-1(eps))).

    psi must be a strictly increasing subadditive bijection (grid-audited);
    the pulled-back pair must lie in the base domain."""
    _require_delta(r, eps)
    if not _is_subadditive(psi):
        raise RouteUnavailableError(
            f"psi transform needs a subadditive psi; {psi.name} failed the "
            "grid audit")
    r0 = psi.inverse(r)
    e0 = psi.inverse(eps)
    if not in_delta(r0, e0):
        raise DomainError(
            f"pulled-back pair ({r0!r}, {e0!r}) not in the base Delta")
    d0 = delta_base(r0, e0)
    if not 0.0 < d0 < r0:
        raise ModulusError(f"base modulus {d0!r} not in (0, {r0!r})")
    value = r - psi.value(r0 - d0)
    if not 0.0 < value < r:
        raise ModulusError(f"transformed modulus {value!r} not in (0, {r!r})")
    return value


# ---------------------------------------------------------------------------
# exact modulus for phi(t) = e^t - 1 on the plane with unit weights

X_AGREE_TOL = 1e-10
X_RESIDUAL_REL = 1e-12


def _require_delta_phi(r: float, eps: float):
    if not in_delta_phi_exp(r, eps):
        raise DomainError(
            f"(r, eps) = ({r!r}, {eps!r}) not in Delta_phi for e^t - 1")


def _x_closed_form(r: float, eps: float) -> float:
    # e^t - e^(r-t) = e^r - e^eps with u = e^t:
    # u^2 - b u - c = 0, b = e^r - e^eps, c = e^r; stable positive root
    b = math.exp(r) - math.exp(eps)
    c = math.exp(r)
    disc = math.sqrt(b * b + 4.0 * c)
    u = (b + disc) / 2.0 if b >= 0 else 2.0 * c / (disc - b)
    return math.log(u)


def _x_bisection(r: float, eps: float) -> float:
    # t -> phi(t) - phi(r - t) is strictly increasing on [0, r]
    target = math.expm1(r) - math.expm1(eps)
    lo, hi = 0.0, r
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if math.expm1(mid) - math.expm1(r - mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-17 * max(1.0, hi):
            break
    return 0.5 * (lo + hi)


def x_r_eps(r: float, eps: float) -> float:
    """Unique solution in [0, r] of phi(t) - phi(r-t) = phi(r) - phi(eps)
    for phi = e^t - 1, computed by the stable quadratic root and verified
    against bisection."""
    _require_delta_phi(r, eps)
    x_closed = _x_closed_form(r, eps)
    x_bisect = _x_bisection(r, eps)
    if abs(x_closed - x_bisect) > X_AGREE_TOL:
        raise ModulusError(
            f"closed-form and bisection roots disagree at ({r!r}, {eps!r}): "
            f"{x_closed!r} vs {x_bisect!r}")
    residual = abs((math.expm1(x_closed) - math.expm1(r - x_closed))
                   - (math.expm1(r) - math.expm1(eps)))
    if residual > X_RESIDUAL_REL * math.exp(r):
        raise ModulusError(
            f"x_r_eps residual {residual!r} above tolerance at ({r!r}, {eps!r})")
    return x_closed


def x_residual(r: float, eps: float, x: float) -> float:
    return abs((math.expm1(x) - math.expm1(r - x))
               - (math.expm1(r) - math.expm1(eps)))


def delta0(r: float, eps: float) -> float:
    """r - phi^-1( phi((x+r)/2) + phi( phi^-1(phi(r) - phi(x)) / 2 ) )
    with x = x_r_eps(r, eps); log1p/expm1 forms throughout."""
    _require_delta_phi(r, eps)
    x = x_r_eps(r, eps)
    first = math.expm1(0.5 * (x + r))
    inner = math.log1p(math.expm1(r) - math.expm1(x))
    second = math.expm1(0.5 * inner)
    value = r - math.log1p(first + second)
    if value == 0.0:
        # true value ~ e^r eps^2 / (8 (e^r+1)^2): below the resolution of
        # the final subtraction for this eps
        raise ModulusError(
            f"delta0({r!r}, {eps!r}) underflows double precision")
    if not 0.0 < value < r:
        raise ModulusError(f"delta0({r!r}, {eps!r}) = {value!r} not in (0, r)")
    return value


def delta_thm5(r: float, eps: float) -> float:
    """delta0(r, eps/4): the certified modulus on Delta for the planar
    exponential space with unit weights."""
    _require_delta(r, eps)
    # (r, eps/4) lies in Delta_phi automatically: eps/4 < r/2 < r
    return delta0(r, eps / 4.0)


# ---------------------------------------------------------------------------
# tables

@dataclass(frozen=True)
class ModulusRow:
    r: float
    eps: float
    method: str
    delta: float
    residual: float


@dataclass
class ModulusTable:
    rows: list

    CSV_COLUMNS = ("r", "eps", "method", "delta", "residual")

    def csv_rows(self):
        for row in self.rows:
            yield (row.r, row.eps, row.method, row.delta, row.residual)

    def to_dicts(self):
        return [
            {"r": row.r, "eps": row.eps, "method": row.method,
             "delta": row.delta, "residual": row.residual}
            for row in self.rows
        ]


def method_delta_fn(g: Generator, method: str, *, certified: bool = False):
    """(delta(r, eps), residual(r, eps, delta)) pair for a method name."""
    if method == "eA":
        return (lambda r, e: delta_eA(g, r, e, certified=certified),
                lambda r, e, d: delta_eA_residual(g, r, e, d))
    if method == "eF":
        return (lambda r, e: delta_eF(g, r, e),
                lambda r, e, d: delta_eF_residual(g, r, e, d))
    if method == "thm5":
        from .generator import is_exp_e
        if not is_exp_e(g):
            raise RouteUnavailableError(
                f"thm5 method needs the natural-base exp family, got {g.name}")
        return (lambda r, e: delta_thm5(r, e),
                lambda r, e, d: x_residual(r, e / 4.0, x_r_eps(r, e / 4.0)))
    if method == "clarkson":
        if g.family is None or g.family[0] != "power":
            raise RouteUnavailableError(
                f"clarkson method needs the power family, got {g.name}")
        p = g.family[1]["p"]
        return (lambda r, e: clarkson_delta(p, r, e),
                lambda r, e, d: delta_eA_residual(g, r, e, d))
    raise ModulusError(f"unknown modulus method {method!r}")


def build_table(g: Generator, method: str, rs, epss,
                *, certified: bool = False) -> ModulusTable:
    """Modulus table over the (r, eps) grid; pairs outside Delta are skipped."""
    delta_fn, residual_fn = method_delta_fn(g, method, certified=certified)
    rows = []
    for r in rs:
        for eps in epss:
            if not in_delta(r, eps):
                continue
            d = delta_fn(r, eps)
            rows.append(ModulusRow(r=float(r), eps=float(eps), method=method,
                                   delta=float(d),
                                   residual=float(residual_fn(r, eps, d))))
    return ModulusTable(rows)


def psi_transform_table(delta_base, psi: Generator, rs, epss) -> ModulusTable:
    """Table of transported moduli, tagged 'psi-transform'.

    Rows outside Delta, or whose pulled-back pair leaves the base domain,
    are skipped.  The method is not root-solved, so the residual column
    records nan."""
    rows = []
    for r in rs:
        for eps in epss:
            if not in_delta(r, eps):
                continue
            try:
                d = delta_psi_transform(delta_base, psi, float(r), float(eps))
            except DomainError:
                continue
            rows.append(ModulusRow(r=float(r), eps=float(eps),
                                   method="psi-transform", delta=float(d),
                                   residual=math.nan))
    return ModulusTable(rows)
