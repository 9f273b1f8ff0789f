"""Lupas bracketing engine.

For f, g with square-integrable derivatives on [a, b]::

    | mean(f g) - mean(f) mean(g) | <= (b - a) / pi^2 * ||f'||_2 * ||g'||_2

:func:`lupas_bracket` evaluates both sides by quadrature.
:func:`reproduce_theorem_bracket` runs the same engine with f = g equal to one
of the elliptic integrands and inverts the result into a bracket on K or E,
which gives a numerical counterpart of each closed-form bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import quadrature as q
from .bounds import BoundFamily, Bracket, bracket_for
from .core import as_axis_pair, as_modulus
from .errors import DomainError, UsageError

PI = math.pi
HALF_PI = 0.5 * math.pi
#: Largest modulus accepted for the 1/sqrt(1 - r^2 sin^2 t) family; ||f'||_2 grows like (1-r^2)^(-5/4).
MAX_SINGULAR_R = 0.999

SmoothFunction = q.Integrand


@dataclass(frozen=True)
class LupasResult:
    mean_f: float
    mean_g: float
    radius: float
    bracket: Bracket
    norm_f: float = float("nan")
    norm_g: float = float("nan")
    error_budget: float = 0.0

    @property
    def center(self) -> float:
        return self.mean_f * self.mean_g


@dataclass(frozen=True)
class LemmaCheck:
    gap: float
    radius: float
    budget: float

    @property
    def holds(self) -> bool:
        return self.gap <= self.radius + self.budget


def _require_derivative(f):
    if not f.has_derivative:
        raise DomainError(f"{f!r} has no analytic derivative; the Lupas radius needs one")


def lupas_bracket(f, g, a: float, b: float, tol: float = 1e-12) -> LupasResult:
    """Lupas bracket for the mean of ``f * g`` over [a, b]."""
    _require_derivative(f)
    _require_derivative(g)
    width = b - a
    ef = q.integrate(f, a, b, tol)
    eg = ef if g is f else q.integrate(g, a, b, tol)
    nf2 = q.integrate(q.derivative_squared(f), a, b, tol)
    ng2 = nf2 if g is f else q.integrate(q.derivative_squared(g), a, b, tol)
    mf, mg = ef.value / width, eg.value / width
    nf, ng = math.sqrt(max(nf2.value, 0.0)), math.sqrt(max(ng2.value, 0.0))
    radius = width / PI**2 * nf * ng

    # first-order propagation of the quadrature error estimates
    def dnorm(n, est):
        return est.abs_error_estimate / (2.0 * n) if n > 0 else math.sqrt(est.abs_error_estimate)

    budget = (
        abs(mg) * ef.abs_error_estimate / width
        + abs(mf) * eg.abs_error_estimate / width
        + width / PI**2 * (ng * dnorm(nf, nf2) + nf * dnorm(ng, ng2))
    )
    center = mf * mg
    return LupasResult(mf, mg, radius, Bracket(center - radius, center + radius, None), nf, ng, budget)


def mean_product(f, g, a: float, b: float, tol: float = 1e-12) -> q.QuadratureEstimate:
    """Mean of ``f * g`` over [a, b] (value and error estimate both divided by b - a)."""
    est = q.integrate(q.product(f, g), a, b, tol)
    w = b - a
    return q.QuadratureEstimate(est.value / w, est.abs_error_estimate / w, est.evaluations)


def check_lemma(f, g, a: float, b: float, tol: float = 1e-12) -> LemmaCheck:
    """Compare the true gap ``|mean(fg) - mean f mean g|`` with the Lupas radius."""
    res = lupas_bracket(f, g, a, b, tol)
    mfg = mean_product(f, g, a, b, tol)
    gap = abs(mfg.value - res.center)
    budget = res.error_budget + mfg.abs_error_estimate + 8 * q.EPS * (abs(mfg.value) + abs(res.center))
    budget = float(budget)
    return LemmaCheck(gap, res.radius, budget)


# -- catalog access ----------------------------------------------------------

def _floats(text):
    return [float(x) for x in text.split(",") if x.strip()]


def parse_function(spec: str) -> SmoothFunction:
    """Build a catalog function from a short textual spec.

    ``t`` / ``identity``, ``sin``, ``cos``, ``sin^k``, ``cos^k``, ``const:c``,
    ``poly:c0,c1,...``, ``e:r``, ``k:r``, ``e2:r,s``, ``k2:r,s``.
    """
    spec = spec.strip()
    head, _, arg = spec.partition(":")
    head = head.lower()
    try:
        if head in ("t", "identity"):
            return q.identity()
        if head in ("sin", "cos"):
            return q.sin_power(1) if head == "sin" else q.cos_power(1)
        if head.startswith("sin^"):
            return q.sin_power(int(head[4:]))
        if head.startswith("cos^"):
            return q.cos_power(int(head[4:]))
        if head in ("const", "constant"):
            return q.constant(float(arg))
        if head in ("poly", "polynomial"):
            return q.polynomial(_floats(arg))
        if head == "e":
            return q.e_integrand(float(arg))
        if head == "k":
            return q.k_integrand(_admissible_r(float(arg)))
        if head in ("e2", "k2"):
            r, s = _floats(arg)
            return q.e2_integrand(r, s) if head == "e2" else q.k2_integrand(r, s)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"cannot parse function spec {spec!r}: {exc}") from exc
    raise UsageError(f"unknown function spec {spec!r}")


def _admissible_r(r):
    if not 0.0 <= r <= MAX_SINGULAR_R:
        raise DomainError(f"modulus {r!r} outside the engine's admissible range [0, {MAX_SINGULAR_R}]")
    return r


def random_catalog_function(rng: np.random.Generator) -> SmoothFunction:
    kind = rng.integers(0, 7)
    if kind == 0:
        deg = int(rng.integers(0, 7))
        return q.polynomial(rng.uniform(-1.0, 1.0, deg + 1))
    if kind == 1:
        return q.sin_power(int(rng.integers(1, 5)))
    if kind == 2:
        return q.cos_power(int(rng.integers(1, 5)))
    if kind == 3:
        return q.e_integrand(float(rng.uniform(0.0, 0.999)))
    if kind == 4:
        return q.k_integrand(float(rng.uniform(0.0, 0.99)))
    r, s = np.exp(rng.uniform(np.log(0.1), np.log(10.0), 2))
    return q.e2_integrand(r, s) if kind == 5 else q.k2_integrand(r, s)


def random_catalog_pair(rng: np.random.Generator):
    """Random ``(f, g, a, b)`` drawn from the catalog, with [a, b] inside [0, pi/2]."""
    f = random_catalog_function(rng)
    g = random_catalog_function(rng)
    a, b = np.sort(rng.uniform(0.0, HALF_PI, 2))
    if b - a < 0.1:
        a, b = 0.0, HALF_PI
    return f, g, float(a), float(b)


# -- theorem pipelines ----------------------------------------------------------

_THEOREMS = {
    BoundFamily.E_Eq31: BoundFamily.E_Eq31,
    BoundFamily.K_Eq35: BoundFamily.K_Eq35,
    BoundFamily.E2_Eq39: BoundFamily.E2_Eq39,
    BoundFamily.K2_Eq311_derived: BoundFamily.K2_Eq311_derived,
    BoundFamily.K2_Eq313_derived: BoundFamily.K2_Eq311_derived,
}


def theorem_integrand(theorem, params) -> SmoothFunction:
    fam = _THEOREMS.get(BoundFamily.parse(theorem))
    if fam is None:
        raise UsageError(f"no Lupas pipeline for {theorem}; choose from e-eq31, k-eq35, e2-eq39, k2-eq311-derived")
    if fam is BoundFamily.E_Eq31:
        return q.e_integrand(as_modulus(params).r)
    if fam is BoundFamily.K_Eq35:
        return q.k_integrand(_admissible_r(as_modulus(params).r))
    p = as_axis_pair(params)
    if fam is BoundFamily.E2_Eq39:
        return q.e2_integrand(p.r, p.s)
    return q.k2_integrand(p.r, p.s)


def reproduce_theorem_bracket(theorem, params, tol: float = 1e-12) -> Bracket:
    """Numerical bracket on the integral behind ``theorem``.

    With ``f = g`` the theorem's integrand on [0, pi/2], the engine gives
    ``mean(f)^2 in [mean(f^2) - R, mean(f^2) + R]``; the integral is
    ``(pi/2) mean(f)``.  ``mean(f^2)`` is an elementary integral and is taken
    by quadrature, as is ``R``.
    """
    fam = BoundFamily.parse(theorem)
    f = theorem_integrand(fam, params)
    res = lupas_bracket(f, f, 0.0, HALF_PI, tol)
    msq = q.mean_value(q.square(f), 0.0, HALF_PI, tol)
    lo = msq - res.radius
    return Bracket(
        HALF_PI * math.sqrt(max(lo, 0.0)),
        HALF_PI * math.sqrt(msq + res.radius),
        fam,
        lo < 0,
    )


def closed_form_bracket(theorem, params) -> Bracket:
    """The closed-form bracket matching a Lupas pipeline."""
    fam = BoundFamily.parse(theorem)
    if fam is BoundFamily.K2_Eq311_derived:
        fam = BoundFamily.K2_Eq313_derived
    return bracket_for(fam, params)
