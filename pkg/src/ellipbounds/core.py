"""Reference evaluators for the complete elliptic integrals.

Three independent routes are provided:

* arithmetic-geometric mean (the primary evaluator),
* truncated Gauss hypergeometric series,
* adaptive quadrature of the defining integrals (see :mod:`ellipbounds.quadrature`).

Notation follows the usual Legendre convention in terms of the modulus ``r``
(not the parameter ``m = r**2``)::

    K(r) = int_0^{pi/2} dt / sqrt(1 - r^2 sin^2 t)
    E(r) = int_0^{pi/2} sqrt(1 - r^2 sin^2 t) dt

and the two-parameter forms::

    K(r, s) = int_0^{pi/2} dt / sqrt(r^2 cos^2 t + s^2 sin^2 t)
    E(r, s) = int_0^{pi/2} sqrt(r^2 cos^2 t + s^2 sin^2 t) dt
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError, TruncationError

HALF_PI = 0.5 * math.pi

#: Limit of K(r) and E(r) as r -> 0+.
K_AT_ZERO = HALF_PI
E_AT_ZERO = HALF_PI
#: Limit of E(r) as r -> 1-.  K(r) diverges there; asking for it raises DomainError.
E_AT_ONE = 1.0

AGM_MAX_ITER = 64
AGM_ULPS = 4


@dataclass(frozen=True)
class Modulus:
    """A modulus ``r`` in the open interval (0, 1) with its complement ``sqrt(1 - r^2)``."""

    r: float
    r_comp: float = field(init=False)

    def __post_init__(self):
        r = float(self.r)
        if not math.isfinite(r) or not 0.0 < r < 1.0:
            if r == 1.0:
                raise DomainError("modulus r=1 is outside (0, 1); K diverges there (E -> 1)")
            raise DomainError(f"modulus must satisfy 0 < r < 1, got {self.r!r}")
        object.__setattr__(self, "r", r)
        # (1 - r)(1 + r) keeps full relative accuracy as r -> 1
        object.__setattr__(self, "r_comp", math.sqrt((1.0 - r) * (1.0 + r)))

    @property
    def complement(self) -> "Modulus":
        """The complementary modulus, so that K'(r) = K(r')."""
        return Modulus(self.r_comp)


@dataclass(frozen=True)
class AxisPair:
    """Positive semi-axis pair ``(r, s)`` for the two-parameter integrals."""

    r: float
    s: float

    def __post_init__(self):
        for name in ("r", "s"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v <= 0.0:
                raise DomainError(f"axis {name} must be finite and > 0, got {getattr(self, name)!r}")
            object.__setattr__(self, name, v)

    def scaled(self, c: float) -> "AxisPair":
        return AxisPair(c * self.r, c * self.s)


@dataclass(frozen=True)
class SeriesPolicy:
    """Truncation control for the power series evaluators.

    Summation stops once a geometric bound on the remaining tail falls below
    ``term_tol`` times the partial sum.
    """

    max_terms: int = 200_000
    term_tol: float = 2.0**-53

    def __post_init__(self):
        if int(self.max_terms) < 1:
            raise ValueError("max_terms must be >= 1")
        if not self.term_tol > 0:
            raise ValueError("term_tol must be > 0")


DEFAULT_POLICY = SeriesPolicy()


def as_modulus(m) -> Modulus:
    return m if isinstance(m, Modulus) else Modulus(m)


def as_axis_pair(p, s=None) -> AxisPair:
    if isinstance(p, AxisPair):
        return p
    if s is None:
        p, s = p
    return AxisPair(p, s)


def _check_positive(name, v):
    v = float(v)
    if not math.isfinite(v) or v <= 0.0:
        raise DomainError(f"{name} must be finite and > 0, got {v!r}")
    return v


def _agm_run(x, y):
    """Run the AGM iteration; return (limit, [c_1, c_2, ...]) with c_{n+1} = (a_n - b_n)/2."""
    a, b = x, y
    cs = []
    for _ in range(AGM_MAX_ITER):
        if abs(a - b) <= AGM_ULPS * math.ulp(max(a, b)):
            break
        lo, hi = (a, b) if a < b else (b, a)
        cs.append(0.5 * (a - b))
        # 0.5*a + 0.5*b and sqrt(a)*sqrt(b) avoid overflow for huge inputs;
        # clamping keeps rounding from leaving [lo, hi]
        a, b = (
            min(max(0.5 * a + 0.5 * b, lo), hi),
            min(max(math.sqrt(lo) * math.sqrt(hi), lo), hi),
        )
    lo, hi = (a, b) if a < b else (b, a)
    return min(max(0.5 * a + 0.5 * b, lo), hi), cs


def agm(x: float, y: float) -> float:
    """Arithmetic-geometric mean of two positive numbers.

    >>> agm(2.0, 2.0)
    2.0
    """
    x = _check_positive("x", x)
    y = _check_positive("y", y)
    if x == y:
        return x
    return _agm_run(x, y)[0]


def complete_k(m) -> float:
    """Complete elliptic integral of the first kind, ``pi / (2 agm(1, r'))``."""
    m = as_modulus(m)
    return HALF_PI / agm(1.0, m.r_comp)


def _e_from_agm(a0, b0, half_c0sq):
    """E-type integral for the AGM pair (a0, b0); ``half_c0sq`` is |a0^2 - b0^2|/2."""
    if a0 == b0:
        return HALF_PI * a0
    g, cs = _agm_run(a0, b0)
    tail = math.fsum([(2.0 ** (n - 1)) * c * c for n, c in enumerate(cs, start=1)])
    hi = max(a0, b0)
    return (HALF_PI / g) * ((hi * hi - half_c0sq) - tail)


def complete_e(m) -> float:
    """Complete elliptic integral of the second kind via the AGM descent sum.

    Uses ``E = K * (1 - r^2/2 - sum_{n>=1} 2^(n-1) c_n^2)``.
    """
    m = as_modulus(m)
    return _e_from_agm(1.0, m.r_comp, 0.5 * m.r * m.r)


def k_two_param(p, s=None) -> float:
    """``K(r, s) = pi / (2 agm(r, s))``."""
    p = as_axis_pair(p, s)
    return HALF_PI / agm(p.r, p.s)


def e_two_param(p, s=None) -> float:
    """``E(r, s)``, symmetric in its arguments and homogeneous of degree one."""
    p = as_axis_pair(p, s)
    hi, lo = max(p.r, p.s), min(p.r, p.s)
    # |hi^2 - lo^2| / 2 written as a product to avoid cancellation
    return _e_from_agm(hi, lo, 0.5 * (hi - lo) * (hi + lo))


def hyper_gauss(a: float, b: float, c: float, x: float, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Truncated series for the Gauss hypergeometric function ``2F1(a, b; c; x)``, 0 <= x < 1.

    The tail after the current term is bounded by ``|t_next| / (1 - x)``, which
    is valid once the term ratio ``(a+n)(b+n)/((c+n)(n+1))`` is at most one in
    magnitude; this is the case for the two instances behind K and E.

    Raises TruncationError if the bound is not met within ``policy.max_terms``.
    """
    if c <= 0 and float(c).is_integer():
        raise DomainError(f"c must not be a non-positive integer, got {c!r}")
    if not 0.0 <= x < 1.0:
        raise DomainError(f"series requires 0 <= x < 1, got {x!r}")
    total, comp = 0.0, 0.0
    term = 1.0
    inv_gap = 1.0 / (1.0 - x)
    for n in range(policy.max_terms):
        # Neumaier compensated accumulation
        t = total + term
        if abs(total) >= abs(term):
            comp += (total - t) + term
        else:
            comp += (term - t) + total
        total = t
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * x
        if abs(term) * inv_gap <= policy.term_tol * abs(total + comp):
            return total + comp
    raise TruncationError("hypergeometric series did not converge", policy.max_terms, total + comp)


def complete_k_series(m, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """K(r) = (pi/2) F(1/2, 1/2; 1; r^2)."""
    m = as_modulus(m)
    return HALF_PI * hyper_gauss(0.5, 0.5, 1.0, m.r * m.r, policy)


def complete_e_series(m, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """E(r) = (pi/2) F(-1/2, 1/2; 1; r^2)."""
    m = as_modulus(m)
    return HALF_PI * hyper_gauss(-0.5, 0.5, 1.0, m.r * m.r, policy)


def central_ratio(n: int) -> float:
    """``(2n-1)!! / (2n)!!`` as a running product; 1 for n = 0."""
    if n < 0:
        raise DomainError("n must be >= 0")
    q = 1.0
    for k in range(1, n + 1):
        q *= (2 * k - 1) / (2 * k)
    return q


def wallis(i: int) -> float:
    """``int_0^{pi/2} sin^(2i) t dt = (pi/2) (2i-1)!!/(2i)!!``."""
    return HALF_PI * central_ratio(i)


def binomial_series_inv_sqrt(t: float, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Sum ``sum_n (2n-1)!!/(2n)!! t^(2n)``, the expansion of ``1/sqrt(1 - t^2)``."""
    if not -1.0 < t < 1.0:
        raise DomainError(f"|t| must be < 1, got {t!r}")
    x = t * t
    inv_gap = 1.0 / (1.0 - x)
    terms = []
    term = 1.0
    for n in range(policy.max_terms):
        terms.append(term)
        term *= (2 * n + 1) / (2 * n + 2) * x
        if term * inv_gap <= policy.term_tol * terms[0]:
            return math.fsum(terms)
    raise TruncationError("binomial series did not converge", policy.max_terms, math.fsum(terms))
