"""Closed-form two-sided bounds for K and E.

Families (see :class:`BoundFamily`):

* ``E_Eq31``   -- E(r) from the Lupas gap of sqrt(1 - r^2 sin^2 t)
* ``K_Eq35``   -- K(r) from the Lupas gap of 1/sqrt(1 - r^2 sin^2 t)
* ``E2_Eq39``  -- E(r, s), after the extra step sin^2 t cos^2 t <= 1/4
* ``K2_Eq311_*`` -- center/radius certificates for K(r, s), three variants
* ``K2_Eq313_*`` -- the brackets on K(r, s) that those certificates imply
* ``E_GuoQi``  -- the older logarithmic bracket for E(r), kept as a baseline

For K(r, s) three variants are carried side by side, and only the last two
are valid bounds:

``literal``
    center ``1/(pi r s)``, radius ``|s^2-r^2| (s^2+r^2) / (32 r^3 s^3)``
``stated``
    center ``1/(r s)``, same radius
``derived``
    center ``1/(r s)``, radius ``(s^2-r^2)^2 / (32 r^3 s^3)``; this is exactly
    the Lupas radius of ``1/sqrt(r^2 cos^2 t + s^2 sin^2 t)`` on [0, pi/2].
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .core import (
    AxisPair,
    Modulus,
    as_axis_pair,
    as_modulus,
    complete_e,
    complete_k,
    e_two_param,
    k_two_param,
)
from .errors import DomainError, UsageError

PI = math.pi
SQRT2 = math.sqrt(2.0)


class BoundFamily(str, enum.Enum):
    E_Eq31 = "e-eq31"
    K_Eq35 = "k-eq35"
    E2_Eq39 = "e2-eq39"
    K2_Eq313_literal = "k2-eq313-literal"
    K2_Eq313_stated = "k2-eq313-stated"
    K2_Eq313_derived = "k2-eq313-derived"
    E_GuoQi = "e-guoqi"
    K2_Eq311_literal = "k2-eq311-literal"
    K2_Eq311_stated = "k2-eq311-stated"
    K2_Eq311_derived = "k2-eq311-derived"

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, name) -> "BoundFamily":
        if isinstance(name, cls):
            return name
        for fam in cls:
            if name in (fam.value, fam.name):
                return fam
        raise UsageError(f"unknown bound family {name!r}; choose from {', '.join(f.value for f in cls)}")

    @property
    def quantity(self) -> str:
        """Which integral is bounded: 'K', 'E', 'K2' or 'E2'."""
        return self.value.split("-")[0].upper()

    @property
    def dim(self) -> int:
        return 2 if self.quantity in ("K2", "E2") else 1

    @property
    def is_certificate(self) -> bool:
        return "eq311" in self.value

    @property
    def variant(self):
        tail = self.value.rsplit("-", 1)[-1]
        return tail if tail in ("literal", "stated", "derived") else None


CERT_FAMILIES = (BoundFamily.K2_Eq311_literal, BoundFamily.K2_Eq311_stated, BoundFamily.K2_Eq311_derived)
K2_BRACKET_FAMILIES = (BoundFamily.K2_Eq313_literal, BoundFamily.K2_Eq313_stated, BoundFamily.K2_Eq313_derived)


@dataclass(frozen=True)
class Bracket:
    lower: float
    upper: float
    family: BoundFamily
    clamped_lower: bool = False

    def __post_init__(self):
        if not self.lower <= self.upper:
            raise ValueError(f"bracket lower {self.lower!r} exceeds upper {self.upper!r}")

    def slack(self, x: float) -> float:
        """Distance from ``x`` to the nearest endpoint; negative when outside."""
        return min(x - self.lower, self.upper - x)

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.slack(x) >= -tol

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def scaled(self, c: float) -> "Bracket":
        return Bracket(c * self.lower, c * self.upper, self.family, self.clamped_lower)


@dataclass(frozen=True)
class CenterRadiusCertificate:
    """The statement ``|4/pi^2 * X^2 - center| <= radius`` about a quantity X."""

    center: float
    radius: float
    subject: str
    family: BoundFamily
    hypothesis_holds: bool = True

    def __post_init__(self):
        if not self.radius >= 0:
            raise ValueError("radius must be >= 0")

    def residual(self, x: float) -> float:
        return 4.0 / PI**2 * x * x - self.center

    def slack(self, x: float) -> float:
        return self.radius - abs(self.residual(x))

    def holds(self, x: float, tol: float = 0.0) -> bool:
        return self.slack(x) >= -tol

    def to_bracket(self, family: BoundFamily | None = None) -> Bracket:
        lo = self.center - self.radius
        return Bracket(
            0.5 * PI * math.sqrt(max(lo, 0.0)),
            0.5 * PI * math.sqrt(self.center + self.radius),
            family or self.family,
            lo < 0,
        )


# -- auxiliary functions from the proofs -------------------------------------

def h_aux(r: float) -> float:
    """``1 - sqrt(1 - r^2) - r^2/2`` on [0, 1]."""
    if not 0.0 <= r <= 1.0:
        raise DomainError(f"h_aux needs 0 <= r <= 1, got {r!r}")
    r2 = r * r
    rc = math.sqrt((1.0 - r) * (1.0 + r))
    # 1 - rc = r^2 / (1 + rc), so h = r^2 (1/(1+rc) - 1/2) = r^2 (1 - rc) / (2 (1 + rc))
    return r2 * r2 / (2.0 * (1.0 + rc) ** 2)


def p_aux(r: float) -> float:
    """``r / (1 - r^2)^(3/2)`` on [0, 1)."""
    if not 0.0 <= r < 1.0:
        raise DomainError(f"p_aux needs 0 <= r < 1, got {r!r}")
    return r / ((1.0 - r) * (1.0 + r)) ** 1.5


# -- one-parameter families -----------------------------------------------------

def bracket_e(m) -> Bracket:
    """Bracket on E(r): ``pi sqrt(6 + 2r' - 3r^2)/(4 sqrt 2) <= E <= pi sqrt(10 - 2r' - 5r^2)/(4 sqrt 2)``."""
    m = as_modulus(m)
    # (6 + 2r' - 3r^2)/8 = (1 - r^2/2) - h(r)/4 and (10 - 2r' - 5r^2)/8 = (1 - r^2/2) + h(r)/4;
    # the center/radius form keeps lower <= upper when the width drops below rounding
    center = 1.0 - 0.5 * m.r * m.r
    radius = 0.25 * h_aux(m.r)
    return Bracket(0.5 * PI * math.sqrt(center - radius), 0.5 * PI * math.sqrt(center + radius), BoundFamily.E_Eq31)


def bracket_k(m) -> Bracket:
    """Bracket on K(r): ``pi sqrt(32 r'^2 -+ r^4) / (8 sqrt 2 r'^(3/2))``; lower clamps to 0 past r*."""
    m = as_modulus(m)
    r4 = m.r**4
    rc2 = (1.0 - m.r) * (1.0 + m.r)
    scale = PI / (8.0 * SQRT2 * m.r_comp**1.5)
    lo_rad = 32.0 * rc2 - r4
    clamped = lo_rad < 0
    lower = 0.0 if clamped else scale * math.sqrt(lo_rad)
    return Bracket(lower, scale * math.sqrt(32.0 * rc2 + r4), BoundFamily.K_Eq35, clamped)


def bracket_e_guoqi(m) -> Bracket:
    """The logarithmic baseline bracket on E(r).

    The lower endpoint tends to -inf as r -> 1 and is reported unclamped.
    """
    m = as_modulus(m)
    r = m.r
    lower = 0.5 * PI - 0.5 * ((1.0 - r) * math.log1p(r) - (1.0 + r) * math.log1p(-r))
    if r < 1e-4:
        atanh_over_r = 1.0 + r * r / 3.0 + r**4 / 5.0
    else:
        atanh_over_r = math.atanh(r) / r
    # (1-r^2)/(4r) ln((1+r)/(1-r)) = (1-r^2) atanh(r) / (2r)
    upper = 0.5 * (PI - 1.0) + 0.5 * (1.0 - r) * (1.0 + r) * atanh_over_r
    return Bracket(lower, upper, BoundFamily.E_GuoQi)


# -- two-parameter families --------------------------------------------------------

def bracket_e2(p, s=None) -> Bracket:
    """Bracket on E(r, s): ``(pi/8) sqrt((8rs(r^2+s^2) -+ (s^2-r^2)^2) / (rs))``."""
    p = as_axis_pair(p, s)
    r, s = p.r, p.s
    rs = r * s
    d2 = ((s - r) * (s + r)) ** 2
    base = 8.0 * rs * (r * r + s * s)
    lo_rad = (base - d2) / rs
    clamped = lo_rad < 0
    lower = 0.0 if clamped else PI / 8.0 * math.sqrt(lo_rad)
    return Bracket(lower, PI / 8.0 * math.sqrt((base + d2) / rs), BoundFamily.E2_Eq39, clamped)


def cert_k2(p, variant=BoundFamily.K2_Eq311_derived) -> CenterRadiusCertificate:
    """Center/radius certificate for ``4/pi^2 K(r, s)^2``.

    ``variant`` is one of the ``K2_Eq311_*`` families (the variant suffix
    ``"literal"``, ``"stated"`` or ``"derived"`` is accepted too).  The radius
    uses ``|s^2 - r^2|`` so that the certificate is meaningful for any pair;
    ``hypothesis_holds`` records whether ``s > r`` as the theorem assumes.
    """
    p = as_axis_pair(p)
    fam = _cert_variant(variant)
    r, s = p.r, p.s
    rs = r * s
    rs3 = rs * rs * rs
    d = abs((s - r) * (s + r))
    if fam is BoundFamily.K2_Eq311_literal:
        center, radius = 1.0 / (PI * rs), d * (r * r + s * s) / (32.0 * rs3)
    elif fam is BoundFamily.K2_Eq311_stated:
        center, radius = 1.0 / rs, d * (r * r + s * s) / (32.0 * rs3)
    else:
        center, radius = 1.0 / rs, d * d / (32.0 * rs3)
    return CenterRadiusCertificate(center, radius, f"K({r!r}, {s!r})", fam, s > r)


def bracket_k2(p, variant=BoundFamily.K2_Eq313_derived) -> Bracket:
    """Bracket on K(r, s) obtained by solving the matching certificate for K.

    literal:  ``(pi/2) sqrt((32 r^2 s^2 -+ pi |s^4 - r^4|) / (32 pi r^3 s^3))``
    stated:   ``(pi/2) sqrt((32 r^2 s^2 -+ |s^4 - r^4|) / (32 r^3 s^3))``
    derived:  ``(pi/2) sqrt((32 r^2 s^2 -+ (s^2 - r^2)^2) / (32 r^3 s^3))``
    """
    fam = _bracket_variant(variant)
    cert_fam = {
        BoundFamily.K2_Eq313_literal: BoundFamily.K2_Eq311_literal,
        BoundFamily.K2_Eq313_stated: BoundFamily.K2_Eq311_stated,
        BoundFamily.K2_Eq313_derived: BoundFamily.K2_Eq311_derived,
    }[fam]
    return cert_k2(p, cert_fam).to_bracket(fam)


def _cert_variant(v) -> BoundFamily:
    if isinstance(v, str) and v in ("literal", "stated", "derived"):
        v = f"k2-eq311-{v}"
    fam = BoundFamily.parse(v)
    if fam not in CERT_FAMILIES:
        raise UsageError(f"{fam} is not a K(r, s) certificate family")
    return fam


def _bracket_variant(v) -> BoundFamily:
    if isinstance(v, str) and v in ("literal", "stated", "derived"):
        v = f"k2-eq313-{v}"
    fam = BoundFamily.parse(v)
    if fam not in K2_BRACKET_FAMILIES:
        raise UsageError(f"{fam} is not a K(r, s) bracket family")
    return fam


# -- dispatch --------------------------------------------------------------------

def bracket_for(family, params) -> Bracket:
    """Bracket of ``family`` at ``params`` (a Modulus/float or an AxisPair/(r, s))."""
    fam = BoundFamily.parse(family)
    if fam is BoundFamily.E_Eq31:
        return bracket_e(params)
    if fam is BoundFamily.K_Eq35:
        return bracket_k(params)
    if fam is BoundFamily.E_GuoQi:
        return bracket_e_guoqi(params)
    if fam is BoundFamily.E2_Eq39:
        return bracket_e2(as_axis_pair(params))
    if fam in K2_BRACKET_FAMILIES:
        return bracket_k2(params, fam)
    return cert_k2(params, fam).to_bracket()


def reference_value(family, params) -> float:
    """AGM value of the quantity ``family`` bounds."""
    q = BoundFamily.parse(family).quantity
    if q == "E":
        return complete_e(params)
    if q == "K":
        return complete_k(params)
    if q == "E2":
        return e_two_param(as_axis_pair(params))
    return k_two_param(as_axis_pair(params))


def lower_radicand(family, x: float) -> float:
    """Sign-carrying radicand of the lower endpoint along the family's one free variable.

    ``K_Eq35``: ``32 - 32 r^2 - r^4`` in the modulus r.
    ``E2_Eq39``: ``8c(1 + c^2) - (c^2 - 1)^2`` in the aspect ratio c = s/r
    (the radicand is homogeneous, so r = 1 loses nothing).
    """
    fam = BoundFamily.parse(family)
    if fam is BoundFamily.K_Eq35:
        x2 = x * x
        return 32.0 - 32.0 * x2 - x2 * x2
    if fam is BoundFamily.E2_Eq39:
        return 8.0 * x * (1.0 + x * x) - (x * x - 1.0) ** 2
    if fam is BoundFamily.E_Eq31:
        x2 = x * x
        return 6.0 + 2.0 * math.sqrt(max(1.0 - x2, 0.0)) - 3.0 * x2
    raise UsageError(f"{fam} has no lower radicand to inspect")


__all__ = [
    "AxisPair",
    "Bracket",
    "BoundFamily",
    "CenterRadiusCertificate",
    "Modulus",
    "bracket_e",
    "bracket_e2",
    "bracket_e_guoqi",
    "bracket_for",
    "bracket_k",
    "bracket_k2",
    "cert_k2",
    "h_aux",
    "lower_radicand",
    "p_aux",
    "reference_value",
]
