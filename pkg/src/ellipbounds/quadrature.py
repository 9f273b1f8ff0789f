"""Adaptive Gauss-Kronrod quadrature and the catalog of integrands it serves.

The catalog covers the defining integrands of K, E and their two-parameter
forms (always in trigonometric form, which is smooth on [0, pi/2]), sine and
cosine powers, the kernels that appear when bounding the Lupas gap for those
integrands, polynomials, and user-supplied functions.  Every catalog entry
evaluates on numpy arrays; entries with an analytic derivative carry it so
that L2 norms of derivatives never rely on finite differences.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import AccuracyError, DomainError

# Kronrod 15-point nodes (non-negative half) and weights; the embedded 7-point
# Gauss rule uses the odd-indexed nodes plus the centre.
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WK[:-1], _WK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[[1, 3, 5]] = _WG[:3]
GAUSS_WEIGHTS[[13, 11, 9]] = _WG[:3]
GAUSS_WEIGHTS[7] = _WG[3]

EPS = np.finfo(float).eps
MAX_DEPTH = 60
MAX_INTERVALS = 50_000


@dataclass(frozen=True)
class QuadratureEstimate:
    value: float
    abs_error_estimate: float
    evaluations: int


@dataclass(frozen=True, eq=False)
class Integrand:
    """A vectorised real function on an interval, optionally with its derivative."""

    name: str
    fn: Callable[[np.ndarray], np.ndarray]
    derivative: Optional[Callable[[np.ndarray], np.ndarray]] = None
    params: tuple = ()

    def __call__(self, t):
        return self.fn(np.asarray(t, dtype=float))

    def d(self, t):
        if self.derivative is None:
            raise DomainError(f"integrand {self.name!r} has no analytic derivative")
        return self.derivative(np.asarray(t, dtype=float))

    @property
    def has_derivative(self) -> bool:
        return self.derivative is not None

    def __repr__(self):
        args = ", ".join(f"{p:g}" if isinstance(p, float) else repr(p) for p in self.params)
        return f"{self.name}({args})"


# -- catalog -----------------------------------------------------------------

def _full(t, c):
    return np.full(np.shape(t), float(c))


def constant(c: float) -> Integrand:
    c = float(c)
    return Integrand("constant", lambda t: _full(t, c), lambda t: _full(t, 0.0), (c,))


def identity() -> Integrand:
    return Integrand("identity", lambda t: t + 0.0, lambda t: _full(t, 1.0))


def polynomial(coeffs: Sequence[float]) -> Integrand:
    """``sum_k coeffs[k] * t**k``."""
    p = np.polynomial.Polynomial(np.asarray(coeffs, dtype=float))
    dp = p.deriv()
    return Integrand("polynomial", p, dp, tuple(float(c) for c in coeffs))


def sin_power(k: int) -> Integrand:
    k = int(k)
    if k < 0:
        raise DomainError("power must be >= 0")
    if k == 0:
        return Integrand("sin_power", lambda t: _full(t, 1.0), lambda t: _full(t, 0.0), (0,))
    return Integrand(
        "sin_power",
        lambda t: np.sin(t) ** k,
        lambda t: k * np.sin(t) ** (k - 1) * np.cos(t),
        (k,),
    )


def cos_power(k: int) -> Integrand:
    k = int(k)
    if k < 0:
        raise DomainError("power must be >= 0")
    if k == 0:
        return Integrand("cos_power", lambda t: _full(t, 1.0), lambda t: _full(t, 0.0), (0,))
    return Integrand(
        "cos_power",
        lambda t: np.cos(t) ** k,
        lambda t: -k * np.cos(t) ** (k - 1) * np.sin(t),
        (k,),
    )


def _check_r(r, closed=False):
    r = float(r)
    ok = 0.0 <= r <= 1.0 if closed else 0.0 <= r < 1.0
    if not ok:
        raise DomainError(f"parameter r out of range: {r!r}")
    return r


def _check_rs(r, s):
    r, s = float(r), float(s)
    if not (r > 0 and s > 0 and math.isfinite(r) and math.isfinite(s)):
        raise DomainError(f"axes must be finite and positive, got ({r!r}, {s!r})")
    return r, s


def e_integrand(r: float) -> Integrand:
    """``sqrt(1 - r^2 sin^2 t)``."""
    r2 = _check_r(r, closed=True) ** 2

    def f(t):
        return np.sqrt(1.0 - r2 * np.sin(t) ** 2)

    def df(t):
        return -r2 * np.sin(t) * np.cos(t) / np.sqrt(1.0 - r2 * np.sin(t) ** 2)

    return Integrand("e_integrand", f, df if r2 < 1 else None, (float(r),))


def k_integrand(r: float) -> Integrand:
    """``1 / sqrt(1 - r^2 sin^2 t)``."""
    r2 = _check_r(r) ** 2

    def f(t):
        return 1.0 / np.sqrt(1.0 - r2 * np.sin(t) ** 2)

    def df(t):
        return r2 * np.sin(t) * np.cos(t) / (1.0 - r2 * np.sin(t) ** 2) ** 1.5

    return Integrand("k_integrand", f, df, (float(r),))


def e2_integrand(r: float, s: float) -> Integrand:
    """``sqrt(r^2 cos^2 t + s^2 sin^2 t)``."""
    r, s = _check_rs(r, s)
    r2, s2 = r * r, s * s
    dd = (s - r) * (s + r)

    def f(t):
        return np.sqrt(r2 * np.cos(t) ** 2 + s2 * np.sin(t) ** 2)

    def df(t):
        return dd * np.sin(t) * np.cos(t) / f(t)

    return Integrand("e2_integrand", f, df, (r, s))


def k2_integrand(r: float, s: float) -> Integrand:
    """``1 / sqrt(r^2 cos^2 t + s^2 sin^2 t)``."""
    r, s = _check_rs(r, s)
    r2, s2 = r * r, s * s
    dd = (s - r) * (s + r)

    def q(t):
        return r2 * np.cos(t) ** 2 + s2 * np.sin(t) ** 2

    return Integrand(
        "k2_integrand",
        lambda t: 1.0 / np.sqrt(q(t)),
        lambda t: -dd * np.sin(t) * np.cos(t) / q(t) ** 1.5,
        (r, s),
    )


def e_gap_kernel(r: float, k: int) -> Integrand:
    """``r^4 sin^2 t cos^2 t / (1 - r^2 sin^2 t)^k`` for k in {1, 3}."""
    r = _check_r(r)
    if k not in (1, 3):
        raise DomainError("kernel power must be 1 or 3")
    r2 = r * r

    def f(t):
        sc = np.sin(t) * np.cos(t)
        return r2 * r2 * sc * sc / (1.0 - r2 * np.sin(t) ** 2) ** k

    return Integrand("e_gap_kernel", f, None, (r, k))


def k2_gap_kernel(r: float, s: float, k: int) -> Integrand:
    """``(s^2 - r^2)^2 sin^2 t cos^2 t / (r^2 cos^2 t + s^2 sin^2 t)^k`` for k in {1, 3}."""
    r, s = _check_rs(r, s)
    if k not in (1, 3):
        raise DomainError("kernel power must be 1 or 3")
    dd2 = ((s - r) * (s + r)) ** 2

    def f(t):
        sc = np.sin(t) * np.cos(t)
        return dd2 * sc * sc / (r * r * np.cos(t) ** 2 + s * s * np.sin(t) ** 2) ** k

    return Integrand("k2_gap_kernel", f, None, (r, s, k))


def product(f: Integrand, g: Integrand) -> Integrand:
    deriv = None
    if f.has_derivative and g.has_derivative:
        deriv = lambda t: f.d(t) * g(t) + f(t) * g.d(t)  # noqa: E731
    return Integrand("product", lambda t: f(t) * g(t), deriv, (f, g))


def square(f: Integrand) -> Integrand:
    deriv = (lambda t: 2.0 * f(t) * f.d(t)) if f.has_derivative else None
    return Integrand("square", lambda t: f(t) ** 2, deriv, (f,))


def derivative_squared(f: Integrand) -> Integrand:
    """``f'(t)^2``, the integrand of the squared L2 norm of the derivative."""
    if not f.has_derivative:
        raise DomainError(f"integrand {f.name!r} has no analytic derivative")
    return Integrand("derivative_squared", lambda t: f.d(t) ** 2, None, (f,))


def linear_combination(alpha: float, f: Integrand, beta: float, g: Integrand) -> Integrand:
    deriv = None
    if f.has_derivative and g.has_derivative:
        deriv = lambda t: alpha * f.d(t) + beta * g.d(t)  # noqa: E731
    return Integrand(
        "linear_combination",
        lambda t: alpha * f(t) + beta * g(t),
        deriv,
        (alpha, f, beta, g),
    )


def shifted(f: Integrand, c: float) -> Integrand:
    """``f + c``; same derivative as ``f``."""
    return Integrand("shifted", lambda t: f(t) + c, f.derivative, (f, float(c)))


def from_callable(fn, derivative=None, name="user", vectorized=False) -> Integrand:
    """Register an arbitrary smooth function (and optionally its derivative)."""
    if not vectorized:
        fn = np.vectorize(fn, otypes=[float])
        if derivative is not None:
            derivative = np.vectorize(derivative, otypes=[float])
    return Integrand(name, fn, derivative)


# -- integration ---------------------------------------------------------------

def _gk15(f, lo, hi):
    c = 0.5 * (lo + hi)
    h = 0.5 * (hi - lo)
    fx = np.asarray(f(c + h * NODES), dtype=float)
    if fx.shape != NODES.shape:
        fx = np.broadcast_to(fx, NODES.shape)
    if not np.all(np.isfinite(fx)):
        bad = float((c + h * NODES)[~np.isfinite(fx)][0])
        raise DomainError(f"integrand is not finite at t={bad!r}")
    kron = h * float(KRONROD_WEIGHTS @ fx)
    gauss = h * float(GAUSS_WEIGHTS @ fx)
    resabs = abs(h) * float(KRONROD_WEIGHTS @ np.abs(fx))
    return kron, abs(kron - gauss), 50.0 * EPS * resabs


def integrate(f, a: float, b: float, tol: float = 1e-12, max_depth: int = MAX_DEPTH) -> QuadratureEstimate:
    """Integrate ``f`` over [a, b] by globally adaptive Gauss-Kronrod (7, 15) bisection.

    The interval with the largest error estimate is bisected until the summed
    estimate is below ``max(tol * |value|, tol)``.  Intervals whose estimate has
    sunk under the rounding floor are not refined further.  Raises
    AccuracyError (carrying the best estimate) if an interval would have to be
    split beyond ``max_depth`` levels.
    """
    a, b = float(a), float(b)
    if not a < b:
        raise DomainError(f"need a < b, got [{a!r}, {b!r}]")
    if not tol > 0:
        raise DomainError("tol must be > 0")

    val, err, noise = _gk15(f, a, b)
    evals = 15
    done = []  # (value, err, noise) of intervals at the rounding floor
    heap = []
    seq = 0
    if err <= noise:
        done.append((val, err, noise))
    else:
        heap.append((-err, seq, a, b, val, err, noise, 0))

    while True:
        vals = [v for v, _, _ in done] + [e[4] for e in heap]
        errs = [e for _, e, _ in done] + [e[5] for e in heap]
        total = math.fsum(vals)
        total_err = math.fsum(errs)
        if total_err <= max(tol * abs(total), tol) or not heap:
            break
        if len(done) + len(heap) >= MAX_INTERVALS:
            raise AccuracyError(f"quadrature exceeded {MAX_INTERVALS} intervals", total)
        _, _, lo, hi, _, _, _, depth = heapq.heappop(heap)
        if depth >= max_depth:
            raise AccuracyError(
                f"tolerance {tol:g} not reached at subdivision depth {max_depth}", total
            )
        mid = 0.5 * (lo + hi)
        for x0, x1 in ((lo, mid), (mid, hi)):
            v, e, n = _gk15(f, x0, x1)
            evals += 15
            if e <= n:
                done.append((v, e, n))
            else:
                seq += 1
                heapq.heappush(heap, (-e, seq, x0, x1, v, e, n, depth + 1))

    reported = math.fsum(max(e, n) for _, e, n in done) + math.fsum(max(e[5], e[6]) for e in heap)
    return QuadratureEstimate(total, reported, evals)


def l2_norm_derivative(f: Integrand, a: float, b: float, tol: float = 1e-12) -> float:
    """``(int_a^b f'(t)^2 dt)^(1/2)`` using the analytic derivative of ``f``."""
    est = integrate(derivative_squared(f), a, b, tol)
    return math.sqrt(max(est.value, 0.0))


def mean_value(f, a: float, b: float, tol: float = 1e-12) -> float:
    """Mean of ``f`` over [a, b]."""
    return integrate(f, a, b, tol).value / (b - a)


# -- quadrature-route evaluators -------------------------------------------------

HALF_PI = 0.5 * math.pi


def complete_k_quad(r: float, tol: float = 1e-13) -> float:
    return integrate(k_integrand(r), 0.0, HALF_PI, tol).value


def complete_e_quad(r: float, tol: float = 1e-13) -> float:
    return integrate(e_integrand(r), 0.0, HALF_PI, tol).value


def k_two_param_quad(r: float, s: float, tol: float = 1e-13) -> float:
    return integrate(k2_integrand(r, s), 0.0, HALF_PI, tol).value


def e_two_param_quad(r: float, s: float, tol: float = 1e-13) -> float:
    return integrate(e2_integrand(r, s), 0.0, HALF_PI, tol).value
