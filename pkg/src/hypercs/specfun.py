"""Scalar special-function kernels.

Gamma and Pochhammer symbols, the generalized hypergeometric series
``pFq(a; b; x) = sum_n x**n / rho(n)``, the radial measure weight
``G^{q+1,0}_{p,q+1}(x | a-1; 0, b-1)`` evaluated by a Mellin-Barnes contour
integral, a small catalog of closed forms for that weight, and the
semi-infinite quadrature used to take its power moments.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import special as _sp

from .errors import ConvergenceError, DivergenceError

__all__ = [
    "ModelParams",
    "MeasureWeight",
    "ClosedFormWeight",
    "gamma",
    "loggamma",
    "pochhammer",
    "gamma_ratio",
    "pfq",
    "pfq_truncated",
    "pfq_term_ratio",
    "measure_weight_value",
    "weight_catalog",
    "weighted_moment",
    "semi_infinite_quad",
    "moment_closed_form",
]

# Lanczos approximation, g = 7, nine coefficients (~15 significant digits).
_LANCZOS_G = 7.0
_LANCZOS_COEF = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


# ---------------------------------------------------------------------------
# gamma family
# ---------------------------------------------------------------------------

def _lanczos_series(z):
    acc = np.full_like(z, _LANCZOS_COEF[0])
    for k in range(1, len(_LANCZOS_COEF)):
        acc = acc + _LANCZOS_COEF[k] / (z + k)
    return acc


def _log_sin(w):
    # log(sin(w)) on any branch; stable for large |Im w| where sin overflows
    w = np.asarray(w, dtype=complex)
    out = np.empty_like(w)
    small = np.abs(w.imag) < 20.0
    out[small] = np.log(np.sin(w[small]))
    up = (~small) & (w.imag > 0)
    out[up] = -1j * w[up] + np.log1p(-np.exp(2j * w[up])) + np.log(0.5j)
    dn = (~small) & (w.imag <= 0)
    out[dn] = 1j * w[dn] + np.log1p(-np.exp(-2j * w[dn])) - np.log(2j)
    return out


def loggamma(z):
    """Logarithm of the gamma function for complex arguments.

    The branch is not the principal one in general; only ``exp(loggamma(z))``
    is meaningful, which is all the contour integrand needs. Arrays are
    handled elementwise.
    """
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    out = np.empty_like(z)
    right = z.real >= 0.5
    zr = z[right] - 1.0
    t = zr + _LANCZOS_G + 0.5
    out[right] = _HALF_LOG_2PI + (zr + 0.5) * np.log(t) - t + np.log(_lanczos_series(zr))
    if np.any(~right):
        zl = z[~right]
        out[~right] = math.log(math.pi) - _log_sin(math.pi * zl) - loggamma(1.0 - zl)
    return out[0] if scalar else out


def _gamma_real(x: float) -> float:
    if x < 0.5:
        s = math.sin(math.pi * x)
        if s == 0.0:
            raise ValueError(f"gamma has a pole at {x}")
        mirror = _gamma_real(1.0 - x)
        if math.isinf(mirror):
            return math.copysign(0.0, s)
        return math.pi / (s * mirror)
    z = x - 1.0
    t = z + _LANCZOS_G + 0.5
    acc = float(_LANCZOS_COEF[0])
    for k in range(1, len(_LANCZOS_COEF)):
        acc += float(_LANCZOS_COEF[k]) / (z + k)
    try:
        return math.sqrt(2.0 * math.pi) * math.exp((z + 0.5) * math.log(t) - t) * acc
    except OverflowError:
        return math.inf


def gamma(x: float) -> float:
    """Real gamma function by the Lanczos approximation.

    Returns ``inf`` past the double-precision range; raises ``ValueError`` at
    the poles ``0, -1, -2, ...``.
    """
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise ValueError(f"gamma has a pole at {x}")
    return _gamma_real(x)


def pochhammer(c: float, n: int) -> float:
    """Rising factorial ``c (c+1) ... (c+n-1)``; 1 for ``n == 0``."""
    if n < 0 or int(n) != n:
        raise ValueError("n must be a non-negative integer")
    out = 1.0
    for k in range(int(n)):
        factor = c + k
        if factor == 0:
            raise ValueError(f"rising factorial ({c})_{n} hits a zero factor at k={k}")
        out *= factor
    return out


# ---------------------------------------------------------------------------
# parameters and the hypergeometric series
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModelParams:
    """Upper (numerator) and lower (denominator) parameter sets of pFq."""

    upper: tuple = ()
    lower: tuple = ()

    def __post_init__(self):
        up = tuple(float(v) for v in self.upper)
        lo = tuple(float(v) for v in self.lower)
        for v in up + lo:
            if not (v > 0 and math.isfinite(v)):
                raise ValueError(f"parameters must be finite and positive, got {v}")
        object.__setattr__(self, "upper", up)
        object.__setattr__(self, "lower", lo)

    @property
    def p(self) -> int:
        return len(self.upper)

    @property
    def q(self) -> int:
        return len(self.lower)

    def to_json(self) -> dict:
        return {"a": list(self.upper), "b": list(self.lower)}

    @classmethod
    def from_json(cls, obj: dict) -> "ModelParams":
        if not isinstance(obj, dict):
            raise ValueError("params must be an object with keys 'a' and 'b'")
        unknown = set(obj) - {"a", "b"}
        if unknown:
            raise ValueError(f"unknown params keys: {sorted(unknown)}")
        return cls(tuple(obj.get("a", ())), tuple(obj.get("b", ())))


def gamma_ratio(params: ModelParams) -> float:
    """``prod Gamma(a_i) / prod Gamma(b_j)``."""
    log_num = sum(math.lgamma(a) for a in params.upper)
    log_den = sum(math.lgamma(b) for b in params.lower)
    num = math.prod(gamma(a) for a in params.upper)
    den = math.prod(gamma(b) for b in params.lower)
    if math.isinf(num) or math.isinf(den) or den == 0.0:
        # fall back to logs; only an overflow of the ratio itself is fatal
        try:
            return math.exp(log_num - log_den)
        except OverflowError:
            raise OverflowError("gamma ratio exceeds the floating range") from None
    return num / den


def pfq_term_ratio(params: ModelParams, x, n: int):
    """``term(n+1)/term(n)`` of the pFq series."""
    num = math.prod(a + n for a in params.upper)
    den = math.prod(b + n for b in params.lower) * (n + 1)
    return x * num / den


def _check_domain(params: ModelParams, x) -> None:
    if params.p <= params.q:
        return
    if params.p == params.q + 1:
        if abs(x) >= 1:
            raise DivergenceError(
                f"{params.p}F{params.q} series needs |x| < 1, got |x| = {abs(x)}")
        return
    if x != 0:
        raise DivergenceError(
            f"{params.p}F{params.q} series diverges for every nonzero x")


def pfq(params: ModelParams, x, tol: float = 1e-16, max_terms: int = 100_000):
    """Sum ``sum_n x**n / rho(n)`` until the last term drops below ``tol``.

    Terms are generated by the running ratio recurrence, so no gamma values
    are formed. Stops once the newest term is smaller than ``tol`` times the
    partial sum and the terms are shrinking.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    _check_domain(params, x)
    total = 1.0 + 0.0 * x
    term = 1.0 + 0.0 * x
    if x == 0:
        return total
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(max_terms):
            ratio = pfq_term_ratio(params, x, n)
            term = term * ratio
            total = total + term
            if abs(term) < tol * abs(total) and abs(ratio) < 1:
                return total
            if not math.isfinite(abs(total)):
                raise OverflowError(f"pFq({x}) exceeds the floating range")
    raise ConvergenceError(
        f"pFq did not converge in {max_terms} terms (last term {abs(term):.3e})")


def pfq_truncated(params: ModelParams, x, n_max: int):
    """Exact partial sum ``sum_{n=0}^{n_max} x**n / rho(n)``; ``x`` may be an array."""
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    total = 1.0 + 0.0 * x
    term = total
    for n in range(n_max):
        term = term * pfq_term_ratio(params, x, n)
        total = total + term
    return total


# ---------------------------------------------------------------------------
# measure weight: Mellin-Barnes and closed forms
# ---------------------------------------------------------------------------

def _log_mellin(params: ModelParams, s):
    """log of Gamma(s) prod Gamma(b_j - 1 + s) / prod Gamma(a_i - 1 + s)."""
    out = loggamma(s)
    for b in params.lower:
        out = out + loggamma(b - 1.0 + s)
    for a in params.upper:
        out = out - loggamma(a - 1.0 + s)
    return out


@dataclass(frozen=True)
class MeasureWeight:
    """The radial weight whose Mellin moments are
    ``Gamma(s) prod Gamma(b_j-1+s) / prod Gamma(a_i-1+s)``.

    ``contour_abscissa=None`` picks ``max(0, 1 - min b) + 1/2``, raised to a
    saddle-point estimate for ``x > 1`` to keep the oscillating integrand from
    cancelling. ``contour_halfwidth=None`` doubles the truncation until the
    integrand tail is negligible; ``step`` is the initial trapezoid spacing,
    halved until two refinements agree.
    """

    params: ModelParams
    contour_abscissa: Optional[float] = None
    contour_halfwidth: Optional[float] = None
    step: float = 0.05
    rtol: float = 1e-8
    tail_tol: float = 1e-16

    def __post_init__(self):
        if self.contour_abscissa is not None and self.contour_abscissa <= self.min_abscissa:
            raise ValueError(
                f"contour abscissa must exceed {self.min_abscissa}, "
                f"got {self.contour_abscissa}")
        if self.step <= 0:
            raise ValueError("step must be positive")

    @property
    def min_abscissa(self) -> float:
        return max(0.0, 1.0 - min(self.params.lower, default=1.0))

    @property
    def default_abscissa(self) -> float:
        return self.min_abscissa + 0.5

    def abscissa_for(self, x: float) -> float:
        if self.contour_abscissa is not None:
            return self.contour_abscissa
        c = self.default_abscissa
        order = self.params.q + 1 - self.params.p
        if x > 1.0 and order > 0:
            c = max(c, x ** (1.0 / order))
        return c

    def __call__(self, x):
        return measure_weight_value(self, x)


def _trapezoid_line(params, x, c, half_width, h):
    # (1/pi) * h * [f(0)/2 + sum_k f(kh)], f(t) = Re M(c+it) x^{-(c+it)};
    # second value is the same sum over |f|, the cancellation noise scale
    t = np.arange(0.0, half_width + 0.5 * h, h)
    s = c + 1j * t
    vals = np.exp(_log_mellin(params, s) - s * math.log(x)).real
    vals[0] *= 0.5
    return h * vals.sum() / math.pi, h * np.abs(vals).sum() / math.pi


def _line_magnitude(params, x, c, t):
    s = c + 1j * t
    return float(np.exp((_log_mellin(params, s) - s * math.log(x)).real))


def measure_weight_value(w: MeasureWeight, x: float) -> float:
    """Numerical ``G^{q+1,0}_{p,q+1}(x | a-1; 0, b-1)`` by trapezoidal
    summation along the vertical line ``Re s = c``.
    """
    params = w.params
    if params.q + 1 <= params.p:
        raise ValueError(
            f"contour integral needs q+1 > p (got p={params.p}, q={params.q})")
    if np.ndim(x):
        return np.array([measure_weight_value(w, float(v)) for v in np.ravel(x)]).reshape(np.shape(x))
    x = float(x)
    if not x > 0:
        raise ValueError(f"weight is defined for x > 0, got {x}")
    c = w.abscissa_for(x)
    h = w.step

    if w.contour_halfwidth is not None:
        half_width = w.contour_halfwidth
    else:
        half_width = 8.0 + c
        scale = abs(_trapezoid_line(params, x, c, half_width, h)[0])
        for _ in range(16):
            tail = _line_magnitude(params, x, c, half_width)
            if tail <= w.tail_tol * max(scale, 1e-300):
                break
            half_width *= 2.0
            scale = abs(_trapezoid_line(params, x, c, half_width, h)[0])
        else:
            raise ConvergenceError(
                f"Mellin-Barnes integrand still {tail:.3e} at |Im s| = {half_width}")

    prev, _ = _trapezoid_line(params, x, c, half_width, h)
    for _ in range(12):
        h *= 0.5
        cur, noise = _trapezoid_line(params, x, c, half_width, h)
        if abs(cur - prev) <= w.rtol * abs(cur) + 1e-14 * noise:
            return cur
        prev = cur
    raise ConvergenceError(f"trapezoid refinement stalled at step {h}")


@dataclass(frozen=True)
class ClosedFormWeight:
    """A directly evaluable measure weight with its logarithm."""

    name: str
    value: Callable
    log_value: Callable

    def __call__(self, x):
        return self.value(x)


def _bessel_log_weight(nu: float):
    def log_value(x):
        x = np.asarray(x, dtype=float)
        y = 2.0 * np.sqrt(x)
        return math.log(2.0) + 0.5 * nu * np.log(x) + np.log(_sp.kve(nu, y)) - y
    return log_value


def weight_catalog(params: ModelParams) -> Optional[ClosedFormWeight]:
    """Closed forms for the weights used as oracles; ``None`` if not catalogued.

    * ``p = q = 0``: ``exp(-x)``
    * ``p = q = 1, a = 1``: ``x**(b-1) exp(-x)``
    * ``p = 0, q = 1``: ``2 x**((b-1)/2) K_{b-1}(2 sqrt x)``
    """
    if params.p == 0 and params.q == 0:
        return ClosedFormWeight(
            "exp(-x)",
            lambda x: np.exp(-np.asarray(x, dtype=float)),
            lambda x: -np.asarray(x, dtype=float),
        )
    if params.p == 1 and params.q == 1 and params.upper[0] == 1.0:
        e = params.lower[0] - 1.0
        return ClosedFormWeight(
            f"x^{e:g} exp(-x)",
            lambda x: np.asarray(x, dtype=float) ** e * np.exp(-np.asarray(x, dtype=float)),
            lambda x: e * np.log(np.asarray(x, dtype=float)) - np.asarray(x, dtype=float),
        )
    if params.p == 0 and params.q == 1:
        nu = params.lower[0] - 1.0
        log_value = _bessel_log_weight(nu)
        return ClosedFormWeight(
            f"2 x^{nu / 2:g} K_{nu:g}(2 sqrt x)",
            lambda x: np.exp(log_value(x)),
            log_value,
        )
    return None


# ---------------------------------------------------------------------------
# quadrature on [0, inf)
# ---------------------------------------------------------------------------

_GL_ORDER = 15
_GL_NODES, _GL_WEIGHTS = leggauss(_GL_ORDER)


def _gl(f, lo, hi):
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    return half * float(np.dot(_GL_WEIGHTS, f(mid + half * _GL_NODES)))


def _adaptive_gl(f, lo, hi, rtol, max_panels=4000):
    """Adaptive bisection Gauss-Legendre; panels summed in interval order."""
    whole = _gl(f, lo, hi)
    # global absolute target from a coarse pass over 8 panels
    edges = np.linspace(lo, hi, 9)
    coarse = sum(_gl(f, a, b) for a, b in zip(edges[:-1], edges[1:]))
    target = rtol * max(abs(coarse), abs(whole), 1e-300)
    stack = [(lo, hi, whole)]
    done = []
    while stack:
        if len(done) + len(stack) > max_panels:
            raise ConvergenceError("adaptive quadrature exceeded its panel budget")
        a, b, est = stack.pop()
        m = 0.5 * (a + b)
        left, right = _gl(f, a, m), _gl(f, m, b)
        width_share = (b - a) / (hi - lo)
        if abs(left + right - est) <= max(target * width_share, 1e-300) or b - a < 1e-12 * (hi - lo):
            done.append((a, left + right))
        else:
            stack.append((m, b, right))
            stack.append((a, m, left))
    done.sort()
    return math.fsum(v for _, v in done)


def semi_infinite_quad(f: Callable, split: float, rtol: float = 1e-10) -> float:
    """``int_0^inf f(x) dx`` for a vectorized, eventually decaying ``f``.

    ``[0, split]`` uses adaptive Gauss-Legendre in ``u = sqrt(x)``, which
    removes square-root endpoint behaviour; ``[split, inf)`` uses the
    exponential substitution ``x = split * exp(v)``, truncated once the
    integrand is negligible, again with adaptive Gauss-Legendre.
    """
    if split <= 0:
        raise ValueError("split must be positive")
    head = _adaptive_gl(lambda u: 2.0 * u * f(u * u), 0.0, math.sqrt(split), rtol)

    def g(v):
        with np.errstate(over="ignore"):
            x = split * np.exp(v)
        return x * f(x)

    # extend the tail window until the transformed integrand has died out
    v_hi = 1.0
    scale = max(abs(head), 1e-300)
    for _ in range(12):
        edge = np.abs(g(np.linspace(0.5 * v_hi, v_hi, 9)))
        if float(edge.max()) * v_hi <= 1e-3 * rtol * scale:
            break
        v_hi *= 2.0
    else:
        raise ConvergenceError("integrand does not decay on the tail")
    tail = _adaptive_gl(g, 0.0, v_hi, rtol)
    return head + tail


def weighted_moment(w: MeasureWeight, n: int, quad_tol: float = 1e-10,
                    use_catalog: bool = True) -> float:
    """``int_0^inf x**n w(x) dx``.

    Catalogued weights are evaluated in closed form unless ``use_catalog`` is
    false, in which case every point goes through the contour integral.
    """
    if n < 0:
        raise ValueError("moment order must be non-negative")
    closed = weight_catalog(w.params) if use_catalog else None
    if closed is not None:
        def integrand(x):
            x = np.asarray(x, dtype=float)
            out = np.zeros_like(x)
            pos = x > 0
            out[pos] = np.exp(n * np.log(x[pos]) + closed.log_value(x[pos]))
            return out
    else:
        def integrand(x):
            x = np.asarray(x, dtype=float)
            out = np.zeros_like(x)
            for i, v in enumerate(x):
                if v > 0:
                    out[i] = v ** n * measure_weight_value(w, v)
            return out
    split = n + max(w.params.lower, default=1.0) + 10.0
    return semi_infinite_quad(integrand, split, quad_tol)


def moment_closed_form(params: ModelParams, n: int) -> float:
    """``Gamma(n+1) prod Gamma(b_j+n) / prod Gamma(a_i+n)``, the exact moment."""
    log_val = math.lgamma(n + 1.0)
    log_val += sum(math.lgamma(b + n) for b in params.lower)
    log_val -= sum(math.lgamma(a + n) for a in params.upper)
    return math.exp(log_val)
