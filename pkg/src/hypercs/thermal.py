"""Thermal mixed states, Husimi Q and P quasi-distributions, and entropy.

The P-function is checked only through its power moments: for a linear
spectrum ``E_n = hbar_omega n + E0`` the moments of ``P(x) G(x)`` must equal
``(1/Gamma(a/b)) (exp(-beta E_n)/Z) rho(n)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .algebra import StructureTable, build_structure
from .errors import ConvergenceError
from .matrixstates import U0, U1, DiagonalLabel
from .specfun import (
    MeasureWeight,
    ModelParams,
    gamma,
    gamma_ratio,
    measure_weight_value,
    pfq,
    pfq_truncated,
    semi_infinite_quad,
    weight_catalog,
    weighted_moment,
)
from .states import DiagonalObservable

__all__ = [
    "ThermalModel",
    "LinearSpectrum",
    "VerificationReport",
    "thermal_model",
    "thermal_two_level",
    "husimi_q",
    "husimi_q_matrix",
    "p_function_linear",
    "verify_p_moments",
    "verify_identity_resolution",
    "reproduce_two_level_ho",
    "qubit_from_label",
    "entropy_closed",
    "entropy_series",
    "entropy_matrix_route",
    "thermal_expectation",
]

TWO_LEVEL_HO = ModelParams((1.0,), (1.5,))


@dataclass(frozen=True)
class ThermalModel:
    """Boltzmann weights of a finite spectrum at inverse temperature ``beta``.

    ``partition`` is ``inf`` (or 0) when it leaves the floating range;
    ``log_partition`` stays finite.
    """

    beta: float
    energies: np.ndarray
    weights: np.ndarray
    partition: float
    log_partition: float

    @property
    def n_levels(self) -> int:
        return len(self.energies)

    def density_matrix(self) -> np.ndarray:
        return np.diag(self.weights)


def thermal_model(beta: float, energies: Sequence[float]) -> ThermalModel:
    if beta <= 0:
        raise ValueError("beta must be positive")
    energies = np.asarray(energies, dtype=float)
    if energies.ndim != 1 or len(energies) == 0:
        raise ValueError("energies must be a non-empty 1-d sequence")
    # shift by the ground energy so the exponentials cannot all underflow
    e_min = float(energies.min())
    boltz = np.exp(-beta * (energies - e_min))
    total = math.fsum(boltz)
    weights = boltz / total
    log_partition = -beta * e_min + math.log(total)
    try:
        partition = math.exp(log_partition)
    except OverflowError:
        partition = math.inf
    energies.setflags(write=False)
    weights.setflags(write=False)
    return ThermalModel(float(beta), energies, weights, partition, log_partition)


def thermal_two_level(beta: float, e0: float, e1: float) -> ThermalModel:
    """Two-level model with weights ``1/(1 + exp(-+beta (E1 - E0)))``."""
    model = thermal_model(beta, [e0, e1])
    gap = beta * (e1 - e0)
    w0 = 1.0 / (1.0 + math.exp(-gap)) if gap > -700 else 0.0
    w1 = 1.0 / (1.0 + math.exp(gap)) if gap < 700 else 0.0
    weights = np.array([w0, w1])
    weights.setflags(write=False)
    return ThermalModel(model.beta, model.energies, weights, model.partition,
                        model.log_partition)


@dataclass(frozen=True)
class LinearSpectrum:
    """``E_n = hbar_omega n + e0``."""

    hbar_omega: float
    e0: float = 0.0

    def __post_init__(self):
        if self.hbar_omega <= 0:
            raise ValueError("hbar_omega must be positive")

    def energy(self, n):
        return self.hbar_omega * np.asarray(n) + self.e0

    def partition(self, beta: float) -> float:
        return math.exp(-beta * self.e0) / -math.expm1(-beta * self.hbar_omega)

    def weight(self, beta: float, n):
        """Infinite-ladder Boltzmann weight ``(1 - e^{-t}) e^{-t n}``, ``t = beta hbar_omega``."""
        t = beta * self.hbar_omega
        return -math.expm1(-t) * np.exp(-t * np.asarray(n, dtype=float))

    def model(self, beta: float, n_levels: int) -> ThermalModel:
        return thermal_model(beta, self.energy(np.arange(n_levels)))


# ---------------------------------------------------------------------------
# quasi-distributions
# ---------------------------------------------------------------------------

def husimi_q(model: ThermalModel, table: StructureTable, x, n_levels: Optional[int] = None,
             truncate_norm: bool = True):
    """Slot-scalar Husimi function ``<z|rho|z>`` at ``x = |z|^2``.

    ``truncate_norm`` normalizes the coherent state with the same number of
    levels as the density operator; otherwise the full pFq series is used.
    """
    levels = model.n_levels if n_levels is None else n_levels
    if levels > model.n_levels:
        raise ValueError(f"model has only {model.n_levels} levels")
    if levels - 1 > table.n_max:
        raise ValueError(f"structure table truncated at {table.n_max}, need {levels - 1}")
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0):
        raise ValueError("x = |z|^2 must be non-negative")
    num = np.zeros_like(x_arr)
    power = np.ones_like(x_arr)
    for n in range(levels):
        num = num + model.weights[n] * power / table.rho[n]
        power = power * x_arr
    if truncate_norm:
        norm = pfq_truncated(table.params, x_arr, levels - 1)
    else:
        norm = np.vectorize(lambda v: float(pfq(table.params, v)))(x_arr)
    out = num / norm
    return float(out) if out.ndim == 0 else out


def husimi_q_matrix(model: ThermalModel, table: StructureTable, label: DiagonalLabel,
                    **kwargs) -> np.ndarray:
    """``Q(|z|^2) u0 + Q(|sigma|^2) u1``."""
    q0 = husimi_q(model, table, abs(label.z) ** 2, **kwargs)
    q1 = husimi_q(model, table, abs(label.sigma) ** 2, **kwargs)
    return q0 * U0.matrix() + q1 * U1.matrix()


def _log_weight_fn(params: ModelParams):
    closed = weight_catalog(params)
    if closed is not None:
        return closed.log_value
    w = MeasureWeight(params)

    def log_value(x):
        vals = np.atleast_1d(measure_weight_value(w, np.atleast_1d(x)))
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.log(vals)
    return log_value


def p_function_linear(spec: LinearSpectrum, beta: float, params: ModelParams, x):
    """``(e^t - 1) G(e^t x) / G(x)`` with ``t = beta hbar_omega``.

    The ratio is formed from logarithms of the weight, so catalogued cases
    stay finite far into the tail. Raises ``OverflowError`` where the
    denominator weight underflows or is not positive.
    """
    t = beta * spec.hbar_omega
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr <= 0):
        raise ValueError("P-function is evaluated at x > 0")
    log_g = _log_weight_fn(params)
    with np.errstate(over="ignore"):
        log_ratio = log_g(math.exp(t) * x_arr) - log_g(x_arr)
    if not np.all(np.isfinite(log_ratio)):
        raise OverflowError("measure weight underflows or is non-positive at the requested x")
    out = math.expm1(t) * np.exp(log_ratio)
    return float(out) if out.ndim == 0 else out


@dataclass
class VerificationReport:
    """Rows of ``(n, lhs, rhs, rel_err)`` plus any named side checks."""

    name: str
    tolerance: float
    rows: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)

    @property
    def max_rel_err(self) -> float:
        return max((r["rel_err"] for r in self.rows), default=0.0)

    @property
    def passed(self) -> bool:
        rows_ok = all(r["rel_err"] <= self.tolerance for r in self.rows)
        return rows_ok and all(c["passed"] for c in self.checks.values())

    def add_row(self, n, lhs: float, rhs: float, **extra) -> None:
        lhs, rhs = float(lhs), float(rhs)
        rel = abs(lhs - rhs) / abs(rhs) if rhs != 0 else abs(lhs)
        self.rows.append({"n": int(n), "lhs": lhs, "rhs": rhs, "rel_err": rel, **extra})

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "tolerance": self.tolerance,
            "max_rel_err": self.max_rel_err,
            "rows": self.rows,
            "checks": self.checks,
        }


def verify_p_moments(spec: LinearSpectrum, beta: float, params: ModelParams,
                     n_range: Iterable[int] = range(9), quad_tol: float = 1e-10,
                     rtol: float = 1e-6) -> VerificationReport:
    """Quadrature of ``int P(x) G(x) x^n dx`` against its closed-form moment."""
    n_list = list(n_range)
    table = build_structure(params, max(n_list))
    g_ratio = gamma_ratio(params)
    closed = weight_catalog(params)
    weight = closed if closed is not None else MeasureWeight(params)
    t = beta * spec.hbar_omega
    report = VerificationReport(
        f"p-moments beta*hbar_omega={t:g} a={list(params.upper)} b={list(params.lower)}", rtol)
    for n in n_list:
        def integrand(x, n=n):
            x = np.asarray(x, dtype=float)
            out = np.zeros_like(x)
            pos = x > 0
            if np.any(pos):
                xp = x[pos]
                out[pos] = p_function_linear(spec, beta, params, xp) * weight(xp) * xp ** n
            return out
        split = n + max(params.lower, default=1.0) + 10.0
        lhs = semi_infinite_quad(integrand, split, quad_tol)
        rhs = float(spec.weight(beta, n)) * table.rho[n] / g_ratio
        report.add_row(n, lhs, rhs)
    return report


def verify_identity_resolution(params: ModelParams, n_range: Iterable[int] = range(11),
                               quad_tol: float = 1e-10,
                               rtol: float = 1e-6) -> VerificationReport:
    """Per-slot moment check ``Gamma(a/b) int x^n G(x) dx = rho(n)`` and ``u0 + u1 = I``.

    Both slots carry the same radial integral, so one set of rows covers them.
    """
    n_list = list(n_range)
    table = build_structure(params, max(n_list))
    g_ratio = gamma_ratio(params)
    w = MeasureWeight(params)
    report = VerificationReport(
        f"identity a={list(params.upper)} b={list(params.lower)}", rtol)
    for n in n_list:
        lhs = g_ratio * weighted_moment(w, n, quad_tol)
        report.add_row(n, lhs, float(table.rho[n]))
    total = U0.matrix() + U1.matrix()
    report.checks["projector_sum"] = {
        "passed": bool(np.array_equal(total, np.eye(2, dtype=int))),
        "value": total.tolist(),
    }
    return report


def reproduce_two_level_ho(beta: float, hbar_omega: float = 1.0,
                           atol: float = 1e-8) -> VerificationReport:
    """Two-level oscillator ``E_n = hbar_omega (n + 1/2)``, ``a = {1}, b = {3/2}``.

    Rebuilds the density matrix from the moment values
    ``(2/sqrt(pi)) (e^{-t/2}/Z) e^{-t n} Gamma(3/2 + n)`` divided by ``rho(n)``
    and compares with the direct Boltzmann weights and with
    ``diag(1/(1+e^{-t}), 1/(1+e^{t}))``.
    """
    t = beta * hbar_omega
    direct = thermal_model(beta, [0.5 * hbar_omega, 1.5 * hbar_omega])
    table = build_structure(TWO_LEVEL_HO, 1)
    z_part = math.exp(-0.5 * t) + math.exp(-1.5 * t)
    pref = 2.0 / math.sqrt(math.pi) * math.exp(-0.5 * t) / z_part
    report = VerificationReport(f"two-level oscillator beta*hbar_omega={t:g}", atol)
    closed = [1.0 / (1.0 + math.exp(-t)), 1.0 / (1.0 + math.exp(t))]
    rebuilt = []
    for n in range(2):
        moment = pref * math.exp(-t * n) * gamma(1.5 + n)
        rebuilt.append(float(moment / table.rho[n]))
        report.rows.append({
            "n": n,
            "lhs": rebuilt[-1],
            "rhs": closed[n],
            # entrywise absolute agreement for density-matrix entries
            "rel_err": abs(rebuilt[-1] - closed[n]),
            "direct": float(direct.weights[n]),
            "moment": float(moment),
            "moment_from_rho": float(direct.weights[n] * table.rho[n]),
        })
    report.checks["direct_vs_closed"] = {
        "passed": bool(np.max(np.abs(direct.weights - closed)) <= atol),
        "value": float(np.max(np.abs(direct.weights - closed))),
    }
    g_check = 2.0 / math.sqrt(math.pi) * (2.0 / 3.0) * gamma(2.5)
    report.checks["gamma_5_2"] = {"passed": bool(abs(g_check - 1.0) <= 1e-12), "value": float(g_check)}
    return report


def qubit_from_label(params: ModelParams, label: DiagonalLabel) -> tuple:
    """Per-slot two-level amplitudes ``(1, Z/sqrt(rho(1))) / sqrt(1 + |Z|^2/rho(1))``."""
    rho1 = math.prod(params.lower) / math.prod(params.upper)
    if rho1 == 0:
        raise ValueError("rho(1) vanishes; the two-level truncation is undefined")
    out = []
    for z in label.slots():
        norm = math.sqrt(1.0 + abs(z) ** 2 / rho1)
        amps = np.array([1.0 / norm, z / (math.sqrt(rho1) * norm)], dtype=complex)
        if abs(np.vdot(amps, amps).real - 1.0) > 1e-12:
            raise AssertionError("qubit amplitudes are not normalized")
        out.append(amps)
    return tuple(out)


# ---------------------------------------------------------------------------
# entropy and expectations
# ---------------------------------------------------------------------------

def _weights_of(model) -> np.ndarray:
    if isinstance(model, ThermalModel):
        return np.asarray(model.weights, dtype=float)
    return np.asarray(model, dtype=float)


def entropy_closed(model) -> float:
    """``-sum w log w`` in nats, with ``0 log 0 = 0``."""
    w = _weights_of(model)
    nz = w[w > 0]
    return float(-math.fsum(nz * np.log(nz)))


ENTROPY_SERIES_FLOOR = 0.05


def _log_series(w: float, k_max: int, tol: float) -> float:
    """``log w = sum_k (-1)^(k+1) (w-1)^k / k``, stopped on a geometric tail bound."""
    d = w - 1.0
    r = abs(d)
    total = 0.0
    power = 1.0
    for k in range(1, k_max + 1):
        power *= d
        term = power / k
        total += term if k % 2 else -term
        if abs(term) * r / (1.0 - r) < tol:
            return total
    raise ConvergenceError(f"log series for w={w} not converged after {k_max} terms")


def entropy_series(model, k_max: int = 100_000, tol: float = 1e-12) -> float:
    """Entropy from the power series of ``log(I + (rho - I))``.

    Weights must lie in ``[0.05, 2)``; zero weights contribute nothing.
    """
    total = 0.0
    for w in _weights_of(model):
        if w == 0.0:
            continue
        if not ENTROPY_SERIES_FLOOR <= w < 2.0:
            raise ValueError(
                f"weight {w} outside [{ENTROPY_SERIES_FLOOR}, 2): series too slow or divergent")
        total -= w * _log_series(float(w), k_max, tol)
    return total


def entropy_matrix_route(model, k_max: int = 100_000, tol: float = 1e-12) -> float:
    """Same series, with every matrix element taken by explicit matrix products.

    ``<n|rho|n>`` and ``<n|(rho - I)^k|n>`` are read off with basis row and
    column vectors rather than from the weights directly.
    """
    w = _weights_of(model)
    dim = len(w)
    rho = np.diag(w)
    shifted = rho - np.eye(dim)
    total = 0.0
    for n in range(dim):
        ket = np.zeros((dim, 1))
        ket[n, 0] = 1.0
        bra = ket.T
        rho_nn = (bra @ rho @ ket).item()
        if rho_nn == 0.0:
            continue
        if not ENTROPY_SERIES_FLOOR <= rho_nn < 2.0:
            raise ValueError(f"weight {rho_nn} outside the series convergence window")
        r = abs(rho_nn - 1.0)
        acc = 0.0
        power = np.eye(dim)
        for k in range(1, k_max + 1):
            power = power @ shifted
            elem = (bra @ power @ ket).item()
            term = elem / k
            acc += term if k % 2 else -term
            if abs(term) * r / (1.0 - r) < tol:
                break
        else:
            raise ConvergenceError(f"matrix log series not converged for n={n}")
        total -= rho_nn * acc
    return total


def thermal_expectation(model: ThermalModel, obs: DiagonalObservable) -> float:
    """``Tr(rho A) = sum_n w_n A(n)``."""
    n = np.arange(model.n_levels)
    return float(math.fsum(model.weights * obs(n)))
