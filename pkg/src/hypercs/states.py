"""Scalar-label coherent states ``|z> = sum_n z^n / sqrt(rho(n)) |n> / sqrt(pFq(|z|^2))``."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from .algebra import StructureTable, build_structure, tail_bound
from .errors import TruncationError, TruncationWarning
from .specfun import pfq, pfq_truncated

__all__ = [
    "CoherentState",
    "DiagonalObservable",
    "make_state",
    "overlap",
    "label_continuity_probe",
    "expect_direct",
    "expect_euler",
]

_TAIL_WARN = 1e-10


@dataclass(frozen=True)
class CoherentState:
    """Fock coefficients of a normalized coherent state.

    ``norm_fn`` is the normalization ``pFq(|z|^2)``, truncated at ``n_max``
    unless the state was built with ``truncate_norm=False``.
    """

    table: StructureTable
    label: complex
    coeffs: np.ndarray
    norm_fn: float

    @property
    def n_max(self) -> int:
        return len(self.coeffs) - 1

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.coeffs) ** 2

    def projector(self) -> np.ndarray:
        return np.outer(self.coeffs, self.coeffs.conj())


@dataclass(frozen=True)
class DiagonalObservable:
    """Observable diagonal in the Fock basis, ``A(n) = sum_j c_j n**j``."""

    poly_coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.poly_coeffs)
        if not coeffs:
            raise ValueError("observable needs at least one coefficient")
        object.__setattr__(self, "poly_coeffs", coeffs)

    def __call__(self, n):
        return npoly.polyval(np.asarray(n, dtype=float), self.poly_coeffs)


def _unnormalized(table: StructureTable, z: complex) -> np.ndarray:
    c = np.empty(table.dim, dtype=complex)
    c[0] = 1.0
    for n in range(1, table.dim):
        c[n] = c[n - 1] * z / math.sqrt(table.e[n])
    return c


def make_state(table: StructureTable, z: complex, n_max: Optional[int] = None,
               truncate_norm: bool = True, tol: Optional[float] = None) -> CoherentState:
    """Coherent state on ``n_max + 1`` Fock levels (default: the table's).

    With ``truncate_norm`` the normalization is the partial sum up to
    ``n_max``, so the stored vector has unit norm exactly; otherwise the full
    series is used and the vector norm falls short by the dropped tail.
    ``tol`` optionally rejects truncations whose first dropped coefficient
    exceeds it.
    """
    if n_max is not None and n_max != table.n_max:
        table = build_structure(table.params, n_max)
    z = complex(z)
    if tol is not None and tail_bound(table, z) > tol:
        raise TruncationError(
            f"n_max={table.n_max} too small for |z|={abs(z)}: tail {tail_bound(table, z):.3e}")
    x = abs(z) ** 2
    norm = pfq_truncated(table.params, x, table.n_max) if truncate_norm else pfq(table.params, x)
    coeffs = _unnormalized(table, z) / math.sqrt(norm)
    coeffs.setflags(write=False)
    return CoherentState(table, z, coeffs, float(norm))


def _check_compatible(s1: CoherentState, s2: CoherentState) -> None:
    if s1.table.params != s2.table.params or s1.n_max != s2.n_max:
        raise ValueError("states live on different structure tables or truncations")


def overlap(s1: CoherentState, s2: CoherentState) -> complex:
    _check_compatible(s1, s2)
    return complex(np.vdot(s1.coeffs, s2.coeffs))


def label_continuity_probe(table: StructureTable, z: complex, delta: float) -> float:
    """Norm distance between ``|z>`` and ``|z + delta>``."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    a = make_state(table, z)
    b = make_state(table, z + delta)
    return float(np.linalg.norm(a.coeffs - b.coeffs))


def expect_direct(state: CoherentState, obs: DiagonalObservable) -> float:
    """``sum_n A(n) |c_n|^2``."""
    n = np.arange(state.n_max + 1)
    terms = obs(n) * state.probabilities
    if state.n_max > 0 and abs(terms[-1]) > _TAIL_WARN:
        warnings.warn(
            f"last retained term {terms[-1]:.3e} suggests a non-negligible tail",
            TruncationWarning, stacklevel=2)
    return float(math.fsum(terms))


def expect_euler(state: CoherentState, obs: DiagonalObservable) -> float:
    """``A(x d/dx) pFq(x) / pFq(x)`` at ``x = |z|^2``, term by term.

    The Euler operator ``x d/dx`` multiplies the n-th series coefficient by
    ``n``; the differentiated series is then summed as a polynomial in x.
    """
    table = state.table
    n = np.arange(state.n_max + 1, dtype=float)
    series = 1.0 / table.rho[: state.n_max + 1]
    x = abs(state.label) ** 2
    total = 0.0
    power = series.copy()
    for c in obs.poly_coeffs:
        if c:
            total += c * npoly.polyval(x, power)
        power = n * power
    return float(total / state.norm_fn)
