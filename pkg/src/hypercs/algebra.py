"""Deformed ladder algebra on a truncated Fock space.

The deformation is fixed by ``e(n) = n prod(b_j - 1 + n) / prod(a_i - 1 + n)``
and the structure function ``rho(n) = e(1) e(2) ... e(n)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import TruncationError
from .specfun import ModelParams, gamma_ratio, pfq, pfq_truncated

__all__ = [
    "StructureTable",
    "LadderOperators",
    "build_structure",
    "structure_closed_form",
    "deformation_value",
    "build_ladders",
    "displace_vacuum",
    "generalized_binomial",
    "bracket_power",
]


def _energy_factor(params: ModelParams, n: int) -> float:
    if n > 0:
        num = n * math.prod(b - 1.0 + n for b in params.lower)
        den = math.prod(a - 1.0 + n for a in params.upper)
        return num / den
    # n = 0: removable limit of n / prod(a_i - 1 + n) when some a_i == 1
    unit = [a for a in params.upper if a == 1.0]
    if not unit:
        return 0.0
    if len(unit) > 1:
        return math.inf
    rest = math.prod(a - 1.0 for a in params.upper if a != 1.0)
    return math.prod(b - 1.0 for b in params.lower) / rest


@dataclass(frozen=True)
class StructureTable:
    """``rho(n)`` and ``e(n)`` for ``n = 0..n_max``.

    ``e[0]`` holds the removable-limit value of the closed formula (``1/2`` for
    ``a = {1}, b = {3/2}``, ``0`` when no upper parameter equals one). It never
    enters ``rho`` or the ladder matrices, since the lowering operator
    annihilates the vacuum.
    """

    params: ModelParams
    n_max: int
    rho: np.ndarray
    e: np.ndarray
    gamma_ratio: float

    @property
    def dim(self) -> int:
        return self.n_max + 1


def build_structure(params: ModelParams, n_max: int) -> StructureTable:
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    e = np.array([_energy_factor(params, n) for n in range(n_max + 1)])
    rho = np.ones(n_max + 1)
    with np.errstate(over="ignore"):
        for n in range(1, n_max + 1):
            rho[n] = rho[n - 1] * e[n]
    if not np.all(np.isfinite(rho)):
        bad = int(np.argmin(np.isfinite(rho)))
        raise OverflowError(f"rho({bad}) overflows; lower n_max below {bad}")
    e.setflags(write=False)
    rho.setflags(write=False)
    return StructureTable(params, n_max, rho, e, gamma_ratio(params))


def structure_closed_form(params: ModelParams, n: int) -> float:
    """``Gamma(a/b) Gamma(n+1) prod Gamma(b_j+n) / prod Gamma(a_i+n)`` via log-gamma."""
    log_val = math.lgamma(n + 1.0)
    log_val += sum(math.lgamma(b + n) - math.lgamma(b) for b in params.lower)
    log_val -= sum(math.lgamma(a + n) - math.lgamma(a) for a in params.upper)
    return math.exp(log_val)


def deformation_value(table: StructureTable, n: int) -> float:
    """``f(n) = sqrt(e(n) / n)`` for ``1 <= n <= n_max``."""
    if n == 0:
        raise ValueError("deformation function is only evaluated for n >= 1")
    if not 1 <= n <= table.n_max:
        raise IndexError(f"n={n} outside 1..{table.n_max}")
    return math.sqrt(table.e[n] / n)


@dataclass(frozen=True)
class LadderOperators:
    dim: int
    lowering: np.ndarray
    raising: np.ndarray
    number: np.ndarray


def build_ladders(table: StructureTable) -> LadderOperators:
    dim = table.dim
    lowering = np.zeros((dim, dim))
    for n in range(1, dim):
        lowering[n - 1, n] = math.sqrt(table.e[n])
    raising = lowering.T.copy()
    number = np.diag(np.arange(dim, dtype=float))
    for m in (lowering, raising, number):
        m.setflags(write=False)
    return LadderOperators(dim, lowering, raising, number)


def tail_bound(table: StructureTable, z: complex) -> float:
    """``|z|**(n+1) / sqrt(rho(n+1))`` for ``n = n_max``: size of the first dropped coefficient."""
    n = table.n_max + 1
    e_next = _energy_factor(table.params, n)
    return abs(z) ** n / math.sqrt(table.rho[-1] * e_next)


def displace_vacuum(table: StructureTable, z: complex, tol: Optional[float] = 1e-12,
                    truncate_norm: bool = True):
    """Apply ``pFq(z A+) / sqrt(pFq(|z|^2))`` to the vacuum column vector.

    ``A+`` is nilpotent on the truncated space, so the operator series stops
    exactly at ``n_max``. Pass ``tol=None`` to skip the tail check, e.g. for a
    deliberate two-level truncation.
    """
    if tol is not None and tail_bound(table, z) > tol:
        raise TruncationError(
            f"n_max={table.n_max} too small for |z|={abs(z)}: tail {tail_bound(table, z):.3e}")
    raising = build_ladders(table).raising
    vacuum = np.zeros(table.dim, dtype=complex)
    vacuum[0] = 1.0
    term = vacuum.copy()
    out = vacuum.copy()
    for k in range(1, table.dim):
        # z^k A+^k |0> / rho(k) from the previous term
        term = (z / table.e[k]) * (raising @ term)
        out = out + term
    x = abs(z) ** 2
    if truncate_norm:
        norm = pfq_truncated(table.params, x, table.n_max)
    else:
        norm = pfq(table.params, x)
    from .states import CoherentState  # states builds on this module

    return CoherentState(table, complex(z), out / math.sqrt(norm), float(norm))


def generalized_binomial(table: StructureTable, l: int, m: int) -> float:
    if not 0 <= m <= l <= table.n_max:
        raise IndexError(f"need 0 <= m <= l <= {table.n_max}, got l={l}, m={m}")
    return table.rho[l] / (table.rho[m] * table.rho[l - m])


def _is_matrix(v) -> bool:
    return isinstance(v, np.ndarray) and v.ndim == 2


def bracket_power(table: StructureTable, x, y, l: int):
    """``[x + y]^l = sum_m binom_rho(l, m) x^(l-m) y^m``.

    ``x`` and ``y`` may be scalars or commuting square matrices; matrix
    powers use ``x^0 = I``.
    """
    if not 0 <= l <= table.n_max:
        raise IndexError(f"l={l} outside 0..{table.n_max}")
    total = 0
    for m in range(l + 1):
        if _is_matrix(x):
            term = np.linalg.matrix_power(x, l - m) @ np.linalg.matrix_power(y, m)
        else:
            term = x ** (l - m) * y ** m
        total = total + generalized_binomial(table, l, m) * term
    return total
