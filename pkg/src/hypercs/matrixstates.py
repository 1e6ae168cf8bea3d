"""Singular projectors, diagonal matrix labels and matrix-argument coherent states.

A label ``Z = z u0 + sigma u1 = diag(z, sigma)`` lives on two orthogonal
projector slots. Analytic functions act slot by slot, and the coherent state
``|Z>`` is the pair of slot states ``|z>`` (on ``u0``) and ``|sigma>`` (on
``u1``), with the projectors themselves as weights. The Gram matrix is
``u0 <z|z> + u1 <sigma|sigma> = I``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .algebra import StructureTable, bracket_power
from .states import CoherentState, make_state, overlap

__all__ = [
    "Projector",
    "DiagonalLabel",
    "MatrixCoherentState",
    "projector",
    "cauchy_apply",
    "matrix_series",
    "product_rule_check",
    "make_matrix_state",
    "matrix_gram",
    "matrix_projector_decomposition",
    "bracket_matrix_power",
    "bracket_power_on_slots",
    "cross_slot_gram",
    "U0",
    "U1",
]


@dataclass(frozen=True)
class Projector:
    """``|n><n|`` as a ``dim x dim`` matrix with a single unit diagonal entry."""

    dim: int
    index: int

    def __post_init__(self):
        if not 0 <= self.index < self.dim:
            raise IndexError(f"projector index {self.index} outside 0..{self.dim - 1}")

    def matrix(self) -> np.ndarray:
        m = np.zeros((self.dim, self.dim), dtype=int)
        m[self.index, self.index] = 1
        return m

    def __matmul__(self, other: "Projector"):
        if not isinstance(other, Projector):
            return NotImplemented
        if other.dim != self.dim:
            raise ValueError("projector dimensions differ")
        return self if other.index == self.index else np.zeros((self.dim, self.dim), dtype=int)


def projector(dim: int, n: int) -> Projector:
    return Projector(dim, n)


U0 = Projector(2, 0)
U1 = Projector(2, 1)


@dataclass(frozen=True)
class DiagonalLabel:
    """``Z = z u0 + sigma u1``."""

    z: complex
    sigma: complex

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))
        object.__setattr__(self, "sigma", complex(self.sigma))

    def matrix(self) -> np.ndarray:
        return self.z * U0.matrix() + self.sigma * U1.matrix()

    def power(self, m: int) -> "DiagonalLabel":
        return DiagonalLabel(self.z ** m, self.sigma ** m)

    def modulus_sq(self) -> "DiagonalLabel":
        return DiagonalLabel(abs(self.z) ** 2, abs(self.sigma) ** 2)

    def slots(self) -> tuple:
        return (self.z, self.sigma)

    def to_json(self) -> dict:
        return {"z": [self.z.real, self.z.imag], "sigma": [self.sigma.real, self.sigma.imag]}

    @classmethod
    def from_json(cls, obj: dict) -> "DiagonalLabel":
        def parse(v):
            if v is None:
                return 0j
            if isinstance(v, (int, float)):
                return complex(v)
            re, im = v
            return complex(float(re), float(im))
        if not isinstance(obj, dict):
            raise ValueError("label must be an object with keys 'z' and 'sigma'")
        return cls(parse(obj.get("z")), parse(obj.get("sigma")))


def cauchy_apply(f: Callable, label: DiagonalLabel) -> DiagonalLabel:
    """``F(z u0 + sigma u1) = F(z) u0 + F(sigma) u1``."""
    return DiagonalLabel(f(label.z), f(label.sigma))


def matrix_series(coeffs: Sequence, m: np.ndarray) -> np.ndarray:
    """``sum_k c_k M^k`` with explicit matrix powers (``M^0 = I``)."""
    m = np.asarray(m, dtype=complex)
    out = np.zeros_like(m)
    power = np.eye(m.shape[0], dtype=complex)
    for c in coeffs:
        out = out + c * power
        power = power @ m
    return out


def product_rule_check(f: Callable, g: Callable, label1: DiagonalLabel,
                       label2: DiagonalLabel, atol: float = 1e-12) -> DiagonalLabel:
    """Slotwise product ``F(Z1) G(Z2)``, checked against the 2x2 matrix product."""
    fz = cauchy_apply(f, label1)
    gz = cauchy_apply(g, label2)
    result = DiagonalLabel(fz.z * gz.z, fz.sigma * gz.sigma)
    explicit = fz.matrix() @ gz.matrix()
    if not np.allclose(explicit, result.matrix(), rtol=atol, atol=atol):
        raise AssertionError("slotwise product disagrees with the matrix product")
    return result


@dataclass(frozen=True)
class MatrixCoherentState:
    comp0: CoherentState
    comp1: CoherentState

    @property
    def label(self) -> DiagonalLabel:
        return DiagonalLabel(self.comp0.label, self.comp1.label)

    def components(self) -> tuple:
        return (self.comp0, self.comp1)


def make_matrix_state(table: StructureTable, label: DiagonalLabel,
                      n_max: Optional[int] = None,
                      truncate_norm: bool = True) -> MatrixCoherentState:
    return MatrixCoherentState(
        make_state(table, label.z, n_max, truncate_norm),
        make_state(table, label.sigma, n_max, truncate_norm),
    )


def matrix_gram(s: MatrixCoherentState,
                other: Optional[MatrixCoherentState] = None) -> np.ndarray:
    """``u0 <z'|z> + u1 <sigma'|sigma>``; with one argument, the state against itself."""
    bra = s if other is None else other
    g0 = overlap(bra.comp0, s.comp0)
    g1 = overlap(bra.comp1, s.comp1)
    return g0 * U0.matrix() + g1 * U1.matrix()


def cross_slot_gram(s: MatrixCoherentState) -> np.ndarray:
    """Matrix-valued pairing of the slot-0 part against the slot-1 part.

    Each slot amplitude carries its projector, so the pairing is
    ``<z|sigma> u0 u1`` which vanishes identically.
    """
    return overlap(s.comp0, s.comp1) * (U0.matrix() @ U1.matrix())


def matrix_projector_decomposition(s: MatrixCoherentState) -> tuple:
    """Slot-tagged rank-one projectors ``(|z><z|, |sigma><sigma|)``."""
    return (s.comp0.projector(), s.comp1.projector())


def bracket_matrix_power(label: DiagonalLabel, l: int) -> DiagonalLabel:
    """``[z u0 + sigma u1]^l = z^l u0 + sigma^l u1``."""
    if l < 0:
        raise ValueError("power must be non-negative")
    return label.power(l)


def bracket_power_on_slots(table: StructureTable, label: DiagonalLabel, l: int) -> np.ndarray:
    """The full generalized binomial sum evaluated with ``x = z u0``, ``y = sigma u1``."""
    x = label.z * U0.matrix().astype(complex)
    y = label.sigma * U1.matrix().astype(complex)
    return bracket_power(table, x, y, l)
