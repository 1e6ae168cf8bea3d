import cmath
import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import CANONICAL, CATALOG, TWO_LEVEL, complex_labels
from hypercs.algebra import build_structure
from hypercs.errors import TruncationError, TruncationWarning
from hypercs.specfun import pfq
from hypercs.states import (
    DiagonalObservable,
    expect_direct,
    expect_euler,
    label_continuity_probe,
    make_state,
    overlap,
)

TABLES = {p: build_structure(p, 60) for p in CATALOG}


def test_vacuum_exact():
    s = make_state(TABLES[TWO_LEVEL], 0.0)
    assert s.coeffs[0] == 1.0
    assert not np.any(s.coeffs[1:])


def test_poisson_probabilities():
    s = make_state(build_structure(CANONICAL, 40), 1.0)
    poisson = np.array([math.exp(-1) / math.factorial(n) for n in range(41)])
    assert np.allclose(s.probabilities, poisson, rtol=1e-12, atol=1e-300)


def test_two_level_probabilities():
    s = make_state(build_structure(TWO_LEVEL, 1), 1.0)
    assert np.allclose(s.probabilities, [0.6, 0.4], rtol=1e-14)


@pytest.mark.parametrize("params", CATALOG)
@given(z=complex_labels())
def test_unit_norm_and_positive_vacuum(params, z):
    s = make_state(TABLES[params], z)
    assert math.fsum(s.probabilities) == pytest.approx(1.0, abs=1e-13)
    assert s.coeffs[0].real > 0 and s.coeffs[0].imag == 0


@pytest.mark.parametrize("params", CATALOG)
@given(z1=complex_labels(), z2=complex_labels())
def test_overlap_kernel(params, z1, z2):
    s1 = make_state(TABLES[params], z1, truncate_norm=False)
    s2 = make_state(TABLES[params], z2, truncate_norm=False)
    kernel = pfq(params, z1.conjugate() * z2) / math.sqrt(
        pfq(params, abs(z1) ** 2) * pfq(params, abs(z2) ** 2))
    assert overlap(s1, s2) == pytest.approx(kernel, rel=1e-10, abs=1e-12)


@given(z=complex_labels(), theta=st.floats(-math.pi, math.pi))
def test_phase_covariance(z, theta):
    table = TABLES[TWO_LEVEL]
    a = make_state(table, z)
    b = make_state(table, z * cmath.exp(1j * theta))
    n = np.arange(table.dim)
    assert np.allclose(b.coeffs, a.coeffs * np.exp(1j * n * theta), rtol=1e-12, atol=1e-15)
    assert np.allclose(np.abs(b.coeffs), np.abs(a.coeffs), rtol=1e-12, atol=1e-15)


def test_incompatible_overlap():
    a = make_state(TABLES[TWO_LEVEL], 0.5)
    with pytest.raises(ValueError):
        overlap(a, make_state(TABLES[CANONICAL], 0.5))
    with pytest.raises(ValueError):
        overlap(a, make_state(TABLES[TWO_LEVEL], 0.5, n_max=10))


def test_tail_tolerance():
    with pytest.raises(TruncationError):
        make_state(TABLES[CANONICAL], 2.0, n_max=4, tol=1e-8)


def test_continuity_probe():
    table = TABLES[CANONICAL]
    d1 = label_continuity_probe(table, 0.5, 1e-3)
    d2 = label_continuity_probe(table, 0.5, 1e-4)
    assert d2 < d1 < 1e-2
    assert d1 / d2 == pytest.approx(10.0, rel=1e-2)
    with pytest.raises(ValueError):
        label_continuity_probe(table, 0.5, 0.0)


class TestExpectations:
    def test_canonical_number(self):
        s = make_state(TABLES[CANONICAL], 1.3 + 0.2j)
        x = abs(s.label) ** 2
        assert expect_direct(s, DiagonalObservable((0, 1))) == pytest.approx(x, rel=1e-12)
        assert expect_direct(s, DiagonalObservable((0, 0, 1))) == pytest.approx(
            x + x * x, rel=1e-12)

    @pytest.mark.parametrize("params", CATALOG)
    @given(z=complex_labels(),
           coeffs=st.lists(st.floats(-3.0, 3.0), min_size=1, max_size=4))
    def test_direct_equals_euler(self, params, z, coeffs):
        s = make_state(TABLES[params], z)
        obs = DiagonalObservable(coeffs)
        direct = expect_direct(s, obs)
        euler = expect_euler(s, obs)
        # relative to the cancellation-free magnitude sum |c_k| <n^k>
        scale = expect_direct(s, DiagonalObservable([abs(c) for c in coeffs]))
        assert abs(direct - euler) <= 1e-10 * scale

    def test_truncation_warning(self):
        s = make_state(TABLES[CANONICAL], 2.0, n_max=8)
        with pytest.warns(TruncationWarning):
            expect_direct(s, DiagonalObservable((0, 1)))

    def test_no_warning_when_converged(self):
        s = make_state(TABLES[CANONICAL], 1.0)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            expect_direct(s, DiagonalObservable((1, 1, 1, 1)))

    def test_empty_observable(self):
        with pytest.raises(ValueError):
            DiagonalObservable(())
