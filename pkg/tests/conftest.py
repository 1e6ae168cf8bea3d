import cmath
import os

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from hypercs.specfun import ModelParams

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

CANONICAL = ModelParams((), ())
TWO_LEVEL = ModelParams((1.0,), (1.5,))
CATALOG = [CANONICAL, TWO_LEVEL]


@pytest.fixture(params=CATALOG, ids=["canonical", "two_level"])
def catalog_params(request):
    return request.param


positive = st.floats(min_value=0.1, max_value=6.0, allow_nan=False)


@st.composite
def entire_params(draw, max_len=2):
    """Parameter sets with p <= q, so the series is entire."""
    q = draw(st.integers(0, max_len))
    p = draw(st.integers(0, q))
    return ModelParams(tuple(draw(positive) for _ in range(p)),
                       tuple(draw(positive) for _ in range(q)))


@st.composite
def complex_labels(draw, radius=2.0):
    r = draw(st.floats(min_value=0.0, max_value=radius))
    phi = draw(st.floats(min_value=-3.2, max_value=3.2))
    return cmath.rect(r, phi)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[n])
