import math
from fractions import Fraction as F

from hypothesis import strategies as st

from abshift.dynamics import Params


@st.composite
def lab_params(draw, ell_range=(3, 10), max_den=60):
    """Random rational (alpha, beta) with floor(alpha + beta) = ell."""
    ell = draw(st.integers(*ell_range))
    den = draw(st.integers(2, max_den))
    beta = F(draw(st.integers((ell - 1) * den + 1, (ell + 1) * den - 1)), den)
    # alpha on the grid k/(4 den) inside [max(0, ell-beta), min(1, ell+1-beta))
    lo, hi = max(F(0), ell - beta), min(F(1), ell + 1 - beta)
    g = 4 * den
    k = draw(st.integers(math.ceil(lo * g), math.ceil(hi * g) - 1))
    p = Params(F(k, g), beta)
    assert p.ell == ell
    return p


unit_rationals = st.builds(
    lambda k, d: F(k % d, d), st.integers(0, 10**6), st.integers(1, 10**4)
)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
