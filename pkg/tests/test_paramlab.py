import math
from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings, strategies as st

from abshift.cantor import thickness, lambda_approx
from abshift.dynamics import ParameterError, Params, coding, left_limit_coding, point_of
from abshift.numeric import Interval, eventually_periodic_value
from abshift.paramlab import (
    NoWitness,
    default_ell,
    dim_fiber_bound,
    dim_lower_bound,
    dim_lower_bound_at,
    e_ell_window,
    epsilon_conditions,
    find_witness,
    in_e_ell,
    max_epsilon,
    r_alpha,
    r_spec,
    s_alpha,
    s_spec,
    verify_witness,
)
from abshift.shiftspace import KVerdict, SpecStatus, spec_check
from abshift.symbols import SymbolSeq

S = SymbolSeq.parse


def _log2_log3(dps=100):
    import mpmath

    with mpmath.workdps(dps):
        return F(mpmath.nstr(mpmath.log(2) / mpmath.log(3), dps - 5))


LOG2_LOG3 = _log2_log3()


def test_e_ell_window_examples():
    assert e_ell_window(F(29, 10), 3) == Interval(F(1, 10), F(1))
    assert e_ell_window(F(3), 3) == Interval(F(0), F(1))
    assert e_ell_window(F(31, 10), 3) == Interval(F(0), F(9, 10))
    with pytest.raises(ParameterError):
        e_ell_window(F(2), 3)


def test_r_alpha_examples():
    assert r_alpha(F(29, 10), S("(1)")) == (F(10, 29), True)
    assert r_alpha(F(3), S("(1)")).alpha == F(1, 3)
    for beta, ell in ((F(29, 10), 3), (F(37, 4), 10)):
        assert r_alpha(beta, S(f"({ell - 1})"), ell).alpha == F(ell - 1) / beta
    with pytest.raises(ValueError):
        r_alpha(F(29, 10), S("(3)"))


def test_s_alpha_examples():
    assert s_alpha(F(29, 10), S("(1)")) == (F(119, 290), True)
    assert s_alpha(F(29, 10), S("(2)")) == (F(219, 290), True)
    assert s_alpha(F(3), S("(1)")) == (F(1), False)


def test_epsilon_condition_examples():
    assert epsilon_conditions(F(29, 10), 3) == (True, True, True)
    for ell in (3, 5, 10):
        assert not epsilon_conditions(F(ell), ell).upper_s
    assert not epsilon_conditions(F(19, 2), 10).r_inside
    with pytest.raises(ParameterError):
        epsilon_conditions(F(31, 10), 3)


@pytest.mark.parametrize("ell", [3, 4, 10, 57])
def test_max_epsilon_certified(ell):
    eps = max_epsilon(ell)
    assert 0 < eps < 1
    for k in range(1, 40):
        beta = ell - eps + eps * F(k, 40)
        assert epsilon_conditions(beta, ell).all()
    # nearly tight: just outside the window a condition fails
    assert not epsilon_conditions(ell - eps - F(1, 10**6), ell).all()


def test_verify_witness_r_side():
    rep = verify_witness(F(10, 29), F(29, 10), S("(1)"), None, 20)
    assert rep.u == S("0,(1)")
    assert rep.checks.r_identity == 0 and rep.checks.r_orbit
    assert rep.k_u.exact_verdict is KVerdict.EMPTY_CERTIFIED
    assert not rep.certified


def test_verify_witness_s_side():
    rep = verify_witness(F(119, 290), F(29, 10), None, S("(1)"), 20)
    assert rep.v == S("3,(1)")
    assert rep.checks.s_identity == 0 and rep.checks.s_floor and rep.checks.s_orbit
    assert rep.k_v.exact_verdict is KVerdict.EMPTY_CERTIFIED


def test_verify_witness_partial_at_third():
    rep = verify_witness(F(1, 3), F(3), S("(1)"), None, 20)
    assert rep.checks.r_identity == 0 and rep.checks.r_orbit


def test_verify_witness_reports_residual():
    rep = verify_witness(F(11, 29), F(29, 10), S("(1)"), None, 10)
    assert rep.checks.r_identity == F(1, 29)
    assert not rep.checks.r_orbit
    assert any("residual" in n for n in rep.notes)


def test_find_witness_depth_8():
    rep = find_witness(F(29, 10), 8)
    assert not rep.exact
    chain = rep.alpha
    assert len(chain) == 8
    hull = Interval(F(119, 290), F(20, 29))
    assert all(hull.contains_interval(iv) for iv in chain)
    assert all(a.contains_interval(b) for a, b in zip(chain, chain[1:]))
    ra = r_spec(F(29, 10))
    assert all(iv.length <= ra.cylinder_width(d) for d, iv in enumerate(chain, 1))
    assert rep.to_dict()["alpha"][0] == [f"{chain[0].lo.numerator}/{chain[0].lo.denominator}",
                                         f"{chain[0].hi.numerator}/{chain[0].hi.denominator}"]


def test_find_witness_rejections():
    with pytest.raises(ParameterError):
        find_witness(F(5, 2), 3)  # condition r_inside fails
    with pytest.raises(ParameterError):
        find_witness(F(3), 3)  # endpoint beta == ell
    with pytest.raises(ParameterError):
        find_witness(F(19, 10), 3)  # ell = 2


def test_no_witness_carries_diagnostics(monkeypatch):
    import abshift.paramlab as pl
    from abshift.cantor import RefineResult
    from abshift.numeric import IntervalUnion

    monkeypatch.setattr(pl, "intersect_refine", lambda a, b, d: RefineResult(IntervalUnion(), (), d))
    with pytest.raises(NoWitness) as exc:
        find_witness(F(29, 10), 4)
    assert {"interleaved", "gap_lemma", "hulls_overlap"} <= set(exc.value.diagnostics)


def test_r_and_s_specs_share_thickness():
    for beta in (F(29, 10), F(39, 4), F(99, 10)):
        level = 2
        ta = thickness(lambda_approx(r_spec(beta), level))
        tb = thickness(lambda_approx(s_spec(beta), level))
        assert ta.tau == tb.tau


def omega_strategy(ell):
    d = st.integers(1, ell - 1)
    return st.builds(
        lambda a, b: SymbolSeq(tuple(a), tuple(b)),
        st.lists(d, max_size=3),
        st.lists(d, min_size=1, max_size=3),
    )


@st.composite
def beta_and_omega(draw):
    ell = draw(st.integers(3, 8))
    beta = ell - 1 + F(draw(st.integers(1, 99)), 100)
    return beta, ell, draw(omega_strategy(ell))


@settings(max_examples=100, deadline=None)
@given(beta_and_omega())
def test_r_alpha_fixed_point_and_orbit(case):
    beta, ell, omega = case
    alpha, member = r_alpha(beta, omega, ell)
    assume(member)
    p = Params(alpha, beta)
    assert alpha == eventually_periodic_value(omega, beta) - alpha / (beta - 1)
    assert point_of(p, omega) == alpha
    u = coding(p, 0, 1000)
    assert u.prefix(1000) == omega.prepend((0,)).prefix(1000)


@settings(max_examples=100, deadline=None)
@given(beta_and_omega())
def test_s_alpha_identities(case):
    beta, ell, omega = case
    alpha, member = s_alpha(beta, omega, ell)
    assume(member)
    p = Params(alpha, beta)
    assert 1 + math.floor(beta) == math.floor(beta + alpha)
    assert point_of(p, omega) == beta + alpha - 1 - math.floor(beta)
    v = left_limit_coding(p, 1000)
    assert v.prefix(200) == omega.prepend((p.ell,)).prefix(200)


def test_certified_verdict_passes_spec_check():
    rep = verify_witness(F(1, 3), F(3), S("(1)"), None, 20)
    assert rep.certified
    assert spec_check(Params(rep.alpha, rep.beta), 20).status is SpecStatus.SPEC_CERTIFIED


def test_dim_bounds():
    assert abs(dim_lower_bound(10) - 1 - LOG2_LOG3) < F(1, 10**25)
    # a lower bound: never above the true value (reference good to ~1e-90)
    assert dim_lower_bound(10) <= 1 + LOG2_LOG3 + F(1, 10**90)
    assert dim_lower_bound(315) >= F(19, 10)
    values = [dim_lower_bound(10**k) for k in range(1, 7)]
    assert values == sorted(values) and values[-1] < 2
    assert all(dim_lower_bound(l) <= dim_lower_bound(l + 1) for l in range(3, 60))
    assert abs(dim_lower_bound_at(4) - LOG2_LOG3) < F(1, 10**25)
    with pytest.raises(ValueError):
        dim_fiber_bound(2)


def test_default_ell():
    assert default_ell(F(29, 10)) == 3
    assert default_ell(F(3)) == 3
    assert in_e_ell(F(1, 10), F(29, 10), 3) and not in_e_ell(F(1), F(29, 10), 3)
