import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qilab import theory as th
from qilab.transfer import TransferShape, transfer_purity


# ---------------------------------------------------------------------------
# conditioned bounds (thm1 / thm2)


def test_thm1_reference_values():
    assert th.thm1_lower_bound(5, 1, 0, "full") == pytest.approx(10.0, abs=1e-12)
    assert th.thm1_lower_bound(5, 1, 0, "asymptotic") == pytest.approx(10.0)
    assert th.thm1_lower_bound(5, 1, 1, "asymptotic") == pytest.approx(
        10 - 2 * math.log2(1.5), abs=1e-12
    )


def test_thm1_large_bath_limit():
    # huge bath: asymptotic form approaches the bath-free 2N_A - 2log2(t+1)
    val = th.thm1_lower_bound(5, 40, 3, "asymptotic")
    assert val == pytest.approx(10 - 2 * math.log2(4), abs=1e-9)


def test_thm1_full_tracks_asymptotic_at_large_sizes():
    for t in range(0, 101):
        full = th.thm1_lower_bound(30, 4, t, "full")
        asym = th.thm1_lower_bound(30, 4, t, "asymptotic")
        assert abs(full - asym) < 1e-4


def test_thm1_lifetime():
    assert th.thm1_lifetime(5, 1, 0.25) == pytest.approx(2 * (2**3.75 - 1), rel=1e-12)
    # doubling N_A multiplies the lifetime by about 2^{(1-eps)N_A}
    ratio = th.thm1_lifetime(10, 1, 0.25) / th.thm1_lifetime(5, 1, 0.25)
    assert ratio == pytest.approx(2 ** (0.75 * 5), rel=0.1)
    # threshold at the initial value: lifetime collapses to ~0
    assert th.thm1_lifetime(5, 20, 0.999) < 0.01
    with pytest.raises(ValueError):
        th.thm1_lifetime(5, 0, 0.25)
    with pytest.raises(ValueError):
        th.thm1_lifetime(5, 1, 1.5)


def test_thm2_reduces_to_thm1_when_fully_entangled():
    for n_a in (1, 3, 8):
        for n_b in (1, 4):
            for t in (0, 1, 5, 50):
                assert th.thm2_conditional_purity(
                    n_a, n_a, n_b, t
                ) == th.thm1_conditional_purity(n_a, n_b, t)
    # asymptotic forms agree at large sizes
    for t in range(0, 201):
        d = th.thm2_lower_bound(30, 30, 40, t, "asymptotic") - th.thm1_lower_bound(
            30, 40, t, "asymptotic"
        )
        assert abs(d) < 1e-6


def test_thm2_initial_value_and_plateau():
    assert th.thm2_lower_bound(3, 6, 2, 0, "full") == pytest.approx(6.0, abs=1e-12)
    assert th.thm2_lower_bound(3, 6, 2, 0, "asymptotic") == pytest.approx(6.0)
    # few entangled qubits in a large system: value stays near 2N_R for
    # exponentially long times
    assert th.thm2_lower_bound(4, 20, 16, 2**14, "asymptotic") > 7.0
    with pytest.raises(ValueError):
        th.thm2_lower_bound(7, 6, 2, 0)


def test_thm2_lifetime_scaling():
    # lifetime ~ (d_A/d_R)(d_R^{1-eps} - 1): exponential in N_A - N_R
    assert th.thm2_lifetime(4, 20, 0.25) == pytest.approx(
        2**16 * (2**3 - 1), rel=1e-12
    )
    assert th.thm2_lifetime(4, 21, 0.25) == pytest.approx(
        2 * th.thm2_lifetime(4, 20, 0.25), rel=1e-12
    )


# ---------------------------------------------------------------------------
# unconditioned with pure reset (thm3 / thm4)


def test_thm3_reference_values():
    assert th.thm3_unconditioned(4, 1, 0, "exact") == pytest.approx(8.0, abs=1e-12)
    assert th.thm3_unconditioned(32, 16, 2, "early") == 32.0
    assert th.thm3_unconditioned(4, 1, 3, "late") == pytest.approx(256 / 8)


def test_thm3_exact_close_to_early():
    # the exact curve sits a constant ~log2(1 + 1/d_B) below the linear
    # asymptotic form, which is under 3.3% of the value for these times
    for t in range(0, 6):
        exact = th.thm3_unconditioned(10, 2, t, "exact")
        early = th.thm3_unconditioned(10, 2, t, "early")
        assert abs(exact - early) <= math.log2(1 + 1 / 4) + 1e-9
        assert abs(exact - early) / early < 0.033


def test_thm3_lifetimes():
    assert th.thm3_lifetime(5, 1, 0.25, "linear") == pytest.approx(7.5)
    assert th.thm3_lifetime(17, 1, 0.25, "residual") == pytest.approx(2.0)
    assert th.thm3_lifetime(5, 1, 0.999, "linear") < 0.02
    assert th.thm3_lifetime(5, 1, 0.999, "residual") < 0.01


def test_thm4_initial_and_boundaries():
    assert th.thm4_transition(2, 6, 2, 0, "piecewise") == 4.0
    assert th.thm4_transition(20, 40, 2, 0, "asymptotic") == pytest.approx(
        40.0, abs=1e-6
    )
    # plateau until (N_A-N_R)/N_B, linear in between, zero after (N_A+N_R)/N_B
    assert th.thm4_transition(8, 64, 16, 3, "piecewise") == 16.0
    assert th.thm4_transition(8, 64, 16, 4, "piecewise") == 8.0
    assert th.thm4_transition(8, 64, 16, 5, "piecewise") == 0.0


def test_thm4_reduces_to_thm3_when_fully_entangled():
    n_a, n_b = 30, 2
    for t in range(0, 12):
        asym = th.thm4_transition(n_a, n_a, n_b, t, "asymptotic")
        assert abs(asym - th.thm3_unconditioned(n_a, n_b, t, "early")) < 1e-6
    t_late = 2 * n_a // n_b + 20
    late = th.thm4_transition(n_a, n_a, n_b, t_late, "asymptotic")
    assert abs(late - th.thm3_unconditioned(n_a, n_b, t_late, "late")) < 1e-6


# ---------------------------------------------------------------------------
# periodic erasure (thm5)


def test_thm5_reference_values():
    assert th.thm5_partial(64, 16, 16, 4, 8, "simplified") == 94.0
    assert th.thm5_partial(64, 16, 16, 4, 8, "full") == pytest.approx(94.0, abs=1e-3)


def test_thm5_infinite_period_matches_bathfree_decay():
    for t in range(0, 50):
        val = th.thm5_partial(6, 2, 2, math.inf, t, "full")
        assert val == pytest.approx(12 - 2 * math.log2(t + 1), abs=1e-12)


def test_thm5_every_step_erasure_matches_unmonitored_linear_decay():
    for n_a, n_b in ((4, 1), (10, 3)):
        for t in range(0, 30):
            assert th.thm5_partial(n_a, n_b, n_b, 1, t, "simplified") == (
                th.thm3_unconditioned(n_a, n_b, t, "early")
            )


def test_thm5_lifetime():
    assert th.thm5_lifetime(8, 2, 1, 0.5) == pytest.approx((2 - 0.5) * 8 / 2)
    # exponentially rare erasures give an exponentially long lifetime
    assert th.thm5_lifetime(10, 1, 2**10, 0.5) > 2**9
    with pytest.raises(ValueError):
        th.thm5_partial(4, 1, 2, 3, 1)


# ---------------------------------------------------------------------------
# no reset (thm6) and fully-mixed reset (thm7)


def test_thm6_values_and_t0_flag():
    # coincides with the pure-reset curve to sub-0.2-bit accuracy early on
    assert abs(th.thm6_no_reset(4, 1, 1) - th.thm3_unconditioned(4, 1, 1)) < 0.2
    with pytest.warns(UserWarning):
        assert th.thm6_no_reset(4, 1, 0) == 8.0


def test_thm6_matches_reset_case_for_large_bath():
    for t in (1, 2):
        gap = th.thm6_no_reset(40, 25, t) - th.thm3_unconditioned(40, 25, t, "exact")
        assert abs(gap) < 1e-6


def test_thm6_late_time_exponential_rate():
    # decays like d_A^2 d_B^{-t}: the log-ratio approaches 1
    n_a, n_b = 4, 1
    t = 40
    ref = math.log2(4**n_a) - t * n_b
    assert math.log2(th.thm6_no_reset(n_a, n_b, t)) / ref == pytest.approx(1.0, rel=0.05)
    # at the linear level the prefactor stays within (1, log2 e)
    lin = th.thm6_no_reset(n_a, n_b, t) / (4**n_a * 2.0 ** (-t * n_b))
    assert 1.0 < lin < math.log2(math.e)


def test_thm7_reference_values():
    assert th.thm7_mixed_reset(4, 1, 0, "exact") == pytest.approx(8.0, abs=1e-12)
    assert th.thm7_mixed_reset(4, 1, 1, "early") == 7.0
    # slope is -2 N_B, twice the pure-reset drain
    slope = th.thm7_mixed_reset(6, 2, 3, "early") - th.thm7_mixed_reset(6, 2, 2, "early")
    assert slope == -4.0
    # late form already below one bit just past the transition
    assert th.thm7_mixed_reset(4, 1, 5, "late") < 1.0


def test_thm7_exact_tracks_early_then_late():
    n_a, n_b = 12, 4
    for t in range(1, 4):
        early = th.thm7_mixed_reset(n_a, n_b, t, "early")
        assert th.thm7_mixed_reset(n_a, n_b, t, "exact") == pytest.approx(
            early, abs=0.1
        )
    # deep in the exponential tail: same rate, prefactor log2(e)
    assert th.thm7_mixed_reset(12, 1, 22, "exact") / th.thm7_mixed_reset(
        12, 1, 22, "late"
    ) == pytest.approx(math.log2(math.e), rel=0.01)


def test_thm7_lifetimes():
    assert th.thm7_lifetime(8, 2, 0.5, "linear") == pytest.approx(0.5 * (4 + 0.5))
    assert th.thm7_lifetime(8, 2, 0.25, "residual") == pytest.approx(0.5)


# ---------------------------------------------------------------------------
# transfer-matrix cross-oracle


@given(
    st.integers(1, 10),
    st.integers(1, 4),
    st.integers(0, 100),
)
@settings(max_examples=60, deadline=None)
def test_transfer_conditioned_matches_closed_form(n_a, n_b, t):
    shape = TransferShape(n_a, n_b)
    assert transfer_purity("conditioned", -1, shape, t, "A") == (
        th.thm1_conditional_purity(n_a, n_b, t)
    )
    n_r = 1 + (n_a - 1) // 2
    shape_r = TransferShape(n_a, n_b, n_r=n_r)
    assert transfer_purity("conditioned", -1, shape_r, t, "A") == (
        th.thm2_conditional_purity(n_r, n_a, n_b, t)
    )


@given(st.integers(1, 10), st.integers(1, 4), st.integers(0, 100))
@settings(max_examples=60, deadline=None)
def test_transfer_reset_matches_closed_form(n_a, n_b, t):
    shape = TransferShape(n_a, n_b)
    assert tuple(
        transfer_purity("reset", -1, shape, t, b) for b in ("R", "A", "RA")
    ) == th.thm3_purities(n_a, n_b, t)
    n_r = 1 + (n_a - 1) // 2
    shape_r = TransferShape(n_a, n_b, n_r=n_r)
    assert tuple(
        transfer_purity("reset", -1, shape_r, t, b) for b in ("R", "A", "RA")
    ) == th.thm4_purities(n_r, n_a, n_b, t)


@given(st.integers(1, 10), st.integers(1, 4), st.integers(1, 100))
@settings(max_examples=60, deadline=None)
def test_transfer_bath_variants_match_closed_forms(n_a, n_b, t):
    shape = TransferShape(n_a, n_b)
    assert tuple(
        transfer_purity("no-reset", -1, shape, t, b) for b in ("R", "A", "RA")
    ) == th.thm6_purities(n_a, n_b, t)
    assert tuple(
        transfer_purity("fully-mixed", -1, shape, t, b) for b in ("R", "A", "RA")
    ) == th.thm7_purities(n_a, n_b, t)


@given(
    st.integers(1, 8),
    st.integers(1, 4),
    st.integers(1, 4),
    st.integers(1, 8),
    st.integers(0, 60),
)
@settings(max_examples=60, deadline=None)
def test_transfer_partial_matches_closed_form(n_a, n_b, n_e, s, t):
    n_e = min(n_e, n_b)
    shape = TransferShape(n_a, n_b, n_e=n_e, s=s)
    got = tuple(transfer_purity("partial", -1, shape, t, b) for b in ("R", "A", "RA"))
    assert got == th.thm5_gammas(n_a, n_b, n_e, s, t)


def test_transfer_initial_purities_and_errors():
    shape = TransferShape(3, 1)
    # before any evolution the reference is maximally entangled: purity 1/d_A
    assert transfer_purity("no-reset", -1, shape, 0, "A") == Fraction(1, 8)
    assert transfer_purity("no-reset", -1, shape, 0, "RA") == 1
    assert transfer_purity("fully-mixed", -1, shape, 0, "R") == Fraction(1, 8)
    with pytest.raises(ValueError):
        transfer_purity("bogus", -1, shape, 1, "A")
    with pytest.raises(ValueError):
        transfer_purity("reset", -1, shape, 1, "B")
    with pytest.raises(ValueError):
        transfer_purity("reset", 0, shape, 1, "A")
    with pytest.raises(ValueError):
        transfer_purity("conditioned", -1, shape, 1, "RA")
    with pytest.raises(ValueError):
        transfer_purity("partial", -1, shape, 1, "A")


def test_transfer_noninteger_replica_is_smooth():
    shape = TransferShape(3, 2)
    exact = float(transfer_purity("conditioned", -1, shape, 5, "A"))
    drift = transfer_purity("conditioned", -1 + 1e-7, shape, 5, "A")
    assert drift == pytest.approx(exact, rel=1e-5)
    # higher replica weight suppresses the pseudo-purity by d_B^{-t} per unit m
    g0 = transfer_purity("conditioned", 0, shape, 5, "A")
    assert float(g0) < exact


# ---------------------------------------------------------------------------
# curve objects


def test_theory_curve_evaluation_and_flags():
    curve = th.TheoryCurve.evaluate("thm1-asymptotic", {"n_a": 2, "n_b": 1}, range(50))
    assert curve.values[0] == pytest.approx(4.0)
    # the bound goes negative at late times and gets flagged, not clamped
    assert curve.values[49] < 0
    assert curve.valid[0] and not curve.valid[49]
    with pytest.raises(ValueError):
        th.TheoryCurve.evaluate("no-such-kind", {}, [0])
    with pytest.raises(ValueError):
        th.TheoryCurve.evaluate("thm1-lb", {"n_a": 2}, [0])


@pytest.mark.parametrize(
    "kind,params",
    [
        ("thm1-lb", {"n_a": 5, "n_b": 1}),
        ("thm1-asymptotic", {"n_a": 5, "n_b": 1}),
        ("thm2-lb", {"n_r": 2, "n_a": 5, "n_b": 1}),
        ("thm3-exact", {"n_a": 4, "n_b": 1}),
        ("thm3-early", {"n_a": 4, "n_b": 1}),
        ("thm3-late", {"n_a": 4, "n_b": 1}),
        ("thm4-asymptotic", {"n_r": 2, "n_a": 6, "n_b": 2}),
        ("thm4-piecewise", {"n_r": 2, "n_a": 6, "n_b": 2}),
        ("thm5-full", {"n_a": 8, "n_b": 2, "n_e": 2, "s": 3}),
        ("thm5-simplified", {"n_a": 8, "n_b": 2, "n_e": 2, "s": 3}),
        ("thm6-exact", {"n_a": 4, "n_b": 1}),
        ("thm7-exact", {"n_a": 4, "n_b": 1}),
        ("thm7-early", {"n_a": 4, "n_b": 1}),
        ("thm7-late", {"n_a": 4, "n_b": 1}),
    ],
)
def test_all_curves_monotone_nonincreasing(kind, params):
    curve = th.TheoryCurve.evaluate(kind, params, range(1, 40))
    vals = [curve.values[t] for t in range(1, 40)]
    for a, b in zip(vals, vals[1:]):
        assert b <= a + 1e-12


def test_conditioned_bounds_capped_by_initial_entanglement():
    for t in range(0, 30):
        v1 = th.thm1_lower_bound(4, 2, t, "full")
        if v1 > 0:
            assert v1 <= 2 * 4 + 1e-9
        v2 = th.thm2_lower_bound(2, 6, 2, t, "full")
        if v2 > 0:
            assert v2 <= 2 * 2 + 1e-9
