import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from extremal import (
    DomainError,
    LognormalTail,
    ReturnLaw,
    SuperLognormalTail,
    TailModel,
    aux_h,
    centering_ratio,
    family_from_dict,
    mtg4_diagnostics,
    normalizers,
    nu_bar,
    quantile_G,
    quantile_V,
    unit_scaled,
    zeta,
)
from extremal.tails import family_to_dict, log_nu_bar, quantile_V_log


@pytest.fixture(scope="module")
def lognormal():
    # nu_bar(x) = exp(-(log x)^2): x0 = e, nu_bar(x0) = 1/e
    return TailModel.build(LognormalTail(c=1, beta_t=0, xi=0, lam=1, gamma=2))


@pytest.fixture(scope="module")
def superlog():
    # nu_bar(x) = exp(-exp(sqrt(log x))): x0 = e
    return TailModel.build(SuperLognormalTail(c=1, rho=1, mu=1, alpha=0.5))


class TestTailValues:
    def test_lognormal_at_e(self, lognormal):
        assert nu_bar(lognormal, math.e) == pytest.approx(math.exp(-1), rel=1e-12)

    def test_lognormal_at_e2(self, lognormal):
        assert nu_bar(lognormal, math.e**2) == pytest.approx(math.exp(-4), rel=1e-12)

    def test_super_at_e4(self, superlog):
        assert nu_bar(superlog, math.e**4) == pytest.approx(
            math.exp(-math.e**2), rel=1e-12
        )

    def test_truncation_point(self, lognormal, superlog):
        assert lognormal.x0 == pytest.approx(math.e, rel=1e-12)
        assert superlog.x0 == pytest.approx(math.e, rel=1e-12)

    def test_below_x0_rejected(self, lognormal):
        with pytest.raises(DomainError):
            nu_bar(lognormal, 2.0)

    def test_strictly_decreasing(self, lognormal, superlog):
        xs = np.geomspace(math.e, 1e8, 1000)
        for model in (lognormal, superlog):
            vals = log_nu_bar(model, xs)
            assert np.all(np.diff(vals) < 0.0)


class TestAuxH:
    def test_closed_form(self, lognormal):
        xs = np.geomspace(5.0, 1e6, 50)
        assert np.allclose(aux_h(lognormal, xs), xs / (2.0 * np.log(xs)), rtol=1e-12)

    def test_at_e2(self, lognormal):
        assert aux_h(lognormal, math.e**2) == pytest.approx(math.e**2 / 4, rel=1e-12)

    @pytest.mark.parametrize("which", ["lognormal", "superlog"])
    def test_finite_difference_oracle(self, which, lognormal, superlog):
        # h must equal -dx / d(log nu_bar) computed by centered differences
        model = lognormal if which == "lognormal" else superlog
        x = 1e6
        dx = x * 1e-5
        slope = (log_nu_bar(model, x + dx) - log_nu_bar(model, x - dx)) / (2 * dx)
        fd = -1.0 / slope
        assert abs(aux_h(model, x) - fd) / fd < 1e-6

    def test_positive_on_grid(self, superlog):
        xs = np.geomspace(3.0, 1e12, 200)
        assert np.all(aux_h(superlog, xs) > 0.0)


class TestQuantileV:
    def test_analytic_inversion(self, lognormal):
        # (log V)^2 = 4 at y = e^4
        assert quantile_V(lognormal, math.e**4) == pytest.approx(math.e**2, rel=1e-9)

    def test_round_trip(self, lognormal, superlog):
        for model in (lognormal, superlog):
            for y in (1e2, 1e6, 1e12):
                v = quantile_V(model, y)
                back = -log_nu_bar(model, v)  # log(1/nu_bar(V(y)))
                assert abs(back - math.log(y)) < 1e-9

    def test_monotone_on_random_grid(self, lognormal, rng):
        ys = np.sort(np.exp(rng.uniform(1.5, 25.0, 1000)))
        vs = quantile_V(lognormal, ys)
        assert np.all(np.diff(vs) >= 0.0)

    def test_truncated_region_returns_x0(self, lognormal):
        # 1/nu_bar(x0) = e, anything at or below comes back as x0
        assert quantile_V(lognormal, 1.0) == lognormal.x0
        assert quantile_V(lognormal, math.e * 0.999) == lognormal.x0

    def test_rejects_bad_arguments(self, lognormal):
        with pytest.raises(DomainError):
            quantile_V(lognormal, np.inf)
        with pytest.raises(DomainError):
            quantile_V(lognormal, -1.0)
        with pytest.raises(DomainError):
            quantile_V(lognormal, np.nan)


class TestQuantileG:
    def test_consistency(self, lognormal, superlog):
        for model in (lognormal, superlog):
            for x in (1e1, 1e5, 1e11):
                g = quantile_G(model, x)
                # nu_bar(G(x)) = nu_bar(x0) / x
                assert abs(
                    log_nu_bar(model, g) - (model.log_nu_x0 - math.log(x))
                ) < 1e-9

    def test_unit_scaled_analytic_value(self):
        # with c rescaled so nu_bar(x0) = 1: nu_bar = exp(1 - (log x)^2),
        # so G(e^4) solves 1 - s^2 = -4
        fam = unit_scaled(LognormalTail(c=1, lam=1, gamma=2))
        model = TailModel.build(fam)
        assert model.nu_bar_x0 == pytest.approx(1.0, rel=1e-9)
        assert quantile_G(model, math.e**4) == pytest.approx(
            math.exp(math.sqrt(5.0)), rel=1e-9
        )

    def test_nondecreasing(self, superlog, rng):
        xs = np.sort(np.exp(rng.uniform(0.1, 40.0, 1000)))
        gs = quantile_G(superlog, 1.0 + xs)
        assert np.all(np.diff(gs) >= 0.0)

    def test_rejects_x_below_one(self, lognormal):
        with pytest.raises(DomainError):
            quantile_G(lognormal, 0.5)


class TestZeta:
    def test_lognormal_matches_finite_x_closed_form(self, lognormal):
        # for nu_bar = exp(-(log x)^2): zeta(x) = log x / (2 sqrt(1 + log x))
        for x in (1e4, 1e8, 1e12):
            expect = math.log(x) / (2.0 * math.sqrt(1.0 + math.log(x)))
            assert zeta(lognormal, x) == pytest.approx(expect, rel=1e-9)

    def test_lognormal_asymptotic_ratio(self, lognormal):
        # growth rate (1/2) sqrt(log x); ratio within 10% at x = 1e12
        ratio = zeta(lognormal, 1e12) / (0.5 * math.sqrt(math.log(1e12)))
        assert abs(ratio - 1.0) < 0.10

    def test_super_asymptotic_trend(self, superlog):
        # growth rate 2 log log x; the ratio drifts toward 1
        xs = np.array([1e6, 1e10, 1e14, 1e18])
        ratios = np.array(
            [zeta(superlog, x) / (2.0 * math.log(math.log(x))) for x in xs]
        )
        err = np.abs(ratios - 1.0)
        assert np.all(np.diff(err) < 0.0)
        assert err[-1] < 0.10

    def test_diverges_monotonically(self, lognormal, superlog):
        xs = np.geomspace(1e3, 1e15, 13)
        for model in (lognormal, superlog):
            zs = zeta(model, xs)
            assert np.all(np.diff(zs) > 0.0)

    def test_domain(self, lognormal):
        with pytest.raises(DomainError):
            zeta(lognormal, 2.0)


class TestNormalizers:
    def test_scale_positive_and_vanishing_relative_to_center(self, lognormal):
        law = ReturnLaw(0.3)
        ratios = []
        for n in (10**3, 10**5, 10**7, 10**9):
            ns = normalizers(lognormal, law, n)
            assert ns.a_n > 0.0
            ratios.append(ns.a_n / ns.b_n)
        assert np.all(np.diff(ratios) < 0.0)

    def test_sqrt_wandering_input(self, lognormal):
        # beta = 1/2 without log correction: w_n grows like 2 sqrt(n)
        law = ReturnLaw(0.5)
        ns = normalizers(lognormal, law, 10**7)
        assert ns.w_n / (2.0 * math.sqrt(10**7)) == pytest.approx(1.0, abs=0.05)
        bs = [normalizers(lognormal, law, n).b_n for n in (100, 1000, 10_000, 100_000)]
        assert np.all(np.diff(bs) > 0.0)

    def test_tolerance_refinement_stability(self, lognormal):
        law = ReturnLaw(0.3)
        coarse = normalizers(lognormal, law, 10**6, rtol=1e-12)
        fine = normalizers(lognormal, law, 10**6, rtol=5e-13)
        assert abs(coarse.b_n - fine.b_n) < 1e-6 * coarse.a_n

    def test_small_n_rejected(self, lognormal):
        with pytest.raises(DomainError):
            normalizers(lognormal, ReturnLaw(0.3), 1)


class TestCenteringRatio:
    n_grid = [10**4, 10**8, 10**12, 10**16]

    def test_lognormal_decreasing(self):
        model = TailModel.build(LognormalTail(c=1, lam=0.25, gamma=2))
        law = ReturnLaw(0.3)
        r = [centering_ratio(model, law, n) for n in self.n_grid]
        assert np.all(np.diff(r) < 0.0)

    def test_super_alpha_04_decreasing(self):
        model = TailModel.build(SuperLognormalTail(c=1, rho=0.5, mu=1, alpha=0.4))
        law = ReturnLaw(0.3)
        r = [centering_ratio(model, law, n) for n in self.n_grid]
        assert np.all(np.diff(r) < 0.0)

    def test_super_alpha_07_increasing(self):
        model = TailModel.build(SuperLognormalTail(c=1, rho=0.5, mu=1, alpha=0.7))
        law = ReturnLaw(0.3)
        r = [centering_ratio(model, law, n) for n in self.n_grid]
        assert np.all(np.diff(r) > 0.0)


class TestQuantileIncrementDiagnostics:
    def test_shift_ratio_bounded(self, lognormal):
        diag = mtg4_diagnostics(lognormal, np.array([1e6, 1e9, 1e12, 1e15]), alpha=1.0)
        assert np.all(diag.shift_ratio > 0.1)
        assert np.all(diag.shift_ratio < 10.0)

    def test_dyadic_positive_with_usable_rho(self, lognormal):
        diag = mtg4_diagnostics(
            lognormal, np.array([1e6, 1e9, 1e12, 1e15]), rho=0.4
        )
        ratios = np.concatenate([r for r in diag.dyadic_ratios if r.size])
        assert ratios.size > 0
        assert np.all(ratios > 0.0)

    def test_tiny_rho_gives_empty_ranges_at_desk_scale(self, lognormal):
        # rho = 0.05 makes floor(rho log x / zeta) = 0 on this whole grid
        diag = mtg4_diagnostics(
            lognormal, np.array([1e6, 1e9, 1e12, 1e15]), rho=0.05
        )
        assert all(r.size == 0 for r in diag.dyadic_ratios)

    def test_growth_ratio_diverges(self, lognormal):
        diag = mtg4_diagnostics(
            lognormal, np.array([1e6, 1e9, 1e12, 1e15]), delta=0.5
        )
        assert np.all(np.diff(diag.growth_ratio) > 0.0)

    def test_grid_validation(self, lognormal):
        with pytest.raises(DomainError):
            mtg4_diagnostics(lognormal, np.array([1e6, 1e5]))
        with pytest.raises(DomainError):
            mtg4_diagnostics(lognormal, np.array([2.0, 1e6]))


class TestFamilyConstruction:
    def test_json_round_trip(self):
        d = {"family": "superlognormal", "c": 2.0, "rho": 0.5, "mu": 1.0, "alpha": 0.4}
        fam = family_from_dict(d)
        back = family_to_dict(fam)
        assert back["family"] == "superlognormal"
        assert back["rho"] == 0.5
        assert family_from_dict(back) == fam

    def test_missing_fields_default_to_zero_and_fail_validation(self):
        with pytest.raises(ValueError):
            family_from_dict({"family": "lognormal", "c": 1.0, "gamma": 2.0})

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            family_from_dict({"family": "weibull"})

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            LognormalTail(c=0.0, lam=1, gamma=2)
        with pytest.raises(ValueError):
            LognormalTail(c=1, lam=1, gamma=1.0)
        with pytest.raises(ValueError):
            SuperLognormalTail(c=1, rho=1, mu=1, alpha=1.0)

    @settings(max_examples=30, deadline=None)
    @given(
        c=st.floats(0.1, 10.0),
        beta_t=st.floats(-2.0, 2.0),
        xi=st.floats(-2.0, 2.0),
        lam=st.floats(0.1, 4.0),
        gamma=st.floats(1.2, 4.0),
    )
    def test_lognormal_models_are_wellformed(self, c, beta_t, xi, lam, gamma):
        fam = LognormalTail(c=c, beta_t=beta_t, xi=xi, lam=lam, gamma=gamma)
        # families whose truncation point would exceed exp(700) are refused
        # (not representable in float64); only test representable ones
        assume(float(fam.dlog_tail(300.0)) < 0.0)
        assume(float(fam.log_tail(650.0)) <= 0.0)
        model = TailModel.build(fam)
        xs = np.geomspace(model.x0, model.x0 * 1e6, 200)
        vals = log_nu_bar(model, xs)
        assert np.all(np.diff(vals) < 0.0)
        assert vals[0] <= 1e-12
        hs = aux_h(model, xs)
        assert np.all(hs > 0.0)
        ys = np.geomspace(2.0 / model.nu_bar_x0, 1e9 / model.nu_bar_x0, 50)
        assert np.all(np.diff(quantile_V(model, ys)) >= 0.0)


class TestLogQuantileEdge:
    def test_log_argument_threshold(self, lognormal):
        thresh = -lognormal.log_nu_x0
        assert quantile_V_log(lognormal, thresh) == lognormal.x0
        assert quantile_V_log(lognormal, thresh + 1e-12) >= lognormal.x0
