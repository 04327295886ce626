import json
import math
import random
from fractions import Fraction

import pytest

from sievelab.errors import DomainError
from sievelab.numerics import QuadratureSpec, integrate
from sievelab.sieve_functions import BETA, TWO_E_GAMMA, F_lin, f_lin
from sievelab.thresholds import (SieveParams, admissible_r, dh_threshold_linear,
                                 linear_threshold, m_zeta, minimize_m,
                                 reproduce_constants, tau_from_theta,
                                 threshold_components)


class TestTau:
    def test_published_levels(self):
        assert tau_from_theta(Fraction(7, 64)) == Fraction(25, 128)
        assert tau_from_theta(0) == Fraction(1, 4)
        assert tau_from_theta(Fraction(1, 4)) == Fraction(1, 8)

    def test_string_and_float_inputs(self):
        assert tau_from_theta("7/64") == Fraction(25, 128)
        assert tau_from_theta(0.25) == Fraction(1, 8)

    def test_domain(self):
        with pytest.raises(DomainError):
            tau_from_theta(Fraction(1, 2))
        with pytest.raises(DomainError):
            tau_from_theta(-1)


class TestComponents:
    def test_first_pair(self):
        i1, i2, i3 = threshold_components(1.0, 6.6)
        assert 0.21435 <= i1 <= 0.21442
        assert abs(i1 - Fraction(115, 924) * math.log(28.0 / 5.0)) <= 1e-8
        assert 0.0550 <= i2 <= 0.05558
        assert 0.0 < i3 <= 1e-5

    def test_second_pair(self):
        i1, i2, i3 = threshold_components(1.0, 7.0)
        assert 0.21325 <= i1 <= 0.21331
        assert abs(i1 - Fraction(5, 42) * math.log(6.0)) <= 1e-8
        assert 0.0695 <= i2 <= 0.07015
        assert 0.0 < i3 <= 3e-5

    def test_nearly_empty_third_window(self):
        _, _, i3 = threshold_components(1.0, 6.01)
        assert 0.0 <= i3 < 1e-6

    def test_domain(self):
        for a, b in ((0.5, 7.0), (3.0, 8.0), (1.0, 5.9), (1.0, 8.1), (2.9, 7.5)):
            with pytest.raises(DomainError):
                threshold_components(a, b)


class TestLinearThreshold:
    def test_published_cutoffs(self):
        thr = linear_threshold(1.0, 6.6, Fraction(25, 128))
        assert 5.95 <= thr <= 5.997
        assert admissible_r(thr) == (6, False)
        thr = linear_threshold(1.0, 7.0, Fraction(1, 4))
        assert 4.65 <= thr <= 4.677
        assert admissible_r(thr) == (5, False)

    def test_larger_level_helps(self):
        thr = linear_threshold(1.0, 6.6, Fraction(1, 4))
        assert thr < 5.996

    def test_monotone_decreasing_in_tau(self):
        taus = (0.15, float(Fraction(25, 128)), 0.22, 0.25)
        vals = [linear_threshold(1.0, 6.6, t) for t in taus]
        assert all(a > b for a, b in zip(vals, vals[1:]))


class TestGeneralLinearRoute:
    @pytest.mark.parametrize("a,b,tau", [(1.0, 6.6, Fraction(25, 128)),
                                         (1.0, 7.0, Fraction(1, 4))])
    def test_specialization_matches(self, a, b, tau):
        u = b / ((b - a) * float(tau))
        v = b / float(tau)
        assert dh_threshold_linear(tau, u, v) == pytest.approx(
            linear_threshold(a, b, tau), abs=1e-6)

    def test_empty_integral(self):
        # u = v makes v/u = 1: the integral vanishes and the bound is u - 1
        assert dh_threshold_linear(0.5, 10.0, 10.0) == pytest.approx(9.0, abs=1e-12)

    def test_named_constraint_violations(self):
        with pytest.raises(DomainError, match="tau\\*v <= 8"):
            dh_threshold_linear(0.25, 34.0, 34.0)
        with pytest.raises(DomainError, match="u > 1/tau"):
            dh_threshold_linear(0.25, 3.0, 30.0)
        with pytest.raises(DomainError, match="u <= v"):
            dh_threshold_linear(0.5, 12.0, 11.0)
        with pytest.raises(DomainError, match="tau\\*v > 2"):
            dh_threshold_linear(0.3, 4.0, 4.0)


class TestProofIdentities:
    @pytest.mark.parametrize("a,b", [(1.0, 6.6), (1.0, 7.0), (1.5, 7.2)])
    def test_component_split_equals_direct_integral(self, a, b):
        i1, i2, i3 = threshold_components(a, b)
        spec = QuadratureSpec(1e-11, 1e-11)

        def integrand(s):
            return F_lin(b - s, spec.tightened()) * (1.0 / s - 1.0 / (b - a))

        cuts = sorted({1.0, b - a} | {b - c for c in (3.0, 5.0) if 1.0 < b - c < b - a})
        direct = sum(integrate(integrand, lo, hi, spec)
                     for lo, hi in zip(cuts, cuts[1:]))
        assert TWO_E_GAMMA * (i1 + i2 + i3) == pytest.approx(direct, abs=1e-6)

    def test_elementary_integral_closed_form(self):
        rng = random.Random(31337)
        for _ in range(5):
            a = rng.uniform(1.0, 2.9)
            b = rng.uniform(a + 5.0 + 0.01, 8.0)
            direct = integrate(
                lambda s: (1.0 / (b - s)) * (1.0 / s - 1.0 / (b - a)),
                1.0, b - a, QuadratureSpec(1e-12, 1e-12))
            closed = (math.log((b - 1.0) * (b - a) / a) / b
                      - math.log((b - 1.0) / a) / (b - a))
            assert direct == pytest.approx(closed, abs=1e-8)


class TestTwoDimensionalRoute:
    def test_minima(self):
        res = minimize_m(10.24)
        assert res.argmin == pytest.approx(0.19214, abs=0.001)
        assert res.min_value == pytest.approx(15.6327, abs=0.002)
        res = minimize_m(8.0)
        assert res.argmin == pytest.approx(0.23556, abs=0.001)
        assert res.min_value == pytest.approx(13.0287, abs=0.002)

    def test_exponent_from_level(self):
        assert 2.0 / float(tau_from_theta(Fraction(7, 64))) == 10.24

    def test_stationarity(self):
        res = minimize_m(10.24)
        h = 1e-4
        slope = (m_zeta(10.24, res.argmin + h) - m_zeta(10.24, res.argmin - h)) / (2 * h)
        assert abs(slope) <= 1e-3

    def test_log_term_vanishes_at_sifting_limit(self):
        beta2 = BETA[2]
        z = beta2 * (1.0 - 1e-12)
        expected = 10.0 * (1.0 + z) - 10.0 * z / beta2 - 1.0
        assert m_zeta(10.0, z) == pytest.approx(expected, abs=1e-8)

    def test_domain(self):
        with pytest.raises(DomainError):
            m_zeta(10.0, 0.0)
        with pytest.raises(DomainError):
            m_zeta(10.0, BETA[2] + 0.1)
        with pytest.raises(DomainError):
            minimize_m(2.0)


class TestAdmissibleR:
    def test_regular(self):
        assert admissible_r(5.996) == (6, False)
        assert admissible_r(4.676) == (5, False)

    def test_near_integer_is_flagged(self):
        r, flagged = admissible_r(6.0 + 5e-10)
        assert flagged and r is None


class TestReproduceConstants:
    @pytest.mark.parametrize("mode,r_lin,r_quad", [("unconditional", "6", "16"),
                                                   ("selberg", "5", "14")])
    def test_modes(self, mode, r_lin, r_quad):
        report = reproduce_constants(mode)
        assert report.all_pass
        by_name = {row.name: row for row in report.rows}
        assert by_name["r (one coordinate)"].computed == r_lin
        assert by_name["r (coordinate product)"].computed == r_quad

    def test_tau_row_matches_function(self):
        report = reproduce_constants("unconditional")
        assert report.tau == tau_from_theta(report.theta)
        assert report.rows[0].passed

    def test_json_round_trip(self):
        payload = json.loads(reproduce_constants("selberg").to_json())
        assert payload["all_pass"] is True
        assert payload["tau"] == "1/4"
        assert len(payload["rows"]) == 10

    def test_unknown_mode(self):
        with pytest.raises(DomainError):
            reproduce_constants("hybrid")


class TestSieveParams:
    def test_consistent(self):
        p = SieveParams(kappa=1.0, theta=Fraction(7, 64), tau=Fraction(25, 128),
                        mu=1.0 / float(Fraction(25, 128)), a=1.0, b=6.6)
        assert p.tau == Fraction(25, 128)

    def test_tau_mismatch(self):
        with pytest.raises(DomainError):
            SieveParams(kappa=1.0, theta=Fraction(7, 64), tau=Fraction(1, 4), mu=8.0)

    def test_window_validation(self):
        with pytest.raises(DomainError):
            SieveParams(kappa=1.0, theta=0, tau=Fraction(1, 4), mu=8.0,
                        a=0.5, b=7.0)

    def test_zeta_validation(self):
        with pytest.raises(DomainError):
            SieveParams(kappa=2.0, theta=0, tau=Fraction(1, 4), mu=8.0,
                        zeta=BETA[2] + 1.0)
