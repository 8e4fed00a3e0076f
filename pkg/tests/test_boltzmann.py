"""Boltzmann cusp statistics: log-domain values, generating-function
evaluations and their classical degenerations."""

import math

import mpmath
import pytest
from mpmath import mp

from tightwp import boltzmann, moments, tightpoly
from tightwp.boltzmann import LogValue
from tightwp.errors import DomainError, TailMassError
from tightwp.ring import Rational

PREC = 113


class TestLogValue:
    def test_zero_and_sign_rules(self):
        z = LogValue.zero()
        a = LogValue.from_number(-3.0)
        assert z.is_zero and (z * a).is_zero and (a * z).is_zero
        assert (a + z).sign == -1
        assert (a * a).sign == 1

    def test_round_trip(self):
        for x in ("-1234.5", "0.00025", "7"):
            v = LogValue.from_number(mpmath.mpf(x), PREC)
            assert abs(v.to_mpf(PREC) - mpmath.mpf(x)) < 1e-20 * abs(
                mpmath.mpf(x))

    def test_addition_max_shift(self):
        with mp.workprec(PREC):
            a = LogValue.from_number(3.0, PREC)
            b = LogValue.from_number(4.0, PREC)
            assert abs((a + b).to_mpf(PREC) - 7) < 1e-25
            c = LogValue.from_number(-4.0, PREC)
            assert abs((a + c).to_mpf(PREC) + 1) < 1e-25
            assert (b + c).is_zero

    def test_division(self):
        with mp.workprec(PREC):
            a = LogValue.from_number(10.0, PREC)
            b = LogValue.from_number(-4.0, PREC)
            assert abs((a / b).to_mpf(PREC) + 2.5) < 1e-25
        with pytest.raises(ZeroDivisionError):
            a / LogValue.zero()

    def test_float_overflow_guard(self):
        huge = LogValue(1, mpmath.mpf(10_000))
        with pytest.raises(OverflowError):
            huge.to_float()
        assert LogValue.from_number(2.0).to_float() == pytest.approx(2.0)
        assert LogValue.zero().to_float() == 0.0


class TestTVolume:
    def test_classical_values_at_mu_zero(self):
        with mp.workprec(PREC):
            p2 = mp.pi ** 2
            v = boltzmann.t_volume(1, 1, [2.0], 0.0, PREC)
            assert abs(v.to_mpf(PREC) - (4 + 4 * p2) / 48) < 1e-25
            v = boltzmann.t_volume(0, 4, [1.0, 1.0, 0.0, 0.0], 0.0, PREC)
            assert abs(v.to_mpf(PREC) - (2 * p2 + 1)) < 1e-25

    def test_three_holed_sphere(self):
        # T_{0,3}(L, 0) = V_{0,3} = 1 for any L; for mu > 0 the cusp
        # generating function gives exactly 1/M_0(mu), L-independent.
        v = boltzmann.t_volume(0, 3, [1.0, 2.0, 3.0], 0.0, PREC)
        assert abs(v.to_mpf(PREC) - 1) < 1e-25
        with mp.workprec(PREC):
            for mu in (0.01, 0.03):
                v1 = boltzmann.t_volume(0, 3, [1.0, 2.0, 3.0], mu, PREC)
                v2 = boltzmann.t_volume(0, 3, [0.0, 0.0, 0.0], mu, PREC)
                want = 1 / moments.moment(0, mu, PREC)
                assert abs(v1.to_mpf(PREC) / want - 1) < mpmath.mpf(2) ** -90
                assert abs(v2.to_mpf(PREC) / want - 1) < mpmath.mpf(2) ** -90

    def test_mu_zero_matches_volume_extraction(self):
        for (g, n) in [(2, 0), (2, 1), (3, 0)]:
            v = boltzmann.t_volume(g, n, [0.0] * n, 0.0, PREC).to_mpf(PREC)
            exact = moments.volume_extract(g, n, 0)[0].eval(PREC)
            assert abs(v / exact - 1) < mpmath.mpf(2) ** -90

    def test_validations(self):
        with pytest.raises(DomainError):
            boltzmann.t_volume(1, 0, [], 0.01, PREC)
        with pytest.raises(DomainError):
            boltzmann.t_volume(2, 1, [], 0.01, PREC)
        with pytest.raises(DomainError):
            boltzmann.t_volume(2, 0, [], 0.05, PREC)


class TestFactorialMoments:
    def test_zero_at_mu_zero(self):
        assert boltzmann.factorial_moment(2, 0, 0.0, PREC).is_zero

    def test_needs_genus_at_least_two(self):
        with pytest.raises(DomainError):
            boltzmann.factorial_moment(1, 0, 0.01, PREC)

    def test_mean_monotone_in_mu(self):
        muc = moments.mu_critical(PREC)
        vals = [boltzmann.mean_cusps(2, muc * f, PREC)
                for f in (0.1, 0.3, 0.5, 0.7, 0.9)]
        assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_concentration_identity_and_positivity(self):
        muc = moments.mu_critical(PREC)
        mu = muc / 2
        m1 = boltzmann.factorial_moment(3, 0, mu, PREC).to_mpf(PREC)
        m2 = boltzmann.factorial_moment(3, 1, mu, PREC).to_mpf(PREC)
        cr = boltzmann.concentration_ratio(3, mu, PREC)
        assert cr >= 0
        with mp.workprec(PREC):
            assert abs(cr - (m2 + m1 - m1 * m1) / (m1 * m1)) < 1e-25


class TestCuspPmf:
    def test_normalization_and_moments(self):
        muc = moments.mu_critical(PREC)
        pmf = boltzmann.cusp_pmf(2, muc / 2, prec=PREC)
        assert abs(sum(pmf.probs) - 1) < 1e-12
        assert 1 - 1e-12 <= pmf.raw_mass <= 1 + 1e-12
        mean = boltzmann.mean_cusps(2, muc / 2, PREC)
        assert abs(pmf.mean() / float(mean) - 1) < 1e-8
        m2 = boltzmann.factorial_moment(2, 1, muc / 2, PREC).to_mpf(PREC)
        assert abs(pmf.factorial_moment(2) / float(m2) - 1) < 1e-8

    def test_tail_failure_instructs_larger_pmax(self):
        muc = moments.mu_critical(PREC)
        with pytest.raises(TailMassError):
            boltzmann.cusp_pmf(2, muc / 2, pmax=8, prec=PREC)

    def test_domain(self):
        with pytest.raises(DomainError):
            boltzmann.cusp_pmf(2, 0.0, prec=PREC)
        with pytest.raises(DomainError):
            boltzmann.cusp_pmf(1, 0.01, prec=PREC)


class TestSolveMu:
    def test_hits_target_and_monotone(self):
        res = boltzmann.solve_mu_for_target(2, 5.0, prec=PREC)
        assert abs(res.mean / 5.0 - 1) < 1e-8
        res2 = boltzmann.solve_mu_for_target(2, 9.0, prec=PREC)
        assert res2.mu > res.mu

    def test_seed_formula(self):
        muc = moments.mu_critical(PREC)
        res = boltzmann.solve_mu_for_target(4, 1000.0, prec=PREC)
        with mp.workprec(PREC):
            want = muc * (1 - mpmath.mpf(20) / 2000)
            assert abs(res.seed - want) < 1e-25

    def test_bad_target(self):
        with pytest.raises(DomainError):
            boltzmann.solve_mu_for_target(2, 0.0, prec=PREC)


class TestBoundaryRatio:
    def test_zero_lengths(self):
        r, t = boltzmann.boundary_ratio(2, 1, [0.0], 0.01, PREC)
        assert abs(r - 1) < 1e-25 and t == 1

    def test_torus_ratio_exact_quadratic(self):
        muc = moments.mu_critical(PREC)
        with mp.workprec(PREC):
            for lval in (0.5, 1.0, 2.0):
                r, t = boltzmann.boundary_ratio(1, 1, [lval], muc / 2, PREC)
                want = 1 + mpmath.mpf(lval) ** 2 / 6
                assert abs(r - want) < 1e-20
                assert t == mpmath.sinh(mpmath.mpf(lval)) / mpmath.mpf(lval)

    def test_profile_gap_shrinks_with_genus(self):
        muc = moments.mu_critical(PREC)
        gaps = []
        for g in (4, 6):
            mu_g = muc - mpmath.mpf(g) ** -3
            r, t = boltzmann.boundary_ratio(g, 1, [1.0], mu_g, PREC)
            gaps.append(abs(float(r / t) - 1))
        assert gaps[1] < gaps[0]


class TestSeparating:
    def test_decomposition_enumeration(self):
        got = boltzmann.separating_decompositions(10, 1, 2)
        assert got == [((k, 1), (10 - k, 1)) for k in range(1, 10)]

    def test_empty_enumeration_gives_zero(self):
        v = boltzmann.separating_sum(2, 2, 3, 0.01, PREC)
        assert v.is_zero

    def test_positive(self):
        muc = moments.mu_critical(PREC)
        v = boltzmann.separating_sum(4, 1, 2, muc / 2, PREC)
        assert v.sign == 1

    def test_validations(self):
        with pytest.raises(DomainError):
            boltzmann.separating_decompositions(4, 0, 2)
        with pytest.raises(DomainError):
            boltzmann.separating_decompositions(4, 1, 3)


def test_crude_bound_ratio_stays_bounded():
    """|P_{g,n}(L, M)| / (-M_1/M_0)^(3g-3+n) settles to a constant as
    mu -> mu_c (recorded empirically, not asserted against a formula)."""
    muc = moments.mu_critical(PREC)
    g, n = 2, 1
    cell = tightpoly.p_gn(g, n)
    ratios = []
    with mp.workprec(PREC):
        for e in (2, 3, 4, 6, 8, 10):
            fr = moments.cached_frame(muc - mpmath.mpf(10) ** -e, cell.d,
                                      PREC)
            val = cell.poly.eval([1.0], fr.m_ratios()[:cell.d], PREC)
            scale = (-fr.moments[1] / fr.moments[0]) ** cell.d
            ratios.append(abs(float(val / scale)))
    assert all(math.isfinite(r) for r in ratios)
    # bounded: the near-critical values flatten out
    assert max(ratios) < 10 * ratios[-1]
    assert abs(ratios[-1] / ratios[-2] - 1) < 0.01


def test_generating_function_nonnegative_coefficients():
    for g in (2, 3):
        s = moments.t_volume_series(g, 0, 30)
        for j in range(31):
            assert all(q > 0 for _e, q in s.coeff(j).items())
