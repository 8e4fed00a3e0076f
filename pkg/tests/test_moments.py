"""Bessel kernel, critical constants, moment solver and exact series."""

import math

import mpmath
import pytest
from mpmath import mp

from tightwp import moments
from tightwp.errors import DomainError
from tightwp.ring import PiPoly, Rational, pi_squared

PREC = 113


class TestBessel:
    @pytest.mark.parametrize("k", [0, 1, 2, 5])
    @pytest.mark.parametrize("x", ["0", "0.5", "2.40482555", "7.3", "10"])
    def test_matches_independent_library_evaluation(self, k, x):
        with mp.workprec(PREC):
            mine = moments.bessel_j(k, mpmath.mpf(x), PREC)
            ref = mpmath.besselj(k, mpmath.mpf(x))
            assert abs(mine - ref) <= mpmath.mpf(2) ** -100 * (1 + abs(ref))

    def test_j0_at_zero(self):
        assert moments.bessel_j(0, 0, PREC) == 1

    def test_domain(self):
        with pytest.raises(DomainError):
            moments.bessel_j(0, 10.5, PREC)
        with pytest.raises(DomainError):
            moments.bessel_j(-1, 1.0, PREC)


class TestConstants:
    def test_j0_value(self):
        j0 = moments.find_j0(PREC)
        assert mpmath.nstr(j0, 16) == "2.404825557695773"
        assert 2.40 < j0 < 2.41
        assert abs(moments.bessel_j(0, j0, PREC)) < 1e-12
        with mp.workprec(PREC):
            assert abs(j0 - mpmath.besseljzero(0, 1)) < mpmath.mpf(2) ** -105

    def test_j1_at_j0(self):
        j0 = moments.find_j0(PREC)
        v = moments.bessel_j(1, j0, PREC)
        assert mpmath.nstr(v, 16) == "0.5191474972894668"

    def test_mu_critical_digits(self):
        muc = moments.mu_critical(PREC)
        assert mpmath.nstr(muc, 10).startswith("0.0316")
        # frozen regression digits from the bisection + series oracle
        assert mpmath.nstr(muc, 16) == "0.03162384020066974"

    def test_alpha_constants(self):
        assert abs(moments.alpha1(PREC) - mpmath.mpf("2.41105")) < 1e-5
        assert abs(moments.alpha2(PREC) - mpmath.mpf("1.27848")) < 1e-5
        assert mpmath.nstr(moments.alpha1(PREC), 12) == "2.41105096865"
        assert mpmath.nstr(moments.alpha2(PREC), 12) == "1.27848325779"


class TestSolveR:
    def test_endpoints(self):
        assert moments.solve_r(0, PREC) == 0
        muc = moments.mu_critical(PREC)
        with mp.workprec(PREC):
            want = moments.find_j0(PREC) ** 2 / (8 * mp.pi ** 2)
            got = moments.solve_r(muc, PREC)
            assert abs(got - want) < mpmath.mpf(2) ** -90

    def test_defining_identity_on_grid(self):
        muc = moments.mu_critical(PREC)
        with mp.workprec(PREC):
            for f in ("0.1", "0.35", "0.6", "0.85", "0.99"):
                mu = muc * mpmath.mpf(f)
                r = moments.solve_r(mu, PREC)
                assert abs(moments.z_value(r, mu, PREC)) < mpmath.mpf(2) ** -90

    def test_monotone_in_mu(self):
        muc = moments.mu_critical(PREC)
        vals = [moments.solve_r(muc * f / 10, PREC) for f in range(10)]
        assert all(vals[i] < vals[i + 1] for i in range(len(vals) - 1))

    def test_domain(self):
        with pytest.raises(DomainError):
            moments.solve_r(-0.01, PREC)
        with pytest.raises(DomainError):
            moments.solve_r(0.04, PREC)

    def test_dz_dr_is_bessel_j0(self):
        with mp.workprec(PREC):
            h = mpmath.mpf(2) ** -40
            for r in ("0.01", "0.03", "0.06"):
                r = mpmath.mpf(r)
                fd = (moments.z_value(r + h, 0, PREC)
                      - moments.z_value(r - h, 0, PREC)) / (2 * h)
                ref = moments.bessel_j(0, 2 * mp.pi * mpmath.sqrt(2 * r),
                                       PREC)
                assert abs(fd - ref) < 1e-6 * (1 + abs(ref))


class TestMoments:
    def test_mu_zero_limits(self):
        with mp.workprec(PREC):
            p2 = pi_squared(PREC)
            for k in range(6):
                want = (-2 * p2) ** k / mpmath.factorial(k)
                got = moments.moment(k, 0, PREC)
                assert abs(got - want) <= mpmath.mpf(2) ** -100 * abs(want)

    def test_m0_vanishes_at_critical(self):
        muc = moments.mu_critical(PREC)
        assert abs(moments.moment(0, muc, PREC)) < 1e-25

    def test_m1_at_critical(self):
        muc = moments.mu_critical(PREC)
        with mp.workprec(PREC):
            j0 = moments.find_j0(PREC)
            want = -4 * mp.pi ** 2 * moments.bessel_j(1, j0, PREC) / j0
            got = moments.moment(1, muc, PREC)
            assert abs(got - want) < mpmath.mpf(2) ** -80 * abs(want)

    def test_sign_pattern(self):
        muc = moments.mu_critical(PREC)
        with mp.workprec(PREC):
            for f in ("0", "0.3", "0.7", "0.9999"):
                mu = muc * mpmath.mpf(f)
                for k in range(1, 9):
                    v = moments.moment(k, mu, PREC)
                    assert (v < 0) == (k % 2 == 1)

    def test_m0_square_root_vanishing_trend(self):
        muc = moments.mu_critical(PREC)
        with mp.workprec(PREC):
            j0 = moments.find_j0(PREC)
            scale = 8 * mp.pi ** 2 * moments.bessel_j(1, j0, PREC) / j0
            gaps = []
            for e in (4, 6, 8, 10):
                gap = mpmath.mpf(10) ** -e
                ratio = moments.moment(0, muc - gap, PREC) \
                    / mpmath.sqrt(scale * gap)
                gaps.append(abs(ratio - 1))
            assert all(g2 < g1 for g1, g2 in zip(gaps, gaps[1:]))
            assert gaps[-1] < 1e-4

    def test_frame(self):
        frame = moments.make_frame(0.01, 4, PREC)
        assert frame.d_max == 4
        assert len(frame.m_ratios()) == 4
        assert abs(moments.z_value(frame.r_value, frame.mu, PREC)) < 1e-25
        with pytest.raises(DomainError):
            moments.make_frame(0.032, 2, PREC)  # above mu_c


class TestMomentSeries:
    def test_m0_coefficients(self):
        s = moments.moment_series(0, 3)
        assert s.coeff(0) == PiPoly.const(1)
        assert s.coeff(1) == PiPoly.term(-2, 1)
        assert s.coeff(2) == PiPoly.term(-1, 2)
        assert s.coeff(3) == PiPoly.term(Rational(-14, 9), 3)

    def test_constant_terms(self):
        for k in range(6):
            s = moments.moment_series(k, 2)
            assert s.coeff(0) == PiPoly.term(
                Rational((-2) ** k, math.factorial(k)), k)

    def test_series_matches_numeric(self):
        muc = moments.mu_critical(PREC)
        with mp.workprec(PREC):
            for k in range(5):
                s = moments.moment_series(k, 20)
                for f in ("0.05", "0.15", "0.25"):
                    mu = muc * mpmath.mpf(f)
                    a = s.eval(mu, PREC)
                    b = moments.moment(k, mu, PREC)
                    assert abs(a - b) <= 1e-8 * (1 + abs(b))

    def test_observed_geometric_error_decay(self):
        muc = moments.mu_critical(PREC)
        with mp.workprec(PREC):
            mu = muc / 4
            ref = moments.moment(0, mu, PREC)
            errs = [abs(moments.moment_series(0, order).eval(mu, PREC) - ref)
                    for order in (4, 8, 12, 16)]
            assert all(e2 < e1 / 4 for e1, e2 in zip(errs, errs[1:]))


class TestVolumeExtraction:
    def test_acceptance_values(self):
        vols = moments.volume_extract(0, 3, 2)
        assert vols[0] == PiPoly.const(1)
        assert vols[1] == PiPoly.term(2, 1)
        assert vols[2] == PiPoly.term(10, 2)
        v11 = moments.volume_extract(1, 1, 1)
        assert v11[0] == PiPoly.term(Rational(1, 12), 1)
        assert v11[1] == PiPoly.term(Rational(1, 4), 2)

    def test_cross_route_consistency(self):
        """V_{0,n}(0) extracted through (0,3) and (0,4) must agree, and
        likewise through (1,1) and (1,2): independent recursion chains."""
        via03 = moments.volume_extract(0, 3, 4)
        via04 = moments.volume_extract(0, 4, 3)
        for p in range(4):
            assert via03[p + 1] == via04[p]
        via11 = moments.volume_extract(1, 1, 3)
        via12 = moments.volume_extract(1, 2, 2)
        for p in range(3):
            assert via11[p + 1] == via12[p]

    def test_known_v06(self):
        # V_{0,6}(0) = 244 pi^6 / 3 (classical table value)
        v = moments.volume_extract(0, 3, 3)[3]
        assert v == PiPoly.term(Rational(244, 3), 3)

    def test_genus_two_published_closed_form(self):
        """T_{2,1}(L, 0) must equal the classical one-boundary genus-2
        volume (4p+x)(12p+x)(6960p^2+384px+5x^2)/2211840 with p = pi^2,
        x = L^2 -- an end-to-end oracle for the genus-2 chain."""
        from tightwp import tightpoly

        assert moments.volume_extract(2, 1, 0)[0] == \
            PiPoly.term(Rational(29, 192), 4)
        cell = tightpoly.p_gn(2, 1)
        m_vals = [PiPoly.term(Rational((-2) ** k, math.factorial(k)), k)
                  for k in range(1, cell.d + 1)]
        den = Rational(2211840)
        expect = {
            (0,): PiPoly.term(Rational(48 * 6960) / den, 4),
            (1,): PiPoly.term(Rational(48 * 384 + 16 * 6960) / den, 3),
            (2,): PiPoly.term(Rational(48 * 5 + 16 * 384 + 6960) / den, 2),
            (3,): PiPoly.term(Rational(16 * 5 + 384) / den, 1),
            (4,): PiPoly.const(Rational(5) / den),
        }
        assert cell.poly.subst_m(m_vals) == expect

    def test_generating_function_positive_coefficients(self):
        s = moments.t_volume_series(2, 0, 40)
        for j in range(41):
            c = s.coeff(j)
            assert not c.is_zero
            assert all(q > 0 for _e, q in c.items())

    def test_insufficient_order_rejected(self):
        with pytest.raises(DomainError):
            moments.volume_extract(0, 3, -1)
