"""Polynomial recursion cells, validators, concentration diagnostics and
the persistent store."""

import mpmath
import pytest
from mpmath import mp

from tightwp import moments, tightpoly
from tightwp.errors import BudgetError, CacheError, DomainError
from tightwp.intersection import intersection_number
from tightwp.ring import Rational, TightPoly

PREC = 113


def test_partitions():
    assert list(tightpoly.partitions(0)) == [()]
    assert sorted(tightpoly.partitions(4)) == sorted(
        [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)])


def test_admissible():
    assert tightpoly.admissible(0, 3) and not tightpoly.admissible(0, 2)
    assert tightpoly.admissible(1, 1) and not tightpoly.admissible(1, 0)
    assert tightpoly.admissible(2, 0) and not tightpoly.admissible(-1, 2)


class TestPg0:
    def test_genus_two_structure(self):
        cell = tightpoly.p_g0(2)
        assert cell.d == 3
        terms = cell.poly.terms
        # -m3 <tau_4>, +m1 m2 <tau_2 tau_3>, -(m1^3/6) <tau_2^3>
        assert terms[(0, 0, 1)] == -intersection_number(2, (4,))
        assert terms[(1, 1, 0)] == intersection_number(2, (3, 2))
        assert terms[(3, 0, 0)] == -intersection_number(2, (2, 2, 2)) \
            / Rational(6)
        assert len(terms) == 3

    def test_every_monomial_graded(self):
        for g in (2, 3, 4):
            cell = tightpoly.p_g0(g)
            assert cell.poly.grades() == {3 * g - 3}

    def test_g_below_two_rejected(self):
        with pytest.raises(DomainError):
            tightpoly.p_g0(1)

    def test_budget_refusal_names_cell(self):
        with pytest.raises(BudgetError) as err:
            tightpoly.p_g0(6, budget=100)
        assert err.value.g == 6 and err.value.n == 0


class TestPgn:
    def test_inadmissible_rejected(self):
        with pytest.raises(DomainError):
            tightpoly.p_gn(0, 2)
        with pytest.raises(DomainError):
            tightpoly.p_gn(1, 0)

    def test_p21_recursion_consistency_at_l_zero(self):
        """P_{2,1}(0, m) equals the derivative + volume terms applied to
        P_{2,0}, exactly (the boundary integral vanishes at n=1)."""
        c21 = tightpoly.p_gn(2, 1)
        c20 = tightpoly.p_gn(2, 0)
        d = c21.d
        prev = c20.poly.embed(1, d, ())
        expect = TightPoly.zero(1, d)
        m1 = TightPoly.m_var(1, d, 1)
        for p in range(1, d):
            m_p = TightPoly.m_var(1, d, p)
            m_p1 = TightPoly.m_var(1, d, p + 1)
            expect = expect + (m_p1 - m1 * m_p) * prev.dm(p)
        expect = expect + 2 * (-m1) * prev
        # restrict P_{2,1} to ell_1 = 0
        restricted = TightPoly(
            1, d, {k: v for k, v in c21.poly.terms.items() if k[0] == 0})
        assert restricted == expect

    def test_validate_cell_and_corruption(self):
        cell = tightpoly.p_gn(2, 2)
        assert tightpoly.validate_cell(cell)
        # corrupt a boundary-asymmetric monomial: breaks the symmetry check
        bad_terms = dict(cell.poly.terms)
        key = next(k for k in bad_terms if k[0] != k[1])
        bad_terms[key] = bad_terms[key] + 1
        bad = tightpoly.PolyCell(2, 2, TightPoly(2, cell.d, bad_terms))
        assert not tightpoly.validate_cell(bad)
        assert tightpoly.validate_cell_report(bad)
        # corrupt the grading: a stray constant term breaks homogeneity
        bad_terms = dict(cell.poly.terms)
        bad_terms[(0,) * (2 + cell.d)] = Rational(1)
        bad = tightpoly.PolyCell(2, 2, TightPoly(2, cell.d, bad_terms))
        assert any("homogeneous" in msg
                   for msg in tightpoly.validate_cell_report(bad))

    def test_asymmetric_cell_reported(self):
        poly = TightPoly(2, 0, {(1, 0): Rational(1)})
        bad = tightpoly.PolyCell(0, 5, poly)  # shape only matters here
        assert any("symmetric" in msg
                   for msg in tightpoly.validate_cell_report(bad))


class TestDiagnostics:
    def setup_method(self):
        muc = moments.mu_critical(PREC)
        self.frame3 = moments.cached_frame(muc / 3, 9, PREC)

    def test_alpha_deriv_empty_pvec_is_poly_value(self):
        cell = tightpoly.p_gn(2, 0)
        fr = moments.cached_frame(self.frame3.mu, cell.d, PREC)
        a = tightpoly.alpha_deriv(2, 0, (), fr)
        direct = cell.poly.eval([], fr.m_ratios()[:cell.d], PREC)
        assert a == direct

    def test_alpha_deriv_zero_beyond_degree(self):
        cell = tightpoly.p_gn(2, 0)
        fr = moments.cached_frame(self.frame3.mu, cell.d, PREC)
        assert tightpoly.alpha_deriv(2, 0, (4,), fr) == 0
        assert tightpoly.alpha_deriv(2, 0, (2, 2), fr) == 0

    def test_mixed_partials_commute_exactly(self):
        poly = tightpoly.p_gn(3, 1).poly
        a = poly.dm(1).dm(2)
        b = poly.dm(2).dm(1)
        assert a == b

    def test_phi_definitional_ratio(self):
        g = 3
        cell = tightpoly.p_gn(g, 0)
        fr = moments.cached_frame(self.frame3.mu, cell.d, PREC)
        with mp.workprec(PREC):
            ratio = -fr.moments[1] / fr.moments[0]
            for n in (1, 2):
                lhs = tightpoly.phi(g, n, (1,), fr)
                rhs = tightpoly.phi(g, 0, (1,), fr) * (ratio * 5 * g) ** n
                assert abs(lhs / rhs - 1) < mpmath.mpf(2) ** -90

    def test_phi_sign_and_flagged_zero(self):
        fr = self.frame3
        assert tightpoly.phi(2, 0, (1,), fr) < 0
        assert tightpoly.phi(2, 0, (4,), fr) == 0
        with pytest.raises(DomainError):
            tightpoly.phi(2, 0, (0,), fr)

    def test_phi_example_genus_two_at_mu_zero(self):
        # phi(2, n=0, p=()) at mu=0 is <tau_2^3>_2 (2 pi^2)^3 / 3!
        fr = moments.cached_frame(0, 3, PREC)
        with mp.workprec(PREC):
            p2 = mp.pi ** 2
            corr = intersection_number(2, (2, 2, 2))
            want = mpmath.mpf(int(corr.numerator)) / int(corr.denominator) \
                * (2 * p2) ** 3 / 6
            got = tightpoly.phi(2, 0, (), fr)
            assert abs(got / want - 1) < mpmath.mpf(2) ** -90

    def test_alpha_coeff_zero_qvec_equals_alpha_deriv(self):
        g = 2
        cell = tightpoly.p_gn(g, 1)
        fr = moments.cached_frame(self.frame3.mu, cell.d, PREC)
        a = tightpoly.alpha_coeff(g, 1, (1,), (0,), fr)
        b = tightpoly.alpha_deriv(g, 1, (1,), fr)
        assert a == b

    def test_alpha_coeff_exact_identity_torus(self):
        # scaled P_{1,1} gives alpha_{1,1,(),(1)} = alpha_{1,1,()} / 6
        fr = moments.cached_frame(self.frame3.mu, 1, PREC)
        a = tightpoly.alpha_coeff(1, 1, (), (1,), fr)
        b = tightpoly.alpha_deriv(1, 1, (), fr)
        with mp.workprec(PREC):
            assert abs(a / (b / 6) - 1) < mpmath.mpf(2) ** -100

    def test_alpha_coeff_validations(self):
        fr = self.frame3
        with pytest.raises(DomainError):
            tightpoly.alpha_coeff(2, 1, (), (0, 0), fr)
        with pytest.raises(DomainError):
            tightpoly.alpha_coeff(2, 1, (), (-1,), fr)

    def test_alpha_over_phi_mu_trend(self):
        muc = moments.mu_critical(PREC)
        g = 3
        cell = tightpoly.p_gn(g, 0)
        gaps = []
        for j in (2, 3, 4):
            fr = moments.cached_frame(muc * (1 - mpmath.mpf(10) ** -j),
                                      cell.d, PREC)
            a = tightpoly.alpha_deriv(g, 0, (1,), fr)
            ph = tightpoly.phi(g, 0, (1,), fr)
            gaps.append(abs(float(a / ph) - 1))
        assert gaps[2] < gaps[1] < gaps[0]

    def test_frame_with_insufficient_moments_rejected(self):
        fr = moments.cached_frame(self.frame3.mu, 1, PREC)
        with pytest.raises(DomainError):
            tightpoly.alpha_deriv(2, 0, (), fr)


class TestStore:
    def test_round_trip(self, poly_cache):
        cell = tightpoly.p_gn(1, 2)
        poly_cache.store(cell)
        back = poly_cache.load(1, 2)
        assert back.poly == cell.poly
        assert (back.genus, back.boundaries) == (1, 2)

    def test_absent_is_none(self, poly_cache):
        assert poly_cache.load(4, 4) is None

    def test_truncated_file_is_checksum_error(self, poly_cache):
        cell = tightpoly.p_gn(1, 2)
        poly_cache.store(cell)
        path = poly_cache._cell_path(1, 2)
        blob = path.read_bytes()
        path.write_bytes(blob[:-10])
        with pytest.raises(CacheError):
            poly_cache.load(1, 2)

    def test_version_mismatch_rejected(self, poly_cache):
        cell = tightpoly.p_gn(1, 2)
        poly_cache.store(cell)
        path = poly_cache._cell_path(1, 2)
        blob = path.read_bytes().replace(b"TWPCACHE v1", b"TWPCACHE v9", 1)
        path.write_bytes(blob)
        with pytest.raises(CacheError):
            poly_cache.load(1, 2)

    def test_tau_segment_round_trip(self, poly_cache):
        intersection_number(2, (4,))
        n = poly_cache.save_tau()
        assert n > 0
        assert poly_cache.load_tau() == n

    def test_build_consults_disk_cache(self, poly_cache, monkeypatch):
        cell = tightpoly.p_gn(1, 3)
        poly_cache.store(cell)
        monkeypatch.setattr(tightpoly, "_cells", {})
        again = tightpoly.p_gn(1, 3, cache=poly_cache)
        assert again.poly == cell.poly
