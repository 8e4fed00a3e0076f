"""Acceptance criteria as runnable checks.

Each criterion function returns a CriterionResult with per-check
measurements and verdicts; the CLI ``verify`` subcommand and the
tests/test_acceptance.py module both drive this code.  Tolerances are
pinned here, not in the callers.

Two checks are expected to fail at desk scale and are implemented
faithfully anyway (see the package README): the factorial-moment ratio
pinned at g=6 within 10%, and the coefficient ratios pinned at g=8 with
mu_g = mu_c - g^-3 within 15%.  Both converge only in the genuine
large-genus limit; the measured finite-size values are reported.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass

import mpmath
from mpmath import mp

from tightwp import boltzmann, intersection, moments, spectrum, tightpoly
from tightwp.ring import PiPoly, Rational, TightPoly

PREC = 113


@dataclass
class Check:
    name: str
    passed: bool
    measured: str
    tolerance: str


@dataclass
class CriterionResult:
    name: str
    checks: list
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_obj(self):
        return {
            "criterion": self.name,
            "passed": self.passed,
            "seconds": round(self.seconds, 3),
            "checks": [vars(c) for c in self.checks],
        }


def _num(x, digits: int = 17) -> str:
    return mpmath.nstr(mpmath.mpf(x), digits)


def criterion_constants(cache=None) -> CriterionResult:
    """mu_c leading digits, alpha_1, alpha_2 against the quoted values."""
    checks = []
    muc = moments.mu_critical(PREC)
    s = mpmath.nstr(muc, 10)
    checks.append(Check("mu_c leading digits", s.startswith("0.0316"),
                        s, "starts with 0.0316"))
    a1 = moments.alpha1(PREC)
    checks.append(Check("alpha1", abs(a1 - mpmath.mpf("2.41105")) < 1e-5,
                        _num(a1, 10), "2.41105 +- 1e-5"))
    a2 = moments.alpha2(PREC)
    checks.append(Check("alpha2", abs(a2 - mpmath.mpf("1.27848")) < 1e-5,
                        _num(a2, 10), "1.27848 +- 1e-5"))
    return CriterionResult("C01 constants", checks)


def _expected_p04() -> TightPoly:
    m1 = TightPoly.m_var(4, 1, 1)
    out = -m1
    for i in range(1, 5):
        out = out + TightPoly.ell_var(4, 1, i) * Rational(1, 2)
    return out


def _expected_p12() -> TightPoly:
    m1 = TightPoly.m_var(2, 2, 1)
    m2 = TightPoly.m_var(2, 2, 2)
    l1 = TightPoly.ell_var(2, 2, 1)
    l2 = TightPoly.ell_var(2, 2, 2)
    inner = (-m2) + m1 * m1 * 2 - m1 * (l1 + l2) \
        + (l1 * l1 + l2 * l2) * Rational(1, 8) + l1 * l2 * Rational(1, 4)
    return inner * Rational(1, 24)


def criterion_polynomials(cache=None) -> CriterionResult:
    """Base cases and hand-derived P_{0,4}, P_{1,2} as exact term maps."""
    checks = []
    p03 = tightpoly.p_gn(0, 3, cache=cache).poly
    checks.append(Check("P_{0,3} = 1", p03 == TightPoly.const(3, 0, 1),
                        repr(p03.to_obj()), "exact"))
    p11 = tightpoly.p_gn(1, 1, cache=cache).poly
    m1 = TightPoly.m_var(1, 1, 1)
    l1 = TightPoly.ell_var(1, 1, 1)
    expected11 = ((-m1) + l1 * Rational(1, 2)) * Rational(1, 24)
    checks.append(Check("P_{1,1} = (1/24)(-m1 + ell1/2)",
                        p11 == expected11, repr(p11.to_obj()), "exact"))
    p04 = tightpoly.p_gn(0, 4, cache=cache).poly
    checks.append(Check("P_{0,4} hand form", p04 == _expected_p04(),
                        repr(p04.to_obj()), "exact"))
    p12 = tightpoly.p_gn(1, 2, cache=cache).poly
    checks.append(Check("P_{1,2} hand form", p12 == _expected_p12(),
                        repr(p12.to_obj()), "exact"))
    return CriterionResult("C02 exact polynomial identities", checks)


def _mu0_m_values(d: int) -> list:
    """m_k at mu = 0: M_k(0)/M_0(0) = (-2 pi^2)^k / k!."""
    return [PiPoly.term(Rational((-2) ** k, math.factorial(k)), k)
            for k in range(1, d + 1)]


def criterion_classical_volumes(cache=None) -> CriterionResult:
    """T_{1,1}(L,0) and T_{1,2}(L,0) as exact PiPoly identities."""
    checks = []
    c11 = tightpoly.p_gn(1, 1, cache=cache)
    got = c11.poly.subst_m(_mu0_m_values(c11.d))
    expect = {(1,): PiPoly.const(Rational(1, 48)),
              (0,): PiPoly.term(Rational(1, 12), 1)}
    checks.append(Check("T_{1,1}(L,0) = (L^2 + 4 pi^2)/48", got == expect,
                        repr({k: v.to_obj() for k, v in got.items()}),
                        "exact"))
    c12 = tightpoly.p_gn(1, 2, cache=cache)
    got12 = c12.poly.subst_m(_mu0_m_values(c12.d))
    q = Rational(1, 192)
    expect12 = {
        (2, 0): PiPoly.const(q),
        (0, 2): PiPoly.const(q),
        (1, 1): PiPoly.const(2 * q),
        (1, 0): PiPoly.term(16 * q, 1),
        (0, 1): PiPoly.term(16 * q, 1),
        (0, 0): PiPoly.term(48 * q, 2),
    }
    checks.append(Check(
        "T_{1,2}(L,0) = ((l1+l2)^2 + 16 pi^2 (l1+l2) + 48 pi^4)/192",
        got12 == expect12,
        repr({k: v.to_obj() for k, v in got12.items()}), "exact"))
    return CriterionResult("C03 classical volume oracle", checks)


def criterion_series_extraction(cache=None) -> CriterionResult:
    """volume_extract at order 20: V_{0,3}, V_{0,4}(0), V_{1,1}(0)."""
    checks = []
    vols = moments.volume_extract(0, 3, 20, cache=cache)
    checks.append(Check("V_{0,3} = 1", vols[0] == PiPoly.const(1),
                        repr(vols[0].to_obj()), "exact"))
    checks.append(Check("V_{0,4}(0) = 2 pi^2",
                        vols[1] == PiPoly.term(2, 1),
                        repr(vols[1].to_obj()), "exact"))
    v11 = moments.volume_extract(1, 1, 0, cache=cache)[0]
    checks.append(Check("V_{1,1}(0) = pi^2/12",
                        v11 == PiPoly.term(Rational(1, 12), 1),
                        repr(v11.to_obj()), "exact"))
    return CriterionResult("C04 series extraction", checks)


def criterion_property_suites(cache=None) -> CriterionResult:
    """validate_cell sweep, string/dilaton consistency, comparison sweep."""
    checks = []
    bad = []
    for g in range(0, 6):
        for n in range(0, 6):
            if tightpoly.admissible(g, n):
                cell = tightpoly.p_gn(g, n, cache=cache)
                if not tightpoly.validate_cell(cell):
                    bad.append((g, n))
    checks.append(Check("validate_cell for admissible g<=5, n<=5",
                        not bad, f"failures: {bad}", "all valid"))

    # string/dilaton: exact reduction identities on every cached key that
    # carries a tau_0 (resp. tau_1), in the stated dimension range
    str_fail = dil_fail = 0
    str_n = dil_n = 0
    for (g, idx) in intersection.cached_keys():
        n = len(idx)
        if 3 * g - 3 + n > 12:
            continue
        if 0 in idx:
            rest = list(idx)
            rest.remove(0)
            if rest and 2 * g - 2 + len(rest) > 0:
                str_n += 1
                if not intersection.string_identity_holds(g, rest):
                    str_fail += 1
        if 1 in idx:
            rest = list(idx)
            rest.remove(1)
            if rest and 2 * g - 2 + len(rest) > 0:
                dil_n += 1
                if not intersection.dilaton_identity_holds(g, rest):
                    dil_fail += 1
    checks.append(Check("string equation on cached keys (dim <= 12)",
                        str_fail == 0 and str_n > 0,
                        f"{str_n} keys, {str_fail} failures", "all exact"))
    checks.append(Check("dilaton equation on cached keys (dim <= 12)",
                        dil_fail == 0 and dil_n > 0,
                        f"{dil_n} keys, {dil_fail} failures", "all exact"))

    # exhaustive comparison-bound sweep
    total = failures = 0
    for g in (2, 3, 4):
        dim = 3 * g - 3
        pool = []
        for k in range(0, dim + 1):
            for combo in itertools.combinations_with_replacement(
                    range(1, 5), k):
                if sum(combo) <= dim:
                    pool.append(combo)
        for pvec in pool:
            for qvec in pool:
                if not qvec:
                    continue
                if sum(pvec) + sum(qvec) > dim:
                    continue
                total += 1
                if not intersection.check_comparison_bound(g, pvec, qvec):
                    failures += 1
    checks.append(Check("comparison bound sweep g in {2,3,4}, entries <= 4",
                        failures == 0 and total > 0,
                        f"{total} instances, {failures} failures",
                        "all true"))
    return CriterionResult("C05 property suites", checks)


def criterion_intersection_trend(cache=None) -> CriterionResult:
    """|mp_asymptotic_ratio(g,(2)) - 1| strictly decreasing on 6..12."""
    checks = []
    gaps = []
    for g in range(6, 13):
        r = intersection.mp_asymptotic_ratio(g, (2,), prec=PREC)
        gaps.append(abs(float(r - 1)))
    dec = all(gaps[i + 1] < gaps[i] for i in range(len(gaps) - 1))
    checks.append(Check("|ratio - 1| strictly decreasing over g=6..12", dec,
                        str([f"{x:.3e}" for x in gaps]), "monotone"))
    checks.append(Check("|ratio - 1| at g=12 below 0.2", gaps[-1] < 0.2,
                        f"{gaps[-1]:.3e}", "< 0.2"))
    return CriterionResult("C06 intersection asymptotics trend", checks)


def criterion_alpha_trends(cache=None) -> CriterionResult:
    """Concentration diagnostics: the mu-trend at g=4 and the pinned
    g=8 coefficient ratios (the latter is the documented red check)."""
    checks = []
    muc = moments.mu_critical(PREC)
    g = 4
    cell = tightpoly.p_gn(g, 0, cache=cache)
    gaps = []
    for j in range(2, 7):
        mu = muc * (1 - mpmath.mpf(10) ** -j)
        fr = moments.cached_frame(mu, cell.d, PREC)
        a = tightpoly.alpha_deriv(g, 0, (1,), fr, cache=cache)
        ph = tightpoly.phi(g, 0, (1,), fr)
        gaps.append(abs(float(a / ph - 1)))
    dec = all(gaps[i + 1] < gaps[i] for i in range(len(gaps) - 1))
    checks.append(Check("|alpha_{g,(1)}/phi(g,(1)) - 1| decreasing, "
                        "mu = mu_c(1 - 10^-j), j=2..6, g=4", dec,
                        str([f"{x:.4f}" for x in gaps]), "monotone"))
    checks.append(Check("final gap at j=6 below 0.05", gaps[-1] < 0.05,
                        f"{gaps[-1]:.4f}", "< 0.05"))

    g = 8
    mu = muc - mpmath.mpf(g) ** -3
    cell = tightpoly.p_gn(g, 1, cache=cache)
    fr = moments.cached_frame(mu, cell.d, PREC)
    for (n, pvec, qvec) in [(1, (), (1,)), (1, (1,), (0,))]:
        ac = tightpoly.alpha_coeff(g, n, pvec, qvec, fr, cache=cache)
        target = tightpoly.phi(g, n, pvec, fr)
        for q in qvec:
            target /= math.factorial(2 * q + 1)
        ratio = float(ac / target)
        checks.append(Check(
            f"alpha/(phi prod 1/(2q+1)!) within 15% at g=8, "
            f"(n,p,q)=({n},{pvec},{qvec})",
            abs(ratio - 1) < 0.15, f"ratio = {ratio:.4f}", "|r - 1| < 0.15"))
    return CriterionResult("C07 concentration-diagnostic trends", checks)


def criterion_cusp_statistics(cache=None) -> CriterionResult:
    """Factorial-moment ratios (documented red at g=6), concentration
    decrease, and exact pmf/moment cross identities."""
    checks = []
    muc = moments.mu_critical(PREC)
    mu = muc - mpmath.mpf("1e-5")
    for r in (0, 1):
        fm = boltzmann.factorial_moment(6, r, mu, prec=PREC, cache=cache)
        with mp.workprec(PREC):
            target = (5 * 6 * muc / (2 * (muc - mu))) ** (r + 1)
        ratio = float(fm.to_mpf(PREC) / target)
        checks.append(Check(
            f"factorial moment ratio within 10% at g=6, r={r}",
            abs(ratio - 1) < 0.10, f"ratio = {ratio:.4f}", "|r - 1| < 0.10"))

    # mu_c - 3^-3 < 0, so the g=3 point of the stated range is outside
    # the model's domain [0, mu_c); the decreasing trend runs over 4..8.
    vals = []
    for g in range(4, 9):
        cr = boltzmann.concentration_ratio(
            g, muc - mpmath.mpf(g) ** -3, prec=PREC, cache=cache)
        vals.append(float(cr))
    dec = all(vals[i + 1] < vals[i] for i in range(len(vals) - 1))
    checks.append(Check(
        "concentration ratio decreasing at mu_g = mu_c - g^-3 "
        "(g=4..8; g=3 has mu_g < 0, outside the domain)", dec,
        str([f"{v:.4f}" for v in vals]), "monotone"))

    for (g, mu) in [(2, muc / 2), (3, muc / 3), (3, muc / 2)]:
        pmf = boltzmann.cusp_pmf(g, mu, prec=PREC, cache=cache)
        ok = abs(pmf.raw_mass - 1) < 1e-12
        m1 = boltzmann.factorial_moment(g, 0, mu, PREC, cache).to_mpf(PREC)
        m2 = boltzmann.factorial_moment(g, 1, mu, PREC, cache).to_mpf(PREC)
        rel1 = abs(pmf.mean() / float(m1) - 1)
        rel2 = abs(pmf.factorial_moment(2) / float(m2) - 1)
        checks.append(Check(
            f"pmf/moment cross identities at (g,mu)=({g},{_num(mu, 6)})",
            ok and rel1 < 1e-8 and rel2 < 1e-8,
            f"raw mass {pmf.raw_mass:.15f}, rel errs {rel1:.2e}/{rel2:.2e}",
            "raw in [1-1e-12,1], rels < 1e-8"))
    return CriterionResult("C08 cusp statistics", checks)


def criterion_expected_counts(cache=None) -> CriterionResult:
    """Non-separating expected counts vs lambda_{1,2} along g = 3..8."""
    checks = []
    muc = moments.mu_critical(PREC)
    windows = spectrum.IntervalSet.make([(1.0, 2.0)])
    lam = spectrum.intensity(1, 2, PREC)
    checks.append(Check("lambda_{1,2} oracle",
                        abs(lam - mpmath.mpf("0.92165280110676097")) < 1e-12,
                        _num(lam, 12), "0.92165280... +- 1e-12"))
    gaps = []
    for g in range(3, 9):
        mu_g = muc - mpmath.mpf(g) ** -4
        e = spectrum.expected_nonseparating_count(g, mu_g, windows, PREC,
                                                  cache)
        gaps.append(abs(float(e / lam - 1)))
    dec = all(gaps[i + 1] < gaps[i] for i in range(len(gaps) - 1))
    checks.append(Check("|count/lambda - 1| decreasing over g=3..8", dec,
                        str([f"{x:.4f}" for x in gaps]), "monotone"))
    checks.append(Check("|count/lambda - 1| at g=8 below 0.15",
                        gaps[-1] < 0.15, f"{gaps[-1]:.4f}", "< 0.15"))
    return CriterionResult("C09 tight-geodesic count limit", checks)


def criterion_separating_suppression(cache=None) -> CriterionResult:
    """separating_sum(g,1,2) * g stays in a factor-3 band over g=4..10."""
    muc = moments.mu_critical(PREC)
    vals = []
    for g in range(4, 11):
        s = boltzmann.separating_sum(g, 1, 2, muc - mpmath.mpf(g) ** -3,
                                     prec=PREC, cache=cache)
        vals.append(float(s.to_mpf(PREC) * g))
    band = max(vals) / min(vals)
    check = Check("separating_sum(g,1,2) * g within a factor-3 band, "
                  "g=4..10", band < 3.0,
                  f"values {[f'{v:.4f}' for v in vals]}, band {band:.3f}",
                  "max/min < 3")
    return CriterionResult("C10 separating suppression", [check])


def criterion_monte_carlo(cache=None, samples: int = 100_000
                          ) -> CriterionResult:
    """Sampler statistics against exact targets."""
    checks = []
    t_max = 3.0
    windows = [(0.5, 1.0), (1.5, 2.5)]
    lam_tot = float(spectrum.intensity(0, t_max, 53))
    counts_tot = 0
    counts_w = [0, 0]
    for s in range(samples):
        sample = spectrum.sample_poisson_process(t_max, seed=s)
        counts_tot += len(sample)
        for i, (a, b) in enumerate(windows):
            counts_w[i] += sample.count_in(a, b)
    mean_tot = counts_tot / samples
    sigma_tot = math.sqrt(lam_tot / samples)
    checks.append(Check(
        f"Poisson process mean count over {samples} runs within 3 sigma",
        abs(mean_tot - lam_tot) < 3 * sigma_tot,
        f"{mean_tot:.5f} vs {lam_tot:.5f} (sigma {sigma_tot:.5f})",
        "|diff| < 3 sigma"))
    for i, (a, b) in enumerate(windows):
        lam_w = float(spectrum.intensity(a, b, 53))
        mean_w = counts_w[i] / samples
        sigma_w = math.sqrt(lam_w / samples)
        checks.append(Check(
            f"window [{a},{b}] count within 3 sigma",
            abs(mean_w - lam_w) < 3 * sigma_w,
            f"{mean_w:.5f} vs {lam_w:.5f}", "|diff| < 3 sigma"))
    muc = moments.mu_critical(PREC)
    mu = muc / 2
    exact = float(boltzmann.mean_cusps(3, mu, PREC, cache))
    total = 0
    for s in range(samples):
        total += spectrum.sample_cusp_count(3, mu, seed=s, prec=PREC,
                                            cache=cache)
    emp = total / samples
    checks.append(Check(
        f"cusp-count empirical mean over {samples} draws within 1% "
        "at (g,mu)=(3, mu_c/2)",
        abs(emp / exact - 1) < 0.01,
        f"{emp:.4f} vs {exact:.4f}", "relative < 1e-2"))
    return CriterionResult("C11 Monte Carlo", checks)


CRITERIA = [
    ("C01", criterion_constants, True),
    ("C02", criterion_polynomials, True),
    ("C03", criterion_classical_volumes, True),
    ("C04", criterion_series_extraction, True),
    ("C05", criterion_property_suites, False),
    ("C06", criterion_intersection_trend, False),
    ("C07", criterion_alpha_trends, False),
    ("C08", criterion_cusp_statistics, False),
    ("C09", criterion_expected_counts, False),
    ("C10", criterion_separating_suppression, False),
    ("C11", criterion_monte_carlo, False),
]


def run_suite(suite: str = "fast", cache=None, mc_samples: int = 100_000):
    """Run the acceptance criteria; suite is 'fast' or 'full'."""
    if suite not in ("fast", "full"):
        raise ValueError(f"unknown suite {suite!r}")
    results = []
    for _cid, fn, fast in CRITERIA:
        if suite == "fast" and not fast:
            continue
        t0 = time.time()
        if fn is criterion_monte_carlo:
            res = fn(cache=cache, samples=mc_samples)
        else:
            res = fn(cache=cache)
        res.seconds = time.time() - t0
        results.append(res)
    return results
