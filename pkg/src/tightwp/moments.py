"""Bessel moment machinery.

Numeric side: the ascending-series Bessel kernel, the first zero j_0 of
J_0, the critical fugacity mu_c = j_0 J_1(j_0) / (4 pi^2), the root
R(mu) of Z(., mu), the moments M_k(mu) and the two limit-law constants.
Every argument that reaches the Bessel series satisfies x <= j_0 < 2.41,
where the series is rapidly convergent, so no asymptotic expansions are
needed.  Root finding is plain bisection: both bracket functions are
strictly monotone on their intervals.

Exact side: the formal mu-series of R and of every M_k with PiPoly
coefficients, plus the extraction of classical Weil-Petersson volumes
V_{g,n+p}(0) from the cusp generating function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
import mpmath
from mpmath import mp

from tightwp.errors import DomainError
from tightwp.ring import (DEFAULT_PREC, MuSeries, PiPoly, Rational,
                          series_invert_z)

_R1 = Rational(1)


def bessel_j(k: int, x, prec: int = DEFAULT_PREC):
    """J_k(x) by the ascending series, for 0 <= x <= 10.

    Terms are added until they underflow the working precision, which
    carries 16 guard bits over the requested one.
    """
    if k < 0:
        raise DomainError("bessel_j needs k >= 0")
    with mp.workprec(prec + 16):
        x = mpmath.mpf(x)
        if x < 0 or x > 10:
            raise DomainError(f"bessel_j argument {x} outside [0, 10]")
        half = x / 2
        term = half ** k / mpmath.factorial(k)
        total = term
        h2 = half * half
        m = 0
        cutoff = mpmath.mpf(2) ** (-(prec + 8))
        while True:
            m += 1
            term = -term * h2 / (m * (m + k))
            total += term
            if abs(term) <= cutoff * (abs(total) + cutoff):
                break
    with mp.workprec(prec):
        return +total


def z_value(r, mu, prec: int = DEFAULT_PREC):
    """Z(r, mu) = sqrt(r)/(sqrt(2) pi) J_1(2 pi sqrt(2 r)) - mu."""
    with mp.workprec(prec + 16):
        r = mpmath.mpf(r)
        mu = mpmath.mpf(mu)
        if r < 0:
            raise DomainError("Z needs r >= 0")
        if r == 0:
            return +(-mu)
        arg = 2 * mp.pi * mpmath.sqrt(2 * r)
        val = mpmath.sqrt(r) / (mpmath.sqrt(2) * mp.pi) \
            * bessel_j(1, arg, prec + 16) - mu
    with mp.workprec(prec):
        return +val


_j0_cache: dict = {}


def find_j0(prec: int = DEFAULT_PREC):
    """First zero of J_0, by bisection on [2, 3] where J_0 changes sign."""
    cached = _j0_cache.get(prec)
    if cached is not None:
        return cached
    with mp.workprec(prec + 16):
        lo, hi = mpmath.mpf(2), mpmath.mpf(3)
        # J0(2) > 0 > J0(3)
        for _ in range(prec + 24):
            mid = (lo + hi) / 2
            if bessel_j(0, mid, prec + 16) > 0:
                lo = mid
            else:
                hi = mid
        val = +((lo + hi) / 2)
    _j0_cache[prec] = val
    return val


def mu_critical(prec: int = DEFAULT_PREC):
    """mu_c = j_0 J_1(j_0) / (4 pi^2) = 0.0316..."""
    with mp.workprec(prec + 16):
        j0 = find_j0(prec)
        val = j0 * bessel_j(1, j0, prec + 16) / (4 * mp.pi ** 2)
    with mp.workprec(prec):
        return +val


def r_max(prec: int = DEFAULT_PREC):
    """R(mu_c) = j_0^2 / (8 pi^2), the right end of the solver bracket."""
    with mp.workprec(prec + 16):
        j0 = find_j0(prec)
        val = j0 ** 2 / (8 * mp.pi ** 2)
    with mp.workprec(prec):
        return +val


def solve_r(mu, prec: int = DEFAULT_PREC):
    """The unique root of Z(., mu) in [0, j_0^2/(8 pi^2)], by bisection.

    Z is strictly increasing in r on the bracket (its r-derivative is
    J_0(2 pi sqrt(2r)) > 0 there), with Z(0, mu) = -mu <= 0 and
    Z(r_max, mu) = mu_c - mu >= 0.
    """
    with mp.workprec(prec + 16):
        mu = mpmath.mpf(mu)
        muc = mu_critical(prec)
        if mu < 0 or mu > muc * (1 + mpmath.mpf(2) ** (-prec + 4)):
            raise DomainError(f"mu={mu} outside [0, mu_c]")
        if mu == 0:
            return mpmath.mpf(0)
        lo = mpmath.mpf(0)
        hi = r_max(prec)
        for _ in range(prec + 24):
            mid = (lo + hi) / 2
            if z_value(mid, mu, prec) < 0:
                lo = mid
            else:
                hi = mid
        val = +((lo + hi) / 2)
    return val


def moment(k: int, mu, prec: int = DEFAULT_PREC):
    """M_k(mu) = (-sqrt(2) pi / sqrt(R))^k J_k(2 pi sqrt(2 R)) at R = R(mu).

    The removable singularity at R = 0 switches to the series form
    sum_m (-2 pi^2)^(m+k) R^m / (m! (m+k)!), whose m = 0 term is the
    limit M_k(0) = (-2 pi^2)^k / k!.
    """
    if k < 0:
        raise DomainError("moment index must be >= 0")
    with mp.workprec(prec + 16):
        r = solve_r(mu, prec)
        if r < mpmath.mpf("1e-8"):
            c = (-2 * mp.pi ** 2)
            term = c ** k / mpmath.factorial(k)
            total = term
            m = 0
            cutoff = mpmath.mpf(2) ** (-(prec + 8))
            while True:
                m += 1
                term = term * c * r / (m * (m + k))
                total += term
                if abs(term) <= cutoff * (abs(total) + cutoff):
                    break
            with mp.workprec(prec):
                return +total
        arg = 2 * mp.pi * mpmath.sqrt(2 * r)
        pref = (-mpmath.sqrt(2) * mp.pi / mpmath.sqrt(r)) ** k
        val = pref * bessel_j(k, arg, prec + 16)
    with mp.workprec(prec):
        return +val


def alpha1(prec: int = DEFAULT_PREC):
    """Normalization constant sqrt((6/pi) sqrt(2 j_0 / J_1(j_0)))."""
    with mp.workprec(prec + 16):
        j0 = find_j0(prec)
        val = mpmath.sqrt(6 / mp.pi
                          * mpmath.sqrt(2 * j0
                                        / bessel_j(1, j0, prec + 16)))
    with mp.workprec(prec):
        return +val


def alpha2(prec: int = DEFAULT_PREC):
    """Normalization constant (1/pi) sqrt(3 j_0 sqrt(5))."""
    with mp.workprec(prec + 16):
        j0 = find_j0(prec)
        val = mpmath.sqrt(3 * j0 * mpmath.sqrt(mpmath.mpf(5))) / mp.pi
    with mp.workprec(prec):
        return +val


@dataclass(frozen=True)
class MomentFrame:
    """Numeric snapshot (mu, R(mu), M_0..M_D) at a fixed precision."""

    mu: object
    r_value: object
    moments: tuple
    precision: int

    @property
    def d_max(self) -> int:
        return len(self.moments) - 1

    @property
    def m0(self):
        return self.moments[0]

    def m_ratios(self) -> tuple:
        """(M_1/M_0, ..., M_D/M_0), the values substituted for m_k."""
        m0 = self.moments[0]
        return tuple(mk / m0 for mk in self.moments[1:])


def make_frame(mu, d_max: int, prec: int = DEFAULT_PREC) -> MomentFrame:
    """Build a MomentFrame with moments M_0..M_{d_max}."""
    if d_max < 0:
        raise DomainError("d_max must be >= 0")
    with mp.workprec(prec + 16):
        mu = mpmath.mpf(mu)
        if mu < 0 or mu >= mu_critical(prec):
            raise DomainError(f"mu={mu} outside [0, mu_c)")
        r = solve_r(mu, prec)
        moms = tuple(moment(k, mu, prec) for k in range(d_max + 1))
    return MomentFrame(mu=+mu, r_value=r, moments=moms, precision=prec)


_frame_cache: dict = {}


def cached_frame(mu, d_max: int, prec: int = DEFAULT_PREC) -> MomentFrame:
    """make_frame with memoization; frames are immutable and shareable."""
    with mp.workprec(prec + 16):
        key = (mpmath.nstr(mpmath.mpf(mu), 40), d_max, prec)
    frame = _frame_cache.get(key)
    if frame is None:
        frame = make_frame(mu, d_max, prec)
        _frame_cache[key] = frame
    return frame


# -- exact formal series ----------------------------------------------------

_r_series_cache: dict = {}
_r_pows_cache: dict = {}


def r_series(order: int) -> MuSeries:
    """Cached R(mu) series."""
    s = _r_series_cache.get(order)
    if s is None:
        s = series_invert_z(order)
        _r_series_cache[order] = s
    return s


def _r_pows(order: int):
    pows = _r_pows_cache.get(order)
    if pows is None:
        r = r_series(order)
        pows = [MuSeries([PiPoly.const(1)], order=order)]
        for _ in range(order):
            pows.append(pows[-1] * r)
        _r_pows_cache[order] = pows
    return pows


def moment_series(k: int, order: int) -> MuSeries:
    """M_k(mu) as an exact MuSeries.

    Composition of sum_m (-2 pi^2)^(m+k) r^m / (m!(m+k)!) with R(mu);
    the powers of R are shared across k.
    """
    if k < 0 or order < 0:
        raise DomainError("moment_series needs k >= 0, order >= 0")
    if order == 0:
        q = Rational((-2) ** k, math.factorial(k))
        return MuSeries([PiPoly.term(q, k)], order=0)
    pows = _r_pows(order)
    out = MuSeries.zero(order)
    for m in range(order + 1):
        q = Rational((-2) ** (m + k),
                     math.factorial(m) * math.factorial(m + k))
        out = out + pows[m] * PiPoly.term(q, m + k)
    return out


def t_volume_series(g: int, n: int, order: int, cache=None) -> MuSeries:
    """Exact MuSeries of T_{g,n}(0, mu) = M_0^-(2g-2+n) P_{g,n}(0, M)."""
    from tightwp import tightpoly  # local import, breaks the module cycle

    cell = tightpoly.p_gn(g, n, cache=cache)
    d = cell.d
    m0inv = moment_series(0, order).inverse()
    ratios = [None] * (d + 1)  # ratios[k] = M_k / M_0 as a series
    pow_memo: dict = {}

    def ratio_pow(k: int, e: int) -> MuSeries:
        key = (k, e)
        got = pow_memo.get(key)
        if got is None:
            if ratios[k] is None:
                ratios[k] = moment_series(k, order) * m0inv
            got = ratios[k] ** e if e != 1 else ratios[k]
            pow_memo[key] = got
        return got

    total = MuSeries.zero(order)
    n_ell = cell.poly.n_ell
    for key, q in cell.poly.terms.items():
        if any(key[:n_ell]):
            continue  # only the L = 0 part contributes
        acc = MuSeries([PiPoly.const(q)], order=order)
        for k_idx, e in enumerate(key[n_ell:]):
            if e:
                acc = acc * ratio_pow(k_idx + 1, e)
        total = total + acc
    return total * m0inv ** (2 * g - 2 + n)


def volume_extract(g: int, n: int, pmax: int, cache=None) -> list:
    """Exact V_{g,n+p}(0) for p = 0..pmax, each a PiPoly.

    Expands T_{g,n}(0, mu) as a MuSeries and reads off p! [mu^p]; the
    identity T_{g,n,p}(L, 0^p) at L = 0 with V_{g,n+p}(0) makes the
    coefficients classical Weil-Petersson volumes.
    """
    if pmax < 0:
        raise DomainError("pmax must be >= 0")
    series = t_volume_series(g, n, pmax, cache=cache)
    if series.order < pmax:
        raise DomainError("truncation order insufficient for pmax")
    out = []
    for p in range(pmax + 1):
        out.append(series.coeff(p) * Rational(math.factorial(p)))
    return out
