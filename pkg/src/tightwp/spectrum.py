"""Tight length-spectrum limit layer.

The limiting Poisson intensity lambda_{a,b} = int_a^b (cosh t - 1)/t dt,
the systole tail law, the length normalization map, exact finite-(g, mu)
expected counts of non-separating tight multicurves via the tight
integration formula (the integrand is polynomial, so every window
integral is an exact antiderivative evaluation), a convergence-table
driver for the headline limit, and seeded Monte Carlo samplers for
comparison runs.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass
from typing import Sequence

import mpmath
from mpmath import mp

from tightwp.errors import DomainError
from tightwp.moments import alpha1, cached_frame, mu_critical
from tightwp.ring import DEFAULT_PREC, to_mpf
from tightwp.tightpoly import admissible, p_gn


def _rng(seed: int) -> random.Random:
    """Deterministic generator for a seed.

    The seed is hashed first: raw sequential integers fed to the
    Mersenne-Twister init leave visible correlations across the first
    draws of neighbouring streams, which biases one-draw-per-seed
    Monte Carlo (batches of ~10^4 consecutive seeds drift by several
    sigma).  Hashing decorrelates the streams and keeps the contract
    that one seed always yields one fixed sample.
    """
    digest = hashlib.sha256(str(int(seed)).encode()).digest()
    return random.Random(int.from_bytes(digest[:16], "big"))


def intensity(a, b, prec: int = DEFAULT_PREC):
    """lambda_{a,b} = sum_{k>=1} (b^2k - a^2k) / (2k (2k)!).

    Term-wise integration of (cosh t - 1)/t; summed until the terms fall
    below the working precision.
    """
    with mp.workprec(prec + 16):
        a = mpmath.mpf(a)
        b = mpmath.mpf(b)
        if a < 0 or a > b:
            raise DomainError(f"need 0 <= a <= b, got ({a}, {b})")
        if a == b:
            return mpmath.mpf(0)
        total = mpmath.mpf(0)
        pa, pb = mpmath.mpf(1), mpmath.mpf(1)
        fact = mpmath.mpf(1)
        cutoff = mpmath.mpf(2) ** (-(prec + 8))
        k = 0
        while True:
            k += 1
            pa *= a * a
            pb *= b * b
            fact *= (2 * k - 1) * (2 * k)
            term = (pb - pa) / (2 * k * fact)
            total += term
            if term <= cutoff * (total + cutoff):
                break
        return +total


def _intensity_f(t: float) -> float:
    """Fast float-only lambda_{0,t} for the sampler inner loops."""
    total = 0.0
    p = 1.0
    fact = 1.0
    k = 0
    while True:
        k += 1
        p *= t * t
        fact *= (2 * k - 1) * (2 * k)
        term = p / (2 * k * fact)
        total += term
        if term < 1e-18 * total + 5e-324:
            return total


def systole_tail(t, prec: int = DEFAULT_PREC):
    """P(X >= t) = exp(-lambda_{0,t}) for the limiting systole law."""
    with mp.workprec(prec):
        t = mpmath.mpf(t)
        if t < 0:
            raise DomainError("systole tail needs t >= 0")
        return +mpmath.exp(-intensity(0, t, prec))


def normalization(mu, prec: int = DEFAULT_PREC):
    """(c(mu), alpha_1^-1 (mu_c - mu)^(-1/4)) with c = sqrt(-M_1/(12 M_0)).

    Both normalize tight lengths; their ratio tends to 1 at criticality.
    """
    frame = cached_frame(mu, 1, prec)
    with mp.workprec(prec):
        c = mpmath.sqrt(-frame.moments[1] / (12 * frame.moments[0]))
        gap = mu_critical(prec) - mpmath.mpf(mu)
        alt = gap ** mpmath.mpf("-0.25") / alpha1(prec)
        return +c, +alt


@dataclass(frozen=True)
class IntervalSet:
    """Disjoint ordered length windows [a_i, b_i] with multiplicities."""

    intervals: tuple
    multiplicities: tuple

    @classmethod
    def make(cls, intervals, multiplicities=None) -> "IntervalSet":
        ivs = tuple((float(a), float(b)) for a, b in intervals)
        if multiplicities is None:
            multiplicities = (1,) * len(ivs)
        mults = tuple(int(r) for r in multiplicities)
        if len(mults) != len(ivs):
            raise DomainError("one multiplicity per interval required")
        if not ivs:
            raise DomainError("need at least one interval")
        if any(r < 1 for r in mults):
            raise DomainError("multiplicities must be >= 1")
        prev_b = None
        for a, b in ivs:
            # degenerate a == b is tolerated (zero-width windows count 0)
            if a < 0 or a > b:
                raise DomainError(f"bad interval ({a}, {b})")
            if prev_b is not None and not prev_b < a:
                raise DomainError("intervals must be disjoint and ordered")
            prev_b = b
        return cls(intervals=ivs, multiplicities=mults)

    @classmethod
    def parse(cls, text: str) -> "IntervalSet":
        """Parse 'a1:b1:r1,a2:b2:r2,...' (r defaults to 1)."""
        ivs, mults = [], []
        for chunk in text.split(","):
            parts = chunk.split(":")
            if len(parts) == 2:
                a, b = parts
                r = 1
            elif len(parts) == 3:
                a, b, r = parts
            else:
                raise DomainError(f"cannot parse window {chunk!r}")
            ivs.append((float(a), float(b)))
            mults.append(int(r))
        return cls.make(ivs, mults)

    @property
    def total_order(self) -> int:
        return sum(self.multiplicities)

    def expanded(self):
        """One (a, b) per integration variable, repeated by multiplicity."""
        out = []
        for (a, b), r in zip(self.intervals, self.multiplicities):
            out += [(a, b)] * r
        return out

    def lambda_targets(self, prec: int = DEFAULT_PREC):
        """lambda_{a_i,b_i} per window."""
        return tuple(intensity(a, b, prec) for a, b in self.intervals)

    def lambda_product(self, prec: int = DEFAULT_PREC):
        """prod lambda_{a_i,b_i}^{r_i}, the limiting expected count."""
        with mp.workprec(prec):
            total = mpmath.mpf(1)
            for lam, r in zip(self.lambda_targets(prec),
                              self.multiplicities):
                total *= lam ** r
            return +total


@dataclass(frozen=True)
class PointSample:
    """A realization of a point process: sorted positive points."""

    points: tuple

    def count_in(self, a: float, b: float) -> int:
        return sum(1 for t in self.points if a <= t <= b)

    def __len__(self):
        return len(self.points)


def expected_nonseparating_count(g: int, mu, windows: IntervalSet,
                                 prec: int = DEFAULT_PREC, cache=None):
    """Expected number of non-separating tight multicurve hits.

    T_g(mu)^-1 2^-r int over the c(mu)-scaled windows of
    T_{g-r,2r}(x_1, x_1, ..., x_r, x_r, mu) x_1...x_r dx, where each cut
    curve contributes two equal boundary entries and c(mu) is the first
    output of ``normalization``.  The integrand is polynomial in the
    x_i^2, so each monomial integrates in closed form.
    """
    r = windows.total_order
    if g - r < 0 or not admissible(g - r, 2 * r):
        raise DomainError(
            f"cut topology (g-r, 2r) = ({g - r},{2 * r}) inadmissible")
    with mp.workprec(prec):
        mu = mpmath.mpf(mu)
        if not 0 < mu < mu_critical(prec):
            raise DomainError("expected counts need 0 < mu < mu_c")
        cell = p_gn(g - r, 2 * r, cache=cache)
        base = p_gn(g, 0, cache=cache)
        frame = cached_frame(mu, max(cell.d, base.d), prec)
        m_vals = frame.m_ratios()
        c = mpmath.sqrt(-frame.moments[1] / (12 * frame.moments[0]))
        bounds = [(c * mpmath.mpf(a), c * mpmath.mpf(b))
                  for a, b in windows.expanded()]

        # window-power table: w_table[i][Q] = int_{ca}^{cb} x^(2Q+1) dx
        max_q = max((sum(key[:2 * r]) for key in cell.poly.terms),
                    default=0)
        w_table = []
        for lo, hi in bounds:
            col = []
            for qq in range(max_q + 1):
                t = 2 * qq + 2
                col.append((hi ** t - lo ** t) / t)
            w_table.append(col)

        m_pows: dict = {}

        def m_pow(k, e):
            got = m_pows.get((k, e))
            if got is None:
                got = m_vals[k] ** e
                m_pows[(k, e)] = got
            return got

        total = mpmath.mpf(0)
        n_ell = 2 * r
        for key, q in cell.poly.terms.items():
            t = to_mpf(q, prec)
            for k_idx, e in enumerate(key[n_ell:]):
                if e:
                    t *= m_pow(k_idx, e)
            for i in range(r):
                qq = key[2 * i] + key[2 * i + 1]
                t *= w_table[i][qq]
            total += t
        p_g_val = base.poly.eval([], m_vals[:base.d], prec)
        return +(total / p_g_val / mpmath.mpf(2) ** r)


def mp_convergence_table(g_range: Sequence[int], beta: float,
                         windows: IntervalSet,
                         prec: int = DEFAULT_PREC, cache=None,
                         allow_small_beta: bool = False):
    """Rows (g, mu_g, expected count, lambda target, ratio) with
    mu_g = mu_c - g^(-beta).

    The limit regime needs mu_c - mu_g = o(g^-2), hence the beta > 2
    gate; pass allow_small_beta=True to explore outside it anyway.
    """
    if beta <= 2 and not allow_small_beta:
        raise DomainError(
            f"beta={beta} rejected: the limit law needs mu_c - mu_g "
            "= o(g^-2), i.e. beta > 2 (use the override to explore)")
    with mp.workprec(prec):
        muc = mu_critical(prec)
        target = windows.lambda_product(prec)
        rows = []
        for g in g_range:
            mu_g = muc - mpmath.mpf(g) ** mpmath.mpf(-beta)
            if mu_g <= 0:
                raise DomainError(
                    f"mu_c - {g}^(-{beta}) is not positive; start the "
                    "genus range higher")
            count = expected_nonseparating_count(g, mu_g, windows, prec,
                                                 cache)
            rows.append({
                "g": g,
                "mu": +mu_g,
                "expected_count": +count,
                "lambda_target": +target,
                "ratio": +(count / target),
            })
        return rows


# -- seeded samplers ----------------------------------------------------------


def _poisson_draw(rng: random.Random, lam: float) -> int:
    """Inverse-CDF Poisson draw (lam modest in all uses)."""
    u = rng.random()
    k = 0
    p = math.exp(-lam)
    cdf = p
    while u > cdf:
        k += 1
        p *= lam / k
        cdf += p
        if k > 10_000_000:  # pragma: no cover - unreachable for sane lam
            raise DomainError("Poisson draw ran away; lambda too large")
    return k


def sample_poisson_process(t_max: float, seed: int) -> PointSample:
    """One realization of the limiting process on [0, t_max].

    Draws N ~ Poisson(lambda_{0,t_max}), then N i.i.d. points with
    density (cosh t - 1)/t / lambda_{0,t_max} by inverse-CDF bisection.
    Deterministic for a fixed seed.
    """
    if not t_max > 0:
        raise DomainError("t_max must be positive")
    rng = _rng(seed)
    lam = _intensity_f(float(t_max))
    n = _poisson_draw(rng, lam)
    pts = []
    for _ in range(n):
        u = rng.random() * lam
        lo, hi = 0.0, float(t_max)
        for _ in range(60):
            mid = (lo + hi) / 2
            if _intensity_f(mid) < u:
                lo = mid
            else:
                hi = mid
        pts.append((lo + hi) / 2)
    return PointSample(points=tuple(sorted(pts)))


_pmf_cache: dict = {}


def _cached_pmf(g: int, mu, prec: int, cache):
    from tightwp.boltzmann import cusp_pmf

    with mp.workprec(prec):
        key = (g, mpmath.nstr(mpmath.mpf(mu), 40), prec)
    pmf = _pmf_cache.get(key)
    if pmf is None:
        pmf = cusp_pmf(g, mu, prec=prec, cache=cache)
        _pmf_cache[key] = pmf
    return pmf


def sample_cusp_count(g: int, mu, seed: int,
                      prec: int = DEFAULT_PREC, cache=None) -> int:
    """Inverse-CDF draw of the cusp count; deterministic per seed."""
    pmf = _cached_pmf(g, mu, prec, cache)
    u = _rng(seed).random()
    cdf = 0.0
    for p, w in enumerate(pmf.probs):
        cdf += w
        if u <= cdf:
            return p
    return len(pmf.probs) - 1
