"""Boltzmann cusp statistics over the tight volume generating functions.

Everything here is a ratio or sum of quantities like T_{g,n}(L, mu) =
M_0^-(2g-2+n) P_{g,n}(L, M) that blow up polynomially-in-1/M_0 near the
critical fugacity; the LogValue wrapper keeps signs and natural-log
magnitudes so ratios of astronomically large numbers stay representable
at the API boundary.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import mpmath
from mpmath import mp

from tightwp.errors import (CancellationWarning, DomainError, TailMassError)
from tightwp.moments import cached_frame, mu_critical
from tightwp.ring import DEFAULT_PREC, to_mpf
from tightwp.tightpoly import admissible, p_gn

_LOG_CANCEL_RATIO = 1e6  # flag when |sum of |terms|| / |result| exceeds this


@dataclass(frozen=True)
class LogValue:
    """Sign plus natural-log magnitude; sign == 0 iff the value is zero."""

    sign: int
    log_magnitude: object

    @classmethod
    def zero(cls) -> "LogValue":
        return cls(0, mpmath.mpf("-inf"))

    @classmethod
    def from_number(cls, x, prec: int = DEFAULT_PREC) -> "LogValue":
        with mp.workprec(prec):
            x = mpmath.mpf(x)
            if x == 0:
                return cls(0, mpmath.mpf("-inf"))
            return cls(1 if x > 0 else -1, mpmath.log(abs(x)))

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    @staticmethod
    def _work():
        """Internal ops never drop below the package default precision."""
        return mp.workprec(max(mp.prec, DEFAULT_PREC) + 16)

    def __mul__(self, other: "LogValue") -> "LogValue":
        if self.sign == 0 or other.sign == 0:
            return LogValue.zero()
        with self._work():
            return LogValue(self.sign * other.sign,
                            +(self.log_magnitude + other.log_magnitude))

    def __truediv__(self, other: "LogValue") -> "LogValue":
        if other.sign == 0:
            raise ZeroDivisionError("LogValue division by zero")
        if self.sign == 0:
            return LogValue.zero()
        with self._work():
            return LogValue(self.sign * other.sign,
                            +(self.log_magnitude - other.log_magnitude))

    def __neg__(self) -> "LogValue":
        return LogValue(-self.sign, self.log_magnitude)

    def __add__(self, other: "LogValue") -> "LogValue":
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        big, small = self, other
        if other.log_magnitude > self.log_magnitude:
            big, small = other, self
        with self._work():
            diff = small.log_magnitude - big.log_magnitude  # <= 0
            if big.sign == small.sign:
                return LogValue(
                    big.sign,
                    +(big.log_magnitude + mpmath.log1p(mpmath.exp(diff))))
            rest = 1 - mpmath.exp(diff)
            if rest <= 0:
                return LogValue.zero()
            return LogValue(big.sign,
                            +(big.log_magnitude + mpmath.log(rest)))

    def to_mpf(self, prec: int = DEFAULT_PREC):
        with mp.workprec(prec):
            if self.sign == 0:
                return mpmath.mpf(0)
            return self.sign * mpmath.exp(self.log_magnitude)

    def to_float(self) -> float:
        """Plain float with an overflow guard."""
        if self.sign == 0:
            return 0.0
        log_mag = float(self.log_magnitude)
        if log_mag > 700:
            raise OverflowError(
                f"LogValue magnitude exp({log_mag:.1f}) exceeds float range")
        return self.sign * math.exp(log_mag)

    def __repr__(self):
        return f"LogValue(sign={self.sign}, log={self.log_magnitude})"


def t_volume(g: int, n: int, L: Sequence, mu,
             prec: int = DEFAULT_PREC, cache=None) -> LogValue:
    """T_{g,n}(L, mu) = M_0^-(2g-2+n) P_{g,n}(L, M) as a LogValue.

    Warns (CancellationWarning) when the polynomial evaluation loses more
    than ~1e6 ulps of relative magnitude to cancellation.
    """
    if not admissible(g, n):
        raise DomainError(f"inadmissible (g,n) = ({g},{n})")
    if len(L) != n:
        raise DomainError(f"need {n} boundary lengths, got {len(L)}")
    cell = p_gn(g, n, cache=cache)
    frame = cached_frame(mu, cell.d, prec)
    with mp.workprec(prec):
        ells = [mpmath.mpf(x) ** 2 for x in L]
        if any(e < 0 for e in ells):
            raise DomainError("boundary lengths must be >= 0")
        value, abs_sum, _ = cell.poly.eval_full(
            ells, frame.m_ratios()[:cell.d], prec)
        if value != 0 and abs_sum > _LOG_CANCEL_RATIO * abs(value):
            warnings.warn(
                f"T_({g},{n}) evaluation lost {mpmath.nstr(abs_sum / abs(value), 3)}x "
                "to cancellation", CancellationWarning, stacklevel=2)
        if value == 0:
            return LogValue.zero()
        sign = 1 if value > 0 else -1
        log_mag = mpmath.log(abs(value)) \
            - (2 * g - 2 + n) * mpmath.log(frame.moments[0])
        return LogValue(sign, +log_mag)


def factorial_moment(g: int, r: int, mu,
                     prec: int = DEFAULT_PREC, cache=None) -> LogValue:
    """E[(N)_(r+1)] = mu^(r+1) T_{g,r+1}(mu) / T_g(mu), for g >= 2."""
    if g < 2:
        raise DomainError("cusp statistics need g >= 2 (T_{g,0} exists)")
    if r < 0:
        raise DomainError("factorial moment order must be >= 0")
    with mp.workprec(prec):
        mu = mpmath.mpf(mu)
        if mu == 0:
            return LogValue.zero()
        num = t_volume(g, r + 1, [0] * (r + 1), mu, prec, cache)
        den = t_volume(g, 0, [], mu, prec, cache)
        mu_pow = LogValue(1, (r + 1) * mpmath.log(mu))
        return mu_pow * num / den


def mean_cusps(g: int, mu, prec: int = DEFAULT_PREC, cache=None):
    """E[N] as an mpf."""
    return factorial_moment(g, 0, mu, prec, cache).to_mpf(prec)


@dataclass(frozen=True)
class CuspPmf:
    """Truncated cusp-count distribution.

    probs are renormalized over 0..pmax; raw_mass is the untruncated-model
    mass sum_p mu^p V_{g,p} / (p! T_g) actually captured (must sit within
    1e-12 of 1); tail_bound is the certified geometric bound on what the
    truncation dropped, relative to the captured mass.
    """

    probs: tuple
    raw_mass: float
    tail_bound: float

    def __len__(self):
        return len(self.probs)

    def __iter__(self):
        return iter(self.probs)

    def __getitem__(self, i):
        return self.probs[i]

    def mean(self) -> float:
        return sum(p * w for p, w in enumerate(self.probs))

    def factorial_moment(self, k: int) -> float:
        """sum_p p(p-1)...(p-k+1) pmf(p)."""
        total = 0.0
        for p, w in enumerate(self.probs):
            if p >= k:
                total += math.perm(p, k) * w
        return total


def cusp_pmf(g: int, mu, pmax: int | None = None,
             prec: int = DEFAULT_PREC, cache=None,
             tail_tol: float = 1e-12) -> CuspPmf:
    """P(N = p) for p = 0..pmax under the mu-Boltzmann measure.

    Weights mu^p V_{g,p}(0)/p! come from the exact volume extraction;
    pmax defaults to ceil(4 E[N]) + 40.  The dropped tail is certified
    with a geometric ratio test and must stay below tail_tol relative
    mass, otherwise TailMassError asks for a larger pmax.
    """
    from tightwp.moments import volume_extract

    if g < 2:
        raise DomainError("cusp statistics need g >= 2")
    with mp.workprec(prec):
        mu = mpmath.mpf(mu)
        if not 0 < mu < mu_critical(prec):
            raise DomainError("cusp_pmf needs 0 < mu < mu_c")
        if pmax is None:
            pmax = int(mpmath.ceil(4 * mean_cusps(g, mu, prec, cache))) + 40
        if pmax < 4:
            raise TailMassError("pmax must be at least 4 to certify "
                                "the dropped tail")
        vols = volume_extract(g, 0, pmax, cache=cache)
        weights = []
        for p, v in enumerate(vols):
            w = v.eval(prec) * mu ** p / mpmath.factorial(p)
            weights.append(w)
        total = mpmath.fsum(weights)
        # geometric certification of the dropped tail
        ratios = [weights[i + 1] / weights[i]
                  for i in range(pmax - 3, pmax)]
        rho = max(ratios)
        if rho >= 1:
            raise TailMassError(
                f"tail ratios not contracting at pmax={pmax}; increase pmax")
        tail = weights[-1] * rho / (1 - rho)
        if tail > mpmath.mpf(tail_tol) * total:
            raise TailMassError(
                f"certified tail mass {mpmath.nstr(tail / total, 5)} exceeds "
                f"{tail_tol}; increase pmax beyond {pmax}")
        t_g = t_volume(g, 0, [], mu, prec, cache)
        raw_mass = float(mpmath.exp(mpmath.log(total) - t_g.log_magnitude))
        probs = tuple(float(w / total) for w in weights)
        return CuspPmf(probs=probs, raw_mass=raw_mass,
                       tail_bound=float(tail / total))


@dataclass(frozen=True)
class MuSolveResult:
    mu: object
    seed: object  # the first-order seed mu_c (1 - 5g / (2 n_target))
    mean: object


def solve_mu_for_target(g: int, n_target, prec: int = DEFAULT_PREC,
                        cache=None, rel_tol: float = 1e-8) -> MuSolveResult:
    """The mu with E[N_{g,mu}] = n_target, by bisection on [0, mu_c).

    Also reports the first-order seed mu_c (1 - 5g/(2 n_target)), which
    the asymptotic mean formula suggests.
    """
    if g < 2:
        raise DomainError("cusp statistics need g >= 2")
    if not n_target > 0:
        raise DomainError("target mean must be positive")
    with mp.workprec(prec):
        n_target = mpmath.mpf(n_target)
        muc = mu_critical(prec)
        seed = muc * (1 - mpmath.mpf(5 * g) / (2 * n_target))
        lo = mpmath.mpf(0)
        hi = muc * (1 - mpmath.mpf(2) ** (-min(prec - 10, 200)))
        if mean_cusps(g, hi, prec, cache) < n_target:
            raise DomainError(
                f"target {n_target} unreachable below mu_c at this precision")
        for _ in range(prec + 10):
            mid = (lo + hi) / 2
            if mean_cusps(g, mid, prec, cache) < n_target:
                lo = mid
            else:
                hi = mid
            if hi - lo <= rel_tol * hi / 16:
                break
        mu = (lo + hi) / 2
        return MuSolveResult(mu=+mu, seed=+seed,
                             mean=mean_cusps(g, mu, prec, cache))


def concentration_ratio(g: int, mu, prec: int = DEFAULT_PREC, cache=None):
    """Var(N) / E[N]^2 from the first two factorial moments."""
    with mp.workprec(prec):
        m1 = factorial_moment(g, 0, mu, prec, cache).to_mpf(prec)
        m2 = factorial_moment(g, 1, mu, prec, cache).to_mpf(prec)
        if m1 == 0:
            raise DomainError("mean is zero at mu=0; ratio undefined")
        return +((m2 + m1 - m1 * m1) / (m1 * m1))


def boundary_ratio(g: int, n: int, L: Sequence, mu,
                   prec: int = DEFAULT_PREC, cache=None):
    """(T_{g,n}(sqrt(-M_1/(3 M_0)) L, mu) / T_{g,n}(0, mu),
        prod sinh(L_i)/L_i) for the boundary-profile comparison."""
    if not admissible(g, n):
        raise DomainError(f"inadmissible (g,n) = ({g},{n})")
    cell = p_gn(g, n, cache=cache)
    frame = cached_frame(mu, cell.d, prec)
    with mp.workprec(prec):
        scale = mpmath.sqrt(-frame.moments[1] / (3 * frame.moments[0]))
        scaled = [mpmath.mpf(x) * scale for x in L]
        num = t_volume(g, n, scaled, mu, prec, cache)
        den = t_volume(g, n, [0] * n, mu, prec, cache)
        ratio = (num / den).to_mpf(prec)
        target = mpmath.mpf(1)
        for x in L:
            x = mpmath.mpf(x)
            if x != 0:
                target *= mpmath.sinh(x) / x
        return +ratio, +target


def separating_decompositions(g: int, r: int, q: int):
    """Ordered sequences (g_1,n_1),..,(g_q,n_q) with n_i >= 1,
    2 g_i + n_i >= 3, sum n_i = 2r and sum g_i = g + q - r - 1.

    Every component of a cut surface borders at least one curve, hence
    n_i >= 1; the genus budget is the Euler-characteristic bookkeeping
    sum (2 g_i - 2 + n_i) = 2g - 2.
    """
    if r <= 0:
        raise DomainError("separating sums need r > 0")
    if not 1 < q <= r + 1:
        raise DomainError("separating sums need 1 < q <= r + 1")
    g_total = g + q - r - 1

    def compositions(total, parts, minimum):
        if parts == 1:
            if total >= minimum:
                yield (total,)
            return
        for first in range(minimum, total + 1):
            for rest in compositions(total - first, parts - 1, minimum):
                yield (first,) + rest

    out = []
    for nvec in compositions(2 * r, q, 1):
        mins = [1 if n_i <= 2 else 0 for n_i in nvec]

        def gcomps(total, i):
            if i == q - 1:
                if total >= mins[i]:
                    yield (total,)
                return
            for first in range(mins[i], total + 1):
                for rest in gcomps(total - first, i + 1):
                    yield (first,) + rest

        if g_total < sum(mins):
            continue
        for gvec in gcomps(g_total, 0):
            out.append(tuple(zip(gvec, nvec)))
    return out


def separating_sum(g: int, r: int, q: int, mu,
                   prec: int = DEFAULT_PREC, cache=None) -> LogValue:
    """(M_0^r T_g(mu))^-1 sum over decompositions of prod T_{g_i,n_i}(mu).

    The diagnostic upper-bound sum for separating multicurves with r
    curves whose complement has q components.
    """
    decomps = separating_decompositions(g, r, q)
    if not decomps:
        return LogValue.zero()
    frame = cached_frame(mu, 1, prec)
    total = LogValue.zero()
    for seq in sorted(decomps):
        term = None
        for g_i, n_i in seq:
            f = t_volume(g_i, n_i, [0] * n_i, mu, prec, cache)
            term = f if term is None else term * f
        total = total + term
    t_g = t_volume(g, 0, [], mu, prec, cache)
    with mp.workprec(prec):
        m0_pow = LogValue(1, r * mpmath.log(frame.moments[0]))
        return total / (m0_pow * t_g)
