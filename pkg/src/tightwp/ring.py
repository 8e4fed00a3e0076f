"""Exact arithmetic tower.

Four layers, each immutable after construction and safe to share across
threads:

* ``Rational``     -- arbitrary-precision fractions (gmpy2.mpq, with a
                      ``fractions.Fraction`` fallback).  Always stored in
                      lowest terms with positive denominator.
* ``PiPoly``       -- polynomials in pi^2 with Rational coefficients.
* ``MuSeries``     -- truncated power series in mu with PiPoly coefficients.
* ``TightPoly``    -- sparse multivariate polynomials in the squared
                      boundary lengths ell_i = L_i^2 and the moment
                      variables m_1..m_D, with Rational coefficients.

Floats only ever appear at the final evaluation step, through mpmath at a
configurable binary precision (default 113 bits).  Quantities near the
critical fugacity span hundreds of orders of magnitude; mpmath's unbounded
exponent makes plain evaluation safe, and the log-domain wrapper for ratio
work lives in :mod:`tightwp.boltzmann`.
"""

from __future__ import annotations

import warnings
from typing import Iterable, Mapping, Sequence

import mpmath
from mpmath import mp

from tightwp import kernels
from tightwp.errors import CancellationWarning, DomainError, ShapeError

try:
    from gmpy2 import mpq as Rational
except ImportError:  # pragma: no cover - gmpy2 is a hard dependency
    from fractions import Fraction as Rational

DEFAULT_PREC = 113
CANCEL_THRESHOLD = 1e-6

_R0 = Rational(0)
_R1 = Rational(1)


def rational(num, den=1) -> Rational:
    """Build a Rational; accepts ints or 'num/den' strings."""
    if isinstance(num, str):
        return Rational(num)
    return Rational(num, den)


def rat_to_str(q) -> str:
    """Canonical 'num/den' form, denominator always explicit."""
    return f"{q.numerator}/{q.denominator}"


def rat_from_str(s: str) -> Rational:
    return Rational(s)


def to_mpf(q, prec: int = DEFAULT_PREC):
    """Convert a Rational (or int) to an mpf at the given precision."""
    with mp.workprec(prec):
        if isinstance(q, int):
            return mpmath.mpf(q)
        return mpmath.mpf(int(q.numerator)) / mpmath.mpf(int(q.denominator))


def pi_squared(prec: int = DEFAULT_PREC):
    """pi^2 at the given binary precision (deterministic per precision)."""
    with mp.workprec(prec):
        return mp.pi ** 2


class PiPoly:
    """Polynomial in pi^2: map from non-negative exponent to Rational.

    Zero coefficients are never stored.  Instances are immutable; all
    arithmetic returns fresh objects.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, object] | Iterable | None = None):
        c = {}
        if coeffs:
            items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
            for e, q in items:
                if e < 0:
                    raise DomainError(f"negative pi^2 exponent {e}")
                q = q if isinstance(q, Rational) else Rational(q)
                if q:
                    c[int(e)] = c.get(int(e), _R0) + q
        self._c = {e: q for e, q in c.items() if q}

    @classmethod
    def _raw(cls, c: dict) -> "PiPoly":
        p = object.__new__(cls)
        p._c = c
        return p

    @classmethod
    def zero(cls) -> "PiPoly":
        return cls._raw({})

    @classmethod
    def const(cls, q) -> "PiPoly":
        q = q if isinstance(q, Rational) else Rational(q)
        return cls._raw({0: q} if q else {})

    @classmethod
    def term(cls, coeff, exp: int) -> "PiPoly":
        coeff = coeff if isinstance(coeff, Rational) else Rational(coeff)
        if exp < 0:
            raise DomainError(f"negative pi^2 exponent {exp}")
        return cls._raw({exp: coeff} if coeff else {})

    @property
    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    @property
    def degree(self) -> int:
        """Degree in pi^2; -1 for the zero polynomial."""
        return max(self._c) if self._c else -1

    def coeff(self, e: int) -> Rational:
        return self._c.get(e, _R0)

    def items(self):
        return sorted(self._c.items())

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return PiPoly._raw(kernels.add_dicts(self._c, other._c))

    __radd__ = __add__

    def __neg__(self):
        return PiPoly._raw({e: -q for e, q in self._c.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, PiPoly):
            return PiPoly._raw(kernels.conv_dicts(self._c, other._c))
        if isinstance(other, (int, Rational)):
            return PiPoly._raw(kernels.scale_dict(self._c, Rational(other)))
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise DomainError("negative PiPoly power")
        out = PiPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    @staticmethod
    def _coerce(other):
        if isinstance(other, PiPoly):
            return other
        if isinstance(other, (int, Rational)):
            return PiPoly.const(other)
        return NotImplemented

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def eval(self, prec: int = DEFAULT_PREC):
        """Numeric value at pi^2, deterministic for a fixed precision."""
        with mp.workprec(prec):
            p2 = pi_squared(prec)
            total = mpmath.mpf(0)
            for e, q in sorted(self._c.items()):
                total += to_mpf(q, prec) * p2 ** e
            return total

    def to_obj(self):
        """Canonical serialization: [[exponent, 'num/den'], ...]."""
        return [[e, rat_to_str(q)] for e, q in self.items()]

    @classmethod
    def from_obj(cls, obj) -> "PiPoly":
        return cls((int(e), rat_from_str(s)) for e, s in obj)

    def __repr__(self):
        if not self._c:
            return "PiPoly(0)"
        parts = [f"({rat_to_str(q)})*pi2^{e}" for e, q in self.items()]
        return "PiPoly(" + " + ".join(parts) + ")"


_PP0 = PiPoly.zero()
_PP1 = PiPoly.const(1)


class MuSeries:
    """Truncated power series in mu over PiPoly coefficients.

    The coefficient of mu^j sits at index j.  Binary operations first
    truncate to the smaller order; composition requires the inner series
    to have zero constant term.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Sequence, order: int | None = None):
        c = [x if isinstance(x, PiPoly) else PiPoly.const(x) for x in coeffs]
        if order is not None:
            if order < 0:
                raise DomainError("negative series order")
            c = c[: order + 1]
            c += [_PP0] * (order + 1 - len(c))
        if not c:
            c = [_PP0]
        self._c = tuple(c)

    @property
    def order(self) -> int:
        return len(self._c) - 1

    def coeff(self, j: int) -> PiPoly:
        if j < 0 or j > self.order:
            raise DomainError(f"coefficient index {j} out of range")
        return self._c[j]

    def coeffs(self):
        return self._c

    @classmethod
    def zero(cls, order: int) -> "MuSeries":
        return cls([], order=order)

    @classmethod
    def identity(cls, order: int) -> "MuSeries":
        """The series mu itself."""
        if order < 1:
            raise DomainError("identity needs order >= 1")
        return cls([_PP0, _PP1], order=order)

    def truncate(self, order: int) -> "MuSeries":
        return MuSeries(self._c, order=order)

    def _common(self, other: "MuSeries") -> int:
        return min(self.order, other.order)

    def __add__(self, other):
        if not isinstance(other, MuSeries):
            return NotImplemented
        p = self._common(other)
        return MuSeries([self._c[j] + other._c[j] for j in range(p + 1)])

    def __sub__(self, other):
        if not isinstance(other, MuSeries):
            return NotImplemented
        p = self._common(other)
        return MuSeries([self._c[j] - other._c[j] for j in range(p + 1)])

    def __neg__(self):
        return MuSeries([-x for x in self._c])

    def __mul__(self, other):
        if isinstance(other, (int, Rational, PiPoly)):
            return MuSeries([x * other for x in self._c])
        if not isinstance(other, MuSeries):
            return NotImplemented
        p = self._common(other)
        out = [_PP0] * (p + 1)
        for i in range(p + 1):
            a = self._c[i]
            if a.is_zero:
                continue
            for j in range(p + 1 - i):
                b = other._c[j]
                if not b.is_zero:
                    out[i + j] = out[i + j] + a * b
        return MuSeries(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise DomainError("negative series power")
        out = MuSeries([_PP1], order=self.order)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, MuSeries):
            return NotImplemented
        return self._c == other._c

    __hash__ = None

    def compose(self, inner: "MuSeries") -> "MuSeries":
        """self o inner, truncated to min(orders); inner(0) must vanish."""
        if not inner.coeff(0).is_zero:
            raise DomainError("composition requires zero inner constant term")
        p = self._common(inner)
        inner = inner.truncate(p)
        out = MuSeries([self._c[p]], order=p)
        for j in range(p - 1, -1, -1):
            out = out * inner + MuSeries([self._c[j]], order=p)
        return out

    def inverse(self) -> "MuSeries":
        """Multiplicative inverse; the constant term must be a nonzero
        rational (pi^2-degree zero)."""
        c0 = self._c[0]
        if c0.is_zero or c0.degree > 0:
            raise DomainError("series inverse needs a nonzero rational "
                              "constant term")
        inv0 = PiPoly.const(_R1 / c0.coeff(0))
        p = self.order
        out = [inv0] + [_PP0] * p
        for s in range(1, p + 1):
            acc = _PP0
            for t in range(1, s + 1):
                a = self._c[t]
                if not a.is_zero:
                    acc = acc + a * out[s - t]
            out[s] = -(inv0 * acc)
        return MuSeries(out)

    def eval(self, mu_value, prec: int = DEFAULT_PREC):
        """Horner evaluation at a numeric mu."""
        with mp.workprec(prec):
            x = mpmath.mpf(mu_value)
            total = mpmath.mpf(0)
            for j in range(self.order, -1, -1):
                total = total * x + self._c[j].eval(prec)
            return total

    def __repr__(self):
        return f"MuSeries(order={self.order}, coeffs={list(self._c)!r})"


def z_r_coefficient(m: int) -> PiPoly:
    """Coefficient of r^(m+1) in Z(r, mu) + mu:  (-2 pi^2)^m / (m! (m+1)!)."""
    import math

    q = Rational((-2) ** m, math.factorial(m) * math.factorial(m + 1))
    return PiPoly.term(q, m)


def series_invert_z(order: int) -> MuSeries:
    """The series R(mu) solving Z(R(mu), mu) = 0 with R(0) = 0.

    Formal inversion of mu = sum_{m>=0} (-2 pi^2)^m r^(m+1) / (m!(m+1)!).
    The series is pi^2-graded ([mu^j] R is a rational times pi^(2j-2)), so
    the inversion runs on flat rational coefficients via Lagrange
    inversion: [mu^j] R = (1/j) [r^(j-1)] (r / f(r))^j.
    """
    import math

    if order < 1:
        raise DomainError("series_invert_z needs order >= 1")
    p = order
    # f(r)/r = 1 + sum_{m>=1} c_m r^m with pi^2 scaled out
    f_over_r = [_R1] + [
        Rational((-2) ** m, math.factorial(m) * math.factorial(m + 1))
        for m in range(1, p)
    ]
    # h = r/f(r): reciprocal of f/r
    h = [_R1] + [_R0] * (p - 1)
    for s in range(1, p):
        acc = _R0
        for t in range(1, s + 1):
            acc += f_over_r[t] * h[s - t]
        h[s] = -acc
    a = [_R0] * (p + 1)
    h_pow = list(h)  # h^1
    a[1] = h_pow[0]
    for j in range(2, p + 1):
        nxt = [_R0] * p
        for i in range(p):
            hi = h_pow[i]
            if hi:
                for t in range(p - i):
                    if h[t]:
                        nxt[i + t] += hi * h[t]
        h_pow = nxt
        a[j] = h_pow[j - 1] / j
    coeffs = [_PP0] + [PiPoly.term(a[j], j - 1) for j in range(1, p + 1)]
    return MuSeries(coeffs)


def series_compose(outer: MuSeries, inner: MuSeries) -> MuSeries:
    """Truncated composition outer(inner(mu)); inner(0) must vanish."""
    return outer.compose(inner)


class TightPoly:
    """Sparse polynomial in (ell_1..ell_n, m_1..m_D) over Rational.

    Term keys are exponent tuples of length n_ell + n_m with the ell block
    first.  The graded degree of a monomial counts ell exponents with
    weight 1 and m_k exponents with weight k.
    """

    __slots__ = ("n_ell", "n_m", "terms")

    def __init__(self, n_ell: int, n_m: int,
                 terms: Mapping[tuple, object] | None = None):
        if n_ell < 0 or n_m < 0:
            raise ShapeError("negative shape")
        self.n_ell = n_ell
        self.n_m = n_m
        width = n_ell + n_m
        t = {}
        if terms:
            for k, q in terms.items():
                k = tuple(int(e) for e in k)
                if len(k) != width or any(e < 0 for e in k):
                    raise ShapeError(f"bad exponent key {k} for shape "
                                     f"({n_ell},{n_m})")
                q = q if isinstance(q, Rational) else Rational(q)
                if q:
                    t[k] = t.get(k, _R0) + q
        self.terms = {k: q for k, q in t.items() if q}

    @classmethod
    def _raw(cls, n_ell: int, n_m: int, terms: dict) -> "TightPoly":
        p = object.__new__(cls)
        p.n_ell = n_ell
        p.n_m = n_m
        p.terms = terms
        return p

    @classmethod
    def zero(cls, n_ell: int, n_m: int) -> "TightPoly":
        return cls._raw(n_ell, n_m, {})

    @classmethod
    def const(cls, n_ell: int, n_m: int, q) -> "TightPoly":
        q = q if isinstance(q, Rational) else Rational(q)
        if not q:
            return cls.zero(n_ell, n_m)
        return cls._raw(n_ell, n_m, {(0,) * (n_ell + n_m): q})

    @classmethod
    def ell_var(cls, n_ell: int, n_m: int, i: int) -> "TightPoly":
        """The variable ell_i (1-based)."""
        if not 1 <= i <= n_ell:
            raise ShapeError(f"ell index {i} out of range 1..{n_ell}")
        key = [0] * (n_ell + n_m)
        key[i - 1] = 1
        return cls._raw(n_ell, n_m, {tuple(key): _R1})

    @classmethod
    def m_var(cls, n_ell: int, n_m: int, k: int) -> "TightPoly":
        """The variable m_k (1-based)."""
        if not 1 <= k <= n_m:
            raise ShapeError(f"m index {k} out of range 1..{n_m}")
        key = [0] * (n_ell + n_m)
        key[n_ell + k - 1] = 1
        return cls._raw(n_ell, n_m, {tuple(key): _R1})

    # -- bookkeeping ----------------------------------------------------

    @property
    def shape(self) -> tuple:
        return (self.n_ell, self.n_m)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def _check_shape(self, other: "TightPoly"):
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")

    def grade(self, key: tuple) -> int:
        """Graded degree: sum q_i + sum k * e_k."""
        n = self.n_ell
        return sum(key[:n]) + sum((j + 1) * e
                                  for j, e in enumerate(key[n:]))

    def grades(self):
        return {self.grade(k) for k in self.terms}

    def coeff(self, key: tuple) -> Rational:
        return self.terms.get(tuple(key), _R0)

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, TightPoly):
            self._check_shape(other)
            return TightPoly._raw(
                self.n_ell, self.n_m,
                kernels.add_dicts(self.terms, other.terms))
        if isinstance(other, (int, Rational)):
            return self + TightPoly.const(self.n_ell, self.n_m, other)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return TightPoly._raw(self.n_ell, self.n_m,
                              {k: -q for k, q in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, TightPoly):
            self._check_shape(other)
            return self + (-other)
        if isinstance(other, (int, Rational)):
            return self + (-Rational(other))
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, TightPoly):
            self._check_shape(other)
            return TightPoly._raw(self.n_ell, self.n_m,
                                  kernels.tp_mul(self.terms, other.terms))
        if isinstance(other, (int, Rational)):
            return TightPoly._raw(
                self.n_ell, self.n_m,
                kernels.scale_dict(self.terms, Rational(other)))
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TightPoly):
            return NotImplemented
        return self.shape == other.shape and self.terms == other.terms

    __hash__ = None

    def dm(self, index: int) -> "TightPoly":
        """Formal partial derivative in m_index (1-based)."""
        if not 1 <= index <= self.n_m:
            raise ShapeError(f"m index {index} out of range 1..{self.n_m}")
        pos = self.n_ell + index - 1
        return TightPoly._raw(self.n_ell, self.n_m,
                              kernels.tp_dm(self.terms, pos, _R1))

    def integrate_ell(self, boundary: int) -> "TightPoly":
        """Boundary integral int_0^L x p(x...) dx in ell_boundary."""
        if not 1 <= boundary <= self.n_ell:
            raise ShapeError(f"boundary {boundary} out of range "
                             f"1..{self.n_ell}")
        pos = boundary - 1
        return TightPoly._raw(self.n_ell, self.n_m,
                              kernels.tp_int_ell(self.terms, pos, _R1))

    def permute_ell(self, perm: Sequence[int]) -> "TightPoly":
        """Relabel boundaries: new ell_i = old ell_{perm[i-1]} (1-based)."""
        if sorted(perm) != list(range(1, self.n_ell + 1)):
            raise ShapeError(f"{perm} is not a permutation of "
                             f"1..{self.n_ell}")
        full = tuple(p - 1 for p in perm) + tuple(
            range(self.n_ell, self.n_ell + self.n_m))
        return TightPoly._raw(self.n_ell, self.n_m,
                              kernels.tp_permute(self.terms, full))

    def embed(self, n_ell: int, n_m: int,
              ell_positions: Sequence[int]) -> "TightPoly":
        """Inject into a larger shape.

        Old boundary i (1-based) becomes new boundary ell_positions[i-1];
        m variables keep their indices (n_m may only grow).
        """
        if n_m < self.n_m or n_ell < self.n_ell:
            raise ShapeError("embed cannot shrink a shape")
        if len(ell_positions) != self.n_ell:
            raise ShapeError("ell_positions must map every old boundary")
        out = {}
        for k, q in self.terms.items():
            key = [0] * (n_ell + n_m)
            for i, e in enumerate(k[:self.n_ell]):
                key[ell_positions[i] - 1] = e
            for j, e in enumerate(k[self.n_ell:]):
                key[n_ell + j] = e
            out[tuple(key)] = q
        return TightPoly._raw(n_ell, n_m, out)

    # -- evaluation -------------------------------------------------------

    def _pow_tables(self, values, prec):
        maxes = [0] * (self.n_ell + self.n_m)
        for k in self.terms:
            for i, e in enumerate(k):
                if e > maxes[i]:
                    maxes[i] = e
        pows = []
        for i, v in enumerate(values):
            tab = [mpmath.mpf(1)]
            acc = mpmath.mpf(1)
            for _ in range(maxes[i]):
                acc = acc * v
                tab.append(acc)
            pows.append(tab)
        return pows

    def eval_full(self, ell_values, m_values, prec: int = DEFAULT_PREC,
                  cancel_threshold: float = CANCEL_THRESHOLD):
        """Evaluate numerically; returns (value, abs_sum, cancelled)."""
        if len(ell_values) != self.n_ell or len(m_values) != self.n_m:
            raise ShapeError(
                f"value counts ({len(ell_values)},{len(m_values)}) do not "
                f"match shape {self.shape}")
        if prec < 53:
            raise DomainError("precision must be at least 53 bits")
        with mp.workprec(prec):
            vals = [mpmath.mpf(v) for v in ell_values] + \
                   [mpmath.mpf(v) for v in m_values]
            pows = self._pow_tables(vals, prec)
            items = [(k, to_mpf(q, prec)) for k, q in self.terms.items()]
            total, abs_total = kernels.tp_eval(items, pows)
            cancelled = bool(abs_total) and \
                abs(total) < mpmath.mpf(cancel_threshold) * abs_total
            return total, abs_total, cancelled

    def eval(self, ell_values, m_values, prec: int = DEFAULT_PREC):
        """Numeric evaluation; warns on heavy cancellation."""
        total, _, cancelled = self.eval_full(ell_values, m_values, prec)
        if cancelled:
            warnings.warn("tight polynomial evaluation lost most of its "
                          "magnitude to cancellation", CancellationWarning,
                          stacklevel=2)
        return total

    def subst_m(self, m_values: Sequence[PiPoly]) -> dict:
        """Substitute exact values for every m_k, keeping ell symbolic.

        Returns {ell-exponent tuple: PiPoly}; m_values[k-1] replaces m_k.
        """
        if len(m_values) != self.n_m:
            raise ShapeError(f"need {self.n_m} m-values, got {len(m_values)}")
        vals = [v if isinstance(v, PiPoly) else PiPoly.const(v)
                for v in m_values]
        pow_memo: dict = {}

        def vpow(k, e):
            key = (k, e)
            if key not in pow_memo:
                pow_memo[key] = vals[k] ** e
            return pow_memo[key]

        out: dict = {}
        n = self.n_ell
        for key, q in self.terms.items():
            acc = PiPoly.const(q)
            for k, e in enumerate(key[n:]):
                if e:
                    acc = acc * vpow(k, e)
            ell_key = key[:n]
            cur = out.get(ell_key)
            out[ell_key] = acc if cur is None else cur + acc
        return {k: v for k, v in out.items() if not v.is_zero}

    def eval_exact(self, ell_values, m_values: Sequence[PiPoly]) -> PiPoly:
        """Fully exact evaluation at Rational ell values, PiPoly m values."""
        if len(ell_values) != self.n_ell:
            raise ShapeError(f"need {self.n_ell} ell-values, "
                             f"got {len(ell_values)}")
        by_ell = self.subst_m(m_values)
        ells = [q if isinstance(q, Rational) else Rational(q)
                for q in ell_values]
        total = PiPoly.zero()
        for key, pp in by_ell.items():
            scale = _R1
            for v, e in zip(ells, key):
                scale *= v ** e
            total = total + pp * scale
        return total

    # -- canonical order and serialization ---------------------------------

    def sorted_terms(self):
        """Graded lexicographic order on (m-block, ell-block)."""
        n = self.n_ell

        def sort_key(item):
            k = item[0]
            return (self.grade(k), k[n:], k[:n])

        return sorted(self.terms.items(), key=sort_key)

    def to_obj(self):
        """Canonical serialization: [[ell-exps, m-exps, 'num/den'], ...]."""
        n = self.n_ell
        return [[list(k[:n]), list(k[n:]), rat_to_str(q)]
                for k, q in self.sorted_terms()]

    @classmethod
    def from_obj(cls, n_ell: int, n_m: int, obj) -> "TightPoly":
        terms = {}
        for ell, m, s in obj:
            terms[tuple(ell) + tuple(m)] = rat_from_str(s)
        return cls(n_ell, n_m, terms)

    def __repr__(self):
        return (f"TightPoly(n_ell={self.n_ell}, n_m={self.n_m}, "
                f"terms={len(self.terms)})")


# Spec-facing functional aliases -------------------------------------------

def poly_add(a: TightPoly, b: TightPoly) -> TightPoly:
    return a + b


def poly_mul(a: TightPoly, b: TightPoly) -> TightPoly:
    return a * b


def poly_dm(p: TightPoly, index: int) -> TightPoly:
    return p.dm(index)


def poly_integrate_boundary(p: TightPoly, boundary: int) -> TightPoly:
    return p.integrate_ell(boundary)


def poly_eval(p: TightPoly, ell_values, m_values,
              precision: int = DEFAULT_PREC):
    return p.eval(ell_values, m_values, precision)
