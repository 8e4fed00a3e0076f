"""Pure-Python term-map kernels.

These are the hot inner loops of the whole package: convolution of
integer-keyed coefficient dicts (univariate polynomial product), and the
merge/derive/integrate/evaluate loops on exponent-tuple-keyed dicts
(sparse multivariate polynomials).  ``tightwp._termops_cy`` provides a
compiled twin of this module; ``tightwp.kernels`` picks whichever is
available at import time.  Both implementations must stay byte-for-byte
equivalent in behaviour (see tests/test_kernels_equiv.py).

Coefficients are opaque ring elements (gmpy2.mpq, Fraction, mpmath.mpf,
PiPoly, ...); the kernels only add, multiply and compare them to zero.
"""


def conv_dicts(a, b):
    """Convolve two {int exponent: coeff} maps (polynomial product)."""
    if not a or not b:
        return {}
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            c = ca * cb
            if e in out:
                out[e] += c
            else:
                out[e] = c
    return {e: c for e, c in out.items() if c}


def add_dicts(a, b):
    """Add two {key: coeff} maps, dropping zero results."""
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    out = dict(a)
    for k, c in b.items():
        if k in out:
            s = out[k] + c
            if s:
                out[k] = s
            else:
                del out[k]
        else:
            out[k] = c
    return out


def scale_dict(a, c):
    """Multiply every coefficient by c (c may be zero)."""
    if not c:
        return {}
    return {k: v * c for k, v in a.items()}


def tp_mul(a, b):
    """Product of two {exponent tuple: coeff} maps of equal tuple length."""
    if not a or not b:
        return {}
    out = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            c = ca * cb
            if k in out:
                out[k] += c
            else:
                out[k] = c
    return {k: c for k, c in out.items() if c}


def tp_dm(a, pos, one):
    """Formal derivative in tuple position pos; `one` is the ring unit."""
    out = {}
    for k, c in a.items():
        e = k[pos]
        if e == 0:
            continue
        kk = k[:pos] + (e - 1,) + k[pos + 1:]
        cc = c * (e * one)
        if kk in out:
            out[kk] += cc
        else:
            out[kk] = cc
    return {k: c for k, c in out.items() if c}


def tp_int_ell(a, pos, one):
    """Boundary integral in tuple position pos.

    Exponent q (of ell = L^2) maps to q+1 with the coefficient divided
    by 2q+2, which is exactly int_0^L x * x^(2q) dx = L^(2q+2)/(2q+2).
    """
    out = {}
    for k, c in a.items():
        e = k[pos]
        kk = k[:pos] + (e + 1,) + k[pos + 1:]
        out[kk] = c * (one / (2 * e + 2))
    return out


def tp_permute(a, perm):
    """Reindex tuple positions: new key[i] = old key[perm[i]]."""
    out = {}
    for k, c in a.items():
        kk = tuple(k[p] for p in perm)
        if kk in out:
            out[kk] += c
        else:
            out[kk] = c
    return {k: c for k, c in out.items() if c}


def tp_eval(items, pows):
    """Evaluate a list of (exponent tuple, numeric coeff) pairs.

    pows[i][e] must hold value_i**e for every exponent e that occurs in
    position i.  Returns (sum, sum of absolute values of the terms); the
    second accumulator drives cancellation diagnostics.
    """
    total = 0
    abs_total = 0
    for k, c in items:
        t = c
        for i, e in enumerate(k):
            if e:
                t = t * pows[i][e]
        total = total + t
        if t < 0:
            abs_total = abs_total - t
        else:
            abs_total = abs_total + t
    return total, abs_total
