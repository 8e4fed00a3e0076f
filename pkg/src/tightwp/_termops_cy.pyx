# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled term-map kernels (Cython twin of ``_termops_py``).

Coefficients stay generic Python objects (gmpy2.mpq, mpf, PiPoly, ...);
the win over the pure-Python module comes from compiled dict iteration,
tuple construction and loop bookkeeping around the object arithmetic.
Semantics must match ``_termops_py`` exactly.
"""

cimport cython


def conv_dicts(dict a, dict b):
    """Convolve two {int exponent: coeff} maps (polynomial product)."""
    if not a or not b:
        return {}
    cdef dict out = {}
    cdef object ea, ca, eb, cb, e, c, cur
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            c = ca * cb
            cur = out.get(e)
            if cur is None:
                out[e] = c
            else:
                out[e] = cur + c
    return {e: c for e, c in out.items() if c}


def add_dicts(dict a, dict b):
    """Add two {key: coeff} maps, dropping zero results."""
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    cdef dict out = dict(a)
    cdef object k, c, cur, s
    for k, c in b.items():
        cur = out.get(k)
        if cur is None:
            out[k] = c
        else:
            s = cur + c
            if s:
                out[k] = s
            else:
                del out[k]
    return out


def scale_dict(dict a, object c):
    """Multiply every coefficient by c (c may be zero)."""
    if not c:
        return {}
    cdef dict out = {}
    cdef object k, v
    for k, v in a.items():
        out[k] = v * c
    return out


def tp_mul(dict a, dict b):
    """Product of two {exponent tuple: coeff} maps of equal tuple length."""
    if not a or not b:
        return {}
    cdef dict out = {}
    cdef tuple ka, kb, k
    cdef object ca, cb, c, cur
    cdef Py_ssize_t i, n
    cdef list buf
    for ka, ca in a.items():
        n = len(ka)
        for kb, cb in b.items():
            buf = [0] * n
            for i in range(n):
                buf[i] = ka[i] + kb[i]
            k = tuple(buf)
            c = ca * cb
            cur = out.get(k)
            if cur is None:
                out[k] = c
            else:
                out[k] = cur + c
    return {k: c for k, c in out.items() if c}


def tp_dm(dict a, Py_ssize_t pos, object one):
    """Formal derivative in tuple position pos; `one` is the ring unit."""
    cdef dict out = {}
    cdef tuple k, kk
    cdef object c, cc, cur, e
    for k, c in a.items():
        e = k[pos]
        if e == 0:
            continue
        kk = k[:pos] + (e - 1,) + k[pos + 1:]
        cc = c * (e * one)
        cur = out.get(kk)
        if cur is None:
            out[kk] = cc
        else:
            out[kk] = cur + cc
    return {k: c for k, c in out.items() if c}


def tp_int_ell(dict a, Py_ssize_t pos, object one):
    """Boundary integral in tuple position pos (q -> q+1, / (2q+2))."""
    cdef dict out = {}
    cdef tuple k, kk
    cdef object c, e
    for k, c in a.items():
        e = k[pos]
        kk = k[:pos] + (e + 1,) + k[pos + 1:]
        out[kk] = c * (one / (2 * e + 2))
    return out


def tp_permute(dict a, tuple perm):
    """Reindex tuple positions: new key[i] = old key[perm[i]]."""
    cdef dict out = {}
    cdef tuple k, kk
    cdef object c, cur
    cdef Py_ssize_t i, n = len(perm)
    cdef list buf
    for k, c in a.items():
        buf = [0] * n
        for i in range(n):
            buf[i] = k[<Py_ssize_t> perm[i]]
        kk = tuple(buf)
        cur = out.get(kk)
        if cur is None:
            out[kk] = c
        else:
            out[kk] = cur + c
    return {k: c for k, c in out.items() if c}


def tp_eval(list items, list pows):
    """Evaluate (exponent tuple, numeric coeff) pairs; see _termops_py."""
    cdef object total = 0
    cdef object abs_total = 0
    cdef tuple k
    cdef object c, t, e
    cdef Py_ssize_t i, n
    for k, c in items:
        t = c
        n = len(k)
        for i in range(n):
            e = k[i]
            if e:
                t = t * (<list> pows[i])[<Py_ssize_t> e]
        total = total + t
        if t < 0:
            abs_total = abs_total - t
        else:
            abs_total = abs_total + t
    return total, abs_total
