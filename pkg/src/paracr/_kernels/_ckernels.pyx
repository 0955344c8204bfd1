# cython: language_level=3, boundscheck=False, wraparound=False
# distutils: language = c++
"""Compiled graded kernels; same contract as ``_pykernels``.

Products are accumulated in raw GMP rationals keyed by 64-bit packed
exponents, so no Python objects are created inside the inner loop.  Inputs
that do not fit (keys wider than 64 bits, non-mpq coefficients) are handed to
the pure-Python implementation.
"""

from cython.operator cimport dereference as deref
from libc.stdint cimport uint64_t
from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector

from gmpy2 cimport *

from . import _pykernels

cdef extern from "gmp.h":
    void mpq_init(mpq_ptr x)
    void mpq_clear(mpq_ptr x)
    void mpq_mul(mpq_ptr rop, mpq_srcptr a, mpq_srcptr b)
    void mpq_add(mpq_ptr rop, mpq_srcptr a, mpq_srcptr b)
    int mpq_sgn(mpq_srcptr op)

import_gmpy2()

cdef object MPQ_TYPE = type(mpq(0))
cdef object KEY_LIMIT = 1 << 64


cdef bint _unpack(list graded, vector[vector[uint64_t]]& keys, vector[vector[mpq_srcptr]]& coefs):
    """Flatten each degree into parallel key / coefficient-pointer arrays."""
    cdef dict h
    cdef object k, c
    keys.resize(len(graded))
    coefs.resize(len(graded))
    for d in range(len(graded)):
        h = <dict>graded[d]
        keys[d].reserve(len(h))
        coefs[d].reserve(len(h))
        for k, c in h.items():
            if type(c) is not MPQ_TYPE or k >= KEY_LIMIT:
                return False
            keys[d].push_back(<uint64_t>k)
            coefs[d].push_back(<mpq_srcptr>MPQ(<mpq>c))
    return True


def mul_graded(list a, list b, Py_ssize_t maxdeg):
    cdef Py_ssize_t na = len(a), nb = len(b)
    cdef Py_ssize_t top = min(maxdeg, na + nb - 2)
    if top < 0:
        return []
    cdef vector[vector[uint64_t]] ka, kb
    cdef vector[vector[mpq_srcptr]] ca, cb
    if not _unpack(a, ka, ca) or not _unpack(b, kb, cb):
        return _pykernels.mul_graded(a, b, maxdeg)

    cdef list out = []
    cdef unordered_map[uint64_t, size_t] index
    cdef unordered_map[uint64_t, size_t].iterator it
    cdef vector[uint64_t] acc_keys
    cdef vector[__mpq_struct] acc
    cdef __mpq_struct tmp
    cdef __mpq_struct fresh
    cdef Py_ssize_t d, da, db
    cdef size_t i, j, n1, n2, slot
    cdef uint64_t k1, key
    cdef mpq_srcptr c1
    cdef dict h
    cdef mpq obj
    mpq_init(&tmp)
    try:
        for d in range(top + 1):
            index.clear()
            acc_keys.clear()
            acc.clear()
            for da in range(max(0, d - (nb - 1)), min(d, na - 1) + 1):
                db = d - da
                n1 = ka[da].size()
                n2 = kb[db].size()
                if n1 == 0 or n2 == 0:
                    continue
                for i in range(n1):
                    k1 = ka[da][i]
                    c1 = ca[da][i]
                    for j in range(n2):
                        key = k1 + kb[db][j]
                        it = index.find(key)
                        if it == index.end():
                            slot = acc.size()
                            index[key] = slot
                            acc_keys.push_back(key)
                            mpq_init(&fresh)
                            acc.push_back(fresh)
                            mpq_mul(&acc[slot], c1, cb[db][j])
                        else:
                            mpq_mul(&tmp, c1, cb[db][j])
                            slot = deref(it).second
                            mpq_add(&acc[slot], &acc[slot], &tmp)
            h = {}
            for i in range(acc.size()):
                if mpq_sgn(&acc[i]) != 0:
                    obj = GMPy_MPQ_New(NULL)
                    mpq_set(MPQ(obj), &acc[i])
                    h[acc_keys[i]] = obj
                mpq_clear(&acc[i])
            acc.clear()
            out.append(h)
    finally:
        for i in range(acc.size()):
            mpq_clear(&acc[i])
        mpq_clear(&tmp)
    return out


def diff_graded(list a, int shift):
    cdef Py_ssize_t n = len(a), d
    cdef dict acc, h
    cdef object k, c, unit
    cdef long e
    cdef list out
    if n <= 1:
        return []
    unit = (<object>1) << shift
    out = [dict() for _ in range(n - 1)]
    for d in range(1, n):
        acc = <dict>out[d - 1]
        h = <dict>a[d]
        for k, c in h.items():
            e = (k >> shift) & 255
            if e:
                acc[k - unit] = c * e
    return out
