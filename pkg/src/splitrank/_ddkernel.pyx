# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled double description kernel.

Same contract as ``_ddkernel_py``.  Arithmetic stays on Python ints (exact,
unbounded); the cubic adjacency test runs over packed ``uint64`` bitsets.
"""
from libc.stdlib cimport malloc, free
from libc.stdint cimport uint64_t
from math import gcd

BACKEND = "cython"

cdef extern from *:
    int __builtin_popcountll(unsigned long long)


cdef list _normalize(list v):
    cdef object g = gcd(*v)
    if g > 1:
        return [x // g for x in v]
    return v


cdef object _dot(list a, list v):
    cdef object s = 0
    cdef Py_ssize_t k, n = len(a)
    for k in range(n):
        if a[k]:
            s += a[k] * v[k]
    return s


cdef uint64_t* _pack(list masks, int nwords) except NULL:
    cdef Py_ssize_t n = len(masks), i
    cdef int w
    cdef uint64_t* buf = <uint64_t*> malloc(max(n, 1) * nwords * sizeof(uint64_t))
    if buf == NULL:
        raise MemoryError()
    cdef object m
    for i in range(n):
        m = masks[i]
        for w in range(nwords):
            buf[i * nwords + w] = <uint64_t> (m & 0xFFFFFFFFFFFFFFFF)
            m >>= 64
    return buf


def adjacent_pairs(list masks, left, right, int min_common, bint symmetric=False):
    cdef Py_ssize_t nmask = len(masks)
    cdef int nbits = 1
    cdef object m
    for m in masks:
        if m.bit_length() > nbits:
            nbits = m.bit_length()
    cdef int nwords = (nbits + 63) // 64
    cdef uint64_t* buf = _pack(masks, nwords)
    cdef uint64_t* common = <uint64_t*> malloc(nwords * sizeof(uint64_t))
    cdef list out = []
    cdef Py_ssize_t i, j, r
    cdef int w, cnt
    cdef bint covered, ok
    cdef list lidx = list(left)
    cdef list ridx = list(right)
    try:
        for i in lidx:
            for j in ridx:
                if j == i or (symmetric and j <= i):
                    continue
                cnt = 0
                for w in range(nwords):
                    common[w] = buf[i * nwords + w] & buf[j * nwords + w]
                    cnt += __builtin_popcountll(common[w])
                if cnt < min_common:
                    continue
                covered = False
                for r in range(nmask):
                    if r == i or r == j:
                        continue
                    ok = True
                    for w in range(nwords):
                        if (buf[r * nwords + w] & common[w]) != common[w]:
                            ok = False
                            break
                    if ok:
                        covered = True
                        break
                if not covered:
                    out.append((i, j))
    finally:
        free(buf)
        free(common)
    return out


def dd_cone(int dim, eqs, ineqs):
    cdef list lin = [[int(i == j) for j in range(dim)] for i in range(dim)]
    cdef list rays = []
    cdef list masks = []
    cdef object processed = 0
    cdef object bit, s, v, vp, vn
    cdef list constraints = [(list(a), True) for a in eqs] + [(list(a), False) for a in ineqs]
    cdef list a, l0, lvals, newlin, vals, pos, neg, zero
    cdef list new_rays, new_masks, keep_rays, keep_masks, l, r, rp, rn
    cdef Py_ssize_t idx, i, piv, p, n
    cdef bint is_eq
    for idx in range(len(constraints)):
        a, is_eq = constraints[idx]
        bit = (<object>1) << idx
        lvals = [_dot(a, l) for l in lin]
        piv = -1
        for i in range(len(lvals)):
            if lvals[i]:
                piv = i
                break
        if piv >= 0:
            l0 = lin[piv]
            s = lvals[piv]
            if s < 0:
                l0 = [-x for x in l0]
                s = -s
            newlin = []
            for i in range(len(lin)):
                if i == piv:
                    continue
                l = lin[i]
                v = lvals[i]
                if v:
                    l = _normalize([s * x - v * y for x, y in zip(l, l0)])
                newlin.append(l)
            lin = newlin
            for i in range(len(rays)):
                r = rays[i]
                v = _dot(a, r)
                if v:
                    rays[i] = _normalize([s * x - v * y for x, y in zip(r, l0)])
                masks[i] = masks[i] | bit
            if not is_eq:
                rays.append(l0)
                masks.append(processed)
        else:
            vals = [_dot(a, r) for r in rays]
            pos = [i for i in range(len(vals)) if vals[i] > 0]
            neg = [i for i in range(len(vals)) if vals[i] < 0]
            zero = [i for i in range(len(vals)) if vals[i] == 0]
            new_rays = []
            new_masks = []
            if pos and neg:
                for p, n in adjacent_pairs(masks, pos, neg, dim - len(lin) - 2):
                    vp = vals[p]
                    vn = -vals[n]
                    rp = rays[p]
                    rn = rays[n]
                    new_rays.append(_normalize([vp * x + vn * y for x, y in zip(rn, rp)]))
                    new_masks.append((masks[p] & masks[n]) | bit)
            keep_rays = []
            keep_masks = []
            if not is_eq:
                for i in pos:
                    keep_rays.append(rays[i])
                    keep_masks.append(masks[i])
            for i in zero:
                keep_rays.append(rays[i])
                keep_masks.append(masks[i] | bit)
            rays = keep_rays + new_rays
            masks = keep_masks + new_masks
        processed = processed | bit
    return lin, rays
