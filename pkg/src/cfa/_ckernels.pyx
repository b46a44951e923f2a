# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled counting kernel on 64-bit counters.

Raises OverflowError as soon as any counter would wrap; the caller then
reruns the pure-Python kernel, which works on unbounded integers.
"""

from libc.stdlib cimport calloc, free
from libc.string cimport memset

cdef extern from *:
    """
    static int cfa_add(unsigned long long a, unsigned long long b, unsigned long long *r) {
        return __builtin_add_overflow(a, b, r);
    }
    """
    int cfa_add(unsigned long long a, unsigned long long b, unsigned long long *r) nogil


def count_table(const int[:] offsets, const int[:] targets, const signed char[:] kind,
                int nstates, int start, const int[:] word):
    if kind[start] == 1:
        return 1, 0, 0
    if kind[start] == 2:
        return 0, 1, 0
    cdef unsigned long long acc = 0, rej = 0, imp = 0, c
    cdef unsigned long long *cur = <unsigned long long *> calloc(nstates, sizeof(unsigned long long))
    cdef unsigned long long *nxt = <unsigned long long *> calloc(nstates, sizeof(unsigned long long))
    cdef unsigned long long *tmp
    cdef int overflow = 0
    cdef Py_ssize_t pos, q, i, base, t
    cdef int lo, hi
    if cur == NULL or nxt == NULL:
        free(cur)
        free(nxt)
        raise MemoryError()
    cur[start] = 1
    with nogil:
        for pos in range(word.shape[0]):
            base = word[pos] * nstates
            memset(nxt, 0, nstates * sizeof(unsigned long long))
            for q in range(nstates):
                c = cur[q]
                if c == 0:
                    continue
                lo = offsets[base + q]
                hi = offsets[base + q + 1]
                if lo == hi:
                    overflow |= cfa_add(imp, c, &imp)
                    continue
                for i in range(lo, hi):
                    t = targets[i]
                    if kind[t] == 1:
                        overflow |= cfa_add(acc, c, &acc)
                    elif kind[t] == 2:
                        overflow |= cfa_add(rej, c, &rej)
                    else:
                        overflow |= cfa_add(nxt[t], c, &nxt[t])
            tmp = cur
            cur = nxt
            nxt = tmp
            if overflow:
                break
        if not overflow:
            for q in range(nstates):
                overflow |= cfa_add(imp, cur[q], &imp)
    free(cur)
    free(nxt)
    if overflow:
        raise OverflowError("path count exceeds 64 bits")
    return acc, rej, imp
