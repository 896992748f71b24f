# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled sequence kernels; must agree exactly with ``_seq_py``."""

import numpy as np

BACKEND = "cython"


def unigram_overlap(a, b):
    return _encoded_overlap(np.asarray(a, dtype=np.int64),
                            np.asarray(b, dtype=np.int64))


def bigram_overlap(a, b):
    if a.shape[0] < 2 or b.shape[0] < 2:
        return 0
    # token ids are non-negative and < 2^31, so a shifted pair fits in int64
    a64 = np.asarray(a, dtype=np.int64)
    b64 = np.asarray(b, dtype=np.int64)
    enc_a = (a64[:-1] << 31) | a64[1:]
    enc_b = (b64[:-1] << 31) | b64[1:]
    return _encoded_overlap(enc_a, enc_b)


def _encoded_overlap(enc_a, enc_b):
    cdef const long long[:] sa = np.sort(enc_a)
    cdef const long long[:] sb = np.sort(enc_b)
    cdef Py_ssize_t i = 0, j = 0
    cdef Py_ssize_t na = sa.shape[0], nb = sb.shape[0]
    cdef long long count = 0
    while i < na and j < nb:
        if sa[i] == sb[j]:
            count += 1
            i += 1
            j += 1
        elif sa[i] < sb[j]:
            i += 1
        else:
            j += 1
    return count


def lcs_length(a, b):
    cdef const int[:] av = np.ascontiguousarray(a, dtype=np.int32)
    cdef const int[:] bv = np.ascontiguousarray(b, dtype=np.int32)
    cdef Py_ssize_t n = av.shape[0], m = bv.shape[0]
    if n == 0 or m == 0:
        return 0
    cdef long long[:] prev = np.zeros(m + 1, dtype=np.int64)
    cdef long long[:] cur = np.zeros(m + 1, dtype=np.int64)
    cdef Py_ssize_t i, j
    cdef long long up, left
    for i in range(n):
        cur[0] = 0
        for j in range(1, m + 1):
            if av[i] == bv[j - 1]:
                cur[j] = prev[j - 1] + 1
            else:
                up = prev[j]
                left = cur[j - 1]
                cur[j] = up if up >= left else left
        prev, cur = cur, prev
    return int(prev[m])


def greedy_fragments(summary, source):
    cdef const int[:] s = np.ascontiguousarray(summary, dtype=np.int32)
    cdef const int[:] t = np.ascontiguousarray(source, dtype=np.int32)
    cdef Py_ssize_t n = s.shape[0], m = t.shape[0]
    cdef Py_ssize_t i = 0, j, k
    cdef Py_ssize_t best_len, best_j
    fragments = []
    while i < n:
        best_len = 0
        best_j = -1
        for j in range(m):
            if t[j] != s[i]:
                continue
            k = 1
            while i + k < n and j + k < m and s[i + k] == t[j + k]:
                k += 1
            if k > best_len:
                best_len = k
                best_j = j
        if best_len == 0:
            i += 1
        else:
            fragments.append((int(i), int(best_j), int(best_len)))
            i += best_len
    return fragments
