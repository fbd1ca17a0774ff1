# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Native kernels; see ``_pykernels`` for the reference implementations."""
import numpy as np

from libc.stdint cimport int32_t, int64_t, uint64_t
from libc.string cimport memset

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil
    int __builtin_popcountll(unsigned long long) nogil


def coset_closure(const int32_t[:, ::1] mult, const int32_t[::1] sub, const int32_t[::1] gens):
    cdef Py_ssize_t n = mult.shape[0]
    cdef Py_ssize_t h = sub.shape[0]
    cdef Py_ssize_t ng = gens.shape[0]
    out = np.empty(n, dtype=np.int32)
    reps = np.empty(n // h + 1, dtype=np.int32)
    member_arr = np.zeros(n, dtype=np.uint8)
    cdef int32_t[::1] o = out
    cdef int32_t[::1] r = reps
    cdef unsigned char[::1] member = member_arr
    cdef Py_ssize_t size = 0, nreps = 1, i = 0, j, k
    cdef int32_t y, z
    with nogil:
        for k in range(h):
            member[sub[k]] = 1
            o[size] = sub[k]
            size += 1
        r[0] = sub[0]
        while i < nreps:
            for j in range(ng):
                y = mult[r[i], gens[j]]
                if not member[y]:
                    for k in range(h):
                        z = mult[sub[k], y]
                        member[z] = 1
                        o[size] = z
                        size += 1
                    r[nreps] = y
                    nreps += 1
            i += 1
    return out[:size]


def bfs_sweep(const uint64_t[:, ::1] adj, const int64_t[::1] sources):
    cdef Py_ssize_t V = adj.shape[0]
    cdef Py_ssize_t W = adj.shape[1]
    cdef Py_ssize_t ns = sources.shape[0]
    ecc_arr = np.zeros(ns, dtype=np.int32)
    far_arr = np.zeros(ns, dtype=np.int32)
    reach_arr = np.zeros(ns, dtype=np.int32)
    cdef int32_t[::1] ecc = ecc_arr
    cdef int32_t[::1] far = far_arr
    cdef int32_t[::1] reach = reach_arr
    buf = np.zeros((3, max(W, 1)), dtype=np.uint64)
    cdef uint64_t[:, ::1] b = buf
    cdef uint64_t *visited = &b[0, 0]
    cdef uint64_t *front = &b[1, 0]
    cdef uint64_t *nxt = &b[2, 0]
    cdef uint64_t *tmp
    cdef const uint64_t *row
    cdef uint64_t f
    cdef Py_ssize_t si, w, t, v, s
    cdef int level, count, newcount
    with nogil:
        for si in range(ns):
            s = sources[si]
            memset(visited, 0, W * sizeof(uint64_t))
            memset(front, 0, W * sizeof(uint64_t))
            visited[s >> 6] = (<uint64_t>1) << (s & 63)
            front[s >> 6] = visited[s >> 6]
            level = 0
            count = 1
            while True:
                memset(nxt, 0, W * sizeof(uint64_t))
                for w in range(W):
                    f = front[w]
                    while f:
                        v = w * 64 + __builtin_ctzll(f)
                        row = &adj[v, 0]
                        for t in range(W):
                            nxt[t] |= row[t]
                        f &= f - 1
                newcount = 0
                for t in range(W):
                    nxt[t] &= ~visited[t]
                    visited[t] |= nxt[t]
                    newcount += __builtin_popcountll(nxt[t])
                if newcount == 0:
                    break
                level += 1
                count += newcount
                tmp = front
                front = nxt
                nxt = tmp
            ecc[si] = level
            reach[si] = count
            for w in range(W):
                if front[w]:
                    far[si] = w * 64 + __builtin_ctzll(front[w])
                    break
    return ecc_arr, far_arr, reach_arr
