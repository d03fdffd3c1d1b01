# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled dichotomy kernel.

Bit-for-bit twin of ``_core_py.accumulate_frequencies``: same SplitMix64
draw sequence, same (cost, vertex) extraction order (encoded here as the
single key cost * n + vertex), same strict-improvement relaxation.  Keep
the two implementations in lockstep; the parity tests compare them.
"""

import numpy as np

from libc.stdint cimport int32_t, int64_t, uint64_t


cdef inline uint64_t _mix(uint64_t* state) noexcept nogil:
    cdef uint64_t z
    state[0] = state[0] + <uint64_t>0x9E3779B97F4A7C15
    z = state[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline int64_t _draw_index(uint64_t* state, uint64_t n) noexcept nogil:
    return <int64_t>(_mix(state) % n)


cdef int64_t _bottleneck_path(const int64_t[::1] indptr, const int32_t[::1] nbrs,
                              const int32_t[::1] eids, const int64_t[::1] freq,
                              int64_t n, int64_t src, int64_t dst,
                              int64_t[::1] dist, unsigned char[::1] done,
                              int64_t[::1] pred_v, int64_t[::1] pred_e,
                              int64_t[::1] heap, int64_t[::1] path) noexcept nogil:
    """Fill `path` with edge ids of a bottleneck-optimal src->dst path.

    Returns the path length, or -1 when dst is unreachable.  The heap
    stores cost * n + vertex so that pops follow (cost, vertex) order.
    """
    cdef int64_t i, v, w, cost, nd, key, hsize, child, parent, pos, idx, e
    cdef int64_t INF = <int64_t>1 << 62

    for i in range(n):
        dist[i] = INF
        done[i] = 0
    dist[src] = 0
    heap[0] = src  # cost 0 -> key = vertex
    hsize = 1

    while hsize > 0:
        # pop-min with sift-down
        key = heap[0]
        hsize -= 1
        heap[0] = heap[hsize]
        pos = 0
        while True:
            child = 2 * pos + 1
            if child >= hsize:
                break
            if child + 1 < hsize and heap[child + 1] < heap[child]:
                child += 1
            if heap[child] < heap[pos]:
                heap[pos], heap[child] = heap[child], heap[pos]
                pos = child
            else:
                break

        v = key % n
        cost = key // n
        if done[v]:
            continue
        done[v] = 1
        if v == dst:
            break
        for idx in range(indptr[v], indptr[v + 1]):
            w = nbrs[idx]
            if done[w]:
                continue
            e = eids[idx]
            nd = freq[e]
            if cost > nd:
                nd = cost
            if nd < dist[w]:
                dist[w] = nd
                pred_v[w] = v
                pred_e[w] = e
                # push with sift-up
                key = nd * n + w
                pos = hsize
                heap[pos] = key
                hsize += 1
                while pos > 0:
                    parent = (pos - 1) // 2
                    if heap[pos] < heap[parent]:
                        heap[pos], heap[parent] = heap[parent], heap[pos]
                        pos = parent
                    else:
                        break

    if not done[dst]:
        return -1
    i = 0
    v = dst
    while v != src:
        path[i] = pred_e[v]
        i += 1
        v = pred_v[v]
    return i


cdef int _run(const int64_t[::1] indptr, const int32_t[::1] nbrs,
              const int32_t[::1] eids, int64_t[::1] freq,
              int64_t reps, uint64_t seed, int64_t extra_cap,
              int64_t[::1] dist, unsigned char[::1] done,
              int64_t[::1] pred_v, int64_t[::1] pred_e,
              int64_t[::1] heap, int64_t[::1] path,
              int64_t[::1] out) noexcept nogil:
    cdef int64_t n = indptr.shape[0] - 1
    cdef uint64_t state = seed
    cdef int64_t rep, a, b, plen, i, e, peak, path_max, extras

    peak = 0
    for rep in range(reps):
        a = _draw_index(&state, <uint64_t>n)
        b = _draw_index(&state, <uint64_t>n)
        while b == a:
            b = _draw_index(&state, <uint64_t>n)
        plen = _bottleneck_path(indptr, nbrs, eids, freq, n, a, b,
                                dist, done, pred_v, pred_e, heap, path)
        if plen < 0:
            return 1
        for i in range(plen):
            e = path[i]
            freq[e] += 1
            if freq[e] > peak:
                peak = freq[e]

    extras = 0
    while True:
        a = _draw_index(&state, <uint64_t>n)
        b = _draw_index(&state, <uint64_t>n)
        while b == a:
            b = _draw_index(&state, <uint64_t>n)
        plen = _bottleneck_path(indptr, nbrs, eids, freq, n, a, b,
                                dist, done, pred_v, pred_e, heap, path)
        if plen < 0:
            return 1
        path_max = 0
        for i in range(plen):
            e = path[i]
            freq[e] += 1
            if freq[e] > path_max:
                path_max = freq[e]
        if path_max > peak:
            for i in range(plen):
                freq[path[i]] -= 1
            break
        extras += 1
        if extras > extra_cap:
            return 2

    out[0] = peak
    out[1] = reps + extras
    return 0


def accumulate_frequencies(indptr, nbrs, eids, n_edges, reps, seed, extra_cap):
    """Compiled counterpart of `_core_py.accumulate_frequencies`."""
    indptr_a = np.ascontiguousarray(indptr, dtype=np.int64)
    nbrs_a = np.ascontiguousarray(nbrs, dtype=np.int32)
    eids_a = np.ascontiguousarray(eids, dtype=np.int32)
    cdef int64_t n = indptr_a.shape[0] - 1
    freq = np.zeros(int(n_edges), dtype=np.int64)
    dist = np.empty(n, dtype=np.int64)
    done = np.zeros(n, dtype=np.uint8)
    pred_v = np.empty(n, dtype=np.int64)
    pred_e = np.empty(n, dtype=np.int64)
    heap = np.empty(2 * nbrs_a.shape[0] + 2, dtype=np.int64)
    path = np.empty(n + 1, dtype=np.int64)
    out = np.zeros(2, dtype=np.int64)

    cdef const int64_t[::1] indptr_v = indptr_a
    cdef const int32_t[::1] nbrs_v = nbrs_a
    cdef const int32_t[::1] eids_v = eids_a
    cdef int64_t[::1] freq_v = freq
    cdef int64_t[::1] dist_v = dist
    cdef unsigned char[::1] done_v = done
    cdef int64_t[::1] pred_v_v = pred_v
    cdef int64_t[::1] pred_e_v = pred_e
    cdef int64_t[::1] heap_v = heap
    cdef int64_t[::1] path_v = path
    cdef int64_t[::1] out_v = out
    cdef int64_t reps_c = reps
    cdef uint64_t seed_c = int(seed) & ((1 << 64) - 1)
    cdef int64_t cap_c = extra_cap
    cdef int status

    with nogil:
        status = _run(indptr_v, nbrs_v, eids_v, freq_v, reps_c, seed_c, cap_c,
                      dist_v, done_v, pred_v_v, pred_e_v, heap_v, path_v, out_v)
    if status == 1:
        raise RuntimeError("vertices are disconnected")
    if status == 2:
        raise RuntimeError(
            "closing stage exceeded its iteration cap; "
            "this indicates an implementation bug"
        )
    return freq, int(out[0]), int(out[1])
