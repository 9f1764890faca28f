# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled graph kernels.

Twin of ``_fallback.py``: same algorithms, same arithmetic order, so both
backends return bit-identical results.  See the fallback module for the
behavioral documentation.
"""

import numpy as np

from libc.math cimport fabs, sqrt


def brandes_betweenness(int[::1] indptr, int[::1] indices):
    cdef int n = indptr.shape[0] - 1
    cdef int m = indices.shape[0]
    bt_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] bt = bt_arr
    comp_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] comp = comp_arr

    rev_off_arr = np.zeros(n + 1, dtype=np.int32)
    cdef int[::1] rev_off = rev_off_arr
    cdef int k, s, v, w, dv, head, size, j
    cdef double sv, coeff, y, t
    for k in range(m):
        rev_off[indices[k] + 1] += 1
    for v in range(n):
        rev_off[v + 1] += rev_off[v]

    dist_arr = np.zeros(n, dtype=np.int32)
    cdef int[::1] dist = dist_arr
    queue_arr = np.zeros(n, dtype=np.int32)
    cdef int[::1] queue = queue_arr
    sigma_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] sigma = sigma_arr
    delta_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] delta = delta_arr
    pcount_arr = np.zeros(n, dtype=np.int32)
    cdef int[::1] pcount = pcount_arr
    preds_arr = np.zeros(m if m > 0 else 1, dtype=np.int32)
    cdef int[::1] preds = preds_arr

    for s in range(n):
        for v in range(n):
            dist[v] = -1
            sigma[v] = 0.0
            delta[v] = 0.0
            pcount[v] = 0
        sigma[s] = 1.0
        dist[s] = 0
        queue[0] = s
        head = 0
        size = 1
        while head < size:
            v = queue[head]
            head += 1
            dv = dist[v]
            sv = sigma[v]
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if dist[w] < 0:
                    dist[w] = dv + 1
                    queue[size] = w
                    size += 1
                if dist[w] == dv + 1:
                    sigma[w] += sv
                    preds[rev_off[w] + pcount[w]] = v
                    pcount[w] += 1
        for j in range(size - 1, -1, -1):
            w = queue[j]
            coeff = (1.0 + delta[w]) / sigma[w]
            for k in range(rev_off[w], rev_off[w] + pcount[w]):
                v = preds[k]
                delta[v] += sigma[v] * coeff
            if w != s:
                y = delta[w] - comp[w]
                t = bt[w] + y
                comp[w] = (t - bt[w]) - y
                bt[w] = t
    return bt_arr


def brandes_edge_betweenness(int[::1] indptr, int[::1] indices):
    cdef int n = indptr.shape[0] - 1
    cdef int m = indices.shape[0]
    ebt_arr = np.zeros(m, dtype=np.float64)
    cdef double[::1] ebt = ebt_arr

    rev_off_arr = np.zeros(n + 1, dtype=np.int32)
    cdef int[::1] rev_off = rev_off_arr
    cdef int k, s, v, w, dv, head, size, j
    cdef double sv, coeff, c
    for k in range(m):
        rev_off[indices[k] + 1] += 1
    for v in range(n):
        rev_off[v + 1] += rev_off[v]

    dist_arr = np.zeros(n, dtype=np.int32)
    cdef int[::1] dist = dist_arr
    queue_arr = np.zeros(n, dtype=np.int32)
    cdef int[::1] queue = queue_arr
    sigma_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] sigma = sigma_arr
    delta_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] delta = delta_arr
    pcount_arr = np.zeros(n, dtype=np.int32)
    cdef int[::1] pcount = pcount_arr
    preds_arr = np.zeros(m if m > 0 else 1, dtype=np.int32)
    cdef int[::1] preds = preds_arr
    slots_arr = np.zeros(m if m > 0 else 1, dtype=np.int32)
    cdef int[::1] slots = slots_arr

    for s in range(n):
        for v in range(n):
            dist[v] = -1
            sigma[v] = 0.0
            delta[v] = 0.0
            pcount[v] = 0
        sigma[s] = 1.0
        dist[s] = 0
        queue[0] = s
        head = 0
        size = 1
        while head < size:
            v = queue[head]
            head += 1
            dv = dist[v]
            sv = sigma[v]
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if dist[w] < 0:
                    dist[w] = dv + 1
                    queue[size] = w
                    size += 1
                if dist[w] == dv + 1:
                    sigma[w] += sv
                    preds[rev_off[w] + pcount[w]] = v
                    slots[rev_off[w] + pcount[w]] = k
                    pcount[w] += 1
        for j in range(size - 1, -1, -1):
            w = queue[j]
            coeff = (1.0 + delta[w]) / sigma[w]
            for k in range(rev_off[w], rev_off[w] + pcount[w]):
                v = preds[k]
                c = sigma[v] * coeff
                ebt[slots[k]] += c
                delta[v] += c
    return ebt_arr


def closeness_sums(int[::1] indptr, int[::1] indices):
    cdef int n = indptr.shape[0] - 1
    sums_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] sums = sums_arr
    reach_arr = np.zeros(n, dtype=np.int32)
    cdef int[::1] reach = reach_arr
    dist_arr = np.zeros(n, dtype=np.int32)
    cdef int[::1] dist = dist_arr
    queue_arr = np.zeros(n, dtype=np.int32)
    cdef int[::1] queue = queue_arr
    cdef int s, i, v, w, k, dv, head, size, count
    cdef double total
    for s in range(n):
        for i in range(n):
            dist[i] = -1
        dist[s] = 0
        queue[0] = s
        head = 0
        size = 1
        total = 0.0
        count = 0
        while head < size:
            v = queue[head]
            head += 1
            dv = dist[v]
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if dist[w] < 0:
                    dist[w] = dv + 1
                    queue[size] = w
                    size += 1
                    total += dv + 1
                    count += 1
        sums[s] = total
        reach[s] = count
    return sums_arr, reach_arr


def pagerank_power(int[::1] in_indptr, int[::1] in_indices, int[::1] out_degree,
                   double damping, double tol, int max_iter):
    cdef int n = in_indptr.shape[0] - 1
    pr_arr = np.full(n, 1.0 / n, dtype=np.float64)
    cdef double[::1] pr = pr_arr
    new_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] new = new_arr
    inv_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] inv_out = inv_arr
    cdef int u, v, k, iterations
    cdef double dangling, base, err, acc
    cdef double[::1] tmp
    for u in range(n):
        inv_out[u] = 1.0 / out_degree[u] if out_degree[u] > 0 else 0.0
    iterations = 0
    for iterations in range(1, max_iter + 1):
        dangling = 0.0
        for u in range(n):
            if out_degree[u] == 0:
                dangling += pr[u]
        base = (1.0 - damping) / n + damping * dangling / n
        err = 0.0
        for v in range(n):
            acc = 0.0
            for k in range(in_indptr[v], in_indptr[v + 1]):
                u = in_indices[k]
                acc += pr[u] * inv_out[u]
            new[v] = base + damping * acc
            err += fabs(new[v] - pr[v])
        tmp = pr
        pr = new
        new = tmp
        pr_arr, new_arr = new_arr, pr_arr
        if err < tol:
            return np.asarray(pr).copy(), iterations, True
    return np.asarray(pr).copy(), iterations, False


def eigenvector_power(int[::1] in_indptr, int[::1] in_indices, double tol, int max_iter):
    cdef int n = in_indptr.shape[0] - 1
    x_arr = np.full(n, 1.0 / n, dtype=np.float64)
    cdef double[::1] x = x_arr
    new_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] new = new_arr
    cdef int v, k, it
    cdef double acc, norm, err
    cdef double[::1] tmp
    for it in range(max_iter):
        for v in range(n):
            acc = x[v]
            for k in range(in_indptr[v], in_indptr[v + 1]):
                acc += x[in_indices[k]]
            new[v] = acc
        norm = 0.0
        for v in range(n):
            norm += new[v] * new[v]
        norm = sqrt(norm)
        if norm == 0.0:
            norm = 1.0
        err = 0.0
        for v in range(n):
            new[v] /= norm
            err += fabs(new[v] - x[v])
        tmp = x
        x = new
        new = tmp
        if err < n * tol:
            return np.asarray(x).copy(), True
    return np.asarray(x).copy(), False


def louvain_pass(int[::1] indptr, int[::1] indices, double[::1] weights,
                 double[::1] strength, int[::1] comm, double[::1] comm_tot,
                 int[::1] order, double two_m, double resolution):
    cdef int n = indptr.shape[0] - 1
    neigh_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] neigh_w = neigh_arr
    mark_arr = np.full(n, -1, dtype=np.int32)
    cdef int[::1] mark = mark_arr
    touched_arr = np.zeros(n, dtype=np.int32)
    cdef int[::1] touched = touched_arr
    cdef int moves = 0
    cdef int step, u, cu, k, v, c, t_count, i, j, key, best_c
    cdef double ku, gain, best_gain
    for step in range(order.shape[0]):
        u = order[step]
        cu = comm[u]
        ku = strength[u]
        t_count = 0
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            c = comm[v]
            if mark[c] != step:
                mark[c] = step
                neigh_w[c] = 0.0
                touched[t_count] = c
                t_count += 1
            neigh_w[c] += weights[k]
        comm_tot[cu] -= ku
        if mark[cu] != step:
            mark[cu] = step
            neigh_w[cu] = 0.0
            touched[t_count] = cu
            t_count += 1
        # ascending insertion sort so equal gains resolve to the lowest id
        for i in range(1, t_count):
            key = touched[i]
            j = i - 1
            while j >= 0 and touched[j] > key:
                touched[j + 1] = touched[j]
                j -= 1
            touched[j + 1] = key
        best_c = -1
        best_gain = 0.0
        for i in range(t_count):
            c = touched[i]
            gain = neigh_w[c] - resolution * comm_tot[c] * ku / two_m
            if best_c < 0 or gain > best_gain:
                best_c = c
                best_gain = gain
        comm[u] = best_c
        comm_tot[best_c] += ku
        if best_c != cu:
            moves += 1
    return moves
