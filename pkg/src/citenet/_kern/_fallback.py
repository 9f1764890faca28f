"""Pure-Python graph kernels.

Mirror of the compiled module in ``_speedups.pyx``: every function keeps
the exact arithmetic order of its compiled twin so results are bit-equal
whichever backend is selected.  All kernels take CSR adjacency arrays
(indptr, indices[, weights]) with neighbor lists sorted by node index.
"""

from __future__ import annotations

import math

import numpy as np


def brandes_betweenness(indptr, indices):
    """Raw shortest-path betweenness summed over all ordered source pairs.

    Per-source contributions enter the totals through compensated (Kahan)
    accumulation so the summation order cannot perturb results beyond
    ~1e-16 per term.
    """
    indptr = indptr.tolist()
    indices = indices.tolist()
    n = len(indptr) - 1
    bt = [0.0] * n
    comp = [0.0] * n
    for s in range(n):
        order, preds, sigma = _sp_dag(indptr, indices, n, s)
        delta = [0.0] * n
        for w in reversed(order):
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                y = delta[w] - comp[w]
                t = bt[w] + y
                comp[w] = (t - bt[w]) - y
                bt[w] = t
    return np.array(bt, dtype=np.float64)


def brandes_edge_betweenness(indptr, indices):
    """Raw betweenness per CSR edge slot, summed over ordered source pairs."""
    indptr_l = indptr.tolist()
    indices_l = indices.tolist()
    n = len(indptr_l) - 1
    m = len(indices_l)
    ebt = [0.0] * m
    for s in range(n):
        order, preds, sigma = _sp_dag(indptr_l, indices_l, n, s, with_slots=True)
        delta = [0.0] * n
        for w in reversed(order):
            coeff = (1.0 + delta[w]) / sigma[w]
            for v, slot in preds[w]:
                c = sigma[v] * coeff
                ebt[slot] += c
                delta[v] += c
    return np.array(ebt, dtype=np.float64)


def _sp_dag(indptr, indices, n, s, with_slots=False):
    """BFS shortest-path DAG from s: visit order, predecessor lists, sigma."""
    preds = [[] for _ in range(n)]
    sigma = [0.0] * n
    dist = [-1] * n
    sigma[s] = 1.0
    dist[s] = 0
    queue = [s]
    head = 0
    while head < len(queue):
        v = queue[head]
        head += 1
        dv = dist[v]
        sv = sigma[v]
        for k in range(indptr[v], indptr[v + 1]):
            w = indices[k]
            if dist[w] < 0:
                dist[w] = dv + 1
                queue.append(w)
            if dist[w] == dv + 1:
                sigma[w] += sv
                preds[w].append((v, k) if with_slots else v)
    return queue, preds, sigma


def closeness_sums(indptr, indices):
    """Per-source BFS distance sums and reached-node counts (source excluded)."""
    indptr = indptr.tolist()
    indices = indices.tolist()
    n = len(indptr) - 1
    sums = np.zeros(n, dtype=np.float64)
    reach = np.zeros(n, dtype=np.int32)
    dist = [-1] * n
    queue = [0] * n
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
    return sums, reach


def pagerank_power(in_indptr, in_indices, out_degree, damping, tol, max_iter):
    """Power iteration with uniform redistribution of dangling mass.

    Returns (ranks, iterations, converged); converged when the L1 change
    of one step falls below tol.
    """
    in_indptr = in_indptr.tolist()
    in_indices = in_indices.tolist()
    out_degree = out_degree.tolist()
    n = len(in_indptr) - 1
    inv_out = [1.0 / d if d > 0 else 0.0 for d in out_degree]
    pr = [1.0 / n] * n
    new = [0.0] * n
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
            err += abs(new[v] - pr[v])
        pr, new = new, pr
        if err < tol:
            return np.array(pr, dtype=np.float64), iterations, True
    return np.array(pr, dtype=np.float64), iterations, False


def eigenvector_power(in_indptr, in_indices, tol, max_iter):
    """Power iteration for x = (A^T + I) x with L2 normalization.

    The identity shift damps period-2 oscillation on bipartite-like
    structure.  Converged when the L1 step change falls below n * tol.
    """
    in_indptr = in_indptr.tolist()
    in_indices = in_indices.tolist()
    n = len(in_indptr) - 1
    x = [1.0 / n] * n
    new = [0.0] * n
    for _ in range(max_iter):
        for v in range(n):
            acc = x[v]
            for k in range(in_indptr[v], in_indptr[v + 1]):
                acc += x[in_indices[k]]
            new[v] = acc
        norm = 0.0
        for v in range(n):
            norm += new[v] * new[v]
        norm = math.sqrt(norm)
        if norm == 0.0:
            norm = 1.0
        err = 0.0
        for v in range(n):
            new[v] /= norm
            err += abs(new[v] - x[v])
        x, new = new, x
        if err < n * tol:
            return np.array(x, dtype=np.float64), True
    return np.array(x, dtype=np.float64), False


def louvain_pass(indptr, indices, weights, strength, comm, comm_tot, order, two_m, resolution):
    """One full sweep of greedy modularity moves; mutates comm/comm_tot.

    Candidates for each node are its current community plus every
    neighboring community, evaluated in ascending community id so equal
    gains resolve to the lowest id.  Returns the number of moves.
    """
    indptr_l = indptr.tolist()
    indices_l = indices.tolist()
    weights_l = weights.tolist()
    strength_l = strength.tolist()
    n = len(indptr_l) - 1
    neigh_w = [0.0] * n
    mark = [-1] * n
    moves = 0
    for step in range(len(order)):
        u = int(order[step])
        cu = int(comm[u])
        ku = strength_l[u]
        touched = []
        for k in range(indptr_l[u], indptr_l[u + 1]):
            v = indices_l[k]
            c = int(comm[v])
            if mark[c] != step:
                mark[c] = step
                neigh_w[c] = 0.0
                touched.append(c)
            neigh_w[c] += weights_l[k]
        comm_tot[cu] -= ku
        if mark[cu] != step:
            mark[cu] = step
            neigh_w[cu] = 0.0
            touched.append(cu)
        touched.sort()
        best_c = -1
        best_gain = 0.0
        for c in touched:
            gain = neigh_w[c] - resolution * comm_tot[c] * ku / two_m
            if best_c < 0 or gain > best_gain:
                best_c = c
                best_gain = gain
        comm[u] = best_c
        comm_tot[best_c] += ku
        if best_c != cu:
            moves += 1
    return moves
