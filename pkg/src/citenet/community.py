"""Community detection: louvain, girvan_newman, infomap, spectral, sbm.

All algorithms run on an undirected view of the input: directed graphs are
symmetrized as the unweighted union of edge directions before clustering.
Every algorithm is deterministic for a fixed (graph, algorithm, seed, k)
and returns cluster ids renumbered 0..k-1 by descending cluster size.
"""

from __future__ import annotations

import csv
import math
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import _kern
from .centrality import node_field_names, _node_field
from .errors import ClusteringParameterError, ConvergenceError, FieldError
from .graphs import to_csr

ALGORITHMS = ("louvain", "girvan_newman", "infomap", "spectral", "sbm")

SBM_RESTARTS = 10
INFOMAP_TELEPORT = 0.15


@dataclass
class Clustering:
    assignment: dict  # node -> dense cluster id, largest cluster first
    algorithm: str
    seed: int
    quality: Optional[float] = None

    def cluster_count(self) -> int:
        return len(set(self.assignment.values())) if self.assignment else 0

    def members(self) -> dict:
        out: dict[int, list] = {}
        for node, cid in self.assignment.items():
            out.setdefault(cid, []).append(node)
        return out


def cluster_graph(graph, algorithm: str, seed: int = 0, k: Optional[int] = None) -> Clustering:
    """Partition the graph's nodes with the chosen algorithm.

    ``k`` is required by (and only accepted for) spectral clustering.
    """
    if algorithm not in ALGORITHMS:
        raise ClusteringParameterError(
            f"unknown algorithm {algorithm!r}; valid: {list(ALGORITHMS)}"
        )
    if graph.number_of_nodes() == 0:
        raise ClusteringParameterError("cannot cluster an empty graph")
    if algorithm == "spectral":
        if k is None:
            raise ClusteringParameterError("spectral clustering requires k")
        if k < 1 or k > graph.number_of_nodes():
            raise ClusteringParameterError(
                f"k={k} out of range for a {graph.number_of_nodes()}-node graph"
            )
    elif k is not None:
        raise ClusteringParameterError(f"{algorithm} does not take k")

    indptr, indices, weights, nodes = _undirected_csr(graph)
    n = len(nodes)

    if algorithm == "louvain":
        labels = _louvain(indptr, indices, weights, n, seed)
        quality = modularity(indptr, indices, weights, labels)
    elif algorithm == "girvan_newman":
        labels, quality = _girvan_newman(indptr, indices, weights, n)
    elif algorithm == "infomap":
        labels, quality = _infomap(indptr, indices, weights, n, seed)
    elif algorithm == "spectral":
        labels = _spectral(indptr, indices, weights, n, k, seed)
        quality = None
    else:
        labels, quality = _sbm(indptr, indices, n, seed)

    assignment = _relabel_by_size(labels, nodes)
    return Clustering(assignment=assignment, algorithm=algorithm, seed=seed, quality=quality)


def _undirected_csr(graph):
    if graph.directed:
        return to_csr(graph, "sym")
    return to_csr(graph, "out")


def _relabel_by_size(labels: list[int], nodes: list) -> dict:
    sizes: dict[int, int] = {}
    first_seen: dict[int, int] = {}
    for i, lab in enumerate(labels):
        sizes[lab] = sizes.get(lab, 0) + 1
        first_seen.setdefault(lab, i)
    ordered = sorted(sizes, key=lambda lab: (-sizes[lab], first_seen[lab]))
    mapping = {lab: new for new, lab in enumerate(ordered)}
    return {node: mapping[labels[i]] for i, node in enumerate(nodes)}


# ---------------------------------------------------------------------------
# modularity
# ---------------------------------------------------------------------------

def modularity(indptr, indices, weights, labels) -> float:
    """Newman-Girvan modularity of a labeling over an undirected CSR."""
    n = len(indptr) - 1
    strength = [0.0] * n
    two_m = 0.0
    for v in range(n):
        s = 0.0
        for k in range(indptr[v], indptr[v + 1]):
            s += weights[k]
        strength[v] = s
        two_m += s
    if two_m == 0.0:
        return 0.0
    intra = {}
    tot = {}
    for v in range(n):
        c = labels[v]
        tot[c] = tot.get(c, 0.0) + strength[v]
        for k in range(indptr[v], indptr[v + 1]):
            if labels[indices[k]] == c:
                intra[c] = intra.get(c, 0.0) + weights[k]
    q = 0.0
    for c in tot:
        q += intra.get(c, 0.0) / two_m - (tot[c] / two_m) ** 2
    return q


# ---------------------------------------------------------------------------
# louvain
# ---------------------------------------------------------------------------

def _louvain(indptr, indices, weights, n, seed) -> list[int]:
    rng = random.Random(seed)
    assignment = list(range(n))
    cur_indptr = np.asarray(indptr, dtype=np.int32)
    cur_indices = np.asarray(indices, dtype=np.int32)
    cur_weights = np.asarray(weights, dtype=np.float64)
    cur_self = np.zeros(n, dtype=np.float64)

    while True:
        nc = len(cur_indptr) - 1
        strength = np.zeros(nc, dtype=np.float64)
        for v in range(nc):
            strength[v] = cur_weights[cur_indptr[v] : cur_indptr[v + 1]].sum() + 2.0 * cur_self[v]
        two_m = float(strength.sum())
        if two_m == 0.0:
            break
        comm = np.arange(nc, dtype=np.int32)
        comm_tot = strength.copy()
        order = list(range(nc))
        rng.shuffle(order)
        order_arr = np.asarray(order, dtype=np.int32)
        total_moves = 0
        while True:
            moves = _kern.louvain_pass(
                cur_indptr, cur_indices, cur_weights, strength,
                comm, comm_tot, order_arr, two_m, 1.0,
            )
            total_moves += moves
            if moves == 0:
                break
        if total_moves == 0:
            break
        relabel: dict[int, int] = {}
        for v in range(nc):
            relabel.setdefault(int(comm[v]), len(relabel))
        n_new = len(relabel)
        if n_new == nc:
            break
        assignment = [relabel[int(comm[assignment[v]])] for v in range(n)]
        # coarsen: communities become nodes, intra weight moves to self-loops
        agg: list[dict[int, float]] = [dict() for _ in range(n_new)]
        new_self = np.zeros(n_new, dtype=np.float64)
        for v in range(nc):
            cv = relabel[int(comm[v])]
            new_self[cv] += cur_self[v]
            for kk in range(cur_indptr[v], cur_indptr[v + 1]):
                cu = relabel[int(comm[cur_indices[kk]])]
                w = cur_weights[kk]
                if cu == cv:
                    new_self[cv] += w / 2.0
                else:
                    agg[cv][cu] = agg[cv].get(cu, 0.0) + w
        ptr = np.zeros(n_new + 1, dtype=np.int32)
        for v in range(n_new):
            ptr[v + 1] = ptr[v] + len(agg[v])
        idx = np.zeros(int(ptr[-1]), dtype=np.int32)
        wts = np.zeros(int(ptr[-1]), dtype=np.float64)
        pos = 0
        for v in range(n_new):
            for u in sorted(agg[v]):
                idx[pos] = u
                wts[pos] = agg[v][u]
                pos += 1
        cur_indptr, cur_indices, cur_weights, cur_self = ptr, idx, wts, new_self
    return assignment


# ---------------------------------------------------------------------------
# girvan-newman
# ---------------------------------------------------------------------------

def _components(adj: list[set], n: int) -> list[int]:
    comp = [-1] * n
    cid = 0
    for s in range(n):
        if comp[s] >= 0:
            continue
        comp[s] = cid
        stack = [s]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if comp[u] < 0:
                    comp[u] = cid
                    stack.append(u)
        cid += 1
    return comp


def _girvan_newman(indptr, indices, weights, n):
    """Remove max-edge-betweenness edges; keep the max-modularity level."""
    adj: list[set] = [set() for _ in range(n)]
    for v in range(n):
        for k in range(indptr[v], indptr[v + 1]):
            adj[v].add(int(indices[k]))

    def current_csr():
        ptr = np.zeros(n + 1, dtype=np.int32)
        for v in range(n):
            ptr[v + 1] = ptr[v] + len(adj[v])
        idx = np.zeros(int(ptr[-1]), dtype=np.int32)
        pos = 0
        for v in range(n):
            for u in sorted(adj[v]):
                idx[pos] = u
                pos += 1
        return ptr, idx

    best_labels = _components(adj, n)
    best_q = modularity(indptr, indices, weights, best_labels)
    n_comp = max(best_labels) + 1 if n else 0

    while any(adj[v] for v in range(n)):
        ptr, idx = current_csr()
        ebt = _kern.brandes_edge_betweenness(ptr, idx)
        best_edge = None
        best_score = -1.0
        for v in range(n):
            for k in range(ptr[v], ptr[v + 1]):
                u = int(idx[k])
                if u <= v:
                    continue
                # combine both directed accumulations of the undirected edge
                score = float(ebt[k])
                ku = np.searchsorted(idx[ptr[u] : ptr[u + 1]], v) + ptr[u]
                score += float(ebt[ku])
                if score > best_score:
                    best_score = score
                    best_edge = (v, u)
        v, u = best_edge
        adj[v].discard(u)
        adj[u].discard(v)
        labels = _components(adj, n)
        if max(labels) + 1 > n_comp:
            n_comp = max(labels) + 1
            q = modularity(indptr, indices, weights, labels)
            if q > best_q:
                best_q = q
                best_labels = labels
    return best_labels, best_q


# ---------------------------------------------------------------------------
# infomap (two-level map equation)
# ---------------------------------------------------------------------------

def _plogp(x: float) -> float:
    return x * math.log2(x) if x > 0.0 else 0.0


def _visit_rates(indptr, indices, weights, n) -> list[float]:
    """Stationary visit rates under strength-proportional teleportation.

    On an undirected graph the strength distribution is the exact fixed
    point, so the iteration settles immediately; it is kept as an
    iteration for clarity about the teleportation model.
    """
    strength = [0.0] * n
    total = 0.0
    for v in range(n):
        s = 0.0
        for k in range(indptr[v], indptr[v + 1]):
            s += weights[k]
        strength[v] = s
        total += s
    if total == 0.0:
        return [0.0] * n
    teleport = [s / total for s in strength]
    p = teleport[:]
    for _ in range(100):
        new = [INFOMAP_TELEPORT * t for t in teleport]
        for v in range(n):
            if strength[v] == 0.0:
                continue
            share = (1.0 - INFOMAP_TELEPORT) * p[v] / strength[v]
            for k in range(indptr[v], indptr[v + 1]):
                new[indices[k]] += share * weights[k]
        err = sum(abs(new[v] - p[v]) for v in range(n))
        p = new
        if err < 1e-14:
            break
    return p


def _map_equation(q_mod: dict, p_mod: dict, sum_plogp_nodes: float) -> float:
    q_total = sum(q_mod.values())
    value = _plogp(q_total) - sum_plogp_nodes
    for m in q_mod:
        value -= 2.0 * _plogp(q_mod[m])
        value += _plogp(q_mod[m] + p_mod[m])
    return value


def _infomap(indptr, indices, weights, n, seed):
    rng = random.Random(seed)
    p = _visit_rates(indptr, indices, weights, n)
    total = 0.0
    for v in range(n):
        for k in range(indptr[v], indptr[v + 1]):
            total += weights[k]
    if total == 0.0:
        return list(range(n)), 0.0

    # link flow per CSR slot; self flow never leaves a module
    assignment = list(range(n))
    # coarsened state: nodes with visit rates and inter-node flows
    node_p = p[:]
    flows: list[dict[int, float]] = [dict() for _ in range(n)]
    for v in range(n):
        for k in range(indptr[v], indptr[v + 1]):
            u = int(indices[k])
            if u != v:
                flows[v][u] = flows[v].get(u, 0.0) + weights[k] / total

    sum_plogp_nodes = sum(_plogp(x) for x in p)

    while True:
        nc = len(node_p)
        module = list(range(nc))
        p_mod = {m: node_p[m] for m in range(nc)}
        q_mod = {m: sum(flows[m].values()) for m in range(nc)}

        def level_length():
            return _map_equation(q_mod, p_mod, sum_plogp_nodes)

        improved_any = False
        order = list(range(nc))
        rng.shuffle(order)
        while True:
            moves = 0
            for v in order:
                a = module[v]
                flow_to: dict[int, float] = {}
                f_total = 0.0
                for u, f in flows[v].items():
                    flow_to[module[u]] = flow_to.get(module[u], 0.0) + f
                    f_total += f
                candidates = sorted(set(flow_to) | {a})
                if len(candidates) == 1:
                    continue
                f_a = flow_to.get(a, 0.0)
                base_terms = (
                    -2.0 * _plogp(q_mod[a]) + _plogp(q_mod[a] + p_mod[a])
                )
                best_b = a
                best_delta = 0.0
                q_total = sum(q_mod.values())
                for b in candidates:
                    if b == a:
                        continue
                    f_b = flow_to.get(b, 0.0)
                    q_a_new = q_mod[a] - f_total + 2.0 * f_a
                    q_b_new = q_mod[b] + f_total - 2.0 * f_b
                    q_total_new = q_total - q_mod[a] - q_mod[b] + q_a_new + q_b_new
                    old = (
                        _plogp(q_total)
                        + base_terms
                        - 2.0 * _plogp(q_mod[b])
                        + _plogp(q_mod[b] + p_mod[b])
                    )
                    new = (
                        _plogp(q_total_new)
                        - 2.0 * _plogp(q_a_new)
                        + _plogp(q_a_new + p_mod[a] - node_p[v])
                        - 2.0 * _plogp(q_b_new)
                        + _plogp(q_b_new + p_mod[b] + node_p[v])
                    )
                    delta = new - old
                    if delta < best_delta - 1e-12:
                        best_delta = delta
                        best_b = b
                if best_b != a:
                    f_b = flow_to.get(best_b, 0.0)
                    q_mod[a] = q_mod[a] - f_total + 2.0 * f_a
                    q_mod[best_b] = q_mod[best_b] + f_total - 2.0 * f_b
                    p_mod[a] -= node_p[v]
                    p_mod[best_b] += node_p[v]
                    module[v] = best_b
                    moves += 1
            if moves == 0:
                break
            improved_any = True
        if not improved_any:
            return assignment, level_length()

        relabel: dict[int, int] = {}
        for v in range(nc):
            relabel.setdefault(module[v], len(relabel))
        n_new = len(relabel)
        if n_new == nc:
            return assignment, level_length()
        assignment = [relabel[module[assignment[v]]] for v in range(n)]
        new_p = [0.0] * n_new
        new_flows: list[dict[int, float]] = [dict() for _ in range(n_new)]
        for v in range(nc):
            cv = relabel[module[v]]
            new_p[cv] += node_p[v]
            for u, f in flows[v].items():
                cu = relabel[module[u]]
                if cu != cv:
                    new_flows[cv][cu] = new_flows[cv].get(cu, 0.0) + f
        node_p = new_p
        flows = new_flows


# ---------------------------------------------------------------------------
# spectral
# ---------------------------------------------------------------------------

def _kmeans(points: np.ndarray, k: int, seed: int, iters: int = 300) -> list[int]:
    """Seeded k-means++ with Lloyd refinement."""
    rng = np.random.RandomState(seed)
    n = len(points)
    centers = np.empty((k, points.shape[1]))
    first = int(rng.randint(n))
    centers[0] = points[first]
    dist2 = ((points - centers[0]) ** 2).sum(axis=1)
    for c in range(1, k):
        total = float(dist2.sum())
        if total == 0.0:
            centers[c] = points[int(rng.randint(n))]
        else:
            target = rng.rand() * total
            idx = int(np.searchsorted(np.cumsum(dist2), target))
            idx = min(idx, n - 1)
            centers[c] = points[idx]
        dist2 = np.minimum(dist2, ((points - centers[c]) ** 2).sum(axis=1))
    labels = np.zeros(n, dtype=int)
    for _ in range(iters):
        d = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new_labels = d.argmin(axis=1)
        for c in range(k):
            mask = new_labels == c
            if mask.any():
                centers[c] = points[mask].mean(axis=0)
            else:
                # re-seed an empty cluster with the farthest point
                far = int(d.min(axis=1).argmax())
                centers[c] = points[far]
                new_labels[far] = c
        if (new_labels == labels).all():
            break
        labels = new_labels
    return [int(x) for x in labels]


def _spectral(indptr, indices, weights, n, k, seed) -> list[int]:
    W = np.zeros((n, n), dtype=np.float64)
    for v in range(n):
        for kk in range(indptr[v], indptr[v + 1]):
            W[v, int(indices[kk])] = weights[kk]
    d = W.sum(axis=1)
    inv_sqrt = np.zeros(n)
    nz = d > 0
    inv_sqrt[nz] = 1.0 / np.sqrt(d[nz])
    lap = np.eye(n) - (inv_sqrt[:, None] * W) * inv_sqrt[None, :]
    try:
        _, vecs = np.linalg.eigh(lap)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"laplacian eigendecomposition failed: {exc}") from exc
    emb = vecs[:, :k]
    norms = np.sqrt((emb ** 2).sum(axis=1))
    norms[norms == 0.0] = 1.0
    emb = emb / norms[:, None]
    return _kmeans(emb, k, seed)


# ---------------------------------------------------------------------------
# stochastic block model
# ---------------------------------------------------------------------------

def _bernoulli_ll(edges: float, pairs: float) -> float:
    if pairs <= 0.0:
        return 0.0
    p = edges / pairs
    ll = 0.0
    if edges > 0.0:
        ll += edges * math.log(p)
    if pairs - edges > 0.0:
        ll += (pairs - edges) * math.log(1.0 - p)
    return ll


def _sbm_penalty(n: int, n_blocks: int, n_pairs: float) -> float:
    """Description-length cost of a fit with the given block count: label
    assignment bits plus a BIC-style half-log cost per block-pair density."""
    label_cost = n * math.log(n_blocks) if n_blocks > 1 else 0.0
    param_cost = 0.25 * n_blocks * (n_blocks + 1) * math.log(max(n_pairs, 2.0))
    return label_cost + param_cost


def _sbm(indptr, indices, n, seed):
    """Agglomerative Bernoulli block-model fit minimizing description
    length (negative log-likelihood plus model cost), best of several
    restarts.  Restart 0 breaks ties canonically (smallest block pair);
    the others use seeded random tie orders.  Only connected block pairs
    are merge candidates."""
    edges = []
    for v in range(n):
        for k in range(indptr[v], indptr[v + 1]):
            u = int(indices[k])
            if u > v:
                edges.append((v, u))
    n_pairs = n * (n - 1) / 2.0

    best_labels = None
    best_ll = 0.0
    best_score = -math.inf
    for restart in range(SBM_RESTARTS):
        rng = None if restart == 0 else random.Random(seed * 7919 + restart)
        labels, ll = _sbm_once(edges, n, rng, n_pairs)
        n_blocks = len(set(labels))
        score = ll - _sbm_penalty(n, n_blocks, n_pairs)
        if score > best_score:
            best_score = score
            best_labels = labels
            best_ll = ll
    return best_labels, best_ll


def _sbm_once(edges, n, rng, n_pairs):
    block = list(range(n))
    size = {b: 1 for b in range(n)}
    n_blocks = n
    # inter-block edge counts keyed (min, max); diagonal key (b, b)
    ecount: dict[tuple[int, int], float] = {}
    nbrs: dict[int, set] = {b: set() for b in range(n)}
    for v, u in edges:
        key = (min(v, u), max(v, u))
        ecount[key] = ecount.get(key, 0.0) + 1.0
        nbrs[v].add(u)
        nbrs[u].add(v)

    def pairs(r, s):
        if r == s:
            return size[r] * (size[r] - 1) / 2.0
        return float(size[r] * size[s])

    def ec(r, s):
        return ecount.get((min(r, s), max(r, s)), 0.0)

    def merge_delta(r, s):
        affected = (nbrs[r] | nbrs[s]) - {r, s}
        before = (
            _bernoulli_ll(ec(r, r), pairs(r, r))
            + _bernoulli_ll(ec(s, s), pairs(s, s))
            + _bernoulli_ll(ec(r, s), pairs(r, s))
        )
        after_diag_edges = ec(r, r) + ec(s, s) + ec(r, s)
        merged = size[r] + size[s]
        after = _bernoulli_ll(after_diag_edges, merged * (merged - 1) / 2.0)
        for x in affected:
            before += _bernoulli_ll(ec(r, x), pairs(r, x))
            before += _bernoulli_ll(ec(s, x), pairs(s, x))
            after += _bernoulli_ll(ec(r, x) + ec(s, x), float(merged * size[x]))
        return after - before

    while n_blocks > 1:
        candidates = set()
        for b in nbrs:
            for c in nbrs[b]:
                if b < c:
                    candidates.add((b, c))
        if not candidates:
            break
        scored = []
        for i, (r, s) in enumerate(sorted(candidates)):
            tie = rng.random() if rng is not None else -float(i)
            scored.append((merge_delta(r, s), tie, (r, s)))
        delta, _, (r, s) = max(scored, key=lambda t: (t[0], t[1]))
        # a merge is worth it while the likelihood loss stays below the
        # description-length saving of dropping one block
        saving = _sbm_penalty(n, n_blocks, n_pairs) - _sbm_penalty(n, n_blocks - 1, n_pairs)
        if delta < -saving - 1e-12:
            break
        # fold block s into r
        for x in list(nbrs[s]):
            if x == r:
                continue
            moved = ecount.pop((min(s, x), max(s, x)), 0.0)
            if moved:
                key = (min(r, x), max(r, x))
                ecount[key] = ecount.get(key, 0.0) + moved
            nbrs[x].discard(s)
            nbrs[x].add(r)
            nbrs[r].add(x)
        rs = ecount.pop((min(r, s), max(r, s)), 0.0)
        ss = ecount.pop((s, s), 0.0)
        if rs or ss:
            ecount[(r, r)] = ecount.get((r, r), 0.0) + rs + ss
        nbrs[r].discard(s)
        del nbrs[s]
        size[r] += size.pop(s)
        n_blocks -= 1
        for v in range(n):
            if block[v] == s:
                block[v] = r

    ll = 0.0
    done = set()
    blocks = sorted(size)
    for i, r in enumerate(blocks):
        ll += _bernoulli_ll(ecount.get((r, r), 0.0), size[r] * (size[r] - 1) / 2.0)
        for s in blocks[i + 1 :]:
            ll += _bernoulli_ll(
                ecount.get((min(r, s), max(r, s)), 0.0), float(size[r] * size[s])
            )
    return block, ll


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------

def extract_clusters_to_csv(
    clustering: Clustering,
    graph,
    fields: list[str],
    out_path: Path | str,
) -> int:
    """One row per node; columns are the fields plus a final cluster id."""
    known = node_field_names(graph)
    unknown = [f for f in fields if f not in known]
    if unknown:
        raise FieldError(f"unknown node field(s) {unknown}; valid fields: {known}")
    out_path = Path(out_path)
    if out_path.parent != Path(""):
        out_path.parent.mkdir(parents=True, exist_ok=True)
    rows = 0
    with open(out_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(fields) + ["cluster"])
        for node in graph.nodes():
            row = [_node_field(graph, node, f) for f in fields]
            row.append(clustering.assignment[node])
            writer.writerow(row)
            rows += 1
    return rows
