"""Node centrality metrics, CSV export and whole-graph statistics."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import _kern
from .errors import ConvergenceError, FieldError, MetricError
from .graphs import to_csr

DIRECTED_METRICS = (
    "degree",
    "in_degree",
    "out_degree",
    "betweenness_centrality",
    "closeness_centrality",
    "eigenvector_centrality",
    "page_rank",
)
UNDIRECTED_METRICS = (
    "degree",
    "weighted_degree",
    "betweenness_centrality",
    "closeness_centrality",
    "eigenvector_centrality",
    "page_rank",
)

#: eigenvector centrality degenerates on near-acyclic citation graphs, so it
#: is opt-in rather than part of the default report.
DEFAULT_STATISTICS_METRICS = {
    True: ["degree", "in_degree", "out_degree", "betweenness_centrality",
           "closeness_centrality", "page_rank"],
    False: ["degree", "betweenness_centrality", "closeness_centrality", "page_rank"],
}


@dataclass
class CentralityParams:
    damping: float = 0.85
    tolerance: float = 1e-9
    max_iterations: int = 1000

    def __post_init__(self):
        if not 0.0 < self.damping < 1.0:
            raise ValueError("damping must lie in (0, 1)")
        if self.tolerance <= 0.0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")


@dataclass
class CentralityReport:
    nodes: list
    values: dict = field(default_factory=dict)  # metric -> {node: value}

    def per_node(self, node) -> dict:
        return {metric: table[node] for metric, table in self.values.items()}


def valid_metrics(graph) -> tuple:
    return DIRECTED_METRICS if graph.directed else UNDIRECTED_METRICS


def _check_metrics(graph, metrics: list[str]) -> None:
    allowed = valid_metrics(graph)
    for metric in metrics:
        if metric in ("in_degree", "out_degree") and not graph.directed:
            raise MetricError(f"{metric} is not applicable to undirected graphs")
        if metric == "weighted_degree" and graph.directed:
            raise MetricError("weighted_degree is only defined for undirected graphs")
        if metric not in DIRECTED_METRICS and metric not in UNDIRECTED_METRICS:
            raise MetricError(f"unknown metric {metric!r}; valid: {sorted(set(allowed))}")


def compute_centralities(
    graph,
    metrics: Optional[list[str]] = None,
    params: Optional[CentralityParams] = None,
) -> CentralityReport:
    """Compute the requested metrics for every node.

    Shortest-path metrics treat co-authorship weights as hop counts (the
    weight is ignored); ``weighted_degree`` exposes the weighted variant
    separately.  Betweenness is normalized by (n-1)(n-2) on directed and
    (n-1)(n-2)/2 on undirected graphs; closeness uses incoming distances
    on directed graphs with reachable-set scaling, so disconnected graphs
    still yield informative values.
    """
    params = params or CentralityParams()
    if metrics is None:
        metrics = list(valid_metrics(graph))
    _check_metrics(graph, metrics)

    nodes = list(graph.nodes())
    n = len(nodes)
    report = CentralityReport(nodes=nodes, values={m: {} for m in metrics})
    if n == 0:
        return report

    out_csr = to_csr(graph, "out")
    in_csr = to_csr(graph, "in") if graph.directed else out_csr

    for metric in metrics:
        if metric == "degree":
            vals = [float(graph.degree(v)) for v in nodes]
        elif metric == "in_degree":
            vals = [float(graph.in_degree(v)) for v in nodes]
        elif metric == "out_degree":
            vals = [float(graph.out_degree(v)) for v in nodes]
        elif metric == "weighted_degree":
            vals = [
                float(sum(graph.edge_weight(v, u) for u in graph.neighbors(v)))
                for v in nodes
            ]
        elif metric == "betweenness_centrality":
            vals = _betweenness(graph, out_csr)
        elif metric == "closeness_centrality":
            vals = _closeness(graph, in_csr)
        elif metric == "eigenvector_centrality":
            vals = _eigenvector(graph, in_csr, params)
        elif metric == "page_rank":
            vals = _pagerank(graph, in_csr, out_csr, params)
        report.values[metric] = dict(zip(nodes, vals))
    return report


def _betweenness(graph, out_csr) -> list[float]:
    indptr, indices, _, nodes = out_csr
    n = len(nodes)
    if n < 3:
        return [0.0] * n
    raw = _kern.brandes_betweenness(indptr, indices)
    if not graph.directed:
        raw = raw / 2.0
        scale = (n - 1) * (n - 2) / 2.0
    else:
        scale = float((n - 1) * (n - 2))
    return [float(x / scale) for x in raw]


def _closeness(graph, in_csr) -> list[float]:
    indptr, indices, _, nodes = in_csr
    n = len(nodes)
    if n < 2:
        return [0.0] * n
    sums, reach = _kern.closeness_sums(indptr, indices)
    vals = []
    for i in range(n):
        r = float(reach[i])
        s = float(sums[i])
        if r == 0.0 or s == 0.0:
            vals.append(0.0)
        else:
            vals.append((r / (n - 1)) * (r / s))
    return vals


def _eigenvector(graph, in_csr, params: CentralityParams) -> list[float]:
    indptr, indices, _, nodes = in_csr
    n = len(nodes)
    if graph.number_of_edges() == 0:
        return [0.0] * n
    x, converged = _kern.eigenvector_power(
        indptr, indices, params.tolerance, params.max_iterations
    )
    if not converged:
        raise ConvergenceError(
            f"eigenvector centrality did not converge in {params.max_iterations} iterations"
        )
    return [float(v) for v in x]


def _pagerank(graph, in_csr, out_csr, params: CentralityParams) -> list[float]:
    in_indptr, in_indices, _, nodes = in_csr
    out_indptr = out_csr[0]
    n = len(nodes)
    out_degree = np.diff(out_indptr).astype(np.int32)
    pr, _, converged = _kern.pagerank_power(
        in_indptr,
        in_indices,
        out_degree,
        params.damping,
        params.tolerance,
        params.max_iterations,
    )
    if not converged:
        raise ConvergenceError(
            f"page rank did not converge in {params.max_iterations} iterations"
        )
    return [float(v) for v in pr]


# ---------------------------------------------------------------------------
# CSV export
# ---------------------------------------------------------------------------

def node_field_names(graph) -> list[str]:
    """Exportable field names: the node id plus every node attribute key."""
    keys: dict[str, None] = {"id": None}
    for node in graph.nodes():
        for key in graph.node_attrs(node):
            keys.setdefault(key, None)
    return list(keys)


def _node_field(graph, node, field_name: str):
    if field_name == "id":
        return node
    return graph.node_attrs(node).get(field_name, "")


def extract_metrics_to_csv(
    graph,
    metrics: list[str],
    fields: list[str],
    out_path: Path | str,
    params: Optional[CentralityParams] = None,
) -> int:
    """One row per node; columns are the fields followed by the metrics."""
    known = node_field_names(graph)
    unknown = [f for f in fields if f not in known]
    if unknown:
        raise FieldError(f"unknown node field(s) {unknown}; valid fields: {known}")
    report = compute_centralities(graph, metrics, params)
    out_path = Path(out_path)
    if out_path.parent != Path(""):
        out_path.parent.mkdir(parents=True, exist_ok=True)
    rows = 0
    with open(out_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(fields) + list(metrics))
        for node in report.nodes:
            row = [_node_field(graph, node, f) for f in fields]
            row += [report.values[m][node] for m in metrics]
            writer.writerow(row)
            rows += 1
    return rows


# ---------------------------------------------------------------------------
# graph statistics
# ---------------------------------------------------------------------------

@dataclass
class GraphStatistics:
    node_count: int
    edge_count: int
    density: float
    density_defined: bool
    summary: dict  # metric -> {min, max, mean, std}
    correlation: dict  # metric -> metric -> pearson r
    report: CentralityReport


def graph_statistics(
    graph,
    metrics: Optional[list[str]] = None,
    params: Optional[CentralityParams] = None,
) -> GraphStatistics:
    """Node/edge counts, density, per-metric summaries and correlations.

    Density is m/(n(n-1)) on directed and 2m/(n(n-1)) on undirected
    graphs; with fewer than two nodes it is reported as 0 and flagged
    undefined.  Correlations are Pearson coefficients over node-aligned
    metric vectors; a constant vector correlates 0 with everything but
    itself.
    """
    if metrics is None:
        metrics = list(DEFAULT_STATISTICS_METRICS[graph.directed])
    n = graph.number_of_nodes()
    m = graph.number_of_edges()
    if n < 2:
        density = 0.0
        density_defined = False
    else:
        density_defined = True
        density = m / (n * (n - 1)) if graph.directed else 2.0 * m / (n * (n - 1))

    report = compute_centralities(graph, metrics, params)
    summary = {}
    vectors = {}
    for metric in metrics:
        values = np.array([report.values[metric][v] for v in report.nodes], dtype=float)
        vectors[metric] = values
        if len(values):
            summary[metric] = {
                "min": float(values.min()),
                "max": float(values.max()),
                "mean": float(values.mean()),
                "std": float(values.std()),
            }
        else:
            summary[metric] = {"min": 0.0, "max": 0.0, "mean": 0.0, "std": 0.0}

    correlation: dict = {a: {} for a in metrics}
    for a in metrics:
        for b in metrics:
            if a == b:
                correlation[a][b] = 1.0
                continue
            va, vb = vectors[a], vectors[b]
            if len(va) < 2 or va.std() == 0.0 or vb.std() == 0.0:
                correlation[a][b] = 0.0
                continue
            correlation[a][b] = float(np.corrcoef(va, vb)[0, 1])

    return GraphStatistics(
        node_count=n,
        edge_count=m,
        density=density,
        density_defined=density_defined,
        summary=summary,
        correlation=correlation,
        report=report,
    )
