"""Static SVG renderers for trends, rankings, statistics and clusters.

All renderers are pure functions of their inputs: identical data and style
produce byte-identical files (the cluster layout uses a fixed iteration
count and a seeded generator).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .analytics import TimeSeries
from .centrality import GraphStatistics
from .community import Clustering
from .svg import SvgDoc, fmt

TAB10 = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
]

MARGIN_LEFT = 70
MARGIN_RIGHT = 30
MARGIN_TOP = 40
MARGIN_BOTTOM = 70


@dataclass
class ChartStyle:
    palette: list[str] = field(default_factory=lambda: list(TAB10))
    image_size: tuple[int, int] = (800, 600)
    num_ticks: int = 10
    font_size: int = 12
    legend_font_size: int = 12
    node_font_size: int = 12
    min_node_radius: float = 20.0
    max_node_radius: float = 60.0
    pie_thickness_ratio: float = 0.2
    min_edge_width: float = 1.0
    max_edge_width: float = 8.0
    edge_color: str = "#999999"
    background: str = "#ffffff"

    def __post_init__(self):
        if not self.palette:
            raise ValueError("palette must not be empty")
        if self.min_node_radius > self.max_node_radius:
            raise ValueError("min_node_radius exceeds max_node_radius")

    def color(self, i: int) -> str:
        return self.palette[i % len(self.palette)]


@dataclass
class _Frame:
    """Plot area with linear y scaling; exposes itself as data-* attributes
    so consumers can invert the geometry."""

    doc: SvgDoc
    x0: float
    y0: float
    width: float
    height: float
    ymax: float

    def y(self, value: float) -> float:
        if self.ymax <= 0:
            return self.y0
        return self.y0 - (value / self.ymax) * self.height

    def annotate(self, **extra) -> None:
        self.doc.element(
            "g",
            **{
                "class": "plot",
                "data_x0": fmt(self.x0),
                "data_y0": fmt(self.y0),
                "data_width": fmt(self.width),
                "data_height": fmt(self.height),
                "data_ymax": fmt(self.ymax),
                **extra,
            },
        )


def _new_doc(style: ChartStyle, title: str) -> SvgDoc:
    width, height = style.image_size
    doc = SvgDoc(width, height, style.background)
    doc.text(width / 2, MARGIN_TOP / 2 + 4, title, size=style.font_size + 2, anchor="middle")
    return doc


def _frame(doc: SvgDoc, style: ChartStyle, ymax: float) -> _Frame:
    x0 = MARGIN_LEFT
    y0 = doc.height - MARGIN_BOTTOM
    width = doc.width - MARGIN_LEFT - MARGIN_RIGHT
    height = doc.height - MARGIN_TOP - MARGIN_BOTTOM
    frame = _Frame(doc, x0, y0, width, height, ymax)
    frame.annotate()
    doc.line(x0, y0, x0 + width, y0, stroke="#000000")
    doc.line(x0, y0, x0, y0 - height, stroke="#000000")
    return frame


def _y_ticks(frame: _Frame, style: ChartStyle) -> None:
    if frame.ymax <= 0:
        return
    ticks = min(style.num_ticks, max(1, int(frame.ymax)))
    step = frame.ymax / ticks
    for i in range(ticks + 1):
        value = step * i
        y = frame.y(value)
        frame.doc.line(frame.x0 - 4, y, frame.x0, y, stroke="#000000")
        label = f"{value:.0f}" if frame.ymax >= 10 else f"{value:.1f}"
        frame.doc.text(frame.x0 - 8, y + 4, label, size=style.font_size - 2, anchor="end")


def _x_labels(frame: _Frame, style: ChartStyle, labels: list[str], centers: list[float]) -> None:
    if not labels:
        return
    stride = max(1, math.ceil(len(labels) / style.num_ticks))
    for i, (label, cx) in enumerate(zip(labels, centers)):
        if i % stride:
            continue
        frame.doc.text(cx, frame.y0 + 16, label, size=style.font_size - 2, anchor="middle")


def _legend(doc: SvgDoc, style: ChartStyle, names: list[str]) -> None:
    x = MARGIN_LEFT
    y = doc.height - MARGIN_BOTTOM + 34
    for i, name in enumerate(names):
        doc.rect(x, y - 9, 10, 10, fill=style.color(i), **{"class": "legend-swatch"})
        doc.text(x + 14, y, name, size=style.legend_font_size - 1)
        x += 14 + 7 * max(4, len(name)) + 14
        if x > doc.width - 120:
            x = MARGIN_LEFT
            y += 16


def _placeholder(style: ChartStyle, title: str, out_path: Path | str) -> None:
    doc = _new_doc(style, title)
    doc.text(
        doc.width / 2, doc.height / 2, "no data",
        size=style.font_size + 6, anchor="middle", fill="#888888",
    )
    doc.write(out_path)


# ---------------------------------------------------------------------------
# trends
# ---------------------------------------------------------------------------

def render_article_trends(
    series: TimeSeries, style: Optional[ChartStyle] = None, out_path: Path | str = "article_trends.svg"
) -> None:
    """Stacked area chart of root and base counts per period."""
    style = style or ChartStyle()
    if not series.points:
        _placeholder(style, "Articles over time", out_path)
        return
    doc = _new_doc(style, "Articles over time")
    labels = [label for label, _ in series.points]
    stacked_max = max(c.get("root", 0) + c.get("base", 0) for _, c in series.points)
    frame = _frame(doc, style, float(max(stacked_max, 1)))
    n = len(labels)
    xs = [
        frame.x0 + (frame.width * (i / (n - 1)) if n > 1 else frame.width / 2)
        for i in range(n)
    ]
    base_line = [0.0] * n
    for si, name in enumerate(("root", "base")):
        tops = [base_line[i] + series.points[i][1].get(name, 0) for i in range(n)]
        d = [f"M {fmt(xs[0])} {fmt(frame.y(base_line[0]))}"]
        for i in range(n):
            d.append(f"L {fmt(xs[i])} {fmt(frame.y(tops[i]))}")
        for i in range(n - 1, -1, -1):
            d.append(f"L {fmt(xs[i])} {fmt(frame.y(base_line[i]))}")
        d.append("Z")
        doc.path(
            " ".join(d), fill=style.color(si), stroke="none",
            **{"class": "area", "data_series": name},
        )
        base_line = tops
    _y_ticks(frame, style)
    _x_labels(frame, style, labels, xs)
    _legend(doc, style, ["root", "base"])
    doc.write(out_path)


def _stacked_bars(
    doc: SvgDoc,
    style: ChartStyle,
    frame: _Frame,
    labels: list[str],
    names: list[str],
    values: list[dict],
) -> list[float]:
    n = len(labels)
    slot = frame.width / n
    bar_w = slot * 0.7
    centers = []
    for i in range(n):
        x = frame.x0 + slot * i + (slot - bar_w) / 2
        centers.append(x + bar_w / 2)
        acc = 0.0
        for si, name in enumerate(names):
            v = values[i].get(name, 0)
            if v <= 0:
                acc += v
                continue
            y_top = frame.y(acc + v)
            h = frame.y(acc) - y_top
            doc.rect(
                x, y_top, bar_w, h, fill=style.color(si),
                **{"class": "seg", "data_series": name, "data_value": str(v)},
            )
            acc += v
    return centers


def render_topic_trends(
    series: TimeSeries, style: Optional[ChartStyle] = None, out_path: Path | str = "topic_trends.svg"
) -> None:
    """Stacked bar chart: one bar per period, one segment per topic."""
    style = style or ChartStyle()
    if not series.points:
        _placeholder(style, "Topics over time", out_path)
        return
    doc = _new_doc(style, "Topics over time")
    names = series.series_names()
    stacked_max = max(sum(c.values()) for _, c in series.points)
    frame = _frame(doc, style, float(max(stacked_max, 1)))
    labels = [label for label, _ in series.points]
    centers = _stacked_bars(doc, style, frame, labels, names, [c for _, c in series.points])
    _y_ticks(frame, style)
    _x_labels(frame, style, labels, centers)
    _legend(doc, style, names)
    doc.write(out_path)


def render_top_authors(
    ranking, style: Optional[ChartStyle] = None, out_path: Path | str = "top_authors.svg"
) -> None:
    """Horizontal stacked bars, one per author, segmented by topic."""
    style = style or ChartStyle()
    if not ranking:
        _placeholder(style, "Top authors", out_path)
        return
    doc = _new_doc(style, "Top authors")
    topics: dict[str, None] = {}
    for entry in ranking:
        for t in entry.by_topic:
            topics.setdefault(t, None)
    names = list(topics)
    vmax = max(entry.total for entry in ranking)
    x0 = MARGIN_LEFT + 110
    width = doc.width - x0 - MARGIN_RIGHT
    y = MARGIN_TOP + 10
    row_h = min(34.0, (doc.height - MARGIN_TOP - MARGIN_BOTTOM) / len(ranking))
    bar_h = row_h * 0.7
    doc.element(
        "g",
        **{
            "class": "plot", "data_x0": fmt(x0), "data_width": fmt(width),
            "data_vmax": fmt(float(vmax)),
        },
    )
    for entry in ranking:
        label = entry.display_name or entry.author_id
        doc.text(x0 - 8, y + bar_h * 0.75, label[:20], size=style.font_size - 2, anchor="end")
        acc = 0.0
        for si, name in enumerate(names):
            v = entry.by_topic.get(name, 0)
            if v <= 0:
                continue
            w = width * (v / vmax) if vmax else 0.0
            doc.rect(
                x0 + width * (acc / vmax), y, w, bar_h, fill=style.color(si),
                **{"class": "seg", "data_series": name, "data_value": str(v)},
            )
            acc += v
        y += row_h
    _legend(doc, style, names)
    doc.write(out_path)


def render_keyword_bars(
    scores, style: Optional[ChartStyle] = None, out_path: Path | str = "keywords.svg"
) -> None:
    """Horizontal bars of keyword counts in the given (descending) order."""
    style = style or ChartStyle()
    if not scores:
        _placeholder(style, "Top keywords", out_path)
        return
    doc = _new_doc(style, "Top keywords")
    vmax = max(s.count for s in scores)
    x0 = MARGIN_LEFT + 110
    width = doc.width - x0 - MARGIN_RIGHT
    row_h = min(34.0, (doc.height - MARGIN_TOP - MARGIN_BOTTOM) / len(scores))
    bar_h = row_h * 0.7
    y = MARGIN_TOP + 10
    doc.element(
        "g",
        **{
            "class": "plot", "data_x0": fmt(x0), "data_width": fmt(width),
            "data_vmax": fmt(float(vmax)),
        },
    )
    for score in scores:
        doc.text(x0 - 8, y + bar_h * 0.75, score.ngram[:20], size=style.font_size - 2, anchor="end")
        w = width * (score.count / vmax) if vmax else 0.0
        doc.rect(
            x0, y, w, bar_h, fill=style.color(0),
            **{"class": "bar", "data_value": str(score.count)},
        )
        doc.text(x0 + w + 4, y + bar_h * 0.75, str(score.count), size=style.font_size - 2)
        y += row_h
    doc.write(out_path)


def render_keyword_trends(
    series: TimeSeries, style: Optional[ChartStyle] = None, out_path: Path | str = "keyword_trends.svg"
) -> None:
    """Line chart, one polyline per keyword."""
    style = style or ChartStyle()
    if not series.points:
        _placeholder(style, "Keyword trends", out_path)
        return
    doc = _new_doc(style, "Keyword trends")
    names = series.series_names()
    vmax = max(
        (counts.get(n, 0) for _, counts in series.points for n in names), default=0
    )
    frame = _frame(doc, style, float(max(vmax, 1)))
    labels = [label for label, _ in series.points]
    n = len(labels)
    xs = [
        frame.x0 + (frame.width * (i / (n - 1)) if n > 1 else frame.width / 2)
        for i in range(n)
    ]
    for si, name in enumerate(names):
        points = [
            (xs[i], frame.y(series.points[i][1].get(name, 0))) for i in range(n)
        ]
        doc.polyline(
            points, stroke=style.color(si),
            **{"class": "line", "data_series": name},
        )
    _y_ticks(frame, style)
    _x_labels(frame, style, labels, xs)
    _legend(doc, style, names)
    doc.write(out_path)


# ---------------------------------------------------------------------------
# graph statistics
# ---------------------------------------------------------------------------

def _heat_color(r: float) -> str:
    """Blue (-1) through white (0) to red (+1)."""
    r = max(-1.0, min(1.0, r))
    if r >= 0:
        other = int(round(255 * (1.0 - r)))
        return f"#ff{other:02x}{other:02x}"
    other = int(round(255 * (1.0 + r)))
    return f"#{other:02x}{other:02x}ff"


def render_graph_statistics(
    stats: GraphStatistics,
    style: Optional[ChartStyle] = None,
    out_dir: Path | str = "statistics",
) -> list[Path]:
    """Emit one histogram per metric plus a heatmap and a summary table."""
    style = style or ChartStyle()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    metrics = list(stats.summary)

    for metric in metrics:
        values = [stats.report.values[metric][v] for v in stats.report.nodes]
        path = out_dir / f"histogram_{metric}.svg"
        _render_histogram(metric, values, style, path)
        written.append(path)

    heat = out_dir / "correlation_heatmap.svg"
    _render_heatmap(metrics, stats.correlation, style, heat)
    written.append(heat)

    table = out_dir / "summary_table.svg"
    _render_summary_table(stats, style, table)
    written.append(table)
    return written


def _render_histogram(metric: str, values: list[float], style: ChartStyle, out_path: Path) -> None:
    if not values:
        _placeholder(style, f"Distribution of {metric}", out_path)
        return
    doc = _new_doc(style, f"Distribution of {metric}")
    lo, hi = min(values), max(values)
    bins = 10
    counts = [0] * bins
    if hi == lo:
        counts[0] = len(values)
    else:
        span = hi - lo
        for v in values:
            idx = min(int((v - lo) / span * bins), bins - 1)
            counts[idx] += 1
    frame = _frame(doc, style, float(max(max(counts), 1)))
    slot = frame.width / bins
    for i, count in enumerate(counts):
        if count <= 0:
            continue
        x = frame.x0 + slot * i + slot * 0.1
        y = frame.y(count)
        doc.rect(
            x, y, slot * 0.8, frame.y0 - y, fill=style.color(0),
            **{"class": "bin", "data_value": str(count)},
        )
    _y_ticks(frame, style)
    doc.text(frame.x0, frame.y0 + 20, f"{lo:.4g}", size=style.font_size - 2)
    doc.text(
        frame.x0 + frame.width, frame.y0 + 20, f"{hi:.4g}",
        size=style.font_size - 2, anchor="end",
    )
    doc.write(out_path)


def _render_heatmap(metrics: list[str], correlation: dict, style: ChartStyle, out_path: Path) -> None:
    doc = _new_doc(style, "Metric correlation")
    n = max(len(metrics), 1)
    x0 = MARGIN_LEFT + 90
    y0 = MARGIN_TOP + 20
    size = min(doc.width - x0 - MARGIN_RIGHT, doc.height - y0 - MARGIN_BOTTOM)
    cell = size / n
    for i, a in enumerate(metrics):
        doc.text(
            x0 - 6, y0 + cell * i + cell * 0.6, a,
            size=style.font_size - 2, anchor="end",
        )
        for j, b in enumerate(metrics):
            r = correlation[a][b]
            doc.rect(
                x0 + cell * j, y0 + cell * i, cell - 1, cell - 1,
                fill=_heat_color(r),
                **{"class": "cell", "data_row": a, "data_col": b, "data_value": f"{r:.4f}"},
            )
            doc.text(
                x0 + cell * j + cell / 2, y0 + cell * i + cell * 0.6,
                f"{r:.2f}", size=style.font_size - 3, anchor="middle",
            )
    for j, b in enumerate(metrics):
        doc.text(
            x0 + cell * j + cell / 2, y0 + size + 14, b[:12],
            size=style.font_size - 3, anchor="middle",
        )
    doc.write(out_path)


def _render_summary_table(stats: GraphStatistics, style: ChartStyle, out_path: Path) -> None:
    doc = _new_doc(style, "Graph statistics")
    y = MARGIN_TOP + 24
    density = fmt(stats.density) if stats.density_defined else "undefined"
    rows = [
        ("nodes", str(stats.node_count)),
        ("edges", str(stats.edge_count)),
        ("density", density),
    ]
    for name, value in rows:
        doc.text(MARGIN_LEFT, y, name, size=style.font_size)
        doc.text(MARGIN_LEFT + 180, y, value, size=style.font_size, **{"class": "stat", "data_name": name})
        y += 20
    y += 10
    header = ["metric", "min", "max", "mean", "std"]
    xcols = [MARGIN_LEFT, MARGIN_LEFT + 220, MARGIN_LEFT + 340, MARGIN_LEFT + 460, MARGIN_LEFT + 580]
    for x, h in zip(xcols, header):
        doc.text(x, y, h, size=style.font_size)
    y += 20
    for metric, summ in stats.summary.items():
        cells = [metric] + [f"{summ[k]:.6g}" for k in ("min", "max", "mean", "std")]
        for x, c in zip(xcols, cells):
            doc.text(x, y, c, size=style.font_size - 1)
        y += 18
    doc.write(out_path)


# ---------------------------------------------------------------------------
# clustered graph
# ---------------------------------------------------------------------------

def _force_layout(n: int, edges: list[tuple[int, int, float]], seed: int, iterations: int = 50):
    """Seeded Fruchterman-Reingold on the unit square."""
    rng = random.Random(seed)
    pos = [(rng.random(), rng.random()) for _ in range(n)]
    if n == 1:
        return [(0.5, 0.5)]
    k = math.sqrt(1.0 / n)
    t = 0.1
    for step in range(iterations):
        disp = [[0.0, 0.0] for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                dx = pos[i][0] - pos[j][0]
                dy = pos[i][1] - pos[j][1]
                dist = math.sqrt(dx * dx + dy * dy) or 1e-9
                f = k * k / dist
                disp[i][0] += dx / dist * f
                disp[i][1] += dy / dist * f
                disp[j][0] -= dx / dist * f
                disp[j][1] -= dy / dist * f
        for i, j, _ in edges:
            dx = pos[i][0] - pos[j][0]
            dy = pos[i][1] - pos[j][1]
            dist = math.sqrt(dx * dx + dy * dy) or 1e-9
            f = dist * dist / k
            disp[i][0] -= dx / dist * f
            disp[i][1] -= dy / dist * f
            disp[j][0] += dx / dist * f
            disp[j][1] += dy / dist * f
        for i in range(n):
            dx, dy = disp[i]
            d = math.sqrt(dx * dx + dy * dy) or 1e-9
            step_len = min(d, t)
            x = min(1.0, max(0.0, pos[i][0] + dx / d * step_len))
            y = min(1.0, max(0.0, pos[i][1] + dy / d * step_len))
            pos[i] = (x, y)
        t *= 0.95
    return pos


def _annulus_segment(cx, cy, r_in, r_out, a0, a1) -> str:
    """Path for a ring segment between angles a0 and a1 (radians)."""
    large = 1 if (a1 - a0) > math.pi else 0
    x0o, y0o = cx + r_out * math.cos(a0), cy + r_out * math.sin(a0)
    x1o, y1o = cx + r_out * math.cos(a1), cy + r_out * math.sin(a1)
    x1i, y1i = cx + r_in * math.cos(a1), cy + r_in * math.sin(a1)
    x0i, y0i = cx + r_in * math.cos(a0), cy + r_in * math.sin(a0)
    return (
        f"M {fmt(x0o)} {fmt(y0o)} "
        f"A {fmt(r_out)} {fmt(r_out)} 0 {large} 1 {fmt(x1o)} {fmt(y1o)} "
        f"L {fmt(x1i)} {fmt(y1i)} "
        f"A {fmt(r_in)} {fmt(r_in)} 0 {large} 0 {fmt(x0i)} {fmt(y0i)} Z"
    )


def _node_entity(graph, node, entity: str, topics_level: str) -> str:
    attrs = graph.node_attrs(node)
    if entity == "countries":
        return attrs.get("country", "") or ""
    return attrs.get(f"topics_{topics_level}", "") or ""


def render_clustered_graph(
    graph,
    clustering: Clustering,
    n_clusters: int = 5,
    m_entries: int = 5,
    entity: str = "topics",
    style: Optional[ChartStyle] = None,
    out_path: Path | str = "clustered_graph.svg",
    topics_level: str = "field",
) -> None:
    """Top clusters as super-nodes ringed by entity-share pie segments.

    ``entity`` is "topics" (at ``topics_level``) for citation graphs or
    "countries" for co-authorship graphs.  Inter-cluster edges are
    width-scaled by their cross-edge count.
    """
    style = style or ChartStyle()
    if entity not in ("topics", "countries"):
        raise ValueError("entity must be 'topics' or 'countries'")
    members = clustering.members()
    if not members:
        _placeholder(style, "Clusters", out_path)
        return
    order = sorted(members, key=lambda c: (-len(members[c]), c))[:n_clusters]
    shown = {c: i for i, c in enumerate(order)}

    # cross-edge counts between the shown clusters
    cross: dict[tuple[int, int], int] = {}
    for u, v, _ in graph.edges():
        cu, cv = clustering.assignment[u], clustering.assignment[v]
        if cu == cv or cu not in shown or cv not in shown:
            continue
        key = (min(shown[cu], shown[cv]), max(shown[cu], shown[cv]))
        cross[key] = cross.get(key, 0) + 1

    layout_edges = [(a, b, float(w)) for (a, b), w in sorted(cross.items())]
    pos = _force_layout(len(order), layout_edges, seed=clustering.seed)

    doc = _new_doc(style, "Cluster map")
    pad = style.max_node_radius * (1.0 + style.pie_thickness_ratio) + 30
    w = doc.width - 2 * pad
    h = doc.height - 2 * pad - MARGIN_TOP
    coords = [(pad + x * w, MARGIN_TOP + pad + y * h) for x, y in pos]

    sizes = [len(members[c]) for c in order]
    smin, smax = min(sizes), max(sizes)

    def radius(size: int) -> float:
        if smax == smin:
            return (style.min_node_radius + style.max_node_radius) / 2
        frac = (size - smin) / (smax - smin)
        return style.min_node_radius + frac * (style.max_node_radius - style.min_node_radius)

    if cross:
        wmin = min(cross.values())
        wmax = max(cross.values())
        for (a, b), count in sorted(cross.items()):
            if wmax == wmin:
                width = (style.min_edge_width + style.max_edge_width) / 2
            else:
                frac = (count - wmin) / (wmax - wmin)
                width = style.min_edge_width + frac * (style.max_edge_width - style.min_edge_width)
            (x1, y1), (x2, y2) = coords[a], coords[b]
            doc.line(
                x1, y1, x2, y2, stroke=style.edge_color, width=width,
                **{"class": "cluster-edge", "data_value": str(count)},
            )

    entity_names: dict[str, None] = {}
    for ci, cid in enumerate(order):
        cx, cy = coords[ci]
        r = radius(sizes[ci])
        doc.circle(
            cx, cy, r, fill=style.color(ci),
            **{"class": "cluster", "data_cluster": str(cid), "data_size": str(sizes[ci])},
        )
        doc.text(
            cx, cy + 4, str(cid), size=style.node_font_size, anchor="middle", fill="#ffffff"
        )
        tally: dict[str, int] = {}
        for node in members[cid]:
            name = _node_entity(graph, node, entity, topics_level)
            if name:
                tally[name] = tally.get(name, 0) + 1
        top = sorted(tally, key=lambda t: (-tally[t], t))[:m_entries]
        total = sum(tally[t] for t in top)
        if total == 0:
            continue
        r_in = r + 3
        r_out = r_in + max(4.0, r * style.pie_thickness_ratio)
        angle = -math.pi / 2
        for name in top:
            entity_names.setdefault(name, None)
            frac = tally[name] / total
            a1 = angle + frac * 2 * math.pi
            span = min(a1, angle + 2 * math.pi - 1e-6)
            doc.path(
                _annulus_segment(cx, cy, r_in, r_out, angle, span),
                fill=style.color(list(entity_names).index(name)),
                stroke="#ffffff", width=0.5,
                **{"class": "pie-seg", "data_cluster": str(cid),
                   "data_entry": name, "data_value": str(tally[name])},
            )
            angle = a1
    _legend(doc, style, list(entity_names))
    doc.write(out_path)


def render_cluster_sizes(
    clustering: Clustering,
    style: Optional[ChartStyle] = None,
    n_clusters: int = 10,
    out_path: Path | str = "cluster_sizes.svg",
) -> None:
    """Horizontal bars for the n largest clusters."""
    style = style or ChartStyle()
    members = clustering.members()
    if not members:
        _placeholder(style, "Cluster sizes", out_path)
        return
    doc = _new_doc(style, "Cluster sizes")
    order = sorted(members, key=lambda c: (-len(members[c]), c))[:n_clusters]
    vmax = len(members[order[0]])
    x0 = MARGIN_LEFT + 60
    width = doc.width - x0 - MARGIN_RIGHT
    row_h = min(34.0, (doc.height - MARGIN_TOP - MARGIN_BOTTOM) / len(order))
    bar_h = row_h * 0.7
    y = MARGIN_TOP + 10
    doc.element(
        "g",
        **{
            "class": "plot", "data_x0": fmt(x0), "data_width": fmt(width),
            "data_vmax": fmt(float(vmax)),
        },
    )
    for cid in order:
        size = len(members[cid])
        doc.text(x0 - 8, y + bar_h * 0.75, f"cluster {cid}", size=style.font_size - 2, anchor="end")
        bar_w = width * (size / vmax) if vmax else 0.0
        doc.rect(
            x0, y, bar_w, bar_h, fill=style.color(0),
            **{"class": "bar", "data_cluster": str(cid), "data_value": str(size)},
        )
        doc.text(x0 + bar_w + 4, y + bar_h * 0.75, str(size), size=style.font_size - 2)
        y += row_h
    doc.write(out_path)
