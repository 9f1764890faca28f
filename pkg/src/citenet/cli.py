"""Command-line pipeline: fetch -> graph -> metrics -> cluster -> report.

Option precedence is flags > environment > config file (--config JSON).
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from pathlib import Path

from . import analytics, charts, community
from .centrality import extract_metrics_to_csv, graph_statistics
from .community import cluster_graph, extract_clusters_to_csv
from .corpus import load_corpus
from .errors import CitenetError
from .graphs import COAUTHORSHIP, create_citation_graph, create_coauthorship_graph, read_gml
from .openalex import (
    CACHE_DIR_ENV,
    FIXTURES_ENV,
    FixtureBackend,
    OpenAlexClient,
    expand_lite_regex,
)

MAIL_RE = re.compile(r"^[^@\s]+@[^@\s]+\.[^@\s]+$")


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _resolve(flag_value, env_name: str | None, config: dict, key: str, default=None):
    if flag_value is not None:
        return flag_value
    if env_name and os.environ.get(env_name):
        return os.environ[env_name]
    if key in config:
        return config[key]
    return default


def _build_client(args, config: dict) -> OpenAlexClient:
    cache_dir = _resolve(args.cache_dir, CACHE_DIR_ENV, config, "cache_dir", ".citenet_cache")
    fixtures = _resolve(getattr(args, "fixture_dir", None), FIXTURES_ENV, config, "fixtures")
    backend = FixtureBackend(Path(fixtures)) if fixtures else None
    return OpenAlexClient(cache_dir=Path(cache_dir), backend=backend)


def _split_list(value: str) -> list[str]:
    return [part.strip() for part in value.split(",") if part.strip()]


def cmd_fetch(args) -> int:
    config = _load_config(args.config)
    mail = _resolve(args.mail, None, config, "mail")
    if not mail or not MAIL_RE.match(mail):
        print(f"error: --mail must be a valid address (got {mail!r})", file=sys.stderr)
        return 2
    queries = expand_lite_regex(args.query)
    client = _build_client(args, config)
    out_dir = args.out or config.get("out", "query_results")
    path = client.retrieve_articles(
        queries,
        mail,
        from_publication_date=getattr(args, "from"),
        to_publication_date=args.to,
        cache=not args.no_cache,
        out_dir=out_dir,
    )
    corpus = load_corpus(path)
    print(path)
    print(f"root works: {len(corpus.root_works())}")
    print(f"base works: {len(corpus.base_works())}")
    return 0


def cmd_graph(args) -> int:
    corpus = load_corpus(args.corpus)
    out = args.out
    if out is None:
        out = f"{args.kind}_graph.gml"
    if args.kind == "citation":
        graph = create_citation_graph(corpus, baseset=args.baseset, out_path=out)
    else:
        graph = create_coauthorship_graph(corpus, baseset=args.baseset, out_path=out)
    print(graph.number_of_nodes(), graph.number_of_edges())
    print(out)
    return 0


def cmd_metrics(args) -> int:
    graph = read_gml(args.graph)
    metrics = _split_list(args.metrics)
    fields = _split_list(args.fields)
    rows = extract_metrics_to_csv(graph, metrics, fields, args.out)
    print(f"wrote {rows} rows to {args.out}")
    return 0


def cmd_cluster(args) -> int:
    graph = read_gml(args.graph)
    clustering = cluster_graph(graph, args.algorithm, seed=args.seed, k=args.k)
    fields = _split_list(args.fields)
    rows = extract_clusters_to_csv(clustering, graph, fields, args.out)
    quality = "" if clustering.quality is None else f" quality={clustering.quality:.6f}"
    print(
        f"wrote {rows} rows to {args.out} "
        f"({clustering.cluster_count()} clusters{quality})"
    )
    return 0


def _read_cluster_csv(path: str, graph) -> community.Clustering:
    import csv as _csv

    assignment = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = _csv.DictReader(fh)
        if not reader.fieldnames or "id" not in reader.fieldnames or "cluster" not in reader.fieldnames:
            raise CitenetError(f"{path} must carry 'id' and 'cluster' columns")
        for row in reader:
            assignment[row["id"]] = int(row["cluster"])
    missing = [n for n in graph.nodes() if n not in assignment]
    if missing:
        raise CitenetError(f"{path} misses {len(missing)} graph nodes (e.g. {missing[0]!r})")
    return community.Clustering(assignment=assignment, algorithm="loaded", seed=0)


def cmd_report(args) -> int:
    config = _load_config(args.config)
    corpus = load_corpus(args.corpus)
    graph = read_gml(args.graph)
    clustering = _read_cluster_csv(args.clusters, graph)
    clustering.seed = args.seed
    out_dir = Path(args.out or config.get("out", "report"))
    out_dir.mkdir(parents=True, exist_ok=True)
    style = charts.ChartStyle()
    if args.palette:
        style = charts.ChartStyle(palette=_split_list(args.palette))

    interval = args.interval
    trends = analytics.aggregate_article_counts(corpus, interval=interval)
    charts.render_article_trends(trends, style, out_dir / "article_trends.svg")

    topics = analytics.aggregate_topic_counts(corpus, level=args.topics_level, interval=interval)
    charts.render_topic_trends(topics, style, out_dir / "topic_trends.svg")

    authors = analytics.rank_top_authors(corpus, by_citations=True, num_authors=10)
    charts.render_top_authors(authors, style, out_dir / "top_authors.svg")

    keywords = analytics.extract_keywords(corpus, top_n=10, ngram_range=(1, 2))
    charts.render_keyword_bars(keywords, style, out_dir / "keywords.svg")

    keyword_trends = analytics.keyword_trend_series(
        corpus, top_n=10, ngram_range=(1, 2), interval=interval
    )
    charts.render_keyword_trends(keyword_trends, style, out_dir / "keyword_trends.svg")

    stats = graph_statistics(graph)
    charts.render_graph_statistics(stats, style, out_dir / "statistics")

    entity = "countries" if graph.kind == COAUTHORSHIP or not graph.directed else "topics"
    charts.render_clustered_graph(
        graph,
        clustering,
        n_clusters=args.n_clusters,
        m_entries=args.m_entries,
        entity=entity,
        style=style,
        out_path=out_dir / "clustered_graph.svg",
        topics_level=args.topics_level,
    )
    charts.render_cluster_sizes(
        clustering, style, n_clusters=args.n_clusters, out_path=out_dir / "cluster_sizes.svg"
    )
    print(f"report written to {out_dir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="citenet",
        description="Harvest scholarly metadata and analyze citation networks",
    )
    parser.add_argument("--config", help="JSON config file (lowest precedence)")
    sub = parser.add_subparsers(dest="command", required=True)

    fetch = sub.add_parser("fetch", help="harvest a corpus for a query pattern")
    fetch.add_argument("--query", required=True, help="lite-regex query pattern")
    fetch.add_argument("--mail", help="contact address sent with every request")
    fetch.add_argument("--from", dest="from", default=None, help="from publication date (ISO)")
    fetch.add_argument("--to", default=None, help="to publication date (ISO)")
    fetch.add_argument("--no-cache", action="store_true", help="bypass the response cache")
    fetch.add_argument("--out", help="output directory (default query_results)")
    fetch.add_argument("--cache-dir", default=None)
    fetch.add_argument("--fixture-dir", default=None, help="replay recorded responses")
    fetch.set_defaults(func=cmd_fetch)

    graph = sub.add_parser("graph", help="build a graph from a corpus file")
    graph.add_argument("--corpus", required=True)
    graph.add_argument("--kind", choices=["citation", "coauthorship"], default="citation")
    graph.add_argument("--baseset", action=argparse.BooleanOptionalAction, default=True)
    graph.add_argument("--out", help="GML output path")
    graph.set_defaults(func=cmd_graph)

    metrics = sub.add_parser("metrics", help="compute node metrics into a CSV")
    metrics.add_argument("--graph", required=True, help="GML input path")
    metrics.add_argument(
        "--metrics",
        default="betweenness_centrality,closeness_centrality,page_rank,in_degree,out_degree",
    )
    metrics.add_argument("--fields", default="id,title")
    metrics.add_argument("--out", required=True)
    metrics.set_defaults(func=cmd_metrics)

    cluster = sub.add_parser("cluster", help="cluster a graph into communities")
    cluster.add_argument("--graph", required=True, help="GML input path")
    cluster.add_argument("--algorithm", choices=list(community.ALGORITHMS), default="louvain")
    cluster.add_argument("--seed", type=int, default=0)
    cluster.add_argument("--k", type=int, default=None, help="cluster count (spectral only)")
    cluster.add_argument("--fields", default="id")
    cluster.add_argument("--out", required=True)
    cluster.set_defaults(func=cmd_cluster)

    report = sub.add_parser("report", help="render the full chart set")
    report.add_argument("--corpus", required=True)
    report.add_argument("--graph", required=True, help="GML input path")
    report.add_argument("--clusters", required=True, help="cluster CSV from the cluster command")
    report.add_argument("--out", help="output directory (default report)")
    report.add_argument("--seed", type=int, default=0)
    report.add_argument("--interval", choices=list(analytics.INTERVALS), default="quarter")
    report.add_argument("--topics-level", choices=["field", "domain"], default="field")
    report.add_argument("--n-clusters", type=int, default=5)
    report.add_argument("--m-entries", type=int, default=5)
    report.add_argument("--palette", help="comma-separated hex colors")
    report.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CitenetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
