"""Citation and co-authorship graph construction plus GML read/write.

Graphs are small purpose-built containers (dict adjacency, insertion
ordered) so construction, serialization and kernel hand-off stay fully
deterministic.
"""

from __future__ import annotations

import logging
import re
from pathlib import Path
from typing import Iterator, Optional

import numpy as np

from .corpus import LIST_JOIN, Corpus
from .errors import GMLError

logger = logging.getLogger(__name__)

CITATION = "citation"
COAUTHORSHIP = "coauthorship"


class Graph:
    """Undirected graph with optional edge weights."""

    directed = False

    def __init__(self, kind: Optional[str] = None, weighted: bool = False):
        self.kind = kind
        self.weighted = weighted
        self._nodes: dict = {}
        self._adj: dict = {}

    # -- nodes -------------------------------------------------------------

    def add_node(self, nid, **attrs) -> None:
        if nid not in self._nodes:
            self._nodes[nid] = {}
            self._adj[nid] = {}
        self._nodes[nid].update(attrs)

    def has_node(self, nid) -> bool:
        return nid in self._nodes

    def nodes(self) -> Iterator:
        return iter(self._nodes)

    def node_attrs(self, nid) -> dict:
        return self._nodes[nid]

    def number_of_nodes(self) -> int:
        return len(self._nodes)

    # -- edges ---------------------------------------------------------------

    def add_edge(self, u, v, weight: float = 1.0) -> None:
        if u == v:
            raise ValueError(f"self-loop rejected on node {u!r}")
        self.add_node(u)
        self.add_node(v)
        self._adj[u][v] = weight
        self._adj[v][u] = weight

    def increment_edge(self, u, v, by: float = 1.0) -> None:
        if self.has_edge(u, v):
            w = self._adj[u][v] + by
            self._adj[u][v] = w
            self._adj[v][u] = w
        else:
            self.add_edge(u, v, by)

    def has_edge(self, u, v) -> bool:
        return u in self._adj and v in self._adj[u]

    def edge_weight(self, u, v) -> float:
        return self._adj[u][v]

    def neighbors(self, u) -> Iterator:
        return iter(self._adj[u])

    def degree(self, u) -> int:
        return len(self._adj[u])

    def edges(self) -> Iterator[tuple]:
        """Yield each undirected edge once as (u, v, weight)."""
        index = {n: i for i, n in enumerate(self._nodes)}
        for u in self._nodes:
            for v, w in self._adj[u].items():
                if index[v] > index[u]:
                    yield (u, v, w)

    def number_of_edges(self) -> int:
        return sum(len(nbrs) for nbrs in self._adj.values()) // 2


class DiGraph:
    """Directed graph; edges are unweighted."""

    directed = True

    def __init__(self, kind: Optional[str] = None):
        self.kind = kind
        self.weighted = False
        self._nodes: dict = {}
        self._succ: dict = {}
        self._pred: dict = {}

    def add_node(self, nid, **attrs) -> None:
        if nid not in self._nodes:
            self._nodes[nid] = {}
            self._succ[nid] = {}
            self._pred[nid] = {}
        self._nodes[nid].update(attrs)

    def has_node(self, nid) -> bool:
        return nid in self._nodes

    def nodes(self) -> Iterator:
        return iter(self._nodes)

    def node_attrs(self, nid) -> dict:
        return self._nodes[nid]

    def number_of_nodes(self) -> int:
        return len(self._nodes)

    def add_edge(self, u, v, weight: float = 1.0) -> None:
        if u == v:
            raise ValueError(f"self-loop rejected on node {u!r}")
        self.add_node(u)
        self.add_node(v)
        self._succ[u][v] = weight
        self._pred[v][u] = weight

    def has_edge(self, u, v) -> bool:
        return u in self._succ and v in self._succ[u]

    def edge_weight(self, u, v) -> float:
        return self._succ[u][v]

    def successors(self, u) -> Iterator:
        return iter(self._succ[u])

    def predecessors(self, u) -> Iterator:
        return iter(self._pred[u])

    def out_degree(self, u) -> int:
        return len(self._succ[u])

    def in_degree(self, u) -> int:
        return len(self._pred[u])

    def degree(self, u) -> int:
        return self.in_degree(u) + self.out_degree(u)

    def edges(self) -> Iterator[tuple]:
        for u in self._nodes:
            for v, w in self._succ[u].items():
                yield (u, v, w)

    def number_of_edges(self) -> int:
        return sum(len(nbrs) for nbrs in self._succ.values())


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def _citation_node_attrs(corpus: Corpus, work_id: str) -> dict:
    work = corpus.works.get(work_id)
    if work is None:
        # dangling reference: keep the node, flag sparse metadata
        return {
            "title": "",
            "publication_date": "",
            "is_root": False,
            "topics": "",
            "topics_field": "",
            "topics_domain": "",
            "citation_count": 0,
        }
    primary = work.primary_topic()
    return {
        "title": work.title,
        "publication_date": work.publication_date,
        "is_root": work.is_root,
        "topics": LIST_JOIN.join(t.topic for t in work.topics),
        "topics_field": primary.field if primary else "",
        "topics_domain": primary.domain if primary else "",
        "citation_count": work.citation_count,
    }


def create_citation_graph(
    corpus: Corpus,
    baseset: bool = True,
    out_path: Optional[Path | str] = None,
) -> DiGraph:
    """Build the directed citing -> cited graph from the root set outward.

    Root works become nodes first.  Each root work contributes incoming
    edges from its ``cited_by`` list and outgoing edges to its ``cite``
    list.  With ``baseset=False`` only edges between root works survive;
    with ``baseset=True`` base works join as nodes when first referenced.
    Reciprocal list entries collapse to a single edge, self-citations are
    dropped.
    """
    graph = DiGraph(kind=CITATION)
    roots = [w.id for w in corpus.works.values() if w.is_root]
    root_set = set(roots)
    for work_id in roots:
        graph.add_node(work_id, **_citation_node_attrs(corpus, work_id))
    for work_id in roots:
        work = corpus.works[work_id]
        for citing in work.cited_by:
            if citing == work_id:
                continue
            if not baseset:
                if citing in root_set:
                    graph.add_edge(citing, work_id)
                continue
            if not graph.has_node(citing):
                if citing not in corpus.works:
                    logger.info("citation graph: dangling work id %s", citing)
                graph.add_node(citing, **_citation_node_attrs(corpus, citing))
            graph.add_edge(citing, work_id)
        for cited in work.cite:
            if cited == work_id:
                continue
            if not baseset:
                if cited in root_set:
                    graph.add_edge(work_id, cited)
                continue
            if not graph.has_node(cited):
                if cited not in corpus.works:
                    logger.info("citation graph: dangling work id %s", cited)
                graph.add_node(cited, **_citation_node_attrs(corpus, cited))
            graph.add_edge(work_id, cited)
    if out_path is not None:
        write_gml(graph, out_path)
    return graph


def create_coauthorship_graph(
    corpus: Corpus,
    baseset: bool = True,
    out_path: Optional[Path | str] = None,
) -> Graph:
    """Build the undirected author graph; edge weight counts shared works.

    Scope is the root works, plus (when ``baseset=True``) each root work's
    cited/citing neighbors, every work processed exactly once.  Author
    pairs are deduplicated within a work; self-pairs are suppressed.
    """
    graph = Graph(kind=COAUTHORSHIP, weighted=True)
    done: set[str] = set()

    def process(work_id: str) -> None:
        if work_id in done:
            return
        done.add(work_id)
        work = corpus.works.get(work_id)
        if work is None or not work.authorships:
            return
        authors = []
        seen = set()
        for a in work.authorships:
            if a.author_id and a.author_id not in seen:
                seen.add(a.author_id)
                authors.append(a)
        for a in authors:
            graph.add_node(a.author_id, display_name=a.display_name, country=a.country or "")
        for i, a in enumerate(authors):
            for b in authors[i + 1 :]:
                graph.increment_edge(a.author_id, b.author_id, 1.0)

    roots = [w.id for w in corpus.works.values() if w.is_root]
    for work_id in roots:
        process(work_id)
        if baseset:
            work = corpus.works[work_id]
            for neighbor in work.cited_by + work.cite:
                process(neighbor)
    if out_path is not None:
        write_gml(graph, out_path)
    return graph


# ---------------------------------------------------------------------------
# GML
# ---------------------------------------------------------------------------

_KEY_RE = re.compile(r"[^A-Za-z0-9_]")


def _gml_key(key: str) -> str:
    key = _KEY_RE.sub("_", str(key))
    if not key or not key[0].isalpha():
        key = "a_" + key
    return key


def _gml_value(value, node, key) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, str):
        return '"' + value.replace('"', '""') + '"'
    if isinstance(value, (list, tuple)):
        if all(isinstance(x, (str, int, float, bool)) for x in value):
            joined = LIST_JOIN.join(str(x) for x in value)
            return '"' + joined.replace('"', '""') + '"'
    raise GMLError(f"attribute {key!r} of node {node!r} is not GML-representable")


def write_gml(graph, path: Path | str) -> None:
    """Serialize a graph in the Gephi-compatible GML dialect.

    Node ids become consecutive integers in insertion order; the original
    node id is kept as the ``label``.  Strings are quoted with doubled
    quotes; non-ASCII text is written as UTF-8.
    """
    index = {n: i for i, n in enumerate(graph.nodes())}
    lines = ["graph ["]
    lines.append(f"  directed {1 if graph.directed else 0}")
    if graph.kind:
        lines.append(f'  kind "{graph.kind}"')
    for node, i in index.items():
        lines.append("  node [")
        lines.append(f"    id {i}")
        lines.append(f'    label "{str(node).replace(chr(34), chr(34) * 2)}"')
        for key, value in graph.node_attrs(node).items():
            if value is None:
                continue
            lines.append(f"    {_gml_key(key)} {_gml_value(value, node, key)}")
        lines.append("  ]")
    for u, v, w in graph.edges():
        lines.append("  edge [")
        lines.append(f"    source {index[u]}")
        lines.append(f"    target {index[v]}")
        if graph.weighted:
            lines.append(f"    weight {_gml_value(w, u, 'weight')}")
        lines.append("  ]")
    lines.append("]")
    path = Path(path)
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


_TOKEN_RE = re.compile(
    r'\s*(?:(?P<bracket>[\[\]])|(?P<string>"(?:[^"]|"")*")|(?P<word>[^\s\[\]"]+))',
    re.S,
)


def _tokenize_gml(text: str):
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            remainder = text[pos:].strip()
            if remainder:
                raise GMLError(f"unparseable GML near {remainder[:40]!r}")
            return
        pos = m.end()
        if m.group("bracket"):
            yield ("bracket", m.group("bracket"))
        elif m.group("string") is not None:
            raw = m.group("string")[1:-1].replace('""', '"')
            yield ("value", raw)
        else:
            word = m.group("word")
            try:
                yield ("value", int(word))
            except ValueError:
                try:
                    yield ("value", float(word))
                except ValueError:
                    yield ("key", word)


def _parse_gml_block(tokens) -> dict:
    """Parse one [...] block into key -> value/list-of-dict mapping."""
    out: dict = {}
    while True:
        try:
            kind, token = next(tokens)
        except StopIteration:
            raise GMLError("unexpected end of GML input") from None
        if kind == "bracket" and token == "]":
            return out
        if kind != "key":
            raise GMLError(f"expected a key, got {token!r}")
        key = token
        kind, value = next(tokens, (None, None))
        if kind == "bracket" and value == "[":
            value = _parse_gml_block(tokens)
            out.setdefault(key, []).append(value)
        elif kind == "value":
            out[key] = value
        else:
            raise GMLError(f"missing value for key {key!r}")


def read_gml(path: Path | str):
    """Parse a GML file back into a Graph or DiGraph."""
    text = Path(path).read_text("utf-8")
    tokens = _tokenize_gml(text)
    kind, token = next(tokens, (None, None))
    if kind != "key" or token != "graph":
        raise GMLError("file does not start with a 'graph' block")
    kind, token = next(tokens, (None, None))
    if kind != "bracket" or token != "[":
        raise GMLError("missing '[' after 'graph'")
    body = _parse_gml_block(tokens)

    directed = bool(body.get("directed", 0))
    graph_kind = body.get("kind") or None
    nodes = body.get("node", [])
    edges = body.get("edge", [])
    weighted = any("weight" in e for e in edges)
    graph = DiGraph(kind=graph_kind) if directed else Graph(kind=graph_kind, weighted=weighted)

    by_gml_id: dict = {}
    for block in nodes:
        if "id" not in block:
            raise GMLError("node block without id")
        gml_id = block["id"]
        label = block.get("label", str(gml_id))
        attrs = {
            k: v for k, v in block.items() if k not in ("id", "label")
        }
        graph.add_node(label, **attrs)
        by_gml_id[gml_id] = label
    for block in edges:
        try:
            u = by_gml_id[block["source"]]
            v = by_gml_id[block["target"]]
        except KeyError as exc:
            raise GMLError(f"edge references unknown node id {exc}") from exc
        graph.add_edge(u, v, weight=block.get("weight", 1.0))
    return graph


# ---------------------------------------------------------------------------
# kernel hand-off
# ---------------------------------------------------------------------------

def node_list(graph) -> list:
    return list(graph.nodes())


def to_csr(graph, direction: str = "out"):
    """Flatten adjacency to CSR arrays with neighbor lists sorted by index.

    direction: "out" (successors / undirected adjacency), "in"
    (predecessors) or "sym" (unweighted union of both directions).
    Returns (indptr, indices, weights, nodes).
    """
    nodes = node_list(graph)
    index = {n: i for i, n in enumerate(nodes)}
    n = len(nodes)
    rows: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    if not graph.directed:
        adj = graph._adj
        for u in nodes:
            iu = index[u]
            rows[iu] = sorted((index[v], w) for v, w in adj[u].items())
    elif direction == "out":
        for u in nodes:
            rows[index[u]] = sorted((index[v], w) for v, w in graph._succ[u].items())
    elif direction == "in":
        for u in nodes:
            rows[index[u]] = sorted((index[v], w) for v, w in graph._pred[u].items())
    elif direction == "sym":
        for u in nodes:
            iu = index[u]
            union = {index[v] for v in graph._succ[u]} | {index[v] for v in graph._pred[u]}
            rows[iu] = sorted((j, 1.0) for j in union)
    else:
        raise ValueError(f"unknown direction {direction!r}")

    indptr = np.zeros(n + 1, dtype=np.int32)
    for i, row in enumerate(rows):
        indptr[i + 1] = indptr[i] + len(row)
    m = int(indptr[-1])
    indices = np.zeros(m, dtype=np.int32)
    weights = np.zeros(m, dtype=np.float64)
    k = 0
    for row in rows:
        for j, w in row:
            indices[k] = j
            weights[k] = w
            k += 1
    return indptr, indices, weights, nodes
