"""Shared fixtures: the 15-work corpus, its raw upstream replay files,
and the standard community-detection test graphs."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from citenet.corpus import load_corpus
from citenet.graphs import Graph
from citenet.openalex import QuerySpec

MAIL = "tester@example.com"
FETCHED_AT = "2024-06-01T00:00:00+00:00"
QUERIES = ["15 minute city", "15 min city"]

# ---------------------------------------------------------------------------
# 15-work corpus: 5 roots (W1..W5), 10 bases (W101..W110)
#
# citation links (from the roots' lists only):
#   root-root: W1->W2 (reciprocal in both lists), W2->W3, W4->W5      = 3 edges
#   root-base: W1->W101, W1->W102, W103->W1, W2->W103, W2->W104,
#              W3->W105, W3->W106, W4->W107, W4->W108, W5->W109,
#              W5->W110, W105->W5                                     = 12 edges
# baseset=True  -> 15 nodes / 15 edges; baseset=False -> 5 nodes / 3 edges
#
# co-authorship (baseset=True): A1-A2 weight 2 (W1+W2), triangle
# A3-A4-A5 (W3), A7-A8 (W101); W4 single author, W5 none.
# -> 16 nodes / 5 edges; baseset=False -> 6 nodes / 4 edges
# ---------------------------------------------------------------------------

V1 = {"id": "S1", "display_name": "Journal of Urban Planning"}
V2 = {"id": "S2", "display_name": "Computation Review"}
V3 = {"id": "S3", "display_name": "Mobility Letters"}

I1 = {"id": "I1", "display_name": "Univ Alpha"}
I2 = {"id": "I2", "display_name": "Univ Beta"}
I3 = {"id": "I3", "display_name": "Univ Gamma"}

A = {
    "A1": ("Ada Lytle", "IT", [I1]),
    "A2": ("Ben Ode", "FR", []),
    "A3": ("Cy Park", "US", [I2]),
    "A4": ("Dee Quon", "US", []),
    "A5": ("Eli Roe", "DE", []),
    "A6": ("Fay Sun", "IT", []),
    "A7": ("Gus Tam", "GB", [I3]),
    "A8": ("Hal Uno", "GB", []),
    "A9": ("Ivy Vex", "US", []),
    "A10": ("Jo Wu", "CN", []),
    "A11": ("Kai Xi", "CN", []),
    "A12": ("Lu Yan", "CN", []),
    "A13": ("Mo Zed", "CA", []),
    "A14": ("Ng Ash", "CA", []),
    "A15": ("Oz Bix", "AU", []),
    "A16": ("Pia Cole", "AU", []),
}

TOPIC_TRANSPORT = {
    "topic": "Urban Transport and Accessibility",
    "subfield": "Transportation",
    "field": "Transportation",
    "domain": "Social Sciences",
}
TOPIC_SMART = {
    "topic": "Smart Cities",
    "subfield": "Computer Applications",
    "field": "Computer Science",
    "domain": "Physical Sciences",
}
TOPIC_ENG = {
    "topic": "Urban Engineering",
    "subfield": "Civil Engineering",
    "field": "Engineering",
    "domain": "Physical Sciences",
}
TOPIC_EPI = {
    "topic": "Epidemiology",
    "subfield": "Public Health",
    "field": "Medicine",
    "domain": "Health Sciences",
}


def _authorship(author_id: str) -> dict:
    name, country, institutions = A[author_id]
    return {
        "author_id": author_id,
        "display_name": name,
        "country": country,
        "institutions": list(institutions),
    }


def _record(
    work_id,
    title,
    date,
    *,
    doi=None,
    language="en",
    type_="article",
    venue=None,
    authors=(),
    topics=(),
    cite=(),
    cited_by=(),
    abstract=None,
    citations=0,
    root=False,
):
    return {
        "id": work_id,
        "doi": doi,
        "title": title,
        "publication_date": date,
        "language": language,
        "type": type_,
        "venue": venue,
        "authorships": [_authorship(a) for a in authors],
        "topics": list(topics),
        "cited_by": list(cited_by),
        "cite": list(cite),
        "abstract": abstract,
        "citation_count": citations,
        "is_root": root,
    }


def corpus15_records() -> dict:
    records = {}
    records["W1"] = _record(
        "W1", "Reaching everything in fifteen minutes", "2020-01-15",
        doi="https://doi.org/10.1000/w1", venue=V1, authors=("A1", "A2"),
        topics=[TOPIC_TRANSPORT], cite=["W2", "W101", "W102"], cited_by=["W103"],
        abstract="The 15 minute city concept improves urban access",
        citations=10, root=True,
    )
    records["W2"] = _record(
        "W2", "Compact neighbourhoods and access", "2020-02-10",
        venue=V1, authors=("A1", "A2"), topics=[TOPIC_TRANSPORT],
        cite=["W3", "W103", "W104"], cited_by=["W1"],
        abstract="Urban access in the 15 minute city",
        citations=5, root=True,
    )
    records["W3"] = _record(
        "W3", "Computing walkability at scale", "2020-03-05",
        doi="https://doi.org/10.1000/w3", venue=V2, authors=("A3", "A4", "A5"),
        topics=[TOPIC_SMART], cite=["W105", "W106"],
        abstract="Smart mobility for compact cities",
        citations=8, root=True,
    )
    records["W4"] = _record(
        "W4", "Street design under proximity goals", "2020-07-01",
        type_="book-chapter", authors=("A6",), topics=[TOPIC_ENG],
        cite=["W5", "W107", "W108"], citations=0, root=True,
    )
    records["W5"] = _record(
        "W5", "Proximity planning in practice", "2021-01-05",
        authors=(), topics=[TOPIC_TRANSPORT],
        cite=["W109", "W110"], cited_by=["W105"], citations=2, root=True,
    )
    base = [
        ("W101", "Pandemic mobility baselines", "2020-04-20", V1, ("A7", "A8"),
         [TOPIC_EPI], "Pandemic mobility patterns in cities", 7),
        ("W102", "Service accessibility atlas", "2020-05-02", None, ("A7",), [], None, 3),
        ("W103", "Reti urbane e accessibilita", "2020-06-30", V3, ("A9",),
         [TOPIC_SMART], None, 1),
        ("W104", "Cycling infrastructure audit", "2020-08-15", None, ("A10",), [], None, 0),
        ("W105", "Foundations of urban graphs", "2019-11-11", None, ("A11",), [], None, 4),
        ("W106", "Density and daily trips", "2020-09-01", None, ("A12",), [], None, 0),
        ("W107", "Pedestrian comfort measures", "2020-10-10", None, ("A13",), [], None, 2),
        ("W108", "Zoning for mixed use", "2020-11-20", None, ("A14",), [], None, 0),
        ("W109", "Transit headway models", "2020-12-25", None, ("A15",), [], None, 1),
        ("W110", "Car-free district outcomes", "2021-02-14", None, ("A16",), [], None, 0),
    ]
    for work_id, title, date, venue, authors, topics, abstract, citations in base:
        records[work_id] = _record(
            work_id, title, date, venue=venue, authors=authors, topics=topics,
            abstract=abstract, citations=citations,
            language="it" if work_id == "W103" else "en",
        )
    return records


def corpus15_document() -> dict:
    document = dict(sorted(corpus15_records().items()))
    document["_meta"] = {
        "queries": [
            QuerySpec(api_type="search", parameter=q, mail=MAIL).as_dict()
            for q in QUERIES
        ],
        "fetched_at": FETCHED_AT,
    }
    document["_fetch_log"] = []
    return document


@pytest.fixture
def corpus15_path(tmp_path) -> Path:
    path = tmp_path / "corpus15.json"
    path.write_text(json.dumps(corpus15_document(), sort_keys=True, indent=1), "utf-8")
    return path


@pytest.fixture
def corpus15(corpus15_path):
    return load_corpus(corpus15_path)


# ---------------------------------------------------------------------------
# raw upstream replay files for the harvest client
# ---------------------------------------------------------------------------

def _invert(abstract: str) -> dict:
    index: dict[str, list[int]] = {}
    for pos, term in enumerate(abstract.split()):
        index.setdefault(term, []).append(pos)
    return index


def raw_work(record: dict) -> dict:
    raw = {
        "id": record["id"],
        "doi": record["doi"],
        "display_name": record["title"],
        "title": record["title"],
        "publication_date": record["publication_date"],
        "language": record["language"],
        "type": record["type"],
        "cited_by_count": record["citation_count"],
        "authorships": [
            {
                "author": {"id": a["author_id"], "display_name": a["display_name"]},
                "countries": [a["country"]] if a["country"] else [],
                "institutions": a["institutions"],
            }
            for a in record["authorships"]
        ],
        "topics": [
            {
                "display_name": t["topic"],
                "subfield": {"display_name": t["subfield"]},
                "field": {"display_name": t["field"]},
                "domain": {"display_name": t["domain"]},
            }
            for t in record["topics"]
        ],
    }
    if record["venue"]:
        raw["primary_location"] = {"source": dict(record["venue"])}
    if record["abstract"]:
        raw["abstract_inverted_index"] = _invert(record["abstract"])
    return raw


def write_upstream_fixture(directory: Path) -> list[str]:
    """Record the replay files the harvest of QUERIES would consume."""
    directory.mkdir(parents=True, exist_ok=True)
    records = corpus15_records()
    roots = [records[i] for i in ("W1", "W2", "W3", "W4", "W5")]

    def dump(spec: QuerySpec, results: list[dict]) -> None:
        payload = {"results": results, "fetched_at": FETCHED_AT}
        (directory / f"{spec.cache_key()}.json").write_text(
            json.dumps(payload, sort_keys=True), "utf-8"
        )

    dump(QuerySpec(api_type="search", parameter=QUERIES[0], mail=MAIL),
         [raw_work(r) for r in roots])
    dump(QuerySpec(api_type="search", parameter=QUERIES[1], mail=MAIL), [])
    for root in roots:
        dump(
            QuerySpec(api_type="cite", parameter=root["id"], mail=MAIL),
            [raw_work(records[i]) for i in root["cited_by"]],
        )
        dump(
            QuerySpec(api_type="cited_by", parameter=root["id"], mail=MAIL),
            [raw_work(records[i]) for i in root["cite"]],
        )
    return list(QUERIES)


@pytest.fixture
def upstream_dir(tmp_path) -> Path:
    directory = tmp_path / "upstream"
    write_upstream_fixture(directory)
    return directory


# ---------------------------------------------------------------------------
# community-detection graphs
# ---------------------------------------------------------------------------

KARATE_EDGES = [
    (0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6), (0, 7), (0, 8), (0, 10),
    (0, 11), (0, 12), (0, 13), (0, 17), (0, 19), (0, 21), (0, 31),
    (1, 2), (1, 3), (1, 7), (1, 13), (1, 17), (1, 19), (1, 21), (1, 30),
    (2, 3), (2, 7), (2, 8), (2, 9), (2, 13), (2, 27), (2, 28), (2, 32),
    (3, 7), (3, 12), (3, 13),
    (4, 6), (4, 10),
    (5, 6), (5, 10), (5, 16),
    (6, 16),
    (8, 30), (8, 32), (8, 33),
    (9, 33),
    (13, 33),
    (14, 32), (14, 33),
    (15, 32), (15, 33),
    (18, 32), (18, 33),
    (19, 33),
    (20, 32), (20, 33),
    (22, 32), (22, 33),
    (23, 25), (23, 27), (23, 29), (23, 32), (23, 33),
    (24, 25), (24, 27), (24, 31),
    (25, 31),
    (26, 29), (26, 33),
    (27, 33),
    (28, 31), (28, 33),
    (29, 32), (29, 33),
    (30, 32), (30, 33),
    (31, 32), (31, 33),
    (32, 33),
]


@pytest.fixture
def karate() -> Graph:
    graph = Graph()
    for v in range(34):
        graph.add_node(v)
    for u, v in KARATE_EDGES:
        graph.add_edge(u, v)
    assert graph.number_of_edges() == 78
    return graph


def two_clique_edges() -> list[tuple[int, int]]:
    edges = []
    for block in (range(0, 5), range(5, 10)):
        block = list(block)
        for i, u in enumerate(block):
            for v in block[i + 1 :]:
                edges.append((u, v))
    edges.append((4, 5))
    return edges


@pytest.fixture
def two_cliques() -> Graph:
    graph = Graph()
    for v in range(10):
        graph.add_node(v)
    for u, v in two_clique_edges():
        graph.add_edge(u, v)
    return graph
