"""In-memory model of a harvested corpus and its tabular exporters."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .errors import CorpusLoadError, FieldError

LIST_JOIN = "; "


@dataclass
class Authorship:
    author_id: str
    display_name: str = ""
    country: Optional[str] = None
    institutions: list[str] = field(default_factory=list)


@dataclass
class TopicAssignment:
    topic: str
    subfield: str
    field: str
    domain: str


@dataclass
class Venue:
    id: str
    display_name: str = ""
    root_count: int = 0
    base_count: int = 0


@dataclass
class Institution:
    id: str
    display_name: str = ""
    root_count: int = 0
    base_count: int = 0


@dataclass
class Work:
    id: str
    title: str = ""
    publication_date: str = ""
    doi: Optional[str] = None
    language: Optional[str] = None
    type: str = ""
    venue: Optional[Venue] = None
    authorships: list[Authorship] = field(default_factory=list)
    topics: list[TopicAssignment] = field(default_factory=list)
    cited_by: list[str] = field(default_factory=list)
    cite: list[str] = field(default_factory=list)
    abstract: Optional[str] = None
    citation_count: int = 0
    is_root: bool = False

    def primary_topic(self) -> Optional[TopicAssignment]:
        """First topic assignment; upstream orders them by score."""
        return self.topics[0] if self.topics else None


@dataclass
class Corpus:
    works: dict[str, Work]
    query_provenance: list[dict] = field(default_factory=list)
    fetched_at: str = ""
    fetch_log: list[dict] = field(default_factory=list)
    #: ids referenced in cite/cited_by lists with no record of their own
    dangling: set[str] = field(default_factory=set)
    institution_names: dict[str, str] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.works)

    def root_works(self) -> list[Work]:
        return [w for w in self.works.values() if w.is_root]

    def base_works(self) -> list[Work]:
        return [w for w in self.works.values() if not w.is_root]


def _parse_work(work_id: str, record: dict) -> Work:
    venue = None
    if record.get("venue"):
        venue = Venue(
            id=record["venue"].get("id", ""),
            display_name=record["venue"].get("display_name", ""),
        )
    authorships = []
    names: dict[str, str] = {}
    for a in record.get("authorships", []):
        inst_ids = []
        for inst in a.get("institutions", []):
            if isinstance(inst, dict):
                inst_ids.append(inst.get("id", ""))
                names[inst.get("id", "")] = inst.get("display_name", "")
            else:
                inst_ids.append(inst)
        authorships.append(
            Authorship(
                author_id=a.get("author_id", ""),
                display_name=a.get("display_name", ""),
                country=a.get("country"),
                institutions=[i for i in inst_ids if i],
            )
        )
    topics = [
        TopicAssignment(
            topic=t.get("topic", ""),
            subfield=t.get("subfield", ""),
            field=t.get("field", ""),
            domain=t.get("domain", ""),
        )
        for t in record.get("topics", [])
    ]
    work = Work(
        id=work_id,
        title=record.get("title", ""),
        publication_date=record.get("publication_date", ""),
        doi=record.get("doi"),
        language=record.get("language"),
        type=record.get("type", ""),
        venue=venue,
        authorships=authorships,
        topics=topics,
        cited_by=list(record.get("cited_by", [])),
        cite=list(record.get("cite", [])),
        abstract=record.get("abstract"),
        citation_count=record.get("citation_count", 0),
        is_root=bool(record.get("is_root", False)),
    )
    work._institution_names = names  # carried up into Corpus.institution_names
    return work


def _detect_duplicate_keys(pairs):
    seen = set()
    out = {}
    for key, value in pairs:
        if key in seen:
            raise CorpusLoadError(f"duplicate work id {key!r} in corpus file")
        seen.add(key)
        out[key] = value
    return out


def load_corpus(path: Path | str) -> Corpus:
    """Load and validate a corpus file written by the harvest client.

    Raises:
        CorpusLoadError: on decode failure, duplicate ids, id mismatches or
            duplicate entries in a work's citation lists.  Dangling citation
            ids are not an error; they are collected into ``corpus.dangling``.
    """
    path = Path(path)
    try:
        document = json.loads(path.read_text("utf-8"), object_pairs_hook=_detect_duplicate_keys)
    except CorpusLoadError:
        raise
    except (ValueError, OSError) as exc:
        raise CorpusLoadError(f"could not read corpus {path}: {exc}") from exc
    if not isinstance(document, dict):
        raise CorpusLoadError(f"corpus {path} is not a JSON object")

    meta = document.pop("_meta", {}) or {}
    fetch_log = document.pop("_fetch_log", []) or []

    works: dict[str, Work] = {}
    institution_names: dict[str, str] = {}
    for work_id, record in document.items():
        if not isinstance(record, dict):
            raise CorpusLoadError(f"record for {work_id!r} is not an object")
        if record.get("id") and record["id"] != work_id:
            raise CorpusLoadError(
                f"work {work_id!r} carries mismatched id {record['id']!r}"
            )
        work = _parse_work(work_id, record)
        for listname in ("cited_by", "cite"):
            ids = getattr(work, listname)
            if len(ids) != len(set(ids)):
                raise CorpusLoadError(
                    f"work {work_id!r} has duplicate entries in its {listname} list"
                )
        institution_names.update(getattr(work, "_institution_names", {}))
        works[work_id] = work

    dangling = set()
    for work in works.values():
        for ref in work.cited_by + work.cite:
            if ref not in works:
                dangling.add(ref)

    return Corpus(
        works=works,
        query_provenance=meta.get("queries", []),
        fetched_at=meta.get("fetched_at", ""),
        fetch_log=fetch_log,
        dangling=dangling,
        institution_names=institution_names,
    )


# ---------------------------------------------------------------------------
# field registry for article export
# ---------------------------------------------------------------------------

def _venue_name(w: Work) -> str:
    return w.venue.display_name if w.venue else ""


ARTICLE_FIELDS = {
    "id": lambda w: w.id,
    "doi": lambda w: w.doi or "",
    "title": lambda w: w.title,
    "publication_date": lambda w: w.publication_date,
    "language": lambda w: w.language or "",
    "type": lambda w: w.type,
    "venue": _venue_name,
    "venue_id": lambda w: w.venue.id if w.venue else "",
    "abstract": lambda w: w.abstract or "",
    "citation_count": lambda w: w.citation_count,
    "is_root": lambda w: w.is_root,
    "cited_by": lambda w: LIST_JOIN.join(w.cited_by),
    "cite": lambda w: LIST_JOIN.join(w.cite),
    "authorships_display_name": lambda w: LIST_JOIN.join(
        a.display_name for a in w.authorships
    ),
    "authorships_author_id": lambda w: LIST_JOIN.join(a.author_id for a in w.authorships),
    "authorships_country": lambda w: LIST_JOIN.join(
        a.country or "" for a in w.authorships
    ),
    "topics_topic": lambda w: LIST_JOIN.join(t.topic for t in w.topics),
    "topics_subfield": lambda w: LIST_JOIN.join(t.subfield for t in w.topics),
    "topics_field": lambda w: LIST_JOIN.join(t.field for t in w.topics),
    "topics_domain": lambda w: LIST_JOIN.join(t.domain for t in w.topics),
}

DEFAULT_ARTICLE_FIELDS = [
    "id",
    "doi",
    "title",
    "publication_date",
    "type",
    "venue",
    "language",
    "authorships_display_name",
    "citation_count",
    "is_root",
]

AUTHOR_FIELDS = ("author_id", "display_name", "country", "institutions")
INSTITUTION_FIELDS = ("id", "display_name", "root_count", "base_count")
VENUE_FIELDS = ("id", "display_name", "root_count", "base_count")


def _check_fields(fields: Iterable[str], known: Iterable[str], kind: str) -> list[str]:
    fields = list(fields)
    known = list(known)
    unknown = [f for f in fields if f not in known]
    if unknown:
        raise FieldError(
            f"unknown {kind} field(s) {unknown}; valid fields: {sorted(known)}"
        )
    return fields


def _write_rows(out_path: Path | str, header: list[str], rows: list[list]) -> int:
    out_path = Path(out_path)
    if out_path.parent != Path(""):
        out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return len(rows)


def _selected_works(corpus: Corpus, include_periphery: bool) -> list[Work]:
    works = list(corpus.works.values())
    if not include_periphery:
        works = [w for w in works if w.is_root]
    return works


def export_articles_csv(
    corpus: Corpus,
    fields: Optional[list[str]] = None,
    include_periphery: bool = True,
    out_path: Path | str = "articles.csv",
) -> int:
    """Write one row per work; returns the row count (header excluded)."""
    fields = _check_fields(fields or DEFAULT_ARTICLE_FIELDS, ARTICLE_FIELDS, "article")
    rows = [
        [ARTICLE_FIELDS[f](w) for f in fields]
        for w in _selected_works(corpus, include_periphery)
    ]
    return _write_rows(out_path, fields, rows)


def export_authors_csv(
    corpus: Corpus,
    fields: Optional[list[str]] = None,
    out_path: Path | str = "authors.csv",
) -> int:
    """One row per distinct author across the whole corpus."""
    fields = _check_fields(fields or list(AUTHOR_FIELDS), AUTHOR_FIELDS, "author")
    authors: dict[str, Authorship] = {}
    for work in corpus.works.values():
        for a in work.authorships:
            known = authors.get(a.author_id)
            if known is None:
                authors[a.author_id] = Authorship(
                    a.author_id, a.display_name, a.country, list(a.institutions)
                )
            else:
                if not known.country and a.country:
                    known.country = a.country
                for inst in a.institutions:
                    if inst not in known.institutions:
                        known.institutions.append(inst)
    rows = []
    for a in authors.values():
        values = {
            "author_id": a.author_id,
            "display_name": a.display_name,
            "country": a.country or "",
            "institutions": LIST_JOIN.join(a.institutions),
        }
        rows.append([values[f] for f in fields])
    return _write_rows(out_path, fields, rows)


def _tally_entities(corpus: Corpus, extract) -> dict[str, tuple[str, set, set]]:
    """id -> (display_name, set of root work ids, set of base work ids)."""
    table: dict[str, tuple[str, set, set]] = {}
    for work in corpus.works.values():
        for ent_id, name in extract(work):
            if not ent_id:
                continue
            if ent_id not in table:
                table[ent_id] = (name, set(), set())
            display, roots, bases = table[ent_id]
            if name and not display:
                table[ent_id] = (name, roots, bases)
            (roots if work.is_root else bases).add(work.id)
    return table


def export_venues_csv(
    corpus: Corpus,
    fields: Optional[list[str]] = None,
    out_path: Path | str = "venues.csv",
) -> int:
    fields = _check_fields(fields or list(VENUE_FIELDS), VENUE_FIELDS, "venue")
    table = _tally_entities(
        corpus,
        lambda w: [(w.venue.id, w.venue.display_name)] if w.venue else [],
    )
    rows = []
    for ent_id, (name, roots, bases) in table.items():
        values = {
            "id": ent_id,
            "display_name": name,
            "root_count": len(roots),
            "base_count": len(bases),
        }
        rows.append([values[f] for f in fields])
    return _write_rows(out_path, fields, rows)


def export_institutions_csv(
    corpus: Corpus,
    fields: Optional[list[str]] = None,
    out_path: Path | str = "institutions.csv",
) -> int:
    fields = _check_fields(fields or list(INSTITUTION_FIELDS), INSTITUTION_FIELDS, "institution")

    def extract(work: Work):
        pairs = []
        for a in work.authorships:
            for inst in a.institutions:
                pairs.append((inst, corpus.institution_names.get(inst, "")))
        return pairs

    table = _tally_entities(corpus, extract)
    rows = []
    for ent_id, (name, roots, bases) in table.items():
        values = {
            "id": ent_id,
            "display_name": name,
            "root_count": len(roots),
            "base_count": len(bases),
        }
        rows.append([values[f] for f in fields])
    return _write_rows(out_path, fields, rows)


# ---------------------------------------------------------------------------
# Scopus-compatible export
# ---------------------------------------------------------------------------

SCOPUS_COLUMNS = [
    "Authors",
    "Author(s) ID",
    "Title",
    "Year",
    "Source title",
    "Volume",
    "Issue",
    "Cited by",
    "DOI",
    "Link",
    "Abstract",
    "Author Keywords",
    "Document Type",
    "Language of Original Document",
    "EID",
]


def export_articles_to_scopus(
    corpus: Corpus,
    include_periphery: bool = True,
    out_path: Path | str = "scopus/scopus.csv",
) -> int:
    """Emit the corpus in a Scopus-compatible CSV layout.

    Columns with no counterpart in the harvested metadata (Volume, Issue,
    Author Keywords) are emitted empty so downstream tools still parse the
    file.
    """
    rows = []
    for w in _selected_works(corpus, include_periphery):
        year = w.publication_date[:4] if w.publication_date else ""
        rows.append(
            [
                LIST_JOIN.join(a.display_name for a in w.authorships),
                LIST_JOIN.join(a.author_id for a in w.authorships),
                w.title,
                year,
                _venue_name(w),
                "",
                "",
                w.citation_count,
                w.doi or "",
                w.doi or w.id,
                w.abstract or "",
                "",
                w.type,
                w.language or "",
                w.id,
            ]
        )
    return _write_rows(out_path, list(SCOPUS_COLUMNS), rows)
