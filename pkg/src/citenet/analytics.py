"""Temporal and ranking aggregations over a corpus, plus keyword extraction.

Keyword extraction is deliberately plain: lowercase, tokenize, drop
stopwords, count n-grams corpus-wide.  No lemmatization is applied, so
singular and plural forms count separately.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .corpus import Corpus, Work

INTERVALS = ("month", "quarter", "year")

_TOKEN_RE = re.compile(r"[a-z0-9]+")

STOPWORDS = frozenset(
    """a about above after again against all am an and any are as at be because
    been before being below between both but by can cannot could did do does
    doing down during each few for from further had has have having he her here
    hers herself him himself his how i if in into is it its itself just me more
    most my myself no nor not now of off on once only or other our ours
    ourselves out over own same she should so some such than that the their
    theirs them themselves then there these they this those through to too
    under until up very was we were what when where which while who whom why
    will with you your yours yourself yourselves""".split()
)


@dataclass
class TimeSeries:
    interval: str
    points: list  # [(period label, {series name: count})]

    def series_names(self) -> list[str]:
        names: dict[str, None] = {}
        for _, counts in self.points:
            for name in counts:
                names.setdefault(name, None)
        return list(names)

    def total(self, name: str) -> int:
        return sum(counts.get(name, 0) for _, counts in self.points)


@dataclass
class KeywordScore:
    ngram: str
    count: int


@dataclass
class ArticleFilter:
    show_core: bool = True
    show_periphery: bool = True
    date_from: Optional[str] = None
    date_to: Optional[str] = None

    def admits(self, work: Work) -> bool:
        if work.is_root and not self.show_core:
            return False
        if not work.is_root and not self.show_periphery:
            return False
        if not work.publication_date:
            return False
        if self.date_from and work.publication_date < self.date_from:
            return False
        if self.date_to and work.publication_date > self.date_to:
            return False
        return True


# ---------------------------------------------------------------------------
# periods
# ---------------------------------------------------------------------------

def period_of(date: str, interval: str) -> str:
    """Map an ISO date to its period label.

    Labels are "YYYY" / "YYYY-MM" / "YYYY-Qn" so lexicographic order is
    chronological.
    """
    if interval not in INTERVALS:
        raise ValueError(f"interval must be one of {INTERVALS}")
    year = date[:4]
    if interval == "year":
        return year
    month = int(date[5:7])
    if interval == "month":
        return f"{year}-{month:02d}"
    return f"{year}-Q{(month - 1) // 3 + 1}"


def _next_period(label: str, interval: str) -> str:
    if interval == "year":
        return str(int(label) + 1)
    if interval == "month":
        year, month = int(label[:4]), int(label[5:7])
        month += 1
        if month == 13:
            year, month = year + 1, 1
        return f"{year}-{month:02d}"
    year, q = int(label[:4]), int(label[6])
    q += 1
    if q == 5:
        year, q = year + 1, 1
    return f"{year}-Q{q}"


def _period_range(start: str, end: str, interval: str) -> list[str]:
    labels = [start]
    while labels[-1] < end:
        labels.append(_next_period(labels[-1], interval))
    return labels


def _span(
    observed: list[str],
    interval: str,
    date_from: Optional[str],
    date_to: Optional[str],
) -> list[str]:
    """Continuous period labels covering the observations and any explicit
    date bounds; empty when nothing constrains the range."""
    start = period_of(date_from, interval) if date_from else None
    end = period_of(date_to, interval) if date_to else None
    if observed:
        lo, hi = min(observed), max(observed)
        start = min(start, lo) if start else lo
        end = max(end, hi) if end else hi
    if start is None or end is None:
        return []
    return _period_range(start, end, interval)


# ---------------------------------------------------------------------------
# aggregations
# ---------------------------------------------------------------------------

def aggregate_article_counts(
    corpus: Corpus,
    interval: str = "year",
    date_from: Optional[str] = None,
    date_to: Optional[str] = None,
) -> TimeSeries:
    """Root/base article counts per publication period, zero-filled."""
    filt = ArticleFilter(date_from=date_from, date_to=date_to)
    counts: dict[str, dict[str, int]] = {}
    for work in corpus.works.values():
        if not filt.admits(work):
            continue
        label = period_of(work.publication_date, interval)
        bucket = counts.setdefault(label, {"root": 0, "base": 0})
        bucket["root" if work.is_root else "base"] += 1
    labels = _span(list(counts), interval, date_from, date_to)
    points = [
        (label, counts.get(label, {"root": 0, "base": 0})) for label in labels
    ]
    return TimeSeries(interval=interval, points=points)


def aggregate_topic_counts(
    corpus: Corpus,
    level: str = "field",
    interval: str = "year",
    filters: Optional[ArticleFilter] = None,
    top_n: int = 10,
) -> TimeSeries:
    """Per-period counts of the works' primary topics at field/domain level.

    The ``top_n`` topics by total keep their own series; the remainder
    is bucketed as "other".
    """
    if level not in ("field", "domain"):
        raise ValueError("level must be 'field' or 'domain'")
    filters = filters or ArticleFilter()
    raw: dict[str, dict[str, int]] = {}
    totals: dict[str, int] = {}
    for work in corpus.works.values():
        if not filters.admits(work):
            continue
        primary = work.primary_topic()
        if primary is None:
            continue
        topic = getattr(primary, level)
        if not topic:
            continue
        label = period_of(work.publication_date, interval)
        raw.setdefault(label, {})
        raw[label][topic] = raw[label].get(topic, 0) + 1
        totals[topic] = totals.get(topic, 0) + 1
    kept = sorted(totals, key=lambda t: (-totals[t], t))[:top_n]
    kept_set = set(kept)
    labels = _span(list(raw), interval, filters.date_from, filters.date_to)
    has_other = any(t not in kept_set for t in totals)
    points = []
    for label in labels:
        bucket = {t: 0 for t in kept}
        if has_other:
            bucket["other"] = 0
        for topic, count in raw.get(label, {}).items():
            if topic in kept_set:
                bucket[topic] += count
            else:
                bucket["other"] += count
        points.append((label, bucket))
    return TimeSeries(interval=interval, points=points)


@dataclass
class AuthorRank:
    author_id: str
    display_name: str
    total: int
    by_topic: dict = field(default_factory=dict)


def rank_top_authors(
    corpus: Corpus,
    by_citations: bool = False,
    num_authors: int = 10,
    filters: Optional[ArticleFilter] = None,
    level: str = "field",
) -> list[AuthorRank]:
    """Authors ranked by work count (or citation sum), ties by author id.

    Each author's total is broken down by the primary topic of the
    contributing works at the requested level.
    """
    if num_authors < 1:
        raise ValueError("num_authors must be >= 1")
    if level not in ("field", "domain"):
        raise ValueError("level must be 'field' or 'domain'")
    filters = filters or ArticleFilter()
    entries: dict[str, AuthorRank] = {}
    for work in corpus.works.values():
        if not filters.admits(work):
            continue
        weight = work.citation_count if by_citations else 1
        primary = work.primary_topic()
        topic = getattr(primary, level) if primary else ""
        topic = topic or "other"
        for a in work.authorships:
            entry = entries.get(a.author_id)
            if entry is None:
                entry = entries[a.author_id] = AuthorRank(
                    a.author_id, a.display_name, 0
                )
            entry.total += weight
            entry.by_topic[topic] = entry.by_topic.get(topic, 0) + weight
    ranked = sorted(entries.values(), key=lambda e: (-e.total, e.author_id))
    return ranked[:num_authors]


# ---------------------------------------------------------------------------
# keywords
# ---------------------------------------------------------------------------

def _abstract_ngrams(abstract: str, lo: int, hi: int) -> list[str]:
    tokens = [
        t for t in _TOKEN_RE.findall(abstract.lower()) if t not in STOPWORDS
    ]
    grams = []
    for size in range(lo, hi + 1):
        for i in range(len(tokens) - size + 1):
            grams.append(" ".join(tokens[i : i + size]))
    return grams


def _check_ngram_range(ngram_range: tuple[int, int]) -> tuple[int, int]:
    lo, hi = ngram_range
    if not (1 <= lo <= hi <= 3):
        raise ValueError("ngram_range must satisfy 1 <= lo <= hi <= 3")
    return lo, hi


def extract_keywords(
    corpus: Corpus,
    filters: Optional[ArticleFilter] = None,
    top_n: int = 10,
    ngram_range: tuple[int, int] = (1, 2),
) -> list[KeywordScore]:
    """Most frequent abstract n-grams, ties broken lexicographically."""
    lo, hi = _check_ngram_range(ngram_range)
    filters = filters or ArticleFilter()
    counts: dict[str, int] = {}
    for work in corpus.works.values():
        if not filters.admits(work) or not work.abstract:
            continue
        for gram in _abstract_ngrams(work.abstract, lo, hi):
            counts[gram] = counts.get(gram, 0) + 1
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return [KeywordScore(ngram=g, count=c) for g, c in ranked[:top_n]]


def keyword_trend_series(
    corpus: Corpus,
    filters: Optional[ArticleFilter] = None,
    top_n: int = 10,
    ngram_range: tuple[int, int] = (1, 2),
    interval: str = "quarter",
) -> TimeSeries:
    """Per-period occurrence counts of the globally top n-grams."""
    lo, hi = _check_ngram_range(ngram_range)
    filters = filters or ArticleFilter()
    top = [s.ngram for s in extract_keywords(corpus, filters, top_n, ngram_range)]
    top_set = set(top)
    raw: dict[str, dict[str, int]] = {}
    for work in corpus.works.values():
        if not filters.admits(work) or not work.abstract:
            continue
        label = period_of(work.publication_date, interval)
        bucket = raw.setdefault(label, {})
        for gram in _abstract_ngrams(work.abstract, lo, hi):
            if gram in top_set:
                bucket[gram] = bucket.get(gram, 0) + 1
    labels = _span(list(raw), interval, filters.date_from, filters.date_to)
    points = []
    for label in labels:
        bucket = {g: raw.get(label, {}).get(g, 0) for g in top}
        points.append((label, bucket))
    return TimeSeries(interval=interval, points=points)


def timeseries_to_csv(series: TimeSeries, out_path: Path | str) -> int:
    """Period column plus one column per series name."""
    names = series.series_names()
    out_path = Path(out_path)
    if out_path.parent != Path(""):
        out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["period"] + names)
        for label, counts in series.points:
            writer.writerow([label] + [counts.get(n, 0) for n in names])
    return len(series.points)
