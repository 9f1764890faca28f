import csv

import pytest

from citenet.analytics import (
    ArticleFilter,
    aggregate_article_counts,
    aggregate_topic_counts,
    extract_keywords,
    keyword_trend_series,
    period_of,
    rank_top_authors,
    timeseries_to_csv,
)
from citenet.corpus import Authorship, Corpus, TopicAssignment, Work


def make_corpus(works: list[Work]) -> Corpus:
    return Corpus(works={w.id: w for w in works})


def work(
    wid,
    date,
    *,
    root=True,
    abstract=None,
    citations=0,
    authors=(),
    topic=None,
):
    topics = []
    if topic:
        field_name, domain = topic
        topics = [TopicAssignment("t", "sf", field_name, domain)]
    return Work(
        id=wid,
        title=wid,
        publication_date=date,
        is_root=root,
        abstract=abstract,
        citation_count=citations,
        authorships=[Authorship(a, a.upper()) for a in authors],
        topics=topics,
    )


# ---------------------------------------------------------------------------
# period labels
# ---------------------------------------------------------------------------

def test_period_labels():
    assert period_of("2020-02-15", "year") == "2020"
    assert period_of("2020-02-15", "month") == "2020-02"
    assert period_of("2020-02-15", "quarter") == "2020-Q1"
    assert period_of("2020-12-31", "quarter") == "2020-Q4"
    with pytest.raises(ValueError):
        period_of("2020-02-15", "decade")


# ---------------------------------------------------------------------------
# article counts
# ---------------------------------------------------------------------------

def test_article_counts_example():
    corpus = make_corpus(
        [
            work("a", "2020-01-05"),
            work("b", "2020-02-20"),
            work("c", "2020-03-30"),
            work("d", "2020-05-01", root=False),
        ]
    )
    series = aggregate_article_counts(corpus, "quarter")
    assert series.points == [
        ("2020-Q1", {"root": 3, "base": 0}),
        ("2020-Q2", {"root": 0, "base": 1}),
    ]


def test_article_counts_empty_corpus():
    series = aggregate_article_counts(make_corpus([]), "quarter")
    assert series.points == []


def test_article_counts_filter_excluding_everything():
    corpus = make_corpus([work("a", "2020-01-05")])
    series = aggregate_article_counts(
        corpus, "quarter", date_from="2021-01-01", date_to="2021-06-30"
    )
    assert series.points == [
        ("2021-Q1", {"root": 0, "base": 0}),
        ("2021-Q2", {"root": 0, "base": 0}),
    ]


def test_article_counts_conservation(corpus15):
    series = aggregate_article_counts(corpus15, "quarter")
    assert series.total("root") + series.total("base") == len(corpus15)


def test_article_counts_gap_periods_zero_filled():
    corpus = make_corpus([work("a", "2020-01-05"), work("b", "2020-12-01")])
    series = aggregate_article_counts(corpus, "quarter")
    labels = [p for p, _ in series.points]
    assert labels == ["2020-Q1", "2020-Q2", "2020-Q3", "2020-Q4"]
    assert series.points[1][1] == {"root": 0, "base": 0}


def test_invalid_interval():
    with pytest.raises(ValueError):
        aggregate_article_counts(make_corpus([work("a", "2020-01-05")]), "week")


# ---------------------------------------------------------------------------
# topic counts
# ---------------------------------------------------------------------------

def test_topic_single_series():
    corpus = make_corpus(
        [
            work("a", "2020-01-05", topic=("Transportation", "Social Sciences")),
            work("b", "2020-02-05", topic=("Transportation", "Social Sciences")),
        ]
    )
    series = aggregate_topic_counts(corpus, "field", "year")
    assert series.series_names() == ["Transportation"]
    assert series.points == [("2020", {"Transportation": 2})]


def test_topic_top_n_buckets_other():
    corpus = make_corpus(
        [
            work("a", "2020-01-05", topic=("A", "d")),
            work("b", "2020-01-06", topic=("A", "d")),
            work("c", "2020-01-07", topic=("B", "d")),
            work("d", "2020-01-08", topic=("B", "d")),
            work("e", "2020-01-09", topic=("C", "d")),
        ]
    )
    series = aggregate_topic_counts(corpus, "field", "year", top_n=2)
    assert set(series.series_names()) == {"A", "B", "other"}
    assert series.points[0][1] == {"A": 2, "B": 2, "other": 1}


def test_topic_show_core_false_excludes_roots():
    corpus = make_corpus(
        [
            work("a", "2020-01-05", topic=("A", "d")),
            work("b", "2020-01-06", root=False, topic=("B", "d")),
        ]
    )
    series = aggregate_topic_counts(
        corpus, "field", "year", filters=ArticleFilter(show_core=False)
    )
    assert series.series_names() == ["B"]


def test_topic_domain_level(corpus15):
    series = aggregate_topic_counts(corpus15, "domain", "year")
    assert "Social Sciences" in series.series_names()
    with pytest.raises(ValueError):
        aggregate_topic_counts(corpus15, "subfield", "year")


def test_filter_monotonicity(corpus15):
    narrow = aggregate_article_counts(corpus15, "quarter")
    for show_periphery in (False, True):
        filt = ArticleFilter(show_periphery=show_periphery)
        series = aggregate_topic_counts(corpus15, "field", "quarter", filters=filt)
        names = series.series_names()
        if show_periphery:
            wide_totals = {n: series.total(n) for n in names}
    filt_narrow = ArticleFilter(show_periphery=False)
    series_narrow = aggregate_topic_counts(corpus15, "field", "quarter", filters=filt_narrow)
    for name in series_narrow.series_names():
        if name in wide_totals:
            assert series_narrow.total(name) <= wide_totals[name]
    assert narrow.total("root") == 5


# ---------------------------------------------------------------------------
# top authors
# ---------------------------------------------------------------------------

def test_authors_by_work_count():
    corpus = make_corpus(
        [
            work("a", "2020-01-05", authors=("x",)),
            work("b", "2020-02-05", authors=("x",)),
            work("c", "2020-03-05", authors=("x", "y")),
            work("d", "2020-04-05", authors=("y",)),
            work("e", "2020-05-05", authors=("z",)),
        ]
    )
    ranked = rank_top_authors(corpus, num_authors=2)
    assert [r.author_id for r in ranked] == ["x", "y"]
    assert ranked[0].total == 3
    assert ranked[1].total == 2


def test_authors_by_citations_reranks():
    corpus = make_corpus(
        [
            work("a", "2020-01-05", authors=("x",), citations=1),
            work("b", "2020-02-05", authors=("x",), citations=1),
            work("c", "2020-03-05", authors=("y",), citations=50),
        ]
    )
    by_works = rank_top_authors(corpus, num_authors=1)
    by_cites = rank_top_authors(corpus, by_citations=True, num_authors=1)
    assert by_works[0].author_id == "x"
    assert by_cites[0].author_id == "y"
    assert by_cites[0].total == 50


def test_authors_num_larger_than_population():
    corpus = make_corpus([work("a", "2020-01-05", authors=("x", "y"))])
    ranked = rank_top_authors(corpus, num_authors=10)
    assert len(ranked) == 2


def test_authors_tie_broken_by_id():
    corpus = make_corpus(
        [
            work("a", "2020-01-05", authors=("zz",)),
            work("b", "2020-02-05", authors=("aa",)),
        ]
    )
    ranked = rank_top_authors(corpus, num_authors=2)
    assert [r.author_id for r in ranked] == ["aa", "zz"]


def test_authors_topic_breakdown(corpus15):
    ranked = rank_top_authors(corpus15, num_authors=3, level="field")
    top = ranked[0]
    assert top.author_id in ("A1", "A2")
    assert top.total == 2
    assert top.by_topic == {"Transportation": 2}


def test_authors_num_validation(corpus15):
    with pytest.raises(ValueError):
        rank_top_authors(corpus15, num_authors=0)


# ---------------------------------------------------------------------------
# keywords
# ---------------------------------------------------------------------------

def test_keywords_bigram_hand_count():
    corpus = make_corpus(
        [
            work("a", "2020-01-05", abstract="15 minute city"),
            work("b", "2020-02-05", abstract="15 minute city"),
        ]
    )
    scores = {s.ngram: s.count for s in extract_keywords(corpus, ngram_range=(2, 2))}
    assert scores == {"15 minute": 2, "minute city": 2}


def test_keywords_empty_abstracts():
    corpus = make_corpus([work("a", "2020-01-05")])
    assert extract_keywords(corpus) == []


def test_keywords_top1_tie_lexicographic():
    corpus = make_corpus([work("a", "2020-01-05", abstract="beta alpha")])
    scores = extract_keywords(corpus, top_n=1, ngram_range=(1, 1))
    assert scores[0].ngram == "alpha"
    assert scores[0].count == 1


def test_keywords_stopwords_filtered():
    corpus = make_corpus(
        [work("a", "2020-01-05", abstract="the city of the future is the city")]
    )
    scores = {s.ngram: s.count for s in extract_keywords(corpus, ngram_range=(1, 1))}
    assert "the" not in scores
    assert scores["city"] == 2


def test_keywords_no_lemmatization():
    corpus = make_corpus(
        [work("a", "2020-01-05", abstract="smart city and smart cities")]
    )
    scores = {s.ngram: s.count for s in extract_keywords(corpus, top_n=10, ngram_range=(2, 2))}
    assert scores["smart city"] == 1
    assert scores["smart cities"] == 1


def test_keywords_range_validation(corpus15):
    with pytest.raises(ValueError):
        extract_keywords(corpus15, ngram_range=(0, 2))
    with pytest.raises(ValueError):
        extract_keywords(corpus15, ngram_range=(2, 1))
    with pytest.raises(ValueError):
        extract_keywords(corpus15, ngram_range=(1, 4))


def test_keyword_determinism(corpus15):
    a = extract_keywords(corpus15, top_n=10, ngram_range=(1, 2))
    b = extract_keywords(corpus15, top_n=10, ngram_range=(1, 2))
    assert a == b


# ---------------------------------------------------------------------------
# keyword trends
# ---------------------------------------------------------------------------

def test_keyword_trend_two_quarters():
    corpus = make_corpus(
        [
            work("a", "2020-01-05", abstract="city planning"),
            work("b", "2020-05-05", abstract="city planning"),
        ]
    )
    series = keyword_trend_series(corpus, top_n=1, ngram_range=(1, 1), interval="quarter")
    assert [p for p, _ in series.points] == ["2020-Q1", "2020-Q2"]
    assert [c["city"] for _, c in series.points] == [1, 1]


def test_keyword_trend_no_abstracts():
    corpus = make_corpus([work("a", "2020-01-05")])
    series = keyword_trend_series(corpus)
    assert series.points == []


def test_keyword_trend_zero_period_explicit():
    corpus = make_corpus(
        [
            work("a", "2020-01-05", abstract="city"),
            work("b", "2020-08-05", abstract="city"),
            work("c", "2020-05-05", abstract="nothing relevant here"),
        ]
    )
    series = keyword_trend_series(corpus, top_n=1, ngram_range=(1, 1), interval="quarter")
    counts = dict(series.points)
    assert counts["2020-Q2"]["city"] == 0


# ---------------------------------------------------------------------------
# CSV export
# ---------------------------------------------------------------------------

def test_timeseries_to_csv(tmp_path, corpus15):
    series = aggregate_article_counts(corpus15, "quarter")
    out = tmp_path / "trend.csv"
    rows = timeseries_to_csv(series, out)
    with open(out, newline="") as fh:
        parsed = list(csv.reader(fh))
    assert parsed[0] == ["period", "root", "base"]
    assert len(parsed) == rows + 1
    total = sum(int(r[1]) + int(r[2]) for r in parsed[1:])
    assert total == 15
