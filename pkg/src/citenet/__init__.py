"""citenet: citation and co-authorship network analytics over OpenAlex data."""

from ._kern import BACKEND as KERNEL_BACKEND
from .analytics import (
    ArticleFilter,
    KeywordScore,
    TimeSeries,
    aggregate_article_counts,
    aggregate_topic_counts,
    extract_keywords,
    keyword_trend_series,
    rank_top_authors,
)
from .centrality import (
    CentralityParams,
    CentralityReport,
    compute_centralities,
    extract_metrics_to_csv,
    graph_statistics,
)
from .charts import ChartStyle
from .community import Clustering, cluster_graph, extract_clusters_to_csv
from .corpus import (
    Corpus,
    Work,
    export_articles_csv,
    export_articles_to_scopus,
    export_authors_csv,
    export_institutions_csv,
    export_venues_csv,
    load_corpus,
)
from .graphs import (
    Graph,
    DiGraph,
    create_citation_graph,
    create_coauthorship_graph,
    read_gml,
    write_gml,
)
from .openalex import (
    OpenAlexClient,
    QuerySpec,
    expand_lite_regex,
    query_openalex,
    reconstruct_abstract,
    retrieve_articles,
)

__version__ = "0.1.0"
