"""OpenAlex harvesting client.

Builds works queries, pages through results, caches responses on disk and
assembles the root set (works matching the search) plus the base set (works
linked to a root work by a citation in either direction) into a single
corpus JSON file.

Query types map onto the works endpoint as follows:

* ``search``   -> ``works?filter=title_and_abstract.search:<text>``
* ``cite``     -> ``works?filter=cites:<work-id>``       (works citing the id)
* ``cited_by`` -> ``works?filter=cited_by:<work-id>``    (works the id cites)
"""

from __future__ import annotations

import datetime as _dt
import hashlib
import itertools
import json
import logging
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Optional

from .errors import (
    AbstractConflictError,
    BudgetExceededError,
    MalformedPatternError,
    PayloadDecodeError,
    QueryRejectedError,
    TransientFailureError,
)

logger = logging.getLogger(__name__)

OPENALEX_WORKS_URL = "https://api.openalex.org/works"

#: OpenAlex grants up to 100,000 requests per user per day.
DEFAULT_DAILY_BUDGET = 100_000

PAGE_SIZE = 200
MAX_ATTEMPTS = 3
BACKOFF_SECONDS = 1.0

CACHE_DIR_ENV = "CITENET_CACHE_DIR"
BUDGET_ENV = "CITENET_BUDGET"
FIXTURES_ENV = "CITENET_FIXTURES"

API_TYPES = ("search", "cite", "cited_by")


# ---------------------------------------------------------------------------
# lite-regex expansion
# ---------------------------------------------------------------------------

def expand_lite_regex(pattern: str) -> list[str]:
    """Expand an alternation-only pattern into plain query strings.

    The pattern is a sequence of parenthesized groups, each holding one or
    more ``|``-separated alternatives; literal text may appear between
    groups.  Expansion is the cartesian product of the groups joined in
    source order, first alternative first, with duplicates removed.

    ``"(15)( )(minute|min)( )(city)"`` expands to
    ``["15 minute city", "15 min city"]``.

    Raises:
        MalformedPatternError: on unbalanced parentheses or an empty
            alternative.
    """
    segments: list[list[str]] = []
    literal = []
    i = 0
    while i < len(pattern):
        ch = pattern[i]
        if ch == "(":
            end = pattern.find(")", i + 1)
            if end < 0:
                raise MalformedPatternError(f"unbalanced '(' at index {i}")
            group = pattern[i + 1 : end]
            if "(" in group:
                raise MalformedPatternError(f"nested '(' at index {i}")
            alternatives = group.split("|")
            if any(alt == "" for alt in alternatives):
                raise MalformedPatternError(
                    f"empty alternative in group at index {i}"
                )
            if literal:
                segments.append(["".join(literal)])
                literal = []
            segments.append(alternatives)
            i = end + 1
        elif ch == ")":
            raise MalformedPatternError(f"unbalanced ')' at index {i}")
        else:
            literal.append(ch)
            i += 1
    if literal:
        segments.append(["".join(literal)])
    if not segments:
        return [""]
    out: list[str] = []
    seen = set()
    for combo in itertools.product(*segments):
        q = "".join(combo)
        if q not in seen:
            seen.add(q)
            out.append(q)
    return out


# ---------------------------------------------------------------------------
# abstract reconstruction
# ---------------------------------------------------------------------------

def reconstruct_abstract(inverted_index: dict[str, list[int]]) -> str:
    """Rebuild abstract text from an inverted term -> positions index.

    Terms are placed at their positions and joined by single spaces; gaps
    in the position sequence collapse.

    Raises:
        AbstractConflictError: if two terms claim the same position.
    """
    by_position: dict[int, str] = {}
    for term, positions in inverted_index.items():
        for pos in positions:
            if pos in by_position and by_position[pos] != term:
                raise AbstractConflictError(
                    f"position {pos} claimed by {by_position[pos]!r} and {term!r}"
                )
            by_position[pos] = term
    return " ".join(by_position[p] for p in sorted(by_position))


# ---------------------------------------------------------------------------
# query specification and cache keys
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuerySpec:
    """One logical works query.

    ``parameter`` holds the search text for ``search`` queries and the work
    id for ``cite`` / ``cited_by`` queries.
    """

    api_type: str
    parameter: Optional[str] = None
    mail: str = ""
    from_publication_date: Optional[str] = None
    to_publication_date: Optional[str] = None
    cache: bool = True

    def __post_init__(self):
        if self.api_type not in API_TYPES:
            raise ValueError(f"api_type must be one of {API_TYPES}")
        if self.api_type in ("cite", "cited_by") and not self.parameter:
            raise ValueError(f"api_type={self.api_type} requires a work id parameter")
        if self.from_publication_date and self.to_publication_date:
            if self.from_publication_date > self.to_publication_date:
                raise ValueError("from_publication_date is after to_publication_date")

    def cache_key(self) -> str:
        """Digest of the normalized query (mail and cache flag excluded:
        they never change the result payload)."""
        canonical = json.dumps(
            {
                "api_type": self.api_type,
                "parameter": self.parameter,
                "from": self.from_publication_date,
                "to": self.to_publication_date,
            },
            sort_keys=True,
        )
        return hashlib.sha224(canonical.encode("utf-8")).hexdigest()

    def as_dict(self) -> dict:
        return {
            "api_type": self.api_type,
            "parameter": self.parameter,
            "mail": self.mail,
            "from_publication_date": self.from_publication_date,
            "to_publication_date": self.to_publication_date,
            "cache": self.cache,
        }


@dataclass
class CachedResponse:
    key: str
    fetched_at: str
    payload: bytes

    def results(self) -> list[dict]:
        try:
            return json.loads(self.payload.decode("utf-8"))
        except (ValueError, UnicodeDecodeError) as exc:
            raise PayloadDecodeError(f"cache entry {self.key} is corrupt: {exc}") from exc


def _atomic_write(path: Path, data: bytes) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


class ResponseCache:
    """Disk cache of query results, addressed by QuerySpec digest."""

    def __init__(self, directory: Path):
        self.directory = Path(directory)

    def path_for(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def get(self, key: str) -> Optional[CachedResponse]:
        path = self.path_for(key)
        if not path.exists():
            return None
        try:
            entry = json.loads(path.read_text("utf-8"))
        except ValueError as exc:
            raise PayloadDecodeError(f"cache file {path} is corrupt: {exc}") from exc
        return CachedResponse(
            key=entry["key"],
            fetched_at=entry["fetched_at"],
            payload=json.dumps(entry["results"], sort_keys=True).encode("utf-8"),
        )

    def put(self, key: str, results: list[dict], fetched_at: str) -> CachedResponse:
        self.directory.mkdir(parents=True, exist_ok=True)
        entry = {"key": key, "fetched_at": fetched_at, "results": results}
        _atomic_write(
            self.path_for(key),
            json.dumps(entry, sort_keys=True).encode("utf-8"),
        )
        return CachedResponse(
            key=key,
            fetched_at=fetched_at,
            payload=json.dumps(results, sort_keys=True).encode("utf-8"),
        )


class RequestBudget:
    """Per-day request counter persisted next to the cache."""

    def __init__(self, directory: Path, limit: int):
        self.path = Path(directory) / "request_budget.json"
        self.limit = limit

    def _load(self) -> dict:
        if self.path.exists():
            try:
                return json.loads(self.path.read_text("utf-8"))
            except ValueError:
                pass
        return {}

    def spend(self, n: int = 1) -> None:
        today = _dt.date.today().isoformat()
        state = self._load()
        count = state.get(today, 0)
        if count + n > self.limit:
            raise BudgetExceededError(
                f"daily request budget of {self.limit} exhausted ({count} used)"
            )
        self.path.parent.mkdir(parents=True, exist_ok=True)
        _atomic_write(
            self.path,
            json.dumps({today: count + n}, sort_keys=True).encode("utf-8"),
        )


# ---------------------------------------------------------------------------
# backends
# ---------------------------------------------------------------------------

class NetworkBackend:
    """Talks HTTPS to the works endpoint with cursor pagination and retry."""

    def __init__(
        self,
        session=None,
        sleeper: Callable[[float], None] = time.sleep,
        page_size: int = PAGE_SIZE,
        max_attempts: int = MAX_ATTEMPTS,
        backoff: float = BACKOFF_SECONDS,
        budget: Optional[RequestBudget] = None,
    ):
        if session is None:
            import requests

            session = requests.Session()
        self.session = session
        self.sleeper = sleeper
        self.page_size = page_size
        self.max_attempts = max_attempts
        self.backoff = backoff
        self.budget = budget
        self.request_count = 0

    def _filter_for(self, spec: QuerySpec) -> str:
        if spec.api_type == "search":
            parts = [f"title_and_abstract.search:{spec.parameter or ''}"]
            if spec.from_publication_date:
                parts.append(f"from_publication_date:{spec.from_publication_date}")
            if spec.to_publication_date:
                parts.append(f"to_publication_date:{spec.to_publication_date}")
            return ",".join(parts)
        if spec.api_type == "cite":
            return f"cites:{spec.parameter}"
        return f"cited_by:{spec.parameter}"

    def _request_page(self, params: dict) -> dict:
        delay = self.backoff
        for attempt in range(1, self.max_attempts + 1):
            if self.budget is not None:
                self.budget.spend()
            self.request_count += 1
            resp = self.session.get(OPENALEX_WORKS_URL, params=params, timeout=60)
            status = resp.status_code
            if status == 200:
                try:
                    return resp.json()
                except ValueError as exc:
                    raise PayloadDecodeError(f"malformed JSON payload: {exc}") from exc
            if status == 429 or status >= 500:
                if attempt < self.max_attempts:
                    self.sleeper(delay)
                    delay *= 2
                    continue
                raise TransientFailureError(
                    f"upstream returned {status} after {self.max_attempts} attempts"
                )
            raise QueryRejectedError(f"upstream returned {status}: {resp.text[:500]}")
        raise TransientFailureError("retry loop exhausted")  # unreachable

    def fetch(self, spec: QuerySpec) -> list[dict]:
        results: list[dict] = []
        cursor = "*"
        while cursor:
            params = {
                "filter": self._filter_for(spec),
                "per-page": self.page_size,
                "cursor": cursor,
                "mailto": spec.mail,
            }
            page = self._request_page(params)
            batch = page.get("results", [])
            results.extend(batch)
            cursor = page.get("meta", {}).get("next_cursor")
            if not batch:
                break
        return results


class FixtureBackend:
    """Replays recorded responses addressed by the same cache key.

    Fixture files are ``<key>.json`` holding either a bare list of work
    records or a ``{"results": [...], "fetched_at": ...}`` object.
    """

    def __init__(self, directory: Path):
        self.directory = Path(directory)
        self.request_count = 0

    def fetch(self, spec: QuerySpec) -> list[dict]:
        path = self.directory / f"{spec.cache_key()}.json"
        if not path.exists():
            raise QueryRejectedError(
                f"no recorded response for {spec.api_type}:{spec.parameter!r} "
                f"(expected {path.name})"
            )
        self.request_count += 1
        try:
            data = json.loads(path.read_text("utf-8"))
        except ValueError as exc:
            raise PayloadDecodeError(f"fixture {path} is corrupt: {exc}") from exc
        if isinstance(data, dict):
            return data.get("results", [])
        return data

    def fetched_at(self, spec: QuerySpec) -> Optional[str]:
        path = self.directory / f"{spec.cache_key()}.json"
        if path.exists():
            data = json.loads(path.read_text("utf-8"))
            if isinstance(data, dict):
                return data.get("fetched_at")
        return None


# ---------------------------------------------------------------------------
# work record normalization
# ---------------------------------------------------------------------------

def _normalize_work(raw: dict, is_root: bool) -> dict:
    """Map a raw works payload onto the corpus record schema."""
    venue = None
    source = (raw.get("primary_location") or {}).get("source") or {}
    if source.get("id") or source.get("display_name"):
        venue = {
            "id": source.get("id") or "",
            "display_name": source.get("display_name") or "",
        }
    authorships = []
    for a in raw.get("authorships", []):
        author = a.get("author") or {}
        if not author.get("id"):
            continue
        countries = a.get("countries") or []
        institutions = [
            {"id": i.get("id") or "", "display_name": i.get("display_name") or ""}
            for i in a.get("institutions", [])
            if i.get("id")
        ]
        authorships.append(
            {
                "author_id": author["id"],
                "display_name": author.get("display_name") or "",
                "country": countries[0] if countries else None,
                "institutions": institutions,
            }
        )
    topics = []
    for t in raw.get("topics", []):
        topics.append(
            {
                "topic": t.get("display_name") or "",
                "subfield": (t.get("subfield") or {}).get("display_name") or "",
                "field": (t.get("field") or {}).get("display_name") or "",
                "domain": (t.get("domain") or {}).get("display_name") or "",
            }
        )
    abstract = raw.get("abstract")
    if abstract is None and raw.get("abstract_inverted_index"):
        abstract = reconstruct_abstract(raw["abstract_inverted_index"])
    return {
        "id": raw.get("id") or "",
        "doi": raw.get("doi"),
        "title": raw.get("title") or raw.get("display_name") or "",
        "publication_date": raw.get("publication_date") or "",
        "language": raw.get("language"),
        "type": raw.get("type") or "",
        "venue": venue,
        "authorships": authorships,
        "topics": topics,
        "cited_by": [],
        "cite": [],
        "abstract": abstract,
        "citation_count": raw.get("cited_by_count", 0) or 0,
        "is_root": is_root,
    }


def _dedup_ids(ids: Iterable[str]) -> list[str]:
    seen = set()
    out = []
    for i in ids:
        if i and i not in seen:
            seen.add(i)
            out.append(i)
    return out


# ---------------------------------------------------------------------------
# client
# ---------------------------------------------------------------------------

class OpenAlexClient:
    """Caching client over a network or replay backend.

    A single harvest runs single-flight: requests are issued sequentially.
    Cache writes are atomic, so concurrent readers of the cache directory
    are safe.
    """

    def __init__(
        self,
        cache_dir: Optional[Path] = None,
        backend=None,
        budget_limit: Optional[int] = None,
    ):
        if cache_dir is None:
            cache_dir = Path(os.environ.get(CACHE_DIR_ENV, ".citenet_cache"))
        self.cache = ResponseCache(Path(cache_dir))
        if budget_limit is None:
            budget_limit = int(os.environ.get(BUDGET_ENV, DEFAULT_DAILY_BUDGET))
        self.budget = RequestBudget(Path(cache_dir), budget_limit)
        if backend is None:
            fixtures = os.environ.get(FIXTURES_ENV)
            if fixtures:
                backend = FixtureBackend(Path(fixtures))
            else:
                backend = NetworkBackend(budget=self.budget)
        self.backend = backend

    # -- single query ------------------------------------------------------

    def query(self, spec: QuerySpec) -> list[dict]:
        """Run one works query, exhausting pagination; honors spec.cache."""
        key = spec.cache_key()
        if spec.cache:
            hit = self.cache.get(key)
            if hit is not None:
                return hit.results()
        results = self.backend.fetch(spec)
        if spec.cache:
            fetched_at = None
            if isinstance(self.backend, FixtureBackend):
                fetched_at = self.backend.fetched_at(spec)
            if fetched_at is None:
                fetched_at = _dt.datetime.now(_dt.timezone.utc).isoformat()
            self.cache.put(key, results, fetched_at)
        return results

    def _query_fetched_at(self, spec: QuerySpec) -> Optional[str]:
        if spec.cache:
            hit = self.cache.get(spec.cache_key())
            if hit is not None:
                return hit.fetched_at
        if isinstance(self.backend, FixtureBackend):
            return self.backend.fetched_at(spec)
        return None

    # -- harvest -----------------------------------------------------------

    def retrieve_articles(
        self,
        queries: list[str],
        mail: str,
        from_publication_date: Optional[str] = None,
        to_publication_date: Optional[str] = None,
        cache: bool = True,
        out_dir: Path | str = "query_results",
    ) -> Path:
        """Harvest the root set for ``queries`` plus its citation neighbors.

        For each root work the incoming citers (``cite`` query) and the
        outgoing references (``cited_by`` query) are fetched and attached
        as the work's ``cited_by`` / ``cite`` id lists; neighbor records
        join the corpus as base-set works.  The corpus is written to
        ``<out_dir>/query_result_<digest>.json`` and the path returned.
        Per-work fetch failures are recorded in the file's fetch log and
        harvesting continues.
        """
        if not queries:
            raise ValueError("queries must be non-empty")

        root_specs = [
            QuerySpec(
                api_type="search",
                parameter=q,
                mail=mail,
                from_publication_date=from_publication_date,
                to_publication_date=to_publication_date,
                cache=cache,
            )
            for q in queries
        ]

        works: dict[str, dict] = {}
        fetch_log: list[dict] = []
        fetched_stamps: list[str] = []

        for spec in root_specs:
            for raw in self.query(spec):
                record = _normalize_work(raw, is_root=True)
                if record["id"] and record["id"] not in works:
                    works[record["id"]] = record
                elif record["id"]:
                    works[record["id"]]["is_root"] = True
            stamp = self._query_fetched_at(spec)
            if stamp:
                fetched_stamps.append(stamp)

        if not works:
            logger.warning("query returned an empty root set; writing empty corpus")

        root_ids = list(works)
        for work_id in root_ids:
            # incoming citers: works whose reference list contains work_id
            for api_type, list_field in (("cite", "cited_by"), ("cited_by", "cite")):
                spec = QuerySpec(
                    api_type=api_type,
                    parameter=work_id,
                    mail=mail,
                    cache=cache,
                )
                try:
                    neighbors = self.query(spec)
                except (QueryRejectedError, TransientFailureError, PayloadDecodeError) as exc:
                    fetch_log.append(
                        {"work_id": work_id, "api_type": api_type, "error": str(exc)}
                    )
                    continue
                ids = []
                for raw in neighbors:
                    record = _normalize_work(raw, is_root=False)
                    nid = record["id"]
                    if not nid or nid == work_id:
                        continue
                    ids.append(nid)
                    if nid not in works:
                        works[nid] = record
                works[work_id][list_field] = _dedup_ids(ids)

        digest = self._harvest_digest(queries, from_publication_date, to_publication_date)
        fetched_at = max(fetched_stamps) if fetched_stamps else ""
        document: dict = dict(sorted(works.items()))
        document["_meta"] = {
            "queries": [s.as_dict() for s in root_specs],
            "fetched_at": fetched_at,
        }
        document["_fetch_log"] = fetch_log

        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        path = out / f"query_result_{digest}.json"
        _atomic_write(
            path,
            json.dumps(document, sort_keys=True, indent=1).encode("utf-8"),
        )
        return path

    @staticmethod
    def _harvest_digest(
        queries: list[str],
        from_publication_date: Optional[str],
        to_publication_date: Optional[str],
    ) -> str:
        canonical = json.dumps(
            {
                "queries": sorted(queries),
                "from": from_publication_date,
                "to": to_publication_date,
            },
            sort_keys=True,
        )
        return hashlib.sha224(canonical.encode("utf-8")).hexdigest()


def query_openalex(spec: QuerySpec, client: Optional[OpenAlexClient] = None) -> list[dict]:
    """Module-level convenience wrapper around OpenAlexClient.query."""
    return (client or OpenAlexClient()).query(spec)


def retrieve_articles(
    queries: list[str],
    mail: str,
    from_publication_date: Optional[str] = None,
    to_publication_date: Optional[str] = None,
    cache: bool = True,
    out_dir: Path | str = "query_results",
    client: Optional[OpenAlexClient] = None,
) -> Path:
    """Module-level convenience wrapper around OpenAlexClient.retrieve_articles."""
    client = client or OpenAlexClient()
    return client.retrieve_articles(
        queries,
        mail,
        from_publication_date=from_publication_date,
        to_publication_date=to_publication_date,
        cache=cache,
        out_dir=out_dir,
    )
