"""Tweet cleansing: English filter, hash-sign removal, entity decoding and
expansion of shortened links."""

from __future__ import annotations

import html
import os
import re
import threading
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Protocol, Union
from urllib.parse import urljoin, urlsplit

from .corpus import Tweet, extract_urls

DEFAULT_SHORTENERS = frozenset(
    {"t.co", "ift.tt", "zpr.io", "bit.ly", "ow.ly", "wapo.st", "lnkd.in", "meetu.ps"}
)
DEFAULT_ENGLISH_THRESHOLD = 0.08
TIMEOUT_ENV = "TWEETPROMO_RESOLVER_TIMEOUT"

# Common English function words plus a few very frequent content words
# seen in short technical posts.
STOPWORDS = frozenset("""
a about above after again against all am an and any are as at be because been
before being below between both but by can could did do does doing down during
each few for from further had has have having he her here hers him his how i if
in into is it its itself just me more most my no nor not now of off on once only
or other our ours out over own same she should so some such than that the their
them then there these they this those through to too under until up very was we
were what when where which while who whom why will with would you your yours
yourself new using use get got like want way really one also well still much
many make made see let lets going go know need via
""".split())

_WORD_RE = re.compile(r"[^\W\d_]+(?:'[^\W\d_]+)*")


@dataclass(frozen=True)
class UrlResolution:
    original: str
    final: str = ""
    title: str = ""
    error: str = ""

    @property
    def ok(self) -> bool:
        return bool(self.final)

    @property
    def target(self) -> str:
        """The best known address: the final URL, or the original on failure."""
        return self.final or self.original


@dataclass(frozen=True)
class CleanTweet:
    original: Tweet
    text: str
    resolved_urls: tuple[UrlResolution, ...] = ()
    kept: bool = True


class UrlResolver(Protocol):
    def resolve(self, url: str) -> UrlResolution: ...


def url_host(url: str) -> str:
    parts = urlsplit(url if "://" in url else "http://" + url)
    host = (parts.hostname or "").lower()
    return host[4:] if host.startswith("www.") else host


def _fixture_key(url: str) -> str:
    url = url.strip()
    url = re.sub(r"^https?://", "", url, flags=re.IGNORECASE)
    host, _, rest = url.partition("/")
    return host.lower() + "/" + rest.rstrip("/")


class FixtureResolver:
    """Resolve links from a tab-separated table: ``short<TAB>final<TAB>title``."""

    def __init__(self, table: Optional[dict[str, tuple[str, str]]] = None):
        self._table = {_fixture_key(k): v for k, v in (table or {}).items()}
        self.lookups: list[str] = []

    @classmethod
    def from_file(cls, path) -> "FixtureResolver":
        table = {}
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) < 2:
                raise ValueError(f"{path}:{lineno}: expected short_url<TAB>final_url[<TAB>title]")
            table[parts[0].strip()] = (parts[1].strip(), parts[2].strip() if len(parts) > 2 else "")
        return cls(table)

    def resolve(self, url: str) -> UrlResolution:
        self.lookups.append(url)
        hit = self._table.get(_fixture_key(url))
        if hit is None:
            return UrlResolution(url, error="not in fixture table")
        return UrlResolution(url, hit[0], hit[1])


_TITLE_RE = re.compile(r"<title[^>]*>(.*?)</title>", re.IGNORECASE | re.DOTALL)


class LiveResolver:
    """Follow redirects over HTTP and read the landing page ``<title>``.

    Lookups are memoised per URL and at most ``max_inflight`` requests run
    at once, however many threads call :meth:`resolve`.
    """

    def __init__(self, timeout: Optional[float] = None, max_redirects: int = 3,
                 max_inflight: int = 4, session=None):
        if timeout is None:
            timeout = float(os.environ.get(TIMEOUT_ENV, "5"))
        self.timeout = timeout
        self.max_redirects = max_redirects
        self.max_inflight = max_inflight
        if session is None:
            import requests

            session = requests.Session()
            session.headers["User-Agent"] = "tweetpromo-resolver/0.1"
        self._session = session
        self._slots = threading.BoundedSemaphore(max_inflight)
        self._lock = threading.Lock()
        self._cache: dict[str, Future] = {}

    def resolve(self, url: str) -> UrlResolution:
        with self._lock:
            fut = self._cache.get(url)
            owner = fut is None
            if owner:
                fut = self._cache[url] = Future()
        if owner:
            with self._slots:
                try:
                    result = self._fetch(url)
                except Exception as exc:  # network errors degrade to a failed resolution
                    result = UrlResolution(url, error=f"{type(exc).__name__}: {exc}")
            fut.set_result(result)
        return fut.result()

    def resolve_many(self, urls: Iterable[str]) -> list[UrlResolution]:
        urls = list(urls)
        with ThreadPoolExecutor(max_workers=self.max_inflight) as pool:
            return list(pool.map(self.resolve, urls))

    def _fetch(self, url: str) -> UrlResolution:
        current = url if "://" in url else "http://" + url
        for _ in range(self.max_redirects + 1):
            resp = self._session.head(current, allow_redirects=False, timeout=self.timeout)
            if resp.status_code in (405, 501):
                resp = self._session.get(current, allow_redirects=False, timeout=self.timeout, stream=True)
                resp.close()
            location = resp.headers.get("Location")
            if resp.is_redirect and location:
                current = urljoin(current, location)
                continue
            break
        else:
            return UrlResolution(url, error=f"more than {self.max_redirects} redirects")
        if resp.status_code >= 400:
            return UrlResolution(url, error=f"HTTP {resp.status_code}")
        return UrlResolution(url, current, self._title(current))

    def _title(self, url: str) -> str:
        try:
            resp = self._session.get(url, allow_redirects=False, timeout=self.timeout, stream=True)
            chunk = next(resp.iter_content(65536, decode_unicode=False), b"")
            resp.close()
        except Exception:
            return ""
        m = _TITLE_RE.search(chunk.decode("utf-8", "replace"))
        return " ".join(html.unescape(m.group(1)).split()) if m else ""


def _decode_entities(text: str) -> str:
    # repeat until stable so double-escaped input still normalises idempotently
    while True:
        decoded = html.unescape(text)
        if decoded == text:
            return text
        text = decoded


def normalize(tweet: Union[Tweet, CleanTweet], resolver: Optional[UrlResolver] = None,
              shorteners: Iterable[str] = DEFAULT_SHORTENERS,
              english_threshold: float = DEFAULT_ENGLISH_THRESHOLD) -> CleanTweet:
    """Cleanse one tweet.

    Passing a :class:`CleanTweet` re-normalises its text and keeps the link
    resolutions already recorded, so the operation is idempotent.
    """
    known: dict[str, UrlResolution] = {}
    if isinstance(tweet, CleanTweet):
        original, text = tweet.original, tweet.text
        for r in tweet.resolved_urls:
            known[r.target.replace("#", "")] = r
    else:
        original, text = tweet, tweet.text
    shorteners = frozenset(s.lower() for s in shorteners)

    text = _decode_entities(text)
    resolutions = []
    for url in extract_urls(text):
        prior = known.get(url.replace("#", ""))
        if prior is not None:
            resolutions.append(prior)
            continue
        if url_host(url) in shorteners:
            res = resolver.resolve(url) if resolver is not None else UrlResolution(url, error="no resolver")
            if res.ok:
                text = text.replace(url, res.final, 1)
        else:
            res = UrlResolution(url, url)
        resolutions.append(res)
    text = text.replace("#", "")
    return CleanTweet(original, text, tuple(resolutions), english_filter(text, english_threshold))


def english_filter(text: str, threshold: float = DEFAULT_ENGLISH_THRESHOLD) -> bool:
    """Cheap stopword-ratio test for English text."""
    body = re.sub(r"\S*(?:https?://|\.\w{2,4}/)\S*", " ", text)
    words = [w.lower() for w in _WORD_RE.findall(body)]
    if not words:
        return False
    raw = body.split()
    if len(raw) < 4 and all(t.isascii() and t.isalnum() for t in raw):
        return True
    hits = sum(1 for w in words if w in STOPWORDS)
    return hits / len(words) >= threshold
