"""Polite HTTP fetching for the crawl stage.

One request is in flight per host at a time and consecutive requests to
the same host are separated by a configurable delay.  robots.txt is
honoured unless explicitly disabled.  Failures are split into retryable
(network trouble, 5xx) and permanent (4xx, robots denial, bad URL) so a
crawl loop can decide what to do with each.
"""

from __future__ import annotations

import logging
import threading
import time
from urllib.parse import urlsplit
from urllib.robotparser import RobotFileParser

import requests

from .extract import RawPage

logger = logging.getLogger(__name__)

DEFAULT_POLITENESS_MS = 1000
DEFAULT_TIMEOUT = 30.0
USER_AGENT = "newsbitext/0.1 (+corpus research crawler)"


class FetchError(Exception):
    """Base class for fetch failures."""


class RetryableFetchError(FetchError):
    """Transient failure; the same request may succeed later."""


class PermanentFetchError(FetchError):
    """The request will never succeed; do not retry."""


class PoliteFetcher:
    """Serialises requests per host and enforces an inter-request delay."""

    def __init__(
        self,
        politeness_ms: int = DEFAULT_POLITENESS_MS,
        timeout: float = DEFAULT_TIMEOUT,
        respect_robots: bool = True,
        user_agent: str = USER_AGENT,
    ) -> None:
        if politeness_ms < 0:
            raise ValueError("politeness_ms must be >= 0")
        self.politeness_ms = politeness_ms
        self.timeout = timeout
        self.respect_robots = respect_robots
        self.user_agent = user_agent
        self._session = requests.Session()
        self._session.headers["User-Agent"] = user_agent
        self._state_lock = threading.Lock()
        self._host_locks: dict[str, threading.Lock] = {}
        self._last_request: dict[str, float] = {}
        self._robots: dict[str, RobotFileParser | None] = {}

    def _host_lock(self, host: str) -> threading.Lock:
        with self._state_lock:
            if host not in self._host_locks:
                self._host_locks[host] = threading.Lock()
            return self._host_locks[host]

    def _throttle(self, host: str) -> None:
        last = self._last_request.get(host)
        if last is not None:
            wait = last + self.politeness_ms / 1000.0 - time.monotonic()
            if wait > 0:
                time.sleep(wait)
        self._last_request[host] = time.monotonic()

    def _robots_for(self, scheme: str, host: str) -> RobotFileParser | None:
        # Called with the host lock held, so the robots.txt request itself
        # counts toward the politeness gap.
        if host in self._robots:
            return self._robots[host]
        parser: RobotFileParser | None = None
        robots_url = f"{scheme}://{host}/robots.txt"
        self._throttle(host)
        try:
            response = self._session.get(robots_url, timeout=self.timeout)
        except requests.RequestException as exc:
            logger.warning("robots.txt unreachable for %s (%s); assuming allowed", host, exc)
        else:
            if response.status_code < 400:
                parser = RobotFileParser(robots_url)
                parser.parse(response.text.splitlines())
        self._robots[host] = parser
        return parser

    def fetch(self, url: str) -> RawPage:
        parts = urlsplit(url)
        if parts.scheme not in ("http", "https"):
            raise PermanentFetchError(f"unsupported URL scheme in {url!r}")
        if not parts.netloc:
            raise PermanentFetchError(f"no host in {url!r}")
        host = parts.netloc

        with self._host_lock(host):
            if self.respect_robots:
                robots = self._robots_for(parts.scheme, host)
                if robots is not None and not robots.can_fetch(self.user_agent, url):
                    raise PermanentFetchError(f"{url} disallowed by robots.txt")
            self._throttle(host)
            try:
                response = self._session.get(url, timeout=self.timeout)
            except requests.RequestException as exc:
                raise RetryableFetchError(f"request to {url} failed: {exc}") from exc

        if 500 <= response.status_code:
            raise RetryableFetchError(f"{url} returned {response.status_code}")
        if 400 <= response.status_code:
            raise PermanentFetchError(f"{url} returned {response.status_code}")
        return RawPage(url=url, html=response.content, fetched_at=time.time())


def fetch_all(
    fetcher: PoliteFetcher,
    urls: list[str],
    retries: int = 2,
    backoff_s: float = 1.0,
) -> tuple[list[RawPage], list[tuple[str, str]]]:
    """Fetch every URL, retrying transient failures.

    Returns the fetched pages plus a list of (url, reason) for URLs that
    were given up on.  Order of pages follows the input order.
    """
    pages: list[RawPage] = []
    failures: list[tuple[str, str]] = []
    for url in urls:
        attempt = 0
        while True:
            try:
                pages.append(fetcher.fetch(url))
                break
            except PermanentFetchError as exc:
                logger.error("giving up on %s: %s", url, exc)
                failures.append((url, str(exc)))
                break
            except RetryableFetchError as exc:
                attempt += 1
                if attempt > retries:
                    logger.error("giving up on %s after %d attempts: %s", url, attempt, exc)
                    failures.append((url, str(exc)))
                    break
                logger.warning("retrying %s (%s)", url, exc)
                time.sleep(backoff_s)
    return pages, failures
