"""Field extraction from crawled news pages.

A declarative site profile names the markup queries for each field and
the calendar the site publishes dates in.  Extraction populates every
article field present on the page, falling back to JSON-LD and ``<meta>``
tags when the primary selectors find nothing.  Dates are unified to
Gregorian ISO-8601 regardless of the source calendar.
"""

from __future__ import annotations

import datetime as _dt
import hashlib
import json
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from urllib.parse import urlsplit

from .calendars import (
    kurdish_to_gregorian,
    solar_hijri_to_gregorian,
)
from .corpus import LANGUAGES, ArticleRecord, make_article_id, normalize_url
from .htmldoc import Node, parse_html

logger = logging.getLogger(__name__)

CALENDARS = frozenset({"gregorian", "solar-hijri", "kurdish"})

_EASTERN_DIGITS = str.maketrans("٠١٢٣٤٥٦٧٨٩۰۱۲۳۴۵۶۷۸۹", "01234567890123456789")
_WHITESPACE_RUN = re.compile(r"\s+")


class ExtractionError(Exception):
    """A page could not be turned into a valid article record."""


class ProfileError(Exception):
    """A site profile file is malformed."""


@dataclass(frozen=True)
class RawPage:
    url: str
    html: bytes
    fetched_at: float


@dataclass(frozen=True)
class SiteProfile:
    site: str
    tag_selector: str
    title_selector: str
    lead_selector: str
    content_selector: str
    dialect_url_pattern: dict[str, str]
    calendar: str
    date_selector: str = "time"
    date_formats: tuple[str, ...] = ("%Y-%m-%d",)
    default_language: str | None = None
    start_urls: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        for name in ("tag_selector", "title_selector", "lead_selector",
                     "content_selector", "date_selector"):
            if not getattr(self, name).strip():
                raise ProfileError(f"{self.site}: {name} must be non-empty")
        if self.calendar not in CALENDARS:
            raise ProfileError(
                f"{self.site}: calendar {self.calendar!r} not one of {sorted(CALENDARS)}"
            )


def load_profile(path: str | Path) -> SiteProfile:
    with open(path, encoding="utf-8") as handle:
        data = json.load(handle)
    try:
        return SiteProfile(
            site=data["site"],
            tag_selector=data["tag_selector"],
            title_selector=data["title_selector"],
            lead_selector=data["lead_selector"],
            content_selector=data["content_selector"],
            dialect_url_pattern=dict(data["dialect_url_pattern"]),
            calendar=data["calendar"],
            date_selector=data.get("date_selector", "time"),
            date_formats=tuple(data.get("date_formats", ("%Y-%m-%d",))),
            default_language=data.get("default_language"),
            start_urls=tuple(data.get("start_urls", ())),
        )
    except KeyError as exc:
        raise ProfileError(f"{path}: missing profile key {exc}") from exc


# --- date handling ----------------------------------------------------------


def _format_to_regex(fmt: str) -> re.Pattern[str]:
    pattern = ""
    i = 0
    while i < len(fmt):
        if fmt[i] == "%" and i + 1 < len(fmt):
            token = fmt[i + 1]
            if token == "Y":
                pattern += r"(?P<y>\d{3,4})"
            elif token == "m":
                pattern += r"(?P<m>\d{1,2})"
            elif token == "d":
                pattern += r"(?P<d>\d{1,2})"
            elif token == "%":
                pattern += "%"
            else:
                raise ProfileError(f"unsupported date format token %{token}")
            i += 2
        else:
            pattern += re.escape(fmt[i])
            i += 1
    return re.compile(pattern)


def normalize_date(
    raw: str, calendar: str, formats: tuple[str, ...] = ("%Y-%m-%d",)
) -> str:
    """Parse ``raw`` in the given calendar and return a Gregorian ISO date."""
    if calendar not in CALENDARS:
        raise ExtractionError(f"unknown calendar {calendar!r}")
    cleaned = raw.strip().translate(_EASTERN_DIGITS)
    for fmt in formats:
        if calendar == "gregorian":
            try:
                return _dt.datetime.strptime(cleaned, fmt).date().isoformat()
            except ValueError:
                continue
        match = _format_to_regex(fmt).fullmatch(cleaned)
        if not match:
            continue
        year, month, day = (int(match.group(g)) for g in ("y", "m", "d"))
        try:
            if calendar == "solar-hijri":
                gy, gm, gd = solar_hijri_to_gregorian(year, month, day)
            else:
                gy, gm, gd = kurdish_to_gregorian(year, month, day)
        except ValueError as exc:
            raise ExtractionError(f"invalid {calendar} date {cleaned!r}: {exc}") from exc
        return _dt.date(gy, gm, gd).isoformat()
    raise ExtractionError(
        f"date {raw!r} matches none of the {calendar} formats {list(formats)}"
    )


# --- JSON-LD and meta fallbacks ---------------------------------------------


def _iter_jsonld_objects(root: Node):
    for script in root.find_all('script[type="application/ld+json"]'):
        try:
            data = json.loads(script.text(skip=frozenset()))
        except json.JSONDecodeError:
            continue
        queue = data if isinstance(data, list) else [data]
        for item in queue:
            if isinstance(item, dict):
                graph = item.get("@graph")
                if isinstance(graph, list):
                    yield from (g for g in graph if isinstance(g, dict))
                yield item


def _jsonld_article(root: Node) -> dict:
    candidates = list(_iter_jsonld_objects(root))
    for item in candidates:
        if str(item.get("@type", "")).lower().endswith("article"):
            return item
    for item in candidates:
        if "headline" in item or "datePublished" in item:
            return item
    return {}


def _meta_content(root: Node, *selectors: str) -> str | None:
    for selector in selectors:
        node = root.find(selector)
        if node is not None:
            content = node.attrs.get("content", "").strip()
            if content:
                return content
    return None


def _collapse(text: str) -> str:
    return _WHITESPACE_RUN.sub(" ", text).strip()


def _selected_text(root: Node, selector: str) -> str | None:
    node = root.find(selector)
    if node is None:
        return None
    text = _collapse(node.text())
    return text or None


# --- extraction -------------------------------------------------------------


def _fallback_title(root: Node, jsonld: dict) -> str:
    headline = jsonld.get("headline")
    if isinstance(headline, str) and headline.strip():
        return _collapse(headline)
    meta = _meta_content(root, 'meta[property="og:title"]', 'meta[name="title"]')
    if meta:
        return _collapse(meta)
    raise ExtractionError("no title found via selector, JSON-LD or meta tags")


def _extract_tags(root: Node, profile: SiteProfile, jsonld: dict) -> tuple[str, ...]:
    tags: list[str] = []
    for node in root.find_all(profile.tag_selector):
        if node.tag == "meta":
            raw = node.attrs.get("content", "")
            tags.extend(part for part in raw.split(","))
        else:
            tags.append(node.text())
    if not tags:
        keywords = jsonld.get("keywords")
        if isinstance(keywords, str):
            tags.extend(keywords.split(","))
        elif isinstance(keywords, list):
            tags.extend(str(k) for k in keywords)
    if not tags:
        meta = _meta_content(root, 'meta[name="keywords"]')
        if meta:
            tags.extend(meta.split(","))
    cleaned = []
    for tag in tags:
        tag = _collapse(tag).lower()
        if tag and tag not in cleaned:
            cleaned.append(tag)
    return tuple(cleaned)


def _extract_date(root: Node, profile: SiteProfile, jsonld: dict) -> str:
    visible: str | None = None
    node = root.find(profile.date_selector)
    if node is not None:
        raw = node.attrs.get("datetime", "").strip() or _collapse(node.text())
        if raw:
            visible = normalize_date(raw, profile.calendar, profile.date_formats)

    jsonld_date: str | None = None
    published = jsonld.get("datePublished")
    if not isinstance(published, str):
        published = _meta_content(root, 'meta[property="article:published_time"]')
    if isinstance(published, str) and published.strip():
        try:
            jsonld_date = _dt.date.fromisoformat(published.strip()[:10]).isoformat()
        except ValueError:
            logger.warning("unparseable JSON-LD datePublished: %r", published)

    if visible and jsonld_date and visible != jsonld_date:
        logger.warning(
            "date disagreement: page says %s, JSON-LD says %s; keeping JSON-LD",
            visible, jsonld_date,
        )
    date = jsonld_date or visible
    if not date:
        raise ExtractionError("no publication date found")
    return date


def _content_paragraphs(root: Node, profile: SiteProfile) -> tuple[tuple[str, ...], Node | None]:
    selected = root.find_all(profile.content_selector)
    if not selected:
        return (), None
    if all(node.tag == "p" for node in selected):
        paragraphs = [_collapse(p.text()) for p in selected]
        return tuple(p for p in paragraphs if p), None
    container = selected[0]
    paragraphs = [_collapse(p.text()) for p in container.find_all("p")]
    return tuple(p for p in paragraphs if p), container


def _extract_images(container: Node | None, page_url: str, jsonld: dict) -> tuple[str, ...]:
    urls: list[str] = []
    if container is not None:
        for img in container.find_all("img"):
            src = img.attrs.get("src", "").strip()
            if src:
                urls.append(normalize_url(src, base=page_url))
    if not urls:
        image = jsonld.get("image")
        raw: list[str] = []
        if isinstance(image, str):
            raw = [image]
        elif isinstance(image, dict) and isinstance(image.get("url"), str):
            raw = [image["url"]]
        elif isinstance(image, list):
            raw = [u for u in image if isinstance(u, str)]
        urls.extend(normalize_url(u, base=page_url) for u in raw)
    deduped = []
    for url in urls:
        if url not in deduped:
            deduped.append(url)
    return tuple(deduped)


def _detect_language(url: str, profile: SiteProfile) -> str:
    for segment in urlsplit(url).path.split("/"):
        if segment in profile.dialect_url_pattern:
            return profile.dialect_url_pattern[segment]
    if profile.default_language:
        return profile.default_language
    raise ExtractionError(f"no dialect URL segment matched in {url!r}")


def extract_article(page: RawPage, profile: SiteProfile) -> ArticleRecord:
    """Extract one article from a crawled page; deterministic per input."""
    root = parse_html(page.html)
    jsonld = _jsonld_article(root)

    title = _selected_text(root, profile.title_selector)
    if title is None:
        title = _fallback_title(root, jsonld)

    lead = _selected_text(root, profile.lead_selector)
    if lead is None:
        description = jsonld.get("description")
        if isinstance(description, str) and description.strip():
            lead = _collapse(description)

    language = _detect_language(page.url, profile)
    if language not in LANGUAGES:
        raise ExtractionError(f"profile mapped {page.url!r} to unknown language {language!r}")

    content, container = _content_paragraphs(root, profile)

    return ArticleRecord(
        id=make_article_id(profile.site, page.url),
        tags=_extract_tags(root, profile, jsonld),
        original_link=page.url,
        language=language,
        title=title,
        lead=lead,
        date=_extract_date(root, profile, jsonld),
        content=content,
        images=_extract_images(container, page.url, jsonld),
        site=profile.site,
    )


# --- raw page storage (crawl output / extract input) ------------------------


def page_basename(url: str) -> str:
    return hashlib.sha256(url.encode("utf-8")).hexdigest()[:16]


def save_raw_page(page: RawPage, directory: str | Path) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    base = page_basename(page.url)
    html_path = directory / f"{base}.html"
    html_path.write_bytes(page.html)
    meta = {"url": page.url, "fetched_at": page.fetched_at}
    (directory / f"{base}.meta.json").write_text(
        json.dumps(meta, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    return html_path


def iter_raw_pages(directory: str | Path):
    """Yield RawPages saved by ``save_raw_page``, ordered by file name."""
    directory = Path(directory)
    for meta_path in sorted(directory.glob("*.meta.json")):
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        html_path = meta_path.with_name(meta_path.name.replace(".meta.json", ".html"))
        yield RawPage(
            url=meta["url"],
            html=html_path.read_bytes(),
            fetched_at=float(meta.get("fetched_at", 0.0)),
        )
