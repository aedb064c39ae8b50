"""Normalized article records and their on-disk JSON representation.

A corpus file holds the articles of one site in one language:

    {"site": "anf", "language": "ckb", "articles": [...]}

Article objects use exactly the keys ``id``, ``tags``, ``original_link``,
``language``, ``title``, ``lead``, ``date``, ``content``, ``images``,
``site``; ``lead`` is omitted when absent.  Files are UTF-8 with LF line
endings.  Loading validates every record and either returns a fully
valid corpus or raises with all offending records listed; there are no
partial loads.
"""

from __future__ import annotations

import datetime as _dt
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from urllib.parse import urldefrag, urljoin

LANGUAGES = frozenset({"ckb", "kmr", "eng"})

_ARTICLE_KEYS = frozenset(
    {"id", "tags", "original_link", "language", "title", "lead", "date",
     "content", "images", "site"}
)
_REQUIRED_KEYS = _ARTICLE_KEYS - {"lead"}


class CorpusError(Exception):
    pass


class CorpusParseError(CorpusError):
    """Malformed JSON; carries the byte offset of the failure."""

    def __init__(self, path: str, message: str, byte_offset: int):
        super().__init__(f"{path}: {message} (byte offset {byte_offset})")
        self.path = path
        self.byte_offset = byte_offset


class CorpusValidationError(CorpusError):
    """One or more records violated the article invariants."""

    def __init__(self, path: str, problems: list[tuple[int | None, str, str]]):
        self.path = path
        self.problems = problems
        lines = [
            f"  [{'file' if index is None else index}] {article_id or '<no id>'}: {reason}"
            for index, article_id, reason in problems
        ]
        super().__init__(f"{path}: {len(problems)} validation problem(s)\n" + "\n".join(lines))


def normalize_url(url: str, base: str | None = None) -> str:
    """Resolve against ``base``, drop the fragment, keep the query string."""
    if base:
        url = urljoin(base, url)
    return urldefrag(url.strip())[0]


def make_article_id(site: str, original_link: str) -> str:
    digest = hashlib.sha256(normalize_url(original_link).encode("utf-8")).hexdigest()
    return f"{site}-{digest[:16]}"


@dataclass(frozen=True)
class ArticleRecord:
    id: str
    tags: tuple[str, ...]
    original_link: str
    language: str
    title: str
    lead: str | None
    date: str
    content: tuple[str, ...]
    images: tuple[str, ...]
    site: str

    def problems(self) -> list[str]:
        """Invariant violations, empty when the record is valid."""
        found = []
        if not self.id:
            found.append("empty id")
        if self.language not in LANGUAGES:
            found.append(f"unknown language code {self.language!r}")
        if not self.title.strip():
            found.append("title empty after trimming")
        try:
            parsed = _dt.date.fromisoformat(self.date)
            if f"{parsed.isoformat()}" != self.date:
                found.append(f"date not in YYYY-MM-DD form: {self.date!r}")
        except (ValueError, TypeError):
            found.append(f"date does not parse as a Gregorian date: {self.date!r}")
        for tag in self.tags:
            if tag != tag.strip().lower():
                found.append(f"tag not lowercased/trimmed: {tag!r}")
        normalized = [normalize_url(u) for u in self.images]
        if len(set(normalized)) != len(normalized):
            found.append("duplicate image URLs after normalization")
        return found

    def to_json_obj(self) -> dict:
        obj = {
            "id": self.id,
            "tags": list(self.tags),
            "original_link": self.original_link,
            "language": self.language,
            "title": self.title,
            "date": self.date,
            "content": list(self.content),
            "images": list(self.images),
            "site": self.site,
        }
        if self.lead is not None:
            obj["lead"] = self.lead
        return obj


def _article_from_obj(obj: dict) -> tuple[ArticleRecord | None, list[str]]:
    if not isinstance(obj, dict):
        return None, ["article is not a JSON object"]
    problems = []
    unknown = set(obj) - _ARTICLE_KEYS
    if unknown:
        problems.append(f"unknown keys: {sorted(unknown)}")
    missing = _REQUIRED_KEYS - set(obj)
    if missing:
        problems.append(f"missing keys: {sorted(missing)}")
    if problems:
        return None, problems
    record = ArticleRecord(
        id=str(obj["id"]),
        tags=tuple(str(t) for t in obj["tags"]),
        original_link=str(obj["original_link"]),
        language=str(obj["language"]),
        title=str(obj["title"]),
        lead=None if obj.get("lead") is None else str(obj["lead"]),
        date=str(obj["date"]),
        content=tuple(str(p) for p in obj["content"]),
        images=tuple(str(u) for u in obj["images"]),
        site=str(obj["site"]),
    )
    return record, record.problems()


@dataclass(frozen=True)
class CorpusFile:
    site: str
    language: str
    articles: tuple[ArticleRecord, ...] = field(default_factory=tuple)

    def problems(self) -> list[tuple[int | None, str, str]]:
        found: list[tuple[int | None, str, str]] = []
        if self.language not in LANGUAGES:
            found.append((None, "", f"unknown corpus language {self.language!r}"))
        seen: dict[str, int] = {}
        for index, article in enumerate(self.articles):
            for reason in article.problems():
                found.append((index, article.id, reason))
            if article.site != self.site:
                found.append((index, article.id, f"article site {article.site!r} != corpus site {self.site!r}"))
            if article.language != self.language:
                found.append(
                    (index, article.id, f"article language {article.language!r} != corpus language {self.language!r}")
                )
            if article.id in seen:
                found.append((index, article.id, f"duplicate id (first at index {seen[article.id]})"))
            else:
                seen[article.id] = index
        return found


def load_articles(path: str | Path) -> CorpusFile:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        byte_offset = len(text[: exc.pos].encode("utf-8"))
        raise CorpusParseError(str(path), exc.msg, byte_offset) from exc

    if not isinstance(data, dict) or not {"site", "language", "articles"} <= set(data):
        raise CorpusValidationError(
            str(path), [(None, "", 'top level must be {"site", "language", "articles"}')]
        )
    articles = []
    problems: list[tuple[int | None, str, str]] = []
    for index, obj in enumerate(data["articles"]):
        record, record_problems = _article_from_obj(obj)
        for reason in record_problems:
            problems.append((index, obj.get("id", "") if isinstance(obj, dict) else "", reason))
        if record is not None:
            articles.append(record)
    corpus = CorpusFile(site=str(data["site"]), language=str(data["language"]), articles=tuple(articles))
    if not problems:
        problems = corpus.problems()
    if problems:
        raise CorpusValidationError(str(path), problems)
    return corpus


def save_articles(corpus: CorpusFile, path: str | Path) -> None:
    problems = corpus.problems()
    if problems:
        raise CorpusValidationError(str(path), problems)
    payload = {
        "site": corpus.site,
        "language": corpus.language,
        "articles": [a.to_json_obj() for a in corpus.articles],
    }
    text = json.dumps(payload, ensure_ascii=False, indent=2) + "\n"
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def build_lookup(corpora: list[CorpusFile]) -> dict[str, ArticleRecord]:
    """Map article id -> record across several corpus files."""
    lookup: dict[str, ArticleRecord] = {}
    for corpus in corpora:
        for article in corpus.articles:
            lookup[article.id] = article
    return lookup
