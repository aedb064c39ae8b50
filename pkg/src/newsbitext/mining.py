"""Cross-language document pair mining.

Articles in two languages from the same site are gated by shared
tag + publication month or by a shared image URL, then ranked by
headline similarity.  The top k candidates per source article go to
human adjudication.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

from .corpus import ArticleRecord, CorpusFile
from .similarity import gestalt_ratio
from .translit import TransliterationTable, normalize_for_match, transliterate

logger = logging.getLogger(__name__)

DEFAULT_K = 5
MATCHED_VIA = ("tag-date", "image", "both")


class MiningConfigError(Exception):
    """The two corpora cannot be mined against each other."""


class CandidateFileError(Exception):
    """A candidate-set JSON file is malformed."""


@dataclass(frozen=True)
class Candidate:
    target_id: str
    score: float
    matched_via: str


@dataclass(frozen=True)
class CandidateSet:
    source_id: str
    source_language: str
    target_language: str
    candidates: tuple[Candidate, ...]


def alignable(a: ArticleRecord, b: ArticleRecord) -> bool:
    """True iff the articles share a tag and a publication year+month."""
    if not set(a.tags) & set(b.tags):
        return False
    return a.date[:7] == b.date[:7]


def image_match(a: ArticleRecord, b: ArticleRecord) -> bool:
    """True iff the articles reference at least one identical image URL."""
    return bool(set(a.images) & set(b.images))


def headline_similarity(
    h1: str, h2: str, table: TransliterationTable | None = None
) -> float:
    """Similarity of two headlines in [0, 1].

    Both sides are transliterated (a no-op for Latin-script text) and
    normalized before the gestalt ratio is computed, so Arabic-script
    and Latin-script headlines are compared in one common form.
    """
    a = normalize_for_match(transliterate(h1, table))
    b = normalize_for_match(transliterate(h2, table))
    return gestalt_ratio(a, b)


def _gate(a: ArticleRecord, b: ArticleRecord) -> str | None:
    by_tag_date = alignable(a, b)
    by_image = image_match(a, b)
    if by_tag_date and by_image:
        return "both"
    if by_tag_date:
        return "tag-date"
    if by_image:
        return "image"
    return None


def rank_candidates(
    source: ArticleRecord,
    pool: list[ArticleRecord],
    k: int = DEFAULT_K,
    min_score: float | None = None,
    table: TransliterationTable | None = None,
) -> CandidateSet:
    """Gate and score a pool of target-language articles for one source.

    Candidates are ordered by descending similarity; ties go to the
    earlier publication date, then to the lexicographically smaller id.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    languages = {article.language for article in pool}
    if len(languages) > 1:
        raise MiningConfigError(f"pool mixes languages {sorted(languages)}")
    if source.language in languages:
        raise MiningConfigError(
            f"pool language {source.language!r} equals the source language"
        )
    scored: list[tuple[float, ArticleRecord, str]] = []
    for article in pool:
        via = _gate(source, article)
        if via is None:
            continue
        score = headline_similarity(source.title, article.title, table)
        if min_score is not None and score < min_score:
            continue
        scored.append((score, article, via))
    if not scored:
        logger.info("no gated candidates for %s", source.id)
    scored.sort(key=lambda item: (-item[0], item[1].date, item[1].id))
    target_language = next(iter(languages)) if languages else ""
    return CandidateSet(
        source_id=source.id,
        source_language=source.language,
        target_language=target_language,
        candidates=tuple(
            Candidate(target_id=article.id, score=score, matched_via=via)
            for score, article, via in scored[:k]
        ),
    )


def mine(
    corpus_a: CorpusFile,
    corpus_b: CorpusFile,
    k: int = DEFAULT_K,
    min_score: float | None = None,
    table: TransliterationTable | None = None,
) -> list[CandidateSet]:
    """Rank corpus_b candidates for every corpus_a article.

    Only sources with at least one gated candidate produce a set.
    Output is ordered by source id, so repeated runs over the same
    corpora are identical.  Scoring is pure, which keeps this loop
    safe to parallelize over source articles if it ever needs to be.
    """
    if corpus_a.site != corpus_b.site:
        raise MiningConfigError(
            f"corpora come from different sites: {corpus_a.site!r} vs {corpus_b.site!r}"
        )
    if corpus_a.language == corpus_b.language:
        raise MiningConfigError(f"both corpora are {corpus_a.language!r}")
    pool = list(corpus_b.articles)
    sets: list[CandidateSet] = []
    for source in sorted(corpus_a.articles, key=lambda a: a.id):
        candidate_set = rank_candidates(source, pool, k=k, min_score=min_score, table=table)
        if candidate_set.candidates:
            sets.append(candidate_set)
    return sets


# --- candidate set JSON interchange ------------------------------------------


def candidate_sets_to_json_obj(sets: list[CandidateSet]) -> list[dict]:
    return [
        {
            "source_id": s.source_id,
            "source_language": s.source_language,
            "target_language": s.target_language,
            "candidates": [
                {
                    "target_id": c.target_id,
                    "score": c.score,
                    "matched_via": c.matched_via,
                }
                for c in s.candidates
            ],
        }
        for s in sets
    ]


def save_candidate_sets(sets: list[CandidateSet], path: str | Path) -> None:
    text = json.dumps(candidate_sets_to_json_obj(sets), ensure_ascii=False, indent=2)
    Path(path).write_text(text + "\n", encoding="utf-8", newline="\n")


def load_candidate_sets(path: str | Path) -> list[CandidateSet]:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CandidateFileError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(data, list):
        raise CandidateFileError(f"{path}: expected a JSON list of candidate sets")
    sets: list[CandidateSet] = []
    for i, obj in enumerate(data):
        try:
            candidates = tuple(
                Candidate(
                    target_id=c["target_id"],
                    score=float(c["score"]),
                    matched_via=c["matched_via"],
                )
                for c in obj["candidates"]
            )
            sets.append(
                CandidateSet(
                    source_id=obj["source_id"],
                    source_language=obj["source_language"],
                    target_language=obj["target_language"],
                    candidates=candidates,
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CandidateFileError(f"{path}: candidate set {i} malformed: {exc}") from exc
        for candidate in sets[-1].candidates:
            if candidate.matched_via not in MATCHED_VIA:
                raise CandidateFileError(
                    f"{path}: candidate set {i}: unknown matched_via {candidate.matched_via!r}"
                )
    return sets
