"""Human adjudication and sentence alignment workflow.

Candidate sets become tab-separated annotation sheets; filled sheets
come back as headline verdicts; verdicts select article pairs whose
text is emitted as a pair of plain-text alignment documents; a link
file over those documents' sentence segments yields translation pairs,
validated against the extraction guidelines.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from pathlib import Path

from .corpus import ArticleRecord
from .mining import MATCHED_VIA, CandidateSet
from .pairs import TranslationPair, ValidationConfig, validate_pair

logger = logging.getLogger(__name__)

VERDICTS = ("equivalent", "possible", "none")
SHEET_COLUMNS = (
    "source_id",
    "source_headline",
    "rank",
    "target_id",
    "target_headline",
    "score",
    "matched_via",
    "verdict",
)

_SENTENCE_BOUNDARY = re.compile(r"(?<=[.!?؟])\s+")


class SheetError(Exception):
    """An annotation sheet cannot be generated or read."""


class AnnotationFileError(Exception):
    """An annotation JSON file is malformed."""


class AlignmentImportError(Exception):
    """A link file or segment reference is invalid."""


class SegmentOpError(Exception):
    """A merge/split/edit operation on segments is invalid."""


@dataclass(frozen=True)
class HeadlineAnnotation:
    source_id: str
    target_id: str
    verdict: str
    annotator: str
    timestamp: str | None = None
    matched_via: str | None = None

    def __post_init__(self) -> None:
        if self.verdict not in VERDICTS:
            raise ValueError(f"verdict must be one of {VERDICTS}, got {self.verdict!r}")
        if self.matched_via is not None and self.matched_via not in MATCHED_VIA:
            raise ValueError(f"unknown matched_via {self.matched_via!r}")


# --- annotation sheets --------------------------------------------------------


def _cell(text: str) -> str:
    """Make a string safe as a TSV cell (no tabs, no line breaks)."""
    return re.sub(r"[\t\r\n]+", " ", text).strip()


def generate_sheet(sets: list[CandidateSet], articles: dict[str, ArticleRecord]) -> str:
    """Render candidate sets as a TSV sheet with an empty verdict column."""
    lines = ["\t".join(SHEET_COLUMNS)]
    for candidate_set in sets:
        source = articles.get(candidate_set.source_id)
        if source is None:
            raise SheetError(f"unknown source article id {candidate_set.source_id!r}")
        for rank, candidate in enumerate(candidate_set.candidates, start=1):
            target = articles.get(candidate.target_id)
            if target is None:
                raise SheetError(f"unknown target article id {candidate.target_id!r}")
            lines.append(
                "\t".join(
                    (
                        source.id,
                        _cell(source.title),
                        str(rank),
                        target.id,
                        _cell(target.title),
                        f"{candidate.score:.4f}",
                        candidate.matched_via,
                        "",
                    )
                )
            )
    return "\n".join(lines) + "\n"


def import_sheet(text: str, annotator: str = "sheet") -> list[HeadlineAnnotation]:
    """Read verdicts out of a filled sheet.

    Blank verdicts are skipped; anything outside the verdict vocabulary
    or a repeated (source, target) verdict is an error naming the row.
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise SheetError("empty sheet: header row required")
    header = tuple(lines[0].split("\t"))
    if header != SHEET_COLUMNS:
        raise SheetError(f"unexpected header {list(header)}; expected {list(SHEET_COLUMNS)}")
    annotations: list[HeadlineAnnotation] = []
    seen: set[tuple[str, str]] = set()
    for row_no, line in enumerate(lines[1:], start=2):
        fields = line.split("\t")
        if len(fields) != len(SHEET_COLUMNS):
            raise SheetError(
                f"row {row_no}: expected {len(SHEET_COLUMNS)} columns, got {len(fields)}"
            )
        verdict = fields[7].strip()
        if not verdict:
            continue
        if verdict not in VERDICTS:
            raise SheetError(
                f"row {row_no}: verdict must be one of {list(VERDICTS)}, got {verdict!r}"
            )
        key = (fields[0], fields[3])
        if key in seen:
            raise SheetError(f"row {row_no}: duplicate verdict for pair {key}")
        seen.add(key)
        matched_via = fields[6] if fields[6] in MATCHED_VIA else None
        annotations.append(
            HeadlineAnnotation(
                source_id=fields[0],
                target_id=fields[3],
                verdict=verdict,
                annotator=annotator,
                matched_via=matched_via,
            )
        )
    return annotations


def annotations_to_json_obj(annotations: list[HeadlineAnnotation]) -> list[dict]:
    return [
        {
            "source_id": a.source_id,
            "target_id": a.target_id,
            "verdict": a.verdict,
            "annotator": a.annotator,
            "timestamp": a.timestamp,
            "matched_via": a.matched_via,
        }
        for a in annotations
    ]


def save_annotations(annotations: list[HeadlineAnnotation], path: str | Path) -> None:
    text = json.dumps(annotations_to_json_obj(annotations), ensure_ascii=False, indent=2)
    Path(path).write_text(text + "\n", encoding="utf-8", newline="\n")


def load_annotations(path: str | Path) -> list[HeadlineAnnotation]:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise AnnotationFileError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(data, list):
        raise AnnotationFileError(f"{path}: expected a JSON list")
    annotations: list[HeadlineAnnotation] = []
    for i, obj in enumerate(data):
        try:
            annotations.append(
                HeadlineAnnotation(
                    source_id=obj["source_id"],
                    target_id=obj["target_id"],
                    verdict=obj["verdict"],
                    annotator=obj.get("annotator", "unknown"),
                    timestamp=obj.get("timestamp"),
                    matched_via=obj.get("matched_via"),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise AnnotationFileError(f"{path}: annotation {i} malformed: {exc}") from exc
    return annotations


# --- alignment documents ------------------------------------------------------


@dataclass(frozen=True)
class IndexRow:
    """Maps one article to its 1-based inclusive line range in a document."""

    article_id: str
    first_line: int
    last_line: int


@dataclass(frozen=True)
class AlignmentDocuments:
    src_text: str
    tgt_text: str
    src_index: tuple[IndexRow, ...]
    tgt_index: tuple[IndexRow, ...]


def article_blocks(article: ArticleRecord) -> list[str]:
    """The article text as alignment paragraphs: lead first, then content."""
    blocks = []
    if article.lead:
        blocks.append(article.lead)
    blocks.extend(article.content)
    return blocks


def matched_article_pairs(
    annotations: list[HeadlineAnnotation], articles: dict[str, ArticleRecord]
) -> list[tuple[ArticleRecord, ArticleRecord]]:
    """Resolve adjudicated pairs worth aligning, in a fixed order.

    Keeps equivalent and possible verdicts (both select articles with the
    same content), drops duplicates of the same article pair, and sorts by
    (source id, target id) so every consumer sees one canonical order.
    """
    seen: set[tuple[str, str]] = set()
    pairs: list[tuple[ArticleRecord, ArticleRecord]] = []
    for annotation in annotations:
        if annotation.verdict not in ("equivalent", "possible"):
            continue
        key = (annotation.source_id, annotation.target_id)
        if key in seen:
            continue
        seen.add(key)
        try:
            source = articles[annotation.source_id]
            target = articles[annotation.target_id]
        except KeyError as exc:
            raise AlignmentImportError(f"annotation references unknown article {exc}") from exc
        pairs.append((source, target))
    pairs.sort(key=lambda pair: (pair[0].id, pair[1].id))
    return pairs


def build_documents(
    article_pairs: list[tuple[ArticleRecord, ArticleRecord]],
) -> AlignmentDocuments:
    """Concatenate matched articles into two parallel plain-text documents.

    Paragraphs are separated by one newline and articles by two; pairs
    where either side has no text are skipped on both sides so article
    order stays identical across the documents.
    """
    src_lines: list[str] = []
    tgt_lines: list[str] = []
    src_index: list[IndexRow] = []
    tgt_index: list[IndexRow] = []
    for source, target in article_pairs:
        src_blocks = article_blocks(source)
        tgt_blocks = article_blocks(target)
        if not src_blocks or not tgt_blocks:
            logger.warning(
                "skipping pair %s / %s: empty article text", source.id, target.id
            )
            continue
        for lines, index, article, blocks in (
            (src_lines, src_index, source, src_blocks),
            (tgt_lines, tgt_index, target, tgt_blocks),
        ):
            if lines:
                lines.append("")
            first = len(lines) + 1
            lines.extend(block.replace("\n", " ") for block in blocks)
            index.append(IndexRow(article.id, first, len(lines)))
    return AlignmentDocuments(
        src_text="\n".join(src_lines) + "\n" if src_lines else "",
        tgt_text="\n".join(tgt_lines) + "\n" if tgt_lines else "",
        src_index=tuple(src_index),
        tgt_index=tuple(tgt_index),
    )


def render_index(rows: tuple[IndexRow, ...]) -> str:
    lines = ["article_id\tfirst_line\tlast_line"]
    lines.extend(f"{r.article_id}\t{r.first_line}\t{r.last_line}" for r in rows)
    return "\n".join(lines) + "\n"


def parse_index(text: str) -> tuple[IndexRow, ...]:
    lines = [line for line in text.split("\n") if line]
    if not lines or lines[0] != "article_id\tfirst_line\tlast_line":
        raise AlignmentImportError("index file: bad or missing header")
    rows = []
    for line_no, line in enumerate(lines[1:], start=2):
        fields = line.split("\t")
        if len(fields) != 3:
            raise AlignmentImportError(f"index file line {line_no}: expected 3 columns")
        rows.append(IndexRow(fields[0], int(fields[1]), int(fields[2])))
    return tuple(rows)


def article_for_line(index: tuple[IndexRow, ...], line: int) -> str:
    """Article id owning a 1-based document line."""
    for row in index:
        if row.first_line <= line <= row.last_line:
            return row.article_id
    raise AlignmentImportError(f"line {line} belongs to no indexed article")


def emit_alignment_inputs(
    annotations: list[HeadlineAnnotation],
    articles: dict[str, ArticleRecord],
    out_dir: str | Path,
) -> dict[str, list[Path]]:
    """Write alignment document pairs plus index files, one set per language pair.

    Files are named ``<src>-<tgt>.<lang>.txt`` and ``<src>-<tgt>.<lang>.index.tsv``.
    Returns the written paths keyed by language pair.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    by_pair: dict[tuple[str, str], list[HeadlineAnnotation]] = {}
    for annotation in annotations:
        if annotation.verdict not in ("equivalent", "possible"):
            continue
        try:
            src_lang = articles[annotation.source_id].language
            tgt_lang = articles[annotation.target_id].language
        except KeyError as exc:
            raise AlignmentImportError(f"annotation references unknown article {exc}") from exc
        by_pair.setdefault((src_lang, tgt_lang), []).append(annotation)

    written: dict[str, list[Path]] = {}
    for (src_lang, tgt_lang), group in sorted(by_pair.items()):
        docs = build_documents(matched_article_pairs(group, articles))
        stem = f"{src_lang}-{tgt_lang}"
        paths = [
            out_dir / f"{stem}.{src_lang}.txt",
            out_dir / f"{stem}.{tgt_lang}.txt",
            out_dir / f"{stem}.{src_lang}.index.tsv",
            out_dir / f"{stem}.{tgt_lang}.index.tsv",
        ]
        paths[0].write_text(docs.src_text, encoding="utf-8", newline="\n")
        paths[1].write_text(docs.tgt_text, encoding="utf-8", newline="\n")
        paths[2].write_text(render_index(docs.src_index), encoding="utf-8", newline="\n")
        paths[3].write_text(render_index(docs.tgt_index), encoding="utf-8", newline="\n")
        written[stem] = paths
    return written


# --- sentence segments and link import ----------------------------------------


@dataclass
class SegmentState:
    """One alignable sentence with its provenance and edit history."""

    text: str
    line: int
    merged_from: int = 1
    edited: bool = False


def segment_sentences(paragraph: str) -> list[str]:
    """Split a paragraph on sentence-final punctuation followed by whitespace."""
    pieces = _SENTENCE_BOUNDARY.split(paragraph)
    return [piece.strip() for piece in pieces if piece.strip()]


def segments_from_document(text: str) -> list[SegmentState]:
    """Pre-segment an alignment document; ``line`` is the 1-based source line."""
    segments: list[SegmentState] = []
    for line_no, line in enumerate(text.split("\n"), start=1):
        for sentence in segment_sentences(line):
            segments.append(SegmentState(text=sentence, line=line_no))
    return segments


def apply_segment_ops(segments: list[SegmentState], ops: list[dict]) -> None:
    """Apply merge/split/edit operations in place.

    merge: {"op": "merge", "first": i, "count": n} joins n segments from i.
    split: {"op": "split", "index": i, "at": c} cuts the text at offset c.
    edit:  {"op": "edit", "index": i, "text": t} replaces the text, flagging it.
    Indices are 0-based positions in the current segment list.
    """
    for op_no, op in enumerate(ops):
        kind = op.get("op")
        if kind == "merge":
            first, count = op.get("first"), op.get("count", 2)
            if not isinstance(first, int) or not isinstance(count, int) or count < 2:
                raise SegmentOpError(f"op {op_no}: merge needs integer first and count >= 2")
            if first < 0 or first + count > len(segments):
                raise SegmentOpError(f"op {op_no}: merge range {first}+{count} out of range")
            merged = segments[first:first + count]
            segments[first:first + count] = [
                SegmentState(
                    text=" ".join(s.text for s in merged),
                    line=merged[0].line,
                    merged_from=sum(s.merged_from for s in merged),
                    edited=any(s.edited for s in merged),
                )
            ]
        elif kind == "split":
            index, at = op.get("index"), op.get("at")
            if not isinstance(index, int) or not isinstance(at, int):
                raise SegmentOpError(f"op {op_no}: split needs integer index and at")
            if index < 0 or index >= len(segments):
                raise SegmentOpError(f"op {op_no}: split index {index} out of range")
            segment = segments[index]
            head, tail = segment.text[:at].strip(), segment.text[at:].strip()
            if not head or not tail:
                raise SegmentOpError(f"op {op_no}: split at {at} leaves an empty side")
            segments[index:index + 1] = [
                SegmentState(head, segment.line, segment.merged_from, segment.edited),
                SegmentState(tail, segment.line, 1, segment.edited),
            ]
        elif kind == "edit":
            index, text = op.get("index"), op.get("text")
            if not isinstance(index, int) or not isinstance(text, str):
                raise SegmentOpError(f"op {op_no}: edit needs integer index and string text")
            if index < 0 or index >= len(segments):
                raise SegmentOpError(f"op {op_no}: edit index {index} out of range")
            if not text.strip():
                raise SegmentOpError(f"op {op_no}: edit text must be non-empty")
            segments[index].text = text.strip()
            segments[index].edited = True
        else:
            raise SegmentOpError(f"op {op_no}: unknown op {kind!r}")


Link = tuple[tuple[int, ...], tuple[int, ...]]


def parse_links(text: str) -> list[Link]:
    """Read a link file: per line, comma-joined 0-based source and target indices."""
    links: list[Link] = []
    for line_no, line in enumerate(text.split("\n"), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise AlignmentImportError(
                f"links line {line_no}: expected <src indices> TAB <tgt indices>"
            )
        try:
            src = tuple(int(x) for x in parts[0].split(",") if x.strip())
            tgt = tuple(int(x) for x in parts[1].split(",") if x.strip())
        except ValueError as exc:
            raise AlignmentImportError(f"links line {line_no}: non-integer index") from exc
        if not src or not tgt:
            raise AlignmentImportError(f"links line {line_no}: empty side")
        links.append((src, tgt))
    return links


def render_links(links: list[Link]) -> str:
    lines = [
        ",".join(str(i) for i in src) + "\t" + ",".join(str(i) for i in tgt)
        for src, tgt in links
    ]
    return "\n".join(lines) + "\n" if lines else ""


def pairs_from_segments(
    src_segments: list[SegmentState],
    tgt_segments: list[SegmentState],
    links: list[Link],
    src_index: tuple[IndexRow, ...],
    tgt_index: tuple[IndexRow, ...],
    src_language: str,
    tgt_language: str,
    rules: ValidationConfig | None = None,
) -> tuple[list[TranslationPair], list[tuple[TranslationPair, list[str]]]]:
    """Turn links over segments into validated translation pairs.

    Pairs that break a guideline go to the quarantine list with their
    violations instead of the main list; nothing lands in both.
    """
    rules = rules or ValidationConfig()
    pairs: list[TranslationPair] = []
    quarantined: list[tuple[TranslationPair, list[str]]] = []
    for link_no, (src_idx, tgt_idx) in enumerate(links):
        for side, idx, limit in (("source", src_idx, len(src_segments)),
                                 ("target", tgt_idx, len(tgt_segments))):
            for i in idx:
                if i < 0 or i >= limit:
                    raise AlignmentImportError(
                        f"link {link_no}: {side} index {i} out of range (0..{limit - 1})"
                    )
        src_parts = [src_segments[i] for i in src_idx]
        tgt_parts = [tgt_segments[i] for i in tgt_idx]
        pair = TranslationPair(
            src_text=" ".join(s.text for s in src_parts),
            tgt_text=" ".join(s.text for s in tgt_parts),
            src_language=src_language,
            tgt_language=tgt_language,
            src_article=article_for_line(src_index, src_parts[0].line),
            tgt_article=article_for_line(tgt_index, tgt_parts[0].line),
            edited=any(s.edited for s in src_parts + tgt_parts),
            merged_from=(
                sum(s.merged_from for s in src_parts),
                sum(s.merged_from for s in tgt_parts),
            ),
        )
        violations = validate_pair(pair, rules)
        if violations:
            quarantined.append((pair, violations))
        else:
            pairs.append(pair)
    return pairs, quarantined


def import_alignment(
    src_doc: str,
    tgt_doc: str,
    links: list[Link],
    src_index: tuple[IndexRow, ...],
    tgt_index: tuple[IndexRow, ...],
    src_language: str,
    tgt_language: str,
    rules: ValidationConfig | None = None,
) -> tuple[list[TranslationPair], list[tuple[TranslationPair, list[str]]]]:
    """Import a completed alignment over a document pair."""
    return pairs_from_segments(
        segments_from_document(src_doc),
        segments_from_document(tgt_doc),
        links,
        src_index,
        tgt_index,
        src_language,
        tgt_language,
        rules,
    )


def headline_pairs(
    annotations: list[HeadlineAnnotation], articles: dict[str, ArticleRecord]
) -> list[TranslationPair]:
    """Headline-level translation pairs from equivalent verdicts only.

    Possible verdicts select articles whose bodies are worth aligning but
    whose headlines are not literal translations, so they are excluded.
    """
    seen: set[tuple[str, str]] = set()
    pairs: list[TranslationPair] = []
    for annotation in annotations:
        if annotation.verdict != "equivalent":
            continue
        key = (annotation.source_id, annotation.target_id)
        if key in seen:
            continue
        seen.add(key)
        try:
            source = articles[annotation.source_id]
            target = articles[annotation.target_id]
        except KeyError as exc:
            raise AlignmentImportError(f"annotation references unknown article {exc}") from exc
        pairs.append(
            TranslationPair(
                src_text=source.title,
                tgt_text=target.title,
                src_language=source.language,
                tgt_language=target.language,
                src_article=source.id,
                tgt_article=target.id,
            )
        )
    pairs.sort(key=lambda p: (p.src_article, p.tgt_article))
    return pairs
