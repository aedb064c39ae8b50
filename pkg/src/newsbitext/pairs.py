"""Translation pairs: the unit of the final corpus.

A pair couples one source-language sentence or phrase with its
target-language counterpart, plus provenance (article ids), a flag for
annotator-edited text and the number of original segments merged into
each side.  The on-disk interchange format is a tab-separated file with
a fixed column set, UTF-8, LF line endings, no quoting.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

PAIR_COLUMNS = (
    "src_text",
    "tgt_text",
    "src_language",
    "tgt_language",
    "src_article",
    "tgt_article",
    "edited",
    "merged_from",
)

DEFAULT_MAX_TOKENS = 80
DEFAULT_MAX_RATIO = 3.0


class PairFileError(Exception):
    """A pair TSV file does not match the documented format."""


@dataclass(frozen=True)
class ValidationConfig:
    max_tokens: int = DEFAULT_MAX_TOKENS
    max_ratio: float = DEFAULT_MAX_RATIO

    def __post_init__(self) -> None:
        if self.max_tokens < 1:
            raise ValueError("max_tokens must be >= 1")
        if self.max_ratio < 1.0:
            raise ValueError("max_ratio must be >= 1.0")


@dataclass(frozen=True)
class TranslationPair:
    src_text: str
    tgt_text: str
    src_language: str
    tgt_language: str
    src_article: str
    tgt_article: str
    edited: bool = False
    merged_from: tuple[int, int] = (1, 1)


def token_count(text: str) -> int:
    return len(text.split())


def validate_pair(pair: TranslationPair, rules: ValidationConfig | None = None) -> list[str]:
    """Check a pair against the extraction guidelines.

    Returns a list of human-readable violations; an empty list means the
    pair is acceptable.  Merged and edited pairs are allowed as such, so
    only the length cap and the length-ratio cap can fire.
    """
    rules = rules or ValidationConfig()
    violations: list[str] = []
    n_src = token_count(pair.src_text)
    n_tgt = token_count(pair.tgt_text)
    if not pair.src_text.strip() or not pair.tgt_text.strip():
        violations.append("empty side: both texts must be non-empty after trimming")
        return violations
    for side, count in (("src", n_src), ("tgt", n_tgt)):
        if count > rules.max_tokens:
            violations.append(
                f"guideline 1: {side} side has {count} tokens, limit {rules.max_tokens}"
            )
    ratio = max(n_src, n_tgt) / min(n_src, n_tgt)
    if ratio > rules.max_ratio:
        violations.append(
            f"guideline 2: token ratio {ratio:.2f} exceeds limit {rules.max_ratio}"
        )
    return violations


def _field_safe(text: str) -> str:
    return text.replace("\t", " ").replace("\n", " ").replace("\r", " ")


def _pair_row(pair: TranslationPair) -> str:
    return "\t".join(
        (
            _field_safe(pair.src_text),
            _field_safe(pair.tgt_text),
            pair.src_language,
            pair.tgt_language,
            pair.src_article,
            pair.tgt_article,
            "true" if pair.edited else "false",
            f"{pair.merged_from[0]},{pair.merged_from[1]}",
        )
    )


def render_pairs(pairs: list[TranslationPair]) -> str:
    lines = ["\t".join(PAIR_COLUMNS)]
    lines.extend(_pair_row(p) for p in pairs)
    return "\n".join(lines) + "\n"


def save_pairs(pairs: list[TranslationPair], path: str | Path) -> None:
    Path(path).write_text(render_pairs(pairs), encoding="utf-8", newline="\n")


def save_quarantine(
    quarantined: list[tuple[TranslationPair, list[str]]], path: str | Path
) -> None:
    """Write rejected pairs in the pair format plus a violations column."""
    lines = ["\t".join(PAIR_COLUMNS + ("violations",))]
    for pair, violations in quarantined:
        lines.append(_pair_row(pair) + "\t" + "; ".join(violations))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _parse_merged_from(raw: str, line_no: int) -> tuple[int, int]:
    parts = raw.split(",")
    if len(parts) != 2:
        raise PairFileError(f"line {line_no}: merged_from must be two comma-joined counts")
    try:
        a, b = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise PairFileError(f"line {line_no}: merged_from counts must be integers") from exc
    if a < 1 or b < 1:
        raise PairFileError(f"line {line_no}: merged_from counts must be >= 1")
    return a, b


def parse_pairs(text: str) -> list[TranslationPair]:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise PairFileError("empty file: header row required")
    header = tuple(lines[0].split("\t"))
    if header != PAIR_COLUMNS:
        raise PairFileError(
            f"unexpected header {list(header)}; expected {list(PAIR_COLUMNS)}"
        )
    pairs: list[TranslationPair] = []
    for line_no, line in enumerate(lines[1:], start=2):
        fields = line.split("\t")
        if len(fields) != len(PAIR_COLUMNS):
            raise PairFileError(
                f"line {line_no}: expected {len(PAIR_COLUMNS)} columns, got {len(fields)}"
            )
        if fields[6] not in ("true", "false"):
            raise PairFileError(f"line {line_no}: edited must be true or false")
        pairs.append(
            TranslationPair(
                src_text=fields[0],
                tgt_text=fields[1],
                src_language=fields[2],
                tgt_language=fields[3],
                src_article=fields[4],
                tgt_article=fields[5],
                edited=fields[6] == "true",
                merged_from=_parse_merged_from(fields[7], line_no),
            )
        )
    return pairs


def load_pairs(path: str | Path) -> list[TranslationPair]:
    return parse_pairs(Path(path).read_text(encoding="utf-8"))
