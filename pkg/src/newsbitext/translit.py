"""Sorani-to-Latin transliteration and text normalization for matching.

The rule table ships as a data file (``data/sorani_latin.tsv``) so the
letter mappings can be amended without touching code.  Three letters are
position-sensitive and handled by the engine rather than the table:

* waw (U+0648): ``w`` next to a vowel letter, ``u`` otherwise; the
  digraph ``وو`` becomes ``û`` first.
* yeh (U+06CC and Arabic variants): ``y`` next to a vowel letter,
  ``î`` otherwise.
* heh (U+0647): consonant ``h`` word-initially or before a vowel letter,
  vowel ``e`` otherwise.  This resolves the common practice of typing heh
  for the Sorani vowel ``ە``.

These are positional heuristics tuned for headline matching, not ground
truth orthography.  In particular the unwritten vowel "i" (bizroke) is
never reconstructed: recovering it needs a lexicon, and similarity
scoring tolerates its absence.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from importlib import resources

ZWNJ = "‌"

_HEH = "ه"
_WAW = "و"
_YEH_VARIANTS = frozenset("یيى")
_CONTEXTUAL = frozenset({_HEH, _WAW}) | _YEH_VARIANTS

# Unambiguous vowel graphemes used by the positional rules.
_VOWEL_GRAPHEMES = frozenset("اآأإٱەةۆێ")

SCRIPT_ARABIC = "arabic"
SCRIPT_LATIN = "latin"
SCRIPT_MIXED = "mixed"
SCRIPT_NONE = "none"


class TableError(ValueError):
    """Raised when a transliteration table file violates its format."""


@dataclass(frozen=True)
class TransliterationTable:
    """Ordered longest-match-first rewrite rules."""

    entries: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        seen: dict[str, str] = {}
        for source, target in self.entries:
            if not source:
                raise TableError("empty rule source")
            if source in seen:
                raise TableError(f"duplicate rule source: {source!r}")
            for prefix_len in range(1, len(source)):
                if source[:prefix_len] in seen:
                    raise TableError(
                        f"rule {source!r} is unreachable: its prefix "
                        f"{source[:prefix_len]!r} appears earlier"
                    )
            seen[source] = target
        object.__setattr__(self, "_lookup", dict(seen))
        object.__setattr__(self, "_max_len", max(len(s) for s, _ in self.entries))
        letters = frozenset(
            s for s, _ in self.entries if len(s) == 1 and s.isalpha()
        )
        object.__setattr__(self, "_letters", letters)

    @property
    def lookup(self) -> dict[str, str]:
        return self._lookup  # type: ignore[attr-defined]

    @property
    def max_source_len(self) -> int:
        return self._max_len  # type: ignore[attr-defined]

    @property
    def letters(self) -> frozenset[str]:
        """Single-codepoint letter sources (used for word boundaries)."""
        return self._letters  # type: ignore[attr-defined]

    @property
    def sources(self) -> tuple[str, ...]:
        return tuple(s for s, _ in self.entries)


def parse_table(text: str) -> TransliterationTable:
    entries = []
    for line in text.splitlines():
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        # A line without a TAB (editors often strip trailing ones) maps
        # its source to the empty string.
        source, _, target = line.partition("\t")
        entries.append((source, target))
    if not entries:
        raise TableError("table has no rules")
    return TransliterationTable(tuple(entries))


def load_table(path: str | None = None) -> TransliterationTable:
    """Load a rule table from ``path``, or the packaged default table."""
    if path is None:
        text = resources.files("newsbitext.data").joinpath("sorani_latin.tsv").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    return parse_table(text)


_default_table: TransliterationTable | None = None


def default_table() -> TransliterationTable:
    global _default_table
    if _default_table is None:
        _default_table = load_table()
    return _default_table


def _heh_is_consonant(text: str, i: int, table: TransliterationTable) -> bool:
    word_initial = i == 0 or text[i - 1] not in table.letters
    if word_initial:
        return True
    return i + 1 < len(text) and text[i + 1] in _VOWEL_GRAPHEMES


def _vowelish(text: str, i: int, table: TransliterationTable) -> bool:
    if i < 0 or i >= len(text):
        return False
    ch = text[i]
    if ch in _VOWEL_GRAPHEMES:
        return True
    return ch == _HEH and not _heh_is_consonant(text, i, table)


def _resolve_contextual(text: str, i: int, table: TransliterationTable) -> str:
    ch = text[i]
    if ch == _HEH:
        return "h" if _heh_is_consonant(text, i, table) else "e"
    adjacent_vowel = _vowelish(text, i - 1, table) or _vowelish(text, i + 1, table)
    if ch == _WAW:
        return "w" if adjacent_vowel else "u"
    return "y" if adjacent_vowel else "î"


def transliterate(text: str, table: TransliterationTable | None = None) -> str:
    """Rewrite Arabic-script Sorani into the Latin-based Kurdish alphabet.

    Total function: codepoints without a rule pass through unchanged, so
    Latin text is returned as-is.
    """
    if table is None:
        table = default_table()
    text = text.replace(ZWNJ, "")
    lookup = table.lookup
    out: list[str] = []
    i = 0
    n = len(text)
    while i < n:
        match = None
        for length in range(min(table.max_source_len, n - i), 0, -1):
            candidate = text[i : i + length]
            if candidate in lookup:
                match = candidate
                break
        if match is None:
            out.append(text[i])
            i += 1
        elif len(match) == 1 and match in _CONTEXTUAL:
            out.append(_resolve_contextual(text, i, table))
            i += 1
        else:
            out.append(lookup[match])
            i += len(match)
    return "".join(out)


_WHITESPACE_RUN = re.compile(r"\s+")


def normalize_for_match(text: str) -> str:
    """Case-fold and strip punctuation ahead of similarity scoring."""
    text = unicodedata.normalize("NFC", text).lower()
    chars = [" " if unicodedata.category(c).startswith("P") else c for c in text]
    return _WHITESPACE_RUN.sub(" ", "".join(chars)).strip()


def detect_script(text: str) -> str:
    """Classify by majority of letter codepoints: arabic, latin, mixed, none."""
    arabic = latin = letters = 0
    for ch in text:
        if not ch.isalpha():
            continue
        letters += 1
        name = unicodedata.name(ch, "")
        if "ARABIC" in name:
            arabic += 1
        elif "LATIN" in name:
            latin += 1
    if letters == 0:
        return SCRIPT_NONE
    if arabic > latin:
        return SCRIPT_ARABIC
    if latin > arabic:
        return SCRIPT_LATIN
    return SCRIPT_MIXED
