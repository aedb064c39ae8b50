"""Corpus packaging: statistics, deduplication, splits and bitext export.

Statistics use plain whitespace tokenization, which is the only scheme
reproducible without extra tooling; comparisons against other token
counts should keep that in mind.  The train/test split is a seeded
Fisher-Yates shuffle over a fixed pseudorandom generator so the same
seed gives byte-identical manifests on any machine.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from pathlib import Path

from .alignment import HeadlineAnnotation
from .pairs import TranslationPair, save_pairs, token_count

SPLIT_ALGORITHM = "mt19937-fisher-yates"
SPLIT_CONVENTION = "train=ceil(ratio*n)"


class SplitError(Exception):
    """A split cannot be produced or does not cover the pairs."""


class ExportError(Exception):
    """Pairs cannot be written in the requested export format."""


@dataclass(frozen=True)
class CorpusStats:
    language_pair: str
    n_headline_pairs: int
    n_sentence_pairs: int
    n_tokens_side_a: int
    n_tokens_side_b: int
    mean_tokens_per_sentence_a: float | None
    mean_tokens_per_sentence_b: float | None
    n_image_matched_articles: int

    def rows(self) -> list[tuple[str, str]]:
        """Key/value rows for delimited output."""
        def fmt(mean: float | None) -> str:
            return "undefined" if mean is None else f"{mean:.2f}"

        return [
            ("language_pair", self.language_pair),
            ("n_headline_pairs", str(self.n_headline_pairs)),
            ("n_sentence_pairs", str(self.n_sentence_pairs)),
            ("n_tokens_side_a", str(self.n_tokens_side_a)),
            ("n_tokens_side_b", str(self.n_tokens_side_b)),
            ("mean_tokens_per_sentence_a", fmt(self.mean_tokens_per_sentence_a)),
            ("mean_tokens_per_sentence_b", fmt(self.mean_tokens_per_sentence_b)),
            ("n_image_matched_articles", str(self.n_image_matched_articles)),
        ]


def compute_stats(
    pairs: list[TranslationPair],
    annotations: list[HeadlineAnnotation] | None = None,
) -> CorpusStats:
    """Aggregate counts over one language pair's translation pairs.

    Image-matched articles are the distinct article ids behind kept
    verdicts whose candidate was admitted by the image gate.
    """
    language_pairs = {(p.src_language, p.tgt_language) for p in pairs}
    if len(language_pairs) > 1:
        raise ValueError(f"pairs mix language pairs: {sorted(language_pairs)}")
    if pairs:
        pair_label = "-".join(next(iter(language_pairs)))
    else:
        pair_label = ""
    tokens_a = sum(token_count(p.src_text) for p in pairs)
    tokens_b = sum(token_count(p.tgt_text) for p in pairs)
    n = len(pairs)

    annotations = annotations or []
    n_headline_pairs = sum(1 for a in annotations if a.verdict == "equivalent")
    image_articles: set[str] = set()
    for annotation in annotations:
        if annotation.verdict in ("equivalent", "possible") and annotation.matched_via in (
            "image",
            "both",
        ):
            image_articles.add(annotation.source_id)
            image_articles.add(annotation.target_id)

    return CorpusStats(
        language_pair=pair_label,
        n_headline_pairs=n_headline_pairs,
        n_sentence_pairs=n,
        n_tokens_side_a=tokens_a,
        n_tokens_side_b=tokens_b,
        mean_tokens_per_sentence_a=tokens_a / n if n else None,
        mean_tokens_per_sentence_b=tokens_b / n if n else None,
        n_image_matched_articles=len(image_articles),
    )


# --- reproducible split -------------------------------------------------------


@dataclass(frozen=True)
class SplitManifest:
    seed: int
    ratio: float
    n: int
    train_ids: tuple[int, ...]
    test_ids: tuple[int, ...]
    algorithm: str = SPLIT_ALGORITHM
    convention: str = SPLIT_CONVENTION


def _randbelow(rng: random.Random, n: int) -> int:
    # Rejection sampling over getrandbits keeps the draw sequence
    # identical on every platform and Python version.
    k = n.bit_length()
    r = rng.getrandbits(k)
    while r >= n:
        r = rng.getrandbits(k)
    return r


def shuffled_indices(n: int, seed: int) -> list[int]:
    rng = random.Random(seed)
    indices = list(range(n))
    for i in range(n - 1, 0, -1):
        j = _randbelow(rng, i + 1)
        indices[i], indices[j] = indices[j], indices[i]
    return indices


def split(pairs: list[TranslationPair], ratio: float = 0.9, seed: int = 42) -> SplitManifest:
    """Partition pair indices into train and test deterministically.

    The first ceil(ratio * n) positions of the seeded permutation train;
    the rest test.  Ids are 0-based positions in the input pair list.
    """
    if not 0.0 < ratio < 1.0:
        raise SplitError(f"ratio must be strictly between 0 and 1, got {ratio}")
    n = len(pairs)
    if n < 2:
        raise SplitError(f"need at least 2 pairs to split, got {n}")
    order = shuffled_indices(n, seed)
    n_train = math.ceil(ratio * n)
    return SplitManifest(
        seed=seed,
        ratio=ratio,
        n=n,
        train_ids=tuple(order[:n_train]),
        test_ids=tuple(order[n_train:]),
    )


def save_manifest(manifest: SplitManifest, path: str | Path) -> None:
    obj = {
        "algorithm": manifest.algorithm,
        "convention": manifest.convention,
        "seed": manifest.seed,
        "ratio": manifest.ratio,
        "n": manifest.n,
        "train_ids": list(manifest.train_ids),
        "test_ids": list(manifest.test_ids),
    }
    text = json.dumps(obj, ensure_ascii=False, indent=2, sort_keys=True)
    Path(path).write_text(text + "\n", encoding="utf-8", newline="\n")


def load_manifest(path: str | Path) -> SplitManifest:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SplitError(f"{path}: not valid JSON ({exc})") from exc
    try:
        return SplitManifest(
            seed=obj["seed"],
            ratio=obj["ratio"],
            n=obj["n"],
            train_ids=tuple(obj["train_ids"]),
            test_ids=tuple(obj["test_ids"]),
            algorithm=obj.get("algorithm", SPLIT_ALGORITHM),
            convention=obj.get("convention", SPLIT_CONVENTION),
        )
    except (KeyError, TypeError) as exc:
        raise SplitError(f"{path}: manifest malformed: {exc}") from exc


def check_manifest(manifest: SplitManifest, pairs: list[TranslationPair]) -> None:
    """Raise unless the manifest is a partition of the pair indices."""
    if manifest.n != len(pairs):
        raise SplitError(
            f"manifest covers {manifest.n} pairs but {len(pairs)} were given"
        )
    train, test = set(manifest.train_ids), set(manifest.test_ids)
    if train & test:
        raise SplitError(f"train and test overlap: {sorted(train & test)[:5]}")
    missing = set(range(manifest.n)) - train - test
    if missing or len(train) + len(test) != manifest.n:
        raise SplitError("manifest does not cover every pair exactly once")


# --- exports ------------------------------------------------------------------


def export_bitext(
    pairs: list[TranslationPair], manifest: SplitManifest, out_dir: str | Path
) -> list[Path]:
    """Write train.src/train.tgt/test.src/test.tgt, one pair per line."""
    check_manifest(manifest, pairs)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    for name, ids in (("train", manifest.train_ids), ("test", manifest.test_ids)):
        for suffix, side in (("src", "src_text"), ("tgt", "tgt_text")):
            lines = []
            for i in ids:
                text = getattr(pairs[i], side)
                if "\n" in text or "\r" in text:
                    raise ExportError(
                        f"pair {i} contains a line break, which validation should have caught"
                    )
                lines.append(text)
            path = out_dir / f"{name}.{suffix}"
            path.write_text(
                "\n".join(lines) + "\n" if lines else "", encoding="utf-8", newline="\n"
            )
            written.append(path)
    return written


def export_split_tsv(
    pairs: list[TranslationPair], manifest: SplitManifest, out_dir: str | Path
) -> list[Path]:
    """Write train.tsv/test.tsv in the pair interchange format."""
    check_manifest(manifest, pairs)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, ids in (("train", manifest.train_ids), ("test", manifest.test_ids)):
        path = out_dir / f"{name}.tsv"
        save_pairs([pairs[i] for i in ids], path)
        written.append(path)
    return written


def dedup(pairs: list[TranslationPair]) -> tuple[list[TranslationPair], int]:
    """Drop exact (src_text, tgt_text) duplicates, keeping first occurrences."""
    seen: set[tuple[str, str]] = set()
    kept: list[TranslationPair] = []
    for pair in pairs:
        key = (pair.src_text, pair.tgt_text)
        if key in seen:
            continue
        seen.add(key)
        kept.append(pair)
    return kept, len(pairs) - len(kept)
