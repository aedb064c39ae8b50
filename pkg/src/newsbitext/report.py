"""Corpus report rendering: delimited statistics plus overview figures.

Everything is written to files; no interactive backend is ever touched,
so reports work in headless environments.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .corpus_ops import CorpusStats
from .pairs import TranslationPair, token_count


def write_stats_tsv(stats: CorpusStats, path: str | Path) -> None:
    lines = [f"{key}\t{value}" for key, value in stats.rows()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _token_lengths(pairs: list[TranslationPair]) -> tuple[list[int], list[int]]:
    return (
        [token_count(p.src_text) for p in pairs],
        [token_count(p.tgt_text) for p in pairs],
    )


def render_report(
    stats: CorpusStats, pairs: list[TranslationPair], out_dir: str | Path
) -> list[Path]:
    """Write stats.tsv plus two PNG figures into out_dir; returns the paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = [out_dir / "stats.tsv"]
    write_stats_tsv(stats, written[0])

    src_lengths, tgt_lengths = _token_lengths(pairs)
    label = stats.language_pair or "corpus"
    src_label, _, tgt_label = label.partition("-")

    fig, ax = plt.subplots(figsize=(8, 5))
    bins = range(0, max(src_lengths + tgt_lengths, default=1) + 2)
    ax.hist(src_lengths, bins=bins, alpha=0.6, label=src_label or "source")
    ax.hist(tgt_lengths, bins=bins, alpha=0.6, label=tgt_label or "target")
    ax.set_xlabel("tokens per sentence")
    ax.set_ylabel("sentence pairs")
    ax.set_title(f"Sentence length distribution ({label})")
    ax.legend()
    hist_path = out_dir / "token_lengths.png"
    fig.savefig(hist_path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    written.append(hist_path)

    fig, ax = plt.subplots(figsize=(6, 6))
    ax.scatter(src_lengths, tgt_lengths, s=8, alpha=0.4)
    upper = max(src_lengths + tgt_lengths, default=1)
    ax.plot([0, upper], [0, upper], linewidth=0.8, color="grey")
    ax.set_xlabel(f"{src_label or 'source'} tokens")
    ax.set_ylabel(f"{tgt_label or 'target'} tokens")
    ax.set_title(f"Pair length balance ({label})")
    scatter_path = out_dir / "length_balance.png"
    fig.savefig(scatter_path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    written.append(scatter_path)
    return written
