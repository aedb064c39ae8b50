"""Command-line entry point exposing the pipeline stages as subcommands.

Stages read and write plain files, so any step can be rerun in
isolation; given identical inputs and flags every subcommand other than
``crawl`` produces byte-identical outputs.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import alignment as al
from . import corpus as co
from . import corpus_ops as ops
from . import extract as ex
from . import fetch
from . import mining
from . import pairs as pr
from .config import ConfigError, load_config
from .translit import TableError, load_table, transliterate

_DOMAIN_ERRORS = (
    ConfigError,
    TableError,
    co.CorpusParseError,
    co.CorpusValidationError,
    ex.ExtractionError,
    ex.ProfileError,
    mining.MiningConfigError,
    mining.CandidateFileError,
    al.SheetError,
    al.AnnotationFileError,
    al.AlignmentImportError,
    al.SegmentOpError,
    pr.PairFileError,
    ops.SplitError,
    ops.ExportError,
    OSError,
    ValueError,
)


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def _rules(args, config) -> pr.ValidationConfig:
    return pr.ValidationConfig(
        max_tokens=args.max_tokens if args.max_tokens is not None else config.max_tokens,
        max_ratio=args.max_ratio if args.max_ratio is not None else config.max_ratio,
    )


def _load_lookup(paths: list[str]) -> dict[str, co.ArticleRecord]:
    return co.build_lookup([co.load_articles(p) for p in paths])


# --- subcommand handlers -----------------------------------------------------


def _cmd_crawl(args, config) -> int:
    profile = ex.load_profile(args.profile)
    urls = list(args.url or profile.start_urls)
    if not urls:
        print("error: no URLs given and the profile lists no start_urls", file=sys.stderr)
        return 1
    fetcher = fetch.PoliteFetcher(
        politeness_ms=args.politeness_ms, respect_robots=not args.no_robots
    )
    pages, failures = fetch.fetch_all(fetcher, urls)
    for page in pages:
        ex.save_raw_page(page, args.out)
    print(f"fetched {len(pages)} pages, {len(failures)} failures")
    return 0 if pages or not urls else 1


def _cmd_extract(args, config) -> int:
    profile = ex.load_profile(args.profile)
    by_language: dict[str, list[co.ArticleRecord]] = {}
    failures = 0
    for page in ex.iter_raw_pages(args.raw):
        try:
            article = ex.extract_article(page, profile)
        except ex.ExtractionError as exc:
            failures += 1
            print(f"skipping {page.url}: {exc}", file=sys.stderr)
            continue
        by_language.setdefault(article.language, []).append(article)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    total = 0
    for language, articles in sorted(by_language.items()):
        articles.sort(key=lambda a: a.id)
        corpus = co.CorpusFile(articles=tuple(articles), site=profile.site, language=language)
        path = out_dir / f"{profile.site}.{language}.json"
        co.save_articles(corpus, path)
        total += len(articles)
        print(f"wrote {len(articles)} {language} articles to {path}")
    print(f"extracted {total} articles, {failures} pages skipped")
    if failures and args.strict:
        return 1
    return 0


def _cmd_translit(args, config) -> int:
    table = load_table(args.table) if args.table else None
    _write_text(args.outfile, transliterate(_read_text(args.infile), table))
    return 0


def _cmd_mine(args, config) -> int:
    corpus_a = co.load_articles(args.src)
    corpus_b = co.load_articles(args.tgt)
    k = args.k if args.k is not None else config.k
    min_score = args.min_score if args.min_score is not None else config.min_score
    sets = mining.mine(corpus_a, corpus_b, k=k, min_score=min_score)
    if args.out:
        mining.save_candidate_sets(sets, args.out)
        print(f"wrote {len(sets)} candidate sets to {args.out}")
    if args.sheet:
        lookup = co.build_lookup([corpus_a, corpus_b])
        _write_text(args.sheet, al.generate_sheet(sets, lookup))
        print(f"wrote annotation sheet to {args.sheet}")
    return 0


def _cmd_sheet(args, config) -> int:
    sets = mining.load_candidate_sets(args.candidates)
    lookup = _load_lookup(args.corpus)
    _write_text(args.out, al.generate_sheet(sets, lookup))
    print(f"wrote {sum(len(s.candidates) for s in sets)} rows to {args.out}")
    return 0


def _cmd_import_sheet(args, config) -> int:
    annotations = al.import_sheet(_read_text(args.sheet), annotator=args.annotator)
    al.save_annotations(annotations, args.out)
    print(f"imported {len(annotations)} verdicts to {args.out}")
    return 0


def _cmd_align_inputs(args, config) -> int:
    annotations = al.load_annotations(args.annotations)
    lookup = _load_lookup(args.corpus)
    written = al.emit_alignment_inputs(annotations, lookup, args.out_dir)
    for pair, paths in sorted(written.items()):
        print(f"{pair}: " + ", ".join(str(p) for p in paths))
    if not written:
        print("no equivalent/possible annotations; nothing to align")
    return 0


def _cmd_import_alignment(args, config) -> int:
    if args.src_lang not in co.LANGUAGES or args.tgt_lang not in co.LANGUAGES:
        print(f"error: languages must be in {sorted(co.LANGUAGES)}", file=sys.stderr)
        return 1
    links = al.parse_links(_read_text(args.links))
    imported, quarantined = al.import_alignment(
        _read_text(args.src_doc),
        _read_text(args.tgt_doc),
        links,
        al.parse_index(_read_text(args.src_index)),
        al.parse_index(_read_text(args.tgt_index)),
        args.src_lang,
        args.tgt_lang,
        _rules(args, config),
    )
    pr.save_pairs(imported, args.out)
    quarantine_path = args.quarantine or f"{args.out}.quarantine.tsv"
    pr.save_quarantine(quarantined, quarantine_path)
    print(
        f"imported {len(imported)} pairs to {args.out}; "
        f"{len(quarantined)} quarantined to {quarantine_path}"
    )
    return 0


def _cmd_validate(args, config) -> int:
    pairs = pr.load_pairs(args.pairs)
    rules = _rules(args, config)
    bad = 0
    for i, pair in enumerate(pairs):
        for violation in pr.validate_pair(pair, rules):
            print(f"pair {i}: {violation}")
            bad += 1
    print(f"{len(pairs)} pairs checked, {bad} violations")
    return 1 if bad else 0


def _cmd_stats(args, config) -> int:
    pairs = pr.load_pairs(args.pairs)
    annotations = al.load_annotations(args.annotations) if args.annotations else None
    stats = ops.compute_stats(pairs, annotations)
    for key, value in stats.rows():
        print(f"{key}\t{value}")
    if args.report:
        from .report import render_report

        for path in render_report(stats, pairs, args.report):
            print(f"wrote {path}", file=sys.stderr)
    return 0


def _cmd_split(args, config) -> int:
    pairs = pr.load_pairs(args.pairs)
    ratio = args.ratio if args.ratio is not None else config.split_ratio
    seed = args.seed if args.seed is not None else config.seed
    manifest = ops.split(pairs, ratio=ratio, seed=seed)
    ops.save_manifest(manifest, args.out)
    print(
        f"split {manifest.n} pairs into {len(manifest.train_ids)} train / "
        f"{len(manifest.test_ids)} test (seed {seed})"
    )
    return 0


def _cmd_export(args, config) -> int:
    if args.format in ("bitext", "tsv"):
        if not args.pairs or not args.split or not args.out_dir:
            print(
                f"error: --format {args.format} needs --pairs, --split and --out-dir",
                file=sys.stderr,
            )
            return 2
        pairs = pr.load_pairs(args.pairs)
        manifest = ops.load_manifest(args.split)
        exporter = ops.export_bitext if args.format == "bitext" else ops.export_split_tsv
        for path in exporter(pairs, manifest, args.out_dir):
            print(f"wrote {path}")
        return 0
    if not args.annotations or not args.corpus or not args.out:
        print("error: --format headlines needs --annotations, --corpus and --out",
              file=sys.stderr)
        return 2
    annotations = al.load_annotations(args.annotations)
    lookup = _load_lookup(args.corpus)
    headline_pairs = al.headline_pairs(annotations, lookup)
    pr.save_pairs(headline_pairs, args.out)
    print(f"wrote {len(headline_pairs)} headline pairs to {args.out}")
    return 0


def _cmd_dedup(args, config) -> int:
    pairs = pr.load_pairs(args.pairs)
    kept, removed = ops.dedup(pairs)
    pr.save_pairs(kept, args.out)
    print(f"removed {removed} duplicates, kept {len(kept)}")
    return 0


def _cmd_serve(args, config) -> int:
    from .service import serve

    serve(args.data, host=args.host, port=args.port, rules=_rules(args, config))
    return 0


# --- parser ------------------------------------------------------------------


def _add_rules_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--max-tokens", type=int, default=None,
                        help="token cap per side (guideline 1)")
    parser.add_argument("--max-ratio", type=float, default=None,
                        help="token ratio cap between sides (guideline 2)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="newsbitext",
        description="Mine, adjudicate and package parallel news corpora.",
    )
    parser.add_argument("--config", default=None, help="pipeline config JSON")
    parser.add_argument("--verbose", action="store_true", help="log at INFO level")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("crawl", help="fetch pages listed in a site profile")
    p.add_argument("--profile", required=True)
    p.add_argument("--out", required=True, help="directory for raw pages")
    p.add_argument("--url", action="append", help="fetch this URL (repeatable)")
    p.add_argument("--politeness-ms", type=int, default=fetch.DEFAULT_POLITENESS_MS)
    p.add_argument("--no-robots", action="store_true")
    p.set_defaults(func=_cmd_crawl)

    p = sub.add_parser("extract", help="turn raw pages into article corpora")
    p.add_argument("--profile", required=True)
    p.add_argument("--raw", required=True, help="directory of crawled pages")
    p.add_argument("--out", required=True, help="directory for corpus JSON files")
    p.add_argument("--strict", action="store_true", help="fail if any page is skipped")
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("translit", help="transliterate Arabic-script Kurdish text")
    p.add_argument("--in", dest="infile", required=True, help="input file or -")
    p.add_argument("--out", dest="outfile", required=True, help="output file or -")
    p.add_argument("--table", default=None, help="custom transliteration table")
    p.set_defaults(func=_cmd_translit)

    p = sub.add_parser("mine", help="rank cross-language candidate articles")
    p.add_argument("--src", required=True, help="source-language corpus JSON")
    p.add_argument("--tgt", required=True, help="target-language corpus JSON")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--min-score", type=float, default=None)
    p.add_argument("--out", default=None, help="candidate sets JSON")
    p.add_argument("--sheet", default=None, help="also write an annotation sheet TSV")
    p.set_defaults(func=_cmd_mine)

    p = sub.add_parser("sheet", help="render candidate sets as an annotation sheet")
    p.add_argument("--candidates", required=True)
    p.add_argument("--corpus", action="append", required=True,
                   help="corpus JSON for id lookup (repeatable)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_sheet)

    p = sub.add_parser("import-sheet", help="read verdicts from a filled sheet")
    p.add_argument("--sheet", required=True)
    p.add_argument("--out", required=True, help="annotations JSON")
    p.add_argument("--annotator", default="sheet")
    p.set_defaults(func=_cmd_import_sheet)

    p = sub.add_parser("align-inputs", help="emit alignment documents for matched pairs")
    p.add_argument("--annotations", required=True)
    p.add_argument("--corpus", action="append", required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_align_inputs)

    p = sub.add_parser("import-alignment", help="turn alignment links into pairs")
    p.add_argument("--src-doc", required=True)
    p.add_argument("--tgt-doc", required=True)
    p.add_argument("--src-index", required=True)
    p.add_argument("--tgt-index", required=True)
    p.add_argument("--links", required=True)
    p.add_argument("--src-lang", required=True)
    p.add_argument("--tgt-lang", required=True)
    p.add_argument("--out", required=True, help="pairs TSV")
    p.add_argument("--quarantine", default=None)
    _add_rules_flags(p)
    p.set_defaults(func=_cmd_import_alignment)

    p = sub.add_parser("validate", help="check pairs against the guidelines")
    p.add_argument("--pairs", required=True)
    _add_rules_flags(p)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("stats", help="corpus statistics, optionally with figures")
    p.add_argument("--pairs", required=True)
    p.add_argument("--annotations", default=None)
    p.add_argument("--report", default=None,
                   help="directory for stats.tsv and PNG figures")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("split", help="seeded train/test split")
    p.add_argument("--pairs", required=True)
    p.add_argument("--ratio", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True, help="split manifest JSON")
    p.set_defaults(func=_cmd_split)

    p = sub.add_parser("export", help="write bitext, split TSVs or headline pairs")
    p.add_argument("--format", choices=("bitext", "tsv", "headlines"), default="bitext")
    p.add_argument("--pairs", default=None)
    p.add_argument("--split", default=None)
    p.add_argument("--out-dir", default=None)
    p.add_argument("--annotations", default=None)
    p.add_argument("--corpus", action="append", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_export)

    p = sub.add_parser("dedup", help="drop exact duplicate pairs")
    p.add_argument("--pairs", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_dedup)

    p = sub.add_parser("serve", help="run the annotation HTTP service")
    p.add_argument("--data", required=True, help="directory with candidates.json and corpora")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    _add_rules_flags(p)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args, config)
    except _DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
