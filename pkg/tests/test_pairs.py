"""Sentence pair records, validation rules, and TSV round-trips."""

from __future__ import annotations

import pytest

from newsbitext.pairs import (
    PAIR_COLUMNS,
    PairFileError,
    TranslationPair,
    ValidationConfig,
    load_pairs,
    parse_pairs,
    render_pairs,
    save_pairs,
    save_quarantine,
    token_count,
    validate_pair,
)


def make_pair(**kwargs):
    base = dict(
        src_text="Yek du sê.",
        tgt_text="One two three.",
        src_language="ckb",
        tgt_language="eng",
        src_article="kp-0011223344556677",
        tgt_article="kp-8899aabbccddeeff",
    )
    base.update(kwargs)
    return TranslationPair(**base)


def test_token_count_splits_on_whitespace():
    assert token_count("yek du sê") == 3
    assert token_count("  padded   out  ") == 2
    assert token_count("") == 0


def test_valid_pair_has_no_violations():
    assert validate_pair(make_pair()) == []


def test_empty_side_is_reported():
    violations = validate_pair(make_pair(src_text="   "))
    assert len(violations) == 1
    assert "empty" in violations[0]


def test_token_limit_violation():
    long_text = " ".join(["wşe"] * 81)
    violations = validate_pair(make_pair(src_text=long_text))
    assert any("guideline 1" in v and "81" in v for v in violations)


def test_token_limit_boundary_passes():
    text = " ".join(["w"] * 80)
    assert validate_pair(make_pair(src_text=text, tgt_text=text)) == []


def test_ratio_violation():
    # 40 tokens against 5 is a ratio of 8.0, well past the 3.0 ceiling.
    pair = make_pair(src_text=" ".join(["a"] * 40), tgt_text=" ".join(["b"] * 5))
    violations = validate_pair(pair)
    assert len(violations) == 1
    assert "guideline 2" in violations[0]
    assert "8.0" in violations[0]


def test_ratio_boundary_passes():
    pair = make_pair(src_text="a b c", tgt_text=" ".join(["x"] * 9))
    assert validate_pair(pair) == []


def test_custom_rules():
    rules = ValidationConfig(max_tokens=2, max_ratio=1.5)
    violations = validate_pair(make_pair(), rules)
    assert any("guideline 1" in v for v in violations)


def test_rules_reject_nonsense():
    with pytest.raises(ValueError):
        ValidationConfig(max_tokens=0)
    with pytest.raises(ValueError):
        ValidationConfig(max_ratio=0.5)


def test_render_header_and_row():
    text = render_pairs([make_pair()])
    lines = text.splitlines()
    assert lines[0] == "\t".join(PAIR_COLUMNS)
    row = lines[1].split("\t")
    assert row[0] == "Yek du sê."
    assert row[6] == "false"
    assert row[7] == "1,1"
    assert text.endswith("\n")


def test_tabs_and_newlines_flattened():
    pair = make_pair(src_text="a\tb\nc")
    text = render_pairs([pair])
    assert "a b c" in text


def test_round_trip(tmp_path):
    pairs = [
        make_pair(),
        make_pair(src_text="Çwar pênc.", edited=True, merged_from=(2, 1)),
    ]
    path = tmp_path / "pairs.tsv"
    save_pairs(pairs, path)
    assert load_pairs(path) == pairs


def test_parse_rejects_wrong_header():
    with pytest.raises(PairFileError, match="header"):
        parse_pairs("src\ttgt\n")


def test_parse_rejects_short_row():
    text = render_pairs([make_pair()]) + "only\tthree\tcolumns\n"
    with pytest.raises(PairFileError, match="line 3"):
        parse_pairs(text)


def test_parse_rejects_bad_edited_flag():
    text = render_pairs([make_pair()]).replace("\tfalse\t", "\tmaybe\t")
    with pytest.raises(PairFileError, match="edited"):
        parse_pairs(text)


def test_parse_rejects_bad_merged_from():
    text = render_pairs([make_pair()]).replace("\t1,1", "\t1,0")
    with pytest.raises(PairFileError, match="merged_from"):
        parse_pairs(text)


def test_quarantine_file_appends_violations_column(tmp_path):
    pair = make_pair(src_text=" ".join(["a"] * 90))
    path = tmp_path / "quarantine.tsv"
    save_quarantine([(pair, validate_pair(pair))], path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0].endswith("\tviolations")
    assert "guideline 1" in lines[1]


def test_quarantine_joins_multiple_violations(tmp_path):
    pair = make_pair(src_text=" ".join(["a"] * 90), tgt_text="b")
    path = tmp_path / "q.tsv"
    save_quarantine([(pair, validate_pair(pair))], path)
    body = path.read_text(encoding="utf-8")
    assert "; " in body.splitlines()[1]
