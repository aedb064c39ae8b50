"""Article extraction tests over synthetic news pages."""

from __future__ import annotations

import json
import logging

import pytest

from newsbitext.extract import (
    ExtractionError,
    ProfileError,
    RawPage,
    SiteProfile,
    extract_article,
    iter_raw_pages,
    load_profile,
    normalize_date,
    page_basename,
    save_raw_page,
)

PROFILE = SiteProfile(
    site="kp",
    tag_selector=".bashakan a",
    title_selector="h1.entry-title",
    lead_selector=".entry-lead",
    content_selector=".entry-content",
    dialect_url_pattern={"ckb": "ckb", "ku": "kmr"},
    calendar="kurdish",
    date_selector="time",
    date_formats=("%d.%m.%Y",),
)


def page(
    url="https://kp.example/ckb/a1",
    title="<h1 class='entry-title'>سەردان</h1>",
    lead="<div class='entry-lead'>پێشەکی.</div>",
    time_tag="<time>٠٦.٠٢.٢٧٢٠</time>",
    tags="<div class='bashakan'><a>Politics</a><a>Hewlêr</a><a>politics</a></div>",
    content=(
        "<div class='entry-content'><p>یەکەم   بڕگە.</p><p> </p>"
        "<p>دووەم بڕگە.</p><img src='/media/a.jpg?w=600#top'>"
        "<img src='https://kp.example/media/a.jpg?w=600'></div>"
    ),
    extra_head="",
) -> RawPage:
    html = f"""<html><head><meta charset="utf-8">{extra_head}</head>
    <body>{title}{lead}{time_tag}{tags}{content}</body></html>"""
    return RawPage(url=url, html=html.encode("utf-8"), fetched_at=0.0)


def test_full_extraction():
    article = extract_article(page(), PROFILE)
    assert article.site == "kp"
    assert article.language == "ckb"
    assert article.title == "سەردان"
    assert article.lead == "پێشەکی."
    assert article.date == "2020-04-25"
    assert article.tags == ("politics", "hewlêr")
    assert article.content == ("یەکەم بڕگە.", "دووەم بڕگە.")
    assert article.images == ("https://kp.example/media/a.jpg?w=600",)
    assert article.original_link == "https://kp.example/ckb/a1"
    assert article.id.startswith("kp-")


def test_language_from_url_segment():
    article = extract_article(page(url="https://kp.example/ku/a1"), PROFILE)
    assert article.language == "kmr"


def test_language_unmapped_url_fails():
    with pytest.raises(ExtractionError):
        extract_article(page(url="https://kp.example/en/a1"), PROFILE)


def test_default_language_fallback():
    profile = SiteProfile(**{**PROFILE.__dict__, "default_language": "ckb",
                             "dialect_url_pattern": {}})
    article = extract_article(page(url="https://kp.example/x/a1"), profile)
    assert article.language == "ckb"


def test_title_fallback_jsonld():
    head = '<script type="application/ld+json">{"@type": "NewsArticle", "headline": "JSON headline"}</script>'
    article = extract_article(page(title="", extra_head=head), PROFILE)
    assert article.title == "JSON headline"


def test_title_fallback_og_meta():
    head = '<meta property="og:title" content="OG headline">'
    article = extract_article(page(title="", extra_head=head), PROFILE)
    assert article.title == "OG headline"


def test_title_missing_everywhere_fails():
    with pytest.raises(ExtractionError):
        extract_article(page(title=""), PROFILE)


def test_lead_optional():
    article = extract_article(page(lead=""), PROFILE)
    assert article.lead is None


def test_lead_fallback_jsonld_description():
    head = '<script type="application/ld+json">{"headline": "x", "description": "From metadata."}</script>'
    article = extract_article(page(lead="", extra_head=head), PROFILE)
    assert article.lead == "From metadata."


def test_date_from_datetime_attribute():
    article = extract_article(
        page(time_tag="<time datetime='06.02.2720'>هەر شتێک</time>"), PROFILE
    )
    assert article.date == "2020-04-25"


def test_jsonld_date_wins_on_disagreement(caplog):
    head = (
        '<script type="application/ld+json">'
        '{"@type": "NewsArticle", "headline": "x", "datePublished": "2020-04-26T09:00:00+03:00"}'
        "</script>"
    )
    with caplog.at_level(logging.WARNING):
        article = extract_article(page(extra_head=head), PROFILE)
    assert article.date == "2020-04-26"
    assert any("disagreement" in r.message for r in caplog.records)


def test_date_missing_fails():
    with pytest.raises(ExtractionError):
        extract_article(page(time_tag=""), PROFILE)


def test_tags_meta_keywords_fallback():
    head = '<meta name="keywords" content="Sport, Football ,sport">'
    article = extract_article(page(tags="", extra_head=head), PROFILE)
    assert article.tags == ("sport", "football")


def test_tags_jsonld_keywords_fallback():
    head = '<script type="application/ld+json">{"headline": "x", "keywords": ["War", "Peace"]}</script>'
    article = extract_article(page(tags="", extra_head=head), PROFILE)
    assert article.tags == ("war", "peace")


def test_images_jsonld_fallback():
    head = (
        '<script type="application/ld+json">'
        '{"headline": "x", "image": {"url": "https://kp.example/j.jpg"}}</script>'
    )
    article = extract_article(
        page(content="<div class='entry-content'><p>بڕگە.</p></div>", extra_head=head),
        PROFILE,
    )
    assert article.images == ("https://kp.example/j.jpg",)


def test_content_selector_matching_paragraphs_directly():
    profile = SiteProfile(**{**PROFILE.__dict__, "content_selector": ".entry-content p"})
    article = extract_article(page(), profile)
    assert article.content == ("یەکەم بڕگە.", "دووەم بڕگە.")


def test_no_content_is_allowed():
    article = extract_article(page(content=""), PROFILE)
    assert article.content == ()
    assert article.images == ()


# --- date normalization -------------------------------------------------------


def test_normalize_date_gregorian_formats():
    assert normalize_date("2020-04-25", "gregorian") == "2020-04-25"
    assert normalize_date("25/04/2020", "gregorian", ("%d/%m/%Y",)) == "2020-04-25"
    assert normalize_date("25 April 2020", "gregorian", ("%d %B %Y",)) == "2020-04-25"


def test_normalize_date_solar_hijri():
    assert normalize_date("1399/02/06", "solar-hijri", ("%Y/%m/%d",)) == "2020-04-25"


def test_normalize_date_kurdish_eastern_digits():
    assert normalize_date("٠٦.٠٢.٢٧٢٠", "kurdish", ("%d.%m.%Y",)) == "2020-04-25"


def test_normalize_date_rejects_unparseable():
    with pytest.raises(ExtractionError):
        normalize_date("yesterday", "gregorian")
    with pytest.raises(ExtractionError):
        normalize_date("1399/13/01", "solar-hijri", ("%Y/%m/%d",))


def test_normalize_date_unknown_calendar():
    with pytest.raises(ExtractionError):
        normalize_date("2020-01-01", "lunar")


# --- profiles and raw page storage ---------------------------------------------


def test_profile_round_trip(tmp_path):
    path = tmp_path / "kp.json"
    path.write_text(
        json.dumps(
            {
                "site": "kp",
                "tag_selector": ".tags a",
                "title_selector": "h1",
                "lead_selector": ".lead",
                "content_selector": ".content",
                "dialect_url_pattern": {"ckb": "ckb"},
                "calendar": "gregorian",
            }
        ),
        encoding="utf-8",
    )
    profile = load_profile(path)
    assert profile.site == "kp"
    assert profile.date_formats == ("%Y-%m-%d",)


def test_profile_missing_key(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"site": "kp"}), encoding="utf-8")
    with pytest.raises(ProfileError):
        load_profile(path)


def test_profile_bad_calendar():
    with pytest.raises(ProfileError):
        SiteProfile(**{**PROFILE.__dict__, "calendar": "julian"})


def test_raw_page_round_trip(tmp_path):
    pages = [
        RawPage("https://kp.example/ckb/a1", b"<p>one</p>", 1.5),
        RawPage("https://kp.example/ckb/a2", b"<p>two</p>", 2.5),
    ]
    for raw in pages:
        save_raw_page(raw, tmp_path)
    loaded = sorted(iter_raw_pages(tmp_path), key=lambda p: p.url)
    assert loaded == pages
    assert (tmp_path / f"{page_basename(pages[0].url)}.html").exists()
