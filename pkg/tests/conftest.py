"""Shared test fixtures and the acceptance summary hook."""

from __future__ import annotations

import pytest

from newsbitext.corpus import ArticleRecord, make_article_id


def make_article(
    site: str = "kp",
    language: str = "ckb",
    slug: str = "a1",
    title: str = "هەولێر",
    tags: tuple[str, ...] = ("politics",),
    date: str = "2020-04-25",
    lead: str | None = "Lead text.",
    content: tuple[str, ...] = ("First sentence. Second sentence.", "Third sentence."),
    images: tuple[str, ...] = (),
) -> ArticleRecord:
    link = f"https://{site}.example/{language}/{slug}"
    return ArticleRecord(
        id=make_article_id(site, link),
        tags=tags,
        original_link=link,
        language=language,
        title=title,
        lead=lead,
        date=date,
        content=content,
        images=images,
        site=site,
    )


@pytest.fixture
def article_factory():
    return make_article


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Print one PASS/FAIL line per acceptance criterion at the end."""
    label_for = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}
    lines = []
    for status, label in label_for.items():
        for report in terminalreporter.stats.get(status, []):
            if getattr(report, "when", "call") != "call" and status != "skipped":
                continue
            if "test_acceptance.py" in report.nodeid:
                name = report.nodeid.split("::")[-1]
                lines.append((name, label))
    if lines:
        terminalreporter.write_line("")
        terminalreporter.write_line("acceptance criteria:")
        for name, label in sorted(set(lines)):
            terminalreporter.write_line(f"  {label}  {name}")
