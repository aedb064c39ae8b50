"""Annotation service: task queue, verdicts, sessions, durability, export."""

from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from newsbitext.alignment import (
    HeadlineAnnotation,
    build_documents,
    import_alignment,
    matched_article_pairs,
    parse_links,
)
from newsbitext.corpus import CorpusFile, save_articles
from newsbitext.mining import mine, save_candidate_sets
from newsbitext.pairs import render_pairs
from newsbitext.service import ServiceDataError, ServiceState, create_app

from tests.conftest import make_article


def _articles():
    s1 = make_article(slug="s1", title="وەرزش لە هەولێر", tags=("sport",),
                      date="2020-04-10", lead="Yek. Du.", content=("Sê çwar pênc.",))
    s2 = make_article(slug="s2", title="ئابووری", tags=("economy",),
                      date="2020-04-12", lead="Şeş.", content=())
    t1 = make_article(language="kmr", slug="t1", title="Werzş le Hewlêr",
                      tags=("sport",), date="2020-04-11", lead="One. Two.",
                      content=("Three four five.",))
    t2 = make_article(language="kmr", slug="t2", title="Aborî",
                      tags=("economy",), date="2020-04-13", lead="Six.", content=())
    return s1, s2, t1, t2


@pytest.fixture
def data_dir(tmp_path):
    s1, s2, t1, t2 = _articles()
    src = CorpusFile(site="kp", language="ckb", articles=(s1, s2))
    tgt = CorpusFile(site="kp", language="kmr", articles=(t1, t2))
    save_articles(src, tmp_path / "kp.ckb.json")
    save_articles(tgt, tmp_path / "kp.kmr.json")
    save_candidate_sets(mine(src, tgt), tmp_path / "candidates.json")
    return tmp_path, (s1, s2, t1, t2)


@pytest.fixture
def client(data_dir):
    path, articles = data_dir
    app = create_app(path)
    with TestClient(app) as test_client:
        yield test_client, articles, path


def test_missing_candidates_is_fatal(tmp_path):
    with pytest.raises(ServiceDataError, match="candidates.json"):
        ServiceState(tmp_path)


def test_candidates_must_reference_known_articles(tmp_path, data_dir):
    path, _ = data_dir
    bad = tmp_path / "bad"
    bad.mkdir(exist_ok=True)
    (bad / "candidates.json").write_text(
        json.dumps([{
            "source_id": "kp-ffffffffffffffff",
            "source_language": "ckb",
            "target_language": "kmr",
            "candidates": [
                {"target_id": "kp-eeeeeeeeeeeeeeee", "score": 1.0, "matched_via": "both"}
            ],
        }]),
        encoding="utf-8",
    )
    with pytest.raises(ServiceDataError, match="unknown article ids"):
        ServiceState(bad)


def test_schema_endpoint(client):
    test_client, _, _ = client
    body = test_client.get("/schema").json()
    assert body["verdicts"] == ["equivalent", "possible", "none"]
    assert body["matched_via"] == ["tag-date", "image", "both"]
    assert body["guidelines"] == {"max_tokens": 80, "max_ratio": 3.0}


def test_task_payload_shape(client):
    test_client, (s1, s2, t1, t2), _ = client
    task = test_client.get("/tasks/next", params={"annotator": "rev1"}).json()
    assert task["source_id"] in (s1.id, s2.id)
    assert task["source"]["language"] == "ckb"
    assert task["remaining"] == 2
    first = task["candidates"][0]
    assert first["rank"] == 1
    assert first["article"]["language"] == "kmr"
    assert set(first) == {"rank", "target_id", "score", "matched_via", "article"}


def test_task_exclude_param(client):
    test_client, _, _ = client
    first = test_client.get("/tasks/next").json()
    second = test_client.get(
        "/tasks/next", params={"exclude": first["source_id"]}
    ).json()
    assert second["source_id"] != first["source_id"]


def test_verdict_flow_drains_queue(client):
    test_client, _, _ = client
    seen = []
    while True:
        response = test_client.get("/tasks/next", params={"annotator": "rev1"})
        if response.status_code == 204:
            break
        task = response.json()
        seen.append(task["source_id"])
        posted = test_client.post(
            "/verdicts",
            json={
                "source_id": task["source_id"],
                "target_id": task["candidates"][0]["target_id"],
                "verdict": "equivalent",
                "annotator": "rev1",
            },
        )
        assert posted.status_code == 201
    assert len(seen) == 2
    stats = test_client.get("/tasks/stats", params={"annotator": "rev1"}).json()
    assert stats == {"pending": 0, "completed": 2, "verdicts": 2}


def test_queue_is_per_annotator(client):
    test_client, (s1, _, t1, _), _ = client
    test_client.post(
        "/verdicts",
        json={"source_id": s1.id, "target_id": t1.id,
              "verdict": "equivalent", "annotator": "rev1"},
    )
    assert test_client.get("/tasks/stats", params={"annotator": "rev1"}).json()["pending"] == 1
    assert test_client.get("/tasks/stats", params={"annotator": "rev2"}).json()["pending"] == 2


def test_verdict_unknown_pair_is_422(client):
    test_client, (s1, _, _, t2), _ = client
    response = test_client.post(
        "/verdicts",
        json={"source_id": s1.id, "target_id": "kp-0000000000000000",
              "verdict": "none"},
    )
    assert response.status_code == 422


def test_verdict_bad_vocabulary_is_422(client):
    test_client, (s1, _, t1, _), _ = client
    response = test_client.post(
        "/verdicts",
        json={"source_id": s1.id, "target_id": t1.id, "verdict": "definitely"},
    )
    assert response.status_code == 422


def test_duplicate_verdict_is_409(client):
    test_client, (s1, _, t1, _), _ = client
    body = {"source_id": s1.id, "target_id": t1.id,
            "verdict": "equivalent", "annotator": "rev1"}
    assert test_client.post("/verdicts", json=body).status_code == 201
    assert test_client.post("/verdicts", json=body).status_code == 409


def _adjudicate(test_client, articles):
    s1, s2, t1, t2 = articles
    for source, target in ((s1, t1), (s2, t2)):
        response = test_client.post(
            "/verdicts",
            json={"source_id": source.id, "target_id": target.id,
                  "verdict": "equivalent", "annotator": "rev1"},
        )
        assert response.status_code == 201


def test_session_requires_verdicts(client):
    test_client, _, _ = client
    assert test_client.get("/sessions/ckb-kmr").status_code == 404


def test_session_bad_id_is_404(client):
    test_client, articles, _ = client
    _adjudicate(test_client, articles)
    assert test_client.get("/sessions/nonsense").status_code == 404
    assert test_client.get("/sessions/xx-yy").status_code == 404


def test_session_segments_carry_article_attribution(client):
    test_client, (s1, s2, t1, t2), _ = client
    _adjudicate(test_client, (s1, s2, t1, t2))
    session = test_client.get("/sessions/ckb-kmr").json()
    assert session["version"] == 0
    articles = {seg["article"] for seg in session["src_segments"]}
    assert articles == {s1.id, s2.id}
    texts = [seg["text"] for seg in session["src_segments"]]
    assert "Yek." in texts and "Şeş." in texts


def test_links_version_conflict(client):
    test_client, articles, _ = client
    _adjudicate(test_client, articles)
    test_client.get("/sessions/ckb-kmr")
    ok = test_client.post(
        "/sessions/ckb-kmr/links",
        json={"version": 0, "links": [{"src": [0], "tgt": [0]}]},
    )
    assert ok.status_code == 200
    assert ok.json()["version"] == 1
    stale = test_client.post(
        "/sessions/ckb-kmr/links",
        json={"version": 0, "links": [{"src": [1], "tgt": [1]}]},
    )
    assert stale.status_code == 409
    assert stale.json()["detail"]["current_version"] == 1


def test_links_out_of_range_is_422(client):
    test_client, articles, _ = client
    _adjudicate(test_client, articles)
    test_client.get("/sessions/ckb-kmr")
    response = test_client.post(
        "/sessions/ckb-kmr/links",
        json={"version": 0, "links": [{"src": [99], "tgt": [0]}]},
    )
    assert response.status_code == 422
    assert "out of range" in response.json()["detail"]


def test_links_on_unknown_session_is_404(client):
    test_client, _, _ = client
    response = test_client.post(
        "/sessions/ckb-kmr/links", json={"version": 0, "links": []}
    )
    assert response.status_code == 404


def _index_of(segments, text):
    return next(s["index"] for s in segments if s["text"] == text)


def test_segment_merge_then_export_counts(client):
    test_client, articles, _ = client
    _adjudicate(test_client, articles)
    session = test_client.get("/sessions/ckb-kmr").json()
    src_i = _index_of(session["src_segments"], "Yek.")
    tgt_one = _index_of(session["tgt_segments"], "One.")
    tgt_two = _index_of(session["tgt_segments"], "Two.")
    merged = test_client.post(
        "/sessions/ckb-kmr/segments",
        json={"version": 0,
              "ops": [{"op": "merge", "side": "src", "first": src_i, "count": 2}]},
    )
    assert merged.status_code == 200
    body = merged.json()
    assert body["version"] == 1
    assert body["src_segments"][src_i]["text"] == "Yek. Du."
    assert body["src_segments"][src_i]["merged_from"] == 2

    linked = test_client.post(
        "/sessions/ckb-kmr/links",
        json={"version": 1, "links": [{"src": [src_i], "tgt": [tgt_one, tgt_two]}]},
    )
    assert linked.status_code == 200
    export = test_client.get("/export").text
    row = export.splitlines()[1].split("\t")
    assert row[0] == "Yek. Du."
    assert row[1] == "One. Two."
    assert row[7] == "2,2"


def test_segment_bad_op_is_422(client):
    test_client, articles, _ = client
    _adjudicate(test_client, articles)
    test_client.get("/sessions/ckb-kmr")
    response = test_client.post(
        "/sessions/ckb-kmr/segments",
        json={"version": 0,
              "ops": [{"op": "merge", "side": "src", "first": 50, "count": 2}]},
    )
    assert response.status_code == 422


def test_op_that_would_orphan_links_is_422(client):
    test_client, articles, _ = client
    _adjudicate(test_client, articles)
    session = test_client.get("/sessions/ckb-kmr").json()
    last = len(session["src_segments"]) - 1
    test_client.post(
        "/sessions/ckb-kmr/links",
        json={"version": 0, "links": [{"src": [last], "tgt": [0]}]},
    )
    response = test_client.post(
        "/sessions/ckb-kmr/segments",
        json={"version": 1,
              "ops": [{"op": "merge", "side": "src", "first": last - 1, "count": 2}]},
    )
    assert response.status_code == 422
    assert "orphan" in response.json()["detail"]


def test_edit_marks_exported_pair(client):
    test_client, articles, _ = client
    _adjudicate(test_client, articles)
    test_client.get("/sessions/ckb-kmr")
    test_client.post(
        "/sessions/ckb-kmr/segments",
        json={"version": 0,
              "ops": [{"op": "edit", "side": "src", "index": 0, "text": "Yek!"}]},
    )
    test_client.post(
        "/sessions/ckb-kmr/links",
        json={"version": 1, "links": [{"src": [0], "tgt": [0]}]},
    )
    export = test_client.get("/export").text
    row = export.splitlines()[1].split("\t")
    assert row[0] == "Yek!"
    assert row[6] == "true"


def test_export_drops_guideline_violations(tmp_path, data_dir):
    from newsbitext.pairs import ValidationConfig

    path, articles = data_dir
    app = create_app(path, rules=ValidationConfig(max_tokens=2, max_ratio=3.0))
    with TestClient(app) as test_client:
        _adjudicate(test_client, articles)
        session = test_client.get("/sessions/ckb-kmr").json()
        short_link = {
            "src": [_index_of(session["src_segments"], "Yek.")],
            "tgt": [_index_of(session["tgt_segments"], "One.")],
        }
        long_link = {
            "src": [_index_of(session["src_segments"], "Sê çwar pênc.")],
            "tgt": [_index_of(session["tgt_segments"], "Three four five.")],
        }
        test_client.post(
            "/sessions/ckb-kmr/links",
            json={"version": 0, "links": [short_link, long_link]},
        )
        export = test_client.get("/export").text
    rows = export.splitlines()
    assert len(rows) == 2
    assert rows[1].startswith("Yek.")


def test_replay_after_restart_preserves_everything(data_dir):
    path, articles = data_dir
    app = create_app(path)
    with TestClient(app) as test_client:
        _adjudicate(test_client, articles)
        test_client.get("/sessions/ckb-kmr")
        test_client.post(
            "/sessions/ckb-kmr/segments",
            json={"version": 0,
                  "ops": [{"op": "merge", "side": "src", "first": 0, "count": 2}]},
        )
        test_client.post(
            "/sessions/ckb-kmr/links",
            json={"version": 1, "links": [{"src": [0], "tgt": [0, 1]}]},
        )
        before = test_client.get("/export").text
        session_before = test_client.get("/sessions/ckb-kmr").json()

    reborn = create_app(path)
    with TestClient(reborn) as test_client:
        assert test_client.get("/export").text == before
        session_after = test_client.get("/sessions/ckb-kmr").json()
        assert session_after == session_before
        stats = test_client.get("/tasks/stats", params={"annotator": "rev1"}).json()
        assert stats["pending"] == 0


def test_corrupt_event_log_is_fatal(data_dir):
    path, _ = data_dir
    (path / "events.jsonl").write_text("{broken\n", encoding="utf-8")
    with pytest.raises(ServiceDataError, match="corrupt event"):
        ServiceState(path)


def test_export_matches_file_based_route(client):
    """The HTTP export and the offline import produce identical bytes."""
    test_client, (s1, s2, t1, t2), path = client
    _adjudicate(test_client, (s1, s2, t1, t2))
    test_client.get("/sessions/ckb-kmr")
    links_text = "0\t0\n1\t1\n2\t2\n3\t3\n"
    test_client.post(
        "/sessions/ckb-kmr/links",
        json={"version": 0,
              "links": [{"src": [int(a)], "tgt": [int(b)]}
                        for a, b in (l.split("\t") for l in links_text.splitlines())]},
    )
    via_http = test_client.get("/export").text

    articles = {a.id: a for a in (s1, s2, t1, t2)}
    annotations = [
        HeadlineAnnotation(s1.id, t1.id, "equivalent", "rev1"),
        HeadlineAnnotation(s2.id, t2.id, "equivalent", "rev1"),
    ]
    docs = build_documents(matched_article_pairs(annotations, articles))
    pairs, _ = import_alignment(
        docs.src_text,
        docs.tgt_text,
        parse_links(links_text),
        docs.src_index,
        docs.tgt_index,
        "ckb",
        "kmr",
    )
    assert via_http == render_pairs(pairs)
