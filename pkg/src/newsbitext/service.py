"""HTTP service for headline adjudication and sentence alignment.

The service mirrors the sheet/link-file workflow: the same candidate
sets become tasks, verdicts replace sheet rows, and alignment sessions
wrap the same document pairs the file path would emit, so an export over
identical decisions is byte-identical to the file-based route.

Every accepted write is appended to ``events.jsonl`` and fsynced before
it is acknowledged; on boot the log is replayed, so a crash never loses
an acknowledged verdict, link list or segment edit.
"""

from __future__ import annotations

import datetime as _dt
import json
import logging
import os
import threading
from copy import deepcopy
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

from fastapi import FastAPI, HTTPException, Query, Response
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel, Field

from .alignment import (
    VERDICTS,
    HeadlineAnnotation,
    Link,
    SegmentOpError,
    SegmentState,
    apply_segment_ops,
    article_for_line,
    build_documents,
    matched_article_pairs,
    pairs_from_segments,
    segments_from_document,
)
from .corpus import LANGUAGES, ArticleRecord, build_lookup, load_articles
from .mining import MATCHED_VIA, CandidateSet, load_candidate_sets
from .pairs import ValidationConfig, render_pairs

logger = logging.getLogger(__name__)


class ServiceDataError(Exception):
    """The service data directory is unusable."""


class VerdictIn(BaseModel):
    source_id: str
    target_id: str
    verdict: Literal["equivalent", "possible", "none"]
    annotator: str = "anonymous"


class LinkIn(BaseModel):
    src: list[int] = Field(min_length=1)
    tgt: list[int] = Field(min_length=1)


class LinksIn(BaseModel):
    version: int
    links: list[LinkIn]


class SegmentOpIn(BaseModel):
    op: Literal["merge", "split", "edit"]
    side: Literal["src", "tgt"]
    first: int | None = None
    count: int | None = None
    index: int | None = None
    at: int | None = None
    text: str | None = None


class SegmentOpsIn(BaseModel):
    version: int
    ops: list[SegmentOpIn]


@dataclass
class Session:
    id: str
    src_language: str
    tgt_language: str
    article_pairs: list[tuple[str, str]]
    src_segments: list[SegmentState]
    tgt_segments: list[SegmentState]
    src_index: tuple
    tgt_index: tuple
    links: list[Link] = field(default_factory=list)
    version: int = 0


class ServiceState:
    """All mutable service state plus its append-only event log."""

    def __init__(self, data_dir: str | Path, rules: ValidationConfig | None = None) -> None:
        self.data_dir = Path(data_dir)
        self.rules = rules or ValidationConfig()
        self.lock = threading.RLock()
        candidates_path = self.data_dir / "candidates.json"
        if not candidates_path.exists():
            raise ServiceDataError(f"{candidates_path} not found")
        self.candidate_sets: list[CandidateSet] = sorted(
            load_candidate_sets(candidates_path), key=lambda s: s.source_id
        )
        corpora = []
        for path in sorted(self.data_dir.glob("*.json")):
            if path.name == "candidates.json":
                continue
            corpora.append(load_articles(path))
        self.articles: dict[str, ArticleRecord] = build_lookup(corpora)
        for candidate_set in self.candidate_sets:
            missing = [
                i for i in (candidate_set.source_id,
                            *(c.target_id for c in candidate_set.candidates))
                if i not in self.articles
            ]
            if missing:
                raise ServiceDataError(
                    f"candidate set {candidate_set.source_id}: unknown article ids {missing}"
                )
        self._candidate_pairs = {
            (s.source_id, c.target_id): c
            for s in self.candidate_sets
            for c in s.candidates
        }
        self.verdicts: dict[tuple[str, str, str], HeadlineAnnotation] = {}
        self.sessions: dict[str, Session] = {}
        self.events_path = self.data_dir / "events.jsonl"
        self._replay()
        self._events_handle = open(self.events_path, "ab")

    # --- event log -----------------------------------------------------------

    def _replay(self) -> None:
        if not self.events_path.exists():
            return
        with open(self.events_path, "r", encoding="utf-8") as handle:
            for line_no, line in enumerate(handle, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    event = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ServiceDataError(
                        f"{self.events_path}:{line_no}: corrupt event ({exc})"
                    ) from exc
                self._apply_event(event)

    def _append_event(self, event: dict) -> None:
        payload = json.dumps(event, ensure_ascii=False) + "\n"
        self._events_handle.write(payload.encode("utf-8"))
        self._events_handle.flush()
        os.fsync(self._events_handle.fileno())

    def _apply_event(self, event: dict) -> None:
        kind = event.get("type")
        if kind == "verdict":
            annotation = HeadlineAnnotation(
                source_id=event["source_id"],
                target_id=event["target_id"],
                verdict=event["verdict"],
                annotator=event["annotator"],
                timestamp=event.get("timestamp"),
                matched_via=event.get("matched_via"),
            )
            key = (annotation.source_id, annotation.target_id, annotation.annotator)
            self.verdicts[key] = annotation
        elif kind == "session_created":
            self._build_session(event["id"], [tuple(p) for p in event["article_pairs"]])
        elif kind == "links":
            session = self.sessions[event["session"]]
            session.links = [
                (tuple(link["src"]), tuple(link["tgt"])) for link in event["links"]
            ]
            session.version += 1
        elif kind == "segments":
            session = self.sessions[event["session"]]
            for op in event["ops"]:
                op = dict(op)
                side = op.pop("side")
                target = session.src_segments if side == "src" else session.tgt_segments
                apply_segment_ops(target, [op])
            session.version += 1
        else:
            raise ServiceDataError(f"unknown event type {kind!r}")

    # --- tasks ---------------------------------------------------------------

    def pending_sets(self, annotator: str) -> list[CandidateSet]:
        done = {src for (src, _tgt, who) in self.verdicts if who == annotator}
        return [s for s in self.candidate_sets if s.source_id not in done]

    def record_verdict(self, body: VerdictIn) -> HeadlineAnnotation:
        pair = (body.source_id, body.target_id)
        candidate = self._candidate_pairs.get(pair)
        if candidate is None:
            raise HTTPException(
                status_code=422, detail=f"no candidate task for pair {pair}"
            )
        key = (body.source_id, body.target_id, body.annotator)
        if key in self.verdicts:
            raise HTTPException(
                status_code=409,
                detail=f"verdict already recorded for {pair} by {body.annotator!r}",
            )
        event = {
            "type": "verdict",
            "source_id": body.source_id,
            "target_id": body.target_id,
            "verdict": body.verdict,
            "annotator": body.annotator,
            "matched_via": candidate.matched_via,
            "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        }
        self._append_event(event)
        self._apply_event(event)
        return self.verdicts[key]

    # --- sessions ------------------------------------------------------------

    def _build_session(self, session_id: str, article_pairs: list[tuple[str, str]]) -> Session:
        src_language, _, tgt_language = session_id.partition("-")
        resolved = [(self.articles[a], self.articles[b]) for a, b in article_pairs]
        docs = build_documents(resolved)
        session = Session(
            id=session_id,
            src_language=src_language,
            tgt_language=tgt_language,
            article_pairs=article_pairs,
            src_segments=segments_from_document(docs.src_text),
            tgt_segments=segments_from_document(docs.tgt_text),
            src_index=docs.src_index,
            tgt_index=docs.tgt_index,
        )
        self.sessions[session_id] = session
        return session

    def get_or_create_session(self, session_id: str) -> Session:
        existing = self.sessions.get(session_id)
        if existing is not None:
            return existing
        src_language, sep, tgt_language = session_id.partition("-")
        if not sep or src_language not in LANGUAGES or tgt_language not in LANGUAGES:
            raise HTTPException(
                status_code=404,
                detail=f"session id must be <src>-<tgt> over {sorted(LANGUAGES)}",
            )
        annotations = list(self.verdicts.values())
        pairs = [
            (source.id, target.id)
            for source, target in matched_article_pairs(annotations, self.articles)
            if source.language == src_language and target.language == tgt_language
        ]
        if not pairs:
            raise HTTPException(
                status_code=404,
                detail=f"no adjudicated article pairs for {session_id}",
            )
        event = {"type": "session_created", "id": session_id, "article_pairs": pairs}
        self._append_event(event)
        self._apply_event(event)
        return self.sessions[session_id]

    def replace_links(self, session: Session, body: LinksIn) -> int:
        if body.version != session.version:
            raise HTTPException(
                status_code=409,
                detail={
                    "message": "stale session version",
                    "current_version": session.version,
                },
            )
        for link_no, link in enumerate(body.links):
            for side, indices, limit in (
                ("source", link.src, len(session.src_segments)),
                ("target", link.tgt, len(session.tgt_segments)),
            ):
                for index in indices:
                    if index < 0 or index >= limit:
                        raise HTTPException(
                            status_code=422,
                            detail=(
                                f"link {link_no}: {side} index {index} "
                                f"out of range (0..{limit - 1})"
                            ),
                        )
        event = {
            "type": "links",
            "session": session.id,
            "links": [{"src": link.src, "tgt": link.tgt} for link in body.links],
        }
        self._append_event(event)
        self._apply_event(event)
        return session.version

    def apply_ops(self, session: Session, body: SegmentOpsIn) -> int:
        if body.version != session.version:
            raise HTTPException(
                status_code=409,
                detail={
                    "message": "stale session version",
                    "current_version": session.version,
                },
            )
        ops = [op.model_dump(exclude_none=True) for op in body.ops]
        trial_src = deepcopy(session.src_segments)
        trial_tgt = deepcopy(session.tgt_segments)
        try:
            for op in ops:
                op = dict(op)
                side = op.pop("side")
                apply_segment_ops(trial_src if side == "src" else trial_tgt, [op])
        except SegmentOpError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        for src_idx, tgt_idx in session.links:
            if any(i >= len(trial_src) for i in src_idx) or any(
                i >= len(trial_tgt) for i in tgt_idx
            ):
                raise HTTPException(
                    status_code=422,
                    detail="operation would orphan an existing link; remove links first",
                )
        event = {"type": "segments", "session": session.id, "ops": ops}
        self._append_event(event)
        self._apply_event(event)
        return session.version

    # --- export ---------------------------------------------------------------

    def export_pairs(self):
        pairs = []
        for session_id in sorted(self.sessions):
            session = self.sessions[session_id]
            session_pairs, quarantined = pairs_from_segments(
                session.src_segments,
                session.tgt_segments,
                session.links,
                session.src_index,
                session.tgt_index,
                session.src_language,
                session.tgt_language,
                self.rules,
            )
            if quarantined:
                logger.warning(
                    "session %s: %d pairs violate guidelines and are not exported",
                    session_id, len(quarantined),
                )
            pairs.extend(session_pairs)
        return pairs


def _article_view(article: ArticleRecord) -> dict:
    return {
        "id": article.id,
        "title": article.title,
        "lead": article.lead,
        "date": article.date,
        "language": article.language,
        "link": article.original_link,
        "body": list(article.content),
    }


def _segment_views(segments: list[SegmentState], index) -> list[dict]:
    views = []
    for i, segment in enumerate(segments):
        views.append(
            {
                "index": i,
                "text": segment.text,
                "line": segment.line,
                "article": article_for_line(index, segment.line),
                "merged_from": segment.merged_from,
                "edited": segment.edited,
            }
        )
    return views


def _session_view(state: ServiceState, session: Session) -> dict:
    links = []
    for src_idx, tgt_idx in session.links:
        pair_list, quarantined = pairs_from_segments(
            session.src_segments,
            session.tgt_segments,
            [(src_idx, tgt_idx)],
            session.src_index,
            session.tgt_index,
            session.src_language,
            session.tgt_language,
            state.rules,
        )
        violations = quarantined[0][1] if quarantined else []
        links.append({"src": list(src_idx), "tgt": list(tgt_idx), "violations": violations})
    return {
        "id": session.id,
        "version": session.version,
        "src_language": session.src_language,
        "tgt_language": session.tgt_language,
        "src_segments": _segment_views(session.src_segments, session.src_index),
        "tgt_segments": _segment_views(session.tgt_segments, session.tgt_index),
        "links": links,
    }


def create_app(data_dir: str | Path, rules: ValidationConfig | None = None) -> FastAPI:
    state = ServiceState(data_dir, rules)
    app = FastAPI(title="newsbitext annotation service")
    app.state.service = state

    @app.get("/schema")
    def schema() -> dict:
        return {
            "verdicts": list(VERDICTS),
            "matched_via": list(MATCHED_VIA),
            "segment_ops": ["merge", "split", "edit"],
            "languages": sorted(LANGUAGES),
            "guidelines": {
                "max_tokens": state.rules.max_tokens,
                "max_ratio": state.rules.max_ratio,
            },
        }

    @app.get("/tasks/next")
    def next_task(
        annotator: str = Query(default="anonymous"),
        exclude: str = Query(default=""),
    ):
        skipped = {s for s in exclude.split(",") if s}
        with state.lock:
            pending = state.pending_sets(annotator)
            for candidate_set in pending:
                if candidate_set.source_id in skipped:
                    continue
                return {
                    "source_id": candidate_set.source_id,
                    "source_language": candidate_set.source_language,
                    "target_language": candidate_set.target_language,
                    "source": _article_view(state.articles[candidate_set.source_id]),
                    "candidates": [
                        {
                            "rank": rank,
                            "target_id": candidate.target_id,
                            "score": candidate.score,
                            "matched_via": candidate.matched_via,
                            "article": _article_view(state.articles[candidate.target_id]),
                        }
                        for rank, candidate in enumerate(candidate_set.candidates, start=1)
                    ],
                    "remaining": len(pending),
                }
            return Response(status_code=204)

    @app.get("/tasks/stats")
    def task_stats(annotator: str = Query(default="anonymous")) -> dict:
        with state.lock:
            pending = len(state.pending_sets(annotator))
            return {
                "pending": pending,
                "completed": len(state.candidate_sets) - pending,
                "verdicts": len(state.verdicts),
            }

    @app.post("/verdicts", status_code=201)
    def post_verdict(body: VerdictIn) -> dict:
        with state.lock:
            annotation = state.record_verdict(body)
            return {
                "recorded": True,
                "source_id": annotation.source_id,
                "target_id": annotation.target_id,
                "verdict": annotation.verdict,
                "pending": len(state.pending_sets(body.annotator)),
            }

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        with state.lock:
            session = state.get_or_create_session(session_id)
            return _session_view(state, session)

    @app.post("/sessions/{session_id}/links")
    def post_links(session_id: str, body: LinksIn) -> dict:
        with state.lock:
            session = state.sessions.get(session_id)
            if session is None:
                raise HTTPException(status_code=404, detail=f"no session {session_id!r}")
            return {"version": state.replace_links(session, body)}

    @app.post("/sessions/{session_id}/segments")
    def post_segments(session_id: str, body: SegmentOpsIn) -> dict:
        with state.lock:
            session = state.sessions.get(session_id)
            if session is None:
                raise HTTPException(status_code=404, detail=f"no session {session_id!r}")
            version = state.apply_ops(session, body)
            view = _session_view(state, session)
            return {
                "version": version,
                "src_segments": view["src_segments"],
                "tgt_segments": view["tgt_segments"],
            }

    @app.get("/export")
    def export() -> PlainTextResponse:
        with state.lock:
            pairs = state.export_pairs()
        return PlainTextResponse(
            render_pairs(pairs), media_type="text/tab-separated-values; charset=utf-8"
        )

    return app


def serve(data_dir: str | Path, host: str = "127.0.0.1", port: int = 8000,
          rules: ValidationConfig | None = None) -> None:
    import uvicorn

    uvicorn.run(create_app(data_dir, rules), host=host, port=port, log_level="info")
