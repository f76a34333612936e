"""Session lifecycle persistence: one directory of JSON files per session.

Layout under the data directory:
    <session_id>/record.json       lifecycle state, config, timings
    <session_id>/trace.json        merged action trace
    <session_id>/suggestions.json  suggestion queue with revealed count
    <session_id>/frames/           PNG frame cache
"""

from __future__ import annotations

import json
import os
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

from .advisor import SuggestionQueue, WorkflowAssessment, advise, next_suggestion
from .errors import (
    EmptyTraceError,
    InvalidInputError,
    ScreenAdvisorError,
    SessionNotFoundError,
    SessionStateError,
)
from .ingest import CropRect, SamplingConfig
from .providers import ChatProvider
from .trace import ActionTrace, analyze_recording

STATES = ("created", "extracting", "tracing", "advising", "ready", "error")


def _write_text_atomic(path: Path, text: str) -> None:
    """Write via a temp file + rename so concurrent readers never see a
    partially written JSON document."""
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def config_to_dict(config: SamplingConfig) -> dict:
    crop = None
    if config.crop is not None:
        crop = [config.crop.x, config.crop.y, config.crop.width, config.crop.height]
    return {
        "interval_s": config.interval_s,
        "batch_size": config.batch_size,
        "max_segments": config.max_segments,
        "crop": crop,
    }


def config_from_dict(data: dict) -> SamplingConfig:
    crop = data.get("crop")
    return SamplingConfig(
        interval_s=data.get("interval_s", 5.0),
        batch_size=data.get("batch_size", 20),
        max_segments=data.get("max_segments", 3),
        crop=CropRect(*crop) if crop else None,
    )


@dataclass
class SessionRecord:
    session_id: str
    state: str
    recording_path: str
    config: SamplingConfig
    timings: Dict[str, float] = field(default_factory=dict)
    error_detail: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "state": self.state,
            "recording_path": self.recording_path,
            "config": config_to_dict(self.config),
            "timings": self.timings,
            "error_detail": self.error_detail,
        }

    @staticmethod
    def from_dict(data: dict) -> "SessionRecord":
        return SessionRecord(
            session_id=data["session_id"],
            state=data["state"],
            recording_path=data["recording_path"],
            config=config_from_dict(data["config"]),
            timings=data.get("timings", {}),
            error_detail=data.get("error_detail"),
        )


class SessionStore:
    """File-backed session registry. All mutations to one session serialize
    behind a per-session lock; reads go straight to disk."""

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._locks: Dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _lock(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(session_id, threading.Lock())

    def session_dir(self, session_id: str) -> Path:
        return self.data_dir / session_id

    # -- record IO ------------------------------------------------------

    def _record_path(self, session_id: str) -> Path:
        return self.session_dir(session_id) / "record.json"

    def save_record(self, record: SessionRecord) -> None:
        path = self._record_path(record.session_id)
        path.parent.mkdir(parents=True, exist_ok=True)
        _write_text_atomic(path, json.dumps(record.to_dict(), indent=2))

    def load_record(self, session_id: str) -> SessionRecord:
        path = self._record_path(session_id)
        if not path.exists():
            raise SessionNotFoundError(f"no session with id {session_id}")
        return SessionRecord.from_dict(json.loads(path.read_text(encoding="utf-8")))

    def load_trace(self, session_id: str) -> ActionTrace:
        path = self.session_dir(session_id) / "trace.json"
        if not path.exists():
            raise SessionNotFoundError(f"session {session_id} has no trace")
        return ActionTrace.from_json(path.read_text(encoding="utf-8"), session_id)

    def save_trace(self, session_id: str, trace: ActionTrace) -> None:
        _write_text_atomic(self.session_dir(session_id) / "trace.json", trace.to_json())

    def load_queue(self, session_id: str) -> SuggestionQueue:
        path = self.session_dir(session_id) / "suggestions.json"
        if not path.exists():
            raise SessionNotFoundError(f"session {session_id} has no suggestions")
        return SuggestionQueue.from_json(path.read_text(encoding="utf-8"))

    def save_queue(self, session_id: str, queue: SuggestionQueue) -> None:
        _write_text_atomic(
            self.session_dir(session_id) / "suggestions.json", queue.to_json()
        )

    def list_sessions(self) -> List[str]:
        return sorted(
            p.name for p in self.data_dir.iterdir() if (p / "record.json").exists()
        )

    # -- lifecycle --------------------------------------------------------

    def create_session(
        self, recording_path: str | Path, config: Optional[SamplingConfig] = None
    ) -> SessionRecord:
        path = Path(recording_path)
        if not path.is_file():
            raise InvalidInputError(f"recording not readable: {recording_path}")
        record = SessionRecord(
            session_id=uuid.uuid4().hex,
            state="created",
            recording_path=str(path),
            config=config or SamplingConfig(),
        )
        self.save_record(record)
        return record

    def _advance(self, record: SessionRecord, state: str) -> None:
        record.state = state
        self.save_record(record)

    def start_pipeline(self, session_id: str) -> SessionRecord:
        """Atomically claim a created session for analysis (state -> extracting)."""
        with self._lock(session_id):
            record = self.load_record(session_id)
            if record.state != "created":
                raise SessionStateError(
                    f"session {session_id} is in state '{record.state}', expected 'created'"
                )
            self._advance(record, "extracting")
            return record

    def run_pipeline(self, session_id: str, provider: ChatProvider) -> SessionRecord:
        """Advance a created session through extract/trace/advise to ready."""
        record = self.start_pipeline(session_id)
        return self.continue_pipeline(record, provider)

    def continue_pipeline(self, record: SessionRecord, provider: ChatProvider) -> SessionRecord:
        session_id = record.session_id
        stage = "extract"
        try:
            trace, timings = analyze_recording(
                record.recording_path,
                record.config,
                provider,
                session_dir=self.session_dir(session_id),
            )
            record.timings.update(timings)
            stage = "trace"
            self._advance(record, "tracing")
            trace.source_session = session_id
            self.save_trace(session_id, trace)
            stage = "advise"
            self._advance(record, "advising")
            t0 = time.monotonic()
            try:
                queue = advise(trace, provider)
            except EmptyTraceError:
                queue = SuggestionQueue()
            record.timings["advise"] = (time.monotonic() - t0) * 1000.0
            self.save_queue(session_id, queue)
            self._advance(record, "ready")
        except Exception as exc:
            record.error_detail = f"stage {stage}: {exc}"
            self._advance(record, "error")
        return record

    def reveal_next(self, session_id: str) -> Optional[WorkflowAssessment]:
        """Serve the next unrevealed suggestion and persist the advance."""
        with self._lock(session_id):
            record = self.load_record(session_id)
            if record.state != "ready":
                raise SessionStateError(
                    f"session {session_id} is in state '{record.state}', expected 'ready'"
                )
            queue = self.load_queue(session_id)
            item = next_suggestion(queue)
            if item is not None:
                self.save_queue(session_id, queue)
            return item

    def revealed_items(self, session_id: str) -> List[WorkflowAssessment]:
        queue = self.load_queue(session_id)
        return queue.items[: queue.revealed]
