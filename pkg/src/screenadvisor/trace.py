"""Phase 1: reconstruct an action trace from sampled frames.

Each segment is driven batch-by-batch through the vision provider. The prompt
for batch k carries every action already identified in batches 0..k-1 of the
same segment, so the model only reports genuinely new actions. Segment traces
are then merged in temporal order with a small deduplication window to absorb
overlap at segment boundaries.
"""

from __future__ import annotations

import json
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import InvalidInputError, ResponseSchemaError, SegmentError
from .ingest import Frame, SamplingConfig, batch_frames, extract_frames, plan_sampling, probe_duration, write_frame_cache
from .jsonextract import complete_and_parse, extract_json_object
from .providers import ChatProvider, ChatRequest

PHASE1_SYSTEM_PROMPT = """You are an assistant for workflow analysis. Given a sequence of frames from a task video and a list of prior identified actions, analyze the frames and identify any new user actions that are not already described in the prior actions. If you find new actions, add them to the new_actions. If no new actions are identified, return empty new_actions.

You will be provided with a batch of frames and a list of prior actions. For each action, you need to identify all of the details, such as the formatting, "cell content", "formula", and the specific action. Notice that some actions may have different outcomes based on the content of the sheet. For example, if the user switches to a different sheet, it may create a new sheet in addition to switching to it.

For some actions not shown on the frames, you need to predict them by comparing the difference between the frames. For example, whether the styles, formatting, or content of the cells have changed. If the user has changed the content of a cell, you need to speculate the possible actions that may lead to the changes and add the actions to the new_actions.

If the content of the sheet has changed (not cell formats), you need to record the entire sheet in Markdown format. Remember to include the workbook name and sheet name.

Your response should be a JSON object with the following structure:
{
    "new_action_detected": true/false,
    "new_actions": [
        "action1",
        "action2",
        ...
    ],
    "sheet_changes": true/false,
    "sheet_details": "use Markdown format to record the entire sheet"
}"""

# Segments cannot grow without bound: each extra batch threads a longer prior
# list, so very long segments would overrun the model context.
MAX_BATCHES_PER_SEGMENT = 40

DEDUP_WINDOW = 5


@dataclass(frozen=True)
class BatchObservation:
    new_action_detected: bool
    new_actions: Tuple[str, ...]
    sheet_changes: bool
    sheet_details: str
    batch_index: int = 0
    segment_index: int = 0


@dataclass(frozen=True)
class TracedAction:
    text: str
    segment_index: int
    batch_index: int


@dataclass(frozen=True)
class SheetSnapshot:
    segment_index: int
    batch_index: int
    markdown: str


@dataclass
class ActionTrace:
    actions: List[TracedAction] = field(default_factory=list)
    snapshots: List[SheetSnapshot] = field(default_factory=list)
    source_session: str = ""

    def action_texts(self) -> List[str]:
        return [a.text for a in self.actions]

    def to_json(self) -> str:
        return json.dumps(
            {
                "actions": [
                    {"text": a.text, "segment": a.segment_index, "batch": a.batch_index}
                    for a in self.actions
                ],
                "snapshots": [
                    {"segment": s.segment_index, "batch": s.batch_index, "markdown": s.markdown}
                    for s in self.snapshots
                ],
            },
            indent=2,
        )

    @staticmethod
    def from_json(text: str, source_session: str = "") -> "ActionTrace":
        data = json.loads(text)
        return ActionTrace(
            actions=[
                TracedAction(a["text"], a["segment"], a["batch"]) for a in data["actions"]
            ],
            snapshots=[
                SheetSnapshot(s["segment"], s["batch"], s["markdown"])
                for s in data["snapshots"]
            ],
            source_session=source_session,
        )


def format_prior_actions(prior_actions: Sequence[str]) -> str:
    if not prior_actions:
        body = "none"
    else:
        body = "\n".join(f"{i + 1}. {a}" for i, a in enumerate(prior_actions))
    return "Prior actions:\n" + body


def build_phase1_prompt(prior_actions: Sequence[str]) -> str:
    """Full Phase-1 prompt text: the system template plus the prior-actions block."""
    return PHASE1_SYSTEM_PROMPT + "\n\n" + format_prior_actions(prior_actions)


def _build_user_text(prior_actions: Sequence[str], frames: Sequence[Frame]) -> str:
    lines = [format_prior_actions(prior_actions), "", "Frames in this batch:"]
    lines.extend(f"- frame at {f.timestamp_s:g}s" for f in frames)
    return "\n".join(lines)


def parse_phase1_response(raw: str) -> BatchObservation:
    """Parse a Phase-1 model reply into a BatchObservation."""
    data = extract_json_object(raw)
    for key in ("new_action_detected", "sheet_changes"):
        if key not in data or not isinstance(data[key], bool):
            raise ResponseSchemaError("missing or non-boolean value", key)
    actions = data.get("new_actions")
    if not isinstance(actions, list) or not all(isinstance(a, str) for a in actions):
        raise ResponseSchemaError("new_actions must be a list of strings", "new_actions")
    sheet_changes = data["sheet_changes"]
    details = data.get("sheet_details", "")
    if not isinstance(details, str):
        raise ResponseSchemaError("sheet_details must be a string", "sheet_details")
    if not sheet_changes:
        details = ""
    return BatchObservation(
        new_action_detected=bool(actions),
        new_actions=tuple(actions),
        sheet_changes=sheet_changes,
        sheet_details=details,
    )


def serialize_observation(obs: BatchObservation) -> str:
    return json.dumps(
        {
            "new_action_detected": obs.new_action_detected,
            "new_actions": list(obs.new_actions),
            "sheet_changes": obs.sheet_changes,
            "sheet_details": obs.sheet_details,
        }
    )


def run_segment(
    segment_frames: Sequence[Frame],
    config: SamplingConfig,
    provider: ChatProvider,
    segment_index: int = 0,
) -> List[BatchObservation]:
    """Process one segment's frames batch-by-batch, threading prior actions."""
    if not segment_frames:
        raise InvalidInputError("segment has no frames")
    batches = batch_frames(segment_frames, config.batch_size)
    if len(batches) > MAX_BATCHES_PER_SEGMENT:
        raise InvalidInputError(
            f"segment {segment_index} has {len(batches)} batches, "
            f"exceeding the limit of {MAX_BATCHES_PER_SEGMENT}"
        )
    observations: List[BatchObservation] = []
    prior: List[str] = []
    for batch_index, frames in enumerate(batches):
        request = ChatRequest(
            phase="vision",
            system_text=PHASE1_SYSTEM_PROMPT,
            user_text=_build_user_text(prior, frames),
            images=tuple((f.timestamp_s, f.image) for f in frames),
        )
        try:
            obs = complete_and_parse(provider, request, parse_phase1_response)
        except Exception as exc:
            raise SegmentError(segment_index, batch_index, exc) from exc
        obs = BatchObservation(
            new_action_detected=obs.new_action_detected,
            new_actions=obs.new_actions,
            sheet_changes=obs.sheet_changes,
            sheet_details=obs.sheet_details,
            batch_index=batch_index,
            segment_index=segment_index,
        )
        observations.append(obs)
        prior.extend(obs.new_actions)
    return observations


def normalize_action(text: str) -> str:
    """Normalization used by the merge dedup: lowercase, collapsed whitespace,
    trailing punctuation stripped."""
    collapsed = re.sub(r"\s+", " ", text.strip().lower())
    return collapsed.rstrip(".,;:!?")


def merge_segments(per_segment: Sequence[Sequence[BatchObservation]]) -> ActionTrace:
    """Concatenate segment observations in temporal order.

    An incoming action is dropped when its normalized text matches any of the
    previous DEDUP_WINDOW merged actions, absorbing duplicates at segment
    boundaries without suppressing genuine repeats later in the task.
    """
    trace = ActionTrace()
    recent: List[str] = []
    for segment_index, observations in enumerate(per_segment):
        for obs in observations:
            for text in obs.new_actions:
                norm = normalize_action(text)
                if norm in recent[-DEDUP_WINDOW:]:
                    continue
                trace.actions.append(TracedAction(text, segment_index, obs.batch_index))
                recent.append(norm)
            if obs.sheet_details:
                trace.snapshots.append(
                    SheetSnapshot(segment_index, obs.batch_index, obs.sheet_details)
                )
    return trace


def analyze_recording(
    recording_path: str | Path,
    config: SamplingConfig,
    provider: ChatProvider,
    session_dir: Optional[str | Path] = None,
) -> Tuple[ActionTrace, Dict[str, float]]:
    """Run the full Phase-1 pipeline on a recording.

    Returns the merged trace and per-stage wall-clock timings in milliseconds
    (keys: extract, trace). Segments run concurrently; calls within a segment
    stay strictly sequential.
    """
    timings: Dict[str, float] = {}
    t0 = time.monotonic()
    duration = probe_duration(recording_path)
    plan = plan_sampling(duration, config)
    frames = extract_frames(recording_path, plan, config.crop)
    if session_dir is not None:
        write_frame_cache(frames, session_dir)
    timings["extract"] = (time.monotonic() - t0) * 1000.0

    t1 = time.monotonic()
    segments = [
        [frames[i] for i in plan.segment_indices(s)]
        for s in range(len(plan.segment_bounds))
    ]
    segments = [s for s in segments if s]
    with ThreadPoolExecutor(max_workers=max(1, len(segments))) as pool:
        futures = [
            pool.submit(run_segment, seg, config, provider, idx)
            for idx, seg in enumerate(segments)
        ]
        per_segment = [f.result() for f in futures]
    trace = merge_segments(per_segment)
    timings["trace"] = (time.monotonic() - t1) * 1000.0
    return trace, timings
