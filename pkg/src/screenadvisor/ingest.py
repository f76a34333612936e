"""Frame sampling, extraction and batching for screen recordings.

A recording is sampled on a fixed time grid, split into up to three
contiguous temporal segments for parallel processing, and each segment is
chunked into fixed-size frame batches that fit a single vision-model call.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, TypeVar

import cv2
import numpy as np

from .errors import DecodeError, FrameOutOfRangeError, InvalidCropError, InvalidInputError

T = TypeVar("T")


@dataclass(frozen=True)
class CropRect:
    x: int
    y: int
    width: int
    height: int

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise InvalidInputError("crop width and height must be positive")
        if self.x < 0 or self.y < 0:
            raise InvalidInputError("crop origin must be non-negative")


@dataclass(frozen=True)
class SamplingConfig:
    interval_s: float = 5.0
    batch_size: int = 20
    max_segments: int = 3
    crop: Optional[CropRect] = None

    def __post_init__(self):
        if self.interval_s <= 0:
            raise InvalidInputError("interval_s must be positive")
        if self.batch_size < 1:
            raise InvalidInputError("batch_size must be >= 1")
        if self.max_segments < 1:
            raise InvalidInputError("max_segments must be >= 1")


@dataclass(frozen=True)
class Frame:
    timestamp_s: float
    image: bytes  # PNG-encoded
    width: int
    height: int


@dataclass(frozen=True)
class FramePlan:
    timestamps: Tuple[float, ...]
    duration_s: float
    segment_bounds: Tuple[Tuple[int, int], ...]  # half-open [start, end) index pairs
    batch_size: int

    def segment_indices(self, segment: int) -> range:
        start, end = self.segment_bounds[segment]
        return range(start, end)

    def to_json(self) -> str:
        return json.dumps(
            {
                "timestamps": list(self.timestamps),
                "duration_s": self.duration_s,
                "segment_bounds": [list(b) for b in self.segment_bounds],
                "batch_size": self.batch_size,
            }
        )

    @staticmethod
    def from_json(text: str) -> "FramePlan":
        data = json.loads(text)
        return FramePlan(
            timestamps=tuple(data["timestamps"]),
            duration_s=data["duration_s"],
            segment_bounds=tuple(tuple(b) for b in data["segment_bounds"]),
            batch_size=data["batch_size"],
        )


def plan_sampling(duration_s: float, config: SamplingConfig) -> FramePlan:
    """Lay out the sampling grid and the segment split for one recording.

    Timestamps are every multiple of the interval from 0 up to and including
    the recording duration. Segments are contiguous near-equal spans, at most
    ``config.max_segments`` of them, and never more segments than batches.
    """
    if duration_s <= 0:
        raise InvalidInputError("duration_s must be positive")
    n = math.floor(duration_s / config.interval_s) + 1
    timestamps = tuple(k * config.interval_s for k in range(n))
    n_segments = min(config.max_segments, math.ceil(n / config.batch_size))
    bounds = _split_near_equal(n, n_segments)
    return FramePlan(
        timestamps=timestamps,
        duration_s=duration_s,
        segment_bounds=bounds,
        batch_size=config.batch_size,
    )


def _split_near_equal(n: int, parts: int) -> Tuple[Tuple[int, int], ...]:
    """Partition range(n) into `parts` contiguous spans, remainder to the earliest."""
    base, extra = divmod(n, parts)
    bounds = []
    start = 0
    for i in range(parts):
        size = base + (1 if i < extra else 0)
        bounds.append((start, start + size))
        start += size
    return tuple(bounds)


def probe_duration(recording_path: str | Path) -> float:
    """Return the recording length in seconds, by frame count over fps."""
    cap = cv2.VideoCapture(str(recording_path))
    try:
        if not cap.isOpened():
            raise DecodeError(f"cannot open recording: {recording_path}")
        fps = cap.get(cv2.CAP_PROP_FPS)
        frames = cap.get(cv2.CAP_PROP_FRAME_COUNT)
        if fps <= 0 or frames <= 0:
            raise DecodeError(f"cannot determine duration of {recording_path}")
        return frames / fps
    finally:
        cap.release()


def extract_frames(
    recording_path: str | Path,
    plan: FramePlan,
    crop: Optional[CropRect] = None,
) -> List[Frame]:
    """Decode one frame per planned timestamp, optionally cropped, as PNG."""
    cap = cv2.VideoCapture(str(recording_path))
    try:
        if not cap.isOpened():
            raise DecodeError(f"cannot open recording: {recording_path}")
        fps = cap.get(cv2.CAP_PROP_FPS)
        total = int(cap.get(cv2.CAP_PROP_FRAME_COUNT))
        if fps <= 0 or total <= 0:
            raise DecodeError(f"cannot read stream parameters of {recording_path}")
        duration = total / fps
        frames: List[Frame] = []
        for ts in plan.timestamps:
            if ts > duration + 1e-9:
                raise FrameOutOfRangeError(ts)
            # The final grid point may equal the duration; clamp to the last frame.
            index = min(int(round(ts * fps)), total - 1)
            cap.set(cv2.CAP_PROP_POS_FRAMES, index)
            ok, image = cap.read()
            if not ok:
                raise FrameOutOfRangeError(ts)
            frames.append(_encode_frame(image, ts, crop))
        return frames
    finally:
        cap.release()


def _encode_frame(image: np.ndarray, timestamp_s: float, crop: Optional[CropRect]) -> Frame:
    h, w = image.shape[:2]
    if crop is not None:
        if crop.x + crop.width > w or crop.y + crop.height > h:
            raise InvalidCropError(
                f"crop ({crop.x},{crop.y},{crop.width},{crop.height}) "
                f"exceeds frame bounds {w}x{h}"
            )
        image = image[crop.y : crop.y + crop.height, crop.x : crop.x + crop.width]
        h, w = crop.height, crop.width
    ok, png = cv2.imencode(".png", image)
    if not ok:
        raise DecodeError("PNG encoding failed")
    return Frame(timestamp_s=timestamp_s, image=png.tobytes(), width=w, height=h)


def batch_frames(segment_frames: Sequence[T], batch_size: int) -> List[List[T]]:
    """Chunk a segment's frames into consecutive batches of at most batch_size."""
    if batch_size < 1:
        raise InvalidInputError("batch_size must be >= 1")
    return [
        list(segment_frames[i : i + batch_size])
        for i in range(0, len(segment_frames), batch_size)
    ]


def frame_filename(index: int, timestamp_s: float) -> str:
    """Cache filename for frame k at the given timestamp: f<k>_<timestamp_s>.png"""
    return f"f{index}_{timestamp_s:g}.png"


def write_frame_cache(frames: Sequence[Frame], session_dir: str | Path) -> List[Path]:
    """Materialize frames under <session>/frames/ and return the paths."""
    frames_dir = Path(session_dir) / "frames"
    frames_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for k, frame in enumerate(frames):
        path = frames_dir / frame_filename(k, frame.timestamp_s)
        path.write_bytes(frame.image)
        paths.append(path)
    return paths
