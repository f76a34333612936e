import json
from pathlib import Path

import cv2
import numpy as np
import pytest


def make_video(path: Path, duration_s: float, fps: float = 2.0, size=(64, 48)) -> Path:
    """Write a tiny synthetic recording whose frames vary by index."""
    w, h = size
    writer = cv2.VideoWriter(str(path), cv2.VideoWriter_fourcc(*"mp4v"), fps, (w, h))
    assert writer.isOpened()
    n_frames = int(round(duration_s * fps))
    for i in range(n_frames):
        frame = np.full((h, w, 3), (i * 7) % 256, np.uint8)
        frame[0, 0] = (i % 256, 0, 0)
        writer.write(frame)
    writer.release()
    return path


def obs_json(actions, sheet_changes=False, sheet_details=""):
    """A valid Phase-1 model response body."""
    return json.dumps(
        {
            "new_action_detected": bool(actions),
            "new_actions": list(actions),
            "sheet_changes": sheet_changes,
            "sheet_details": sheet_details,
        }
    )


def workflow(action_list, optimal, reason="", suggestion=""):
    return {
        "ActionList": list(action_list),
        "Optimal": optimal,
        "Reason": reason,
        "Suggestion": suggestion,
    }


def workflows_json(workflows):
    """A valid Phase-2 model response body."""
    return json.dumps({"Workflows": workflows})


def suboptimal(i):
    """A well-formed suboptimal workflow entry, distinct per index."""
    return workflow(
        [f"It looks like you repeated step {i} manually"],
        optimal=False,
        reason=f"You repeated manual edit {i}",
        suggestion=f"Use `SUMIF` instead (variant {i}).\n\nBenefit: fewer steps. Original: 4 steps, Suggested: 2 steps",
    )


@pytest.fixture
def short_video(tmp_path):
    return make_video(tmp_path / "short.mp4", duration_s=12.0)


@pytest.fixture
def minute_video(tmp_path):
    return make_video(tmp_path / "minute.mp4", duration_s=60.0)
