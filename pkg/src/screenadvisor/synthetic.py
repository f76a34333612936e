"""Synthetic benchmark fixtures for exercising the evaluation harness.

Generates annotated session corpora with controlled per-label miss rates, so
the harness's aggregate scores and miss-rate tables can be checked against the
seeding instead of a private dataset.
"""

from __future__ import annotations

import json
import random
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from .metrics import SessionAnnotation, TaskLabel


def generate_benchmark(
    n_sessions: int = 25,
    miss_rates: Optional[Dict[TaskLabel, float]] = None,
    default_miss_rate: float = 0.1,
    false_positive_rate: float = 0.0,
    seed: int = 0,
) -> List[SessionAnnotation]:
    """Build a corpus where every session performs all 14 tasks and each
    performed label is dropped from the prediction with its miss probability."""
    rng = random.Random(seed)
    miss_rates = miss_rates or {}
    sessions = []
    all_labels = list(TaskLabel)
    for i in range(n_sessions):
        truth = frozenset(all_labels)
        predicted = set()
        for label in all_labels:
            rate = miss_rates.get(label, default_miss_rate)
            if rng.random() >= rate:
                predicted.add(label)
        if false_positive_rate > 0:
            # With full-truth sessions there is no room for false positives;
            # kept for corpora with partial truth sets.
            for label in all_labels:
                if label not in truth and rng.random() < false_positive_rate:
                    predicted.add(label)
        sessions.append(
            SessionAnnotation(
                session_id=f"synthetic-{i:03d}",
                truth=truth,
                predicted=frozenset(predicted),
            )
        )
    return sessions


def write_annotations(annotations: Sequence[SessionAnnotation], path: str | Path) -> None:
    """Write annotations as the JSON-lines format the harness consumes."""
    lines = []
    for ann in annotations:
        lines.append(
            json.dumps(
                {
                    "session_id": ann.session_id,
                    "truth": sorted(l.value for l in ann.truth),
                    "predicted": sorted(l.value for l in ann.predicted),
                }
            )
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
