"""Evaluation harness: action-recognition scoring over the 14-task taxonomy,
two-rater agreement (percent agreement and Gwet's AC1), per-action miss rates,
and the duration-vs-runtime linear fit."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from .errors import InvalidInputError


class TaskLabel(str, Enum):
    OPEN_FILE = "open_file"
    ADD_ROW = "add_row"
    ADD_VALUES = "add_values"
    EDIT_FORMULA = "edit_formula"
    BOLD = "bold"
    CELL_FILL_COLOR = "cell_fill_color"
    SWITCH_SHEET = "switch_sheet"
    RESIZE_COLUMN = "resize_column"
    COPY_PASTE = "copy_paste"
    CHANGE_FONT_COLOR = "change_font_color"
    NEW_SHEET = "new_sheet"
    RENAME_SHEET = "rename_sheet"
    SHARE_LINK = "share_link"
    NEW_WORKBOOK = "new_workbook"


N_LABELS = len(TaskLabel)  # 14


@dataclass(frozen=True)
class SessionAnnotation:
    session_id: str
    truth: FrozenSet[TaskLabel]
    predicted: FrozenSet[TaskLabel]


@dataclass(frozen=True)
class ScoreReport:
    tp: int
    fp: int
    fn: int
    tn: int
    precision: Optional[float]
    recall: Optional[float]
    f1: Optional[float]
    accuracy: float


@dataclass(frozen=True)
class AggregateReport:
    n_sessions: int
    mean_precision: Optional[float]
    mean_recall: Optional[float]
    mean_f1: Optional[float]
    mean_accuracy: float
    sd_precision: Optional[float]
    sd_recall: Optional[float]
    sd_f1: Optional[float]
    sd_accuracy: float
    f1_excluded: int


@dataclass(frozen=True)
class AgreementReport:
    pa: float
    pi: float
    pe: float
    ac1: float


@dataclass(frozen=True)
class FitReport:
    slope: float
    intercept: float
    r_squared: float


def score_session(annotation: SessionAnnotation) -> ScoreReport:
    """Per-session confusion counts and derived fractions over the 14 labels.

    Ratios with a zero denominator are reported as None rather than 0, and F1
    is None whenever either component is."""
    truth, pred = annotation.truth, annotation.predicted
    tp = len(truth & pred)
    fp = len(pred - truth)
    fn = len(truth - pred)
    tn = N_LABELS - tp - fp - fn
    precision = tp / (tp + fp) if (tp + fp) > 0 else None
    recall = tp / (tp + fn) if (tp + fn) > 0 else None
    if precision is None or recall is None or (precision + recall) == 0:
        f1 = None
        if precision is not None and recall is not None:
            f1 = 0.0
    else:
        f1 = 2 * precision * recall / (precision + recall)
    accuracy = (tp + tn) / N_LABELS
    return ScoreReport(tp, fp, fn, tn, precision, recall, f1, accuracy)


def _mean_sd(values: Sequence[float]) -> Tuple[Optional[float], Optional[float]]:
    if not values:
        return None, None
    arr = np.asarray(values, dtype=float)
    return float(arr.mean()), float(arr.std())


def aggregate_scores(reports: Sequence[ScoreReport]) -> AggregateReport:
    """Unweighted per-session means; sessions with undefined F1 are excluded
    from the F1 mean and counted separately."""
    if not reports:
        raise InvalidInputError("aggregate_scores needs at least one report")
    precisions = [r.precision for r in reports if r.precision is not None]
    recalls = [r.recall for r in reports if r.recall is not None]
    f1s = [r.f1 for r in reports if r.f1 is not None]
    accuracies = [r.accuracy for r in reports]
    mp, sp = _mean_sd(precisions)
    mr, sr = _mean_sd(recalls)
    mf, sf = _mean_sd(f1s)
    ma, sa = _mean_sd(accuracies)
    return AggregateReport(
        n_sessions=len(reports),
        mean_precision=mp,
        mean_recall=mr,
        mean_f1=mf,
        mean_accuracy=ma,
        sd_precision=sp,
        sd_recall=sr,
        sd_f1=sf,
        sd_accuracy=sa,
        f1_excluded=len(reports) - len(f1s),
    )


def percent_agreement(a: Sequence[bool], b: Sequence[bool]) -> float:
    if len(a) != len(b):
        raise InvalidInputError("rater vectors must have equal length")
    if not a:
        raise InvalidInputError("rater vectors must be non-empty")
    return sum(1 for x, y in zip(a, b) if x == y) / len(a)


def gwet_ac1(a: Sequence[bool], b: Sequence[bool]) -> AgreementReport:
    """Two-rater binary Gwet's AC1: ac1 = (pa - pe)/(1 - pe) with
    pe = 2*pi*(1-pi) and pi the mean positive marginal of the two raters."""
    pa = percent_agreement(a, b)
    pi = (sum(a) / len(a) + sum(b) / len(b)) / 2
    pe = 2 * pi * (1 - pi)
    ac1 = (pa - pe) / (1 - pe)
    return AgreementReport(pa=pa, pi=pi, pe=pe, ac1=ac1)


def miss_rate_by_action(
    annotations: Sequence[SessionAnnotation],
) -> Dict[TaskLabel, float]:
    """Fraction of sessions where each performed label was absent from the
    prediction; labels never performed are omitted."""
    performed: Dict[TaskLabel, int] = {}
    missed: Dict[TaskLabel, int] = {}
    for ann in annotations:
        for label in ann.truth:
            performed[label] = performed.get(label, 0) + 1
            if label not in ann.predicted:
                missed[label] = missed.get(label, 0) + 1
    return {label: missed.get(label, 0) / count for label, count in performed.items()}


def fit_duration_runtime(points: Sequence[Tuple[float, float]]) -> FitReport:
    """Ordinary least-squares fit of runtime against recording duration."""
    if len(points) < 2:
        raise InvalidInputError("need at least two points to fit")
    x = np.asarray([p[0] for p in points], dtype=float)
    y = np.asarray([p[1] for p in points], dtype=float)
    if np.all(x == x[0]):
        raise InvalidInputError("durations are constant; slope is undefined")
    slope, intercept = np.polyfit(x, y, 1)
    residuals = y - (slope * x + intercept)
    ss_res = float(np.sum(residuals**2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        r_squared = 1.0 if math.isclose(ss_res, 0.0, abs_tol=1e-12) else 0.0
    else:
        r_squared = 1.0 - ss_res / ss_tot
    return FitReport(slope=float(slope), intercept=float(intercept), r_squared=r_squared)


# --- file formats -----------------------------------------------------------


def _parse_labels(values: Iterable[str], where: str) -> FrozenSet[TaskLabel]:
    labels = set()
    for value in values:
        try:
            labels.add(TaskLabel(value))
        except ValueError:
            raise InvalidInputError(f"{where}: unknown task label {value!r}")
    return frozenset(labels)


def load_annotations(path: str | Path) -> List[SessionAnnotation]:
    """Read a JSON-lines annotation file:
    {"session_id": ..., "truth": [...], "predicted": [...]} per line."""
    annotations = []
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f"{path}:{lineno}: invalid JSON ({exc.msg})")
        where = f"{path}:{lineno}"
        annotations.append(
            SessionAnnotation(
                session_id=str(obj["session_id"]),
                truth=_parse_labels(obj["truth"], where),
                predicted=_parse_labels(obj["predicted"], where),
            )
        )
    if not annotations:
        raise InvalidInputError(f"{path}: no annotations found")
    return annotations


def load_rater_verdicts(path: str | Path) -> Tuple[List[bool], List[bool]]:
    """Read a rater-verdict file: {"items": [{"id", "rater_a", "rater_b"}...]}."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path}: invalid JSON ({exc.msg})")
    items = data.get("items")
    if not isinstance(items, list) or not items:
        raise InvalidInputError(f"{path}: 'items' must be a non-empty list")
    a, b = [], []
    for i, item in enumerate(items):
        if not isinstance(item.get("rater_a"), bool) or not isinstance(item.get("rater_b"), bool):
            raise InvalidInputError(f"{path}: item {i} needs boolean rater_a/rater_b")
        a.append(item["rater_a"])
        b.append(item["rater_b"])
    return a, b


def load_timings(path: str | Path) -> List[Tuple[float, float]]:
    """Read duration/runtime pairs:
    {"points": [{"duration_min": x, "runtime_min": y}...]}."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path}: invalid JSON ({exc.msg})")
    points = data.get("points")
    if not isinstance(points, list):
        raise InvalidInputError(f"{path}: 'points' must be a list")
    return [(p["duration_min"], p["runtime_min"]) for p in points]


# --- keyword auto-rater (for synthetic fixtures only) ------------------------

_KEYWORDS: Dict[TaskLabel, Tuple[str, ...]] = {
    TaskLabel.OPEN_FILE: ("opened", "open the file", "open file"),
    TaskLabel.ADD_ROW: ("inserted a row", "added a row", "new row", "insert row"),
    TaskLabel.ADD_VALUES: ("typed", "entered value", "input value", "added values"),
    TaskLabel.EDIT_FORMULA: ("formula", "=sum", "sumif"),
    TaskLabel.BOLD: ("bold",),
    TaskLabel.CELL_FILL_COLOR: ("fill color", "highlighted cell"),
    TaskLabel.SWITCH_SHEET: ("switched to sheet", "switched sheet", "navigated to sheet"),
    TaskLabel.RESIZE_COLUMN: ("resized column", "column width"),
    TaskLabel.COPY_PASTE: ("copied", "pasted", "copy/paste"),
    TaskLabel.CHANGE_FONT_COLOR: ("font color",),
    TaskLabel.NEW_SHEET: ("created a new sheet", "new sheet", "added a sheet"),
    TaskLabel.RENAME_SHEET: ("renamed", "rename sheet"),
    TaskLabel.SHARE_LINK: ("shared a link", "share link", "sharing link"),
    TaskLabel.NEW_WORKBOOK: ("new workbook", "created a workbook"),
}


def keyword_rater(actions: Sequence[str]) -> Set[TaskLabel]:
    """Crude keyword matcher crediting task labels to free-text trace actions.
    Intended only for synthetic fixtures, not real rater replacement."""
    text = " | ".join(a.lower() for a in actions)
    return {label for label, keys in _KEYWORDS.items() if any(k in text for k in keys)}


# --- report rendering --------------------------------------------------------


def report_to_dict(
    aggregate: AggregateReport,
    agreement: Optional[AgreementReport] = None,
    fit: Optional[FitReport] = None,
    miss_rates: Optional[Dict[TaskLabel, float]] = None,
) -> dict:
    out: dict = {
        "scores": {
            "n_sessions": aggregate.n_sessions,
            "mean_precision": aggregate.mean_precision,
            "mean_recall": aggregate.mean_recall,
            "mean_f1": aggregate.mean_f1,
            "mean_accuracy": aggregate.mean_accuracy,
            "sd_precision": aggregate.sd_precision,
            "sd_recall": aggregate.sd_recall,
            "sd_f1": aggregate.sd_f1,
            "sd_accuracy": aggregate.sd_accuracy,
            "f1_excluded": aggregate.f1_excluded,
        }
    }
    if miss_rates is not None:
        out["miss_rates"] = {label.value: rate for label, rate in sorted(miss_rates.items(), key=lambda kv: kv[0].value)}
    if agreement is not None:
        out["agreement"] = {
            "pa": agreement.pa,
            "pi": agreement.pi,
            "pe": agreement.pe,
            "ac1": agreement.ac1,
        }
    if fit is not None:
        out["fit"] = {
            "slope": fit.slope,
            "intercept": fit.intercept,
            "r_squared": fit.r_squared,
        }
    return out


def render_report_table(report: dict) -> str:
    """Plain-text table rendering of a report dict."""
    lines = []
    scores = report["scores"]
    lines.append(f"{'metric':<18}{'mean':>10}{'sd':>10}")
    for name in ("precision", "recall", "f1", "accuracy"):
        mean = scores[f"mean_{name}"]
        sd = scores[f"sd_{name}"]
        mean_s = f"{mean:.4f}" if mean is not None else "n/a"
        sd_s = f"{sd:.4f}" if sd is not None else "n/a"
        lines.append(f"{name:<18}{mean_s:>10}{sd_s:>10}")
    lines.append(f"sessions: {scores['n_sessions']}  (f1 excluded: {scores['f1_excluded']})")
    if "miss_rates" in report:
        lines.append("")
        lines.append(f"{'label':<20}{'miss rate':>10}")
        for label, rate in report["miss_rates"].items():
            lines.append(f"{label:<20}{rate:>10.3f}")
    if "agreement" in report:
        agr = report["agreement"]
        lines.append("")
        lines.append(
            f"agreement: pa={agr['pa']:.4f}  pe={agr['pe']:.4f}  ac1={agr['ac1']:.4f}"
        )
    if "fit" in report:
        fit = report["fit"]
        lines.append("")
        lines.append(
            f"runtime fit: slope={fit['slope']:.4f}  intercept={fit['intercept']:.4f}  "
            f"r_squared={fit['r_squared']:.4f}"
        )
    return "\n".join(lines)
