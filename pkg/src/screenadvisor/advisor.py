"""Phase 2: assess the reconstructed workflow and queue up to three
prioritized improvement suggestions."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from .errors import EmptyTraceError, ResponseSchemaError
from .jsonextract import complete_and_parse, extract_json_object
from .providers import ChatProvider, ChatRequest
from .trace import ActionTrace

logger = logging.getLogger(__name__)

PHASE2_SYSTEM_PROMPT = """You are a workflow efficiency expert. Analyze user actions from Excel task videos and identify suboptimal workflows.

Instructions:
1. Group related actions into workflows (steps accomplishing a specific task)
2. For each workflow, set "Optimal" to true/false based on efficiency
3. For suboptimal workflows ("Optimal": false):
   - "ActionList": List actions starting with "It looks like you..."
   - "Reason": Main inefficiency (be specific) starting with "You ..."
   - "Suggestion": Provide ONE actionable solution using Excel features:
     - Give step-by-step instructions with exact Ribbon paths/shortcuts
     - Include detailed examples with realistic sheet/column names
     - Prioritize automation over manual repetition
     - Provide complete formulas with explanations when applicable
     - End with "Benefit:" explaining concrete improvements (time saved, fewer steps, error reduction)
     - Compare before/after: "Original: X steps, Suggested: Y steps"

4. Focus on efficiency and maintainability, not just task completion
5. Only include 3 most impactful suboptimal workflows and rank them by importance
6. Use proper formatting: backticks (`) around Excel functions, formulas, keyboard shortcuts, and feature names, and triple backticks (```) for multi-line formulas or step-by-step code examples
7. Create plausible placeholders for unclear data references

Output JSON format:
{
    "Workflows": [
        {
            "ActionList": ["Action 1", "Action 2"],
            "Optimal": true/false,
            "Reason": "Brief explanation",
            "Suggestion": "Step-by-step actionable solution"
        }
    ]
}"""

MAX_SUGGESTIONS = 3


@dataclass(frozen=True)
class WorkflowAssessment:
    action_list: tuple
    optimal: bool
    reason: str
    suggestion: str

    def to_dict(self) -> dict:
        return {
            "action_list": list(self.action_list),
            "optimal": self.optimal,
            "reason": self.reason,
            "suggestion": self.suggestion,
        }

    @staticmethod
    def from_dict(data: dict) -> "WorkflowAssessment":
        return WorkflowAssessment(
            action_list=tuple(data["action_list"]),
            optimal=data["optimal"],
            reason=data["reason"],
            suggestion=data["suggestion"],
        )


EXHAUSTED = object()


@dataclass
class SuggestionQueue:
    items: List[WorkflowAssessment] = field(default_factory=list)
    revealed: int = 0

    def to_json(self) -> str:
        return json.dumps(
            {"items": [a.to_dict() for a in self.items], "revealed": self.revealed},
            indent=2,
        )

    @staticmethod
    def from_json(text: str) -> "SuggestionQueue":
        data = json.loads(text)
        return SuggestionQueue(
            items=[WorkflowAssessment.from_dict(d) for d in data["items"]],
            revealed=data["revealed"],
        )


def build_phase2_prompt(trace: ActionTrace) -> str:
    """Full Phase-2 prompt: the system template, the numbered action list, and
    the retained sheet snapshots."""
    if not trace.actions:
        raise EmptyTraceError("trace has no actions to analyze")
    lines = [PHASE2_SYSTEM_PROMPT, "", "User actions:"]
    lines.extend(f"{i + 1}. {a.text}" for i, a in enumerate(trace.actions))
    lines.extend(["", "Sheet snapshots:"])
    if trace.snapshots:
        for snap in trace.snapshots:
            lines.append(f"[segment {snap.segment_index}, batch {snap.batch_index}]")
            lines.append(snap.markdown)
    else:
        lines.append("none")
    return "\n".join(lines)


def parse_phase2_response(raw: str) -> List[WorkflowAssessment]:
    """Parse the Phase-2 reply into validated workflow assessments."""
    data = extract_json_object(raw)
    workflows = data.get("Workflows")
    if not isinstance(workflows, list):
        raise ResponseSchemaError("missing or non-list value", "Workflows")
    assessments = []
    for index, entry in enumerate(workflows):
        if not isinstance(entry, dict):
            raise ResponseSchemaError("workflow entry must be an object", f"Workflows[{index}]")
        action_list = entry.get("ActionList")
        if not isinstance(action_list, list) or not all(isinstance(a, str) for a in action_list):
            raise ResponseSchemaError(
                "ActionList must be a list of strings", f"Workflows[{index}].ActionList"
            )
        optimal = entry.get("Optimal")
        if not isinstance(optimal, bool):
            raise ResponseSchemaError(
                "Optimal must be a boolean", f"Workflows[{index}].Optimal"
            )
        reason = entry.get("Reason", "")
        suggestion = entry.get("Suggestion", "")
        if not isinstance(reason, str):
            raise ResponseSchemaError("Reason must be a string", f"Workflows[{index}].Reason")
        if not isinstance(suggestion, str):
            raise ResponseSchemaError(
                "Suggestion must be a string", f"Workflows[{index}].Suggestion"
            )
        if not optimal and (not reason or not suggestion):
            missing = "Reason" if not reason else "Suggestion"
            raise ResponseSchemaError(
                "suboptimal workflow is missing a required field",
                f"Workflows[{index}].{missing}",
            )
        assessment = WorkflowAssessment(
            action_list=tuple(action_list),
            optimal=optimal,
            reason=reason,
            suggestion=suggestion,
        )
        _lint_style(assessment, index)
        assessments.append(assessment)
    return assessments


def _lint_style(assessment: WorkflowAssessment, index: int) -> None:
    # Style drift from the prompt's phrasing rules is tolerated, just logged.
    if assessment.optimal:
        return
    if not all(a.startswith("It looks like you") for a in assessment.action_list):
        logger.warning("workflow %d: ActionList entries do not all start with 'It looks like you'", index)
    if not assessment.reason.startswith("You"):
        logger.warning("workflow %d: Reason does not start with 'You'", index)
    if "Benefit:" not in assessment.suggestion:
        logger.warning("workflow %d: Suggestion has no 'Benefit:' line", index)


def select_recommendations(assessments: Sequence[WorkflowAssessment]) -> SuggestionQueue:
    """Keep suboptimal workflows in model rank order, capped at three."""
    suboptimal = [a for a in assessments if not a.optimal]
    return SuggestionQueue(items=suboptimal[:MAX_SUGGESTIONS], revealed=0)


def next_suggestion(queue: SuggestionQueue) -> Optional[WorkflowAssessment]:
    """Reveal the next queued suggestion, or None once the queue is exhausted."""
    if queue.revealed >= len(queue.items):
        return None
    item = queue.items[queue.revealed]
    queue.revealed += 1
    return item


def advise(trace: ActionTrace, provider: ChatProvider) -> SuggestionQueue:
    """Run Phase 2 end to end: prompt, parse, select."""
    prompt = build_phase2_prompt(trace)
    request = ChatRequest(
        phase="text",
        system_text=PHASE2_SYSTEM_PROMPT,
        user_text=prompt[len(PHASE2_SYSTEM_PROMPT) :].lstrip("\n"),
    )
    assessments = complete_and_parse(provider, request, parse_phase2_response)
    return select_recommendations(assessments)
