"""Turn screen recordings of spreadsheet work into reconstructed action
traces and prioritized workflow-improvement suggestions."""

from .advisor import (
    SuggestionQueue,
    WorkflowAssessment,
    build_phase2_prompt,
    next_suggestion,
    parse_phase2_response,
    select_recommendations,
)
from .ingest import CropRect, Frame, FramePlan, SamplingConfig, batch_frames, extract_frames, plan_sampling
from .metrics import (
    AgreementReport,
    FitReport,
    ScoreReport,
    SessionAnnotation,
    TaskLabel,
    aggregate_scores,
    fit_duration_runtime,
    gwet_ac1,
    miss_rate_by_action,
    percent_agreement,
    score_session,
)
from .providers import ChatRequest, HttpProvider, MockProvider, ProviderConfig, load_script
from .store import SessionRecord, SessionStore
from .trace import (
    ActionTrace,
    BatchObservation,
    analyze_recording,
    build_phase1_prompt,
    merge_segments,
    parse_phase1_response,
    run_segment,
)

__version__ = "0.1.0"
