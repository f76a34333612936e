import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from screenadvisor.errors import InvalidInputError
from screenadvisor.metrics import (
    SessionAnnotation,
    TaskLabel,
    aggregate_scores,
    fit_duration_runtime,
    gwet_ac1,
    keyword_rater,
    load_annotations,
    miss_rate_by_action,
    percent_agreement,
    score_session,
)
from screenadvisor.synthetic import generate_benchmark, write_annotations

ALL = frozenset(TaskLabel)


def ann(truth, predicted, session_id="s"):
    return SessionAnnotation(session_id, frozenset(truth), frozenset(predicted))


class TestScoreSession:
    def test_perfect(self):
        report = score_session(ann(ALL, ALL))
        assert report.precision == report.recall == report.f1 == report.accuracy == 1.0

    def test_worked_example(self):
        truth = {TaskLabel.ADD_ROW, TaskLabel.BOLD, TaskLabel.COPY_PASTE}
        pred = {TaskLabel.ADD_ROW, TaskLabel.BOLD, TaskLabel.NEW_SHEET}
        report = score_session(ann(truth, pred))
        assert report.tp == 2 and report.fp == 1 and report.fn == 1 and report.tn == 10
        assert math.isclose(report.precision, 2 / 3, abs_tol=1e-12)
        assert math.isclose(report.recall, 2 / 3, abs_tol=1e-12)
        assert math.isclose(report.f1, 2 / 3, abs_tol=1e-12)
        assert math.isclose(report.accuracy, 12 / 14, abs_tol=1e-12)

    def test_empty_sets(self):
        report = score_session(ann(set(), set()))
        assert report.tn == 14 and report.accuracy == 1.0
        assert report.precision is None and report.recall is None and report.f1 is None

    @given(
        truth=st.sets(st.sampled_from(list(TaskLabel))),
        pred=st.sets(st.sampled_from(list(TaskLabel))),
    )
    @settings(max_examples=200)
    def test_counts_sum_to_14(self, truth, pred):
        report = score_session(ann(truth, pred))
        assert report.tp + report.fp + report.fn + report.tn == 14
        if report.f1 is not None:
            assert 0 <= report.f1 <= 1


class TestAggregate:
    def test_mean(self):
        reports = [score_session(ann(ALL, ALL)), score_session(ann(ALL, set()))]
        # second session: recall 0, precision absent, f1 absent
        agg = aggregate_scores(reports)
        assert agg.mean_f1 == 1.0
        assert agg.f1_excluded == 1
        assert agg.mean_recall == 0.5

    def test_single_report_sd_zero(self):
        agg = aggregate_scores([score_session(ann(ALL, ALL))])
        assert agg.sd_f1 == 0.0

    def test_empty_input(self):
        with pytest.raises(InvalidInputError):
            aggregate_scores([])


class TestAgreement:
    def test_identical(self):
        assert percent_agreement([True] * 10, [True] * 10) == 1.0

    def test_one_of_ten(self):
        a = [True] * 10
        b = [True] * 9 + [False]
        assert percent_agreement(a, b) == 0.9

    def test_length_mismatch(self):
        with pytest.raises(InvalidInputError):
            percent_agreement([True], [True, False])

    def test_empty(self):
        with pytest.raises(InvalidInputError):
            percent_agreement([], [])

    def test_worked_example(self):
        # n=10, 9 agreements, a has 6 positives, b has 5
        a = [True, True, True, True, True, True, False, False, False, False]
        b = [True, True, True, True, True, False, False, False, False, False]
        report = gwet_ac1(a, b)
        assert math.isclose(report.pa, 0.9)
        assert math.isclose(report.pi, 0.55)
        assert math.isclose(report.pe, 0.495)
        assert math.isclose(report.ac1, (0.9 - 0.495) / 0.505, abs_tol=1e-12)

    def test_total_disagreement(self):
        report = gwet_ac1([True] * 4, [False] * 4)
        assert report.pa == 0.0
        assert math.isclose(report.ac1, -1.0)

    @given(data=st.lists(st.booleans(), min_size=1, max_size=50))
    @settings(max_examples=100)
    def test_perfect_agreement_gives_one(self, data):
        assert math.isclose(gwet_ac1(data, list(data)).ac1, 1.0)

    @given(
        a=st.lists(st.booleans(), min_size=5, max_size=30),
        seed=st.integers(0, 1000),
    )
    @settings(max_examples=100)
    def test_symmetry(self, a, seed):
        import random

        rng = random.Random(seed)
        b = [rng.random() < 0.5 for _ in a]
        r1, r2 = gwet_ac1(a, b), gwet_ac1(b, a)
        assert math.isclose(r1.ac1, r2.ac1)
        assert math.isclose(r1.pa, r2.pa)


class TestMissRates:
    def test_benchmark_shape_counts(self):
        # label performed in 12 sessions, missed in 7 -> 58.3%
        annotations = []
        for i in range(12):
            predicted = set() if i < 7 else {TaskLabel.BOLD}
            annotations.append(ann({TaskLabel.BOLD}, predicted, f"s{i}"))
        rates = miss_rate_by_action(annotations)
        assert math.isclose(rates[TaskLabel.BOLD], 7 / 12)

    def test_always_detected(self):
        rates = miss_rate_by_action([ann({TaskLabel.ADD_ROW}, {TaskLabel.ADD_ROW})])
        assert rates[TaskLabel.ADD_ROW] == 0.0

    def test_never_performed_absent(self):
        rates = miss_rate_by_action([ann({TaskLabel.ADD_ROW}, set())])
        assert TaskLabel.BOLD not in rates

    def test_values_in_unit_interval(self):
        sessions = generate_benchmark(n_sessions=10, seed=3)
        rates = miss_rate_by_action(sessions)
        assert all(0 <= r <= 1 for r in rates.values())


class TestFit:
    def test_exact_line(self):
        points = [(x, 0.1 * x + 0.5) for x in (10, 20, 30, 50)]
        fit = fit_duration_runtime(points)
        assert math.isclose(fit.slope, 0.1, abs_tol=1e-9)
        assert math.isclose(fit.intercept, 0.5, abs_tol=1e-9)
        assert math.isclose(fit.r_squared, 1.0, abs_tol=1e-9)

    def test_two_points(self):
        fit = fit_duration_runtime([(10, 1.4), (50, 6.2)])
        assert math.isclose(fit.r_squared, 1.0, abs_tol=1e-9)

    def test_constant_durations(self):
        with pytest.raises(InvalidInputError):
            fit_duration_runtime([(10, 1), (10, 2)])

    def test_too_few_points(self):
        with pytest.raises(InvalidInputError):
            fit_duration_runtime([(10, 1)])


class TestAnnotationIO:
    def test_round_trip(self, tmp_path):
        sessions = generate_benchmark(n_sessions=5, seed=1)
        path = tmp_path / "annotations.jsonl"
        write_annotations(sessions, path)
        loaded = load_annotations(path)
        assert loaded == sessions

    def test_unknown_label(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"session_id": "x", "truth": ["teleport"], "predicted": []}\n')
        with pytest.raises(InvalidInputError):
            load_annotations(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        path.write_text("")
        with pytest.raises(InvalidInputError):
            load_annotations(path)


class TestKeywordRater:
    def test_credits_obvious_actions(self):
        labels = keyword_rater(
            ["Applied bold formatting to A1", "Typed =SUM(B2:B7) formula in B8"]
        )
        assert TaskLabel.BOLD in labels
        assert TaskLabel.EDIT_FORMULA in labels

    def test_empty_actions(self):
        assert keyword_rater([]) == set()
