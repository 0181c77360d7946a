from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from redshell_eval.diagnostics import Diagnostic, ParseErrorId, RuleId, Severity, SourceSpan
from redshell_eval.exceptions import ValidationError
from redshell_eval.triage import TriageResult, triage_percentages, triage_sample

_SPAN = SourceSpan(0, 1, 1, 1)


def diag(rule):
    return Diagnostic.create(rule, _SPAN, "msg")


WARNING = RuleId.AVOID_USING_CMDLET_ALIASES
ERROR = RuleId.AVOID_USING_COMPUTERNAME_HARDCODED
PARSE = ParseErrorId.UNEXPECTED_TOKEN


def result(*severities, sample_id="s"):
    return TriageResult(sample_id=sample_id, categories=frozenset(severities))


class TestTriageSample:
    def test_parse_error_swallows_everything(self):
        diags = [diag(PARSE), diag(WARNING), diag(WARNING)]
        assert triage_sample(diags).categories == frozenset({Severity.PARSE_ERROR})

    def test_warning_and_error_co_occur(self):
        diags = [diag(WARNING), diag(ERROR)]
        assert triage_sample(diags).categories == frozenset(
            {Severity.WARNING, Severity.ERROR}
        )

    def test_clean_sample_empty_set(self):
        assert triage_sample([]).categories == frozenset()

    def test_only_severities_matter(self):
        a = triage_sample([diag(RuleId.AVOID_USING_WMI_CMDLET)])
        b = triage_sample([diag(RuleId.AVOID_USING_CMDLET_ALIASES)])
        assert a.categories == b.categories == frozenset({Severity.WARNING})

    def test_idempotent_on_categories(self):
        diags = [diag(PARSE), diag(ERROR)]
        first = triage_sample(diags)
        # Re-triaging a parse-error-only view changes nothing.
        again = triage_sample([diag(PARSE)])
        assert first.categories == again.categories


def _fixture(n_parse, n_warning_only, n_warning_error, n_error_only, n_clean):
    results = (
        [result(Severity.PARSE_ERROR) for _ in range(n_parse)]
        + [result(Severity.WARNING) for _ in range(n_warning_only)]
        + [result(Severity.WARNING, Severity.ERROR) for _ in range(n_warning_error)]
        + [result(Severity.ERROR) for _ in range(n_error_only)]
        + [result() for _ in range(n_clean)]
    )
    return results


class TestTriagePercentages:
    def test_reconstructed_bars_first_model(self):
        # 113 samples: 3 parse-error; 31/110 warning; 2/110 error.
        results = _fixture(3, 29, 2, 0, 79)
        pct = triage_percentages(results)
        assert pct.n_total == 113
        assert pct.n_no_parse_error == 110
        assert (
            round(pct.parse_error_pct, 2),
            round(pct.warning_pct, 2),
            round(pct.error_pct, 2),
        ) == (2.65, 28.18, 1.82)

    def test_reconstructed_bars_second_model(self):
        # 113 samples: 7 parse-error; 30/106 warning; 1/106 error.
        results = _fixture(7, 29, 1, 0, 76)
        pct = triage_percentages(results)
        assert pct.n_total == 113
        assert pct.n_no_parse_error == 106
        assert (
            round(pct.parse_error_pct, 2),
            round(pct.warning_pct, 2),
            round(pct.error_pct, 2),
        ) == (6.19, 28.30, 0.94)

    def test_all_clean(self):
        pct = triage_percentages(_fixture(0, 0, 0, 0, 20))
        assert (pct.parse_error_pct, pct.warning_pct, pct.error_pct) == (0.0, 0.0, 0.0)

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            triage_percentages([])

    def test_partition_consistency(self):
        results = _fixture(4, 5, 2, 1, 8)
        pct = triage_percentages(results)
        assert pct.n_total == pct.n_no_parse_error + 4

    def test_order_invariance(self):
        results = _fixture(3, 6, 2, 1, 10)
        shuffled = results[:]
        random.Random(42).shuffle(shuffled)
        assert triage_percentages(results) == triage_percentages(shuffled)

    def test_all_parse_errors_zero_denominator(self):
        pct = triage_percentages(_fixture(5, 0, 0, 0, 0))
        assert pct.parse_error_pct == 100.0
        assert pct.warning_pct == 0.0 and pct.error_pct == 0.0


@settings(max_examples=100, deadline=None)
@given(
    st.lists(
        st.sampled_from(
            [
                frozenset(),
                frozenset({Severity.PARSE_ERROR}),
                frozenset({Severity.WARNING}),
                frozenset({Severity.ERROR}),
                frozenset({Severity.WARNING, Severity.ERROR}),
            ]
        ),
        min_size=1,
        max_size=60,
    )
)
def test_percentage_invariants(category_sets):
    results = [
        TriageResult(sample_id=f"s{i}", categories=c) for i, c in enumerate(category_sets)
    ]
    pct = triage_percentages(results)
    n_pe = sum(1 for c in category_sets if Severity.PARSE_ERROR in c)
    assert pct.n_total == len(category_sets)
    assert pct.n_no_parse_error == len(category_sets) - n_pe
    assert 0 <= pct.parse_error_pct <= 100
    assert 0 <= pct.warning_pct <= 100
    assert 0 <= pct.error_pct <= 100
