from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from redshell_eval.corpus import (
    CorpusSample,
    Origin,
    TacticId,
    load_corpus,
    save_corpus,
    split_corpus,
    tactic_coverage,
)
from redshell_eval.exceptions import CorpusFormatError, ValidationError


def _write_jsonl(path, records):
    path.write_text("".join(json.dumps(r) + "\n" for r in records), encoding="utf-8")


def _mk(n, **kw):
    return CorpusSample(id=f"s{n:04d}", description=f"task {n}", snippet=f"Get-Item {n}", **kw)


class TestTacticId:
    def test_exactly_14_variants(self):
        assert len(TacticId) == 14

    def test_name_round_trip_lossless(self):
        for tactic in TacticId:
            assert TacticId(tactic.value) is tactic


class TestLoadCorpus:
    def test_two_valid_records_in_file_order(self, tmp_path):
        path = tmp_path / "c.jsonl"
        _write_jsonl(
            path,
            [
                {"id": "a", "description": "first", "snippet": "Get-Date", "origin": "reference"},
                {"id": "b", "description": "second", "snippet": "Get-Host", "origin": "extended"},
            ],
        )
        samples = load_corpus(path)
        assert [s.id for s in samples] == ["a", "b"]
        assert samples[0].origin is Origin.REFERENCE
        assert samples[1].origin is Origin.EXTENDED

    def test_empty_snippet_names_line(self, tmp_path):
        path = tmp_path / "c.jsonl"
        _write_jsonl(
            path,
            [
                {"id": "a", "description": "ok", "snippet": "Get-Date"},
                {"id": "b", "description": "bad", "snippet": "   "},
            ],
        )
        with pytest.raises(CorpusFormatError, match="line 2"):
            load_corpus(path)

    def test_admins_group_record(self, tmp_path):
        path = tmp_path / "c.jsonl"
        _write_jsonl(
            path,
            [
                {
                    "description": "List the members of Admins group.",
                    "snippet": 'Get-ADGroupMember -Identity "Admins"',
                }
            ],
        )
        (sample,) = load_corpus(path)
        assert sample.description == "List the members of Admins group."
        assert sample.snippet == 'Get-ADGroupMember -Identity "Admins"'
        assert sample.id == "line-1"  # assigned from the line number

    def test_duplicate_id_rejected(self, tmp_path):
        path = tmp_path / "c.jsonl"
        _write_jsonl(
            path,
            [
                {"id": "x", "description": "a", "snippet": "b"},
                {"id": "x", "description": "c", "snippet": "d"},
            ],
        )
        with pytest.raises(CorpusFormatError, match="duplicate id"):
            load_corpus(path)

    def test_unknown_tactic_rejected(self, tmp_path):
        path = tmp_path / "c.jsonl"
        _write_jsonl(path, [{"description": "a", "snippet": "b", "tactic": "Nonsense"}])
        with pytest.raises(CorpusFormatError, match="Nonsense"):
            load_corpus(path)

    def test_invalid_json_names_line(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text('{"description": "a", "snippet": "b"}\n{oops\n', encoding="utf-8")
        with pytest.raises(CorpusFormatError, match="line 2"):
            load_corpus(path)

    def test_load_save_load_fixed_point(self, tmp_path):
        original = tmp_path / "a.jsonl"
        _write_jsonl(
            original,
            [
                {"id": "a", "description": "x", "snippet": "y", "tactic": "Discovery",
                 "origin": "extended", "source": "unit"},
                {"description": "p", "snippet": "q"},
            ],
        )
        first = load_corpus(original)
        saved = tmp_path / "b.jsonl"
        save_corpus(first, saved)
        second = load_corpus(saved)
        assert first == second
        resaved = tmp_path / "c.jsonl"
        save_corpus(second, resaved)
        assert saved.read_bytes() == resaved.read_bytes()


class TestSplitCorpus:
    def test_1127_at_09_gives_1014_113(self):
        corpus = [_mk(i) for i in range(1127)]
        train, test = split_corpus(corpus, 0.9, seed=7)
        assert (len(train), len(test)) == (1014, 113)

    def test_same_seed_same_partitions(self):
        corpus = [_mk(i) for i in range(10)]
        a = split_corpus(corpus, 0.9, seed=123)
        b = split_corpus(corpus, 0.9, seed=123)
        assert a == b

    def test_single_sample_goes_to_test(self):
        corpus = [_mk(1)]
        train, test = split_corpus(corpus, 0.9, seed=0)
        assert train == [] and test == corpus

    def test_empty_corpus_rejected(self):
        with pytest.raises(ValidationError):
            split_corpus([], 0.9, seed=0)

    @pytest.mark.parametrize("fraction", [0.0, 1.0, -0.2, 1.5])
    def test_fraction_out_of_range_rejected(self, fraction):
        with pytest.raises(ValidationError):
            split_corpus([_mk(1), _mk(2)], fraction, seed=0)

    def test_load_order_does_not_change_partitions(self):
        corpus = [_mk(i) for i in range(50)]
        train_a, test_a = split_corpus(corpus, 0.8, seed=5)
        shuffled = list(reversed(corpus))
        train_b, test_b = split_corpus(shuffled, 0.8, seed=5)
        assert {s.id for s in train_a} == {s.id for s in train_b}
        assert {s.id for s in test_a} == {s.id for s in test_b}

    @settings(max_examples=50, deadline=None)
    @given(
        n=st.integers(min_value=1, max_value=200),
        fraction=st.floats(min_value=0.01, max_value=0.99),
        seed=st.integers(min_value=0, max_value=2**31),
    )
    def test_partition_invariants(self, n, fraction, seed):
        corpus = [_mk(i) for i in range(n)]
        train, test = split_corpus(corpus, fraction, seed)
        assert len(train) == int(fraction * n)
        train_ids = {s.id for s in train}
        test_ids = {s.id for s in test}
        assert train_ids.isdisjoint(test_ids)
        assert train_ids | test_ids == {s.id for s in corpus}


class TestTacticCoverage:
    def test_discovery_total_from_mixed_origins(self):
        corpus = (
            [_mk(i, tactic=TacticId.DISCOVERY, origin=Origin.REFERENCE) for i in range(205)]
            + [
                _mk(1000 + i, tactic=TacticId.DISCOVERY, origin=Origin.EXTENDED)
                for i in range(476)
            ]
        )
        coverage = tactic_coverage(corpus)
        count = coverage.by_tactic[TacticId.DISCOVERY]
        assert (count.reference, count.extended, count.total) == (205, 476, 681)

    def test_extended_only_tactic(self):
        corpus = [
            _mk(i, tactic=TacticId.RESOURCE_DEVELOPMENT, origin=Origin.EXTENDED)
            for i in range(18)
        ]
        count = tactic_coverage(corpus).by_tactic[TacticId.RESOURCE_DEVELOPMENT]
        assert (count.reference, count.extended, count.total) == (0, 18, 18)

    def test_empty_corpus_all_zero(self):
        coverage = tactic_coverage([])
        assert coverage.tagged_total == 0
        assert all(c.total == 0 for c in coverage.by_tactic.values())
        assert coverage.untagged.total == 0

    def test_untagged_counted_separately(self):
        corpus = [
            _mk(1, tactic=TacticId.IMPACT),
            _mk(2),
            _mk(3, origin=Origin.EXTENDED),
        ]
        coverage = tactic_coverage(corpus)
        assert coverage.tagged_total == 1
        assert coverage.untagged.reference == 1
        assert coverage.untagged.extended == 1
        assert coverage.tagged_total + coverage.untagged.total == len(corpus)
