import json
from unittest.mock import patch

import numpy as np
import pytest
from pydantic import ValidationError

from src.braid import BraidWord, enumerate_words, named_braid
from src.gate_analysis import GateReport, is_leakage_free, phase_invariant_key
from src.representation import Backend, evaluate
from src.search_engine import (
    BackendPolicy,
    DFSStats,
    SearchConfig,
    SearchRecord,
    ShardResult,
    classify_word,
    dfs_evaluate,
    merge_shards,
    run_search,
    search_shard,
    shard_plan,
)


def small_config(**overrides) -> SearchConfig:
    options = dict(max_length=2, shards=1, prefix_depth=1)
    options.update(overrides)
    return SearchConfig(**options)


class TestSearchConfig:
    def test_validation(self):
        with pytest.raises(ValidationError):
            SearchConfig(max_length=0)
        with pytest.raises(ValidationError):
            SearchConfig(prefix_depth=3)
        with pytest.raises(ValidationError):
            SearchConfig(policy="bogus")

    def test_policy_from_string(self):
        assert SearchConfig(policy="exact-only").policy is BackendPolicy.EXACT_ONLY

    def test_fingerprint_tracks_results(self):
        assert small_config().fingerprint() == small_config(shards=4).fingerprint()
        assert small_config().fingerprint() != small_config(max_length=3).fingerprint()


class TestDFS:
    def test_one_multiply_per_word(self):
        stats = DFSStats()
        words = list(dfs_evaluate((), 2, stats=stats))
        assert len(words) == 101
        assert stats.multiplies == 100
        assert words[0][0] == ()
        assert words[1][0] == (1,)
        assert words[2][0] == (1, 1)

    def test_matrices_match_evaluate(self):
        for letters, matrix in dfs_evaluate((2,), 2):
            expected = evaluate(BraidWord(6, letters), Backend.FLOAT)
            assert np.max(np.abs(matrix - expected)) < 1e-12

    def test_exact_backend(self):
        for letters, matrix in dfs_evaluate((1, -2), 3, backend=Backend.EXACT):
            assert matrix == evaluate(BraidWord(6, letters))

    def test_non_canonical_prefix(self):
        with pytest.raises(ValueError):
            list(dfs_evaluate((1, -1), 3))


class TestShards:
    def test_plan_depth_two(self):
        plan = shard_plan(small_config(prefix_depth=2))
        assert plan[0] == ((), 1)
        assert len(plan) == 91

    def test_single_shard(self):
        result = search_shard((3,), 2, False, BackendPolicy.FLOAT_FILTER, 1e-9)
        assert result.visited == {1: 1, 2: 9}
        assert result.leakage_free.get(1, 0) == 0
        assert result.float_multiplies == 10

    def test_merge_keeps_shortest_word(self):
        report = GateReport(leakage_free=False)
        a = ShardResult(prefix=(2,), gates={"k": ((2, 1), report)})
        b = ShardResult(prefix=(1,), gates={"k": ((1, 2), report), "j": ((4,), report)})
        merged = merge_shards([a, b])
        assert merged["k"][0] == (1, 2)
        assert merged["j"][0] == (4,)


class TestRunSearch:
    def test_counts_to_length_two(self):
        outcome = run_search(small_config())
        summary = outcome.summary
        rows = {row["length"]: row for row in summary["per_length"]}
        assert rows[1]["visited"] == 10
        assert rows[2]["visited"] == 90
        assert rows[2]["cumulative_visited"] == 100
        assert rows[1]["leakage_free_words"] == 8
        assert rows[2]["leakage_free_words"] == 56
        assert rows[1]["unique_gates"] == 8
        assert summary["float_multiplies"] == 100
        assert summary["inverse_closure_mismatches"] == 0
        assert all(r.leakage_free for r in outcome.records)
        assert outcome.records[0].word == "1"

    def test_policies_agree(self):
        filtered = run_search(small_config())
        exact = run_search(small_config(policy=BackendPolicy.EXACT_ONLY))
        assert [r.dedup_key for r in filtered.records] == [r.dedup_key for r in exact.records]
        assert exact.summary["float_multiplies"] == 0

    def test_prefix_depth_does_not_change_results(self):
        one = run_search(small_config())
        two = run_search(small_config(prefix_depth=2))
        assert [r.word for r in one.records] == [r.word for r in two.records]
        assert one.summary["words_visited"] == two.summary["words_visited"]

    def test_normalize_commuting(self):
        plain = run_search(small_config())
        normalized = run_search(small_config(normalize_commuting=True))
        rows = {row["length"]: row for row in normalized.summary["per_length"]}
        assert rows[2]["visited"] == 66
        assert [r.word for r in plain.records] == [r.word for r in normalized.records]

    def test_write_results(self, tmp_path):
        out = tmp_path / "results" / "search.jsonl"
        run_search(small_config(max_length=1, output=str(out)))
        lines = [json.loads(line) for line in out.read_text().splitlines()]
        assert "summary" in lines[-1]
        assert len(lines) == 9
        assert lines[0]["len"] == 1
        assert lines[0]["word"] == "1"
        assert SearchRecord(**lines[0]).length == 1

    def test_resume_from_checkpoints(self, tmp_path):
        cfg = small_config(checkpoint_dir=str(tmp_path))
        first = run_search(cfg)
        assert len(list(tmp_path.glob("shard_*.joblib"))) == 10

        resumed_cfg = small_config(checkpoint_dir=str(tmp_path), resume=True)
        with patch("src.search_engine.search_shard", side_effect=AssertionError("recomputed")):
            resumed = run_search(resumed_cfg)
        assert [r.word for r in resumed.records] == [r.word for r in first.records]

    def test_checkpoints_ignored_without_resume(self, tmp_path):
        cfg = small_config(max_length=1, checkpoint_dir=str(tmp_path))
        run_search(cfg)
        with patch("src.search_engine.search_shard", wraps=search_shard) as spy:
            run_search(cfg)
        assert spy.call_count == 10


def test_classify_word():
    assert classify_word(BraidWord(6, (1,))).leakage_free
    assert not classify_word(BraidWord(6, (3,))).leakage_free


@pytest.mark.slow
def test_no_leakage_free_entanglers_to_length_five():
    outcome = run_search(SearchConfig(max_length=5, shards=2))
    assert outcome.summary["words_visited"] == 73_810
    assert outcome.summary["entangling"] == 0
    assert outcome.summary["inverse_closure_mismatches"] == 0
    assert all(r.entangling is False for r in outcome.records)


class TestFilterAndDedup:
    def test_float_filter_keeps_leakage_free_words(self):
        rng = np.random.default_rng(11)
        letters = [1, 2, 4, 5, -1, -2, -4, -5]
        words = [named_braid("Sigma")]
        for _ in range(300):
            length = int(rng.integers(1, 8))
            words.append(BraidWord(6, tuple(int(x) for x in rng.choice(letters, size=length))))
        for w in words:
            assert is_leakage_free(evaluate(w, Backend.FLOAT), 1e-9), str(w)
            assert is_leakage_free(evaluate(w)), str(w)

    def test_commuting_letters_share_key(self):
        assert phase_invariant_key(evaluate(BraidWord(6, (1, 4)))) == phase_invariant_key(
            evaluate(BraidWord(6, (4, 1)))
        )

    def test_keys_separate_gates_to_length_three(self):
        groups = {}
        for length in range(1, 4):
            for w in enumerate_words(6, length):
                exact = evaluate(w)
                groups.setdefault(phase_invariant_key(exact), []).append(exact.to_numpy())

        # same key: equal up to a global phase
        for members in groups.values():
            first = members[0]
            for other in members[1:]:
                overlap = np.trace(first.conj().T @ other)
                assert abs(overlap) == pytest.approx(5.0, abs=1e-9)
                phase = overlap / abs(overlap)
                assert np.allclose(other, phase * first, atol=1e-12)

        # different keys: never equal up to a phase
        reps = np.array([members[0].reshape(-1) for members in groups.values()])
        overlaps = np.abs(reps.conj() @ reps.T)
        np.fill_diagonal(overlaps, 0.0)
        assert overlaps.max() < 5.0 - 1e-6
