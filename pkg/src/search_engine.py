"""Exhaustive search of B_6 braid words for leakage-free entangling gates

Words are visited depth-first with a stack of float partial products, so each
visited word costs one 5x5 multiply. Words passing the float leakage filter
are confirmed in exact arithmetic, deduplicated up to global phase and
classified. Work is split into prefix shards run with joblib; each finished
shard is checkpointed so an interrupted run can resume.
"""
import logging
import time
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import joblib
import numpy as np
from joblib import Parallel, delayed
from pydantic import BaseModel, ConfigDict, Field, field_validator
from tqdm import tqdm

from src.braid import BraidWord, alphabet, can_follow, is_canonical, prefix_shards
from src.config import settings
from src.gate_analysis import GateReport, classify, is_leakage_free, phase_invariant_key
from src.monitoring import MetricsCollector
from src.representation import Backend, ExactMatrix, default_representation
from src.utils import format_timestamp, hash_value, serialize_record

logger = logging.getLogger(__name__)

STRANDS = 6


class BackendPolicy(str, Enum):
    FLOAT_FILTER = "float-filter-then-exact"
    EXACT_ONLY = "exact-only"


class SearchConfig(BaseModel):
    """Parameters of one exhaustive search run"""

    max_length: int = Field(default_factory=lambda: settings.search_max_length, ge=1)
    policy: BackendPolicy = Field(default_factory=lambda: BackendPolicy(settings.search_policy))
    shards: int = Field(default_factory=lambda: settings.search_shards, ge=1)
    prefix_depth: int = Field(default_factory=lambda: settings.search_prefix_depth, ge=1, le=2)
    normalize_commuting: bool = False
    output: Optional[str] = None
    checkpoint_dir: Optional[str] = None
    resume: bool = False
    leakage_tolerance: float = Field(default_factory=lambda: settings.leakage_tolerance, gt=0)

    @field_validator("policy", mode="before")
    @classmethod
    def parse_policy(cls, v):
        return BackendPolicy(v)

    def fingerprint(self) -> str:
        """Identifies the shard results this config produces"""
        text = (
            f"{self.max_length}|{self.policy.value}|{self.prefix_depth}|"
            f"{self.normalize_commuting}|{self.leakage_tolerance!r}"
        )
        return hash_value(text)[:16]


class SearchRecord(BaseModel):
    """One leakage-free gate, represented by its shortest word"""

    model_config = ConfigDict(populate_by_name=True)

    word: str
    length: int = Field(alias="len")
    leakage_free: bool
    entangling: Optional[bool]
    fixed_states: List[int] = []
    preserves_v: bool = False
    dedup_key: str

    @classmethod
    def from_report(cls, word: BraidWord, report: GateReport, key: str) -> "SearchRecord":
        return cls(
            word=str(word),
            length=len(word),
            leakage_free=report.leakage_free,
            entangling=report.entangling,
            fixed_states=report.fixed_states,
            preserves_v=report.preserves_v,
            dedup_key=key,
        )

    def to_json(self) -> Dict:
        return self.model_dump(by_alias=True)


@dataclass
class DFSStats:
    multiplies: int = 0


def dfs_evaluate(
    prefix: Sequence[int] = (),
    max_length: int = 1,
    normalize_commuting: bool = False,
    backend: Backend = Backend.FLOAT,
    stats: Optional[DFSStats] = None,
) -> Iterator[Tuple[Tuple[int, ...], object]]:
    """Yield (letters, matrix) for the prefix and every extension up to max_length

    Pre-order, lexicographic in the alphabet order. Each word's matrix is its
    parent's times one generator image.
    """
    prefix = tuple(prefix)
    if not is_canonical(prefix, normalize_commuting):
        raise ValueError(f"Prefix {prefix} is not a canonical reduced word")
    stats = stats if stats is not None else DFSStats()
    table = default_representation().letter_matrices(STRANDS, backend)
    letters = alphabet(STRANDS)
    if Backend(backend) is Backend.EXACT:
        start = ExactMatrix.identity(5)
    else:
        start = np.eye(5, dtype=complex)
    for letter in prefix:
        start = start @ table[letter]
        stats.multiplies += 1
    if len(prefix) > max_length:
        return

    def extend(word: Tuple[int, ...], matrix) -> Iterator[Tuple[Tuple[int, ...], object]]:
        yield word, matrix
        if len(word) == max_length:
            return
        previous = word[-1] if word else None
        for letter in letters:
            if can_follow(previous, letter, normalize_commuting):
                stats.multiplies += 1
                yield from extend(word + (letter,), matrix @ table[letter])

    yield from extend(prefix, start)


class _ExactPath:
    """Exact partial products along the current DFS path, extended on demand"""

    def __init__(self):
        self.table = default_representation().letter_matrices(STRANDS, Backend.EXACT)
        self.words: List[Tuple[int, ...]] = [()]
        self.matrices: List[ExactMatrix] = [ExactMatrix.identity(5)]
        self.multiplies = 0

    def matrix(self, word: Tuple[int, ...]) -> ExactMatrix:
        depth = 0
        while (
            depth + 1 < len(self.words)
            and depth < len(word)
            and self.words[depth + 1] == word[: depth + 1]
        ):
            depth += 1
        del self.words[depth + 1:]
        del self.matrices[depth + 1:]
        for i in range(depth, len(word)):
            self.matrices.append(self.matrices[-1] @ self.table[word[i]])
            self.words.append(word[: i + 1])
            self.multiplies += 1
        return self.matrices[-1]


@dataclass
class ShardResult:
    prefix: Tuple[int, ...]
    visited: Dict[int, int] = field(default_factory=dict)
    survivors: Dict[int, int] = field(default_factory=dict)
    leakage_free: Dict[int, int] = field(default_factory=dict)
    # dedup key -> (letters, report) of the smallest word seen for that gate
    gates: Dict[str, Tuple[Tuple[int, ...], GateReport]] = field(default_factory=dict)
    float_multiplies: int = 0
    exact_multiplies: int = 0
    inverse_mismatches: int = 0
    seconds: float = 0.0


def _sort_key(letters: Tuple[int, ...]) -> Tuple[int, Tuple[int, ...]]:
    return BraidWord(STRANDS, letters).sort_key()


def search_shard(
    prefix: Tuple[int, ...],
    max_length: int,
    normalize_commuting: bool,
    policy: BackendPolicy,
    leakage_tolerance: float,
) -> ShardResult:
    """Visit every word with the given prefix (the empty word excluded)"""
    start = time.perf_counter()
    result = ShardResult(prefix=prefix)
    visited: Dict[int, int] = defaultdict(int)
    survivors: Dict[int, int] = defaultdict(int)
    leakage_free: Dict[int, int] = defaultdict(int)
    gates = result.gates
    stats = DFSStats()
    exact_path = _ExactPath()
    backend = Backend.EXACT if policy is BackendPolicy.EXACT_ONLY else Backend.FLOAT

    for letters, matrix in dfs_evaluate(prefix, max_length, normalize_commuting, backend, stats):
        length = len(letters)
        if length == 0:
            continue
        visited[length] += 1
        if backend is Backend.FLOAT:
            if not is_leakage_free(matrix, leakage_tolerance):
                continue
            survivors[length] += 1
            exact = exact_path.matrix(letters)
        else:
            survivors[length] += 1
            exact = matrix
        if not is_leakage_free(exact):
            continue
        leakage_free[length] += 1
        key = phase_invariant_key(exact)
        best = gates.get(key)
        if best is None:
            gates[key] = (letters, classify(exact))
        elif _sort_key(letters) < _sort_key(best[0]):
            gates[key] = (letters, best[1])

    representation = default_representation()
    for letters, _ in gates.values():
        word = BraidWord(STRANDS, letters)
        inverse = representation.evaluate(word.inverse(), Backend.FLOAT)
        if not is_leakage_free(inverse, leakage_tolerance):
            result.inverse_mismatches += 1
            logger.warning(f"Inverse of leakage-free word '{word}' failed the leakage filter")

    result.visited = dict(visited)
    result.survivors = dict(survivors)
    result.leakage_free = dict(leakage_free)
    result.float_multiplies = stats.multiplies if backend is Backend.FLOAT else 0
    result.exact_multiplies = exact_path.multiplies + (
        stats.multiplies if backend is Backend.EXACT else 0
    )
    result.seconds = time.perf_counter() - start
    return result


@dataclass
class SearchOutcome:
    records: List[SearchRecord]
    summary: Dict


def shard_plan(cfg: SearchConfig) -> List[Tuple[Tuple[int, ...], int]]:
    """(prefix, max_length) pairs covering every word of length 1..max_length once"""
    depth = min(cfg.prefix_depth, cfg.max_length)
    plan = [(p, cfg.max_length) for p in prefix_shards(STRANDS, depth, cfg.normalize_commuting)]
    if depth > 1:
        # words shorter than the prefix depth
        plan.insert(0, ((), depth - 1))
    return plan


def _checkpoint_path(cfg: SearchConfig, prefix: Tuple[int, ...], max_length: int) -> Optional[Path]:
    if cfg.checkpoint_dir is None:
        return None
    name = "_".join(str(x) for x in prefix) or "head"
    return Path(cfg.checkpoint_dir) / f"shard_{cfg.fingerprint()}_{name}_{max_length}.joblib"


def _run_checkpointed(
    cfg: SearchConfig, prefix: Tuple[int, ...], max_length: int
) -> ShardResult:
    path = _checkpoint_path(cfg, prefix, max_length)
    if path is not None and cfg.resume and path.exists():
        logger.warning(f"Resuming shard {prefix} from {path}")
        return joblib.load(path)
    result = search_shard(
        prefix, max_length, cfg.normalize_commuting, cfg.policy, cfg.leakage_tolerance
    )
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        joblib.dump(result, path)
        logger.debug(f"Checkpointed shard {prefix} to {path}")
    return result


def merge_shards(results: Sequence[ShardResult]) -> Dict[str, Tuple[Tuple[int, ...], GateReport]]:
    """Union of per-shard gates, keeping the smallest word per dedup key"""
    gates: Dict[str, Tuple[Tuple[int, ...], GateReport]] = {}
    for result in results:
        for key, (letters, report) in result.gates.items():
            best = gates.get(key)
            if best is None or _sort_key(letters) < _sort_key(best[0]):
                gates[key] = (letters, report)
    return gates


def summarize(
    results: Sequence[ShardResult],
    gates: Dict[str, Tuple[Tuple[int, ...], GateReport]],
    max_length: int,
    elapsed: float,
) -> Dict:
    per_length = []
    totals = defaultdict(int)
    for length in range(1, max_length + 1):
        row = {
            "length": length,
            "visited": sum(r.visited.get(length, 0) for r in results),
            "filter_survivors": sum(r.survivors.get(length, 0) for r in results),
            "leakage_free_words": sum(r.leakage_free.get(length, 0) for r in results),
            "unique_gates": sum(1 for letters, _ in gates.values() if len(letters) == length),
            "entangling": sum(
                1 for letters, rep in gates.values() if len(letters) == length and rep.entangling
            ),
        }
        for name in ("visited", "filter_survivors", "leakage_free_words", "unique_gates", "entangling"):
            totals[name] += row[name]
            row[f"cumulative_{name}"] = totals[name]
        per_length.append(row)
    return {
        "max_length": max_length,
        "words_visited": totals["visited"],
        "filter_survivors": totals["filter_survivors"],
        "leakage_free_words": totals["leakage_free_words"],
        "unique_gates": totals["unique_gates"],
        "entangling": totals["entangling"],
        "float_multiplies": sum(r.float_multiplies for r in results),
        "exact_multiplies": sum(r.exact_multiplies for r in results),
        "inverse_closure_mismatches": sum(r.inverse_mismatches for r in results),
        "per_length": per_length,
        "elapsed_seconds": round(elapsed, 3),
        "finished_at": format_timestamp(),
    }


def run_search(cfg: SearchConfig, metrics: Optional[MetricsCollector] = None) -> SearchOutcome:
    """Visit every reduced word of length 1..max_length and collect leakage-free gates"""
    metrics = metrics or MetricsCollector()
    plan = shard_plan(cfg)
    logger.info(
        f"Searching B_6 words up to length {cfg.max_length}: {len(plan)} shards, "
        f"{cfg.shards} workers, policy {cfg.policy.value}"
    )
    start = time.perf_counter()
    tasks = (delayed(_run_checkpointed)(cfg, prefix, length) for prefix, length in plan)
    results: List[ShardResult] = []
    for result in tqdm(
        Parallel(n_jobs=cfg.shards, return_as="generator")(tasks),
        total=len(plan),
        desc="shards",
        disable=None,
    ):
        metrics.record_shard(
            result.visited,
            sum(result.survivors.values()),
            sum(result.leakage_free.values()),
            sum(1 for _, rep in result.gates.values() if rep.entangling),
            result.seconds,
        )
        logger.info(
            f"Shard {result.prefix} done: {sum(result.visited.values())} words, "
            f"{len(result.gates)} gates, {result.seconds:.2f}s"
        )
        results.append(result)

    gates = merge_shards(results)
    ordered = sorted(gates.items(), key=lambda item: _sort_key(item[1][0]))
    records = [
        SearchRecord.from_report(BraidWord(STRANDS, letters), report, key)
        for key, (letters, report) in ordered
    ]
    summary = summarize(results, gates, cfg.max_length, time.perf_counter() - start)
    if summary["inverse_closure_mismatches"]:
        logger.warning(f"{summary['inverse_closure_mismatches']} inverse-closure mismatches")
    logger.info(
        f"Search finished: {summary['words_visited']} words, {summary['unique_gates']} "
        f"leakage-free gates, {summary['entangling']} entangling"
    )
    outcome = SearchOutcome(records=records, summary=summary)
    if cfg.output:
        write_results(cfg.output, outcome)
    return outcome


def write_results(path: str, outcome: SearchOutcome) -> None:
    """JSON lines: one record per gate, then {"summary": ...}"""
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, "w") as f:
            for record in outcome.records:
                f.write(serialize_record(record.to_json()) + "\n")
            f.write(serialize_record({"summary": outcome.summary}) + "\n")
    except OSError as e:
        logger.error(f"Failed to write search results to {target}: {e}")
        raise
    logger.info(f"Wrote {len(outcome.records)} records to {target}")


def classify_word(word: BraidWord, backend: Backend = Backend.EXACT) -> GateReport:
    return classify(default_representation().evaluate(word, backend))
