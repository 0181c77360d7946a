"""Ground-truth corpus handling: load, validate, split, and summarize.

A corpus is a JSON Lines file of (description, snippet) pairs tagged with
an optional MITRE ATT&CK tactic and a provenance origin. All operations
are pure over immutable sample lists.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from redshell_eval.exceptions import CorpusFormatError, ValidationError


class TacticId(Enum):
    """The 14 MITRE ATT&CK enterprise tactics."""

    RECONNAISSANCE = "Reconnaissance"
    RESOURCE_DEVELOPMENT = "Resource Development"
    INITIAL_ACCESS = "Initial Access"
    EXECUTION = "Execution"
    PERSISTENCE = "Persistence"
    PRIVILEGE_ESCALATION = "Privilege Escalation"
    DEFENSE_EVASION = "Defense Evasion"
    CREDENTIAL_ACCESS = "Credential Access"
    DISCOVERY = "Discovery"
    LATERAL_MOVEMENT = "Lateral Movement"
    COLLECTION = "Collection"
    COMMAND_AND_CONTROL = "Command and Control"
    EXFILTRATION = "Exfiltration"
    IMPACT = "Impact"


class Origin(Enum):
    REFERENCE = "reference"
    EXTENDED = "extended"


class Partition(Enum):
    TRAIN = "train"
    TEST = "test"


@dataclass(frozen=True)
class CorpusSample:
    """One description/snippet pair with tactic and provenance metadata."""

    id: str
    description: str
    snippet: str
    tactic: TacticId | None = None
    origin: Origin = Origin.REFERENCE
    source: str | None = None

    def to_json_obj(self) -> dict:
        obj: dict = {
            "id": self.id,
            "description": self.description,
            "snippet": self.snippet,
            "origin": self.origin.value,
        }
        if self.tactic is not None:
            obj["tactic"] = self.tactic.value
        if self.source is not None:
            obj["source"] = self.source
        return obj


@dataclass(frozen=True)
class SplitAssignment:
    sample_id: str
    partition: Partition


@dataclass(frozen=True)
class TacticCount:
    reference: int
    extended: int

    @property
    def total(self) -> int:
        return self.reference + self.extended


@dataclass(frozen=True)
class TacticCoverage:
    """Per-tactic sample counts broken down by origin, plus untagged totals."""

    by_tactic: dict[TacticId, TacticCount]
    untagged: TacticCount

    @property
    def tagged_total(self) -> int:
        return sum(c.total for c in self.by_tactic.values())


def _parse_record(obj: dict, line_no: int) -> CorpusSample:
    if not isinstance(obj, dict):
        raise CorpusFormatError("record is not a JSON object", line_no)
    for key in ("description", "snippet"):
        value = obj.get(key)
        if not isinstance(value, str) or not value.strip():
            raise CorpusFormatError(f"missing or empty '{key}'", line_no)
    sample_id = obj.get("id")
    if sample_id is None:
        sample_id = f"line-{line_no}"
    elif not isinstance(sample_id, str) or not sample_id.strip():
        raise CorpusFormatError("'id' must be a non-empty string", line_no)

    tactic = None
    if "tactic" in obj and obj["tactic"] is not None:
        try:
            tactic = TacticId(obj["tactic"])
        except ValueError:
            raise CorpusFormatError(f"unknown tactic {obj['tactic']!r}", line_no) from None

    origin_raw = obj.get("origin", "reference")
    try:
        origin = Origin(origin_raw)
    except ValueError:
        raise CorpusFormatError(f"unknown origin {origin_raw!r}", line_no) from None

    source = obj.get("source")
    if source is not None and not isinstance(source, str):
        raise CorpusFormatError("'source' must be a string", line_no)

    return CorpusSample(
        id=sample_id,
        description=obj["description"],
        snippet=obj["snippet"],
        tactic=tactic,
        origin=origin,
        source=source,
    )


def load_corpus(path: str | Path) -> list[CorpusSample]:
    """Load a JSONL corpus, preserving file order.

    Records without an ``id`` get a line-number based one. Raises
    CorpusFormatError naming the offending line for malformed records,
    empty fields, or duplicate ids.
    """
    samples: list[CorpusSample] = []
    seen_ids: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(f"invalid JSON ({exc.msg})", line_no) from None
            sample = _parse_record(obj, line_no)
            if sample.id in seen_ids:
                raise CorpusFormatError(f"duplicate id {sample.id!r}", line_no)
            seen_ids.add(sample.id)
            samples.append(sample)
    return samples


def save_corpus(samples: list[CorpusSample], path: str | Path) -> None:
    """Write samples as JSONL. load(save(load(p))) is a fixed point."""
    with open(path, "w", encoding="utf-8") as fh:
        for sample in samples:
            fh.write(json.dumps(sample.to_json_obj(), ensure_ascii=False) + "\n")


def _shuffle_key(seed: int, sample_id: str) -> str:
    # Keyed hash gives a platform-independent pseudo-random permutation.
    return hashlib.sha256(f"{seed}:{sample_id}".encode("utf-8")).hexdigest()


def split_corpus(
    corpus: list[CorpusSample], train_fraction: float, seed: int
) -> tuple[list[CorpusSample], list[CorpusSample]]:
    """Partition a corpus into train/test with |train| = floor(fraction * N).

    The shuffle is a deterministic function of (sample ids, fraction, seed):
    ids are sorted lexicographically, then ordered by a seeded hash, so the
    same inputs produce the same partitions on any platform or load order.
    """
    if not corpus:
        raise ValidationError("cannot split an empty corpus")
    if not 0.0 < train_fraction < 1.0:
        raise ValidationError(f"train_fraction must be in (0, 1), got {train_fraction}")

    by_id = {sample.id: sample for sample in corpus}
    ordered_ids = sorted(by_id)
    permuted = sorted(ordered_ids, key=lambda sid: _shuffle_key(seed, sid))
    n_train = math.floor(train_fraction * len(corpus))
    train_ids = set(permuted[:n_train])

    train = [s for s in corpus if s.id in train_ids]
    test = [s for s in corpus if s.id not in train_ids]
    return train, test


def assignments_for(
    train: list[CorpusSample], test: list[CorpusSample]
) -> list[SplitAssignment]:
    return [SplitAssignment(s.id, Partition.TRAIN) for s in train] + [
        SplitAssignment(s.id, Partition.TEST) for s in test
    ]


def save_assignments(assignments: list[SplitAssignment], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for a in assignments:
            fh.write(json.dumps({"sample_id": a.sample_id, "partition": a.partition.value}) + "\n")


def tactic_coverage(corpus: list[CorpusSample]) -> TacticCoverage:
    """Count samples per tactic, split by origin; untagged counted apart."""
    ref: dict[TacticId, int] = {t: 0 for t in TacticId}
    ext: dict[TacticId, int] = {t: 0 for t in TacticId}
    untagged_ref = untagged_ext = 0
    for sample in corpus:
        if sample.tactic is None:
            if sample.origin is Origin.REFERENCE:
                untagged_ref += 1
            else:
                untagged_ext += 1
        elif sample.origin is Origin.REFERENCE:
            ref[sample.tactic] += 1
        else:
            ext[sample.tactic] += 1
    return TacticCoverage(
        by_tactic={t: TacticCount(ref[t], ext[t]) for t in TacticId},
        untagged=TacticCount(untagged_ref, untagged_ext),
    )
