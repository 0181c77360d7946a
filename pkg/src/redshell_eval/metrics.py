"""Output-similarity metrics for (reference, generated) snippet pairs.

Five metrics, every formula parameter pinned:

* ``edit_distance_norm``: 1 - lev/max(len), character-level Levenshtein
  with unit-cost insert/delete/substitute.
* ``rouge_l``: LCS over whitespace tokens, weighted F with beta = 1.2:
  (1 + b^2) * P * R / (R + b^2 * P).
* ``bleu4``: modified n-gram precisions up to n = 4 with reference-count
  clipping; a zero-count precision is smoothed to (m+1)/(t+1); zero
  unigram overlap scores 0; brevity penalty exp(1 - r/c) when c < r.
* ``meteor``: greedy unigram alignment in stages (exact, then Porter
  stem on the unaligned remainder); Fmean = P*R/(a*P + (1-a)*R) with
  a = 0.9; fragmentation penalty 0.5 * (chunks/matches)^3.
* ``exact_match``: equality after trimming and collapsing runs of
  spaces/tabs.

All token metrics split on whitespace; edit distance works on
characters. Every score lies in [0, 1].
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

from redshell_eval.exceptions import ValidationError
from redshell_eval.porter import stem


class BleuSmoothing(Enum):
    ADD_ONE_ON_ZERO = "add_one_on_zero"


class Tokenization(Enum):
    WHITESPACE = "whitespace"


class MeteorStage(Enum):
    EXACT = "exact"
    STEM = "stem"


@dataclass(frozen=True)
class MetricConfig:
    bleu_max_n: int = 4
    bleu_smoothing: BleuSmoothing = BleuSmoothing.ADD_ONE_ON_ZERO
    rouge_beta: float = 1.2
    meteor_alpha: float = 0.9
    meteor_beta: float = 3.0
    meteor_gamma: float = 0.5
    meteor_stages: tuple[MeteorStage, ...] = (MeteorStage.EXACT, MeteorStage.STEM)
    tokenization: Tokenization = Tokenization.WHITESPACE

    def __post_init__(self):
        if self.bleu_max_n < 1:
            raise ValidationError("bleu_max_n must be >= 1")
        for name in ("rouge_beta", "meteor_alpha", "meteor_beta", "meteor_gamma"):
            if getattr(self, name) <= 0:
                raise ValidationError(f"{name} must be strictly positive")
        if not self.meteor_stages:
            raise ValidationError("at least one meteor stage is required")

    def to_json_obj(self) -> dict:
        return {
            "bleu_max_n": self.bleu_max_n,
            "bleu_smoothing": self.bleu_smoothing.value,
            "rouge_beta": self.rouge_beta,
            "meteor_alpha": self.meteor_alpha,
            "meteor_beta": self.meteor_beta,
            "meteor_gamma": self.meteor_gamma,
            "meteor_stages": [s.value for s in self.meteor_stages],
            "tokenization": self.tokenization.value,
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "MetricConfig":
        return cls(
            bleu_max_n=obj.get("bleu_max_n", 4),
            bleu_smoothing=BleuSmoothing(obj.get("bleu_smoothing", "add_one_on_zero")),
            rouge_beta=obj.get("rouge_beta", 1.2),
            meteor_alpha=obj.get("meteor_alpha", 0.9),
            meteor_beta=obj.get("meteor_beta", 3.0),
            meteor_gamma=obj.get("meteor_gamma", 0.5),
            meteor_stages=tuple(
                MeteorStage(s) for s in obj.get("meteor_stages", ["exact", "stem"])
            ),
            tokenization=Tokenization(obj.get("tokenization", "whitespace")),
        )


@dataclass(frozen=True)
class MetricScores:
    edit_distance: float
    meteor: float
    rouge_l: float
    bleu4: float
    exact_match: float

    def __post_init__(self):
        for name in ("edit_distance", "meteor", "rouge_l", "bleu4", "exact_match"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValidationError(f"{name}={value} outside [0, 1]")

    def to_json_obj(self, ndigits: int | None = 6) -> dict:
        def out(value: float) -> float:
            return value if ndigits is None else round(value, ndigits)

        return {
            "ed": out(self.edit_distance),
            "meteor": out(self.meteor),
            "rouge_l": out(self.rouge_l),
            "bleu4": out(self.bleu4),
            "exact_match": out(self.exact_match),
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "MetricScores":
        return cls(
            edit_distance=obj["ed"],
            meteor=obj["meteor"],
            rouge_l=obj["rouge_l"],
            bleu4=obj["bleu4"],
            exact_match=obj["exact_match"],
        )


def levenshtein(a: str, b: str) -> int:
    """Character-level edit distance with unit-cost operations."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            current.append(min(previous[j - 1] + cost, previous[j] + 1, current[j - 1] + 1))
        previous = current
    return previous[-1]


def edit_distance_norm(reference: str, generated: str) -> float:
    """1 - lev/max(len); both empty scores 1.0."""
    longest = max(len(reference), len(generated))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein(reference, generated) / longest


def _lcs_len(a: list[str], b: list[str]) -> int:
    if not a or not b:
        return 0
    previous = [0] * (len(b) + 1)
    for ta in a:
        current = [0]
        for j, tb in enumerate(b, start=1):
            if ta == tb:
                current.append(previous[j - 1] + 1)
            else:
                current.append(max(previous[j], current[j - 1]))
        previous = current
    return previous[-1]


def rouge_l(reference: str, generated: str, beta: float = 1.2) -> float:
    """LCS-based weighted F over whitespace tokens."""
    ref = reference.split()
    gen = generated.split()
    if not ref or not gen:
        return 0.0
    lcs = _lcs_len(ref, gen)
    if lcs == 0:
        return 0.0
    precision = lcs / len(gen)
    recall = lcs / len(ref)
    b2 = beta * beta
    return (1 + b2) * precision * recall / (recall + b2 * precision)


def _ngram_counts(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu4(reference: str, generated: str, max_n: int = 4) -> float:
    """Sentence-level smoothed BLEU with uniform weights up to max_n."""
    ref = reference.split()
    gen = generated.split()
    if not gen:
        return 0.0
    # No unigram overlap at all scores 0 (smoothing never applies to a
    # completely disjoint pair).
    gen_counts = _ngram_counts(gen, 1)
    ref_counts = _ngram_counts(ref, 1)
    if not sum((gen_counts & ref_counts).values()):
        return 0.0
    log_sum = 0.0
    for n in range(1, max_n + 1):
        gen_n = _ngram_counts(gen, n)
        ref_n = _ngram_counts(ref, n)
        matched = sum((gen_n & ref_n).values())
        total = max(len(gen) - n + 1, 0)
        if matched == 0:
            p = (matched + 1) / (total + 1)
        else:
            p = matched / total
        log_sum += math.log(p)
    score = math.exp(log_sum / max_n)
    c, r = len(gen), len(ref)
    if c < r:
        score *= math.exp(1 - r / c)
    return min(score, 1.0)


def _align(
    ref: list[str], gen: list[str], stages: tuple[MeteorStage, ...]
) -> list[tuple[int, int]]:
    # Greedy left-to-right alignment, one stage at a time over the
    # still-unaligned remainder.
    keyers = {MeteorStage.EXACT: lambda t: t, MeteorStage.STEM: stem}
    gen_match: dict[int, int] = {}
    ref_taken = [False] * len(ref)
    for stage in stages:
        key = keyers[stage]
        ref_keys = [key(t) for t in ref]
        for gi, token in enumerate(gen):
            if gi in gen_match:
                continue
            wanted = key(token)
            for ri in range(len(ref)):
                if not ref_taken[ri] and ref_keys[ri] == wanted:
                    gen_match[gi] = ri
                    ref_taken[ri] = True
                    break
    return sorted(gen_match.items())


def _count_chunks(pairs: list[tuple[int, int]]) -> int:
    chunks = 0
    prev = None
    for gi, ri in pairs:
        if prev is None or gi != prev[0] + 1 or ri != prev[1] + 1:
            chunks += 1
        prev = (gi, ri)
    return chunks


def meteor(
    reference: str,
    generated: str,
    alpha: float = 0.9,
    beta: float = 3.0,
    gamma: float = 0.5,
    stages: tuple[MeteorStage, ...] = (MeteorStage.EXACT, MeteorStage.STEM),
) -> float:
    """Unigram-alignment score with fragmentation penalty."""
    ref = reference.split()
    gen = generated.split()
    if not ref or not gen:
        return 0.0
    pairs = _align(ref, gen, stages)
    matches = len(pairs)
    if matches == 0:
        return 0.0
    precision = matches / len(gen)
    recall = matches / len(ref)
    fmean = precision * recall / (alpha * precision + (1 - alpha) * recall)
    penalty = gamma * (_count_chunks(pairs) / matches) ** beta
    return fmean * (1 - penalty)


_WS_RUN = re.compile(r"[ \t]+")


def normalize_whitespace(text: str) -> str:
    """Trim and collapse internal runs of spaces/tabs to one space."""
    return _WS_RUN.sub(" ", text.strip())


def exact_match(reference: str, generated: str) -> int:
    """1 iff the two strings agree after whitespace normalization."""
    return int(normalize_whitespace(reference) == normalize_whitespace(generated))


def score_pair(reference: str, generated: str, config: MetricConfig | None = None) -> MetricScores:
    """Compute all five metrics for one pair under a shared configuration."""
    if config is None:
        config = MetricConfig()
    return MetricScores(
        edit_distance=edit_distance_norm(reference, generated),
        meteor=meteor(
            reference,
            generated,
            alpha=config.meteor_alpha,
            beta=config.meteor_beta,
            gamma=config.meteor_gamma,
            stages=config.meteor_stages,
        ),
        rouge_l=rouge_l(reference, generated, beta=config.rouge_beta),
        bleu4=bleu4(reference, generated, max_n=config.bleu_max_n),
        exact_match=float(exact_match(reference, generated)),
    )


def aggregate(scores: list[MetricScores]) -> MetricScores:
    """Arithmetic mean per field; order-invariant."""
    if not scores:
        raise ValidationError("cannot aggregate an empty score list")
    n = len(scores)
    return MetricScores(
        edit_distance=math.fsum(s.edit_distance for s in scores) / n,
        meteor=math.fsum(s.meteor for s in scores) / n,
        rouge_l=math.fsum(s.rouge_l for s in scores) / n,
        bleu4=math.fsum(s.bleu4 for s in scores) / n,
        exact_match=math.fsum(s.exact_match for s in scores) / n,
    )
