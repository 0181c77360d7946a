"""Reference scorer implementations for cross-validating metric output.

The scorer packages the evaluation protocol names are not available from
the package mirror, so this module carries faithful reconstructions of
their algorithms, pinned in the fixture header:

* edit distance: character-level Levenshtein count (insert/delete/
  substitute at unit cost), normalized to similarity by max length;
* ROUGE-L: sentence-level LCS F-measure weighted with beta = 1.2;
* BLEU-4: smoothed sentence BLEU, clipped modified precisions, add-one
  smoothing on zero-count precisions, exp(1 - r/c) brevity penalty;
* METEOR: lowercasing aligner with exact and Porter-stem stages scanned
  from the end of the hypothesis (the synonym stage is disabled:
  dictionary data is unavailable offline), alpha 0.9, beta 3, gamma 0.5;
* exact match: whitespace-normalized string equality.
"""

from __future__ import annotations

import math

from oracle_fixtures.porter import porter_stem

SCORER_VERSIONS = {
    "edit_distance": "character-levenshtein/1 (vendored reconstruction)",
    "rouge_l": "lcs-weighted-f-beta-1.2/1 (vendored reconstruction)",
    "bleu4": "smoothed-sentence-bleu-4/1 (vendored reconstruction)",
    "meteor": "exact+porter-stem-aligner/1, synonym stage disabled "
              "(vendored reconstruction)",
    "exact_match": "whitespace-normalized-equality/1",
}


def reference_edit_distance(a: str, b: str) -> int:
    """Raw Levenshtein count over characters."""
    m, n = len(a), len(b)
    if m == 0:
        return n
    if n == 0:
        return m
    row = list(range(n + 1))
    for i in range(1, m + 1):
        diag, row[0] = row[0], i
        for j in range(1, n + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            diag, row[j] = row[j], min(diag + cost, row[j] + 1, row[j - 1] + 1)
    return row[n]


def reference_edit_similarity(reference: str, generated: str) -> float:
    longest = max(len(reference), len(generated))
    if longest == 0:
        return 1.0
    return 1.0 - reference_edit_distance(reference, generated) / longest


def _lcs_table(xs: list[str], ys: list[str]) -> int:
    table = [[0] * (len(ys) + 1) for _ in range(len(xs) + 1)]
    for i in range(1, len(xs) + 1):
        for j in range(1, len(ys) + 1):
            if xs[i - 1] == ys[j - 1]:
                table[i][j] = table[i - 1][j - 1] + 1
            else:
                table[i][j] = max(table[i - 1][j], table[i][j - 1])
    return table[len(xs)][len(ys)]


def reference_rouge_l(reference: str, generated: str, beta: float = 1.2) -> float:
    ref_tokens = reference.split()
    gen_tokens = generated.split()
    if not ref_tokens or not gen_tokens:
        return 0.0
    lcs = _lcs_table(ref_tokens, gen_tokens)
    if lcs == 0:
        return 0.0
    prec = lcs / len(gen_tokens)
    rec = lcs / len(ref_tokens)
    return ((1 + beta**2) * prec * rec) / (rec + beta**2 * prec)


def _ngram_table(tokens: list[str], n: int) -> dict[str, int]:
    table: dict[str, int] = {}
    for i in range(len(tokens) - n + 1):
        key = " ".join(tokens[i : i + n])
        table[key] = table.get(key, 0) + 1
    return table


def reference_bleu4(reference: str, generated: str, max_n: int = 4) -> float:
    ref_tokens = reference.split()
    gen_tokens = generated.split()
    if not gen_tokens:
        return 0.0
    log_sum = 0.0
    unigram_hits = 0
    for n in range(1, max_n + 1):
        ref_table = _ngram_table(ref_tokens, n)
        gen_table = _ngram_table(gen_tokens, n)
        correct = sum(min(count, ref_table.get(gram, 0)) for gram, count in gen_table.items())
        guess = max(len(gen_tokens) - n + 1, 0)
        if n == 1:
            unigram_hits = correct
        p = correct / guess if correct > 0 else (correct + 1) / (guess + 1)
        log_sum += math.log(p)
    if unigram_hits == 0:
        return 0.0
    score = math.exp(log_sum / max_n)
    c, r = len(gen_tokens), len(ref_tokens)
    if c < r:
        score *= math.exp(1 - r / c)
    return min(score, 1.0)


def _match_stage(enum_hyp: list, enum_ref: list, key) -> list[tuple[int, int]]:
    # Scan the hypothesis from the end, pairing each token with the last
    # still-free reference token of equal key.
    found = []
    for i in range(len(enum_hyp))[::-1]:
        for j in range(len(enum_ref))[::-1]:
            if key(enum_hyp[i][1]) == key(enum_ref[j][1]):
                found.append((enum_hyp[i][0], enum_ref[j][0]))
                enum_hyp.pop(i)
                enum_ref.pop(j)
                break
    return found


def reference_meteor(
    reference: str,
    generated: str,
    alpha: float = 0.9,
    beta: float = 3.0,
    gamma: float = 0.5,
) -> float:
    hyp = generated.lower().split()
    ref = reference.lower().split()
    if not hyp or not ref:
        return 0.0
    enum_hyp = list(enumerate(hyp))
    enum_ref = list(enumerate(ref))
    matches = _match_stage(enum_hyp, enum_ref, lambda w: w)
    matches += _match_stage(enum_hyp, enum_ref, porter_stem)
    matches.sort(key=lambda pair: pair[0])
    m = len(matches)
    if m == 0:
        return 0.0
    precision = m / len(hyp)
    recall = m / len(ref)
    fmean = precision * recall / (alpha * precision + (1 - alpha) * recall)
    chunks = 1
    for (h0, r0), (h1, r1) in zip(matches, matches[1:]):
        if not (h1 == h0 + 1 and r1 == r0 + 1):
            chunks += 1
    penalty = gamma * (chunks / m) ** beta
    return (1 - penalty) * fmean


def reference_exact_match(reference: str, generated: str) -> int:
    canon = lambda s: " ".join(part for part in s.replace("\t", " ").split(" ") if part)  # noqa: E731
    return int(canon(reference.strip()) == canon(generated.strip()))


def reference_scores(reference: str, generated: str) -> dict[str, float]:
    """All five reference scores, keyed like the score wire format."""
    return {
        "ed": reference_edit_similarity(reference, generated),
        "meteor": reference_meteor(reference, generated),
        "rouge_l": reference_rouge_l(reference, generated),
        "bleu4": reference_bleu4(reference, generated),
        "exact_match": float(reference_exact_match(reference, generated)),
    }
