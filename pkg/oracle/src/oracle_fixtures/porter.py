"""Porter stemmer, original 1980 rule set, table-driven.

Stands in for the stemmer used by the cited METEOR scorer (which is not
installable from the package mirror). Words are lowercased; characters
outside a-z count as consonants.
"""

from __future__ import annotations

import re


def _form(word: str) -> str:
    # C/V shape of the word; y is a vowel only after a consonant.
    shape = []
    for i, ch in enumerate(word):
        if ch in "aeiou" or (ch == "y" and i > 0 and shape[-1] == "C"):
            shape.append("V")
        else:
            shape.append("C")
    return "".join(shape)


def _measure(word: str) -> int:
    return len(re.findall("VC", re.sub(r"(.)\1+", r"\1", _form(word))))


def _has_vowel(word: str) -> bool:
    return "V" in _form(word)


def _double_consonant(word: str) -> bool:
    return len(word) >= 2 and word[-1] == word[-2] and _form(word)[-1] == "C"


def _cvc(word: str) -> bool:
    if len(word) < 3:
        return False
    return _form(word)[-3:] == "CVC" and word[-1] not in "wxy"


_RULES_2 = [
    ("ational", "ate"), ("tional", "tion"), ("enci", "ence"), ("anci", "ance"),
    ("izer", "ize"), ("abli", "able"), ("alli", "al"), ("entli", "ent"),
    ("eli", "e"), ("ousli", "ous"), ("ization", "ize"), ("ation", "ate"),
    ("ator", "ate"), ("alism", "al"), ("iveness", "ive"), ("fulness", "ful"),
    ("ousness", "ous"), ("aliti", "al"), ("iviti", "ive"), ("biliti", "ble"),
]

_RULES_3 = [
    ("icate", "ic"), ("ative", ""), ("alize", "al"), ("iciti", "ic"),
    ("ical", "ic"), ("ful", ""), ("ness", ""),
]

_RULES_4 = [
    "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement",
    "ment", "ent", "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize",
]


def porter_stem(word: str) -> str:
    word = word.lower()
    if len(word) <= 2:
        return word

    if word.endswith("sses") or word.endswith("ies"):
        word = word[:-2]
    elif word.endswith("s") and not word.endswith("ss"):
        word = word[:-1]

    if word.endswith("eed"):
        if _measure(word[:-3]) > 0:
            word = word[:-1]
    else:
        for suffix in ("ed", "ing"):
            if word.endswith(suffix) and _has_vowel(word[: -len(suffix)]):
                word = word[: -len(suffix)]
                if word.endswith(("at", "bl", "iz")):
                    word += "e"
                elif _double_consonant(word) and word[-1] not in "lsz":
                    word = word[:-1]
                elif _measure(word) == 1 and _cvc(word):
                    word += "e"
                break

    if word.endswith("y") and _has_vowel(word[:-1]):
        word = word[:-1] + "i"

    for suffix, repl in _RULES_2:
        if word.endswith(suffix):
            if _measure(word[: -len(suffix)]) > 0:
                word = word[: -len(suffix)] + repl
            break

    for suffix, repl in _RULES_3:
        if word.endswith(suffix):
            if _measure(word[: -len(suffix)]) > 0:
                word = word[: -len(suffix)] + repl
            break

    for suffix in _RULES_4:
        if word.endswith(suffix):
            stem = word[: -len(suffix)]
            if _measure(stem) > 1 and not (suffix == "ion" and stem[-1:] not in "st"):
                word = stem
            break

    if word.endswith("e"):
        stem = word[:-1]
        m = _measure(stem)
        if m > 1 or (m == 1 and not _cvc(stem)):
            word = stem

    if _measure(word) > 1 and _double_consonant(word) and word.endswith("l"):
        word = word[:-1]

    return word
