"""Heuristic English syllable counter.

Counts vowel groups, treating ``y`` as a vowel only when it has no vowel
neighbour, then applies a handful of orthographic corrections.
"""
import re

_VOWELS = set("aeiou")
_STRIP = "'’-."

# groups that are usually two nuclei
_HIATUS = re.compile(r"(?:ia(?!n$|l)|iu|io(?!n|us)|ua|uo|eo(?!u|p)|ie(?=t|r$|st$)|oe(?!s)|ue(?=n|l|t))")
# ending clusters whose final e is silent
_SILENT_ES = re.compile(r"[^aeiouy]es$")
_VOICED_ES = re.compile(r"(?:s|x|z|ch|sh|ce|ge|se|ze)s$")
_SILENT_ED = re.compile(r"[^aeioutd]ed$")
# vowel + "ing" (being, going, trying) splits into two nuclei
_VOWEL_ING = re.compile(r"(?:[aeiou]|(?<![aeiou])y)ing$")
# silent e before a suffix or inside a compound (lately, management, something)
_INNER_SILENT_E = re.compile(r"[aeiou][^aeiouy]e(?:ly|ment|ness|ful|less|thing|one|times|where)$|^some(?=[^aeiouy])")


def _vowel_mask(word):
    mask = []
    for i, ch in enumerate(word):
        if ch in _VOWELS:
            mask.append(True)
        elif ch == "y":
            prev_v = i > 0 and word[i - 1] in _VOWELS
            next_v = i + 1 < len(word) and word[i + 1] in _VOWELS
            mask.append(not prev_v and not next_v and i > 0)
        else:
            mask.append(False)
    return mask


def count_syllables(word: str) -> int:
    w = word.lower().strip(_STRIP)
    if not w or not w.isalpha():
        raise ValueError(f"count_syllables needs an alphabetic word, got {word!r}")
    mask = _vowel_mask(w)
    groups = []
    i = 0
    while i < len(w):
        if mask[i]:
            j = i
            while j < len(w) and mask[j]:
                j += 1
            groups.append((i, w[i:j]))
            i = j
        else:
            i += 1
    count = len(groups)
    for start, g in groups:
        if len(g) > 1 and _HIATUS.search(w[start:start + len(g) + 3]):
            count += 1
    if _VOWEL_ING.search(w):
        count += 1
    if count > 1 and _INNER_SILENT_E.search(w):
        count -= 1
    if count > 1:
        if w.endswith("e") and not w.endswith(("le", "ee", "ie", "oe", "ye")) and not mask[-2]:
            count -= 1
        elif w.endswith("le") and len(w) > 2 and w[-3] in _VOWELS:
            count -= 1
        elif _SILENT_ES.search(w) and not _VOICED_ES.search(w):
            count -= 1
        elif _SILENT_ED.search(w):
            count -= 1
    return max(count, 1)
