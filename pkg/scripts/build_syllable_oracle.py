"""Freeze a syllable-count oracle sample for the test suite.

Takes the most frequent alphabetic English words (wordfreq) that have a CMU
pronouncing-dictionary entry and records the number of vowel nuclei (phones
carrying a stress digit) of the first listed pronunciation.

    pip install cmudict wordfreq
    python scripts/build_syllable_oracle.py tests/data/syllable_oracle.tsv
"""
import sys

import cmudict
import wordfreq


def main(out_path, n=1000):
    pron = cmudict.dict()
    rows = []
    for word in wordfreq.top_n_list("en", 5 * n):
        if not word.isalpha() or not word.isascii() or word not in pron:
            continue
        nuclei = sum(ph[-1].isdigit() for ph in pron[word][0])
        rows.append((word, nuclei))
        if len(rows) == n:
            break
    with open(out_path, "w", encoding="utf-8") as fh:
        for word, nuclei in rows:
            fh.write(f"{word}\t{nuclei}\n")
    print(f"wrote {len(rows)} words to {out_path}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data/syllable_oracle.tsv")
