"""Tokenizer and the default lexicon/suffix part-of-speech tagger.

Contractions follow the table in ``lexicon.CONTRACTIONS``: the clitic is split
off as its own token ("don't" -> "do" "n't", "she's" -> "she" "'s").
Punctuation characters are single tokens.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Protocol, Sequence

from .lexicon import ADJECTIVES, ADVERBS, CONTRACTIONS, FUNCTION_WORDS, NOUNS, SUFFIX_RULES, VERBS


class POS(str, Enum):
    NOUN = "noun"
    VERB = "verb"
    ADJECTIVE = "adjective"
    ADVERB = "adverb"
    OTHER = "other"


CONTENT_POS = frozenset({POS.NOUN, POS.VERB, POS.ADJECTIVE, POS.ADVERB})


@dataclass(frozen=True)
class Token:
    surface: str
    pos: POS = POS.OTHER

    def __post_init__(self):
        if not self.surface:
            raise ValueError("token surface must be nonempty")
        object.__setattr__(self, "pos", POS(self.pos))

    @property
    def is_content(self) -> bool:
        return self.pos in CONTENT_POS


class Tagger(Protocol):
    def tag(self, words: Sequence[str]) -> list[POS]: ...


class LexiconTagger:
    """Closed-class lexicon, small open-class lexicon, then suffix rules.

    Alphabetic words that match nothing default to noun.
    """

    def tag(self, words):
        return [self.tag_word(w) for w in words]

    def tag_word(self, word: str) -> POS:
        w = word.lower()
        if not any(ch.isalpha() for ch in w) or w in FUNCTION_WORDS:
            return POS.OTHER
        for lexicon, pos in ((NOUNS, POS.NOUN), (VERBS, POS.VERB),
                             (ADJECTIVES, POS.ADJECTIVE), (ADVERBS, POS.ADVERB)):
            if w in lexicon:
                return pos
        if w.startswith("'"):
            return POS.OTHER
        for suffix, pos in SUFFIX_RULES:
            if w.endswith(suffix) and len(w) > len(suffix) + 2:
                return POS(pos)
        return POS.NOUN


DEFAULT_TAGGER = LexiconTagger()

_TOKEN_RE = re.compile(
    r"\d+(?:[.,]\d+)*"                      # numbers
    r"|[^\W\d_]+(?:['’-][^\W\d_]+)*"        # words, with inner hyphens/apostrophes
    r"|'[^\W\d_]+"                          # leading clitics ('s, 're)
    r"|[^\w\s]"                             # any other single symbol
)


def _split_contraction(word):
    low = word.lower().replace("’", "'")
    for suffix, cut in CONTRACTIONS:
        if low.endswith(suffix) and len(word) > cut:
            return [word[:-cut], word[-cut:]]
    return [word]


def split_words(text: str) -> list[str]:
    words = []
    for m in _TOKEN_RE.finditer(text):
        piece = m.group()
        if "'" in piece or "’" in piece:
            words.extend(_split_contraction(piece))
        else:
            words.append(piece)
    return words


def tokenize(text: str, tagger: Tagger | None = None) -> list[Token]:
    words = split_words(text)
    tags = (tagger or DEFAULT_TAGGER).tag(words)
    return [Token(w, p) for w, p in zip(words, tags)]
