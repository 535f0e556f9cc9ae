"""Lexicon-and-rules Penn Treebank POS tagger.

Deliberately small: a closed-class function-word list, an open-class
lexicon of frequent words with their majority tag, four suffix rules and
an imperative rule for sentence-initial verbs.  Comment texts are short
and verb-initial so often that this covers the signal the classifiers
actually use.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

from .tokenizer import has_symbol

# 36 Penn Treebank word tags
PTB_TAGS = (
    "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS", "MD",
    "NN", "NNS", "NNP", "NNPS", "PDT", "POS", "PRP", "PRP$", "RB", "RBR",
    "RBS", "RP", "SYM", "TO", "UH", "VB", "VBD", "VBG", "VBN", "VBP",
    "VBZ", "WDT", "WP", "WP$", "WRB",
)
PUNCT_TAGS = (".", ",", ":", "(", ")", "``", "''", "#", "$", "SYM")
ALL_TAGS = PTB_TAGS + tuple(t for t in PUNCT_TAGS if t not in PTB_TAGS)

VERB_TAGS = frozenset({"VB", "VBD", "VBG", "VBN", "VBP", "VBZ"})
NOUN_TAGS = frozenset({"NN", "NNS", "NNP", "NNPS"})

EMPTY_TAG = "∅"  # sentinel for empty / decorative extents

_NUMBER = re.compile(r"^[+-]?(\d[\d,]*\.?\d*|0[xX][0-9a-fA-F]+|\.\d+)%?$")


@dataclass(frozen=True)
class Token:
    surface: str
    lower: str
    pos: str
    index: int


@dataclass(frozen=True)
class TaggedText:
    tokens: tuple[Token, ...]
    has_symbol: bool

    def first_tag(self) -> str:
        return self.tokens[0].pos if self.tokens else EMPTY_TAG

    def first_word(self) -> str:
        return self.tokens[0].lower if self.tokens else EMPTY_TAG

    def tags(self) -> list[str]:
        return [t.pos for t in self.tokens]


class Lexicon:
    """word -> majority tag, plus every tag a word was listed with."""

    def __init__(self, entries: list[tuple[str, str]]) -> None:
        self.majority: dict[str, str] = {}
        self.capabilities: dict[str, set[str]] = {}
        for word, tag in entries:
            word = word.lower()
            if word not in self.majority:
                self.majority[word] = tag
            self.capabilities.setdefault(word, set()).add(tag)

    def tag_of(self, word: str) -> str | None:
        return self.majority.get(word)

    def can_be_verb(self, word: str) -> bool:
        return bool(self.capabilities.get(word, set()) & VERB_TAGS)

    def can_be_base_verb(self, word: str) -> bool:
        return "VB" in self.capabilities.get(word, set())

    def has_verb_base(self, word: str) -> bool:
        tags = self.capabilities.get(word)
        return bool(tags) and bool(tags & VERB_TAGS)

    def __contains__(self, word: str) -> bool:
        return word in self.majority

    @staticmethod
    def load_default() -> "Lexicon":
        data = (resources.files("commentlens.nlp") / "data" / "lexicon.tsv")
        return Lexicon.parse(data.read_text(encoding="utf-8"))

    @staticmethod
    def parse(text: str) -> "Lexicon":
        entries = []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            word, _, tag = line.partition("\t")
            if word and tag:
                entries.append((word, tag.strip()))
        return Lexicon(entries)


_default_lexicon: Lexicon | None = None


def default_lexicon() -> Lexicon:
    global _default_lexicon
    if _default_lexicon is None:
        _default_lexicon = Lexicon.load_default()
    return _default_lexicon


def _punct_tag(token: str) -> str | None:
    if any(ch.isalnum() for ch in token):
        return None
    if all(ch in ".!?" for ch in token):
        return "."
    if token == ",":
        return ","
    if token in (";", ":", "--", "-"):
        return ":"
    if token in ("(", "[", "{"):
        return "("
    if token in (")", "]", "}"):
        return ")"
    if token in ('"', "``", "`"):
        return "``"
    if token == "#":
        return "#"
    if token == "$":
        return "$"
    return "SYM"


def tag_word(word: str, sentence_initial: bool,
             lexicon: Lexicon) -> str:
    punct = _punct_tag(word)
    if punct is not None:
        return punct
    lower = word.lower()
    if _NUMBER.match(word):
        return "CD"
    # imperative rule: comments overwhelmingly open with a base-form verb
    if sentence_initial and lexicon.can_be_base_verb(lower):
        return "VB"
    known = lexicon.tag_of(lower)
    if known is not None:
        return known
    if lower.endswith("ly") and len(lower) > 3:
        return "RB"
    if lower.endswith("ing") and len(lower) > 4:
        return "VBG"
    if lower.endswith("ed") and len(lower) > 3:
        # an unknown -ed opener is a participle ("Copied from ..."), not
        # a finite past
        return "VBN" if sentence_initial else "VBD"
    if lower.endswith("s") and not lower.endswith("ss") and len(lower) > 2:
        base = lower[:-1]
        if lexicon.has_verb_base(base) or (
                lower.endswith("es") and lexicon.has_verb_base(lower[:-2])):
            return "VBZ"
        return "NNS"
    return "NN"


def pos_tag(tokens: list[str], lexicon: Lexicon | None = None) -> TaggedText:
    """Tag every token; tagging is total and deterministic."""
    if lexicon is None:
        lexicon = default_lexicon()
    first_alpha = next((i for i, t in enumerate(tokens)
                        if t and t[0].isalpha()), -1)
    tagged = tuple(
        Token(surface=tok, lower=tok.lower(),
              pos=tag_word(tok, i == first_alpha, lexicon), index=i)
        for i, tok in enumerate(tokens)
    )
    return TaggedText(tokens=tagged,
                      has_symbol=has_symbol(" ".join(tokens)))
