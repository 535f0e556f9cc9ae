"""Comment-text NLP: tokenization, POS tagging, lemmas, verb+noun pairs."""

from __future__ import annotations

from .lemma import extract_verb_noun_pairs, lemmatize
from .tagger import (
    ALL_TAGS, EMPTY_TAG, NOUN_TAGS, PTB_TAGS, PUNCT_TAGS, VERB_TAGS,
    Lexicon, TaggedText, Token, default_lexicon, pos_tag,
)
from .tokenizer import (
    has_symbol, is_code_token, is_non_english, non_ascii_letter_ratio,
    tokenize,
)

__all__ = [
    "ALL_TAGS", "EMPTY_TAG", "NOUN_TAGS", "PTB_TAGS", "PUNCT_TAGS",
    "VERB_TAGS", "Lexicon", "TaggedText", "Token",
    "default_lexicon", "pos_tag", "tokenize", "has_symbol", "is_code_token",
    "is_non_english", "non_ascii_letter_ratio",
    "lemmatize", "extract_verb_noun_pairs",
]
