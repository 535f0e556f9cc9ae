"""Suffix-stripping lemmatizer and verb+noun pair extraction."""

from __future__ import annotations

from .tagger import Lexicon, NOUN_TAGS, TaggedText, default_lexicon

_DOUBLED = "bdfgklmnprtv"  # stop/stopped, plan/planned, ...


def _strip_verb_suffix(word: str, suffix: str, lexicon: Lexicon) -> str:
    base = word[: -len(suffix)]
    if base in lexicon:
        return base
    if base + "e" in lexicon:
        return base + "e"
    if (len(base) >= 3 and base[-1] == base[-2]
            and base[-1] in _DOUBLED):
        return base[:-1]
    return base


def lemmatize(word: str, tag: str, lexicon: Lexicon | None = None) -> str:
    """Reduce inflected forms to a base lemma; identity for unknown shapes."""
    if lexicon is None:
        lexicon = default_lexicon()
    word = word.lower()
    if tag.startswith("V"):
        if word.endswith("ies") and len(word) > 4:
            return word[:-3] + "y"
        if word.endswith("ied") and len(word) > 4:
            return word[:-3] + "y"
        if word.endswith("ing") and len(word) > 4:
            return _strip_verb_suffix(word, "ing", lexicon)
        if word.endswith("ed") and len(word) > 3:
            return _strip_verb_suffix(word, "ed", lexicon)
        if word.endswith("es") and len(word) > 3:
            base = word[:-2]
            if base in lexicon:
                return base
            if base.endswith(("ss", "sh", "ch", "x", "z")):
                return base
            return word[:-1]
        if word.endswith("s") and not word.endswith("ss") and len(word) > 2:
            return word[:-1]
        return word
    if tag.startswith("N"):
        if word.endswith("ies") and len(word) > 4:
            return word[:-3] + "y"
        if word.endswith("es") and len(word) > 3:
            base = word[:-2]
            if base.endswith(("ss", "sh", "ch", "x", "z")):
                return base
            if base in lexicon:
                return base
            return word[:-1]
        if (word.endswith("s") and not word.endswith(("ss", "us", "is"))
                and len(word) > 2):
            return word[:-1]
        return word
    return word


_PAIR_VERB_TAGS = ("VB", "VBZ", "VBP", "VBD", "VBG")


def extract_verb_noun_pairs(tagged: TaggedText,
                            lexicon: Lexicon | None = None
                            ) -> list[tuple[str, str]]:
    """(verb, head noun) lemma pairs; head = last noun of the nearest run."""
    if lexicon is None:
        lexicon = default_lexicon()
    tokens = tagged.tokens
    pairs: list[tuple[str, str]] = []
    for i, token in enumerate(tokens):
        if token.pos not in _PAIR_VERB_TAGS:
            continue
        j = i + 1
        while j < len(tokens) and tokens[j].pos not in NOUN_TAGS:
            if tokens[j].pos in _PAIR_VERB_TAGS or tokens[j].pos == ".":
                break
            j += 1
        if j >= len(tokens) or tokens[j].pos not in NOUN_TAGS:
            continue
        head = j
        while head + 1 < len(tokens) and tokens[head + 1].pos in NOUN_TAGS:
            head += 1
        pairs.append((lemmatize(token.lower, token.pos, lexicon),
                      lemmatize(tokens[head].lower, tokens[head].pos,
                                lexicon)))
    return pairs
