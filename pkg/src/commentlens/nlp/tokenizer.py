"""Comment-text tokenization and symbol detection.

Comment prose mixes English with identifiers and code fragments; tokens
that look like code are kept intact so the tagger sees them as single
units.
"""

from __future__ import annotations

import re

TERMINAL_PUNCT = ".,;:!?"

_CAMEL = re.compile(r"[a-z][A-Z]")
_DOTTED_IDENT = re.compile(r"[A-Za-z0-9_]\.[A-Za-z0-9_]")
_UNDERSCORE_IDENT = re.compile(r"[A-Za-z0-9]_[A-Za-z0-9]")
_SYMBOL_CHARS = set("(){}[];=<>+*/")


def is_code_token(chunk: str) -> bool:
    """Identifiers, calls, paths: anything carrying code punctuation.

    A dot only counts when it sits between identifier characters, so a
    sentence-final period does not glue to its word.
    """
    if any(ch in "_()=" for ch in chunk):
        return True
    if _DOTTED_IDENT.search(chunk):
        return True
    return _CAMEL.search(chunk) is not None


def tokenize(text: str) -> list[str]:
    """Whitespace split with terminal punctuation peeled off prose words."""
    tokens: list[str] = []
    for chunk in text.split():
        if is_code_token(chunk):
            tokens.append(chunk)
            continue
        trailing: list[str] = []
        while chunk and chunk[-1] in TERMINAL_PUNCT:
            trailing.append(chunk[-1])
            chunk = chunk[:-1]
        if chunk:
            tokens.append(chunk)
        tokens.extend(reversed(trailing))
    return tokens


def has_symbol(text: str) -> bool:
    """True when the text carries code-ish syntax.

    Bare terminal punctuation does not count; identifier-internal dots,
    underscores and camelCase humps do.
    """
    if any(ch in _SYMBOL_CHARS for ch in text):
        return True
    for chunk in text.split():
        if (_CAMEL.search(chunk) or _DOTTED_IDENT.search(chunk)
                or _UNDERSCORE_IDENT.search(chunk)):
            return True
    return False


def non_ascii_letter_ratio(text: str) -> float:
    letters = [ch for ch in text if ch.isalpha()]
    if not letters:
        return 0.0
    non_ascii = sum(1 for ch in letters if ord(ch) > 127)
    return non_ascii / len(letters)


def is_non_english(text: str, threshold: float = 0.30) -> bool:
    """Extents dominated by non-ASCII letters skip English tagging."""
    return non_ascii_letter_ratio(text) > threshold
