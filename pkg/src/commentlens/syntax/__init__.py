"""Uniform syntax trees for Java and Python with positioned comments."""

from __future__ import annotations

from .java import parse_java
from .model import (
    BLOCK, JAVA_KINDS, KIND_VOCABULARY, LINE, NO_NEIGHBOR_KIND, PYTHON_KINDS,
    SHARED_KINDS, CommentToken, Neighbors, ParsedFile, SourceSpan, SyntaxNode,
    UnparsableFile, build_line_index, enumerate_comments, span_from_offsets,
    validate_tree,
)
from .python import parse_python

LANGUAGES = ("java", "python")
EXTENSIONS = {".java": "java", ".py": "python"}


def parse_source(text: str, language: str, file_id: str = "<memory>"
                 ) -> ParsedFile:
    """Parse one source file into the uniform representation.

    Raises UnparsableFile when the text has syntax errors beyond recovery;
    callers running over a corpus should count and skip such files.
    """
    if language == "java":
        return parse_java(text, file_id)
    if language == "python":
        return parse_python(text, file_id)
    raise ValueError(f"unsupported language: {language!r}")


def neighbor_query(parsed: ParsedFile, pos: SourceSpan) -> Neighbors:
    """Nearest syntax elements left/right of ``pos`` plus its parent."""
    return parsed.neighbors(pos)


__all__ = [
    "BLOCK", "LINE", "LANGUAGES", "EXTENSIONS",
    "JAVA_KINDS", "PYTHON_KINDS", "SHARED_KINDS", "KIND_VOCABULARY",
    "NO_NEIGHBOR_KIND",
    "CommentToken", "Neighbors", "ParsedFile", "SourceSpan", "SyntaxNode",
    "UnparsableFile",
    "parse_source", "parse_java", "parse_python", "neighbor_query",
    "build_line_index", "span_from_offsets", "enumerate_comments",
    "validate_tree",
]
