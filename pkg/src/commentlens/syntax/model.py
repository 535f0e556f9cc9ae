"""Span-annotated syntax trees with comments kept as positioned tokens.

Both languages are mapped onto one small node-kind vocabulary so that
downstream classifiers see comparable features.  Everything here is
immutable after construction and safe to share across workers.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

# Canonical node kinds.  The nine language-specific pairs keep their native
# names (Java left, Python right); the remaining kinds are shared by both
# languages.  Any other grammar construct collapses to "Other".
JAVA_KINDS = frozenset({
    "SimpleName", "MethodDeclaration", "ExpressionStatement", "IfStatement",
    "MethodInvocation", "ForStatement", "StringLiteral", "NumberLiteral",
    "ArrayInitializer",
})
PYTHON_KINDS = frozenset({
    "Name", "FunctionDef", "Expr", "If", "Call", "For", "Str", "Num", "Tuple",
})
SHARED_KINDS = frozenset({
    "Block", "ReturnStatement", "VariableDeclaration", "CatchClause",
    "Root", "Other",
})
# Sentinel kind reported when a positional neighbor does not exist.
NO_NEIGHBOR_KIND = "None"

KIND_VOCABULARY = JAVA_KINDS | PYTHON_KINDS | SHARED_KINDS | {NO_NEIGHBOR_KIND}

LINE = "line"
BLOCK = "block"


class UnparsableFile(Exception):
    """Raised when a source file has syntax errors beyond recovery."""


@dataclass(frozen=True)
class SourceSpan:
    """Half-open character range with its line/column rendering.

    Offsets index the decoded text; lines are 1-based and columns 0-based.
    Tabs count as a single column.
    """

    start_offset: int
    end_offset: int
    start_line: int
    end_line: int
    start_col: int
    end_col: int

    def __post_init__(self) -> None:
        if self.start_offset > self.end_offset:
            raise ValueError(f"span offsets out of order: {self}")
        if self.start_line > self.end_line:
            raise ValueError(f"span lines out of order: {self}")

    def contains(self, other: "SourceSpan") -> bool:
        return (self.start_offset <= other.start_offset
                and other.end_offset <= self.end_offset)

    def length(self) -> int:
        return self.end_offset - self.start_offset

    def to_json(self) -> dict:
        return {
            "start_offset": self.start_offset,
            "end_offset": self.end_offset,
            "start_line": self.start_line,
            "end_line": self.end_line,
            "start_col": self.start_col,
            "end_col": self.end_col,
        }

    @staticmethod
    def from_json(obj: dict) -> "SourceSpan":
        return SourceSpan(
            obj["start_offset"], obj["end_offset"],
            obj["start_line"], obj["end_line"],
            obj["start_col"], obj["end_col"],
        )


class SyntaxNode:
    """One parsed program element.  Children are ordered and non-overlapping."""

    __slots__ = ("kind", "span", "children", "parent")

    def __init__(self, kind: str, span: SourceSpan,
                 children: Optional[list["SyntaxNode"]] = None) -> None:
        self.kind = kind
        self.span = span
        self.children: list[SyntaxNode] = children or []
        self.parent: Optional[SyntaxNode] = None
        for child in self.children:
            child.parent = self

    def walk(self) -> Iterator["SyntaxNode"]:
        yield self
        for child in self.children:
            yield from child.walk()

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return (f"SyntaxNode({self.kind}, "
                f"[{self.span.start_offset},{self.span.end_offset}), "
                f"{len(self.children)} children)")


@dataclass(frozen=True)
class CommentToken:
    """A single raw comment, delimiters included."""

    span: SourceSpan
    style: str  # LINE or BLOCK
    raw_text: str
    file_id: str

    def inner_text(self) -> str:
        """Comment text with the delimiters stripped."""
        text = self.raw_text
        if self.style == LINE:
            if text.startswith("//"):
                return text[2:]
            if text.startswith("#"):
                return text[1:]
            return text
        if text.startswith("/*"):
            text = text[2:]
            if text.endswith("*/"):
                text = text[:-2]
        return text


@dataclass(frozen=True)
class Neighbors:
    left: Optional[SyntaxNode]
    right: Optional[SyntaxNode]
    parent: SyntaxNode

    def left_kind(self) -> str:
        return self.left.kind if self.left is not None else NO_NEIGHBOR_KIND

    def right_kind(self) -> str:
        return self.right.kind if self.right is not None else NO_NEIGHBOR_KIND


class ParsedFile:
    """A parsed source file plus its positioned comments.

    Nodes are indexed once at construction so that positional neighbor
    queries stay cheap even on large files.
    """

    def __init__(self, file_id: str, language: str, text: str,
                 root: SyntaxNode, comments: list[CommentToken],
                 line_index: list[int]) -> None:
        self.file_id = file_id
        self.language = language
        self.text = text
        self.root = root
        self.comments = sorted(comments, key=lambda c: c.span.start_offset)
        self.line_index = line_index

        nodes = [n for n in root.walk() if n is not root]
        # Left queries bisect on end offset; ties prefer the longest span,
        # realized by sorting longer spans last within an end-offset group.
        self._by_end = sorted(nodes, key=lambda n: (n.span.end_offset,
                                                    n.span.length()))
        self._end_keys = [n.span.end_offset for n in self._by_end]
        self._by_start = sorted(nodes, key=lambda n: (n.span.start_offset,
                                                      -n.span.length()))
        self._start_keys = [n.span.start_offset for n in self._by_start]

    def line_count(self) -> int:
        return max(1, len(self.line_index))

    def offset_for(self, line: int, col: int) -> int:
        """Char offset of 1-based line / 0-based col."""
        return self.line_index[line - 1] + col

    def neighbors(self, pos: SourceSpan) -> Neighbors:
        """Nearest syntax elements around ``pos``.

        Left is the node ending closest before the position, right the node
        starting closest after it; ties on position go to the longest span.
        The parent is the smallest node containing the position, defaulting
        to the file root.
        """
        left = self._left_of(pos.start_offset)
        right = self._right_of(pos.end_offset)
        parent = self._parent_of(pos)
        return Neighbors(left=left, right=right, parent=parent)

    def _left_of(self, offset: int) -> Optional[SyntaxNode]:
        i = bisect.bisect_right(self._end_keys, offset)
        if i == 0:
            return None
        # The sort order puts the longest span last within an end group.
        return self._by_end[i - 1]

    def _right_of(self, offset: int) -> Optional[SyntaxNode]:
        i = bisect.bisect_left(self._start_keys, offset)
        if i == len(self._start_keys):
            return None
        return self._by_start[i]

    def _parent_of(self, pos: SourceSpan) -> SyntaxNode:
        node = self.root
        while True:
            inner = None
            for child in node.children:
                if (child.span.start_offset <= pos.start_offset
                        and pos.end_offset <= child.span.end_offset):
                    inner = child
                    break
            if inner is None:
                return node
            node = inner


def build_line_index(text: str) -> list[int]:
    """Offsets of each line start; index 0 is line 1."""
    index = [0]
    for i, ch in enumerate(text):
        if ch == "\n":
            index.append(i + 1)
    return index


def span_from_offsets(text: str, line_index: list[int],
                      start: int, end: int) -> SourceSpan:
    """Build a SourceSpan for [start, end) against a known line index."""
    start_line = bisect.bisect_right(line_index, start)
    end_line = bisect.bisect_right(line_index, max(end - 1, start))
    return SourceSpan(
        start_offset=start,
        end_offset=end,
        start_line=start_line,
        end_line=end_line,
        start_col=start - line_index[start_line - 1],
        end_col=end - line_index[end_line - 1],
    )


def validate_tree(root: SyntaxNode) -> None:
    """Check containment and sibling ordering; raises AssertionError."""
    for node in root.walk():
        prev_end = None
        for child in node.children:
            assert node.span.contains(child.span), (
                f"child {child!r} escapes parent {node!r}")
            if prev_end is not None:
                assert child.span.start_offset >= prev_end, (
                    f"sibling overlap at {child!r}")
            prev_end = child.span.end_offset


def enumerate_comments(
        files: Iterable[ParsedFile]) -> Iterator[tuple[str, CommentToken]]:
    """All comments across files ordered by (file_id, start offset)."""
    for parsed in sorted(files, key=lambda f: f.file_id):
        for comment in parsed.comments:
            yield parsed.file_id, comment
