"""Python source parsing via the stdlib ast and tokenize modules.

The grammar discards comments during tokenization, so they are recovered
from the raw token stream and attached by position.  Statement suites are
exposed as synthetic Block nodes spanning their first through last
statement, which gives indentation-scoped comments a parent comparable to
a braced block.
"""

from __future__ import annotations

import ast
import io
import tokenize

from .model import (
    BLOCK, LINE, CommentToken, ParsedFile, SourceSpan, SyntaxNode,
    UnparsableFile, build_line_index,
)

_KIND_MAP = {
    "Name": "Name",
    "FunctionDef": "FunctionDef",
    "AsyncFunctionDef": "FunctionDef",
    "Expr": "Expr",
    "If": "If",
    "Call": "Call",
    "For": "For",
    "AsyncFor": "For",
    "Tuple": "Tuple",
    "Return": "ReturnStatement",
    "Assign": "VariableDeclaration",
    "AugAssign": "VariableDeclaration",
    "AnnAssign": "VariableDeclaration",
    "ExceptHandler": "CatchClause",
}

_SUITE_FIELDS = ("body", "orelse", "finalbody")


def parse_python(text: str, file_id: str) -> ParsedFile:
    """Parse Python source into the uniform tree, comments included."""
    line_index = build_line_index(text)
    lines = text.split("\n")
    cols = _ColumnConverter(lines)

    try:
        module = ast.parse(text)
    except (SyntaxError, ValueError, MemoryError, RecursionError) as exc:
        raise UnparsableFile(f"{file_id}: {exc}") from exc

    root_span = SourceSpan(0, len(text), 1, max(1, len(line_index)), 0,
                           len(text) - line_index[-1] if line_index else 0)
    root = SyntaxNode("Root", root_span,
                      _convert_body(module, lines, line_index, cols,
                                    synthesize_block=False))

    comments = _collect_comments(text, file_id, line_index)
    return ParsedFile(file_id, "python", text, root, comments, line_index)


class _ColumnConverter:
    """ast reports byte columns; spans need character columns."""

    def __init__(self, lines: list[str]) -> None:
        self._lines = lines
        self._cache: dict[int, bytes] = {}

    def char_col(self, line: int, byte_col: int) -> int:
        raw = self._lines[line - 1]
        if raw.isascii():
            return byte_col
        encoded = self._cache.get(line)
        if encoded is None:
            encoded = raw.encode("utf-8")
            self._cache[line] = encoded
        return len(encoded[:byte_col].decode("utf-8", errors="replace"))


def _node_span(node: ast.AST, lines: list[str], line_index: list[int],
               cols: _ColumnConverter) -> SourceSpan | None:
    lineno = getattr(node, "lineno", None)
    end_lineno = getattr(node, "end_lineno", None)
    if lineno is None or end_lineno is None:
        return None
    start_col = cols.char_col(lineno, node.col_offset)
    end_col = cols.char_col(end_lineno, node.end_col_offset)
    return SourceSpan(
        start_offset=line_index[lineno - 1] + start_col,
        end_offset=line_index[end_lineno - 1] + end_col,
        start_line=lineno,
        end_line=end_lineno,
        start_col=start_col,
        end_col=end_col,
    )


def _convert(node: ast.AST, lines: list[str], line_index: list[int],
             cols: _ColumnConverter) -> SyntaxNode | None:
    span = _node_span(node, lines, line_index, cols)
    if span is None:
        return None

    kind = _KIND_MAP.get(type(node).__name__, "Other")
    if isinstance(node, ast.Constant):
        if isinstance(node.value, str) or isinstance(node.value, bytes):
            kind = "Str"
        elif isinstance(node.value, bool) or node.value is None:
            kind = "Other"
        elif isinstance(node.value, (int, float, complex)):
            kind = "Num"

    children = _convert_body(node, lines, line_index, cols,
                             synthesize_block=True)

    # Decorators sit above a def/class but are its children; widen the span
    # so containment holds, pulling in the @ sigil the ast leaves out.
    if children:
        start = min(span.start_offset, children[0].span.start_offset)
        end = max(span.end_offset, children[-1].span.end_offset)
        if start != span.start_offset or end != span.end_offset:
            first, last = children[0].span, children[-1].span
            start_line = min(span.start_line, first.start_line)
            start_col = (first.start_col if start != span.start_offset
                         else span.start_col)
            if (start != span.start_offset and start_col > 0
                    and lines[start_line - 1][start_col - 1] == "@"):
                start -= 1
                start_col -= 1
            span = SourceSpan(
                start_offset=start,
                end_offset=end,
                start_line=start_line,
                end_line=max(span.end_line, last.end_line),
                start_col=start_col,
                end_col=(last.end_col if end != span.end_offset
                         else span.end_col),
            )
    return SyntaxNode(kind, span, children)


def _convert_body(node: ast.AST, lines: list[str], line_index: list[int],
                  cols: _ColumnConverter, synthesize_block: bool
                  ) -> list[SyntaxNode]:
    """Convert positioned children, wrapping statement suites in Blocks."""
    children: list[SyntaxNode] = []
    suite_values: dict[int, str] = {}
    if synthesize_block:
        for fname in _SUITE_FIELDS:
            value = getattr(node, fname, None)
            if isinstance(value, list) and value and isinstance(value[0],
                                                                ast.stmt):
                suite_values[id(value)] = fname

    for fname, value in ast.iter_fields(node):
        if isinstance(value, ast.AST):
            converted = _convert(value, lines, line_index, cols)
            if converted is not None:
                children.append(converted)
            else:
                # position-less containers (e.g. parameter lists): surface
                # their positioned descendants directly
                children.extend(_convert_body(value, lines, line_index, cols,
                                              synthesize_block=False))
        elif isinstance(value, list):
            converted_list = [c for c in
                              (_convert(v, lines, line_index, cols)
                               for v in value if isinstance(v, ast.AST))
                              if c is not None]
            if not converted_list:
                continue
            if id(value) in suite_values:
                children.append(_block_around(converted_list))
            else:
                children.extend(converted_list)

    children.sort(key=lambda c: (c.span.start_offset, -c.span.length()))
    return _enforce_sibling_order(children)


def _block_around(stmts: list[SyntaxNode]) -> SyntaxNode:
    first, last = stmts[0].span, stmts[-1].span
    span = SourceSpan(
        start_offset=first.start_offset,
        end_offset=last.end_offset,
        start_line=first.start_line,
        end_line=last.end_line,
        start_col=first.start_col,
        end_col=last.end_col,
    )
    return SyntaxNode("Block", span, stmts)


def _enforce_sibling_order(children: list[SyntaxNode]) -> list[SyntaxNode]:
    """Drop the rare ast child whose span escapes document order (defensive)."""
    out: list[SyntaxNode] = []
    for child in children:
        if out and child.span.start_offset < out[-1].span.end_offset:
            if out[-1].span.contains(child.span):
                continue  # duplicate positional info, already covered
            if child.span.contains(out[-1].span):
                out[-1] = child
                continue
            continue
        out.append(child)
    return out


def _collect_comments(text: str, file_id: str,
                      line_index: list[int]) -> list[CommentToken]:
    comments: list[CommentToken] = []
    try:
        tokens = tokenize.generate_tokens(io.StringIO(text).readline)
        for tok in tokens:
            if tok.type != tokenize.COMMENT:
                continue
            (srow, scol), (erow, ecol) = tok.start, tok.end
            comments.append(CommentToken(
                span=SourceSpan(
                    start_offset=line_index[srow - 1] + scol,
                    end_offset=line_index[erow - 1] + ecol,
                    start_line=srow, end_line=erow,
                    start_col=scol, end_col=ecol,
                ),
                style=LINE,
                raw_text=tok.string,
                file_id=file_id,
            ))
    except (tokenize.TokenizeError, IndentationError, SyntaxError,
            ValueError) as exc:
        raise UnparsableFile(f"{file_id}: {exc}") from exc
    return comments


__all__ = ["parse_python", "BLOCK", "LINE"]
