"""Grouping consecutive comment tokens into extents.

A decision tree predicts an IOB tag per comment token from positional and
syntactic features; B starts a new extent and I continues the previous
one.  Maximal B I* runs are merged into one extent whose text is
normalized for the NLP stages.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .syntax import BLOCK, CommentToken, ParsedFile, SourceSpan
from .tree import DecisionTreeModel, FeatureVector

TAG_B = "B"
TAG_I = "I"

# distance sentinel when there is no previous comment / no left element
NO_DISTANCE = 9999

EXTENT_FEATURE_NAMES = frozenset({
    "DeltaRows", "DeltaCols", "DeltaLeft",
    "LeftSyntax", "RightSyntax", "ParentSyntax",
})

_DECORATION = re.compile(r"^[\s*\-=/#]+")
_DECORATION_ONLY = re.compile(r"^[\s*\-=/#~_|+!]*$")


@dataclass(frozen=True)
class CommentExtent:
    """A maximal run of consecutive comment tokens with one continuous text."""

    tokens: tuple[CommentToken, ...]
    text: str  # normalized; empty for purely decorative extents
    span: SourceSpan  # hull of the token spans

    @property
    def file_id(self) -> str:
        return self.tokens[0].file_id

    def is_decorative(self) -> bool:
        return not self.text


def compute_extent_features(parsed: ParsedFile, index: int) -> dict:
    """Positional/syntactic features of one comment token (Table-style set)."""
    comment = parsed.comments[index]
    features: dict = {}
    if index > 0:
        prev = parsed.comments[index - 1]
        features["DeltaRows"] = comment.span.start_line - prev.span.start_line
        features["DeltaCols"] = comment.span.start_col - prev.span.start_col
    else:
        features["DeltaRows"] = NO_DISTANCE
        features["DeltaCols"] = NO_DISTANCE
    neighbors = parsed.neighbors(comment.span)
    if neighbors.left is not None:
        features["DeltaLeft"] = (comment.span.start_col
                                 - neighbors.left.span.end_col)
    else:
        features["DeltaLeft"] = NO_DISTANCE
    features["LeftSyntax"] = neighbors.left_kind()
    features["RightSyntax"] = neighbors.right_kind()
    features["ParentSyntax"] = neighbors.parent.kind
    return features


def rule_tag(parsed: ParsedFile, index: int) -> str:
    """Deterministic bootstrap rule used to label demo corpora.

    I only when: line style on both sides, same start column, exactly one
    line below the previous comment, and nothing but whitespace between.
    Block comments always open their own extent.
    """
    if index == 0:
        return TAG_B
    comment = parsed.comments[index]
    prev = parsed.comments[index - 1]
    if comment.style == BLOCK or prev.style == BLOCK:
        return TAG_B
    if comment.span.start_line - prev.span.start_line != 1:
        return TAG_B
    if comment.span.start_col != prev.span.start_col:
        return TAG_B
    between = parsed.text[prev.span.end_offset:comment.span.start_offset]
    if between.strip():
        return TAG_B
    return TAG_I


def rule_tags(parsed: ParsedFile) -> list[str]:
    return [rule_tag(parsed, i) for i in range(len(parsed.comments))]


def tag_extents(parsed: ParsedFile, model: DecisionTreeModel) -> list[str]:
    """One IOB tag per comment token; the first token is always B."""
    model.check_features(EXTENT_FEATURE_NAMES)
    tags: list[str] = []
    for index in range(len(parsed.comments)):
        if index == 0:
            tags.append(TAG_B)
            continue
        label, _ = model.classify(compute_extent_features(parsed, index))
        tags.append(TAG_B if label not in (TAG_B, TAG_I) else label)
    return tags


def normalize_comment_text(tokens: tuple[CommentToken, ...]) -> str:
    """Continuous text: delimiters stripped, decoration runs removed,
    whitespace collapsed."""
    pieces: list[str] = []
    for token in tokens:
        for line in token.inner_text().split("\n"):
            if _DECORATION_ONLY.match(line):
                continue
            pieces.append(_DECORATION.sub("", line).strip())
    return " ".join(" ".join(pieces).split())


def merge_extents(parsed: ParsedFile, tags: list[str]) -> list[CommentExtent]:
    """Merge each maximal B I* run into one extent."""
    comments = parsed.comments
    if len(tags) != len(comments):
        raise ValueError("one tag per comment token required")
    if comments and tags[0] != TAG_B:
        raise ValueError("the first comment token must be tagged B")

    extents: list[CommentExtent] = []
    run: list[CommentToken] = []
    for comment, tag in zip(comments, tags):
        if tag == TAG_B and run:
            extents.append(_build_extent(tuple(run)))
            run = []
        run.append(comment)
    if run:
        extents.append(_build_extent(tuple(run)))
    return extents


def _build_extent(tokens: tuple[CommentToken, ...]) -> CommentExtent:
    first, last = tokens[0].span, tokens[-1].span
    hull = SourceSpan(
        start_offset=first.start_offset,
        end_offset=last.end_offset,
        start_line=first.start_line,
        end_line=last.end_line,
        start_col=first.start_col,
        end_col=last.end_col,
    )
    return CommentExtent(tokens=tokens,
                         text=normalize_comment_text(tokens),
                         span=hull)


def extract_extents(parsed: ParsedFile,
                    model: DecisionTreeModel | None = None
                    ) -> list[CommentExtent]:
    """Full extent pass: model-tagged when available, rule-tagged otherwise."""
    tags = tag_extents(parsed, model) if model is not None \
        else rule_tags(parsed)
    return merge_extents(parsed, tags)
