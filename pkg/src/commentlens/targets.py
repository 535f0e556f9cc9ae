"""Target classification and span resolution for comment extents.

The target label says where the described code sits relative to the
comment (Left / Right / Parent / In-Place); resolution turns the label
into a concrete syntax-node span via positional neighbor queries.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .extents import CommentExtent
from .syntax import NO_NEIGHBOR_KIND, ParsedFile, SourceSpan
from .tree import DecisionTreeModel, FeatureVector

LEFT = "Left"
RIGHT = "Right"
PARENT = "Parent"
IN_PLACE = "InPlace"

TARGET_LABELS = (LEFT, RIGHT, PARENT, IN_PLACE)

_TARGET_ALIASES = {
    "left": LEFT, "right": RIGHT, "parent": PARENT,
    "inplace": IN_PLACE, "in-place": IN_PLACE, "in place": IN_PLACE,
}


def canonical_target_label(raw: str) -> str:
    label = _TARGET_ALIASES.get(raw.strip().lower())
    if label is None:
        raise ValueError(f"unknown target label: {raw!r}")
    return label


@dataclass(frozen=True)
class TargetResolution:
    label: str
    span: Optional[SourceSpan]  # absent for InPlace
    node_kind: str
    confidence: float


def classify_target(features: FeatureVector,
                    model: DecisionTreeModel) -> tuple[str, float]:
    """Predict one of the four target labels from the shared feature set."""
    model.check_features(features.keys())
    label, confidence = model.classify(features)
    return canonical_target_label(label), confidence


def resolve_target_span(parsed: ParsedFile, extent: CommentExtent,
                        label: str, confidence: float = 1.0
                        ) -> TargetResolution:
    """Turn a target label into the concrete neighbor span.

    A missing neighbor falls back to In-Place with zero confidence.  Left
    candidates more than one line above the extent are kept but flagged by
    halving the confidence; the gap makes the association doubtful.
    """
    neighbors = parsed.neighbors(extent.span)
    if label == LEFT:
        node = neighbors.left
        if node is None:
            return TargetResolution(IN_PLACE, None, NO_NEIGHBOR_KIND, 0.0)
        if extent.span.start_line - node.span.end_line > 1:
            confidence *= 0.5
        return TargetResolution(LEFT, node.span, node.kind, confidence)
    if label == RIGHT:
        node = neighbors.right
        if node is None:
            return TargetResolution(IN_PLACE, None, NO_NEIGHBOR_KIND, 0.0)
        return TargetResolution(RIGHT, node.span, node.kind, confidence)
    if label == PARENT:
        node = neighbors.parent
        return TargetResolution(PARENT, node.span, node.kind, confidence)
    if label == IN_PLACE:
        return TargetResolution(IN_PLACE, None, NO_NEIGHBOR_KIND, confidence)
    raise ValueError(f"unknown target label: {label!r}")


# --- bootstrap labeling -------------------------------------------------------

_STMT_TAIL = re.compile(r"[;{}]\s*$")
_CALL_SEMI = re.compile(r"\)\s*;")
_KEYWORD_CODE = re.compile(
    r"^\s*(if|else|for|while|switch|return|break|continue|throw|try|catch|"
    r"import|from|def|class|print|elif|except|with|raise|assert|del|pass)\b")
_ASSIGNMENT = re.compile(r"^\s*[\w.\[\]()'\"]+\s*[+\-*/|&]?=[^=]")
_CALL_CHAIN = re.compile(r"^\s*[\w$]+(\.[\w$]+)+\s*\(")
_BARE_CALL = re.compile(r"^\s*[\w$]+\s*\([^()]*\)\s*[;,]?\s*$")


def looks_like_code(text: str) -> bool:
    """Commented-out code detector over raw (delimiter-stripped) text."""
    t = text.strip()
    if not t:
        return False
    if _STMT_TAIL.search(t):
        return True
    if _CALL_SEMI.search(t):
        return True
    if _KEYWORD_CODE.match(t) and re.search(r"[(){}:;=]", t):
        return True
    if _ASSIGNMENT.match(t):
        return True
    if _CALL_CHAIN.match(t):
        return True
    if _BARE_CALL.match(t):
        return True
    return False


def raw_extent_text(extent: CommentExtent) -> str:
    return "\n".join(tok.inner_text() for tok in extent.tokens)


def bootstrap_target_label(parsed: ParsedFile,
                           extent: CommentExtent) -> str:
    """Deterministic heuristic used to label demo corpora for training."""
    raw = raw_extent_text(extent)
    if looks_like_code(raw):
        return IN_PLACE
    if extent.is_decorative():
        return IN_PLACE

    line_start = parsed.line_index[extent.span.start_line - 1]
    before = parsed.text[line_start:extent.span.start_offset].rstrip()
    if before.endswith("{") or before.endswith(":"):
        return PARENT

    neighbors = parsed.neighbors(extent.span)
    if (neighbors.left is not None
            and neighbors.left.span.end_line == extent.span.start_line):
        return LEFT
    if neighbors.right is not None:
        next_code = _next_nonblank_line(parsed, extent.span.end_line)
        if next_code is not None \
                and neighbors.right.span.start_line == next_code:
            return RIGHT
    return IN_PLACE


def _next_nonblank_line(parsed: ParsedFile, after_line: int) -> int | None:
    index = parsed.line_index
    for line_no in range(after_line + 1, len(index) + 1):
        start = index[line_no - 1]
        end = index[line_no] if line_no < len(index) else len(parsed.text)
        if parsed.text[start:end].strip():
            return line_no
    return None
