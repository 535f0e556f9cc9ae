"""Eleven-category comment classification over syntax+text features.

Set-valued features ("does the text include tag/word X?") are expanded
into per-item booleans over a vocabulary built from the training extents,
so the tree learner sees fixed-arity features.  A Java-trained model can
be adapted to Python by rewriting only the syntax-kind tests.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional

from .extents import CommentExtent
from .nlp import PTB_TAGS, TaggedText, has_symbol, is_non_english
from .syntax import JAVA_KINDS, ParsedFile
from .targets import looks_like_code, raw_extent_text
from .tree import (
    DecisionTreeModel, FeatureVector, Leaf, SplitNode, TreeNode, tree_nodes,
)

POSTCONDITION = "Postcondition"
PRECONDITION = "Precondition"
VALUE_DESCRIPTION = "ValueDescription"
INSTRUCTION = "Instruction"
GUIDE = "Guide"
INTERFACE = "Interface"
META_INFORMATION = "MetaInformation"
COMMENT_OUT = "CommentOut"
DIRECTIVE = "Directive"
VISUAL_CUE = "VisualCue"
UNCATEGORIZED = "Uncategorized"

CATEGORY_LABELS = (
    POSTCONDITION, PRECONDITION, VALUE_DESCRIPTION, INSTRUCTION, GUIDE,
    INTERFACE, META_INFORMATION, COMMENT_OUT, DIRECTIVE, VISUAL_CUE,
    UNCATEGORIZED,
)

# Tables in the wild abbreviate or respace the names; accept those too.
_CATEGORY_ALIASES = {
    "postcondition": POSTCONDITION,
    "precondition": PRECONDITION,
    "valuedescription": VALUE_DESCRIPTION,
    "value description": VALUE_DESCRIPTION,
    "value descr.": VALUE_DESCRIPTION,
    "instruction": INSTRUCTION,
    "guide": GUIDE,
    "interface": INTERFACE,
    "metainformation": META_INFORMATION,
    "meta information": META_INFORMATION,
    "metadata": META_INFORMATION,
    "commentout": COMMENT_OUT,
    "comment out": COMMENT_OUT,
    "directive": DIRECTIVE,
    "visualcue": VISUAL_CUE,
    "visual cue": VISUAL_CUE,
    "uncategorized": UNCATEGORIZED,
}

SYNTAX_FEATURES = ("LeftSyntax", "RightSyntax", "ParentSyntax")

WORD_ANY_PREFIX = "WordAny:"
POS_ANY_PREFIX = "PosTagAny:"


class UnmappedKind(Exception):
    """A language-specific kind in the model is missing from the mapping."""


def canonical_category_label(raw: str) -> str:
    label = _CATEGORY_ALIASES.get(raw.strip().lower())
    if label is None:
        raise ValueError(f"unknown category label: {raw!r}")
    return label


@dataclass(frozen=True)
class FeatureVocabulary:
    words: tuple[str, ...]
    tags: tuple[str, ...]


def build_vocabulary(texts_tokens: Iterable[list[str]],
                     word_cap: int = 200) -> FeatureVocabulary:
    """Top ``word_cap`` tokens by extent frequency, punctuation excluded."""
    frequency: Counter = Counter()
    for tokens in texts_tokens:
        seen = {tok.lower() for tok in tokens
                if any(ch.isalnum() for ch in tok)}
        frequency.update(seen)
    ranked = sorted(frequency.items(), key=lambda item: (-item[1], item[0]))
    words = tuple(word for word, _ in ranked[:word_cap])
    return FeatureVocabulary(words=words, tags=PTB_TAGS)


def build_feature_vector(parsed: ParsedFile, extent: CommentExtent,
                         tagged: TaggedText,
                         vocab: FeatureVocabulary) -> dict:
    """The full category/target feature set for one extent."""
    neighbors = parsed.neighbors(extent.span)
    features: dict = {
        "LeftSyntax": neighbors.left_kind(),
        "RightSyntax": neighbors.right_kind(),
        "ParentSyntax": neighbors.parent.kind,
        "HasSymbol": has_symbol(extent.text),
        "PosTagFirst": tagged.first_tag(),
        "WordFirst": tagged.first_word(),
    }
    present_tags = set(tagged.tags())
    for tag in vocab.tags:
        features[POS_ANY_PREFIX + tag] = tag in present_tags
    present_words = {t.lower for t in tagged.tokens}
    for word in vocab.words:
        features[WORD_ANY_PREFIX + word] = word in present_words
    return features


def vocabulary_from_model(model: DecisionTreeModel) -> FeatureVocabulary:
    """Recover the expansion vocabulary from a model's feature schema."""
    words = tuple(name[len(WORD_ANY_PREFIX):]
                  for name in model.feature_schema
                  if name.startswith(WORD_ANY_PREFIX))
    tags = tuple(name[len(POS_ANY_PREFIX):]
                 for name in model.feature_schema
                 if name.startswith(POS_ANY_PREFIX))
    return FeatureVocabulary(words=words, tags=tags or PTB_TAGS)


def classify_category(features: FeatureVector,
                      model: DecisionTreeModel) -> tuple[str, float]:
    model.check_features(features.keys())
    label, confidence = model.classify(features)
    return canonical_category_label(label), confidence


# --- Java -> Python model adaptation -----------------------------------------

def load_kind_mapping(path: Optional[Path] = None) -> dict[str, str]:
    """Two-column kind mapping; defaults to the bundled Java->Python table."""
    if path is None:
        text = (resources.files("commentlens") / "data"
                / "java_python_kinds.tsv").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    mapping: dict[str, str] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        source, _, target = line.partition("\t")
        if source and target:
            mapping[source.strip()] = target.strip()
    return mapping


def map_syntax_features(model: DecisionTreeModel,
                        mapping: dict[str, str]) -> DecisionTreeModel:
    """Rewrite the tested values of syntax-kind features via the mapping.

    Kinds shared by both languages pass through unchanged; a
    language-specific kind with no mapping row raises UnmappedKind.  All
    other features and the tree shape are left intact.
    """
    present: set[str] = set()
    for node in tree_nodes(model.root):
        if isinstance(node, SplitNode) and node.feature in SYNTAX_FEATURES:
            present.update(node.branch_keys)
    image = [mapping.get(kind, kind) for kind in sorted(present)]
    if len(set(image)) != len(image):
        raise ValueError("mapping is not injective on the kinds in the model")

    def convert(kind: str) -> str:
        if kind in mapping:
            return mapping[kind]
        if kind in JAVA_KINDS:
            raise UnmappedKind(f"no mapping for kind {kind!r}")
        return kind

    def walk(node: TreeNode) -> TreeNode:
        if isinstance(node, Leaf):
            return Leaf(node.label, node.support, dict(node.distribution))
        children = [walk(child) for child in node.children]
        keys = node.branch_keys
        known = node.known_values
        if node.feature in SYNTAX_FEATURES and node.kind == "categorical":
            keys = tuple(convert(k) for k in keys)
            known = tuple(convert(k) for k in known)
        return SplitNode(feature=node.feature, kind=node.kind,
                         branch_keys=keys, children=children,
                         majority_index=node.majority_index,
                         threshold=node.threshold, known_values=known)

    return DecisionTreeModel(
        root=walk(model.root),
        labels=model.labels,
        feature_schema=dict(model.feature_schema),
        task=model.task,
        min_examples=model.min_examples,
        training_size=model.training_size,
        label_counts=dict(model.label_counts),
    )


# --- bootstrap labeling --------------------------------------------------------

_DIRECTIVE_RE = re.compile(
    r"^\s*\$?(CHECKSTYLE|NOSONAR|NOPMD|NON-NLS|noqa|nosec|type:\s*ignore|"
    r"pylint:|flake8:|fmt:|@formatter:|coverage:|pragma)", re.IGNORECASE)
_INSTRUCTION_RE = re.compile(r"\b(todo|fixme|xxx|hack)\b", re.IGNORECASE)
_META_RE = re.compile(
    r"(copyright|\(c\)\s*\d|license|licensed|@author|all rights reserved|"
    r"^\s*(from|see|via)\s+[\w$]+(\.[\w$]+){2,})", re.IGNORECASE)
_GUIDE_RE = re.compile(r"^\s*(example|usage|e\.g\.|how to use)\b",
                       re.IGNORECASE)
_PRECONDITION_WORDS = frozenset({
    "if", "when", "note", "because", "since", "otherwise", "unable",
    "error", "workaround", "must", "should", "needed", "required", "only",
    "assumes", "assume", "precondition", "invariant", "warning", "caution",
    "this", "these", "here", "now", "already", "at", "in", "on", "for",
    "no", "not", "never",
})
_DECLARATION_KINDS = frozenset({"MethodDeclaration", "FunctionDef"})
_EXPRESSION_PARENTS = frozenset({"MethodInvocation", "Call",
                                 "ArrayInitializer", "Tuple"})


def bootstrap_category_label(parsed: ParsedFile, extent: CommentExtent,
                             tagged: TaggedText) -> str:
    """Deterministic heuristic labels for training demo corpora."""
    raw = raw_extent_text(extent)
    if extent.is_decorative():
        return VISUAL_CUE
    if is_non_english(extent.text):
        return UNCATEGORIZED
    if _DIRECTIVE_RE.search(raw):
        return DIRECTIVE
    if looks_like_code(raw):
        return COMMENT_OUT
    if _INSTRUCTION_RE.search(extent.text):
        return INSTRUCTION
    if _META_RE.search(extent.text):
        return META_INFORMATION
    if _GUIDE_RE.search(extent.text):
        return GUIDE

    neighbors = parsed.neighbors(extent.span)
    if neighbors.parent.kind in _EXPRESSION_PARENTS:
        return VALUE_DESCRIPTION
    if (neighbors.right is not None
            and neighbors.right.kind in _DECLARATION_KINDS
            and neighbors.right.span.start_line > extent.span.end_line):
        return INTERFACE

    first_word = tagged.first_word()
    first_tag = tagged.first_tag()
    if first_word in _PRECONDITION_WORDS or first_tag in ("IN", "MD"):
        return PRECONDITION
    if first_tag in ("VB", "VBZ", "VBG"):
        return POSTCONDITION
    if len(tagged.tokens) <= 2 and first_tag in ("NN", "NNS", "NNP", "JJ"):
        return VISUAL_CUE
    return UNCATEGORIZED
