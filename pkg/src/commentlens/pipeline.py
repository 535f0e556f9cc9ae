"""End-to-end analysis of one parsed file: extents, targets, categories.

Models are optional at every stage; missing ones fall back to the
deterministic bootstrap rules so a corpus can be processed before any
training has happened.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .categories import (
    UNCATEGORIZED, FeatureVocabulary, bootstrap_category_label,
    build_feature_vector, classify_category, vocabulary_from_model,
)
from .extents import CommentExtent, extract_extents
from .nlp import TaggedText, is_non_english, pos_tag, tokenize
from .records import CommentRecord, make_snippet
from .syntax import ParsedFile
from .targets import (
    TargetResolution, bootstrap_target_label, classify_target,
    resolve_target_span,
)
from .tree import DecisionTreeModel


@dataclass
class ModelBundle:
    extent: Optional[DecisionTreeModel] = None
    target: Optional[DecisionTreeModel] = None
    category: Optional[DecisionTreeModel] = None

    def vocabulary(self) -> Optional[FeatureVocabulary]:
        if self.category is not None:
            return vocabulary_from_model(self.category)
        if self.target is not None:
            return vocabulary_from_model(self.target)
        return None

    @staticmethod
    def load(extent_path: Optional[Path] = None,
             target_path: Optional[Path] = None,
             category_path: Optional[Path] = None) -> "ModelBundle":
        load = DecisionTreeModel.load
        return ModelBundle(
            extent=load(extent_path) if extent_path else None,
            target=load(target_path) if target_path else None,
            category=load(category_path) if category_path else None,
        )

    def to_blob(self) -> dict:
        return {
            name: model.to_json() if model is not None else None
            for name, model in (("extent", self.extent),
                                ("target", self.target),
                                ("category", self.category))
        }

    @staticmethod
    def from_blob(blob: dict) -> "ModelBundle":
        def load(obj):
            return DecisionTreeModel.from_json(obj) if obj else None
        return ModelBundle(extent=load(blob.get("extent")),
                           target=load(blob.get("target")),
                           category=load(blob.get("category")))


@dataclass
class AnalyzedExtent:
    extent: CommentExtent
    tagged: TaggedText
    non_english: bool
    target: TargetResolution
    category_label: str
    category_confidence: float


def analyze_extent(parsed: ParsedFile, extent: CommentExtent,
                   bundle: ModelBundle,
                   vocab: Optional[FeatureVocabulary]) -> AnalyzedExtent:
    non_english = is_non_english(extent.text)
    if non_english:
        tagged = TaggedText(tokens=(), has_symbol=False)
    else:
        tagged = pos_tag(tokenize(extent.text))

    features = None
    if vocab is not None:
        features = build_feature_vector(parsed, extent, tagged, vocab)

    if bundle.target is not None and features is not None:
        label, confidence = classify_target(features, bundle.target)
    else:
        label, confidence = bootstrap_target_label(parsed, extent), 1.0
    resolution = resolve_target_span(parsed, extent, label, confidence)

    if non_english:
        category, cat_confidence = UNCATEGORIZED, 1.0
    elif bundle.category is not None and features is not None:
        category, cat_confidence = classify_category(features,
                                                     bundle.category)
    else:
        category = bootstrap_category_label(parsed, extent, tagged)
        cat_confidence = 1.0

    return AnalyzedExtent(extent=extent, tagged=tagged,
                          non_english=non_english, target=resolution,
                          category_label=category,
                          category_confidence=cat_confidence)


def analyze_file(parsed: ParsedFile, bundle: ModelBundle
                 ) -> list[AnalyzedExtent]:
    vocab = bundle.vocabulary()
    extents = extract_extents(parsed, bundle.extent)
    return [analyze_extent(parsed, extent, bundle, vocab)
            for extent in extents]


def record_for(project: str, path: str, parsed: ParsedFile,
               analyzed: AnalyzedExtent) -> CommentRecord:
    extent = analyzed.extent
    snippet, first_line = make_snippet(parsed.text, parsed.line_index,
                                       extent.span.start_line,
                                       extent.span.end_line)
    return CommentRecord(
        project=project,
        path=path,
        span=extent.span,
        text=extent.text,
        snippet=snippet,
        snippet_first_line=first_line,
        language=parsed.language,
        target_label=analyzed.target.label,
        target_span=analyzed.target.span,
        target_kind=analyzed.target.node_kind,
        target_confidence=analyzed.target.confidence,
        category_label=analyzed.category_label,
        category_confidence=analyzed.category_confidence,
    )
