"""Builders turning corpora and labeled records into training datasets."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Iterable, Iterator, Optional

from .categories import (
    FeatureVocabulary, bootstrap_category_label, build_feature_vector,
    build_vocabulary, canonical_category_label,
)
from .corpus import (
    MAX_FILE_BYTES, CorpusStore, iter_source_files, parse_file,
)
from .extents import (
    CommentExtent, compute_extent_features, extract_extents, rule_tags,
)
from .nlp import TaggedText, is_non_english, pos_tag, tokenize
from .records import CommentRecord
from .syntax import ParsedFile, UnparsableFile
from .targets import bootstrap_target_label, canonical_target_label
from .tree import Dataset, Example

logger = logging.getLogger(__name__)


def iter_store_files(store: CorpusStore
                     ) -> Iterator[tuple[str, str, ParsedFile]]:
    for summary in store.projects():
        origin = Path(summary.origin)
        if not origin.is_dir():
            logger.warning("origin missing for %s", summary.name)
            continue
        for relpath, abspath in iter_source_files(origin, summary.language):
            if abspath.stat().st_size > MAX_FILE_BYTES:
                continue
            try:
                yield summary.name, relpath, parse_file(abspath,
                                                        file_id=relpath)
            except UnparsableFile:
                continue


def extent_dataset(parsed_files: Iterable[ParsedFile]) -> Dataset:
    """IOB examples labeled by the deterministic merge rule."""
    examples: list[Example] = []
    for parsed in parsed_files:
        tags = rule_tags(parsed)
        for index, tag in enumerate(tags):
            examples.append((compute_extent_features(parsed, index), tag))
    return Dataset.from_examples(examples, label_set=("B", "I"))


def extent_dataset_from_store(store: CorpusStore) -> Dataset:
    return extent_dataset(parsed for _, _, parsed in iter_store_files(store))


class LabeledExtent:
    """One training extent with its context and optional gold labels."""

    def __init__(self, parsed: ParsedFile, extent: CommentExtent,
                 target_label: Optional[str] = None,
                 category_label: Optional[str] = None) -> None:
        self.parsed = parsed
        self.extent = extent
        self.target_label = target_label
        self.category_label = category_label
        if is_non_english(extent.text):
            self.tagged = TaggedText(tokens=(), has_symbol=False)
        else:
            self.tagged = pos_tag(tokenize(extent.text))


def bootstrap_items(store: CorpusStore) -> list[LabeledExtent]:
    """All store extents labeled by the bootstrap heuristics."""
    items: list[LabeledExtent] = []
    for _, _, parsed in iter_store_files(store):
        for extent in extract_extents(parsed):
            item = LabeledExtent(parsed, extent)
            item.target_label = bootstrap_target_label(parsed, extent)
            item.category_label = bootstrap_category_label(
                parsed, extent, item.tagged)
            items.append(item)
    return items


def items_from_records(store: CorpusStore,
                       records: Iterable[CommentRecord]
                       ) -> list[LabeledExtent]:
    """Match labeled records back to their extents by path and position."""
    wanted: dict[tuple[str, str], list[CommentRecord]] = {}
    for record in records:
        wanted.setdefault((record.project, record.path), []).append(record)

    origins = {s.name: (Path(s.origin), s.language)
               for s in store.projects()}
    items: list[LabeledExtent] = []
    for (project, relpath), recs in sorted(wanted.items()):
        if project not in origins:
            logger.warning("project %s not in store; skipping %d records",
                           project, len(recs))
            continue
        origin, _ = origins[project]
        path = origin / relpath
        if not path.is_file():
            logger.warning("missing file %s", path)
            continue
        try:
            parsed = parse_file(path, file_id=relpath)
        except UnparsableFile:
            continue
        by_pos = {(e.span.start_line, e.span.start_col): e
                  for e in extract_extents(parsed)}
        for record in recs:
            extent = by_pos.get((record.span.start_line,
                                 record.span.start_col))
            if extent is None:
                logger.warning("no extent at %s:%d:%d", relpath,
                               record.span.start_line, record.span.start_col)
                continue
            items.append(LabeledExtent(
                parsed, extent,
                target_label=(canonical_target_label(record.target_label)
                              if record.target_label else None),
                category_label=(
                    canonical_category_label(record.category_label)
                    if record.category_label else None),
            ))
    return items


def category_dataset(items: list[LabeledExtent], word_cap: int = 200
                     ) -> tuple[Dataset, FeatureVocabulary]:
    """Feature vectors plus the vocabulary the model will be locked to."""
    labeled = [it for it in items if it.category_label is not None]
    vocab = build_vocabulary(
        ([t.surface for t in it.tagged.tokens] for it in labeled),
        word_cap=word_cap)
    examples = [
        (build_feature_vector(it.parsed, it.extent, it.tagged, vocab),
         it.category_label)
        for it in labeled
    ]
    return Dataset.from_examples(examples), vocab


def target_dataset(items: list[LabeledExtent], word_cap: int = 200
                   ) -> tuple[Dataset, FeatureVocabulary]:
    labeled = [it for it in items if it.target_label is not None]
    vocab = build_vocabulary(
        ([t.surface for t in it.tagged.tokens] for it in labeled),
        word_cap=word_cap)
    examples = [
        (build_feature_vector(it.parsed, it.extent, it.tagged, vocab),
         it.target_label)
        for it in labeled
    ]
    return Dataset.from_examples(examples), vocab
