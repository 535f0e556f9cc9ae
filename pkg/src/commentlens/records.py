"""CommentRecord: one analyzed comment extent with provenance, persisted
as newline-delimited JSON."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Iterator, Optional

from .syntax import SourceSpan

SNIPPET_CONTEXT_LINES = 4


@dataclass(frozen=True)
class CommentRecord:
    project: str
    path: str
    span: SourceSpan
    text: str
    snippet: str
    snippet_first_line: int
    language: str = ""
    target_label: Optional[str] = None
    target_span: Optional[SourceSpan] = None
    target_kind: Optional[str] = None
    target_confidence: Optional[float] = None
    category_label: Optional[str] = None
    category_confidence: Optional[float] = None
    annotator: Optional[str] = None
    elapsed_ms: Optional[int] = None

    @property
    def record_id(self) -> str:
        return (f"{self.project}:{self.path}"
                f":{self.span.start_line}:{self.span.start_col}")

    def to_json(self) -> dict:
        obj = {
            "project": self.project,
            "path": self.path,
            "span": self.span.to_json(),
            "text": self.text,
            "snippet": self.snippet,
            "snippet_first_line": self.snippet_first_line,
            "language": self.language,
        }
        if self.target_label is not None:
            obj["target"] = {
                "label": self.target_label,
                "span": (self.target_span.to_json()
                         if self.target_span is not None else None),
                "kind": self.target_kind,
                "confidence": self.target_confidence,
            }
        if self.category_label is not None:
            obj["category"] = {
                "label": self.category_label,
                "confidence": self.category_confidence,
            }
        if self.annotator is not None:
            obj["annotator"] = self.annotator
        if self.elapsed_ms is not None:
            obj["elapsed_ms"] = self.elapsed_ms
        return obj

    @staticmethod
    def from_json(obj: dict) -> "CommentRecord":
        target = obj.get("target") or {}
        category = obj.get("category") or {}
        return CommentRecord(
            project=obj["project"],
            path=obj["path"],
            span=SourceSpan.from_json(obj["span"]),
            text=obj["text"],
            snippet=obj.get("snippet", ""),
            snippet_first_line=obj.get("snippet_first_line", 1),
            language=obj.get("language", ""),
            target_label=target.get("label"),
            target_span=(SourceSpan.from_json(target["span"])
                         if target.get("span") else None),
            target_kind=target.get("kind"),
            target_confidence=target.get("confidence"),
            category_label=category.get("label"),
            category_confidence=category.get("confidence"),
            annotator=obj.get("annotator"),
            elapsed_ms=obj.get("elapsed_ms"),
        )

    def with_labels(self, **kwargs) -> "CommentRecord":
        return replace(self, **kwargs)


def make_snippet(text: str, line_index: list[int], start_line: int,
                 end_line: int,
                 context: int = SNIPPET_CONTEXT_LINES) -> tuple[str, int]:
    """Extent lines plus ``context`` lines before and after."""
    total_lines = len(line_index)
    first = max(1, start_line - context)
    last = min(total_lines, end_line + context)
    start = line_index[first - 1]
    end = line_index[last] if last < total_lines else len(text)
    return text[start:end].rstrip("\n"), first


def write_records(path: Path, records: Iterable[CommentRecord]) -> int:
    count = 0
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record.to_json(), sort_keys=True) + "\n")
            count += 1
    return count


def append_record(path: Path, record: CommentRecord) -> None:
    with open(path, "a", encoding="utf-8") as handle:
        handle.write(json.dumps(record.to_json(), sort_keys=True) + "\n")


def read_records(path: Path) -> Iterator[CommentRecord]:
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                yield CommentRecord.from_json(json.loads(line))
