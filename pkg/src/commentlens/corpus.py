"""Corpus acquisition, comment sampling, and cross-project mining.

A corpus store is a directory of per-project record files plus a summary
document; origins stay on disk so later passes can re-parse the sources
with newer models.
"""

from __future__ import annotations

import json
import logging
import os
import random
import subprocess
import warnings
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Optional

from .categories import POSTCONDITION
from .extents import CommentExtent
from .nlp import extract_verb_noun_pairs, lemmatize
from .pipeline import AnalyzedExtent, ModelBundle, analyze_file, record_for
from .records import CommentRecord, read_records, write_records
from .syntax import EXTENSIONS, ParsedFile, UnparsableFile, parse_source

logger = logging.getLogger(__name__)

MAX_FILE_BYTES = 2 * 1024 * 1024  # generated monsters dominate above this
SUMMARY_NAME = "summary.json"
RECORDS_NAME = "records.jsonl"
CACHE_ENV = "COMMENT_LENS_CACHE"


class FetchFailed(Exception):
    """A remote project could not be cloned."""


class InsufficientComments(Warning):
    pass


@dataclass(frozen=True)
class ProjectRef:
    name: str
    origin: str
    language: str = "all"  # "java" | "python" | "all"
    revision: Optional[str] = None


@dataclass
class ProjectSummary:
    name: str
    origin: str  # resolved local path
    language: str
    files: int = 0
    sloc: int = 0
    comments: int = 0
    extents: int = 0
    skipped_files: int = 0

    def to_json(self) -> dict:
        return {
            "name": self.name, "origin": self.origin,
            "language": self.language, "files": self.files,
            "sloc": self.sloc, "comments": self.comments,
            "extents": self.extents, "skipped_files": self.skipped_files,
        }

    @staticmethod
    def from_json(obj: dict) -> "ProjectSummary":
        return ProjectSummary(**obj)


@dataclass(frozen=True)
class SampleSpec:
    size: int
    per_file_cap: int = 3
    seed: int = 0

    def __post_init__(self) -> None:
        if self.per_file_cap < 1:
            raise ValueError("per-file cap must be at least 1")


def parse_manifest(path: Path, language: str = "all") -> list[ProjectRef]:
    """`name<TAB>origin[<TAB>revision]` per line; # starts a comment."""
    refs: list[ProjectRef] = []
    seen: set[str] = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) < 2:
            raise ValueError(f"bad manifest line: {line!r}")
        name, origin = parts[0], parts[1]
        if name in seen:
            raise ValueError(f"duplicate project name: {name}")
        seen.add(name)
        refs.append(ProjectRef(name=name, origin=origin, language=language,
                               revision=parts[2] if len(parts) > 2 else None))
    return refs


class CorpusStore:
    def __init__(self, root: Path) -> None:
        self.root = Path(root)

    def summary_path(self) -> Path:
        return self.root / SUMMARY_NAME

    def records_path(self, project: str) -> Path:
        return self.root / project / RECORDS_NAME

    def projects(self) -> list[ProjectSummary]:
        path = self.summary_path()
        if not path.exists():
            return []
        obj = json.loads(path.read_text(encoding="utf-8"))
        return [ProjectSummary.from_json(p) for p in obj["projects"]]

    def save_summary(self, projects: list[ProjectSummary]) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        obj = {"projects": [p.to_json() for p in
                            sorted(projects, key=lambda p: p.name)]}
        self.summary_path().write_text(
            json.dumps(obj, indent=2, sort_keys=True) + "\n",
            encoding="utf-8")

    def iter_records(self, project: Optional[str] = None
                     ) -> Iterator[CommentRecord]:
        for summary in self.projects():
            if project is not None and summary.name != project:
                continue
            path = self.records_path(summary.name)
            if path.exists():
                yield from read_records(path)


# --- ingestion -----------------------------------------------------------------

def iter_source_files(root: Path, language: str = "all"
                      ) -> Iterator[tuple[str, Path]]:
    """(relative path, absolute path) for every matching source file."""
    root = Path(root)
    wanted = {ext for ext, lang in EXTENSIONS.items()
              if language in ("all", lang)}
    paths = sorted(p for p in root.rglob("*")
                   if p.is_file() and p.suffix in wanted
                   and ".git" not in p.parts)
    for path in paths:
        yield str(path.relative_to(root)), path


def parse_file(path: Path, file_id: str = "") -> ParsedFile:
    language = EXTENSIONS[Path(path).suffix]
    text = Path(path).read_bytes().decode("utf-8", errors="replace")
    return parse_source(text, language, file_id or str(path))


def _sloc(text: str) -> int:
    return sum(1 for line in text.splitlines() if line.strip())


def _ingest_one(args: tuple[str, str, str]) -> tuple[str, int, int, int,
                                                     list[CommentRecord],
                                                     bool]:
    """Worker: parse one file, return stats + extent records."""
    project, relpath, abspath = args
    path = Path(abspath)
    if path.stat().st_size > MAX_FILE_BYTES:
        return relpath, 0, 0, 0, [], True
    try:
        parsed = parse_file(path, file_id=relpath)
    except UnparsableFile:
        return relpath, 0, 0, 0, [], True
    bundle = ModelBundle()  # rule-based extents; no labels at ingest time
    records = []
    for analyzed in analyze_file(parsed, bundle):
        record = record_for(project, relpath, parsed, analyzed)
        # ingest keeps the inventory label-free; classify enriches later
        records.append(record.with_labels(
            target_label=None, target_span=None, target_kind=None,
            target_confidence=None, category_label=None,
            category_confidence=None))
    return (relpath, _sloc(parsed.text), len(parsed.comments), len(records),
            records, False)


def resolve_origin(ref: ProjectRef, cache_dir: Path) -> Path:
    """Local path as-is; remote origins are cloned with the system git."""
    if "://" in ref.origin or ref.origin.startswith("git@"):
        dest = cache_dir / ref.name
        if not dest.exists():
            cache_dir.mkdir(parents=True, exist_ok=True)
            cmd = ["git", "clone", "--quiet"]
            if ref.revision is None:
                cmd += ["--depth", "1"]
            cmd += [ref.origin, str(dest)]
            result = subprocess.run(cmd, capture_output=True, text=True)
            if result.returncode != 0:
                raise FetchFailed(
                    f"{ref.name}: {result.stderr.strip() or 'git clone failed'}")
        if ref.revision is not None:
            result = subprocess.run(
                ["git", "-C", str(dest), "checkout", "--quiet", ref.revision],
                capture_output=True, text=True)
            if result.returncode != 0:
                raise FetchFailed(f"{ref.name}: cannot checkout "
                                  f"{ref.revision}")
        return dest
    path = Path(ref.origin)
    if not path.is_dir():
        raise FetchFailed(f"{ref.name}: origin {ref.origin!r} is not a "
                          f"directory")
    return path


def default_cache_dir(store_root: Path) -> Path:
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else Path(store_root) / ".cache"


def ingest(refs: Iterable[ProjectRef], store_root: Path,
           jobs: int = 1, cache_dir: Optional[Path] = None) -> CorpusStore:
    """Process every parseable file of every reachable project."""
    store = CorpusStore(store_root)
    cache = Path(cache_dir) if cache_dir else default_cache_dir(store_root)
    summaries: list[ProjectSummary] = []
    for ref in refs:
        try:
            origin = resolve_origin(ref, cache)
        except FetchFailed as exc:
            logger.warning("skipping project: %s", exc)
            continue
        summary = ProjectSummary(name=ref.name, origin=str(origin),
                                 language=ref.language)
        tasks = [(ref.name, rel, str(abspath))
                 for rel, abspath in iter_source_files(origin, ref.language)]
        if jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(_ingest_one, tasks))
        else:
            results = [_ingest_one(task) for task in tasks]
        results.sort(key=lambda r: r[0])
        project_records: list[CommentRecord] = []
        for relpath, sloc, comments, extents, records, skipped in results:
            if skipped:
                summary.skipped_files += 1
                continue
            summary.files += 1
            summary.sloc += sloc
            summary.comments += comments
            summary.extents += extents
            project_records.extend(records)
        (store.root / ref.name).mkdir(parents=True, exist_ok=True)
        write_records(store.records_path(ref.name), project_records)
        summaries.append(summary)
    store.save_summary(summaries)
    return store


# --- sampling --------------------------------------------------------------------

def sample_comments(store: CorpusStore,
                    spec: SampleSpec) -> list[CommentRecord]:
    """Shuffle all extents with the seeded generator, take the first N
    while never using more than the per-file cap from any one file."""
    records = sorted(store.iter_records(),
                     key=lambda r: (r.project, r.path, r.span.start_offset))
    rng = random.Random(spec.seed)
    rng.shuffle(records)
    taken: list[CommentRecord] = []
    per_file: Counter = Counter()
    for record in records:
        if len(taken) >= spec.size:
            break
        key = (record.project, record.path)
        if per_file[key] >= spec.per_file_cap:
            continue
        per_file[key] += 1
        taken.append(record)
    if len(taken) < spec.size:
        warnings.warn(f"only {len(taken)} of {spec.size} requested comments "
                      f"available", InsufficientComments, stacklevel=2)
    return taken


# --- whole-corpus analyses ---------------------------------------------------------

def analyze_store(store: CorpusStore, bundle: ModelBundle
                  ) -> Iterator[tuple[str, str, ParsedFile, AnalyzedExtent]]:
    """Re-parse every stored project and run the full pipeline."""
    for summary in store.projects():
        origin = Path(summary.origin)
        if not origin.is_dir():
            logger.warning("origin missing for %s: %s", summary.name, origin)
            continue
        for relpath, abspath in iter_source_files(origin, summary.language):
            if abspath.stat().st_size > MAX_FILE_BYTES:
                continue
            try:
                parsed = parse_file(abspath, file_id=relpath)
            except UnparsableFile:
                continue
            for analyzed in analyze_file(parsed, bundle):
                yield summary.name, relpath, parsed, analyzed


_worker_bundle: ModelBundle | None = None


def _init_classify_worker(blob: dict) -> None:
    global _worker_bundle
    _worker_bundle = ModelBundle.from_blob(blob)


def _classify_one(args: tuple[str, str, str]) -> tuple[str, str,
                                                       list[CommentRecord]]:
    project, relpath, abspath = args
    records: list[CommentRecord] = []
    try:
        parsed = parse_file(Path(abspath), file_id=relpath)
    except UnparsableFile:
        return project, relpath, records
    bundle = _worker_bundle if _worker_bundle is not None else ModelBundle()
    for analyzed in analyze_file(parsed, bundle):
        records.append(record_for(project, relpath, parsed, analyzed))
    return project, relpath, records


def classify_store(store: CorpusStore, bundle: ModelBundle,
                   out_dir: Path, jobs: int = 1) -> int:
    """Write enriched records for every extent; one file per project."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    tasks: list[tuple[str, str, str]] = []
    for summary in store.projects():
        origin = Path(summary.origin)
        if not origin.is_dir():
            logger.warning("origin missing for %s: %s", summary.name, origin)
            continue
        for relpath, abspath in iter_source_files(origin, summary.language):
            if abspath.stat().st_size > MAX_FILE_BYTES:
                continue
            tasks.append((summary.name, relpath, str(abspath)))

    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs,
                                 initializer=_init_classify_worker,
                                 initargs=(bundle.to_blob(),)) as pool:
            results = list(pool.map(_classify_one, tasks))
    else:
        global _worker_bundle
        _worker_bundle = bundle
        try:
            results = [_classify_one(task) for task in tasks]
        finally:
            _worker_bundle = None
    results.sort(key=lambda r: (r[0], r[1]))

    count = 0
    by_project: dict[str, list[CommentRecord]] = {}
    for project, _, records in results:
        by_project.setdefault(project, []).extend(records)
    for summary in store.projects():
        records = by_project.get(summary.name, [])
        (out_dir / summary.name).mkdir(parents=True, exist_ok=True)
        write_records(out_dir / summary.name / RECORDS_NAME, records)
        count += len(records)
    return count


def project_category_stats(store: CorpusStore, bundle: ModelBundle
                           ) -> list[dict]:
    """Per-project category ratios, largest projects first."""
    totals: dict[str, Counter] = {}
    for project, _, _, analyzed in analyze_store(store, bundle):
        totals.setdefault(project, Counter())[analyzed.category_label] += 1
    rows = []
    for project, counts in totals.items():
        total = sum(counts.values())
        rows.append({
            "project": project,
            "total": total,
            "ratios": {label: counts[label] / total
                       for label in sorted(counts)},
        })
    rows.sort(key=lambda row: (-row["total"], row["project"]))
    return rows


def mine_verb_noun(store: CorpusStore, bundle: ModelBundle,
                   category: str = POSTCONDITION
                   ) -> list[tuple[tuple[str, str], int]]:
    """Verb+noun pairs from extents of one category, counted per project."""
    per_project: dict[str, set[tuple[str, str]]] = {}
    for project, _, _, analyzed in analyze_store(store, bundle):
        if analyzed.category_label != category or analyzed.non_english:
            continue
        pairs = extract_verb_noun_pairs(analyzed.tagged)
        if pairs:
            per_project.setdefault(project, set()).update(pairs)
    counts: Counter = Counter()
    for pairs in per_project.values():
        counts.update(pairs)
    return sorted(counts.items(), key=lambda item: (-item[1], item[0]))


def _match_keys(word: str) -> set[str]:
    lower = word.lower()
    return {lower, lemmatize(lower, "VB"), lemmatize(lower, "NN")}


def grep_classified(store: CorpusStore, bundle: ModelBundle, category: str,
                    words: list[str]
                    ) -> list[tuple[CommentRecord, Optional[str]]]:
    """Records of one category whose text contains all the given words
    (case-insensitive, lemma-tolerant), plus the resolved target text."""
    if not words:
        raise ValueError("word list must be nonempty")
    queries = [_match_keys(w) for w in words]
    hits: list[tuple[CommentRecord, Optional[str]]] = []
    for project, relpath, parsed, analyzed in analyze_store(store, bundle):
        if analyzed.category_label != category:
            continue
        extent_keys: set[str] = set()
        for token in analyzed.tagged.tokens:
            extent_keys.add(token.lower)
            extent_keys.add(lemmatize(token.lower, token.pos))
        if not all(query & extent_keys for query in queries):
            continue
        record = record_for(project, relpath, parsed, analyzed)
        target_text = None
        if analyzed.target.span is not None:
            span = analyzed.target.span
            target_text = parsed.text[span.start_offset:span.end_offset]
        hits.append((record, target_text))
    return hits
