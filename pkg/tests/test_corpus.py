from __future__ import annotations

import json
from pathlib import Path

import pytest

from commentlens.corpus import (
    CorpusStore, ProjectRef, SampleSpec, ingest, iter_source_files,
    mine_verb_noun, grep_classified, parse_manifest, project_category_stats,
    sample_comments,
)
from commentlens.pipeline import ModelBundle
from commentlens.records import read_records, write_records

TEN_LINE_JAVA = """public class Tiny {
    // initialize the counter
    int count = 0;
    void step() {
        count += 1;
    }
    // reset the counter
    void reset() {
    }
}
"""


@pytest.fixture()
def tiny_store(tmp_path):
    project = tmp_path / "tinyproj"
    project.mkdir()
    (project / "Tiny.java").write_text(TEN_LINE_JAVA, encoding="utf-8")
    refs = [ProjectRef(name="tiny", origin=str(project), language="java")]
    return ingest(refs, tmp_path / "store")


class TestIngest:
    def test_hand_counted_summary(self, tiny_store):
        summary = tiny_store.projects()[0]
        assert summary.files == 1
        assert summary.sloc == 10
        assert summary.comments == 2
        assert summary.extents == 2
        assert summary.skipped_files == 0

    def test_two_local_projects(self, tmp_path, java_project,
                                python_project):
        refs = [
            ProjectRef(name="a", origin=str(java_project), language="java"),
            ProjectRef(name="b", origin=str(python_project),
                       language="python"),
        ]
        store = ingest(refs, tmp_path / "store")
        assert [s.name for s in store.projects()] == ["a", "b"]
        assert all(s.comments > 0 for s in store.projects())

    def test_unreachable_remote_skipped(self, tmp_path, java_project):
        refs = [
            ProjectRef(name="gone",
                       origin="https://invalid.invalid/nope.git"),
            ProjectRef(name="ok", origin=str(java_project),
                       language="java"),
        ]
        store = ingest(refs, tmp_path / "store",
                       cache_dir=tmp_path / "cache")
        assert [s.name for s in store.projects()] == ["ok"]

    def test_unparsable_python_counted(self, tmp_path):
        project = tmp_path / "badproj"
        project.mkdir()
        (project / "bad.py").write_text("def broken(:\n", encoding="utf-8")
        (project / "good.py").write_text("x = 1  # fine\n", encoding="utf-8")
        store = ingest([ProjectRef(name="p", origin=str(project),
                                   language="python")],
                       tmp_path / "store")
        summary = store.projects()[0]
        assert summary.skipped_files == 1
        assert summary.files == 1
        assert summary.comments == 1

    def test_oversized_file_skipped(self, tmp_path):
        project = tmp_path / "bigproj"
        project.mkdir()
        (project / "big.java").write_text(
            "// pad\n" + ("x" * 80 + "\n") * 30000, encoding="utf-8")
        (project / "ok.java").write_text("int x; // ok\n", encoding="utf-8")
        store = ingest([ProjectRef(name="p", origin=str(project),
                                   language="java")], tmp_path / "store")
        summary = store.projects()[0]
        assert summary.skipped_files == 1
        assert summary.files == 1

    def test_parallel_matches_serial(self, tmp_path, java_project):
        refs = [ProjectRef(name="p", origin=str(java_project),
                           language="java")]
        serial = ingest(refs, tmp_path / "s1", jobs=1)
        parallel = ingest(refs, tmp_path / "s2", jobs=2)
        a = (serial.records_path("p")).read_text()
        b = (parallel.records_path("p")).read_text()
        assert a == b

    def test_parallel_classify_matches_serial(self, tmp_path, java_project):
        from commentlens.corpus import classify_store
        refs = [ProjectRef(name="p", origin=str(java_project),
                           language="java")]
        store = ingest(refs, tmp_path / "store")
        n1 = classify_store(store, ModelBundle(), tmp_path / "c1", jobs=1)
        n2 = classify_store(store, ModelBundle(), tmp_path / "c2", jobs=2)
        assert n1 == n2 > 0
        # one enriched record per stored extent
        assert n1 == sum(s.extents for s in store.projects())
        a = (tmp_path / "c1" / "p" / "records.jsonl").read_text()
        b = (tmp_path / "c2" / "p" / "records.jsonl").read_text()
        assert a == b

    def test_records_roundtrip(self, tiny_store, tmp_path):
        records = list(tiny_store.iter_records())
        out = tmp_path / "copy.jsonl"
        write_records(out, records)
        assert list(read_records(out)) == records


class TestManifest:
    def test_parse_with_revision(self, tmp_path):
        path = tmp_path / "m.tsv"
        path.write_text("alpha\t/tmp/a\nbeta\t/tmp/b\tdeadbeef\n")
        refs = parse_manifest(path)
        assert refs[0] == ProjectRef("alpha", "/tmp/a", "all", None)
        assert refs[1].revision == "deadbeef"

    def test_duplicate_name_rejected(self, tmp_path):
        path = tmp_path / "m.tsv"
        path.write_text("a\t/x\na\t/y\n")
        with pytest.raises(ValueError):
            parse_manifest(path)


class TestSampling:
    def test_per_file_cap(self, tmp_path):
        from commentlens.corpus import InsufficientComments
        project = tmp_path / "proj"
        project.mkdir()
        body = "".join(f"// c{i}\nint x{i} = {i};\n\n" for i in range(5))
        (project / "One.java").write_text(
            "public class One { void f() {\n" + body + "} }\n")
        store = ingest([ProjectRef(name="p", origin=str(project),
                                   language="java")], tmp_path / "store")
        with pytest.warns(InsufficientComments):  # cap beats the request
            sample = sample_comments(store, SampleSpec(size=5, seed=1))
        assert len(sample) == 3  # 5 extents in a single file, cap 3

    def test_zero_size(self, demo_store):
        assert sample_comments(demo_store, SampleSpec(size=0, seed=1)) == []

    def test_same_seed_identical(self, demo_store, tmp_path):
        s1 = sample_comments(demo_store, SampleSpec(size=10, seed=42))
        s2 = sample_comments(demo_store, SampleSpec(size=10, seed=42))
        f1, f2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        write_records(f1, s1)
        write_records(f2, s2)
        assert f1.read_bytes() == f2.read_bytes()

    def test_different_seed_differs(self, demo_store):
        s1 = sample_comments(demo_store, SampleSpec(size=10, seed=1))
        s2 = sample_comments(demo_store, SampleSpec(size=10, seed=2))
        assert [r.record_id for r in s1] != [r.record_id for r in s2]

    def test_insufficient_warns_and_returns_all(self, tiny_store):
        from commentlens.corpus import InsufficientComments
        with pytest.warns(InsufficientComments):
            sample = sample_comments(tiny_store, SampleSpec(size=99, seed=0))
        assert len(sample) == 2


class TestMiningOps:
    def test_category_stats_ordering_and_ratios(self, demo_store):
        rows = project_category_stats(demo_store, ModelBundle())
        assert rows == sorted(rows, key=lambda r: (-r["total"],
                                                   r["project"]))
        for row in rows:
            assert row["total"] > 0
            assert sum(row["ratios"].values()) == pytest.approx(1.0)

    def test_single_category_project_ratio_one(self, tmp_path):
        project = tmp_path / "proj"
        project.mkdir()
        (project / "A.java").write_text(
            "public class A { void f() {\n"
            "// create the test data\nint x = make();\n"
            "// clear the buffer\nbuf.clear();\n} }\n")
        store = ingest([ProjectRef(name="p", origin=str(project),
                                   language="java")], tmp_path / "store")
        rows = project_category_stats(store, ModelBundle())
        assert rows[0]["ratios"] == {"Postcondition": 1.0}

    def test_mine_verb_noun_dedups_per_project(self, tmp_path):
        project = tmp_path / "proj"
        project.mkdir()
        body = "".join("// clear the buffer\nbuf.clear();\n"
                       for _ in range(4))
        (project / "A.java").write_text(
            "public class A { void f() {\n" + body + "} }\n")
        store = ingest([ProjectRef(name="p", origin=str(project),
                                   language="java")], tmp_path / "store")
        ranked = mine_verb_noun(store, ModelBundle())
        assert (("clear", "buffer"), 1) in ranked

    def test_mine_counts_across_projects(self, tmp_path):
        root = tmp_path
        refs = []
        for i in range(3):
            project = root / f"proj{i}"
            project.mkdir()
            (project / "A.java").write_text(
                "public class A { void f() {\n"
                "// create test data\nint x = gen();\n} }\n")
            refs.append(ProjectRef(name=f"p{i}", origin=str(project),
                                   language="java"))
        store = ingest(refs, root / "store")
        ranked = dict(mine_verb_noun(store, ModelBundle()))
        assert ranked[("create", "data")] == 3

    def test_grep_finds_clear_buffer_with_target(self, tmp_path):
        project = tmp_path / "proj"
        project.mkdir()
        (project / "A.java").write_text(
            "public class A { void f() {\n"
            "// clear the buffer\n"
            "for (int i = 0; i < n; i++) { b[i] = 0; }\n"
            "} }\n")
        store = ingest([ProjectRef(name="p", origin=str(project),
                                   language="java")], tmp_path / "store")
        hits = grep_classified(store, ModelBundle(), "Postcondition",
                               ["clear", "buffer"])
        assert len(hits) == 1
        record, target_text = hits[0]
        assert "clear the buffer" in record.snippet
        assert target_text.startswith("for (")

    def test_grep_no_match(self, tiny_store):
        assert grep_classified(tiny_store, ModelBundle(), "Postcondition",
                               ["zzzz"]) == []

    def test_grep_category_filter(self, tmp_path):
        project = tmp_path / "proj"
        project.mkdir()
        (project / "A.java").write_text(
            "public class A { void f() {\n"
            "// TODO clear the buffer\nb.clear();\n} }\n")
        store = ingest([ProjectRef(name="p", origin=str(project),
                                   language="java")], tmp_path / "store")
        hits = grep_classified(store, ModelBundle(), "Postcondition",
                               ["clear", "buffer"])
        assert hits == []  # classified Instruction, not Postcondition


def test_iter_source_files_sorted_and_filtered(java_project):
    rels = [rel for rel, _ in iter_source_files(java_project, "java")]
    assert rels == sorted(rels)
    assert all(rel.endswith(".java") for rel in rels)
    assert [r for r, _ in iter_source_files(java_project, "python")] == []
