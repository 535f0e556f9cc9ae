from __future__ import annotations

import pytest

from commentlens.extents import extract_extents
from commentlens.syntax import parse_source
from commentlens.targets import (
    IN_PLACE, LEFT, PARENT, RIGHT, bootstrap_target_label,
    canonical_target_label, looks_like_code, resolve_target_span,
)

FIXTURE = """public class T {
    void run() {
        thread.join();  // Let the job finish.
        // Copy the array.
        for (int i = 0; i < a.length; i++) {
            b[i] = a[i];
        }
        if (obj == null) { // error
            return;
        }
        //System.out.println(x);
    }
}
"""


@pytest.fixture(scope="module")
def analyzed():
    parsed = parse_source(FIXTURE, "java", "T.java")
    extents = extract_extents(parsed)
    by_text = {e.text: e for e in extents}
    return parsed, by_text


class TestBootstrapLabels:
    def test_trailing_comment_is_left(self, analyzed):
        parsed, by_text = analyzed
        assert bootstrap_target_label(
            parsed, by_text["Let the job finish."]) == LEFT

    def test_comment_above_for_is_right(self, analyzed):
        parsed, by_text = analyzed
        assert bootstrap_target_label(
            parsed, by_text["Copy the array."]) == RIGHT

    def test_block_opener_comment_is_parent(self, analyzed):
        parsed, by_text = analyzed
        assert bootstrap_target_label(parsed, by_text["error"]) == PARENT

    def test_commented_out_code_is_in_place(self, analyzed):
        parsed, by_text = analyzed
        extent = by_text["System.out.println(x);"]
        assert bootstrap_target_label(parsed, extent) == IN_PLACE


class TestResolveSpans:
    def test_left_resolves_to_whole_statement(self, analyzed):
        parsed, by_text = analyzed
        res = resolve_target_span(parsed, by_text["Let the job finish."],
                                  LEFT)
        assert res.label == LEFT
        assert parsed.text[res.span.start_offset:res.span.end_offset] == \
            "thread.join();"
        assert res.node_kind == "ExpressionStatement"

    def test_right_resolves_to_for_block(self, analyzed):
        parsed, by_text = analyzed
        res = resolve_target_span(parsed, by_text["Copy the array."], RIGHT)
        assert res.node_kind == "ForStatement"
        text = parsed.text[res.span.start_offset:res.span.end_offset]
        assert text.startswith("for (int i = 0;")
        assert text.endswith("}")

    def test_parent_resolves_to_then_block(self, analyzed):
        parsed, by_text = analyzed
        res = resolve_target_span(parsed, by_text["error"], PARENT)
        assert res.node_kind == "Block"
        text = parsed.text[res.span.start_offset:res.span.end_offset]
        assert text.startswith("{") and text.endswith("}")
        assert "return;" in text

    def test_in_place_has_no_span(self, analyzed):
        parsed, by_text = analyzed
        res = resolve_target_span(parsed, by_text["System.out.println(x);"],
                                  IN_PLACE)
        assert res.label == IN_PLACE
        assert res.span is None

    def test_right_at_end_of_file_falls_back(self):
        parsed = parse_source("int x = 1;\n// trailing note\n", "java",
                              "t.java")
        extent = extract_extents(parsed)[0]
        res = resolve_target_span(parsed, extent, RIGHT)
        assert res.label == IN_PLACE
        assert res.span is None
        assert res.confidence == 0.0

    def test_distant_left_gets_low_confidence(self):
        parsed = parse_source("int x = 1;\n\n\n// far away\nint y;\n",
                              "java", "t.java")
        extent = extract_extents(parsed)[0]
        res = resolve_target_span(parsed, extent, LEFT, confidence=1.0)
        assert res.label == LEFT
        assert res.confidence == pytest.approx(0.5)

    def test_gap_between_left_target_and_extent_is_blank(self, analyzed):
        parsed, by_text = analyzed
        res = resolve_target_span(parsed, by_text["Let the job finish."],
                                  LEFT)
        gap = parsed.text[res.span.end_offset:
                          by_text["Let the job finish."].span.start_offset]
        assert gap.strip() == ""


class TestLooksLikeCode:
    @pytest.mark.parametrize("text", [
        "System.out.println(x);",
        "x = compute(a, b);",
        "return null;",
        "if (a > b) { swap(a, b); }",
        "self.cache = {}",
        "print(value)",
        "foo.bar()",
    ])
    def test_code_detected(self, text):
        assert looks_like_code(text) is True

    @pytest.mark.parametrize("text", [
        "clear the ring buffer",
        "error occurred.",
        "TODO handle unicode",
        "the result is cached for an hour",
        "",
    ])
    def test_prose_not_detected(self, text):
        assert looks_like_code(text) is False


class TestPythonTargets:
    def test_python_trailing_comment_left(self):
        parsed = parse_source("x = do_work()  # grab the result\n",
                              "python", "t.py")
        extent = extract_extents(parsed)[0]
        assert bootstrap_target_label(parsed, extent) == LEFT

    def test_python_block_opener_parent(self):
        text = "if ready:  # fast path\n    run()\n"
        parsed = parse_source(text, "python", "t.py")
        extent = extract_extents(parsed)[0]
        assert bootstrap_target_label(parsed, extent) == PARENT

    def test_python_comment_above_code_right(self):
        text = "# fetch the rows\nrows = query(db)\n"
        parsed = parse_source(text, "python", "t.py")
        extent = extract_extents(parsed)[0]
        assert bootstrap_target_label(parsed, extent) == RIGHT


def test_canonical_labels():
    assert canonical_target_label("in-place") == IN_PLACE
    assert canonical_target_label("Left") == LEFT
    with pytest.raises(ValueError):
        canonical_target_label("Nowhere")
