from __future__ import annotations

from importlib import resources

from hypothesis import given, settings
from hypothesis import strategies as st

from commentlens.nlp import (
    ALL_TAGS, EMPTY_TAG, extract_verb_noun_pairs, has_symbol, is_non_english,
    lemmatize, pos_tag, tokenize,
)


class TestTokenize:
    def test_terminal_punctuation_separated(self):
        assert tokenize("clear the ring buffer.") == [
            "clear", "the", "ring", "buffer", "."]

    def test_empty(self):
        assert tokenize("") == []

    def test_code_tokens_preserved(self):
        assert tokenize("call foo.bar() twice") == [
            "call", "foo.bar()", "twice"]

    def test_camel_case_preserved(self):
        assert tokenize("wantsPackagePrefix, really") == [
            "wantsPackagePrefix,", "really"]

    def test_multiple_trailing_punctuation(self):
        assert tokenize("done?!") == ["done", "?", "!"]


class TestPosTag:
    def test_sentence_initial_imperative(self):
        tags = pos_tag(["clear", "the", "buffer"]).tags()
        assert tags == ["VB", "DT", "NN"]

    def test_lexicon_and_suffix(self):
        tags = pos_tag(["error", "occurred"]).tags()
        assert tags == ["NN", "VBD"]

    def test_unknown_uppercase_defaults_nn(self):
        assert pos_tag(["TODO"]).tags() == ["NN"]

    def test_output_length_and_totality(self):
        tokens = tokenize("set x to 42 when ready; see notes.")
        tagged = pos_tag(tokens)
        assert len(tagged.tokens) == len(tokens)
        assert all(t.pos for t in tagged.tokens)

    def test_empty_text_sentinel(self):
        tagged = pos_tag([])
        assert tagged.first_tag() == EMPTY_TAG
        assert tagged.first_word() == EMPTY_TAG

    def test_tags_come_from_closed_set(self):
        tokens = tokenize("fetch 10 items from the cache, then stop.")
        for token in pos_tag(tokens).tokens:
            assert token.pos in ALL_TAGS

    def test_first_token_accuracy_on_bundled_sample(self):
        data = (resources.files("commentlens.nlp") / "data"
                / "tagged_sample.txt").read_text(encoding="utf-8")
        lines = [l for l in data.splitlines()
                 if l.strip() and not l.startswith("#")]
        assert len(lines) >= 200
        hits = 0
        for line in lines:
            pairs = [tok.rsplit("/", 1) for tok in line.split()]
            words = [p[0] for p in pairs]
            gold = [p[1] for p in pairs]
            predicted = pos_tag(words).tags()
            assert len(predicted) == len(gold)
            if predicted[0] == gold[0]:
                hits += 1
        assert hits / len(lines) >= 0.85


class TestHasSymbol:
    def test_internal_uppercase(self):
        assert has_symbol("wantsPackagePrefix") is True

    def test_plain_sentence_false(self):
        assert has_symbol("clear the ring buffer.") is False

    def test_empty_false(self):
        assert has_symbol("") is False

    def test_brackets_and_operators(self):
        assert has_symbol("a[i] = b") is True
        assert has_symbol("x < y") is True

    def test_identifier_punctuation(self):
        assert has_symbol("use foo_bar here") is True
        assert has_symbol("see foo.bar for details") is True

    @given(st.text(alphabet=" \t\n", max_size=5),
           st.text(alphabet=" \t\n", max_size=5))
    @settings(max_examples=30, deadline=None)
    def test_whitespace_invariance(self, lead, trail):
        for text in ("clear the buffer", "wantsPackagePrefix", "x = 1"):
            assert has_symbol(lead + text + trail) == has_symbol(text)


class TestVerbNounPairs:
    def test_head_noun_of_run(self):
        pairs = extract_verb_noun_pairs(pos_tag(tokenize(
            "create some test data")))
        assert pairs == [("create", "data")]

    def test_do_nothing(self):
        pairs = extract_verb_noun_pairs(pos_tag(tokenize("do nothing")))
        assert pairs == [("do", "nothing")]

    def test_no_verb_no_pairs(self):
        assert extract_verb_noun_pairs(pos_tag(tokenize(
            "the quick result"))) == []

    def test_verb_precedes_noun(self):
        tagged = pos_tag(tokenize("throw an exception and set the flag"))
        pairs = extract_verb_noun_pairs(tagged)
        assert ("throw", "exception") in pairs
        assert ("set", "flag") in pairs
        for verb, noun in pairs:
            verb_idx = next(t.index for t in tagged.tokens
                            if lemmatize(t.lower, t.pos) == verb)
            noun_idx = next(t.index for t in tagged.tokens
                            if lemmatize(t.lower, t.pos) == noun)
            assert verb_idx < noun_idx

    def test_inflected_forms_lemmatized(self):
        pairs = extract_verb_noun_pairs(pos_tag(tokenize(
            "creates temporary files")))
        assert pairs == [("create", "file")]


class TestLemmatize:
    def test_verb_forms(self):
        assert lemmatize("created", "VBD") == "create"
        assert lemmatize("copies", "VBZ") == "copy"
        assert lemmatize("running", "VBG") == "run"
        assert lemmatize("stopped", "VBD") == "stop"
        assert lemmatize("fixes", "VBZ") == "fix"

    def test_noun_forms(self):
        assert lemmatize("buffers", "NNS") == "buffer"
        assert lemmatize("entries", "NNS") == "entry"
        assert lemmatize("classes", "NNS") == "class"
        assert lemmatize("status", "NN") == "status"

    def test_ing_nouns_not_stripped(self):
        assert lemmatize("nothing", "NN") == "nothing"
        assert lemmatize("anything", "NN") == "anything"


class TestNonEnglish:
    def test_mostly_cjk_detected(self):
        assert is_non_english("这是中文注释") is True

    def test_english_not_detected(self):
        assert is_non_english("clear the buffer") is False

    def test_mixed_below_threshold(self):
        assert is_non_english("clear the café buffer now") is False

    def test_empty_false(self):
        assert is_non_english("") is False
