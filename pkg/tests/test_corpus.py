import numpy as np
import pytest
from hypothesis import given, strategies as st

from lexiscale.corpus import (
    EncodedSequence,
    IngestError,
    RawDocument,
    TokenizerRules,
    decode,
    encode,
    load_corpus,
    read_text,
    strip_gutenberg,
    summarize,
    synthetic_word,
    tokenize,
)

words = st.text(alphabet="abcdefghijklmnopqrstuvwxyzé", min_size=1, max_size=6)
token_lists = st.lists(words, max_size=60)


@pytest.mark.parametrize("text, expected", [
    ("The cat the CAT", ["the", "cat", "the", "cat"]),
    ("", []),
    ("don't stop, don't!", ["don't", "stop", "don't"]),
    ("rock'n'roll 42nd street", ["rock'n'roll", "nd", "street"]),
    ("'quoted' words'", ["quoted", "words"]),
    ("whale’s jaw", ["whale's", "jaw"]),
    ("naïve CAFÉ", ["naïve", "café"]),
    ("under_score", ["under", "score"]),
])
def test_tokenize(text, expected):
    assert tokenize(text) == expected


def test_tokenize_without_apostrophes():
    assert tokenize("don't stop", TokenizerRules(keep_apostrophes=False)) == ["don", "t", "stop"]


def test_tokenize_document():
    doc = RawDocument("d", "One two", "speech")
    assert tokenize(doc) == ["one", "two"]


def test_document_validation():
    with pytest.raises(IngestError):
        RawDocument("", "x")
    with pytest.raises(IngestError):
        RawDocument("d", "x", "poem")


def test_strip_gutenberg():
    text = ("Header junk\n*** START OF THE PROJECT GUTENBERG EBOOK ALICE ***\n"
            "Body words\n*** END OF THE PROJECT GUTENBERG EBOOK ALICE ***\nLicense text")
    assert strip_gutenberg(text).split() == ["Body", "words"]
    assert tokenize(text, TokenizerRules(strip_gutenberg=True)) == ["body", "words"]
    assert "license" in tokenize(text)


@pytest.mark.parametrize("tokens, ids, T, Nt", [
    (["a", "b", "a", "c"], [0, 1, 0, 2], 4, 3),
    ([], [], 0, 0),
    (["x", "x", "x"], [0, 0, 0], 3, 1),
])
def test_encode(tokens, ids, T, Nt):
    seq = encode(tokens)
    assert seq.ids.tolist() == ids
    assert (seq.T, seq.Nt) == (T, Nt)


def test_summarize():
    s = summarize(encode(["a", "b", "a", "c"], "doc", "speech"))
    assert s.to_json() == {"id": "doc", "kind": "speech", "T": 4, "Nt": 3}


def test_encoded_is_immutable():
    seq = encode(["a", "b"])
    with pytest.raises(ValueError):
        seq.ids[0] = 5


@given(token_lists)
def test_round_trip(tokens):
    assert decode(encode(tokens)) == tokens


@given(token_lists)
def test_vocabulary_bounds(tokens):
    seq = encode(tokens)
    assert seq.Nt <= seq.T
    assert (seq.Nt == seq.T) == (len(set(tokens)) == len(tokens))
    assert all(i < seq.Nt for i in seq.ids.tolist())
    # ids appear in first-appearance order
    firsts = [i for k, i in enumerate(seq.ids.tolist()) if i not in seq.ids.tolist()[:k]]
    assert firsts == list(range(seq.Nt))


@given(st.text(max_size=200))
def test_tokenizer_idempotent(text):
    tokens = tokenize(text)
    assert tokenize(" ".join(tokens)) == tokens
    assert all(t and not any(c.isspace() for c in t) and t == t.casefold() for t in tokens)


def test_synthetic_words_are_distinct_letters():
    names = [synthetic_word(i) for i in range(2000)]
    assert names[:3] == ["a", "b", "c"] and names[25:28] == ["z", "aa", "ab"]
    assert len(set(names)) == 2000
    assert tokenize(" ".join(names)) == names


def test_from_ids_relabels_in_first_appearance_order():
    seq = EncodedSequence.from_ids([7, 3, 7, 9])
    assert seq.ids.tolist() == [0, 1, 0, 2]
    assert decode(seq) == ["a", "b", "a", "c"]


def test_invalid_utf8_reports_offset(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_bytes(b"hello \xff world")
    with pytest.raises(IngestError, match="byte offset 6"):
        read_text(path)


def test_load_corpus(tmp_path):
    path = tmp_path / "small.txt"
    path.write_text("To be, or not to be.", encoding="utf-8")
    seq = load_corpus(path)
    assert seq.identifier == "small"
    assert (seq.T, seq.Nt) == (6, 4)
