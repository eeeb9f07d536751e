"""Corpus ingestion: raw text -> tokens -> dense integer-encoded sequence."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Literal, Sequence

import numpy as np

Kind = Literal["book", "speech", "synthetic"]
KINDS: tuple[str, ...] = ("book", "speech", "synthetic")

_LETTERS = r"[^\W\d_]+"
_WORD_WITH_APOSTROPHES = re.compile(rf"{_LETTERS}(?:'{_LETTERS})*")
_WORD_PLAIN = re.compile(_LETTERS)
# typographic apostrophes are folded onto ASCII before matching
_APOSTROPHES = str.maketrans({"’": "'", "ʼ": "'", "＇": "'"})

_GUTENBERG_START = re.compile(r"^\*{3}\s*START OF (THE|THIS) PROJECT GUTENBERG.*$", re.M | re.I)
_GUTENBERG_END = re.compile(r"^\*{3}\s*END OF (THE|THIS) PROJECT GUTENBERG.*$", re.M | re.I)


class IngestError(ValueError):
    pass


@dataclass(frozen=True)
class RawDocument:
    identifier: str
    content: str
    kind: Kind = "book"

    def __post_init__(self):
        if not self.identifier:
            raise IngestError("document identifier must be nonempty")
        if self.kind not in KINDS:
            raise IngestError(f"unknown document kind {self.kind!r}")


@dataclass(frozen=True)
class TokenizerRules:
    """Options for :func:`tokenize`.

    ``keep_apostrophes`` keeps word-internal apostrophes (``don't`` stays one
    token); otherwise apostrophes separate. ``strip_gutenberg`` drops the
    Project Gutenberg header and license footer before tokenizing.
    """

    keep_apostrophes: bool = True
    strip_gutenberg: bool = False


def strip_gutenberg(text: str) -> str:
    start = _GUTENBERG_START.search(text)
    if start:
        text = text[start.end():]
    end = _GUTENBERG_END.search(text)
    if end:
        text = text[: end.start()]
    return text


def tokenize(doc: RawDocument | str, rules: TokenizerRules | None = None) -> list[str]:
    """Split text into lower-cased words.

    A word is a maximal run of letters, optionally joined by single internal
    apostrophes. Digits, punctuation and whitespace separate words.

    >>> tokenize("don't stop, don't!")
    ["don't", 'stop', "don't"]
    """
    rules = rules or TokenizerRules()
    text = doc.content if isinstance(doc, RawDocument) else doc
    if rules.strip_gutenberg:
        text = strip_gutenberg(text)
    text = text.translate(_APOSTROPHES)
    pattern = _WORD_WITH_APOSTROPHES if rules.keep_apostrophes else _WORD_PLAIN
    return [m.group(0).casefold() for m in pattern.finditer(text)]


@dataclass(frozen=True, eq=False)
class EncodedSequence:
    """A corpus as dense word ids assigned in order of first appearance.

    ``vocabulary[i]`` is the word with id ``i``; ``ids`` is a read-only int64
    array of length ``T``.
    """

    ids: np.ndarray
    vocabulary: tuple[str, ...]
    identifier: str = "corpus"
    kind: Kind = "book"
    index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        ids = np.asarray(self.ids, dtype=np.int64)
        ids.setflags(write=False)
        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "index", {w: i for i, w in enumerate(self.vocabulary)})

    @property
    def T(self) -> int:
        return int(self.ids.shape[0])

    @property
    def Nt(self) -> int:
        return len(self.vocabulary)

    def __len__(self) -> int:
        return self.T

    def __eq__(self, other):
        if not isinstance(other, EncodedSequence):
            return NotImplemented
        return self.vocabulary == other.vocabulary and np.array_equal(self.ids, other.ids)

    @classmethod
    def from_ids(cls, ids: Sequence[int] | np.ndarray, identifier: str = "synthetic",
                 kind: Kind = "synthetic") -> "EncodedSequence":
        """Wrap an id sequence whose words carry no spelling (e.g. simulated text).

        Ids are re-densified in first-appearance order and words are named with
        :func:`synthetic_word`.
        """
        ids = np.asarray(ids, dtype=np.int64)
        dense = _first_appearance_relabel(ids)
        nt = int(dense.max()) + 1 if dense.size else 0
        return cls(dense, tuple(synthetic_word(i) for i in range(nt)), identifier, kind)


def _first_appearance_relabel(ids: np.ndarray) -> np.ndarray:
    if ids.size == 0:
        return ids.copy()
    uniq, first, inverse = np.unique(ids, return_index=True, return_inverse=True)
    order = np.argsort(first, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    return rank[inverse].astype(np.int64)


def synthetic_word(i: int) -> str:
    """Bijective base-26 letter name for id ``i`` (0 -> 'a', 25 -> 'z', 26 -> 'aa').

    Letters only, so simulated corpora survive a write/tokenize round trip.
    """
    chars = []
    n = i + 1
    while n:
        n, rem = divmod(n - 1, 26)
        chars.append(chr(ord("a") + rem))
    return "".join(reversed(chars))


def encode(tokens: Iterable[str], identifier: str = "corpus", kind: Kind = "book") -> EncodedSequence:
    index: dict[str, int] = {}
    ids = [index.setdefault(tok, len(index)) for tok in tokens]
    return EncodedSequence(np.array(ids, dtype=np.int64), tuple(index), identifier, kind)


def decode(seq: EncodedSequence) -> list[str]:
    vocab = seq.vocabulary
    return [vocab[i] for i in seq.ids.tolist()]


@dataclass(frozen=True)
class CorpusSummary:
    identifier: str
    kind: str
    T: int
    Nt: int

    def to_json(self) -> dict:
        return {"id": self.identifier, "kind": self.kind, "T": self.T, "Nt": self.Nt}


def summarize(seq: EncodedSequence) -> CorpusSummary:
    return CorpusSummary(seq.identifier, seq.kind, seq.T, seq.Nt)


def read_text(path: str | Path) -> str:
    data = Path(path).read_bytes()
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise IngestError(f"{path}: invalid UTF-8 at byte offset {exc.start}") from exc


def load_document(path: str | Path, kind: Kind = "book", identifier: str | None = None) -> RawDocument:
    path = Path(path)
    return RawDocument(identifier or path.stem, read_text(path), kind)


def load_corpus(path: str | Path, rules: TokenizerRules | None = None, kind: Kind = "book",
                identifier: str | None = None) -> EncodedSequence:
    doc = load_document(path, kind, identifier)
    return encode(tokenize(doc, rules), doc.identifier, doc.kind)
