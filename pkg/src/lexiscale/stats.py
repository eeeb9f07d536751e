"""Empirical scaling statistics of an encoded corpus.

Four curves are computed from a word-id sequence:

* the frequency spectrum m(k), number of distinct words seen exactly k times,
  normalized to P(k) = m(k) / Nt;
* the rank profile Z(r), occurrence counts sorted from most to least frequent;
* the vocabulary growth curve N(t), distinct words among the first t tokens;
* the attachment profile phi(k), the mean number of later occurrences of a
  word that occurred k times in an initial fraction rho of the text.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from lexiscale.corpus import EncodedSequence


class EmptyCorpusError(ValueError):
    pass


def _ids(seq: EncodedSequence | np.ndarray) -> np.ndarray:
    ids = seq.ids if isinstance(seq, EncodedSequence) else np.asarray(seq, dtype=np.int64)
    if ids.size == 0:
        raise EmptyCorpusError("empty corpus")
    return ids


def word_counts(seq: EncodedSequence | np.ndarray) -> np.ndarray:
    """Occurrence count of every word id (dense ids assumed)."""
    counts = np.bincount(_ids(seq))
    return counts[counts > 0]


@dataclass(frozen=True)
class FrequencySpectrum:
    k: np.ndarray   # distinct occurrence counts, ascending
    m: np.ndarray   # number of words with exactly that count
    T: int
    Nt: int

    @property
    def probability(self) -> np.ndarray:
        return self.m / self.Nt

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.k.tolist(), self.m.tolist()))

    def series(self) -> dict[int, float]:
        return dict(zip(self.k.tolist(), self.probability.tolist()))


@dataclass(frozen=True)
class RankProfile:
    Z: np.ndarray   # Z[r-1] is the count of the rank-r word

    @property
    def T(self) -> int:
        return int(self.Z.sum())

    @property
    def Nt(self) -> int:
        return int(self.Z.shape[0])

    def series(self, normalize: bool = False) -> dict[int, float]:
        z = self.Z / self.T if normalize else self.Z
        return dict(zip(range(1, self.Nt + 1), z.tolist()))


@dataclass(frozen=True)
class GrowthCurve:
    N: np.ndarray   # N[t-1] is the vocabulary size after t tokens

    @property
    def T(self) -> int:
        return int(self.N.shape[0])

    @property
    def Nt(self) -> int:
        return int(self.N[-1])

    def series(self) -> dict[int, int]:
        return dict(zip(range(1, self.T + 1), self.N.tolist()))


@dataclass(frozen=True)
class AttachmentProfile:
    rho: float
    k: np.ndarray    # Part-I occurrence counts realized, ascending
    phi: np.ndarray  # mean Part-II occurrences per word with that Part-I count
    words: np.ndarray  # number of distinct words behind each phi value

    def as_dict(self) -> dict[int, float]:
        return dict(zip(self.k.tolist(), self.phi.tolist()))

    def series(self) -> dict[int, float]:
        return self.as_dict()


def frequency_spectrum(seq: EncodedSequence | np.ndarray) -> FrequencySpectrum:
    counts = word_counts(seq)
    k, m = np.unique(counts, return_counts=True)
    return FrequencySpectrum(k, m, int(counts.sum()), int(counts.size))


def rank_profile(seq: EncodedSequence | np.ndarray) -> RankProfile:
    # ties carry no word identity: only the multiset of counts is kept
    return RankProfile(np.sort(word_counts(seq))[::-1].copy())


def growth_curve(seq: EncodedSequence | np.ndarray) -> GrowthCurve:
    ids = _ids(seq)
    first_seen = np.zeros(ids.size, dtype=bool)
    _, first = np.unique(ids, return_index=True)
    first_seen[first] = True
    return GrowthCurve(np.cumsum(first_seen, dtype=np.int64))


def attachment_profile(seq: EncodedSequence | np.ndarray, rho: float = 0.5) -> AttachmentProfile:
    """Measure phi(k) with the first ``floor(rho*T)`` tokens as Part I.

    Words that only occur in Part II contribute to no phi(k).
    """
    ids = _ids(seq)
    if not 0.0 < rho < 1.0:
        raise ValueError(f"rho must lie in (0, 1), got {rho}")
    split = math.floor(rho * ids.size)
    if split == 0 or split == ids.size:
        raise ValueError(f"degenerate split at {split} of {ids.size} tokens")
    size = int(ids.max()) + 1
    before = np.bincount(ids[:split], minlength=size)
    after = np.bincount(ids[split:], minlength=size)
    seen = before > 0
    k, inverse, words = np.unique(before[seen], return_inverse=True, return_counts=True)
    later = np.bincount(inverse, weights=after[seen], minlength=k.size)
    return AttachmentProfile(float(rho), k, later / words, words)
