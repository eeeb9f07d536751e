"""Generalized Yule-Simon text model.

Text grows one token at a time. At length t a brand-new word is emitted with
probability ``p(t) = min(1, k0 * t**-kt)``; otherwise an existing word i is
repeated with probability proportional to ``n_i**kp``, where ``n_i`` is its
count so far. ``kt = 0, kp = 1`` is Simon's original process.

Randomness: the seed feeds a ``numpy.random.SeedSequence`` that is split into
two independent PCG64 streams, one for the innovate/reuse decision and one
for picking the reused word. Both streams supply one uniform per step.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from numba import njit

from lexiscale.corpus import EncodedSequence
from lexiscale.sampler import WeightedSampler, fenwick_add, fenwick_build, fenwick_find

RECOMPUTE_EVERY = 1 << 16


@dataclass(frozen=True)
class ModelParams:
    k0: float
    kt: float
    kp: float
    length: int = 10_000
    seed: int = 0

    def __post_init__(self):
        for name in ("k0", "kt", "kp"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.k0 <= 0:
            raise ValueError("k0 must be positive")
        if self.kt < 0:
            raise ValueError("kt must be non-negative")
        if self.kp < 0:
            raise ValueError("kp must be non-negative")
        if self.length < 1:
            raise ValueError("length must be at least 1")

    def with_seed(self, seed: int) -> "ModelParams":
        return replace(self, seed=int(seed))

    def to_json(self) -> dict:
        return {"k0": self.k0, "kt": self.kt, "kp": self.kp, "length": self.length, "seed": self.seed}


BOOK_01 = ModelParams(k0=2.34, kt=0.29, kp=1.14, length=30083)
SPEECH_KBG = ModelParams(k0=3.31, kt=0.40, kp=1.08, length=100_000)


def innovation_probability(t, params: ModelParams):
    """``min(1, k0 * t**-kt)`` for text length ``t >= 1`` (scalar or array)."""
    if np.any(np.asarray(t) < 1):
        raise ValueError("t must be >= 1")
    p = params.k0 * np.asarray(t, dtype=float) ** (-params.kt)
    p = np.minimum(1.0, p)
    return float(p) if np.ndim(p) == 0 else p


def random_streams(seed: int, length: int) -> tuple[np.ndarray, np.ndarray]:
    """Uniforms for the branch decision and for word selection, one per step."""
    branch_ss, select_ss = np.random.SeedSequence(int(seed)).spawn(2)
    u_branch = np.random.Generator(np.random.PCG64(branch_ss)).random(length)
    u_select = np.random.Generator(np.random.PCG64(select_ss)).random(length)
    return u_branch, u_select


@njit(cache=True, nogil=True)
def _run(length, k0, kt, kp, u_branch, u_select, recompute_every):
    ids = np.empty(length, dtype=np.int64)
    counts = np.zeros(length, dtype=np.int64)
    weights = np.zeros(length)
    tree = np.zeros(length + 1)
    # the first token is always new
    ids[0] = 0
    counts[0] = 1
    weights[0] = 1.0
    fenwick_add(tree, 0, 1.0)
    total = 1.0
    vocab = 1
    for t in range(1, length):
        p = k0 * t ** (-kt)
        if u_branch[t] < p:
            i = vocab
            vocab += 1
            counts[i] = 1
            weights[i] = 1.0
            fenwick_add(tree, i, 1.0)
            total += 1.0
        else:
            i = fenwick_find(tree, u_select[t] * total, vocab)
            counts[i] += 1
            w = counts[i] ** kp
            delta = w - weights[i]
            weights[i] = w
            fenwick_add(tree, i, delta)
            total += delta
        ids[t] = i
        if (t + 1) % recompute_every == 0:
            fenwick_build(tree, weights, vocab)
            total = weights[:vocab].sum()
    return ids


def simulate_ids(params: ModelParams) -> np.ndarray:
    u_branch, u_select = random_streams(params.seed, params.length)
    return _run(params.length, float(params.k0), float(params.kt), float(params.kp),
                u_branch, u_select, RECOMPUTE_EVERY)


def simulate(params: ModelParams) -> EncodedSequence:
    """One realization of the model; identical seeds give identical text."""
    ids = simulate_ids(params)
    return EncodedSequence.from_ids(ids, identifier=f"sim-seed{params.seed}", kind="synthetic")


def simulate_ensemble(params: ModelParams, seeds: Sequence[int], workers: int | None = None) -> list[np.ndarray]:
    """Id sequences for several seeds; runs share nothing and execute in threads."""
    runs = [params.with_seed(s) for s in seeds]
    if workers == 1 or len(runs) == 1:
        return [simulate_ids(r) for r in runs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(simulate_ids, runs))


def classic_simon(p_const: float, length: int, seed: int = 0) -> EncodedSequence:
    """Simon's process: constant innovation probability, linear reuse."""
    if not 0 < p_const < 1:
        raise ValueError("p_const must lie in (0, 1)")
    return simulate(ModelParams(k0=p_const, kt=0.0, kp=1.0, length=length, seed=seed))


@dataclass
class ProcessState:
    """Mutable state of a run, advanced token by token with :func:`step`."""

    counts: list[int] = field(default_factory=list)
    ids: list[int] = field(default_factory=list)
    sampler: WeightedSampler = field(default_factory=WeightedSampler)
    innovations: int = 0

    @property
    def t(self) -> int:
        return len(self.ids)

    @classmethod
    def from_counts(cls, counts: Sequence[int], kp: float) -> "ProcessState":
        counts = list(counts)
        ids = [i for i, c in enumerate(counts) for _ in range(c)]
        sampler = WeightedSampler([float(c) ** kp for c in counts])
        return cls(counts, ids, sampler, len(counts))


def step(state: ProcessState, params: ModelParams, u1: float, u2: float) -> ProcessState:
    """Append one token; ``u1`` decides innovation, ``u2`` picks the reused word."""
    t = state.t
    if t == 0 or u1 < params.k0 * t ** (-params.kt):
        i = len(state.counts)
        state.counts.append(1)
        state.sampler.append(1.0)
        state.innovations += 1
    else:
        i = state.sampler.sample(u2)
        state.counts[i] += 1
        state.sampler.update(i, float(state.counts[i]) ** params.kp)
    state.ids.append(i)
    if state.t % RECOMPUTE_EVERY == 0:
        state.sampler.recompute()
    return state


def simulate_stepwise(params: ModelParams) -> ProcessState:
    """Reference run built from :func:`step`; slow but easy to audit."""
    u_branch, u_select = random_streams(params.seed, params.length)
    state = ProcessState(sampler=WeightedSampler(capacity=params.length))
    for t in range(params.length):
        step(state, params, u_branch[t], u_select[t])
    return state
