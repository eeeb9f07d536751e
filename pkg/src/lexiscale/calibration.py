"""Fit (k0, kt, kp) of the text model to an observed corpus.

The objective compares log-binned spectrum, rank and growth curves of the
corpus with the per-bin median of an ensemble of simulations. Every
evaluation reuses the same seeds (common random numbers), which makes the
objective a deterministic function of the parameters. Minimization is a
coarse grid followed by Nelder-Mead from the best grid point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from lexiscale.corpus import EncodedSequence
from lexiscale.fitting import DEFAULT_BASE, LogBinning, log_resample
from lexiscale.simulation import ModelParams, simulate_ensemble
from lexiscale.stats import frequency_spectrum, growth_curve, rank_profile

LAWS = ("spectrum", "rank", "growth")
SPECTRUM_MAX_K = 100


def _curves(ids: np.ndarray, T: int, n_rank: int, b: float) -> dict[str, LogBinning]:
    spec = frequency_spectrum(ids)
    rank = rank_profile(ids)
    z = np.zeros(n_rank)
    m = min(n_rank, rank.Nt)
    z[:m] = rank.Z[:m]
    keep = spec.k <= SPECTRUM_MAX_K
    return {
        # spectrum is padded to k = SPECTRUM_MAX_K so bins line up across runs
        "spectrum": log_resample((np.append(spec.k[keep], SPECTRUM_MAX_K),
                                  np.append(spec.probability[keep], 0.0)), b),
        "rank": log_resample((np.arange(1, n_rank + 1), z), b),
        "growth": log_resample((np.arange(1, T + 1), growth_curve(ids).N), b),
    }


@dataclass(frozen=True)
class CalibrationTarget:
    """Binned curves of the observed corpus."""

    T: int
    Nt: int
    base: float
    curves: dict[str, LogBinning]

    @classmethod
    def from_sequence(cls, seq: EncodedSequence | np.ndarray, b: float = DEFAULT_BASE) -> "CalibrationTarget":
        ids = seq.ids if isinstance(seq, EncodedSequence) else np.asarray(seq)
        T = int(ids.size)
        Nt = int(np.unique(ids).size)
        return cls(T, Nt, float(b), _curves(ids, T, Nt, b))


@dataclass(frozen=True)
class Evaluation:
    objective: float
    discrepancies: dict[str, float]


def evaluate(params: ModelParams, target: CalibrationTarget, ensemble_size: int = 4,
             seed_base: int = 0, weights: dict[str, float] | None = None) -> Evaluation:
    if ensemble_size < 1:
        raise ValueError("ensemble_size must be >= 1")
    weights = weights or {law: 1.0 for law in LAWS}
    params = ModelParams(params.k0, params.kt, params.kp, target.T, 0)
    runs = simulate_ensemble(params, range(seed_base, seed_base + ensemble_size))
    sims = [_curves(ids, target.T, target.Nt, target.base) for ids in runs]
    disc = {}
    for law in LAWS:
        observed = target.curves[law].y
        median = np.median(np.stack([s[law].y for s in sims]), axis=0)
        use = (observed > 0) & (median > 0)
        n = int(np.count_nonzero(use))
        if n == 0:
            disc[law] = math.inf
            continue
        resid = np.log(median[use]) - np.log(observed[use])
        disc[law] = float(resid @ resid) / n
    total = sum(weights.values())
    obj = sum(weights[law] * disc[law] for law in LAWS) / total
    return Evaluation(float(obj), disc)


def objective(params: ModelParams, target: CalibrationTarget, ensemble_size: int = 4,
              seed_base: int = 0) -> float:
    """Mean over the three laws of the per-bin squared log discrepancy."""
    return evaluate(params, target, ensemble_size, seed_base).objective


@dataclass(frozen=True)
class Bounds:
    k0: tuple[float, float] = (0.1, 10.0)
    kt: tuple[float, float] = (0.0, 1.0)
    kp: tuple[float, float] = (0.1, 2.0)

    def __post_init__(self):
        for name in ("k0", "kt", "kp"):
            lo, hi = getattr(self, name)
            if not lo < hi:
                raise ValueError(f"empty bounds for {name}")
        if self.k0[0] <= 0 or self.kp[0] < 0 or self.kt[0] < 0:
            raise ValueError("bounds must be non-negative (k0 strictly positive)")

    # optimizer works on the unit cube; k0 is searched on a log scale
    def to_params(self, z) -> tuple[float, float, float]:
        z = np.clip(np.asarray(z, dtype=float), 0.0, 1.0)
        k0 = math.exp(math.log(self.k0[0]) + z[0] * (math.log(self.k0[1]) - math.log(self.k0[0])))
        kt = self.kt[0] + z[1] * (self.kt[1] - self.kt[0])
        kp = self.kp[0] + z[2] * (self.kp[1] - self.kp[0])
        return float(k0), float(kt), float(kp)


@dataclass
class CalibrationResult:
    params: ModelParams
    objective: float
    evaluations: int
    discrepancies: dict[str, float]
    converged: bool
    history: list[float] = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        return {
            "k0": self.params.k0,
            "kt": self.params.kt,
            "kp": self.params.kp,
            "length": self.params.length,
            "objective": self.objective,
            "evaluations": self.evaluations,
            "discrepancies": self.discrepancies,
            "converged": self.converged,
        }


class _BudgetExhausted(Exception):
    pass


def calibrate(target: CalibrationTarget, bounds: Bounds | None = None, budget: int = 300,
              ensemble_size: int = 4, seed_base: int = 0, grid: int = 4,
              xatol: float = 1e-3, fatol: float = 1e-6) -> CalibrationResult:
    """Grid search on a ``grid**3`` lattice of cell centres, then Nelder-Mead.

    Returns the best point seen. ``converged`` is False when the budget ran
    out before the simplex met its tolerances.
    """
    bounds = bounds or Bounds()
    if budget < 50:
        raise ValueError("budget must allow at least 50 evaluations")
    if grid**3 >= budget:
        raise ValueError(f"grid of {grid**3} points leaves no budget for refinement")

    cache: dict[tuple[float, ...], Evaluation] = {}
    history: list[float] = []
    best: dict = {"value": math.inf, "z": None, "eval": None}

    def f(z) -> float:
        key = tuple(np.round(np.clip(z, 0.0, 1.0), 12))
        if key in cache:
            return cache[key].objective
        if len(history) >= budget:
            raise _BudgetExhausted
        k0, kt, kp = bounds.to_params(key)
        ev = evaluate(ModelParams(k0, kt, kp, target.T), target, ensemble_size, seed_base)
        cache[key] = ev
        if ev.objective < best["value"]:
            best.update(value=ev.objective, z=np.array(key), eval=ev)
        history.append(best["value"])
        return ev.objective

    centres = (np.arange(grid) + 0.5) / grid
    converged = False
    try:
        for z in itertools.product(centres, repeat=3):
            f(np.array(z))
        step = 0.5 / grid
        x0 = best["z"]
        simplex = np.vstack([x0] + [np.clip(x0 + step * e, 0, 1) if x0[i] + step <= 1
                                    else np.clip(x0 - step * e, 0, 1)
                                    for i, e in enumerate(np.eye(3))])
        res = minimize(f, x0, method="Nelder-Mead", bounds=[(0.0, 1.0)] * 3,
                       options={"initial_simplex": simplex, "xatol": xatol, "fatol": fatol,
                                "maxfev": 10 * budget})
        converged = bool(res.success)
    except _BudgetExhausted:
        converged = False

    k0, kt, kp = bounds.to_params(best["z"])
    return CalibrationResult(
        params=ModelParams(k0, kt, kp, target.T, seed_base),
        objective=best["value"],
        evaluations=len(history),
        discrepancies=best["eval"].discrepancies,
        converged=converged,
        history=history,
    )
