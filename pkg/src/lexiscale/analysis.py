"""One-call analysis of a corpus: the four curves and their power-law fits."""

from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass, field
from pathlib import Path

from lexiscale.corpus import EncodedSequence, summarize
from lexiscale.fitting import (
    DEFAULT_BASE,
    GROWTH_REGION,
    RANK_REGION,
    SPECTRUM_REGION,
    FitError,
    FitRegion,
    fit_attachment,
    fit_growth,
    fit_rank,
    fit_spectrum,
)
from lexiscale.stats import attachment_profile, frequency_spectrum, growth_curve, rank_profile

CURVE_HEADERS = {
    "spectrum": ("k", "P(k)"),
    "zipf": ("r", "Z(r)"),
    "heaps": ("t", "N(t)"),
    "pa": ("k", "phi(k)"),
}


@dataclass(frozen=True)
class AnalysisSettings:
    base: float = DEFAULT_BASE
    spectrum_region: FitRegion = SPECTRUM_REGION
    rank_region: FitRegion = RANK_REGION
    growth_region: FitRegion = GROWTH_REGION
    rho: float = 0.5
    normalize_rank: bool = False

    def to_json(self) -> dict:
        d = asdict(self)
        for key in ("spectrum_region", "rank_region", "growth_region"):
            d[key] = getattr(self, key).to_json()
        return d


@dataclass
class Analysis:
    report: dict
    curves: dict[str, dict] = field(repr=False)


def _fit_or_error(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs), None
    except FitError as exc:
        return None, str(exc)


def analyze_sequence(seq: EncodedSequence, settings: AnalysisSettings | None = None) -> Analysis:
    settings = settings or AnalysisSettings()
    spectrum = frequency_spectrum(seq)
    rank = rank_profile(seq)
    growth = growth_curve(seq)
    fits = {
        "beta": _fit_or_error(fit_spectrum, spectrum, settings.spectrum_region, settings.base),
        "alpha": _fit_or_error(fit_rank, rank, settings.rank_region, settings.base),
        "lambda": _fit_or_error(fit_growth, growth, settings.growth_region, settings.base),
    }
    try:
        pa = attachment_profile(seq, settings.rho)
    except ValueError as exc:
        pa = None
        fits["phi"] = (None, str(exc))
    else:
        fits["phi"] = _fit_or_error(fit_attachment, pa)

    report = summarize(seq).to_json()
    for name, (fit, err) in fits.items():
        report[name] = fit.exponent if fit else None
    report["r2"] = {name: (fit.r2 if fit else None) for name, (fit, _) in fits.items()}
    report["fits"] = {name: fit.to_json() for name, (fit, _) in fits.items() if fit}
    errors = {name: err for name, (_, err) in fits.items() if err}
    if errors:
        report["fit_errors"] = errors

    curves = {
        "spectrum": spectrum.series(),
        "zipf": rank.series(normalize=settings.normalize_rank),
        "heaps": growth.series(),
        "pa": pa.series() if pa is not None else {},
    }
    return Analysis(report, curves)


def curve_csv(curve: dict, name: str) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CURVE_HEADERS[name])
    for x, y in curve.items():
        writer.writerow((x, repr(y) if isinstance(y, float) else y))
    return buf.getvalue()


def write_curves(analysis: Analysis, directory: Path) -> list[Path]:
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, curve in analysis.curves.items():
        path = directory / f"{name}.csv"
        path.write_text(curve_csv(curve, name), encoding="utf-8")
        written.append(path)
    return written
