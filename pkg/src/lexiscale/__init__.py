"""Scaling laws of word usage: corpus statistics, log-binned power-law fits,
and a generalized Yule-Simon text-generation model."""

from lexiscale.corpus import (
    CorpusSummary,
    EncodedSequence,
    IngestError,
    RawDocument,
    TokenizerRules,
    decode,
    encode,
    load_document,
    summarize,
    tokenize,
)
from lexiscale.stats import (
    AttachmentProfile,
    FrequencySpectrum,
    GrowthCurve,
    RankProfile,
    attachment_profile,
    frequency_spectrum,
    growth_curve,
    rank_profile,
)
from lexiscale.fitting import (
    FitError,
    FitRegion,
    LogBinning,
    PowerLawFit,
    fit_attachment,
    fit_growth,
    fit_power_law,
    fit_rank,
    fit_spectrum,
    log_resample,
)
from lexiscale.sampler import WeightedSampler
from lexiscale.simulation import (
    ModelParams,
    ProcessState,
    classic_simon,
    innovation_probability,
    simulate,
    step,
)

__version__ = "0.1.0"
