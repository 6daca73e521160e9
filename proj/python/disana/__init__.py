"""Discourse analytics: relevance filtering, sentiment series, topic
clustering and trend/peak/change-point detection over social media corpora.

The compiled core exposes the main operations; the command line tool and
file formats are documented in the repository README.
"""

from disana._core import (
    ChangePointResult,
    IoError,
    Lexicon,
    PeakSet,
    Token,
    TrendResult,
    ValidationError,
    __version__,
    cluster,
    cosine,
    default_penalty,
    detect_peaks,
    mann_kendall,
    pelt,
    reduce,
    run_pipeline,
    tokenize,
)

__all__ = [
    "ChangePointResult",
    "IoError",
    "Lexicon",
    "PeakSet",
    "Token",
    "TrendResult",
    "ValidationError",
    "__version__",
    "cluster",
    "cosine",
    "default_penalty",
    "detect_peaks",
    "mann_kendall",
    "pelt",
    "reduce",
    "run_pipeline",
    "tokenize",
]
