"""Unseen-species estimators: Good-Toulmin, smoothed Good-Toulmin and classical baselines."""

from ._unseen import (
    Histogram,
    InvalidArgument,
    NumericError,
    SchemeError,
    Smoothing,
    TrialFailure,
    UnseenError,
    __version__,
    auto_params,
    baseline_unseen,
    curve_json,
    estimate_json,
    estimate_unseen,
    good_toulmin,
    ingest,
    nmse_csv,
    sgt_coefficients,
    sgt_estimate,
    simulate,
    truncated_gt,
    verify_json,
)

__all__ = [
    "Histogram",
    "InvalidArgument",
    "NumericError",
    "SchemeError",
    "Smoothing",
    "TrialFailure",
    "UnseenError",
    "__version__",
    "auto_params",
    "baseline_unseen",
    "curve_json",
    "estimate_json",
    "estimate_unseen",
    "good_toulmin",
    "ingest",
    "nmse_csv",
    "sgt_coefficients",
    "sgt_estimate",
    "simulate",
    "truncated_gt",
    "verify_json",
]
