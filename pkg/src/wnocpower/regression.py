"""Exponential trend fitting for figure-of-merit surveys.

All three block metrics degrade roughly exponentially with frequency, so
the single model family is y(f) = a * exp(b * f), fitted by ordinary
least squares on (f, ln y). The survey sets are small (typically 5 to 15
best-in-class points), which makes the log-linearized fit both adequate
and fully reproducible; no nonlinear refinement is applied.

Goodness of fit is reported in both domains because a log-domain fit can
look very different against the raw metric values: ``r_squared_log`` is
computed on (ln y, ln y_hat) and ``r_squared_linear`` on (y, y_hat).

Fitted models persist as a small JSON document together with the block
kind, the selection-strategy tag, and a digest of the source dataset, so
every downstream number is traceable to the data it came from.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .survey import BlockKind
from .units import FrequencyGhz


class ZeroVarianceError(ValueError):
    """R-squared is undefined: the observations have zero variance."""


@dataclass(frozen=True)
class ExpFitModel:
    """Fitted exponential trend y(f) = a * exp(b * f).

    ``a`` is in the metric's own units, ``b`` in 1/GHz. The validity range
    [valid_lo, valid_hi] is the closed frequency span of the fitted
    points; evaluation outside it is allowed but flagged.
    """

    a: float
    b: float
    valid_lo: FrequencyGhz
    valid_hi: FrequencyGhz
    r_squared_linear: float
    r_squared_log: float
    n_points: int
    strategy: str

    def __post_init__(self) -> None:
        if self.a <= 0.0 or not math.isfinite(self.a):
            raise ValueError(f"amplitude must be finite and > 0 (got {self.a})")
        if not math.isfinite(self.b):
            raise ValueError(f"rate must be finite (got {self.b})")
        if self.valid_lo.value >= self.valid_hi.value:
            raise ValueError(
                f"validity range inverted: [{self.valid_lo.value}, {self.valid_hi.value}] GHz"
            )
        if self.n_points < 2:
            raise ValueError(f"a fit requires >= 2 points (got {self.n_points})")
        if self.r_squared_linear > 1.0 or self.r_squared_log > 1.0:
            raise ValueError("R-squared cannot exceed 1")


@dataclass(frozen=True)
class FitDiagnostics:
    """Per-point fit residuals (log domain) and predictions (linear domain)."""

    residuals_log: tuple[float, ...]
    predicted: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.residuals_log) != len(self.predicted):
            raise ValueError("diagnostics arrays must have equal length")


def r_squared(observed: Sequence[float], predicted: Sequence[float]) -> float:
    """Coefficient of determination, 1 - SS_res / SS_tot.

    SS_tot is taken about the mean of ``observed``. The value is 1 for a
    perfect fit, 0 for a fit no better than the mean, and negative for a
    worse one. Constant observations make the quantity undefined and
    raise :class:`ZeroVarianceError` rather than returning a number.
    """
    if len(observed) != len(predicted) or len(observed) == 0:
        raise ValueError("observed and predicted must have equal non-zero length")
    obs = np.asarray(observed, dtype=float)
    pred = np.asarray(predicted, dtype=float)
    ss_tot = float(((obs - obs.mean()) ** 2).sum())
    if ss_tot == 0.0:
        raise ZeroVarianceError("observations have zero variance; R-squared undefined")
    ss_res = float(((obs - pred) ** 2).sum())
    return 1.0 - ss_res / ss_tot


def fit_exponential(
    points: Sequence[tuple[FrequencyGhz, float]],
    strategy: str = "unspecified",
) -> tuple[ExpFitModel, FitDiagnostics]:
    """Fit y(f) = a * exp(b * f) to (frequency, metric) points.

    Ordinary least squares on (f, ln y). Requires at least two points at
    two distinct frequencies and strictly positive metrics. ``strategy``
    is the frontier-selection tag recorded in the model for provenance.

    Returns the model plus per-point diagnostics.
    """
    freqs = np.asarray([f.value for f, _ in points], dtype=float)
    metrics = np.asarray([m for _, m in points], dtype=float)
    n_distinct = len(np.unique(freqs))
    if n_distinct < 2:
        raise ValueError(
            f"exponential fit needs >= 2 distinct frequencies (got {n_distinct})"
        )
    if np.any(metrics <= 0.0) or not np.all(np.isfinite(metrics)):
        bad = metrics[~(np.isfinite(metrics) & (metrics > 0.0))][0]
        raise ValueError(f"metrics must be finite and > 0 for a log fit (got {bad})")

    log_y = np.log(metrics)
    df = freqs - freqs.mean()
    b = float((df * (log_y - log_y.mean())).sum() / (df ** 2).sum())
    ln_a = float(log_y.mean() - b * freqs.mean())
    a = math.exp(ln_a)

    log_pred = ln_a + b * freqs
    pred = np.exp(log_pred)
    # Zero variance here implies the fit reproduces the constant exactly
    # (b and the residuals are then exactly zero), so both R-squared
    # variants degenerate to a perfect score.
    try:
        r2_log = r_squared(log_y.tolist(), log_pred.tolist())
    except ZeroVarianceError:
        r2_log = 1.0
    try:
        r2_lin = r_squared(metrics.tolist(), pred.tolist())
    except ZeroVarianceError:
        r2_lin = 1.0

    model = ExpFitModel(
        a=a,
        b=b,
        valid_lo=FrequencyGhz(float(freqs.min())),
        valid_hi=FrequencyGhz(float(freqs.max())),
        r_squared_linear=r2_lin,
        r_squared_log=r2_log,
        n_points=len(points),
        strategy=strategy,
    )
    diagnostics = FitDiagnostics(
        residuals_log=tuple((log_y - log_pred).tolist()),
        predicted=tuple(pred.tolist()),
    )
    return model, diagnostics


def evaluate_fit(model: ExpFitModel, f: FrequencyGhz) -> tuple[float, bool]:
    """Evaluate the fitted trend at ``f``.

    Returns (metric value, extrapolated flag). The flag is set exactly
    when f lies outside the closed validity range; the value is still
    computed, so out-of-range use is possible but never silent.
    """
    value = model.a * math.exp(model.b * f.value)
    extrapolated = f.value < model.valid_lo.value or f.value > model.valid_hi.value
    return value, extrapolated


# --- persistence ----------------------------------------------------------


def model_to_dict(block: BlockKind, model: ExpFitModel, source_digest: str) -> dict:
    """JSON-ready document for a fitted block model."""
    return {
        "block": block.token,
        "a": model.a,
        "b": model.b,
        "valid_lo_ghz": model.valid_lo.value,
        "valid_hi_ghz": model.valid_hi.value,
        "r2_linear": model.r_squared_linear,
        "r2_log": model.r_squared_log,
        "n_points": model.n_points,
        "strategy": model.strategy,
        "source_dataset_digest": source_digest,
    }


def model_from_dict(doc: dict) -> tuple[BlockKind, ExpFitModel, str]:
    try:
        block = BlockKind.from_token(doc["block"])
        model = ExpFitModel(
            a=float(doc["a"]),
            b=float(doc["b"]),
            valid_lo=FrequencyGhz(float(doc["valid_lo_ghz"])),
            valid_hi=FrequencyGhz(float(doc["valid_hi_ghz"])),
            r_squared_linear=float(doc["r2_linear"]),
            r_squared_log=float(doc["r2_log"]),
            n_points=int(doc["n_points"]),
            strategy=str(doc["strategy"]),
        )
        digest = str(doc["source_dataset_digest"])
    except KeyError as exc:
        raise ValueError(f"model document is missing field {exc.args[0]!r}") from None
    return block, model, digest


def save_model(path, block: BlockKind, model: ExpFitModel, source_digest: str) -> None:
    """Write a model JSON file. Output is byte-deterministic for fixed inputs."""
    doc = model_to_dict(block, model, source_digest)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_model(path) -> tuple[BlockKind, ExpFitModel, str]:
    """Read a model JSON file back as (block kind, model, source digest)."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise ValueError(f"{path}: model document must be a JSON object")
    return model_from_dict(doc)
