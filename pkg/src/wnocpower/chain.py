"""TX front-end chain composition and design-space exploration.

The chain is mixer (IF to RF upconversion, driven by the oscillator LO)
followed by an optional PA; the mixer output level and the PA input
level are therefore one and the same parameter. Total DC power is the
plain sum of the three block draws: the oscillator's RF output is what
it delivers to the LO port, and the surveyed mixer figures already
include their LO-drive and bias power, so nothing is double counted.

On top of single-point breakdowns the module provides frequency sweeps,
a grid-search operating-frequency recommendation, and a per-frequency
dominant-block report.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace
from typing import Iterator, Sequence

from .blocks import MixerModel, OscModel, PaModel, mixer_dc_power, osc_dc_power, pa_dc_power
from .survey import BlockKind
from .units import FrequencyGhz, PowerDbm, PowerMilliwatt


class NoAdmissiblePointError(ValueError):
    """Every grid point needs extrapolation and extrapolation was not allowed."""


@dataclass(frozen=True)
class ChainConfig:
    """One operating point of the TX chain.

    ``p_mixer_out`` doubles as the PA input. ``p_pa_out`` absent means
    the chain has no PA (a zero-gain stage is pointless) and the chain
    output equals the mixer output.
    """

    frequency: FrequencyGhz
    p_mixer_out: PowerDbm
    p_if_in: PowerDbm = PowerDbm(-5.0)
    p_pa_out: PowerDbm | None = None
    p_osc_rf: PowerDbm = PowerDbm(0.0)

    def __post_init__(self) -> None:
        if self.p_pa_out is not None and self.p_pa_out.value <= self.p_mixer_out.value:
            raise ValueError(
                f"PA output ({self.p_pa_out.value} dBm) must exceed mixer output "
                f"({self.p_mixer_out.value} dBm); omit p_pa_out for a PA-less chain"
            )


@dataclass(frozen=True)
class PowerBreakdown:
    """Per-block DC power of one chain evaluation, with shares and flags."""

    pa_mw: PowerMilliwatt
    osc_mw: PowerMilliwatt
    mixer_mw: PowerMilliwatt
    total_mw: PowerMilliwatt
    pa_fraction: float
    osc_fraction: float
    mixer_fraction: float
    pa_extrapolated: bool
    osc_extrapolated: bool
    mixer_extrapolated: bool
    config: ChainConfig

    @property
    def fractions(self) -> tuple[float, float, float]:
        return (self.pa_fraction, self.osc_fraction, self.mixer_fraction)

    @property
    def extrapolated_blocks(self) -> tuple[BlockKind, ...]:
        flagged = []
        if self.pa_extrapolated:
            flagged.append(BlockKind.PA)
        if self.osc_extrapolated:
            flagged.append(BlockKind.OSCILLATOR)
        if self.mixer_extrapolated:
            flagged.append(BlockKind.MIXER)
        return tuple(flagged)

    @property
    def any_extrapolated(self) -> bool:
        return self.pa_extrapolated or self.osc_extrapolated or self.mixer_extrapolated


@dataclass(frozen=True)
class SweepResult:
    """Breakdowns over a strictly increasing frequency grid."""

    entries: tuple[tuple[FrequencyGhz, PowerBreakdown], ...]

    def __post_init__(self) -> None:
        freqs = [f.value for f, _ in self.entries]
        if any(b <= a for a, b in zip(freqs, freqs[1:])):
            raise ValueError("sweep frequencies must be strictly increasing")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[FrequencyGhz, PowerBreakdown]]:
        return iter(self.entries)


def chain_breakdown(
    pa: PaModel | None,
    osc: OscModel,
    mix: MixerModel,
    cfg: ChainConfig,
) -> PowerBreakdown:
    """Evaluate the full chain at one operating point.

    The PA stage is present exactly when ``cfg.p_pa_out`` is set; in that
    case a PA model is required. Block evaluation errors propagate.
    """
    mixer_mw, mixer_ex = mixer_dc_power(mix, cfg.frequency, cfg.p_if_in, cfg.p_mixer_out)
    osc_mw, osc_ex = osc_dc_power(osc, cfg.frequency, cfg.p_osc_rf)
    if cfg.p_pa_out is None:
        pa_mw, pa_ex = PowerMilliwatt(0.0), False
    else:
        if pa is None:
            raise ValueError("config requests a PA stage but no PA model was provided")
        pa_mw, pa_ex = pa_dc_power(pa, cfg.frequency, cfg.p_mixer_out, cfg.p_pa_out)

    total = pa_mw.value + osc_mw.value + mixer_mw.value
    return PowerBreakdown(
        pa_mw=pa_mw,
        osc_mw=osc_mw,
        mixer_mw=mixer_mw,
        total_mw=PowerMilliwatt(total),
        pa_fraction=pa_mw.value / total,
        osc_fraction=osc_mw.value / total,
        mixer_fraction=mixer_mw.value / total,
        pa_extrapolated=pa_ex,
        osc_extrapolated=osc_ex,
        mixer_extrapolated=mixer_ex,
        config=cfg,
    )


def sweep(
    pa: PaModel | None,
    osc: OscModel,
    mix: MixerModel,
    base_cfg: ChainConfig,
    frequencies: Sequence[FrequencyGhz],
) -> SweepResult:
    """Evaluate the chain on a strictly increasing frequency grid.

    All other config parameters stay fixed. A block failure is reported
    with the offending frequency.
    """
    if len(frequencies) == 0:
        raise ValueError("sweep needs at least one frequency")
    values = [f.value for f in frequencies]
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError("sweep frequencies must be strictly increasing")
    entries = []
    for f in frequencies:
        try:
            entries.append((f, chain_breakdown(pa, osc, mix, replace(base_cfg, frequency=f))))
        except ValueError as exc:
            raise ValueError(f"sweep failed at {f.value} GHz: {exc}") from None
    return SweepResult(tuple(entries))


def recommend_frequency(
    pa: PaModel | None,
    osc: OscModel,
    mix: MixerModel,
    base_cfg: ChainConfig,
    lo: FrequencyGhz,
    hi: FrequencyGhz,
    n_grid: int = 512,
    allow_extrapolation: bool = False,
) -> tuple[FrequencyGhz, PowerBreakdown]:
    """Grid-search the frequency with minimum total DC power in [lo, hi].

    Evaluates ``n_grid`` uniformly spaced points (endpoints included).
    Points where any block must extrapolate are skipped unless
    ``allow_extrapolation`` is set; ties prefer the lower frequency.
    Grid search is used instead of a closed form because user-supplied
    fits need not be monotone.
    """
    if lo.value >= hi.value:
        raise ValueError(f"inverted frequency range [{lo.value}, {hi.value}] GHz")
    if n_grid < 2:
        raise ValueError(f"grid must have >= 2 points (got {n_grid})")
    step = (hi.value - lo.value) / (n_grid - 1)
    best: tuple[FrequencyGhz, PowerBreakdown] | None = None
    for i in range(n_grid):
        f = FrequencyGhz(hi.value if i == n_grid - 1 else lo.value + i * step)
        bd = chain_breakdown(pa, osc, mix, replace(base_cfg, frequency=f))
        if bd.any_extrapolated and not allow_extrapolation:
            continue
        if best is None or bd.total_mw.value < best[1].total_mw.value:
            best = (f, bd)
    if best is None:
        raise NoAdmissiblePointError(
            f"no grid point in [{lo.value}, {hi.value}] GHz is inside all model "
            "validity ranges; pass allow_extrapolation to search anyway"
        )
    return best


def dominance_report(result: SweepResult) -> list[tuple[FrequencyGhz, BlockKind]]:
    """The block with the largest power share at each sweep frequency.

    Ties resolve in the order PA, oscillator, mixer.
    """
    if len(result) == 0:
        raise ValueError("dominance report needs a non-empty sweep")
    report = []
    for f, bd in result:
        shares = (
            (BlockKind.PA, bd.pa_fraction),
            (BlockKind.OSCILLATOR, bd.osc_fraction),
            (BlockKind.MIXER, bd.mixer_fraction),
        )
        dominant = shares[0]
        for cand in shares[1:]:
            if cand[1] > dominant[1]:
                dominant = cand
        report.append((f, dominant[0]))
    return report


# --- serialization --------------------------------------------------------

SWEEP_CSV_COLUMNS = (
    "frequency_ghz",
    "pa_mw",
    "osc_mw",
    "mixer_mw",
    "total_mw",
    "pa_frac",
    "osc_frac",
    "mixer_frac",
    "extrapolated_blocks",
)


def breakdown_csv_row(bd: PowerBreakdown) -> list[str]:
    """One plot-ready CSV row; floats in shortest round-trip form."""
    return [
        repr(bd.config.frequency.value),
        repr(bd.pa_mw.value),
        repr(bd.osc_mw.value),
        repr(bd.mixer_mw.value),
        repr(bd.total_mw.value),
        repr(bd.pa_fraction),
        repr(bd.osc_fraction),
        repr(bd.mixer_fraction),
        ";".join(kind.token for kind in bd.extrapolated_blocks),
    ]


def breakdowns_to_csv(breakdowns: Sequence[PowerBreakdown]) -> str:
    """Plot-ready CSV for any row sequence (a sweep, or stacked sweeps)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SWEEP_CSV_COLUMNS)
    for bd in breakdowns:
        writer.writerow(breakdown_csv_row(bd))
    return out.getvalue()


def sweep_to_csv(result: SweepResult) -> str:
    return breakdowns_to_csv([bd for _, bd in result])


def breakdown_to_dict(bd: PowerBreakdown) -> dict:
    """JSON-ready document mirroring the CSV columns plus the config echo."""
    cfg = bd.config
    return {
        "config": {
            "frequency_ghz": cfg.frequency.value,
            "p_if_in_dbm": cfg.p_if_in.value,
            "p_mixer_out_dbm": cfg.p_mixer_out.value,
            "p_pa_out_dbm": None if cfg.p_pa_out is None else cfg.p_pa_out.value,
            "p_osc_rf_dbm": cfg.p_osc_rf.value,
        },
        "pa_mw": bd.pa_mw.value,
        "osc_mw": bd.osc_mw.value,
        "mixer_mw": bd.mixer_mw.value,
        "total_mw": bd.total_mw.value,
        "pa_frac": bd.pa_fraction,
        "osc_frac": bd.osc_fraction,
        "mixer_frac": bd.mixer_fraction,
        "extrapolated_blocks": [kind.token for kind in bd.extrapolated_blocks],
    }
