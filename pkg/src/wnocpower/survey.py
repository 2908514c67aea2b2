"""Survey ingestion and best-in-class frontier extraction.

A survey is a CSV of fabricated-prototype data points for one front-end
block kind: power amplifier, oscillator, or mixer. Each row carries an
operating frequency and the block's figure of merit:

* PA        -- power added efficiency, percent, in (0, 100]
* OSC       -- DC-to-RF efficiency, dimensionless ratio, in (0, 1]
* MIXER     -- linear conversion gain per mW of DC power, 1/mW, > 0

CSV schema (UTF-8, header required, ``#`` lines are comments)::

    block,frequency_ghz,metric,label[,technology_node][,notes]

Fitting does not use the raw cloud but its best-in-class subset; two
selection strategies are provided, and the chosen one is recorded in the
fitted model so a result can be reproduced from its inputs.
"""

from __future__ import annotations

import csv
import enum
import hashlib
import io
import math
from dataclasses import dataclass
from typing import IO, Iterator, Union

from .units import FrequencyGhz


class SurveyFormatError(ValueError):
    """A survey file or record violates the schema; message names the row."""


class BlockKind(enum.Enum):
    """The three modeled TX front-end blocks."""

    PA = "PA"
    OSCILLATOR = "OSC"
    MIXER = "MIXER"

    @property
    def token(self) -> str:
        """Spelling used in CSV files and on the command line."""
        return self.value

    @classmethod
    def from_token(cls, token: str) -> "BlockKind":
        t = token.strip().upper()
        for kind in cls:
            if kind.value == t:
                return kind
        raise ValueError(f"unknown block kind {token!r} (expected PA, OSC or MIXER)")


# Valid metric range per block kind: (exclusive low, inclusive high, description).
_METRIC_RANGE = {
    BlockKind.PA: (0.0, 100.0, "PAE in percent, in (0, 100]"),
    BlockKind.OSCILLATOR: (0.0, 1.0, "DC-to-RF efficiency ratio, in (0, 1]"),
    BlockKind.MIXER: (0.0, math.inf, "conversion gain per mW of DC power, > 0"),
}


def _check_metric(kind: BlockKind, metric: float) -> None:
    lo, hi, desc = _METRIC_RANGE[kind]
    if not math.isfinite(metric) or metric <= lo or metric > hi:
        raise ValueError(f"{kind.token} metric must be {desc} (got {metric})")


@dataclass(frozen=True)
class SurveyRecord:
    """One measured prototype point from a published survey."""

    block: BlockKind
    frequency: FrequencyGhz
    metric: float
    label: str
    technology_node: str | None = None
    notes: str | None = None

    def __post_init__(self) -> None:
        _check_metric(self.block, self.metric)
        if not self.label:
            raise ValueError("record label must be non-empty")


@dataclass(frozen=True)
class SurveyDataset:
    """An ordered, homogeneous collection of survey records."""

    kind: BlockKind
    records: tuple[SurveyRecord, ...]

    def __post_init__(self) -> None:
        seen: set[tuple[float, float, str]] = set()
        for rec in self.records:
            if rec.block is not self.kind:
                raise ValueError(
                    f"heterogeneous block kinds: dataset is {self.kind.token}, "
                    f"record {rec.label!r} is {rec.block.token}"
                )
            key = (rec.frequency.value, rec.metric, rec.label)
            if key in seen:
                raise ValueError(f"duplicate record (frequency, metric, label)={key}")
            seen.add(key)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[SurveyRecord]:
        return iter(self.records)

    def points(self) -> list[tuple[FrequencyGhz, float]]:
        """(frequency, metric) pairs in record order, as the fitter expects."""
        return [(rec.frequency, rec.metric) for rec in self.records]


# --- frontier strategies -------------------------------------------------


@dataclass(frozen=True)
class ParetoUpper:
    """Keep records not dominated in the (frequency, metric) plane.

    A record is dominated when some other record has frequency >= its
    frequency and metric >= its metric, with at least one strict
    inequality. Exact (frequency, metric) ties keep the first record in
    input order.
    """

    @property
    def tag(self) -> str:
        return "pareto-upper"


@dataclass(frozen=True)
class BinnedMax:
    """Keep the maximum-metric record of each of ``bins`` log-spaced
    frequency bins spanning [f_min, f_max] of the dataset."""

    bins: int

    def __post_init__(self) -> None:
        if self.bins < 1:
            raise ValueError(f"bin count must be >= 1 (got {self.bins})")

    @property
    def tag(self) -> str:
        return f"binned-max:{self.bins}"


FrontierStrategy = Union[ParetoUpper, BinnedMax]


def strategy_from_tag(tag: str) -> FrontierStrategy:
    """Inverse of the strategy ``tag`` property, for model files and CLI."""
    if tag == "pareto-upper":
        return ParetoUpper()
    if tag.startswith("binned-max:"):
        return BinnedMax(bins=int(tag.split(":", 1)[1]))
    raise ValueError(f"unknown frontier strategy tag {tag!r}")


def _pareto_upper_indices(records: tuple[SurveyRecord, ...]) -> list[int]:
    # Sweep from high to low frequency, tracking the best metric seen at
    # strictly higher frequencies; a record survives only if it beats it.
    order = sorted(range(len(records)),
                   key=lambda i: records[i].frequency.value, reverse=True)
    keep: list[int] = []
    best_above = -math.inf
    pos = 0
    while pos < len(order):
        f = records[order[pos]].frequency.value
        group = []
        while pos < len(order) and records[order[pos]].frequency.value == f:
            group.append(order[pos])
            pos += 1
        group_max = max(records[i].metric for i in group)
        if group_max > best_above:
            # Identical (frequency, metric) ties: first by input order.
            winner = min(i for i in group if records[i].metric == group_max)
            keep.append(winner)
            best_above = group_max
    return sorted(keep)


def _binned_max_indices(records: tuple[SurveyRecord, ...], bins: int) -> list[int]:
    freqs = [rec.frequency.value for rec in records]
    f_lo, f_hi = min(freqs), max(freqs)
    if f_lo == f_hi:
        bin_of = {i: 0 for i in range(len(records))}
    else:
        log_span = math.log10(f_hi) - math.log10(f_lo)
        bin_of = {
            i: min(bins - 1, int(bins * (math.log10(f) - math.log10(f_lo)) / log_span))
            for i, f in enumerate(freqs)
        }
    best: dict[int, int] = {}
    for i in range(len(records)):
        j = best.get(bin_of[i])
        if j is None or records[i].metric > records[j].metric:
            best[bin_of[i]] = i
    return sorted(best.values())


def best_in_class(data: SurveyDataset, strategy: FrontierStrategy | None = None) -> SurveyDataset:
    """Extract the best-in-class subset used for fitting.

    Returns a dataset containing a subset of the input records in their
    original order. Raises on an empty dataset.
    """
    if len(data) == 0:
        raise ValueError("cannot extract a frontier from an empty dataset")
    if strategy is None:
        strategy = ParetoUpper()
    if isinstance(strategy, ParetoUpper):
        idx = _pareto_upper_indices(data.records)
    else:
        idx = _binned_max_indices(data.records, strategy.bins)
    return SurveyDataset(data.kind, tuple(data.records[i] for i in idx))


def filter_frequency(data: SurveyDataset, lo: FrequencyGhz, hi: FrequencyGhz) -> SurveyDataset:
    """Keep records with lo <= frequency <= hi, preserving order."""
    if lo.value >= hi.value:
        raise ValueError(f"inverted frequency range [{lo.value}, {hi.value}] GHz")
    kept = tuple(rec for rec in data.records if lo.value <= rec.frequency.value <= hi.value)
    return SurveyDataset(data.kind, kept)


# --- CSV parsing and serialization ---------------------------------------

_REQUIRED_COLUMNS = ("block", "frequency_ghz", "metric", "label")
_OPTIONAL_COLUMNS = ("technology_node", "notes")


def parse_survey_csv(source: Union[str, bytes, IO[str], IO[bytes]]) -> SurveyDataset:
    """Parse a survey CSV into a validated dataset.

    ``source`` may be text, UTF-8 bytes, or an open file in either mode.
    Malformed rows raise :class:`SurveyFormatError` naming the file row.
    """
    if hasattr(source, "read"):
        source = source.read()  # type: ignore[union-attr]
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SurveyFormatError(f"survey CSV is not valid UTF-8: {exc}") from None

    reader = csv.reader(io.StringIO(source))
    header: list[str] | None = None
    records: list[SurveyRecord] = []
    kind: BlockKind | None = None
    col: dict[str, int] = {}

    for row in reader:
        line = reader.line_num
        if not row or (row[0].lstrip().startswith("#")) or all(not c.strip() for c in row):
            continue
        if header is None:
            header = [c.strip().lower() for c in row]
            if tuple(header[: len(_REQUIRED_COLUMNS)]) != _REQUIRED_COLUMNS:
                raise SurveyFormatError(
                    f"row {line}: header must start with "
                    f"{','.join(_REQUIRED_COLUMNS)} (got {','.join(header)})"
                )
            extras = header[len(_REQUIRED_COLUMNS):]
            if [c for c in extras if c not in _OPTIONAL_COLUMNS] or len(set(extras)) != len(extras):
                raise SurveyFormatError(
                    f"row {line}: columns after label must be a subset of "
                    f"{','.join(_OPTIONAL_COLUMNS)} (got {','.join(extras) or 'none'})"
                )
            col = {name: i for i, name in enumerate(header)}
            continue

        if len(row) != len(header):
            raise SurveyFormatError(
                f"row {line}: expected {len(header)} fields, got {len(row)}"
            )
        try:
            block = BlockKind.from_token(row[col["block"]])
            frequency = FrequencyGhz(_parse_number(row[col["frequency_ghz"]], "frequency_ghz"))
            metric = _parse_number(row[col["metric"]], "metric")
            record = SurveyRecord(
                block=block,
                frequency=frequency,
                metric=metric,
                label=row[col["label"]].strip(),
                technology_node=_optional(row, col.get("technology_node")),
                notes=_optional(row, col.get("notes")),
            )
        except ValueError as exc:
            raise SurveyFormatError(f"row {line}: {exc}") from None
        if kind is None:
            kind = block
        elif block is not kind:
            raise SurveyFormatError(
                f"row {line}: heterogeneous block kinds "
                f"({block.token} after {kind.token})"
            )
        records.append(record)

    if header is None:
        raise SurveyFormatError("survey CSV has no header row")
    if kind is None:
        raise SurveyFormatError("survey CSV has a header but no data rows")
    try:
        return SurveyDataset(kind, tuple(records))
    except ValueError as exc:
        raise SurveyFormatError(str(exc)) from None


def _parse_number(cell: str, name: str) -> float:
    try:
        return float(cell)
    except ValueError:
        raise ValueError(f"{name} is not a number (got {cell!r})") from None


def _optional(row: list[str], index: int | None) -> str | None:
    if index is None:
        return None
    value = row[index].strip()
    return value or None


def load_survey_csv(path) -> SurveyDataset:
    """Read and parse a survey CSV file from disk."""
    with open(path, "rb") as fh:
        return parse_survey_csv(fh)


def serialize_survey_csv(data: SurveyDataset) -> str:
    """Canonical CSV form of a dataset: full 6-column header, shortest
    round-trip float formatting. parse(serialize(d)) == d."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(list(_REQUIRED_COLUMNS) + list(_OPTIONAL_COLUMNS))
    for rec in data.records:
        writer.writerow([
            rec.block.token,
            repr(rec.frequency.value),
            repr(rec.metric),
            rec.label,
            rec.technology_node or "",
            rec.notes or "",
        ])
    return out.getvalue()


def dataset_digest(data: SurveyDataset) -> str:
    """SHA-256 of the canonical CSV form; ties fitted models to their data."""
    return hashlib.sha256(serialize_survey_csv(data).encode("utf-8")).hexdigest()
