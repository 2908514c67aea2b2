"""Command-line front-end: fit models from surveys, evaluate TX chains.

The workflow is file driven: ``fit`` turns a survey CSV into a model
JSON once, then ``breakdown``, ``sweep``, and ``recommend`` evaluate any
number of operating points from those files. Every emitted result file
is accompanied by a ``<file>.manifest.json`` recording the command, its
resolved parameters, digests of all input files, the tool version, and a
timestamp, so results stay traceable to their inputs. Apart from that
timestamp, reruns with identical inputs produce byte-identical outputs.

Exit codes are stable: 0 success, 1 usage error, 2 data or validation
error, 3 extrapolation under --strict or no admissible frequency.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

from . import __version__
from .blocks import MixerModel, OscModel, PaModel
from .chain import (
    ChainConfig,
    NoAdmissiblePointError,
    PowerBreakdown,
    breakdown_to_dict,
    breakdowns_to_csv,
    chain_breakdown,
    recommend_frequency,
    sweep,
)
from .exampledata import ExampleBundle, default_bundle, validate_bundle
from .regression import fit_exponential, load_model, save_model
from .survey import (
    BinnedMax,
    BlockKind,
    FrontierStrategy,
    ParetoUpper,
    best_in_class,
    dataset_digest,
    load_survey_csv,
)
from .units import FrequencyGhz, PowerDbm

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_EXTRAPOLATION = 3

_METRIC_UNIT = {BlockKind.PA: "%", BlockKind.OSCILLATOR: "(ratio)", BlockKind.MIXER: "1/mW"}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems through exit code 1."""

    def error(self, message):  # noqa: D102
        raise _UsageError(f"{self.prog}: {message}")


@dataclass(frozen=True)
class RunManifest:
    """Provenance record accompanying every emitted result file."""

    command: str
    parameters: dict
    input_digests: dict
    tool_version: str = __version__
    timestamp: str = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds")
    )

    def write_for(self, output_path: Path) -> None:
        doc = {
            "command": self.command,
            "parameters": self.parameters,
            "input_digests": self.input_digests,
            "tool_version": self.tool_version,
            "timestamp": self.timestamp,
        }
        sidecar = Path(str(output_path) + ".manifest.json")
        sidecar.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _file_digest(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _manifest(args: argparse.Namespace, inputs: Sequence[Path]) -> RunManifest:
    parameters = {
        k: (str(v) if isinstance(v, Path) else v)
        for k, v in vars(args).items()
        if k != "func" and v is not None
    }
    return RunManifest(
        command=args.command,
        parameters=parameters,
        input_digests={str(p): _file_digest(p) for p in inputs},
    )


# --- flag parsing helpers -------------------------------------------------


def _float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated number list: {text!r}")


def _range_spec(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected lo:hi:n (got {text!r})")
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi:n with numeric fields (got {text!r})")


def _bounds_spec(text: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected lo:hi (got {text!r})")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi with numeric fields (got {text!r})")


def _linspace(lo: float, hi: float, n: int) -> list[float]:
    if n < 2:
        raise ValueError(f"frequency grid needs >= 2 points (got {n})")
    if lo >= hi:
        raise ValueError(f"inverted frequency range [{lo}, {hi}] GHz")
    step = (hi - lo) / (n - 1)
    return [hi if i == n - 1 else lo + i * step for i in range(n)]


def _strategy_from_args(args: argparse.Namespace) -> FrontierStrategy:
    if args.strategy == "binned-max":
        if args.bins is None:
            raise _UsageError("fit: --strategy binned-max requires --bins")
        return BinnedMax(bins=args.bins)
    if args.bins is not None:
        raise _UsageError("fit: --bins only applies to --strategy binned-max")
    return ParetoUpper()


def _load_block_model(path: Path, expected: BlockKind):
    kind, fit, _digest = load_model(path)
    if kind is not expected:
        raise ValueError(
            f"{path} holds a {kind.token} model but was passed for the "
            f"{expected.token} role"
        )
    wrapper = {BlockKind.PA: PaModel, BlockKind.OSCILLATOR: OscModel, BlockKind.MIXER: MixerModel}
    return wrapper[expected](fit)


def _load_chain_models(args: argparse.Namespace):
    pa = _load_block_model(args.pa_model, BlockKind.PA) if args.pa_model else None
    osc = _load_block_model(args.osc_model, BlockKind.OSCILLATOR)
    mix = _load_block_model(args.mixer_model, BlockKind.MIXER)
    return pa, osc, mix


def _chain_config(frequency: float, p_mixer_out: float, p_if: float,
                  p_pa_out: float | None, p_osc_rf: float) -> ChainConfig:
    # Equal PA output and input means zero gain: that is a chain without
    # a PA, not a degenerate PA stage.
    if p_pa_out is not None and p_pa_out == p_mixer_out:
        p_pa_out = None
    return ChainConfig(
        frequency=FrequencyGhz(frequency),
        p_mixer_out=PowerDbm(p_mixer_out),
        p_if_in=PowerDbm(p_if),
        p_pa_out=None if p_pa_out is None else PowerDbm(p_pa_out),
        p_osc_rf=PowerDbm(p_osc_rf),
    )


def _model_inputs(args: argparse.Namespace) -> list[Path]:
    return [p for p in (args.pa_model, args.osc_model, args.mixer_model) if p is not None]


# --- output formatting ----------------------------------------------------


def _print_breakdown(bd: PowerBreakdown) -> None:
    cfg = bd.config
    pa_out = "absent" if cfg.p_pa_out is None else f"{cfg.p_pa_out.value:g} dBm"
    print(f"TX chain DC power at {cfg.frequency.value:g} GHz")
    print(
        f"  P_IF = {cfg.p_if_in.value:g} dBm, mixer out = {cfg.p_mixer_out.value:g} dBm, "
        f"PA out = {pa_out}, oscillator RF out = {cfg.p_osc_rf.value:g} dBm"
    )
    rows = [
        ("PA", bd.pa_mw.value, bd.pa_fraction, bd.pa_extrapolated),
        ("oscillator", bd.osc_mw.value, bd.osc_fraction, bd.osc_extrapolated),
        ("mixer", bd.mixer_mw.value, bd.mixer_fraction, bd.mixer_extrapolated),
    ]
    print(f"  {'block':<12} {'P_DC [mW]':>14} {'share [%]':>11}   extrapolated")
    for name, mw, frac, ex in rows:
        print(f"  {name:<12} {mw:>14.6f} {100.0 * frac:>11.2f}   {'yes' if ex else '-'}")
    print(f"  {'total':<12} {bd.total_mw.value:>14.6f} {100.0:>11.2f}")


def _warn_extrapolated(bd: PowerBreakdown) -> None:
    if bd.any_extrapolated:
        names = ", ".join(kind.token for kind in bd.extrapolated_blocks)
        print(
            f"warning: model evaluated outside its fitted range at "
            f"{bd.config.frequency.value:g} GHz: {names}",
            file=sys.stderr,
        )


# --- subcommands ----------------------------------------------------------


def _cmd_fit(args: argparse.Namespace) -> int:
    strategy = _strategy_from_args(args)
    data = load_survey_csv(args.survey_csv)
    block = BlockKind.from_token(args.block)
    if data.kind is not block:
        raise ValueError(
            f"{args.survey_csv} holds {data.kind.token} records, but --block {block.token} "
            "was requested"
        )
    digest = dataset_digest(data)
    frontier = best_in_class(data, strategy)
    model, _diag = fit_exponential(frontier.points(), strategy=strategy.tag)
    save_model(args.out, block, model, digest)
    _manifest(args, [args.survey_csv]).write_for(args.out)

    unit = _METRIC_UNIT[block]
    print(f"fitted {block.token} model from {args.survey_csv}")
    print(f"  points fitted    = {model.n_points} of {len(data)} ({strategy.tag} frontier)")
    print(f"  a                = {model.a:.6g} {unit}")
    print(f"  b                = {model.b:.6g} 1/GHz")
    print(f"  R^2 (log domain) = {model.r_squared_log:.4f}")
    print(f"  R^2 (linear)     = {model.r_squared_linear:.4f}")
    print(f"  validity range   = [{model.valid_lo.value:g}, {model.valid_hi.value:g}] GHz")
    print(f"  wrote {args.out} and {args.out}.manifest.json")
    return EXIT_OK


def _cmd_breakdown(args: argparse.Namespace) -> int:
    pa, osc, mix = _load_chain_models(args)
    cfg = _chain_config(args.freq, args.p_mixer_out, args.p_if, args.p_pa_out, args.p_osc_rf)
    bd = chain_breakdown(pa, osc, mix, cfg)
    _print_breakdown(bd)
    _warn_extrapolated(bd)
    if args.out_csv is not None:
        Path(args.out_csv).write_text(breakdowns_to_csv([bd]), encoding="utf-8")
        _manifest(args, _model_inputs(args)).write_for(args.out_csv)
        print(f"wrote {args.out_csv} and {args.out_csv}.manifest.json")
    if args.out_json is not None:
        Path(args.out_json).write_text(
            json.dumps(breakdown_to_dict(bd), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
        _manifest(args, _model_inputs(args)).write_for(args.out_json)
        print(f"wrote {args.out_json} and {args.out_json}.manifest.json")
    if args.strict and bd.any_extrapolated:
        return EXIT_EXTRAPOLATION
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    pa, osc, mix = _load_chain_models(args)
    if args.freqs is not None:
        freqs = args.freqs
    else:
        freqs = _linspace(*args.range)
    if args.levels is None and args.p_mixer_out is None:
        raise _UsageError("sweep: either --p-mixer-out or --levels is required")
    levels = args.levels if args.levels is not None else [args.p_mixer_out]

    rows: list[PowerBreakdown] = []
    any_extrapolated = False
    for level in levels:
        base = _chain_config(freqs[0], level, args.p_if, args.p_pa_out, args.p_osc_rf)
        result = sweep(pa, osc, mix, base, [FrequencyGhz(f) for f in freqs])
        for _f, bd in result:
            rows.append(bd)
            any_extrapolated = any_extrapolated or bd.any_extrapolated

    Path(args.out).write_text(breakdowns_to_csv(rows), encoding="utf-8")
    _manifest(args, _model_inputs(args)).write_for(args.out)
    levels_txt = ", ".join(f"{lv:g} dBm" for lv in levels)
    print(
        f"swept {len(freqs)} frequencies from {freqs[0]:g} to {freqs[-1]:g} GHz "
        f"at mixer output level(s) {levels_txt}"
    )
    print(f"wrote {len(rows)} rows to {args.out} and {args.out}.manifest.json")
    if any_extrapolated:
        print("warning: some rows evaluate models outside their fitted range "
              "(see extrapolated_blocks column)", file=sys.stderr)
        if args.strict:
            return EXIT_EXTRAPOLATION
    return EXIT_OK


def _cmd_recommend(args: argparse.Namespace) -> int:
    pa, osc, mix = _load_chain_models(args)
    lo, hi = args.range
    base = _chain_config(lo, args.p_mixer_out, args.p_if, args.p_pa_out, args.p_osc_rf)
    f_best, bd = recommend_frequency(
        pa, osc, mix, base,
        FrequencyGhz(lo), FrequencyGhz(hi),
        n_grid=args.n_grid,
        allow_extrapolation=args.allow_extrapolation,
    )
    if f_best.value == lo:
        position = "at range boundary: lower"
    elif f_best.value == hi:
        position = "at range boundary: upper"
    else:
        position = "interior minimum"
    print(f"recommended operating frequency: {f_best.value:g} GHz ({position})")
    _print_breakdown(bd)
    _warn_extrapolated(bd)
    return EXIT_OK


def _cmd_validate_examples(args: argparse.Namespace) -> int:
    if args.data_dir is not None:
        root = Path(args.data_dir)
        bundle = ExampleBundle(
            pa_csv=root / "pa_survey.csv",
            oscillator_csv=root / "oscillator_survey.csv",
            mixer_csv=root / "mixer_survey.csv",
            readme=root / "README.txt",
        )
    else:
        bundle = default_bundle()
    report = validate_bundle(bundle)
    for check in report.checks:
        status = "ok " if check.passed else "FAIL"
        detail = f" ({check.detail})" if check.detail else ""
        print(f"[{status}] {check.name}{detail}")
    if not report.ok:
        print(f"{len(report.failures)} of {len(report.checks)} checks failed", file=sys.stderr)
        return EXIT_DATA
    print(f"all {len(report.checks)} checks passed")
    return EXIT_OK


# --- parser ---------------------------------------------------------------


def _add_model_flags(p: argparse.ArgumentParser, pa_required: bool = False) -> None:
    p.add_argument("--pa-model", type=Path, required=pa_required,
                   help="fitted PA model JSON (omit for a PA-less chain)")
    p.add_argument("--osc-model", type=Path, required=True, help="fitted oscillator model JSON")
    p.add_argument("--mixer-model", type=Path, required=True, help="fitted mixer model JSON")


def _add_scenario_flags(p: argparse.ArgumentParser, mixer_out_required: bool = True) -> None:
    p.add_argument("--p-if", type=float, default=-5.0,
                   help="mixer IF input power in dBm (default -5)")
    p.add_argument("--p-mixer-out", type=float, required=mixer_out_required,
                   help="mixer output power in dBm (doubles as PA input)")
    p.add_argument("--p-pa-out", type=float, default=None,
                   help="PA output power in dBm; omit for a chain without a PA")
    p.add_argument("--p-osc-rf", type=float, default=0.0,
                   help="oscillator RF output power in dBm (default 0)")


def build_parser() -> _Parser:
    parser = _Parser(
        prog="wnocpower",
        description="TX front-end DC power budgeting from prototype surveys.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit a block model from a survey CSV")
    p.add_argument("survey_csv", type=Path, help="survey CSV (schema: block,frequency_ghz,metric,label[,technology_node][,notes])")
    p.add_argument("--block", required=True, choices=[k.token for k in BlockKind],
                   help="expected block kind of the survey")
    p.add_argument("--strategy", choices=["pareto-upper", "binned-max"],
                   default="pareto-upper", help="best-in-class selection strategy")
    p.add_argument("--bins", type=int, default=None,
                   help="bin count for --strategy binned-max")
    p.add_argument("--out", type=Path, required=True, help="output model JSON path")
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("breakdown", help="per-block DC power at one operating point")
    _add_model_flags(p)
    p.add_argument("--freq", type=float, required=True, help="operating frequency in GHz")
    _add_scenario_flags(p)
    p.add_argument("--out-csv", type=Path, default=None, help="also write a one-row plot CSV")
    p.add_argument("--out-json", type=Path, default=None, help="also write the breakdown as JSON")
    p.add_argument("--strict", action="store_true",
                   help="exit with status 3 if any model had to extrapolate")
    p.set_defaults(func=_cmd_breakdown)

    p = sub.add_parser("sweep", help="breakdowns over a frequency grid, written as plot CSV")
    _add_model_flags(p)
    grid = p.add_mutually_exclusive_group(required=True)
    grid.add_argument("--freqs", type=_float_list, default=None,
                      help="explicit comma-separated frequencies in GHz, strictly increasing")
    grid.add_argument("--range", type=_range_spec, default=None, metavar="LO:HI:N",
                      help="uniform grid of N points from LO to HI GHz")
    _add_scenario_flags(p, mixer_out_required=False)
    p.add_argument("--levels", type=_float_list, default=None,
                   help="repeat the sweep for each mixer output level (dBm, comma-separated)")
    p.add_argument("--out", type=Path, required=True, help="output CSV path")
    p.add_argument("--strict", action="store_true",
                   help="exit with status 3 if any row had to extrapolate")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("recommend", help="minimum-total-power frequency over a range")
    _add_model_flags(p)
    p.add_argument("--range", type=_bounds_spec, required=True, metavar="LO:HI",
                   help="search range in GHz")
    p.add_argument("--n-grid", type=int, default=512, help="grid resolution (default 512)")
    p.add_argument("--allow-extrapolation", action="store_true",
                   help="admit frequencies outside the models' fitted ranges")
    _add_scenario_flags(p)
    p.set_defaults(func=_cmd_recommend)

    p = sub.add_parser("validate-examples", help="re-check the shipped example bundle")
    p.add_argument("--data-dir", type=Path, default=None,
                   help="directory holding the bundle (default: packaged data)")
    p.set_defaults(func=_cmd_validate_examples)

    return parser


def _normalize_argv(argv: list[str]) -> list[str]:
    # "--levels -15,-10" trips argparse's option detection; fold the value in.
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok == "--levels" and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"--levels={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_normalize_argv(argv))
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        print("run 'wnocpower --help' for usage", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except NoAdmissiblePointError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EXTRAPOLATION
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
