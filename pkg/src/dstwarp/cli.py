"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical error.
Relative input paths that do not exist are also looked up in
``$DSTWARP_DATA_DIR``.
"""

from __future__ import annotations

import argparse
import functools
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .crossval import run_cv
from .errors import DataError, NumericalError
from .forecasters import make_forecaster, with_delta_dst
from .ingest import DEFAULT_FILLS, SplitSpec, read_omni2, read_table, split_by_month, write_bundle, write_table
from .io import config_line, read_forecast, read_observation, write_forecast, write_observation
from .metrics import FIELDS, evaluate_table
from .report import build_report
from .stats import acf, lag_pairs, pacf, significance_bound
from .timeseries import ForecastTable, format_hours
from .warpmeasure import measure_all

log = logging.getLogger("dstwarp")

DATA_ENV = "DSTWARP_DATA_DIR"
DEFAULT_REPORT_INPUT = "omni_2001_2016.csv"

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3

# arguments that never change the content of an artifact
_NOT_CONFIG = {"out", "obs_out", "save_model", "jobs", "func", "verbose"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _resolve(path) -> Path:
    path = Path(path)
    if not path.exists() and not path.is_absolute() and os.environ.get(DATA_ENV):
        alt = Path(os.environ[DATA_ENV]) / path
        if alt.exists():
            return alt
    return path


def _config(args) -> dict:
    cfg = {"tool": "dstwarp", "version": __version__}
    for key, value in sorted(vars(args).items()):
        if key in _NOT_CONFIG:
            continue
        cfg[key] = sorted(value) if isinstance(value, (set, frozenset)) else value
    return cfg


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _split_spec(args) -> SplitSpec:
    return SplitSpec(frozenset(args.test_months), args.train_fraction, args.seed)


def _parse_fills(items) -> dict:
    fills = {}
    for item in items or ():
        name, _, values = item.partition("=")
        if not values:
            raise UsageError(f"--fill expects FEATURE=V1[,V2...], got {item!r}")
        try:
            fills[name] = tuple(float(v) for v in values.split(","))
        except ValueError:
            raise UsageError(f"--fill values must be numbers, got {item!r}") from None
    return fills


# -- subcommands -----------------------------------------------------------


def cmd_ingest(args) -> int:
    fills = _parse_fills(args.fill)
    src = _resolve(args.input)
    frame = read_omni2(src, fills=fills) if args.omni2 else read_table(src, fills=fills)
    cfg = _config(args)
    write_table(frame, args.out, header_lines=[config_line(cfg)[2:]])
    summary = {
        "config": cfg,
        "rows": len(frame),
        "start": format_hours(frame.start),
        "valid_counts": {n: int(frame[n].valid.sum()) for n in frame.names},
        "fills": {n: list(v) for n, v in sorted({**DEFAULT_FILLS, **fills}.items())},
    }
    text = json.dumps(summary, indent=2, sort_keys=True) + "\n"
    _emit(text, args.summary)
    return EXIT_OK


def cmd_split(args) -> int:
    frame = read_table(_resolve(args.input))
    summary = write_bundle(frame, _split_spec(args), args.out, args.lag, args.horizons, header=_config(args))
    for name, info in summary["sets"].items():
        log.info("%s: %d months, %d rows, %d windows", name, len(info["months"]), info["rows"], info["windows"])
    return EXIT_OK


def _load_frame(args):
    frame = read_table(_resolve(args.input))
    target = "dst"
    if args.target == "delta-dst":
        frame = with_delta_dst(frame)
        target = "delta_dst"
    return frame, target


def cmd_forecast(args) -> int:
    frame, target = _load_frame(args)
    model = make_forecaster(args.model, args.lag, args.horizons, target, args.features)
    split = split_by_month(frame, _split_spec(args))
    model.fit(split.train)
    if args.save_model and getattr(model, "model", None) is not None:
        model.model.save(args.save_model)
    parts = {"train": split.train, "valid": split.valid, "test": split.test,
             "all": split.train + split.valid + split.test}[args.on]
    tables = [t for t in (model.forecast(f) for f in parts) if len(t)]
    if not tables:
        raise DataError(f"no forecastable windows in the {args.on} months")
    table = ForecastTable.concatenate(tables)
    cfg = _config(args)
    write_forecast(table, args.out, cfg)
    if args.obs_out:
        write_observation(table.observation, args.obs_out, cfg)
    return EXIT_OK


def _load_table(args) -> ForecastTable:
    obs = read_observation(_resolve(args.obs), args.column)
    return read_forecast(_resolve(args.pred), obs)


def cmd_evaluate(args) -> int:
    reports = evaluate_table(_load_table(args))
    cfg = _config(args)
    if args.format == "json":
        data = {"config": cfg, "horizons": [{"horizon": h, **r.to_dict()} for h, r in enumerate(reports, 1)]}
        text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    elif args.format == "markdown":
        lines = ["| horizon | " + " | ".join(FIELDS) + " | n |", "|---" * (len(FIELDS) + 2) + "|"]
        for h, r in enumerate(reports, 1):
            lines.append(f"| t+{h}h | " + " | ".join(f"{getattr(r, f):.3f}" for f in FIELDS) + f" | {r.n} |")
        text = "\n".join(lines) + "\n"
    else:
        lines = [config_line(cfg),
                 "horizon," + ",".join(FIELDS) + ",n"]
        for h, r in enumerate(reports, 1):
            lines.append(f"{h}," + ",".join(repr(getattr(r, f)) for f in FIELDS) + f",{r.n}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_warp(args) -> int:
    table = measure_all(_load_table(args), args.window, args.min_segment, args.jobs)
    cfg = _config(args)
    if args.format == "svg":
        if not args.out:
            raise UsageError("--format svg needs --out")
        from .plots import shift_histogram_svg

        shift_histogram_svg(table, args.out, args.interior)
        return EXIT_OK
    if args.format == "json":
        text = table.to_json(cfg)
    elif args.format == "markdown":
        text = table.to_markdown(args.interior)
    else:
        text = config_line(cfg) + "\n" + table.to_csv(args.interior)
    _emit(text, args.out)
    return EXIT_OK


def cmd_stats(args) -> int:
    series = read_observation(_resolve(args.input), args.column)
    if args.delta:
        from .forecasters import difference

        series = difference(series)
    cfg = _config(args)
    if args.kind == "lag":
        pairs = lag_pairs(series, args.lag)
        if args.format == "svg":
            if not args.out:
                raise UsageError("--format svg needs --out")
            from .plots import lag_plot_svg

            lag_plot_svg(pairs, args.out, args.lag)
            return EXIT_OK
        if args.format == "json":
            text = json.dumps({"config": cfg, "lag": args.lag, "pairs": pairs.tolist()}, sort_keys=True) + "\n"
        else:
            lines = [config_line(cfg), "x_t,x_t_plus_lag"]
            lines += [f"{a!r},{b!r}" for a, b in pairs.tolist()]
            text = "\n".join(lines) + "\n"
        _emit(text, args.out)
        return EXIT_OK

    rows = (acf if args.kind == "acf" else pacf)(series, args.max_lag)
    bound = significance_bound(int(series.valid.sum()))
    if args.format == "svg":
        if not args.out:
            raise UsageError("--format svg needs --out")
        from .plots import correlogram_svg

        correlogram_svg(rows, args.out, args.kind.upper(), bound)
        return EXIT_OK
    if args.format == "json":
        data = {"config": cfg, "kind": args.kind, "bound": bound,
                "rows": [{"lag": r.lag, "value": r.value, "n_pairs": r.n_pairs} for r in rows]}
        text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    else:
        lines = [config_line(cfg), "lag,value,n_pairs"]
        lines += [f"{r.lag},{r.value!r},{r.n_pairs}" for r in rows]
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_cv(args) -> int:
    frame, target = _load_frame(args)
    model = make_forecaster(args.model, args.lag, args.horizons, target, args.features)
    exclude = frozenset() if args.include_test_months else frozenset(args.test_months)
    report = run_cv(frame, model, args.folds, args.seed, exclude, args.jobs)
    cfg = _config(args)
    if args.format == "csv":
        text = config_line(cfg) + "\n" + report.summary_csv()
    else:
        text = report.to_json(cfg)
    _emit(text, args.out)
    return EXIT_OK


def cmd_report(args) -> int:
    if args.input is None:
        base = os.environ.get(DATA_ENV)
        path = Path(base) / DEFAULT_REPORT_INPUT if base else None
    else:
        path = _resolve(args.input)
    if path is None or not path.exists():
        print(f"report skipped: no data file ({path or 'set --input or ' + DATA_ENV})", file=sys.stderr)
        return EXIT_OK
    report = build_report(path, args.out, args.seed, args.folds, _config(args))
    for c in report["checks"]:
        print(f"{'PASS' if c['passed'] else 'FAIL'}  [{c['kind']}] {c['name']}: {c['value']:.4g} (expected {c['expected']})")
    return EXIT_OK


# -- parser ----------------------------------------------------------------


def _add_split(p) -> None:
    p.add_argument("--test-months", type=int, nargs="+", default=[4, 8, 12])
    p.add_argument("--train-fraction", type=float, default=0.6)
    p.add_argument("--seed", type=int, default=0)


def _add_model(p) -> None:
    p.add_argument("--model", choices=["persistence", "ar"], default="persistence")
    p.add_argument("--target", choices=["dst", "delta-dst"], default="dst")
    p.add_argument("--features", nargs="+", default=None,
                   help="input features for the AR model (default: solar wind + target)")
    p.add_argument("--lag", type=int, default=6)
    p.add_argument("--horizons", type=int, default=6)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    parser = _Parser(prog="dstwarp", description=__doc__.splitlines()[0], parents=[common])
    parser.add_argument("--version", action="version", version=f"dstwarp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    add = functools.partial(sub.add_parser, parents=[common])

    p = add("ingest", help="validate a raw table and write clean CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--omni2", action="store_true", help="input is an OMNI2 hourly .dat file")
    p.add_argument("--fill", action="append", metavar="FEATURE=V1,V2", help="extra fill sentinels")
    p.add_argument("--summary", default=None, help="write the JSON summary here instead of stdout")
    p.set_defaults(func=cmd_ingest)

    p = add("split", help="monthly split, scaling and window counts")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--lag", type=int, default=6)
    p.add_argument("--horizons", type=int, default=6)
    _add_split(p)
    p.set_defaults(func=cmd_split)

    p = add("forecast", help="fit on training months and forecast")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True, help="forecast CSV")
    p.add_argument("--obs-out", default=None, help="matching observation CSV")
    p.add_argument("--on", choices=["train", "valid", "test", "all"], default="test")
    p.add_argument("--save-model", default=None)
    _add_model(p)
    _add_split(p)
    p.set_defaults(func=cmd_forecast)

    for name, func, formats in (("evaluate", cmd_evaluate, ["csv", "json", "markdown"]),
                                ("warp-measure", cmd_warp, ["csv", "json", "markdown", "svg"])):
        p = add(name)
        p.add_argument("--pred", required=True)
        p.add_argument("--obs", required=True)
        p.add_argument("--column", default=None, help="observation column (default value, else dst)")
        p.add_argument("--format", choices=formats, default="csv")
        p.add_argument("--out", default=None)
        if name == "warp-measure":
            p.add_argument("--window", type=int, default=None, help="causal window (default: the horizon)")
            p.add_argument("--min-segment", type=int, default=None)
            p.add_argument("--interior", action="store_true", help="report interior-only fractions")
            p.add_argument("--jobs", type=int, default=1)
        p.set_defaults(func=func)

    p = add("stats", help="ACF, PACF or lag pairs of a series")
    p.add_argument("kind", choices=["acf", "pacf", "lag"])
    p.add_argument("--input", required=True)
    p.add_argument("--column", default=None)
    p.add_argument("--max-lag", type=int, default=15)
    p.add_argument("--lag", type=int, default=1, help="lag for 'lag' pairs")
    p.add_argument("--delta", action="store_true", help="use the first difference")
    p.add_argument("--format", choices=["csv", "json", "svg"], default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_stats)

    p = add("cv", help="k-fold cross-validation over months")
    p.add_argument("--input", required=True)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--test-months", type=int, nargs="+", default=[4, 8, 12])
    p.add_argument("--include-test-months", action="store_true")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", default=None)
    p.add_argument("--jobs", type=int, default=1)
    _add_model(p)
    p.set_defaults(func=cmd_cv)

    p = add("report", help="persistence report with reference checks")
    p.add_argument("--input", default=None)
    p.add_argument("--out", default=None, help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--folds", type=int, default=10)
    p.set_defaults(func=cmd_report)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"dstwarp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"dstwarp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"dstwarp {args.command}: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except FileNotFoundError as exc:
        print(f"dstwarp {args.command}: file not found: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (DataError, ValueError, KeyError) as exc:
        print(f"dstwarp {args.command}: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
