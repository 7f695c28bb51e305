"""Command-line entry point.

Exit codes: 0 success, 1 validation failure, 2 configuration/IO/evaluation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .channel import export_models_csv
from .config import FIXTURES, RunConfig, fixture_text, load_config, load_fixture
from .errors import BudgetError, ConfigError
from .geometry import validate_frequency_plan, validate_layout
from .quantities import round_db, round_mbps, round_se
from .rate import SeMapping
from .scenario import LinkBudgetResult, evaluate, sweep

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_ERROR = 2

# record key -> (row label, display kind)
TABLE_ROWS: tuple[tuple[str, str, str], ...] = (
    ("scenario", "Deployment scenario", "text"),
    ("direction", "Link direction", "text"),
    ("distance_m", "Distance (m)", "db"),
    ("bandwidth_MHz", "Bandwidth (MHz)", "db"),
    ("n_carriers", "Aggregated carriers", "int"),
    ("eirp_dBm", "Max EIRP (dBm)", "db"),
    ("path_loss_dB", "Path loss (dB)", "db"),
    ("atmospheric_dB", "Rain and oxygen loss (dB)", "db"),
    ("penetration_dB", "Penetration loss (dB)", "db"),
    ("total_loss_dB", "Total propagation loss (dB)", "db"),
    ("rx_power_dBm", "Received power (dBm)", "db"),
    ("thermal_noise_dBm", "Thermal noise (dBm)", "db"),
    ("snr_before_bf_dB", "SNR before BF (dB)", "db"),
    ("front_end_loss_dB", "Rx front end loss (dB)", "db"),
    ("element_gain_dBi", "Single antenna element gain (dB)", "db"),
    ("n_rx_elements", "Number of receive elements", "int"),
    ("array_gain_dB", "Total antenna array gain (dB)", "db"),
    ("noise_figure_dB", "Noise figure (dB)", "db"),
    ("snr_after_bf_dB", "SNR after BF (dB)", "db"),
    ("se_bps_hz", "Spectral efficiency SISO (bits/s/Hz)", "se"),
    ("throughput_siso_Mbps", "SISO throughput (Mbps)", "mbps"),
    ("mimo_order", "MIMO order", "int"),
    ("throughput_mimo_Mbps", "MIMO throughput (Mbps)", "mbps"),
    ("active_modules", "Active BF modules", "text"),
    ("blocked_modules", "Blocked BF modules", "text"),
    ("blocked_snr_after_bf_dB", "SNR after BF via blocked module (dB)", "db"),
)


def _fmt_csv(v: object) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _fmt_display(v: object, kind: str, rounding: str) -> str:
    if v is None or v == "":
        return "-"
    if kind == "text" or not isinstance(v, (int, float)):
        return str(v)
    if rounding == "full":
        return repr(v) if isinstance(v, float) else str(v)
    if kind == "int":
        return str(int(v))
    if kind == "se":
        return f"{round_se(v):.2f}"
    if kind == "mbps":
        return str(round_mbps(v * 1e6))
    return f"{round_db(v):.1f}"


def render_csv(rows: Sequence[dict], leading: Sequence[str] = ()) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = list(leading) + [k for k in rows[0] if k not in leading]
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt_csv(r.get(k)) for k in header])
    return buf.getvalue()


def render_table(results: Sequence[LinkBudgetResult], headers: Sequence[str] | None = None,
                 rounding: str = "display") -> str:
    recs = [r.record() for r in results]
    labels = [label for _, label, _ in TABLE_ROWS]
    width = max(len(s) for s in labels)
    cols = [[_fmt_display(rec[key], kind, rounding) for key, _, kind in TABLE_ROWS] for rec in recs]
    col_w = [max([len(c) for c in col] + [len(headers[i]) if headers else 0]) for i, col in enumerate(cols)]
    lines = []
    if headers:
        lines.append(" " * width + "  " + "  ".join(h.rjust(col_w[i]) for i, h in enumerate(headers)))
    for r, label in enumerate(labels):
        cells = "  ".join(cols[i][r].rjust(col_w[i]) for i in range(len(cols)))
        lines.append(f"{label.ljust(width)}  {cells}")
    return "\n".join(lines) + "\n"


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8", newline="")
    else:
        sys.stdout.write(text)


def _load(args) -> RunConfig:
    if args.fixture:
        return load_fixture(args.fixture)
    if args.config:
        return load_config(args.config)
    raise ConfigError("one of --config or --fixture is required")


def _scenario(rc: RunConfig, args):
    cfg = rc.scenario_config()
    if getattr(args, "se_mode", None):
        cfg = cfg.replace(se_mapping=SeMapping.from_flag(args.se_mode, cfg.se_mapping.se_cap))
    return cfg


def cmd_budget(args) -> int:
    rc = _load(args)
    cfg = _scenario(rc, args)
    res = _run("evaluate", evaluate, cfg)
    fmt = args.format or rc.output.format
    out = args.output or rc.output.path
    if fmt == "csv":
        text = render_csv([res.record()])
    else:
        text = render_table([res], rounding=rc.output.rounding)
    _emit(text, out)
    return EXIT_OK


def _parse_values(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"--values must be a comma-separated list of numbers, got {text!r}") from None


def cmd_sweep(args) -> int:
    rc = _load(args)
    cfg = _scenario(rc, args)
    values = _parse_values(args.values)
    if args.axis == "bandwidth":
        values = [v * 1e6 for v in values]  # MHz on the command line
    points = _run("sweep", sweep, cfg, args.axis, values)
    fmt = args.format or "csv"
    out = args.output or rc.output.path
    if fmt == "csv":
        axis_col = "bandwidth_MHz_axis" if args.axis == "bandwidth" else args.axis
        rows = []
        for v, res in points:
            rec = {axis_col: v / 1e6 if args.axis == "bandwidth" else v}
            rec.update(res.record())
            rows.append(rec)
        text = render_csv(rows, leading=[axis_col])
    else:
        headers = [f"{args.axis}={_fmt_csv(v / 1e6 if args.axis == 'bandwidth' else v)}" for v, _ in points]
        text = render_table([r for _, r in points], headers, rc.output.rounding)
    _emit(text, out)
    return EXIT_OK


def cmd_validate(args) -> int:
    rc = _load(args)
    kind = args.kind
    if kind is None:
        kind = "layout" if "layout" in rc.raw else "freqplan"
    if kind == "layout":
        layout, min_modules = rc.layout()
        report = validate_layout(layout, min_modules=min_modules)
    else:
        plan, max_h = rc.frequency_plan()
        report = validate_frequency_plan(plan, args.max_harmonic or max_h)
    if args.format == "csv":
        rows = report.records() or [{"kind": "", "message": "", "modules": ""}]
        for r in rows:
            r["modules"] = " ".join(str(i) for i in r["modules"]) if r["modules"] else ""
        text = render_csv(rows)
    else:
        text = report.render() + "\n"
    _emit(text, args.output)
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_fixtures(args) -> int:
    if args.name:
        _emit(fixture_text(args.name), args.output)
    else:
        _emit("".join(f"{name}\n" for name in FIXTURES), args.output)
    return EXIT_OK


def cmd_export_models(args) -> int:
    _emit(export_models_csv(), args.output)
    return EXIT_OK


class EvaluationError(Exception):
    def __init__(self, op: str, err: BudgetError):
        self.op = op
        self.err = err
        super().__init__(f"error in {op}: {err}")


def _run(op, fn, *a):
    try:
        return fn(*a)
    except BudgetError as e:
        raise EvaluationError(op, e) from e


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mmbudget", description="mmWave UE link-budget and throughput planner")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def source(sp):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--config", help="JSON configuration file")
        g.add_argument("--fixture", help="built-in configuration name (see 'fixtures')")
        sp.add_argument("--output", help="write output here instead of stdout")

    b = sub.add_parser("budget", help="evaluate one link-budget column")
    source(b)
    b.add_argument("--se-mode", help="shannon | backoff:<dB> | table")
    b.add_argument("--format", choices=("table", "csv"))
    b.set_defaults(func=cmd_budget)

    s = sub.add_parser("sweep", help="evaluate along one axis, one CSV row per point")
    source(s)
    s.add_argument("--axis", required=True, choices=("distance", "n_ant", "n_array", "bandwidth"))
    s.add_argument("--values", required=True, help="comma-separated; distance in m, bandwidth in MHz")
    s.add_argument("--se-mode", help="shannon | backoff:<dB> | table")
    s.add_argument("--format", choices=("table", "csv"))
    s.set_defaults(func=cmd_sweep)

    v = sub.add_parser("validate", help="check a UE layout or frequency plan")
    source(v)
    v.add_argument("--kind", choices=("layout", "freqplan"))
    v.add_argument("--max-harmonic", type=int)
    v.add_argument("--format", choices=("table", "csv"), default="table")
    v.set_defaults(func=cmd_validate)

    f = sub.add_parser("fixtures", help="list built-in fixtures or print one as JSON")
    f.add_argument("name", nargs="?")
    f.add_argument("--output")
    f.set_defaults(func=cmd_fixtures)

    e = sub.add_parser("export-models", help="write the fitted path-loss models as CSV")
    e.add_argument("--output")
    e.set_defaults(func=cmd_export_models)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EvaluationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except (BudgetError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
