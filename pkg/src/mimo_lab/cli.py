"""
Command-line experiment runner.

Configuration documents are flat ``key = value`` files (``#`` starts a
comment). Results are written as CSV with a fixed header so any plotting
tool can regenerate the figures.

Usage::

    mimo-lab run scenario.cfg [-o out.csv]
    mimo-lab sweep fig1.cfg -o fig1.csv
    mimo-lab rot --precoder mf --K 10 --snr-t-db 10 --sigma-a-db 1 --sigma-phi-deg 20
    mimo-lab validate
"""

import argparse
import dataclasses
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field

from . import analytic
from .channel import LosConfig
from .engine import MODELS, PRECODERS, ScenarioConfig, analytic_prediction, estimate_rates
from .errors import ArgumentError, ConfigParseError, MimoLabError
from .impairments import ImpairmentConfig

__all__ = [
    "CSV_HEADER",
    "SWEEP_AXES",
    "SweepSpec",
    "ResultRow",
    "SweepResult",
    "SweepError",
    "parse_config",
    "emit_config",
    "run_sweep",
    "format_csv",
    "write_csv",
    "rule_of_thumb_report",
    "main",
]

CSV_HEADER = (
    "model,precoder,M,K,snr_t_db,sigma_a_db,sigma_phi_deg,realizations,"
    "source,sum_rate,sum_rate_stderr,mean_sinr_linear"
)
SWEEP_AXES = ("M", "K", "snr_t_db", "sigma_a_db", "sigma_phi_deg")
EMIT = ("analytic", "mc", "both")
REQUIRED = ("M", "K", "snr_t_db", "model", "precoder", "realizations", "seed")
KEYS = REQUIRED + (
    "n0", "sigma_a_db", "sigma_phi_deg", "sweep", "values", "emit",
    "los_spacing_wl", "los_theta3db_deg", "los_am_db", "los_normalize", "error_redraw",
    "on_singular",
)
_INT_KEYS = {"M", "K", "realizations", "seed"}
_FLOAT_KEYS = {"snr_t_db", "n0", "sigma_a_db", "sigma_phi_deg", "los_spacing_wl", "los_theta3db_deg", "los_am_db"}
_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


class SweepError(MimoLabError):
    """A scenario of a sweep failed."""

    def __init__(self, axis, value, precoder, cause):
        self.axis = axis
        self.value = value
        self.precoder = precoder
        self.cause = cause
        at = f"{axis}={_fmt(value)}, " if axis else ""
        super().__init__(f"{at}precoder={precoder}: {cause}")


@dataclass(frozen=True)
class SweepSpec:
    """A base scenario, an optional sweep axis and what to emit.

    `precoders` lists every precoder evaluated per axis value; `base`
    carries the first one. With ``emit_mc`` off, `base.realizations` is a
    placeholder and no random numbers are drawn.
    """

    base: ScenarioConfig
    precoders: tuple = ("mf",)
    axis: str = None
    values: tuple = ()
    emit_analytic: bool = True
    emit_mc: bool = True
    realizations: int = 1

    def scenarios(self):
        """Yield ``(axis_value, scenario)`` for every axis value and precoder."""
        points = self.values if self.axis else (None,)
        for v in points:
            for p in self.precoders:
                yield v, _with_axis(self.base, self.axis, v, p)


def _with_axis(base, axis, value, precoder):
    changes = {"precoder": precoder}
    if axis in ("M", "K"):
        changes[axis] = int(value)
    elif axis == "snr_t_db":
        changes[axis] = float(value)
    elif axis == "sigma_a_db":
        changes["impairments"] = dataclasses.replace(base.impairments, sigma_a_db=float(value))
    elif axis == "sigma_phi_deg":
        changes["impairments"] = dataclasses.replace(base.impairments, sigma_phi_deg=float(value))
    return dataclasses.replace(base, **changes)


def _parse_number(key, text, line):
    try:
        if key in _INT_KEYS:
            return int(text)
        return float(text)
    except ValueError:
        kind = "an integer" if key in _INT_KEYS else "a number"
        raise ConfigParseError(f"expected {kind}, got {text!r}", key, line) from None


def _parse_values(text, axis, line):
    integer = axis in ("M", "K")
    conv = int if integer else float
    try:
        if ":" in text:
            parts = [conv(p) for p in text.split(":")]
            if len(parts) != 3:
                raise ValueError
            start, step, stop = parts
            if step <= 0:
                raise ConfigParseError("range step must be positive", "values", line)
            n = int(math.floor((stop - start) / step + 1e-9)) + 1
            vals = [start + i * step for i in range(max(n, 0))]
            if not integer:
                vals = [round(v, 12) for v in vals]
        else:
            vals = [conv(p) for p in text.split(",") if p.strip()]
    except ValueError:
        form = "integers" if integer else "numbers"
        raise ConfigParseError(f"expected a comma list or start:step:stop of {form}", "values", line) from None
    if not vals:
        raise ConfigParseError("no axis values", "values", line)
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise ConfigParseError("axis values must be strictly increasing", "values", line)
    return tuple(vals)


def parse_config(text):
    """Parse a configuration document into a validated `SweepSpec`.

    Raises
    ------
    ConfigParseError
        Naming the offending key and line.
    """
    raw = {}
    lines = {}
    for lineno, full in enumerate(text.splitlines(), start=1):
        body = full.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigParseError(f"expected 'key = value', got {body!r}", None, lineno)
        key, value = (s.strip() for s in body.split("=", 1))
        if key not in KEYS:
            raise ConfigParseError("unknown key", key, lineno)
        if key in raw:
            raise ConfigParseError("duplicate key", key, lineno)
        if not value:
            raise ConfigParseError("empty value", key, lineno)
        raw[key] = value
        lines[key] = lineno

    axis = raw.get("sweep")
    if axis is not None and axis not in SWEEP_AXES:
        raise ConfigParseError(f"sweep axis must be one of {', '.join(SWEEP_AXES)}", "sweep", lines["sweep"])
    if ("values" in raw) != (axis is not None):
        key = "values" if axis is not None else "sweep"
        missing = "sweep" if "values" in raw else "values"
        raise ConfigParseError(f"'sweep' and 'values' must be given together ({missing} missing)", key, lines.get(key))
    for key in REQUIRED:
        if key not in raw and key != axis:
            raise ConfigParseError("missing required key", key, None)

    vals = {}
    for key, text_value in raw.items():
        if key in _INT_KEYS or key in _FLOAT_KEYS:
            vals[key] = _parse_number(key, text_value, lines[key])

    model = raw["model"]
    if model not in MODELS:
        raise ConfigParseError(f"model must be one of {', '.join(MODELS)}", "model", lines["model"])
    precoders = tuple(p.strip() for p in raw["precoder"].split(",") if p.strip())
    bad = [p for p in precoders if p not in PRECODERS]
    if bad or not precoders:
        raise ConfigParseError(f"precoder must be from {', '.join(PRECODERS)}", "precoder", lines["precoder"])
    if len(set(precoders)) != len(precoders):
        raise ConfigParseError("duplicate precoder", "precoder", lines["precoder"])
    emit = raw.get("emit", "both")
    if emit not in EMIT:
        raise ConfigParseError(f"emit must be one of {', '.join(EMIT)}", "emit", lines.get("emit"))
    emit_mc = emit in ("mc", "both")
    realizations = vals["realizations"]
    if realizations < (1 if emit_mc else 0):
        need = ">= 1 when Monte Carlo is emitted" if emit_mc else ">= 0"
        raise ConfigParseError(f"realizations must be {need}", "realizations", lines["realizations"])
    redraw = raw.get("error_redraw", "per_realization")
    if redraw not in ("per_realization", "fixed"):
        raise ConfigParseError("error_redraw must be per_realization or fixed", "error_redraw", lines["error_redraw"])
    on_singular = raw.get("on_singular", "raise")
    if on_singular not in ("raise", "skip"):
        raise ConfigParseError("on_singular must be raise or skip", "on_singular", lines["on_singular"])
    normalize = raw.get("los_normalize", "true").lower()
    if normalize not in _TRUE | _FALSE:
        raise ConfigParseError("expected a boolean", "los_normalize", lines.get("los_normalize"))
    values = _parse_values(raw["values"], axis, lines["values"]) if axis else ()
    if axis:
        # the base scenario sits at the first axis value
        vals[axis] = values[0]

    def build(key, fn):
        try:
            return fn()
        except ArgumentError as exc:
            raise ConfigParseError(str(exc), key, lines.get(key)) from None

    los = build("los_spacing_wl" if "los_spacing_wl" in raw else "los_theta3db_deg", lambda: LosConfig(
        spacing=vals.get("los_spacing_wl", 0.6),
        theta_3db=vals.get("los_theta3db_deg", 90.0),
        am_db=vals.get("los_am_db", 20.0),
        normalize=normalize in _TRUE,
    ))
    impairments = build("sigma_a_db", lambda: ImpairmentConfig(vals.get("sigma_a_db", 0.0), vals.get("sigma_phi_deg", 0.0)))
    base_kwargs = dict(
        M=vals["M"], K=vals["K"], snr_t_db=vals["snr_t_db"],
        model=model, precoder=precoders[0], impairments=impairments,
        realizations=max(realizations, 1), seed=vals["seed"], n0=vals.get("n0", 1.0),
        los=los, error_redraw=redraw, on_singular=on_singular,
    )
    base = build("values" if axis else "M", lambda: ScenarioConfig(**base_kwargs))
    spec = SweepSpec(base, precoders, axis, values, emit in ("analytic", "both"), emit_mc, realizations)
    try:
        list(spec.scenarios())
    except ArgumentError as exc:
        key = "values" if axis else "M"
        raise ConfigParseError(str(exc), key, lines.get(key)) from None
    return spec


def _fmt(x):
    """Six significant digits, integers printed without a decimal point."""
    if isinstance(x, int):
        return str(x)
    return f"{x:.6g}"


def emit_config(spec):
    """Render `spec` as a configuration document; inverse of `parse_config`."""
    b = spec.base
    emit = "both" if spec.emit_analytic and spec.emit_mc else ("mc" if spec.emit_mc else "analytic")
    items = [
        ("M", b.M), ("K", b.K), ("snr_t_db", repr(float(b.snr_t_db))), ("n0", repr(float(b.n0))),
        ("model", b.model), ("precoder", ",".join(spec.precoders)),
        ("sigma_a_db", repr(float(b.impairments.sigma_a_db))),
        ("sigma_phi_deg", repr(float(b.impairments.sigma_phi_deg))),
        ("realizations", spec.realizations), ("seed", b.seed), ("emit", emit),
        ("los_spacing_wl", repr(float(b.los.spacing))), ("los_theta3db_deg", repr(float(b.los.theta_3db))),
        ("los_am_db", repr(float(b.los.am_db))), ("los_normalize", "true" if b.los.normalize else "false"),
        ("error_redraw", b.error_redraw), ("on_singular", b.on_singular),
    ]
    if spec.axis:
        items = [(k, v) for k, v in items if k != spec.axis]
        items.append(("sweep", spec.axis))
        items.append(("values", ",".join(repr(v) for v in spec.values)))
    return "".join(f"{k} = {v}\n" for k, v in items)


@dataclass(frozen=True)
class ResultRow:
    model: str
    precoder: str
    M: int
    K: int
    snr_t_db: float
    sigma_a_db: float
    sigma_phi_deg: float
    realizations: int
    source: str
    sum_rate: float
    sum_rate_stderr: float = None
    mean_sinr_linear: float = None

    def csv_line(self):
        cells = [
            self.model, self.precoder, str(self.M), str(self.K), _fmt(float(self.snr_t_db)),
            _fmt(float(self.sigma_a_db)), _fmt(float(self.sigma_phi_deg)), str(self.realizations),
            self.source, _fmt(float(self.sum_rate)),
            "" if self.sum_rate_stderr is None else _fmt(float(self.sum_rate_stderr)),
            _fmt(float(self.mean_sinr_linear)),
        ]
        return ",".join(cells)


@dataclass
class SweepResult:
    rows: list = field(default_factory=list)
    failures: list = field(default_factory=list)


def _row(s, source, sum_rate, stderr, sinr, realizations):
    return ResultRow(
        s.model, s.precoder, s.M, s.K, s.snr_t_db, s.impairments.sigma_a_db,
        s.impairments.sigma_phi_deg, realizations, source, sum_rate, stderr, sinr,
    )


def run_sweep(spec, workers=None, strict=True):
    """Evaluate every scenario of `spec`.

    Produces one ``analytic`` row per scenario with a closed form and one
    ``mc`` row per scenario, sorted by axis value, then source, then the
    order of `spec.precoders`.

    Parameters
    ----------
    spec : SweepSpec
    workers : int, optional
        Monte Carlo threads; results do not depend on it.
    strict : bool
        Raise `SweepError` on the first failing scenario. Otherwise
        failures are collected in the result and the sweep continues.

    Returns
    -------
    SweepResult
    """
    result = SweepResult()
    keyed = []
    order = {p: i for i, p in enumerate(spec.precoders)}
    for value, s in spec.scenarios():
        try:
            rows = []
            if spec.emit_analytic:
                sinr = analytic_prediction(s)
                if sinr is not None:
                    rows.append(_row(s, "analytic", analytic.sum_rate_analytic(s.K, sinr), None, sinr, 0))
                elif not spec.emit_mc:
                    raise ArgumentError(f"no closed form for model={s.model}, precoder={s.precoder} with these impairments")
            if spec.emit_mc:
                rep = estimate_rates(s, workers)
                rows.append(_row(s, "mc", rep.sum_rate, rep.sum_rate_stderr, rep.mean_sinr, rep.realizations))
        except MimoLabError as exc:
            err = SweepError(spec.axis, value, s.precoder, exc)
            if strict:
                raise err from exc
            result.failures.append(err)
            continue
        sort_value = 0 if value is None else value
        keyed.extend(((sort_value, r.source, order[r.precoder]), r) for r in rows)
    keyed.sort(key=lambda kr: kr[0])
    result.rows = [r for _, r in keyed]
    return result


def format_csv(rows):
    return CSV_HEADER + "\n" + "".join(r.csv_line() + "\n" for r in rows)


def write_csv(path, rows):
    """Write `rows` to `path`, replacing any existing file atomically."""
    text = format_csv(rows)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".mimo-lab-", suffix=".csv", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def rule_of_thumb_report(precoder, K, snr_t_db=None, impairments=None):
    """Antenna count for an SINR 3 dB below the interference-free value.

    Returns
    -------
    count : int
    text : str
        One-line human-readable report.
    """
    precoder = precoder.lower()
    if precoder == "mf" and snr_t_db is None:
        raise ArgumentError("MF rule of thumb needs snr_t_db")
    snr = analytic.db_to_linear(snr_t_db) if snr_t_db is not None else float("nan")
    config = impairments if precoder == "mf" else None
    exact = analytic.required_antennas(precoder, K, snr, config)
    count = analytic.antennas_for_3db(precoder, K, snr, config)
    parts = [f"precoder={precoder}", f"K={K}"]
    if precoder == "mf":
        parts.append(f"snr_t_db={_fmt(float(snr_t_db))}")
        if config is not None and not config.is_zero:
            parts.append(f"sigma_a_db={_fmt(float(config.sigma_a_db))}")
            parts.append(f"sigma_phi_deg={_fmt(float(config.sigma_phi_deg))}")
    return count, f"{' '.join(parts)}: M = {count} (unrounded {exact:.6g})"


def _build_parser():
    parser = argparse.ArgumentParser(prog="mimo-lab", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (("run", "evaluate a single scenario"), ("sweep", "evaluate a parameter sweep")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("config", help="configuration file ('-' for stdin)")
        p.add_argument("-o", "--output", help="CSV output path (default: stdout)")
    p = sub.add_parser("rot", help="rule-of-thumb antenna count for the 3 dB point")
    p.add_argument("--precoder", choices=("mf", "zf"), required=True)
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--snr-t-db", type=float)
    p.add_argument("--sigma-a-db", type=float, default=0.0)
    p.add_argument("--sigma-phi-deg", type=float, default=0.0)
    p = sub.add_parser("validate", help="run the statistical self-checks")
    p.add_argument("--seed", type=int, default=2024)
    return parser


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        if args.command in ("run", "sweep"):
            spec = parse_config(_read(args.config))
            if args.command == "run" and spec.axis:
                raise ConfigParseError("'run' takes a single scenario; use 'sweep'", "sweep")
            result = run_sweep(spec, strict=False)
            if args.output:
                write_csv(args.output, result.rows)
            else:
                sys.stdout.write(format_csv(result.rows))
            for err in result.failures:
                print(f"failed: {err}", file=sys.stderr)
            return 1 if result.failures else 0
        if args.command == "rot":
            config = ImpairmentConfig(args.sigma_a_db, args.sigma_phi_deg)
            _, text = rule_of_thumb_report(args.precoder, args.K, args.snr_t_db, config)
            print(text)
            return 0
        from .validation import run_all

        checks = run_all(args.seed)
        for c in checks:
            print(c.line())
        return 0 if all(c.passed for c in checks) else 1
    except (MimoLabError, OSError) as exc:
        print(f"mimo-lab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
