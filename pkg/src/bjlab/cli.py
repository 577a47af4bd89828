"""
Command-line front end.

Commands:
  simulate   one run: trajectory CSV plus JSON summary
  sweep-n    repeat a run over total state counts n = 2m + 2
  sweep-v    repeat a run over couplings vbar
  table1     fitted versus golden-rule decay rates over a list of couplings
  spectrum   eigenvalues and bright weights of the coupled Hamiltonian

Settings come from an optional flat ``key = value`` file (``--config``);
command-line flags override it. Output goes to ``--out``, else $BJLAB_OUT,
else the working directory.

Exit codes: 0 success, 2 invalid config, 3 conservation violation,
4 fit failure in single-run mode.
"""

from __future__ import annotations

import argparse
import configparser
import dataclasses
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import io
from .analysis import detect_peaks, fit_decay, probability_series
from .errors import BJLabError, ConservationError, FitError, ValidationError
from .model import BRIGHT, ModelParams, golden_rule_gamma, make_params
from .ode import DEFAULT_DT_MAX, DEFAULT_SAMPLE_STRIDE, integrate, rhs_norm_preservation_check
from .spectral import solve_spectrum

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_CONSERVATION = 3
EXIT_FIT = 4

TABLE1_VBARS = (0.075, 0.05, 0.02, 0.01, 0.002)
TABLE1_EPSILON = 0.10
TABLE1_T_CAP = 240.0
SWEEP_N_DEFAULT = (26, 16, 10, 8, 6, 4, 2)
DEFAULT_TRACKED_K = (0, 1, 2)


@dataclass(frozen=True)
class RunConfig:
    m: int = 12
    vbar: float = 0.10
    epsilon: float = 0.25
    omega_s: float = 0.0
    t_final: float = 60.0
    dt_max: float = DEFAULT_DT_MAX
    sample_stride: int = DEFAULT_SAMPLE_STRIDE
    tracked_k: tuple[int, ...] | None = None
    fit_window: tuple[float, float] | None = None
    peak_prominence: float = 0.01
    allow_coarse: bool = False

    def __post_init__(self):
        self.params  # validates the model fields
        if self.tracked_k is None:
            object.__setattr__(self, "tracked_k", tuple(k for k in DEFAULT_TRACKED_K if k <= self.m))
        if not (math.isfinite(self.t_final) and self.t_final > 0):
            raise ValidationError(f"t_final must be > 0, got {self.t_final}")
        if not (math.isfinite(self.dt_max) and self.dt_max > 0):
            raise ValidationError(f"dt_max must be > 0, got {self.dt_max}")
        if self.dt_max > DEFAULT_DT_MAX and not self.allow_coarse:
            raise ValidationError(f"dt_max above {DEFAULT_DT_MAX} requires --allow-coarse")
        if self.sample_stride < 1:
            raise ValidationError(f"sample_stride must be >= 1, got {self.sample_stride}")
        for k in self.tracked_k:
            if not -self.m <= k <= self.m:
                raise ValidationError(f"tracked k={k} outside [-{self.m}, {self.m}]")
        if self.fit_window is not None and not self.fit_window[0] < self.fit_window[1]:
            raise ValidationError(f"fit_window must be increasing, got {self.fit_window}")
        if not self.peak_prominence >= 0:
            raise ValidationError("peak_prominence must be >= 0")

    @property
    def params(self) -> ModelParams:
        return make_params(self.m, self.vbar, self.epsilon, self.omega_s)

    def as_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["tracked_k"] = list(self.tracked_k)
        d["fit_window"] = None if self.fit_window is None else list(self.fit_window)
        return d

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)


def _int(text):
    value = float(text)
    if value != int(value):
        raise ValueError(f"expected an integer, got {text!r}")
    return int(value)


def _int_list(text):
    return tuple(_int(t) for t in str(text).replace(" ", "").split(",") if t)


def _float_list(text):
    return tuple(float(t) for t in str(text).replace(" ", "").split(",") if t)


def _window(text):
    if text is None or str(text).strip().lower() in ("", "none", "auto"):
        return None
    lo, hi = _float_list(text)
    return (lo, hi)


def _bool(text):
    s = str(text).strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


_PARSERS = {
    "m": _int,
    "vbar": float,
    "epsilon": float,
    "omega_s": float,
    "t_final": float,
    "dt_max": float,
    "sample_stride": _int,
    "tracked_k": _int_list,
    "fit_window": _window,
    "peak_prominence": float,
    "allow_coarse": _bool,
}


def read_config_file(path) -> dict:
    """Parse a flat ``key = value`` file into typed RunConfig fields."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    with open(path) as fh:
        parser.read_string("[run]\n" + fh.read(), source=str(path))
    out = {}
    for key, raw in parser["run"].items():
        name = key.replace("-", "_")
        if name not in _PARSERS:
            raise ValidationError(f"unknown config key {key!r} in {path}")
        try:
            out[name] = _PARSERS[name](raw)
        except ValueError as exc:
            raise ValidationError(f"bad value for {key!r}: {exc}") from None
    return out


def build_config(args) -> RunConfig:
    values = {}
    if getattr(args, "config", None):
        try:
            values.update(read_config_file(args.config))
        except OSError as exc:
            raise ValidationError(f"cannot read config: {exc}") from None
        except configparser.Error as exc:
            raise ValidationError(f"malformed config: {exc}") from None
    for name in _PARSERS:
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
    try:
        return RunConfig(**values)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(str(exc)) from None


# -- runs ---------------------------------------------------------------------


def _peaks_json(peaks):
    return [{"time": p.time, "value": p.value, "prominence": p.prominence} for p in peaks]


def run_config(config: RunConfig, *, timing: bool = False):
    """Integrate one config and build its summary.

    Returns (trajectory, summary dict, fit error or None). Conservation
    violations propagate as :class:`ConservationError`.
    """
    start = time.perf_counter()
    params = config.params
    traj = integrate(
        params, config.t_final, config.dt_max, config.sample_stride, allow_coarse=config.allow_coarse
    )
    fit_error = None
    try:
        fit = fit_decay(traj, config.fit_window)
    except FitError as exc:
        fit, fit_error = None, exc
    peaks = detect_peaks(probability_series(traj, BRIGHT), config.peak_prominence)
    summary = {
        "config": config.as_dict(),
        "gamma_theory": golden_rule_gamma(params),
        "gamma_fit": None if fit is None else fit.gamma,
        "fit_window": None if fit is None else list(fit.window),
        "rms_residual": None if fit is None else fit.rms_residual,
        "fit_error": None if fit_error is None else f"{type(fit_error).__name__}: {fit_error}",
        "peaks": _peaks_json(peaks),
        "max_conservation_dev": rhs_norm_preservation_check(traj),
        "runtime_seconds": round(time.perf_counter() - start, 3) if timing else None,
    }
    return traj, summary, fit_error


def _csv_meta(config: RunConfig) -> dict:
    meta = {}
    for key, value in config.as_dict().items():
        if isinstance(value, list):
            value = ",".join(fmt_any(v) for v in value)
        meta[key] = fmt_any(value)
    return meta


def fmt_any(v):
    if v is None:
        return "none"
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def config_from_csv_meta(meta: dict) -> RunConfig:
    """Rebuild the RunConfig recorded in a CSV's comment header."""
    values = {}
    for key, raw in meta.items():
        if key in _PARSERS:
            values[key] = _PARSERS[key](raw)
    return RunConfig(**values)


def sweep_row(config: RunConfig) -> dict:
    """Summary of one sweep point; conservation failures are recorded, not raised."""
    row = {"n": config.params.n, "m": config.m, "vbar": config.vbar, "epsilon": config.epsilon}
    try:
        _, summary, _ = run_config(config)
    except ConservationError as exc:
        row["error"] = f"ConservationError: {exc}"
        return row
    peaks = summary["peaks"]
    main = max(peaks, key=lambda p: p["value"]) if peaks else None
    row.update(
        gamma_theory=summary["gamma_theory"],
        gamma_fit=summary["gamma_fit"],
        fit_window=summary["fit_window"],
        rms_residual=summary["rms_residual"],
        fit_error=summary["fit_error"],
        first_peak=peaks[0] if peaks else None,
        second_peak=peaks[1] if len(peaks) > 1 else None,
        recurrence_peak=main,
        max_conservation_dev=summary["max_conservation_dev"],
        error=None,
    )
    return row


def _map(fn, items, jobs):
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def sweep_n(base: RunConfig, n_list, jobs: int = 1) -> list[dict]:
    """One run per total state count; n must be even and >= 2 (m = n/2 - 1)."""
    configs = []
    for n in n_list:
        if n < 2 or n % 2:
            raise ValidationError(f"n must be an even integer >= 2, got {n}")
        m = n // 2 - 1
        configs.append(base.replace(m=m, tracked_k=tuple(k for k in base.tracked_k if -m <= k <= m)))
    return _map(sweep_row, configs, jobs)


def sweep_v(base: RunConfig, vbar_list, jobs: int = 1) -> list[dict]:
    configs = [base.replace(vbar=float(v)) for v in vbar_list]
    return _map(sweep_row, configs, jobs)


def table1_t_final(params: ModelParams) -> float:
    """5 golden-rule decay constants of signal, capped at t = 240."""
    gamma = golden_rule_gamma(params)
    return TABLE1_T_CAP if gamma == 0 else min(TABLE1_T_CAP, 5.0 / gamma)


def _table1_row(config: RunConfig) -> list:
    gamma_theory = golden_rule_gamma(config.params)
    config = config.replace(t_final=table1_t_final(config.params))
    row = {"vbar": config.vbar, "gamma_fit": None, "gamma_theory": gamma_theory, "ratio": None,
           "t_final": config.t_final, "fit_lo": None, "fit_hi": None, "error": ""}
    try:
        traj = integrate(config.params, config.t_final, config.dt_max, config.sample_stride,
                         allow_coarse=config.allow_coarse)
        fit = fit_decay(traj, config.fit_window)
    except BJLabError as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    else:
        row.update(gamma_fit=fit.gamma, fit_lo=fit.window[0], fit_hi=fit.window[1])
        if gamma_theory > 0:
            row["ratio"] = fit.gamma / gamma_theory
    return row


TABLE1_COLUMNS = ["vbar", "gamma_fit", "gamma_theory", "ratio", "t_final", "fit_lo", "fit_hi", "error"]


def table1(base: RunConfig, epsilon: float = TABLE1_EPSILON, vbar_list=TABLE1_VBARS, jobs: int = 1) -> list[dict]:
    """Fitted against golden-rule decay rates; failures are recorded in the row."""
    configs = [base.replace(epsilon=float(epsilon), vbar=float(v)) for v in vbar_list]
    return _map(_table1_row, configs, jobs)


# -- commands -----------------------------------------------------------------


def _out_dir(args) -> Path:
    return Path(args.out or os.environ.get("BJLAB_OUT") or ".")


def cmd_simulate(args) -> int:
    config = build_config(args)
    out = _out_dir(args)
    try:
        traj, summary, fit_error = run_config(config, timing=args.timing)
    except ConservationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONSERVATION
    io.write_trajectory_csv(out / f"{args.name}.csv", traj, config.tracked_k, _csv_meta(config))
    io.write_json(out / f"{args.name}.json", summary)
    if fit_error is not None:
        print(f"error: decay fit failed: {fit_error}", file=sys.stderr)
        return EXIT_FIT
    return EXIT_OK


def cmd_sweep_n(args) -> int:
    base = build_config(args)
    rows = sweep_n(base, args.n_list, args.jobs)
    io.write_json(_out_dir(args) / f"{args.name}.json", {"base": base.as_dict(), "rows": rows})
    return EXIT_OK


def cmd_sweep_v(args) -> int:
    base = build_config(args)
    rows = sweep_v(base, args.vbar_list, args.jobs)
    io.write_json(_out_dir(args) / f"{args.name}.json", {"base": base.as_dict(), "rows": rows})
    return EXIT_OK


def cmd_table1(args) -> int:
    base = build_config(args)
    rows = table1(base, args.table_epsilon, args.vbar_list, args.jobs)
    meta = {"epsilon": repr(float(args.table_epsilon)), "m": str(base.m), "dt_max": repr(base.dt_max)}
    io.write_table_csv(
        _out_dir(args) / f"{args.name}.csv",
        TABLE1_COLUMNS,
        ([r[c] for c in TABLE1_COLUMNS] for r in rows),
        meta,
    )
    return EXIT_OK


def cmd_spectrum(args) -> int:
    config = build_config(args)
    spectrum = solve_spectrum(config.params)
    meta = {k: _csv_meta(config)[k] for k in ("m", "vbar", "epsilon", "omega_s")}
    io.write_spectrum_csv(_out_dir(args) / f"{args.name}.csv", spectrum, meta)
    return EXIT_OK


def _add_run_flags(p):
    p.add_argument("--config", metavar="PATH", help="flat key = value settings file")
    p.add_argument("--out", metavar="DIR", help="output directory (default $BJLAB_OUT or .)")
    p.add_argument("--m", type=_int, help="half-width of the dark ladder")
    p.add_argument("--vbar", type=float, help="bright-dark coupling")
    p.add_argument("--epsilon", type=float, help="dark level spacing")
    p.add_argument("--omega-s", dest="omega_s", type=float, help="bright state frequency")
    p.add_argument("--t-final", dest="t_final", type=float)
    p.add_argument("--dt-max", dest="dt_max", type=float)
    p.add_argument("--sample-stride", dest="sample_stride", type=_int)
    p.add_argument("--tracked-k", dest="tracked_k", type=_int_list, metavar="K,K,...")
    p.add_argument("--fit-window", dest="fit_window", type=_window, metavar="LO,HI")
    p.add_argument("--peak-prominence", dest="peak_prominence", type=float)
    p.add_argument("--allow-coarse", dest="allow_coarse", action="store_const", const=True,
                   help="permit --dt-max above 0.001")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bjlab",
        description="Survival probability of a bright state coupled to a finite level ladder",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="single run: trajectory CSV + summary JSON")
    _add_run_flags(p)
    p.add_argument("--name", default="simulate", help="output file stem")
    p.add_argument("--timing", action="store_true", help="record runtime_seconds in the summary")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep-n", help="vary the total state count n")
    _add_run_flags(p)
    p.add_argument("--n-list", type=_int_list, default=SWEEP_N_DEFAULT, metavar="N,N,...")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--name", default="sweep_n")
    p.set_defaults(func=cmd_sweep_n)

    p = sub.add_parser("sweep-v", help="vary the coupling vbar")
    _add_run_flags(p)
    p.add_argument("--vbar-list", type=_float_list, default=(0.10, 0.075, 0.05, 0.02), metavar="V,V,...")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--name", default="sweep_v")
    p.set_defaults(func=cmd_sweep_v)

    p = sub.add_parser("table1", help="fitted versus golden-rule decay rates")
    _add_run_flags(p)
    p.add_argument("--table-epsilon", type=float, default=TABLE1_EPSILON, help="spacing for the table rows")
    p.add_argument("--vbar-list", type=_float_list, default=TABLE1_VBARS, metavar="V,V,...")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--name", default="table1")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("spectrum", help="eigenvalues and bright weights")
    _add_run_flags(p)
    p.add_argument("--name", default="spectrum")
    p.set_defaults(func=cmd_spectrum)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ConservationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONSERVATION


if __name__ == "__main__":
    sys.exit(main())
