"""Command-line front end.

Subcommands
-----------
transform    samples CSV -> spectrum CSV (+ JSON summary)
reconstruct  spectrum CSV -> time series CSV at given times or an extrapolated grid
compare      samples CSV -> one spectrum CSV per method
resolution   samples CSV -> relative resolution curve
simulate     regenerate one of the fig1 ... fig6 experiments

Exit codes: 0 success, 1 numerical failure, 2 usage or I/O error.  Errors
are reported on stderr as a one-line JSON object.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from .baselines import capon_iterative, classical_dft, hrdft
from .engine import EngineOptions, StopCode, resolution_curve, run_edft
from .errors import EDFTError, SequenceError, SingularOrIndefinite
from .inverse import extrapolate_uniform, inedft
from .signal_model import (
    FrequencyGrid,
    SampledSequence,
    format_float,
    read_samples_csv,
    validate_sequence,
    write_samples_csv,
)
from .testgen import (
    TestSignalSpec,
    gen_complex_test_signal,
    gen_jittered_times,
    gen_marple_kay_surrogate,
    random_skip,
)

METHODS = ("dft", "edft", "nedft", "hrdft", "capon")
SCENARIOS = ("fig1", "fig2", "fig3", "fig4a", "fig4b", "fig4c", "fig5", "fig6")
COMMANDS = ("transform", "reconstruct", "compare", "simulate", "resolution")
SPECTRUM_HEADER = ["f", "F_re", "F_im", "S_re", "S_im", "psd_db", "power_db", "fres"]

EXIT_OK, EXIT_NUMERIC, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    input_path: Optional[str] = None
    output_path: Optional[str] = None
    method: str = "edft"
    n_freqs: Optional[int] = None
    f_upper: Optional[float] = None
    max_iters: int = 30
    rel_deviation: float = 0.0005
    rel_threshold: float = 0.0001
    weights_path: Optional[str] = None
    seed: int = 0
    scenario: Optional[str] = None
    times_path: Optional[str] = None
    extrapolate: Optional[int] = None
    methods: Optional[List[str]] = None

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.output_path is None:
            raise UsageError("an output path is required (-o)")
        if self.command == "simulate":
            if self.scenario not in SCENARIOS:
                raise UsageError(f"unknown scenario {self.scenario!r}; choose from {', '.join(SCENARIOS)}")
        elif self.input_path is None:
            raise UsageError(f"{self.command} needs an input file")
        if self.method not in METHODS:
            raise UsageError(f"unknown method {self.method!r}")
        for m in self.methods or []:
            if m not in METHODS:
                raise UsageError(f"unknown method {m!r}")
        if self.n_freqs is not None and self.n_freqs < 1:
            raise UsageError("--n must be positive")
        if self.f_upper is not None and not self.f_upper > 0:
            raise UsageError("--f-upper must be positive")
        if self.max_iters < 1:
            raise UsageError("--max-iters must be >= 1")
        if not (self.rel_deviation > 0 and self.rel_threshold > 0):
            raise UsageError("tolerances must be positive")
        if self.command == "reconstruct" and self.times_path is None and self.extrapolate is None:
            raise UsageError("reconstruct needs --times or --extrapolate")
        if self.extrapolate is not None and self.extrapolate < 0:
            raise UsageError("--extrapolate must be nonnegative")

    def engine_options(self, initial_weights=None) -> EngineOptions:
        return EngineOptions(max_iterations=self.max_iters, rel_deviation=self.rel_deviation,
                             rel_threshold=self.rel_threshold, initial_weights=initial_weights)


# figures are shown after the 10th iteration, the jittered fig3 run after the 15th
_COMMAND_DEFAULTS = {"simulate": {"max_iters": 10}}
_SCENARIO_DEFAULTS = {"fig3": {"max_iters": 15}}


# -- I/O helpers -------------------------------------------------------------------

def _fmt(v: float) -> str:
    return format_float(v)


def _db(p) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return 10 * np.log10(p)


def _out_file(path) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def _summary_path(out: Path) -> Path:
    return out.with_suffix(".json") if out.suffix == ".csv" else out.with_name(out.name + ".json")


def _write_json(path, obj) -> None:
    with open(_out_file(path), "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_rows(path, header, rows) -> None:
    with open(_out_file(path), "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) if not isinstance(v, str) else v for v in row])


def _read_table(path) -> Dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise SequenceError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    cols: Dict[str, list] = {h: [] for h in header}
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or not "".join(row).strip():
            continue
        try:
            for h, v in zip(header, row):
                cols[h].append(float(v) if v.strip() else np.nan)
        except ValueError as exc:
            raise SequenceError(f"{path}:{lineno}: cannot parse row {row}") from exc
    return {h: np.asarray(v, dtype=float) for h, v in cols.items()}


def read_spectrum_csv(path):
    """Return ``(grid, F)`` from a spectrum file written by ``transform``."""
    tab = _read_table(path)
    for col in ("f", "F_re", "F_im"):
        if col not in tab:
            raise SequenceError(f"{path}: missing column {col!r}")
    f = tab["f"]
    F = tab["F_re"] + 1j * tab["F_im"]
    if f.size == 0:
        raise SequenceError(f"{path}: no spectrum rows")
    N = f.size
    fs = np.sort(f)
    if N >= 2:
        df = (fs[-1] - fs[0]) / (N - 1)
        cand = FrequencyGrid.uniform(N, N * df / 2) if df > 0 else None
        if cand is not None and np.allclose(np.sort(cand.freqs), fs, rtol=0, atol=1e-9 * N * df):
            idx = np.rint(f / df).astype(int) % N
            if np.unique(idx).size == N:
                Fu = np.empty(N, complex)
                Fu[idx] = F
                return cand, Fu
    return FrequencyGrid.arbitrary(f), F


def _read_weights(path, grid: FrequencyGrid) -> np.ndarray:
    tab = _read_table(path)
    if "w" not in tab:
        raise SequenceError(f"{path}: expected a 'w' column")
    w = tab["w"]
    if w.size != grid.N:
        raise SequenceError(f"{path}: {w.size} weights for {grid.N} frequencies")
    if "f" in tab:
        out = np.empty(grid.N)
        out[[grid.index_of(f) for f in tab["f"]]] = w
        return out
    return w


def _read_times(path) -> np.ndarray:
    tab = _read_table(path)
    if "t" not in tab:
        raise SequenceError(f"{path}: expected a 't' column")
    return tab["t"]


# -- running methods ------------------------------------------------------------------

@dataclass
class MethodOutput:
    method: str
    F: np.ndarray
    S: Optional[np.ndarray]
    ratio: Optional[np.ndarray]
    iterations: int
    stop_code: int
    budget_deviation: float
    path: str
    grid: FrequencyGrid
    k_known: int

    def summary(self) -> dict:
        return {
            "method": self.method,
            "iterations": int(self.iterations),
            "stop_code": int(self.stop_code),
            # null when the solve failed outright
            "budget_deviation": float(self.budget_deviation)
            if np.isfinite(self.budget_deviation) else None,
            "n": int(self.grid.N),
            "k_known": int(self.k_known),
            "f_upper": float(self.grid.upper_freq),
            "path": self.path,
        }


def _sample_period(seq: SampledSequence) -> float:
    g = seq.uniform_grid()
    return g.sample_period if g is not None else seq.mean_period


def make_grid(seq: SampledSequence, n_freqs: Optional[int], f_upper: Optional[float]) -> FrequencyGrid:
    N = seq.K if n_freqs is None else n_freqs
    f_u = 0.5 / _sample_period(seq) if f_upper is None else f_upper
    return FrequencyGrid.uniform(N, f_u)


def run_method(method: str, seq: SampledSequence, grid: FrequencyGrid,
               opts: EngineOptions) -> MethodOutput:
    if method == "dft":
        validate_sequence(seq)
        r = classical_dft(seq, grid)
        return MethodOutput(method, r.F, r.S, r.ratio, 1, 0, 0.0, "direct", grid, r.k_known)
    if method in ("edft", "nedft"):
        r = run_edft(seq, grid, opts, path="dense" if method == "nedft" else "auto")
        return MethodOutput(method, r.F, r.S, r.ratio, r.iterations_done, r.stop_code,
                            r.budget_deviation, r.path, grid, r.k_known)
    if method == "capon":
        r = capon_iterative(seq, grid, opts)
        return MethodOutput(method, r.F, r.S, r.ratio, r.iterations_done, r.stop_code,
                            r.budget_deviation, r.path, grid, r.k_known)
    if method == "hrdft":
        r = hrdft(seq, grid, opts)
        return MethodOutput(method, r.F, None, None, r.iterations_done, r.stop_code,
                            0.0, "hrdft", grid, r.k_known)
    raise UsageError(f"unknown method {method!r}")


def _fres(out: MethodOutput, seq: SampledSequence) -> Optional[np.ndarray]:
    if out.ratio is None:
        return None
    return resolution_curve(out, f_u=out.grid.upper_freq, T_mean=seq.mean_period,
                            K_known=out.k_known)


def write_spectrum_csv(path, out: MethodOutput, seq: SampledSequence) -> None:
    grid = out.grid
    order = grid.shifted_order()
    nan = np.full(grid.N, np.nan)
    S = out.S if out.S is not None else nan + 0j
    fres = _fres(out, seq)
    fres = nan if fres is None else fres
    psd = _db(np.abs(out.F) ** 2 / grid.N)
    power = _db(np.abs(S) ** 2) if out.S is not None else nan
    cols = [grid.freqs, out.F.real, out.F.imag, S.real, S.imag, psd, power, fres]
    _write_rows(path, SPECTRUM_HEADER, zip(*(c[order] for c in cols)))


def _write_resolution(path, out: MethodOutput, seq: SampledSequence) -> None:
    order = out.grid.shifted_order()
    _write_rows(path, ["f", "fres"], zip(out.grid.freqs[order], _fres(out, seq)[order]))


def _write_truth(path, grid: FrequencyGrid, power) -> None:
    order = grid.shifted_order()
    _write_rows(path, ["f", "psd_db"], zip(grid.freqs[order], _db(np.asarray(power))[order]))


# -- commands -------------------------------------------------------------------------

def cmd_transform(cfg: RunConfig) -> int:
    seq = read_samples_csv(cfg.input_path)
    validate_sequence(seq)
    grid = make_grid(seq, cfg.n_freqs, cfg.f_upper)
    w0 = _read_weights(cfg.weights_path, grid) if cfg.weights_path else None
    out = run_method(cfg.method, seq, grid, cfg.engine_options(w0))
    dest = _out_file(cfg.output_path)
    write_spectrum_csv(dest, out, seq)
    _write_json(_summary_path(dest), out.summary())
    if out.stop_code == StopCode.BUDGET_DEVIATION and out.iterations == 0:
        _report_error("NumericalFailure", "budget deviation on the first iteration")
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_reconstruct(cfg: RunConfig) -> int:
    grid, F = read_spectrum_csv(cfg.input_path)
    if cfg.times_path is not None:
        t = _read_times(cfg.times_path)
        y = inedft(F, grid, t)
    else:
        M = cfg.extrapolate
        if grid.is_uniform and M <= grid.N:
            y = extrapolate_uniform(F, grid)[:M]
        else:
            y = inedft(F, grid, np.arange(M) / (2 * grid.upper_freq))
        t = np.arange(M) / (2 * grid.upper_freq)
    write_samples_csv(_out_file(cfg.output_path), t, y)
    return EXIT_OK


def cmd_compare(cfg: RunConfig) -> int:
    seq = read_samples_csv(cfg.input_path)
    validate_sequence(seq)
    grid = make_grid(seq, cfg.n_freqs, cfg.f_upper)
    opts = cfg.engine_options()
    outdir = Path(cfg.output_path)
    summary = {}
    for m in cfg.methods or ["dft", "edft", "hrdft", "capon"]:
        out = run_method(m, seq, grid, opts)
        write_spectrum_csv(outdir / f"{m}.csv", out, seq)
        summary[m] = out.summary()
    _write_json(outdir / "summary.json", summary)
    return EXIT_OK


def cmd_resolution(cfg: RunConfig) -> int:
    seq = read_samples_csv(cfg.input_path)
    validate_sequence(seq)
    grid = make_grid(seq, cfg.n_freqs, cfg.f_upper)
    out = run_method(cfg.method, seq, grid, cfg.engine_options())
    if out.ratio is None:
        raise UsageError(f"method {cfg.method!r} has no resolution curve")
    _write_resolution(_out_file(cfg.output_path), out, seq)
    return EXIT_OK


def cmd_simulate(cfg: RunConfig) -> int:
    outdir = Path(cfg.output_path)
    outdir.mkdir(parents=True, exist_ok=True)
    summary = _SCENARIO_RUNNERS[cfg.scenario](cfg, outdir)
    summary["scenario"] = cfg.scenario
    summary["seed"] = cfg.seed
    _write_json(outdir / "summary.json", summary)
    return EXIT_OK


# -- scenarios --------------------------------------------------------------------------

def _emit(outdir: Path, name: str, seq, grid, opts, method: str, resolution: bool = True) -> MethodOutput:
    out = run_method(method, seq, grid, opts)
    write_spectrum_csv(outdir / f"{name}.csv", out, seq)
    if resolution and out.ratio is not None:
        _write_resolution(outdir / f"resolution_{name}.csv", out, seq)
    return out


def _write_seq(path, seq: SampledSequence) -> None:
    write_samples_csv(path, seq.times, seq.values, seq.known_mask)


def _exponent_db(out: MethodOutput, f0: float) -> float:
    return float(_db(np.abs(out.S[out.grid.index_of(f0)]) ** 2))


def _scenario_fig1(cfg, outdir):
    spec = TestSignalSpec(seed=cfg.seed, n_freqs=cfg.n_freqs or 1000)
    seq, truth = gen_complex_test_signal(spec)
    opts = cfg.engine_options()
    _write_seq(outdir / "samples.csv", seq)
    _write_truth(outdir / "truth.csv", truth.grid, truth.power)
    d = _emit(outdir, "dft", seq, truth.grid, opts, "dft")
    e = _emit(outdir, "edft", seq, truth.grid, opts, "edft")
    return {"methods": {"dft": d.summary(), "edft": e.summary()},
            "exponent_power_db": _exponent_db(e, spec.exponent_freq)}


def _scenario_fig2(cfg, outdir):
    spec = TestSignalSpec(seed=cfg.seed, n_freqs=cfg.n_freqs or 1000)
    times = gen_jittered_times(spec.K, spec.T, 0.8 * spec.T, cfg.seed)
    seq, truth = gen_complex_test_signal(spec, times=times)
    opts = cfg.engine_options()
    _write_seq(outdir / "samples.csv", seq)
    _write_truth(outdir / "truth.csv", truth.grid, truth.power)
    d = _emit(outdir, "dft", seq, truth.grid, opts, "dft")
    e = _emit(outdir, "edft", seq, truth.grid, opts, "nedft")
    return {"methods": {"dft": d.summary(), "edft": e.summary()},
            "exponent_power_db": _exponent_db(e, spec.exponent_freq)}


def _scenario_fig3(cfg, outdir):
    spec = TestSignalSpec(seed=cfg.seed, f_upper=1.0, n_freqs=cfg.n_freqs or 2000)
    uni, truth = gen_complex_test_signal(spec)
    times = gen_jittered_times(spec.K, spec.T, 0.8 * spec.T, cfg.seed)
    jit, _ = gen_complex_test_signal(spec, times=times)
    grid, opts = truth.grid, cfg.engine_options()
    _write_seq(outdir / "samples_uniform.csv", uni)
    _write_seq(outdir / "samples_jittered.csv", jit)
    _write_truth(outdir / "truth.csv", grid, truth.power)
    res = {}
    for name, seq, m in (("dft_uniform", uni, "dft"), ("edft_uniform", uni, "edft"),
                         ("dft_jittered", jit, "dft"), ("edft_jittered", jit, "nedft")):
        res[name] = _emit(outdir, name, seq, grid, opts, m)
    f = grid.freqs
    peak = _exponent_db(res["edft_jittered"], spec.exponent_freq)
    above = f > 0.55
    leak = float(np.max(_db(np.abs(res["edft_jittered"].S[above]) ** 2)))
    return {"methods": {k: v.summary() for k, v in res.items()},
            "jittered_peak_db": peak, "jittered_max_above_0p55_db": leak}


def _fig4(n_remove):
    def run(cfg, outdir):
        spec = TestSignalSpec(seed=cfg.seed, n_freqs=cfg.n_freqs or 1000)
        full, truth = gen_complex_test_signal(spec)
        skip = random_skip(full, n_remove, cfg.seed)
        opts = cfg.engine_options()
        _write_seq(outdir / "samples.csv", skip.gapped)
        _write_truth(outdir / "truth.csv", truth.grid, truth.power)
        d = _emit(outdir, "dft", skip.gapped, truth.grid, opts, "dft")
        e = _emit(outdir, "edft", skip.gapped, truth.grid, opts, "edft")
        p = _exponent_db(e, spec.exponent_freq)
        # one Nyquist zone of the mean rate must hold the occupied bandwidth
        occupied = (np.diff(spec.noise_band)[0] + np.diff(spec.pulse_band)[0]
                    + truth.grid.spacing)
        return {"methods": {"dft": d.summary(), "edft": e.summary()},
                "n_removed": n_remove, "mean_period": skip.mean_period,
                "exponent_power_db": p,
                "exponent_within_3db": bool(abs(p) <= 3.0),
                "nyquist_condition_met": bool(occupied < 1.0 / skip.mean_period)}
    return run


def _marple_kay(cfg):
    if cfg.input_path:
        seq = read_samples_csv(cfg.input_path)
        validate_sequence(seq)
        return seq, None
    return gen_marple_kay_surrogate(cfg.seed)


def _scenario_fig5(cfg, outdir):
    seq, truth = _marple_kay(cfg)
    grid = make_grid(seq, cfg.n_freqs or 1000, cfg.f_upper)
    opts = cfg.engine_options()
    _write_seq(outdir / "samples.csv", seq)
    summary = {"methods": {}}
    if truth is not None:
        _write_truth(outdir / "truth.csv", grid, truth.power_per_bin(grid))
        summary["truth"] = {"lines": [list(map(float, l)) for l in truth.lines],
                            "noise_band": list(truth.noise_band),
                            "noise_power": truth.noise_power}
    for m in ("dft", "edft", "hrdft"):
        summary["methods"][m] = _emit(outdir, m, seq, grid, opts, m, resolution=False).summary()
    return summary


def _scenario_fig6(cfg, outdir):
    seq, _ = _marple_kay(cfg)
    grid = make_grid(seq, cfg.n_freqs or 1000, cfg.f_upper)
    opts = cfg.engine_options()
    _write_seq(outdir / "samples.csv", seq)
    summary = {"methods": {}, "mean_power_known": float(np.mean(np.abs(seq.known_values) ** 2))}
    t = np.arange(grid.N) / (2 * grid.upper_freq)
    K = seq.K
    for m in ("dft", "edft", "hrdft"):
        out = run_method(m, seq, grid, opts)
        y = extrapolate_uniform(out.F, grid)
        write_samples_csv(outdir / f"extrapolated_{m}.csv", t, y)
        info = out.summary()
        info["mean_power_forward"] = float(np.mean(np.abs(y[K:2 * K]) ** 2))
        summary["methods"][m] = info
    return summary


_SCENARIO_RUNNERS = {
    "fig1": _scenario_fig1,
    "fig2": _scenario_fig2,
    "fig3": _scenario_fig3,
    "fig4a": _fig4(16),
    "fig4b": _fig4(24),
    "fig4c": _fig4(32),
    "fig5": _scenario_fig5,
    "fig6": _scenario_fig6,
}

_DISPATCH = {
    "transform": cmd_transform,
    "reconstruct": cmd_reconstruct,
    "compare": cmd_compare,
    "simulate": cmd_simulate,
    "resolution": cmd_resolution,
}


# -- argument parsing ------------------------------------------------------------------

def _add_engine_flags(p):
    p.add_argument("--method", choices=METHODS)
    p.add_argument("--n", dest="n_freqs", type=int, help="number of analysis frequencies")
    p.add_argument("--f-upper", dest="f_upper", type=float, help="upper frequency f_u in Hz")
    p.add_argument("--max-iters", dest="max_iters", type=int)
    p.add_argument("--rel-deviation", dest="rel_deviation", type=float)
    p.add_argument("--rel-threshold", dest="rel_threshold", type=float)
    p.add_argument("--config", help="JSON file with default option values")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="edft", description="Extended DFT spectral analysis")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("transform", help="spectrum of a sample file")
    p.add_argument("input_path")
    p.add_argument("-o", "--output", dest="output_path")
    p.add_argument("--weights", dest="weights_path", help="CSV with initial weights (column w)")
    _add_engine_flags(p)

    p = sub.add_parser("reconstruct", help="inverse transform of a spectrum file")
    p.add_argument("input_path")
    p.add_argument("-o", "--output", dest="output_path")
    p.add_argument("--times", dest="times_path", help="CSV with a 't' column")
    p.add_argument("--extrapolate", type=int, metavar="M",
                   help="evaluate on the first M points of the uniform grid")
    p.add_argument("--config")

    p = sub.add_parser("compare", help="run several methods on one sample file")
    p.add_argument("input_path")
    p.add_argument("-o", "--output", dest="output_path", help="output directory")
    p.add_argument("--methods", type=lambda s: [m.strip() for m in s.split(",") if m.strip()])
    _add_engine_flags(p)

    p = sub.add_parser("resolution", help="relative resolution curve")
    p.add_argument("input_path")
    p.add_argument("-o", "--output", dest="output_path")
    _add_engine_flags(p)

    p = sub.add_parser("simulate", help="regenerate an experiment")
    p.add_argument("scenario")
    p.add_argument("-o", "--output", dest="output_path", help="output directory")
    p.add_argument("--seed", type=int)
    p.add_argument("--input", dest="input_path",
                   help="sample file replacing the surrogate (fig5, fig6)")
    _add_engine_flags(p)
    return parser


def parse_config(argv: Optional[Sequence[str]] = None) -> RunConfig:
    """Merge defaults, the optional JSON config file and command-line flags."""
    ns = build_parser().parse_args(argv)
    if ns.command is None:
        raise UsageError("a command is required: " + ", ".join(COMMANDS))
    flags = {k: v for k, v in vars(ns).items() if v is not None}
    known = {f.name for f in fields(RunConfig)}
    values = dict(_COMMAND_DEFAULTS.get(ns.command, {}))
    values.update(_SCENARIO_DEFAULTS.get(getattr(ns, "scenario", None), {}))
    cfg_path = flags.pop("config", None)
    if cfg_path:
        try:
            with open(cfg_path) as fh:
                file_values = json.load(fh)
        except json.JSONDecodeError as exc:
            raise UsageError(f"{cfg_path}: invalid JSON ({exc})") from exc
        if not isinstance(file_values, dict):
            raise UsageError(f"{cfg_path}: expected a JSON object")
        unknown = set(file_values) - known
        if unknown:
            raise UsageError(f"{cfg_path}: unknown keys {sorted(unknown)}")
        values.update(file_values)
    values.update({k: v for k, v in flags.items() if k in known})
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


def _report_error(kind: str, message: str) -> None:
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = parse_config(argv)
        return _DISPATCH[cfg.command](cfg)
    except (SingularOrIndefinite, np.linalg.LinAlgError) as exc:
        _report_error(type(exc).__name__, str(exc))
        return EXIT_NUMERIC
    except (UsageError, OSError, ValueError, EDFTError) as exc:
        _report_error(type(exc).__name__, str(exc))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
