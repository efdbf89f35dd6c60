"""
Command-line front end.

    octo propensity --signal coherent --beta 1+0.5j --filter squeezed --s 0.5 --out pr.csv
    octo moments --T 0.5 --s 0.4 --theta 0 --n-max 3 --out moments.json
    octo phasor --signal coherent --beta 1 --s 0.3 --k 1 2 --path both
    octo wigner --which C1 --s 1 --phi 0 --I-max 50 --out c1.csv
    octo figure --which S1 --s 2 --phi pi/2 --out s1.csv
    octo sample --signal coherent --beta 1 --s 0.3 --count 100000 --seed 7 --out outcomes.csv
    octo validate --quick

Parameters come from defaults, then an optional JSON file (--config), then
explicit flags; later sources win. Exit status is 0 on success, 1 on usage
or input errors and 2 when a validation tolerance fails.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import re
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, fock
from .filters import FilterSpec, propensity_grid
from .io import with_version, write_csv, write_json

COMMANDS = ("propensity", "moments", "phasor", "wigner", "figure", "sample", "validate")
SIGNALS = ("vacuum", "coherent", "fock", "squeezed", "thermal")
FILTERS = ("vacuum", "squeezed", "fock", "thermal")
WHICH = ("S1", "C1", "S2", "C2")
# default I ranges of the reference surfaces
FIGURE_I_MAX = {"S1": 100.0, "C1": 100.0, "S2": 50.0, "C2": 50.0}


class UsageError(Exception):
    """Bad command line, configuration or parameter value (exit status 1)."""


_PI_TERM = re.compile(r"^\s*([+-]?)\s*(\d*\.?\d*(?:[eE][+-]?\d+)?)?\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$")


def parse_angle(text) -> float:
    """Radians from a number or a literal such as 'pi/2', '-pi', '3*pi/4', '2pi'."""
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        return float(text)
    if not isinstance(text, str):
        raise UsageError(f"angle must be a number or a string like 'pi/2', got {text!r}")
    m = _PI_TERM.match(text.lower())
    if m:
        sign = -1.0 if m.group(1) == "-" else 1.0
        factor = float(m.group(2)) if m.group(2) else 1.0
        denom = float(m.group(3)) if m.group(3) else 1.0
        return sign * factor * math.pi / denom
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"cannot read angle {text!r} (radians, or forms like 'pi/2')") from None


def parse_complex(text) -> complex:
    if isinstance(text, (int, float, complex)) and not isinstance(text, bool):
        return complex(text)
    if isinstance(text, dict) and set(text) == {"re", "im"}:
        return complex(float(text["re"]), float(text["im"]))
    try:
        return complex(str(text).replace(" ", "").replace("i", "j"))
    except ValueError:
        raise UsageError(f"cannot read complex number {text!r}") from None


@dataclass
class RunConfig:
    command: str = "validate"
    signal: str = "vacuum"
    beta: complex = 0j
    signal_n: int = 0
    signal_s: float = 0.0
    signal_phi: float = 0.0
    signal_nbar: float = 0.0
    filter: str = "squeezed"
    s: float = 0.0
    phi: float = 0.0
    filter_n: int = 0
    nbar: float = 0.0
    T: float = 0.5
    lo_amp: float = math.sqrt(2)
    theta: float = 0.0
    n_max: int = 3
    k: list = field(default_factory=lambda: [1, 2])
    path: str = "integral"
    joint_cutoff: int = 32
    which: str = "C1"
    I_max: float | None = None
    n_I: int = 80
    n_theta: int = 120
    count: int = 100000
    streams: int = 1
    seed: int = 20240101
    cutoff: int | None = None
    radial_nodes: int = 96
    angular_nodes: int = 96
    lambda_nodes: int = 64
    out: str | None = None
    format: str | None = None
    quick: bool = False

    def check(self):
        """Raise UsageError for values outside the documented bounds."""
        def need(cond, name, msg):
            if not cond:
                raise UsageError(f"{name}: {msg}")
        need(self.command in COMMANDS, "command", f"unknown command {self.command!r}")
        need(self.signal in SIGNALS, "signal", f"must be one of {SIGNALS}")
        need(self.filter in FILTERS, "filter", f"must be one of {FILTERS}")
        need(0.0 <= self.T <= 1.0, "T", "must lie in [0, 1]")
        need(self.lo_amp > 0 and math.isfinite(self.lo_amp), "lo_amp", "must be positive")
        for name in ("s", "signal_s"):
            need(abs(getattr(self, name)) <= 3.0, name, "squeezing must satisfy |s| <= 3")
        for name in ("nbar", "signal_nbar"):
            need(0.0 <= getattr(self, name) <= 50.0, name, "must lie in [0, 50]")
        for name in ("signal_n", "filter_n"):
            need(0 <= getattr(self, name) <= 200, name, "must lie in [0, 200]")
        need(abs(self.beta) <= 20, "beta", "|beta| must not exceed 20")
        need(1 <= self.n_max <= 4, "n_max", "must lie in [1, 4]")
        need(self.path in ("integral", "trace", "both"), "path", "must be integral, trace or both")
        need(all(abs(int(k)) <= 6 for k in self.k), "k", "|k| must not exceed 6")
        need(8 <= self.joint_cutoff <= 60, "joint_cutoff", "must lie in [8, 60]")
        need(self.which in WHICH, "which", f"must be one of {WHICH}")
        need(self.I_max is None or 0 < self.I_max <= 1e4, "I_max", "must lie in (0, 1e4]")
        need(2 <= self.n_I <= 2000 and 1 <= self.n_theta <= 4000, "n_I/n_theta", "grid size out of range")
        need(1 <= self.count <= 10 ** 7, "count", "must lie in [1, 1e7]")
        need(1 <= self.streams <= 256, "streams", "must lie in [1, 256]")
        need(0 <= self.seed < 2 ** 64, "seed", "must be a 64-bit unsigned integer")
        need(self.cutoff is None or 1 <= self.cutoff <= 400, "cutoff", "must lie in [1, 400]")
        need(32 <= self.radial_nodes <= 1024 and 32 <= self.angular_nodes <= 1024, "nodes",
             "radial/angular nodes must lie in [32, 1024]")
        need(64 <= self.lambda_nodes <= 1024, "lambda_nodes", "must lie in [64, 1024]")
        need(self.format in (None, "csv", "json"), "format", "must be csv or json")

    def to_dict(self):
        return dataclasses.asdict(self)


_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}
_ANGLES = {"phi", "signal_phi", "theta"}
_COMPLEX = {"beta"}
_INTS = {"signal_n", "filter_n", "n_max", "joint_cutoff", "n_I", "n_theta", "count", "streams", "seed",
         "cutoff", "radial_nodes", "angular_nodes", "lambda_nodes"}
_FLOATS = {"signal_s", "signal_nbar", "s", "nbar", "T", "lo_amp", "I_max"}
_STRINGS = {"command", "signal", "filter", "path", "which", "out", "format"}


def _coerce(name, value):
    """Convert a raw config/flag value to the field's type, naming the field on failure."""
    if name not in _FIELDS:
        raise UsageError(f"unknown parameter {name!r}")
    try:
        if value is None:
            if name in ("cutoff", "I_max", "out", "format"):
                return None
            raise TypeError("null")
        if name in _ANGLES:
            return parse_angle(value)
        if name in _COMPLEX:
            return parse_complex(value)
        if name in _INTS:
            if isinstance(value, bool) or (isinstance(value, float) and not value.is_integer()):
                raise TypeError(value)
            return int(value)
        if name in _FLOATS:
            if isinstance(value, bool):
                raise TypeError(value)
            return float(value)
        if name in _STRINGS:
            if not isinstance(value, str):
                raise TypeError(value)
            return value
        if name == "k":
            values = value if isinstance(value, list) else [value]
            if any(isinstance(v, bool) or int(v) != v for v in values):
                raise TypeError(value)
            return [int(v) for v in values]
        if name == "quick":
            if not isinstance(value, bool):
                raise TypeError(value)
            return value
    except UsageError as exc:
        raise UsageError(f"{name}: {exc}") from None
    except (TypeError, ValueError):
        raise UsageError(f"{name}: invalid value {value!r}") from None
    raise UsageError(f"unknown parameter {name!r}")


def load_config(path) -> dict:
    """Read a JSON parameter file into a dict of coerced RunConfig fields.

    An empty file is an empty config. Unknown keys and ill-typed values raise
    UsageError naming the field; JSON syntax errors report line and column.
    """
    path = Path(path)
    if not path.exists():
        raise UsageError(f"config file {path} does not exist")
    text = path.read_text(encoding="utf-8")
    if not text.strip():
        return {}
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise UsageError(f"{path}: top level must be a JSON object")
    return {key.replace("-", "_"): _coerce(key.replace("-", "_"), value) for key, value in raw.items()}


def merge_config(command: str, file_values: dict, flag_values: dict) -> RunConfig:
    """defaults < config file < explicit flags."""
    values = {}
    values.update(file_values)
    values.update(flag_values)
    values["command"] = command
    cfg = RunConfig(**values)
    cfg.check()
    return cfg


# --------------------------------------------------------------------------- building blocks

def build_filter(cfg: RunConfig) -> FilterSpec:
    if cfg.filter == "squeezed":
        return FilterSpec.squeezed(cfg.s, cfg.phi)
    if cfg.filter == "fock":
        return FilterSpec.fock(cfg.filter_n)
    if cfg.filter == "thermal":
        return FilterSpec.thermal(cfg.nbar)
    return FilterSpec.vacuum()


def _auto_cutoff(cfg: RunConfig) -> int:
    if cfg.signal == "coherent":
        return max(12, int(math.ceil(abs(cfg.beta) ** 2 + 7 * abs(cfg.beta) + 8)))
    if cfg.signal == "fock":
        return cfg.signal_n + 4
    if cfg.signal == "squeezed":
        return int(math.ceil(16 * math.exp(2 * abs(cfg.signal_s)) + 10))
    if cfg.signal == "thermal":
        return int(math.ceil(40 * (cfg.signal_nbar + 1)))
    return 4


def build_signal(cfg: RunConfig) -> fock.QuantumState:
    N = cfg.cutoff if cfg.cutoff is not None else _auto_cutoff(cfg)
    try:
        if cfg.signal == "coherent":
            return fock.coherent_state(cfg.beta, N, max_tail=1e-10)
        if cfg.signal == "fock":
            return fock.fock_state(cfg.signal_n, N)
        if cfg.signal == "squeezed":
            return fock.squeezed_vacuum_state(cfg.signal_s, cfg.signal_phi, N, max_tail=1e-10)
        if cfg.signal == "thermal":
            return fock.thermal_state(cfg.signal_nbar, N, max_tail=1e-10)
        return fock.fock_state(0, N)
    except (fock.CutoffError, IndexError) as exc:
        raise UsageError(f"cutoff: {exc}") from None


def signal_label(cfg: RunConfig) -> str:
    if cfg.signal == "coherent":
        return f"coherent(beta={cfg.beta.real:g}{cfg.beta.imag:+g}j)"
    if cfg.signal == "fock":
        return f"fock(n={cfg.signal_n})"
    if cfg.signal == "squeezed":
        return f"squeezed(s={cfg.signal_s:g}, phi={cfg.signal_phi:g})"
    if cfg.signal == "thermal":
        return f"thermal(nbar={cfg.signal_nbar:g})"
    return "vacuum"


def _threads() -> int:
    env = os.environ.get("OCTO_THREADS")
    if not env:
        return 1
    try:
        return max(1, int(env))
    except ValueError:
        raise UsageError(f"OCTO_THREADS must be an integer, got {env!r}") from None


def _output_path(cfg: RunConfig, default_name: str) -> Path:
    path = Path(cfg.out) if cfg.out else Path(default_name)
    parent = path.parent if str(path.parent) else Path(".")
    if not parent.is_dir():
        raise UsageError(f"out: directory {parent} does not exist")
    if not os.access(parent, os.W_OK):
        raise UsageError(f"out: directory {parent} is not writable")
    return path


def _format(cfg: RunConfig, path: Path, default: str) -> str:
    if cfg.format:
        return cfg.format
    if path.suffix.lower() in (".csv", ".json"):
        return path.suffix.lower()[1:]
    return default


def _meta(cfg: RunConfig, **extra) -> dict:
    meta = {"parameters": cfg.to_dict(), "threads": _threads()}
    meta.update(extra)
    return with_version(meta)


# --------------------------------------------------------------------------- commands

def cmd_propensity(cfg: RunConfig) -> tuple[int, str]:
    signal = build_signal(cfg)
    grid = propensity_grid(signal, build_filter(cfg), cfg.radial_nodes, cfg.angular_nodes)
    grid.metadata.update({"parameters": cfg.to_dict(), "signal": signal_label(cfg), "threads": _threads()})
    path = _output_path(cfg, "propensity.csv")
    (grid.to_json if _format(cfg, path, "csv") == "json" else grid.to_csv)(path)
    return 0, f"propensity: {grid.values.size} points -> {path}; normalisation residual {grid.residual:.2e}"


def cmd_moments(cfg: RunConfig) -> tuple[int, str]:
    from .quadratures import ApparatusConfig, extended_oracle_moment, operational_moment

    spec = build_filter(cfg)
    if spec.kind not in ("vacuum", "squeezed"):
        raise UsageError("filter: closed-form moments need a vacuum or squeezed filter")
    signal = build_signal(cfg)
    app = ApparatusConfig(cfg.T, cfg.lo_amp, cfg.theta, spec)
    records = []
    for n in range(1, cfg.n_max + 1):
        for i in (1, 2):
            value = operational_moment(n, i, app, signal)
            oracle = extended_oracle_moment(n, i, app, signal)
            records.append({"n": n, "i": i, "T": cfg.T, "s": spec.s, "theta": cfg.theta, "phi": spec.phi,
                            "value": value, "oracle_value": oracle, "abs_diff": abs(value - oracle)})
    worst = max(r["abs_diff"] for r in records)
    path = _output_path(cfg, "moments.json")
    if _format(cfg, path, "json") == "csv":
        cols = ["n", "i", "T", "s", "theta", "phi", "value", "oracle_value", "abs_diff"]
        write_csv(path, cols, ([r[c] for c in cols] for r in records), _meta(cfg, signal=signal_label(cfg)))
    else:
        write_json(path, {"metadata": _meta(cfg, signal=signal_label(cfg)), "records": records})
    return 0, f"moments: {len(records)} records -> {path}; max |closed form - oracle| {worst:.2e}"


def cmd_phasor(cfg: RunConfig) -> tuple[int, str]:
    from .phasors import phasor_integral, phasor_trace, trig_from_phasors

    if cfg.filter not in ("vacuum", "squeezed"):
        raise UsageError("filter: phasors are defined for a vacuum or squeezed port")
    s, phi = build_filter(cfg).squeeze_parameters
    signal = build_signal(cfg)
    paths = ("integral", "trace") if cfg.path == "both" else (cfg.path,)
    records, by_path = [], {}
    for path_name in paths:
        values = {}
        for k in sorted(set(cfg.k) | {1, 2}):
            if path_name == "integral":
                pv = phasor_integral(k, s, phi, signal, cfg.radial_nodes, cfg.angular_nodes)
            else:
                if abs(k) > 3:
                    raise UsageError("k: the trace path supports |k| <= 3")
                pv = phasor_trace(k, s, phi, signal, max(cfg.joint_cutoff, 2 * signal.cutoff))
            values[k] = pv
            if k in cfg.k:
                records.append(pv.to_dict())
        by_path[path_name] = trig_from_phasors(values[1].value, values[2].value,
                                               max(values[1].residual, values[2].residual)).to_dict()
    worst = max(r["residual"] for r in records) if records else 0.0
    out = _output_path(cfg, "phasors.json")
    meta = _meta(cfg, signal=signal_label(cfg))
    if _format(cfg, out, "json") == "csv":
        cols = ["path", "s1", "c1", "s2", "c2", "residual"]
        rows = ([0 if p == "integral" else 1] + [b[c] for c in cols[1:]] for p, b in by_path.items())
        meta["path_codes"] = {"0": "integral", "1": "trace"}
        write_csv(out, cols, rows, meta)
    else:
        write_json(out, {"metadata": meta, "phasors": records, "trig": by_path})
    return 0, f"phasor: {len(records)} values -> {out}; max residual {worst:.2e}"


def _wigner(cfg: RunConfig, figure: bool) -> tuple[int, str]:
    from .phase_space import wigner_grid

    I_max = cfg.I_max if cfg.I_max is not None else (FIGURE_I_MAX[cfg.which] if figure else 30.0)
    grid = wigner_grid(cfg.which, cfg.s, cfg.phi, I_max=I_max, n_I=cfg.n_I, n_theta=cfg.n_theta,
                       lambda_nodes=cfg.lambda_nodes, workers=_threads())
    grid.metadata.update({"parameters": cfg.to_dict(), "I_max": I_max, "threads": _threads(),
                          "kind": "figure" if figure else "wigner"})
    path = _output_path(cfg, grid.default_name("csv"))
    (grid.to_json if _format(cfg, path, "csv") == "json" else grid.to_csv)(path)
    return 0, (f"{'figure' if figure else 'wigner'}: {cfg.which}(s={cfg.s:g}, phi={cfg.phi:.6g}) "
               f"{grid.values.shape[0]}x{grid.values.shape[1]} -> {path}; max residual {grid.residuals.max():.2e}")


def cmd_sample(cfg: RunConfig) -> tuple[int, str]:
    from .filters import phase_marginal
    from .sampler import (analytic_phase_cdf, empirical_phasor, empirical_trig, ks_critical_value,
                          ks_statistic, sample_outcomes)

    signal = build_signal(cfg)
    spec = build_filter(cfg)
    sample = sample_outcomes(signal, spec, cfg.count, cfg.seed, streams=cfg.streams,
                             signal_label=signal_label(cfg), workers=_threads())
    phis = 2 * np.pi * np.arange(1024) / 1024
    cdf = analytic_phase_cdf(phis, phase_marginal(signal, spec, phis, radial_nodes=cfg.radial_nodes))
    ks = ks_statistic(sample, cdf)
    crit = ks_critical_value(len(sample))
    summary = {
        "metadata": _meta(cfg, sample=sample.metadata()),
        "mean_alpha": complex(np.mean(sample.alphas)),
        "mean_abs2": float(np.mean(np.abs(sample.alphas) ** 2)),
        "phasors": {str(k): empirical_phasor(sample, k).to_dict() for k in cfg.k},
        "trig": {name: v.to_dict() for name, v in empirical_trig(sample).items()},
        "ks_statistic": ks, "ks_critical_1pct": crit,
    }
    path = _output_path(cfg, "outcomes.csv")
    if _format(cfg, path, "csv") == "json":
        summary["re"], summary["im"] = sample.alphas.real, sample.alphas.imag
        write_json(path, summary)
    else:
        sample.to_csv(path)
        write_json(path.with_suffix(".json"), summary)
    return 0, (f"sample: {len(sample)} outcomes -> {path}; acceptance {sample.acceptance_rate:.3f}; "
               f"KS {ks:.4f} (1% critical {crit:.4f})")


def cmd_validate(cfg: RunConfig) -> tuple[int, str]:
    from .validation import run_all

    results = run_all(quick=cfg.quick)
    for r in results:
        print(r.line())
    failed = [r.number for r in results if not r.passed]
    if cfg.out:
        path = _output_path(cfg, "validation.json")
        write_json(path, {"metadata": _meta(cfg), "results": [r.to_dict() for r in results]})
    if failed:
        return 2, f"validate: {len(failed)} of {len(results)} criteria failed: {failed}"
    return 0, f"validate: all {len(results)} criteria passed"


HANDLERS = {
    "propensity": cmd_propensity, "moments": cmd_moments, "phasor": cmd_phasor,
    "wigner": lambda cfg: _wigner(cfg, False), "figure": lambda cfg: _wigner(cfg, True),
    "sample": cmd_sample, "validate": cmd_validate,
}


def run(cfg: RunConfig) -> int:
    """Execute ``cfg`` and print a one-line summary; returns the exit status."""
    cfg.check()
    start = time.perf_counter()
    status, summary = HANDLERS[cfg.command](cfg)
    print(f"{summary} [{time.perf_counter() - start:.1f} s]")
    return status


# --------------------------------------------------------------------------- argument parsing

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_common(p):
    S = argparse.SUPPRESS
    p.add_argument("--config", default=S, help="JSON parameter file (flags override it)")
    p.add_argument("--out", default=S, help="output file")
    p.add_argument("--format", default=S, choices=["csv", "json"])
    p.add_argument("--seed", default=S)
    p.add_argument("--cutoff", default=S, help="signal Fock cutoff N (default: chosen from the state)")
    g = p.add_argument_group("signal state")
    g.add_argument("--signal", default=S, choices=SIGNALS)
    g.add_argument("--beta", default=S, help="coherent amplitude, e.g. 1+0.5j")
    g.add_argument("--signal-n", default=S)
    g.add_argument("--signal-s", default=S)
    g.add_argument("--signal-phi", default=S)
    g.add_argument("--signal-nbar", default=S)
    g = p.add_argument_group("port filter")
    g.add_argument("--filter", default=S, choices=FILTERS)
    g.add_argument("--s", default=S, help="squeezing parameter of the port state")
    g.add_argument("--phi", default=S, help="squeezing phase of the port state (radians, 'pi/2' allowed)")
    g.add_argument("--filter-n", default=S)
    g.add_argument("--nbar", default=S)
    g = p.add_argument_group("numerics")
    g.add_argument("--radial-nodes", default=S)
    g.add_argument("--angular-nodes", default=S)
    g.add_argument("--lambda-nodes", default=S)


def build_parser() -> argparse.ArgumentParser:
    S = argparse.SUPPRESS
    parser = _Parser(prog="octo", description="Operational eight-port homodyne calculations.")
    parser.add_argument("--version", action="version", version=f"octo {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    p = sub.add_parser("propensity", help="propensity on a polar outcome grid")
    _add_common(p)
    p = sub.add_parser("moments", help="operational quadrature moments and their two-mode oracle")
    _add_common(p)
    p.add_argument("--T", default=S)
    p.add_argument("--lo-amp", default=S)
    p.add_argument("--theta", default=S)
    p.add_argument("--n-max", default=S)
    p = sub.add_parser("phasor", help="phasor expectations and trigonometric bundle")
    _add_common(p)
    p.add_argument("--k", nargs="+", default=S)
    p.add_argument("--path", default=S, choices=["integral", "trace", "both"])
    p.add_argument("--joint-cutoff", default=S)
    for name in ("wigner", "figure"):
        p = sub.add_parser(name, help="Wigner function of a trigonometric operator on an (I, theta) grid")
        _add_common(p)
        p.add_argument("--which", default=S, choices=WHICH)
        p.add_argument("--I-max", dest="I_max", default=S)
        p.add_argument("--n-I", dest="n_I", default=S)
        p.add_argument("--n-theta", default=S)
    p = sub.add_parser("sample", help="Monte Carlo outcomes with empirical phasors and KS test")
    _add_common(p)
    p.add_argument("--count", default=S)
    p.add_argument("--streams", default=S)
    p.add_argument("--k", nargs="+", default=S)
    p = sub.add_parser("validate", help="run the acceptance criteria")
    p.add_argument("--quick", action="store_true", default=S)
    p.add_argument("--out", default=S)
    p.add_argument("--config", default=S)
    return parser


def _flag_values(ns: argparse.Namespace) -> dict:
    raw = {k: v for k, v in vars(ns).items() if k not in ("command", "config")}
    out = {}
    for key, value in raw.items():
        if isinstance(value, str) and key in _INTS | _FLOATS:
            try:
                value = json.loads(value)
            except json.JSONDecodeError:
                raise UsageError(f"{key}: invalid value {value!r}") from None
        if key == "k":
            try:
                value = [int(v) for v in value]
            except ValueError:
                raise UsageError(f"k: invalid value {value!r}") from None
        out[key] = _coerce(key, value)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        if ns.command is None:
            parser.print_help()
            return 1
        file_values = load_config(ns.config) if getattr(ns, "config", None) else {}
        file_values.pop("command", None)
        cfg = merge_config(ns.command, file_values, _flag_values(ns))
        return run(cfg)
    except UsageError as exc:
        print(f"octo: error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, fock.CutoffError) as exc:
        print(f"octo: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"octo: error: cannot write output: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
