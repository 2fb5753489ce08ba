"""Command-line front end.

Usage examples::

    popuc zeros --model zero --n 3
    popuc spacing --model power --A 0.5 --q 1 --n 800 --p 2
    popuc measure --model constant --alpha-re -0.5 --n 2000 --beta-arg 3.141592653589793 \\
        --phi 0 --delta 1.0 --format json
    popuc sweep --model power --A 0.5 --q 1 --n-list 200 400 800 1600 --p 2

Exit codes: 0 success, 1 argument or input errors, 2 numerical failures.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import analysis, opuc, prufer, verblunsky, zeros
from .verblunsky import VerblunskyModel

SUBCOMMANDS = ("zeros", "count", "spacing", "measure", "sweep", "mhaskar-saff",
               "oracle-check", "coefficients", "phase")

# library operation -> the subcommand that exposes it
OPERATION_SUBCOMMANDS = {
    "coefficient": "coefficients",
    "decreasing_rearrangement": "coefficients",
    "cesaro_mean": "coefficients",
    "lp_norm": "coefficients",
    "blaschke_trace": "phase",
    "poly_pair": "phase",
    "popuc_value": "phase",
    "phase": "phase",
    "phase_increment": "phase",
    "find_zeros": "zeros",
    "count_zeros_in": "count",
    "oracle_zeros": "oracle-check",
    "spacing_report": "spacing",
    "weak_type_check": "spacing",
    "gap_scaling_sweep": "sweep",
    "interval_weight": "measure",
    "mhaskar_saff_check": "mhaskar-saff",
}

# flags each model kind accepts
MODEL_FLAGS = {
    "zero": set(),
    "constant": {"alpha_re", "alpha_im"},
    "power": {"A", "q", "phase_rule", "seed"},
    "log": {"A", "phase_rule", "seed"},
    "iid": {"rho", "seed"},
    "file": {"file"},
}
_ALL_MODEL_FLAGS = set().union(*MODEL_FLAGS.values())


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    subcommand: str
    model: dict
    n: int | None = None
    n_list: list[int] | None = None
    beta_arg: float = 0.0
    fmt: str = "csv"
    output: str | None = None
    tol_theta: float = zeros.DEFAULT_TOL
    options: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> RunConfig:
        return cls(**data)

    @property
    def beta(self) -> complex:
        return complex(math.cos(self.beta_arg), math.sin(self.beta_arg))


def build_model(spec: dict) -> VerblunskyModel:
    kind = spec["kind"]
    if kind == "zero":
        return VerblunskyModel.zero()
    if kind == "constant":
        return VerblunskyModel.constant(complex(spec.get("alpha_re") or 0.0, spec.get("alpha_im") or 0.0))
    if kind == "power":
        return VerblunskyModel.power_decay(spec["A"], spec["q"], spec.get("phase_rule") or "none",
                                           spec.get("seed") or 0)
    if kind == "log":
        return VerblunskyModel.log_decay(spec["A"], spec.get("phase_rule") or "none", spec.get("seed") or 0)
    if kind == "iid":
        return VerblunskyModel.iid_uniform_disk(spec["rho"], spec["seed"])
    return VerblunskyModel.from_file(spec["file"])


def _model_spec(ns) -> dict:
    kind = ns.model
    given = {k for k in _ALL_MODEL_FLAGS if getattr(ns, k) is not None}
    extra = given - MODEL_FLAGS[kind]
    if extra:
        flags = ", ".join("--" + k.replace("_", "-") for k in sorted(extra))
        raise UsageError(f"model {kind!r} does not take {flags}")
    required = {"power": {"A", "q"}, "log": {"A"}, "iid": {"rho", "seed"}, "file": {"file"}}.get(kind, set())
    missing = required - given
    if missing:
        flags = ", ".join("--" + k.replace("_", "-") for k in sorted(missing))
        raise UsageError(f"model {kind!r} requires {flags}")
    if getattr(ns, "phase_rule", None) == "random" and ns.seed is None:
        raise UsageError("--phase-rule random requires --seed")
    spec = {"kind": kind}
    spec.update({k: getattr(ns, k) for k in sorted(given)})
    return spec


def _add_common(p: argparse.ArgumentParser, n_mode: str = "single"):
    g = p.add_argument_group("model")
    g.add_argument("--model", required=True, choices=list(MODEL_FLAGS))
    g.add_argument("--A", type=float, help="amplitude of power/log decay")
    g.add_argument("--q", type=float, help="power decay exponent in (0, 1]")
    g.add_argument("--phase-rule", choices=verblunsky.PHASE_RULES)
    g.add_argument("--alpha-re", type=float)
    g.add_argument("--alpha-im", type=float)
    g.add_argument("--rho", type=float, help="disk radius of the iid model")
    g.add_argument("--seed", type=int)
    g.add_argument("--file", help="coefficient file, one 're im' pair per line")
    if n_mode == "single":
        p.add_argument("--n", type=int, required=True)
    elif n_mode == "list":
        p.add_argument("--n-list", type=int, nargs="+", required=True)
    p.add_argument("--beta-arg", type=float, default=0.0, help="arg(beta) in radians")
    p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    p.add_argument("--output", help="output path (default: standard output)")
    p.add_argument("--tol-theta", type=float, default=zeros.DEFAULT_TOL)


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="popuc", description="Zeros of paraorthogonal polynomials on the unit circle.")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    _add_common(sub.add_parser("zeros", help="all zeros of Phi_{n+1}^(beta)"))

    p = sub.add_parser("count", help="zero count in [a, b) from phase increments")
    _add_common(p)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)

    p = sub.add_parser("spacing", help="gap statistics of one zero set")
    _add_common(p)
    p.add_argument("--p", type=float, help="report n^(1/p) * max_gap")
    p.add_argument("--f-at-n", type=float, help="report (n / f(n)) * max_gap for a given f(n)")
    p.add_argument("--weak-type", action="store_true",
                   help="report (n / f(n)) * max_gap with f from the decreasing rearrangement")
    p.add_argument("--emit-histogram", type=int, metavar="K", help="write a K-bin gap histogram CSV")
    p.add_argument("--histogram-output", help="path for the histogram CSV")

    p = sub.add_parser("measure", help="nu_n weight of one arc with its band")
    _add_common(p)
    p.add_argument("--phi", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--r", type=float, help="band half-width (default: Cesaro mean of n moduli)")

    p = sub.add_parser("sweep", help="max gap scaling over several n")
    _add_common(p, n_mode="list")
    p.add_argument("--p", type=float, required=True)

    p = sub.add_parser("mhaskar-saff", help="worst band violation over an interval grid")
    _add_common(p)
    p.add_argument("--grid-count", type=int, default=50)
    p.add_argument("--grid-kind", choices=("uniform", "random"), default="uniform")
    p.add_argument("--grid-seed", type=int, default=0)

    _add_common(sub.add_parser("oracle-check", help="compare phase zeros with the coefficient oracle"))

    p = sub.add_parser("coefficients", help="coefficients, rearrangement, Cesaro mean, l^p norm")
    _add_common(p)
    p.add_argument("--p", type=float, default=2.0)

    p = sub.add_parser("phase", help="Pruefer phase and pointwise OPUC values")
    _add_common(p)
    p.add_argument("--theta", type=float, nargs="+", default=[0.0])
    p.add_argument("--increment", type=float, nargs=2, metavar=("A", "B"),
                   help="report eta_n(B) - eta_n(A) instead of pointwise values")
    return parser


_OPTION_KEYS = ("a", "b", "p", "f_at_n", "weak_type", "emit_histogram", "histogram_output", "phi",
                "delta", "r", "grid_count", "grid_kind", "grid_seed", "theta", "increment")


def config_from_args(argv: list[str]) -> RunConfig:
    ns = make_parser().parse_args(argv)
    options = {k: getattr(ns, k) for k in _OPTION_KEYS if hasattr(ns, k)}
    if options.get("emit_histogram") is not None and not options.get("histogram_output"):
        raise UsageError("--emit-histogram requires --histogram-output")
    if options.get("weak_type") and options.get("f_at_n") is not None:
        raise UsageError("--weak-type and --f-at-n are mutually exclusive")
    return RunConfig(subcommand=ns.subcommand, model=_model_spec(ns), n=getattr(ns, "n", None),
                     n_list=getattr(ns, "n_list", None), beta_arg=ns.beta_arg, fmt=ns.fmt,
                     output=ns.output, tol_theta=ns.tol_theta, options=options)


# -- output ----------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    if value is None:
        return ""
    return str(value)


def _plain(value):
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def render(config: RunConfig, rows: list[dict], summary: dict | None = None) -> str:
    if config.fmt == "json":
        doc = {"command": config.subcommand, "config": config.to_dict(), "rows": rows}
        if summary:
            doc["summary"] = summary
        return json.dumps(_plain(doc), indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    cols = list(rows[0]) if rows else []
    writer.writerow(cols)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in cols])
    return buf.getvalue()


def write_atomic(path: str | Path, text: str):
    """Write via a temp file in the destination directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- subcommands -------------------------------------------------------------

def _zero_rows(zs: zeros.ZeroSet) -> list[dict]:
    return [{"j": j + 1, "theta": t, "z_re": math.cos(t), "z_im": math.sin(t), "residual": r}
            for j, (t, r) in enumerate(zip(zs.thetas, zs.residuals))]


def _need_n(config: RunConfig, low: int = 0) -> int:
    if config.n is None or config.n < low:
        raise UsageError(f"--n must be at least {low}")
    return config.n


def run_zeros(config, model):
    zs = zeros.find_zeros(model, _need_n(config), config.beta, config.tol_theta)
    return _zero_rows(zs), None


def run_count(config, model):
    o = config.options
    c = zeros.count_zeros_in(model, _need_n(config), config.beta, o["a"], o["b"])
    return [{"n": config.n, "a": o["a"], "b": o["b"], "count": c}], None


def run_spacing(config, model):
    o = config.options
    n = _need_n(config, 1)
    zs = zeros.find_zeros(model, n, config.beta, config.tol_theta)
    rep = analysis.spacing_report(zs, p=o.get("p"), f_at_n=o.get("f_at_n"))
    row = {"n": n, "n_plus_1": rep.n_plus_1, "max_gap": rep.max_gap, "min_gap": rep.min_gap,
           "mean_gap": 2 * math.pi / rep.n_plus_1}
    if o.get("p") is not None:
        row["p"] = o["p"]
        row["scaled_p"] = rep.scaled_p
    if o.get("f_at_n") is not None:
        row["f_at_n"] = o["f_at_n"]
        row["scaled_f"] = rep.scaled_f
    if o.get("weak_type"):
        row["f_at_n"] = float(verblunsky.decreasing_rearrangement(model, n).partial_sums[-1])
        row["scaled_f"] = analysis.weak_type_check(model, config.beta, n, config.tol_theta, zeros=zs)
    if o.get("emit_histogram") is not None:
        counts, edges = analysis.gap_histogram(rep, o["emit_histogram"])
        hist = [{"bin_low": lo, "bin_high": hi, "count": int(c)}
                for lo, hi, c in zip(edges[:-1], edges[1:], counts)]
        write_atomic(o["histogram_output"], render(RunConfig(**{**config.to_dict(), "fmt": "csv"}), hist))
    return [row], None


def run_measure(config, model):
    o = config.options
    n = _need_n(config, 1)
    r = o["r"] if o.get("r") is not None else verblunsky.cesaro_mean(model, n).mean_modulus
    measure = analysis.counting_measure(model, n, config.beta, config.tol_theta)
    rep = analysis.interval_weight(measure, o["phi"], o["delta"], r)
    return [{"n": n, "phi": rep.phi, "delta": rep.delta, "weight": rep.weight, "r": rep.r,
             "band_low": rep.band_low, "band_high": rep.band_high, "violation": rep.violation}], None


def run_sweep(config, model):
    rows = analysis.gap_scaling_sweep(model, config.beta, config.options["p"], config.n_list,
                                      config.tol_theta)
    return [{"n": r.n, "max_gap": r.max_gap, "scaled": r.scaled, "lp_norm": r.lp_norm} for r in rows], None


def run_mhaskar_saff(config, model):
    o = config.options
    n = _need_n(config, 1)
    if o["grid_kind"] == "uniform":
        grid = analysis.interval_grid(o["grid_count"])
    else:
        grid = analysis.random_intervals(o["grid_count"], o["grid_seed"])
    worst = analysis.mhaskar_saff_check(model, config.beta, n, grid, config.tol_theta)
    r = verblunsky.cesaro_mean(model, n).mean_modulus
    return [{"n": n, "r": r, "intervals": len(grid), "worst_violation": worst}], None


def run_oracle_check(config, model):
    n = _need_n(config)
    fast = zeros.find_zeros(model, n, config.beta, config.tol_theta)
    slow = zeros.oracle_zeros(model, n, config.beta)
    rows = []
    for j, (a, b) in enumerate(zip(fast.thetas, slow.thetas)):
        d = abs((a - b + math.pi) % (2 * math.pi) - math.pi)
        rows.append({"j": j + 1, "theta_phase": a, "theta_oracle": b, "abs_diff": d})
    return rows, {"max_abs_diff": max(r["abs_diff"] for r in rows)}


def run_coefficients(config, model):
    n = _need_n(config, 1)
    p = config.options["p"]
    rearr = verblunsky.decreasing_rearrangement(model, n)
    mean = verblunsky.cesaro_mean(model, n).mean_modulus
    norm = verblunsky.lp_norm(model, n, p)
    rows = []
    for j in range(n):
        a = verblunsky.coefficient(model, j)
        rows.append({"j": j, "alpha_re": a.real, "alpha_im": a.imag, "modulus": abs(a),
                     "sorted_modulus": rearr.sorted_moduli[j], "partial_sum": rearr.partial_sums[j],
                     "cesaro_mean": mean, "p": p, "lp_norm": norm})
    return rows, None


def run_phase(config, model):
    n = _need_n(config)
    o = config.options
    ev = prufer.PhaseEvaluator(model, n)
    if o.get("increment"):
        a, b = o["increment"]
        return [{"n": n, "a": a, "b": b, "increment": prufer.phase_increment(ev, a, b)}], None
    rows = []
    for theta in o["theta"]:
        trace = opuc.blaschke_trace(model, n, theta)
        pair = opuc.poly_pair(model, n, theta)
        val = opuc.popuc_value(model, n, config.beta, theta)
        bn = trace.values[-1]
        rows.append({"theta": theta, "eta": prufer.phase(ev, theta), "b_re": bn.real, "b_im": bn.imag,
                     "phi_re": pair.phi.real, "phi_im": pair.phi.imag,
                     "phi_star_re": pair.phi_star.real, "phi_star_im": pair.phi_star.imag,
                     "popuc_re": val.real, "popuc_im": val.imag})
    return rows, None


HANDLERS = {
    "zeros": run_zeros,
    "count": run_count,
    "spacing": run_spacing,
    "measure": run_measure,
    "sweep": run_sweep,
    "mhaskar-saff": run_mhaskar_saff,
    "oracle-check": run_oracle_check,
    "coefficients": run_coefficients,
    "phase": run_phase,
}


def run(config: RunConfig, stdout=None) -> int:
    """Execute a config; returns the process exit status."""
    stdout = stdout or sys.stdout
    try:
        model = build_model(config.model)
        rows, summary = HANDLERS[config.subcommand](config, model)
    except (zeros.BracketError, zeros.ConvergenceError, ArithmeticError) as exc:
        print(f"popuc: numerical failure: {exc}", file=sys.stderr)
        return 2
    except (UsageError, ValueError, IndexError, OSError) as exc:
        print(f"popuc: error: {exc}", file=sys.stderr)
        return 1
    text = render(config, rows, summary)
    if config.output:
        write_atomic(config.output, text)
    else:
        stdout.write(text)
    return 0


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = config_from_args(argv)
    except UsageError as exc:
        make_parser().print_usage(sys.stderr)
        print(f"popuc: error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # argparse: usage errors (1) and --help (0)
        return exc.code if isinstance(exc.code, int) else 1
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
