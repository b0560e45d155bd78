"""Command-line interface: ``burrweibull <subcommand> ...``.

Exit status is 0 on success, 1 on domain, range, convergence or
integration errors and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional, Sequence

import numpy as np

from . import distribution as dist
from . import measures as ms
from .data import CURVE_FUNCTIONS, CurveTable, emit_curves, format_number, kevlar_dataset, load_dataset
from .distribution import BwParams
from .errors import BwError
from .estimation import MODELS, FitOptions, compare_models, fit_mle
from .quantile import SeededStream, quantile, sample
from .simulation import (
    DEFAULT_SIM_FIT,
    DEFAULT_SIZES,
    SimConfig,
    load_sim_config,
    run_simulation,
    sim_report_to_table,
)

FULL_SCALE_REPLICATES = 1000


class UsageError(Exception):
    pass


def _params(text: str) -> list:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("expected c,k,lambda,beta")
    try:
        vals = [float(v) for v in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number list: {text!r}") from None
    return vals  # validated at dispatch so bad values exit with status 1


def _int_list(text: str) -> list:
    try:
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from None


def _grid(text: str) -> tuple:
    parts = text.split(",")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except (ValueError, IndexError):
        raise argparse.ArgumentTypeError("expected lo,hi,n_points") from None
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected lo,hi,n_points")
    return lo, hi, n


def _seed(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="burrweibull",
        description="Burr III-Weibull lifetime distribution toolkit.",
    )
    ap.add_argument("--full-precision", action="store_true",
                    help="print 17 significant digits instead of 6")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def with_params(sp):
        sp.add_argument("--params", type=_params, required=True, metavar="c,k,lambda,beta")
        return sp

    sp = with_params(sub.add_parser("eval", help="pdf, cdf, survival and hazard at points"))
    sp.add_argument("--x", type=float, nargs="+", required=True)

    sp = with_params(sub.add_parser("quantile", help="inverse cdf"))
    sp.add_argument("--u", type=float, nargs="+", required=True)

    sp = with_params(sub.add_parser("sample", help="seeded random variates, one per line"))
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=_seed, required=True)
    sp.add_argument("--stream", type=_seed, default=0)
    sp.add_argument("--workers", type=int, default=1)

    sp = with_params(sub.add_parser("moments", help="raw moments, SD, CV, skewness, kurtosis"))
    sp.add_argument("--series", type=float, metavar="R",
                    help="also evaluate E[X^R] by its truncated series")

    sp = with_params(sub.add_parser(
        "measures", help="mean deviations, Lorenz/Bonferroni, entropy, order statistics"))
    sp.add_argument("--prob", type=float, nargs="*", default=[0.25, 0.5, 0.75])
    sp.add_argument("--renyi", type=float, nargs="*", default=[2.0], metavar="V")
    sp.add_argument("--order", type=int, nargs=2, metavar=("I", "M"),
                    help="order statistic i of m, evaluated at --at")
    sp.add_argument("--at", type=float, nargs="*", default=[1.0])

    sp = with_params(sub.add_parser("entropy", help="Renyi and Shannon entropy"))
    sp.add_argument("--v", type=float, nargs="+", default=[2.0])

    for name, hlp in (("fit", "maximum-likelihood fit"), ("compare", "fit BW, Burr III and Weibull")):
        sp = sub.add_parser(name, help=hlp)
        sp.add_argument("--data", default="kevlar", help="'kevlar' or a file path")
        sp.add_argument("--format", choices=("csv", "whitespace"), default="csv")
        sp.add_argument("--multistart", type=int, default=8)
        sp.add_argument("--seed", type=_seed, default=0)
        sp.add_argument("--json", action="store_true")
        if name == "fit":
            sp.add_argument("--model", choices=sorted(MODELS), default="BW")

    sp = sub.add_parser("simulate", help="Monte Carlo bias/MSE study of the BW MLE")
    sp.add_argument("--config", help="key = value file (true_params, sample_sizes, replicates, seed)")
    sp.add_argument("--params", type=_params, metavar="c,k,lambda,beta")
    sp.add_argument("--sizes", type=_int_list, default=list(DEFAULT_SIZES))
    sp.add_argument("--replicates", type=int, default=200)
    sp.add_argument("--full-scale", action="store_true",
                    help=f"use {FULL_SCALE_REPLICATES} replicates")
    sp.add_argument("--seed", type=_seed, default=SimConfig.__dataclass_fields__["master_seed"].default)
    sp.add_argument("--multistart", type=int, default=DEFAULT_SIM_FIT.multistart_count)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--csv", action="store_true", help="emit the table as CSV")

    sp = with_params(sub.add_parser("curves", help="tabulate curves on a grid as CSV"))
    sp.add_argument("--which", default="pdf,cdf",
                    help="comma list from " + ",".join(CURVE_FUNCTIONS))
    sp.add_argument("--grid", type=_grid, default=(0.0, 5.0, 101), metavar="lo,hi,n")
    sp.add_argument("--output", help="write CSV here instead of stdout")
    return ap


# --------------------------------------------------------------------------
# handlers; each returns the text to print
# --------------------------------------------------------------------------


def _fmt(v, full):
    return format_number(v, full)


def _kv(pairs, full) -> str:
    width = max(len(k) for k, _ in pairs)
    return "".join(f"{k.ljust(width)}  {_fmt(v, full)}\n" for k, v in pairs)


def _cmd_eval(a, p, full):
    table = CurveTable(["x", "pdf", "cdf", "survival", "hazard"])
    for x in a.x:
        table.append([x, dist.pdf(p, x), dist.cdf(p, x), dist.survival(p, x), dist.hazard(p, x)])
    return table.format(full)


def _cmd_quantile(a, p, full):
    qs = quantile(p, np.asarray(a.u))
    return CurveTable(["u", "quantile"], [[u, q] for u, q in zip(a.u, qs)]).format(full)


def _cmd_sample(a, p, full):
    xs = sample(p, a.n, SeededStream(a.seed, a.stream), workers=a.workers)
    return "".join(f"{x:.17g}\n" for x in xs)


def _cmd_moments(a, p, full):
    s = ms.moment_summary(p)
    pairs = [(f"mu'{r}", m) for r, m in enumerate(s.raw_moments, 1)]
    pairs += [("SD", s.sd), ("CV", s.cv), ("CS", s.skewness), ("CK", s.kurtosis)]
    if a.series is not None:
        value, diag = ms.raw_moment_series(p, a.series)
        pairs += [
            (f"series E[X^{a.series:g}]", value),
            ("series truncation estimate", diag.last_term_magnitude),
            ("series converged", diag.converged),
        ]
    return _kv(pairs, full)


def _cmd_measures(a, p, full):
    pairs = [
        ("mean deviation about mean", ms.mean_deviation_about_mean(p)),
        ("mean deviation about median", ms.mean_deviation_about_median(p)),
    ]
    for q in a.prob:
        pairs.append((f"Lorenz({q:g})", ms.lorenz(p, q)))
        pairs.append((f"Bonferroni({q:g})", ms.bonferroni(p, q)))
    for v in a.renyi:
        pairs.append((f"Renyi entropy (v={v:g})", ms.renyi_entropy(p, v)))
    pairs.append(("Shannon entropy", ms.shannon_entropy(p)))
    if a.order:
        i, m = a.order
        for x in a.at:
            pairs.append((f"f_{i}:{m}({x:g})", ms.order_statistic_pdf(p, i, m, x)))
    return _kv(pairs, full)


def _cmd_entropy(a, p, full):
    pairs = [(f"Renyi entropy (v={v:g})", ms.renyi_entropy(p, v)) for v in a.v]
    pairs.append(("Shannon entropy", ms.shannon_entropy(p)))
    return _kv(pairs, full)


def _dataset(a):
    if a.data == "kevlar":
        return kevlar_dataset()
    return load_dataset(a.data, a.format)


def _json(doc) -> str:
    def conv(v):
        if isinstance(v, (np.floating, float)):
            v = float(v)
            return v if math.isfinite(v) else str(v)
        if isinstance(v, np.integer):
            return int(v)
        if isinstance(v, np.bool_):
            return bool(v)
        return v

    return json.dumps({k: conv(v) for k, v in doc.items()}, indent=2) + "\n"


_FIT_COLUMNS = ("model", "log_likelihood", "aic", "bic", "aicc", "converged")


def _fit_rows(results, full):
    table = CurveTable(list(_FIT_COLUMNS) + ["parameters"])
    for res in results:
        est = " ".join(f"{n}={_fmt(v, full)}" for n, v in zip(res.params.names, res.params.as_tuple()))
        table.append([getattr(res, c) for c in _FIT_COLUMNS] + [est])
    return table.format(full)


def _cmd_fit(a, full):
    res = fit_mle(_dataset(a), a.model, FitOptions(multistart_count=a.multistart, seed=a.seed))
    if a.json:
        return _json(res.to_dict())
    return _fit_rows([res], full)


def _cmd_compare(a, full):
    rep = compare_models(_dataset(a), FitOptions(multistart_count=a.multistart, seed=a.seed))
    if a.json:
        return _json(rep.to_dict())
    out = _fit_rows(rep.results, full)
    for model, msg in rep.errors.items():
        out += f"# {model}: {msg}\n"
    return out


def _cmd_simulate(a, full):
    if a.config:
        cfg = load_sim_config(a.config)
    elif a.params is not None:
        cfg = SimConfig(
            true_params=BwParams(*a.params),
            sample_sizes=tuple(a.sizes),
            replicates=a.replicates,
            master_seed=a.seed,
            fit_options=FitOptions(multistart_count=a.multistart),
        )
    else:
        raise UsageError("simulate needs --config or --params")
    if a.full_scale:
        cfg = SimConfig(cfg.true_params, cfg.sample_sizes, FULL_SCALE_REPLICATES,
                        cfg.master_seed, cfg.fit_options, cfg.perturbation_sigma)
    rep = run_simulation(cfg, workers=a.workers)
    if a.json:
        return _json(rep.to_dict())
    table = sim_report_to_table(rep)
    return table.to_csv(full_precision=full) if a.csv else table.format(full)


def _cmd_curves(a, p, full):
    which = [w.strip() for w in a.which.split(",") if w.strip()]
    text = emit_curves(p, which, a.grid).to_csv(full_precision=True)
    if a.output:
        with open(a.output, "w", newline="") as fh:
            fh.write(text)
        return ""
    return text


_WITH_PARAMS = {
    "eval": _cmd_eval,
    "quantile": _cmd_quantile,
    "sample": _cmd_sample,
    "moments": _cmd_moments,
    "measures": _cmd_measures,
    "entropy": _cmd_entropy,
    "curves": _cmd_curves,
}
_WITHOUT_PARAMS = {"fit": _cmd_fit, "compare": _cmd_compare, "simulate": _cmd_simulate}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the synopsis
        return int(exc.code or 0)
    full = args.full_precision
    try:
        if args.command in _WITH_PARAMS:
            text = _WITH_PARAMS[args.command](args, BwParams(*args.params), full)
        else:
            text = _WITH_PARAMS.get(args.command, _WITHOUT_PARAMS[args.command])(args, full)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except (BwError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
