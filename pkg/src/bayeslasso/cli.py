"""Command-line interface.

Three command groups:

* ``dist`` - evaluate the Lasso distribution (pdf, cdf, quantile, sample,
  moments, mode) at points or over a grid, emitting plain values or
  two-column CSV.
* ``fit`` - run one of the Gibbs samplers on a CSV dataset and write
  draws, a diagnostics report (JSON) and a run manifest to an output
  directory.
* ``benchmark`` - fit several sampler/dataset combinations and emit a
  mixing/efficiency/time table in CSV and aligned-text form.

Exit codes: 0 success, 2 usage or parameter error, 3 numerical failure,
4 I/O or data-format error.
"""

import argparse
import csv
import hashlib
import json
import math
import os
import platform
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .data import load_csv, standardize
from .diagnostics import summarize_chains
from .distribution import (
    LassoParams,
    lasso_cdf,
    lasso_mgf,
    lasso_mode,
    lasso_moment,
    lasso_pdf,
    lasso_quantile,
    lasso_sample,
)
from .exceptions import (
    BayesLassoError,
    DataFormatError,
    NumericalError,
    ParameterError,
)
from .gibbs import GibbsConfig, PriorHyperparams, hans_gibbs, pc_gibbs, run_chains
from .samplers import RngStream

#: Exact benchmark-table schema; the CSV header and the text table both
#: use these names.
BENCHMARK_COLUMNS = [
    "Dataset", "Method",
    "β Mix %", "β Eff",
    "σ² Mix %", "σ² Eff",
    "λ² Mix %", "λ² Eff",
    "Time(s)",
]

_SAMPLERS = {"hans": hans_gibbs, "pc": pc_gibbs}

# flags whose values may begin with a minus sign; their value token is
# glued on before argparse sees it so "-x -1" and "--grid -3:3:1000" work
_NEGATIVE_VALUE_FLAGS = {"-x", "-p", "--grid", "--beta-init"}


def _preprocess_argv(argv):
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _NEGATIVE_VALUE_FLAGS and i + 1 < len(argv):
            val = argv[i + 1]
            if val.startswith("-") and not val.startswith("--"):
                if tok.startswith("--"):
                    out.append(f"{tok}={val}")
                else:
                    out.append(f"{tok}{val}")
                i += 2
                continue
        out.append(tok)
        i += 1
    return out


def _fmt(value, digits):
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if value == 0.0:
        value = 0.0  # normalize -0.0
    return f"{value:.{digits}f}"


def _parse_floats(text, name):
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ParameterError(f"could not parse {name} list {text!r}") from exc
    if not values:
        raise ParameterError(f"{name} list is empty")
    return values


def _parse_grid(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise ParameterError(f"--grid expects lo:hi:n, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ParameterError(f"--grid expects lo:hi:n, got {text!r}") from exc
    if n < 2 or not hi > lo:
        raise ParameterError("--grid needs hi > lo and n >= 2")
    return np.linspace(lo, hi, n)


def _manifest(argv, seed, config, extra=None):
    payload = json.dumps(config, sort_keys=True, default=str)
    manifest = {
        "command": "bayeslasso " + " ".join(argv),
        "seed": seed,
        "config": config,
        "config_sha256": hashlib.sha256(payload.encode()).hexdigest(),
        "versions": {
            "bayeslasso": __version__,
            "numpy": np.__version__,
            "python": platform.python_version(),
        },
        "created_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }
    if extra:
        manifest.update(extra)
    return manifest


def _out_dir(args):
    base = args.out or os.environ.get("BAYESLASSO_OUT_DIR") or "bayeslasso-run"
    path = Path(base)
    path.mkdir(parents=True, exist_ok=True)
    return path


# ---------------------------------------------------------------- dist --

def _dist_params(args):
    return LassoParams(args.a, args.b, args.c)


def _cmd_dist(args, argv):
    params = _dist_params(args)
    digits = args.digits
    sub = args.dist_command
    out = sys.stdout

    if sub in ("pdf", "cdf"):
        fn = lasso_pdf if sub == "pdf" else lasso_cdf
        if args.grid is not None:
            xs = _parse_grid(args.grid)
            out.write(f"x,{sub}\n")
            for x in xs:
                out.write(f"{_fmt(x, digits)},{_fmt(fn(x, params), digits)}\n")
        elif args.x is not None:
            vals = [fn(x, params) for x in _parse_floats(args.x, "x")]
            out.write(",".join(_fmt(v, digits) for v in vals) + "\n")
        else:
            raise ParameterError(f"dist {sub} needs -x or --grid")
    elif sub == "quantile":
        if args.p is None:
            raise ParameterError("dist quantile needs -p")
        vals = [lasso_quantile(u, params) for u in _parse_floats(args.p, "p")]
        out.write(",".join(_fmt(v, digits) for v in vals) + "\n")
    elif sub == "sample":
        draws = lasso_sample(args.n, params, RngStream(args.seed))
        for v in draws:
            out.write(_fmt(v, digits) + "\n")
    elif sub == "moments":
        out.write("r,moment\n")
        for r in range(1, 5):
            out.write(f"{r},{_fmt(lasso_moment(r, params), digits)}\n")
    elif sub == "mode":
        out.write(_fmt(lasso_mode(params), digits) + "\n")
    else:  # pragma: no cover - argparse enforces choices
        raise ParameterError(f"unknown dist subcommand {sub!r}")
    return 0


# ----------------------------------------------------------------- fit --

def _load_regression(args):
    dataset = load_csv(args.data, args.response, delimiter=args.delimiter)
    return dataset, standardize(dataset, interactions=args.interactions)


def _fit_config(args):
    beta_init = None
    if args.beta_init is not None:
        vals = _parse_floats(args.beta_init, "beta-init")
        beta_init = vals[0] if len(vals) == 1 else np.array(vals)
    return GibbsConfig(
        n_samples=args.nsamples,
        n_burnin=args.burnin,
        seed=args.seed,
        sigma2_init=args.sigma2_init,
        lambda2_init=args.lambda2_init,
        beta_init=beta_init,
        verbose=args.verbose,
    )


def _write_draw_csv(path, output, names):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([*names, "sigma2", "lambda2"])
        for k in range(output.n_samples):
            row = [f"{v:.17g}" for v in output.beta_draws[k]]
            row.append(f"{output.sigma2_draws[k]:.17g}")
            row.append(f"{output.lambda2_draws[k]:.17g}")
            writer.writerow(row)


def _cmd_fit(args, argv):
    dataset, data = _load_regression(args)
    sampler = _SAMPLERS[args.sampler]
    priors = PriorHyperparams(args.a1, args.b1, args.u1, args.v1)
    config = _fit_config(args)
    outputs = run_chains(sampler, data, priors, config, n_chains=args.chains,
                         parallel=args.chains > 1)

    out_dir = _out_dir(args)
    if args.format == "csv":
        for k, output in enumerate(outputs, start=1):
            _write_draw_csv(out_dir / f"draws_chain{k}.csv", output,
                            data.column_names)
    else:
        np.savez_compressed(
            out_dir / "draws.npz",
            beta=np.stack([o.beta_draws for o in outputs]),
            sigma2=np.stack([o.sigma2_draws for o in outputs]),
            lambda2=np.stack([o.lambda2_draws for o in outputs]),
        )

    diagnostics_payload = {"sampler": args.sampler, "dataset": dataset.name,
                           "n": data.n, "p": data.p}
    try:
        report = summarize_chains(outputs, beta_names=data.column_names)
        diagnostics_payload.update(report.to_dict())
    except (ParameterError, BayesLassoError) as exc:
        diagnostics_payload["error"] = str(exc)
        print(f"warning: diagnostics unavailable ({exc})", file=sys.stderr)
    with open(out_dir / "diagnostics.json", "w", encoding="utf-8") as fh:
        json.dump(diagnostics_payload, fh, indent=2)

    manifest = _manifest(
        argv, args.seed,
        {
            "command_name": "fit", "sampler": args.sampler,
            "data": str(args.data), "response": str(args.response),
            "interactions": args.interactions,
            "priors": {"a1": args.a1, "b1": args.b1, "u1": args.u1, "v1": args.v1},
            "nsamples": args.nsamples, "burnin": args.burnin,
            "chains": args.chains, "seed": args.seed,
            "sigma2_init": args.sigma2_init, "lambda2_init": args.lambda2_init,
            "beta_init": args.beta_init, "format": args.format,
        },
        extra={"dataset": dataset.name, "n": data.n, "p": data.p},
    )
    with open(out_dir / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
    print(f"wrote {len(outputs)} chain(s) to {out_dir}", file=sys.stderr)
    return 0


# ----------------------------------------------------------- benchmark --

def _benchmark_row(name, method, data, priors, config, chains):
    sampler = _SAMPLERS[method]
    try:
        outputs = run_chains(sampler, data, priors, config, n_chains=chains,
                             parallel=chains > 1)
        report = summarize_chains(outputs, beta_names=data.column_names)
    except (BayesLassoError, np.linalg.LinAlgError) as exc:
        print(f"warning: {name}/{method} failed: {exc}", file=sys.stderr)
        return [name, method, *["NA"] * 6, "NA"]
    time_s = report.time_total_seconds
    beta_ess = report.beta_ess_median
    n_total = report.n_chains * report.n_samples_per_chain
    sig = report.parameters["sigma2"]
    lam = report.parameters["lambda2"]
    return [
        name, method,
        f"{100.0 * beta_ess / n_total:.1f}", f"{beta_ess / time_s:.1f}",
        f"{sig.mix_percent:.1f}", f"{sig.efficiency:.1f}",
        f"{lam.mix_percent:.1f}", f"{lam.efficiency:.1f}",
        f"{time_s:.3f}",
    ]


def _aligned(rows):
    table = [BENCHMARK_COLUMNS, *rows]
    widths = [max(len(str(r[i])) for r in table) for i in range(len(table[0]))]
    lines = []
    for r in table:
        lines.append("  ".join(str(cell).rjust(w) for cell, w in zip(r, widths)))
    return "\n".join(lines)


def _cmd_benchmark(args, argv):
    samplers = [s.strip() for s in args.samplers.split(",") if s.strip()]
    for s in samplers:
        if s not in _SAMPLERS:
            raise ParameterError(f"unknown sampler {s!r}; choose from hans, pc")
    if not samplers:
        raise ParameterError("need at least one sampler")

    rows = []
    priors = PriorHyperparams(args.a1, args.b1, args.u1, args.v1)
    for path in args.data:
        try:
            dataset = load_csv(path, args.response, delimiter=args.delimiter)
            data = standardize(dataset, interactions=args.interactions)
        except (BayesLassoError, OSError) as exc:
            print(f"warning: {path} unusable: {exc}", file=sys.stderr)
            for method in samplers:
                rows.append([Path(path).stem, method, *["NA"] * 7])
            continue
        config = GibbsConfig(n_samples=args.nsamples, n_burnin=args.burnin,
                             seed=args.seed)
        for method in samplers:
            rows.append(_benchmark_row(dataset.name, method, data, priors,
                                       config, args.chains))

    out_dir = _out_dir(args)
    csv_path = out_dir / "benchmark.csv"
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(BENCHMARK_COLUMNS)
        writer.writerows(rows)
    text = _aligned(rows)
    (out_dir / "benchmark.txt").write_text(text + "\n", encoding="utf-8")
    manifest = _manifest(argv, args.seed, {
        "command_name": "benchmark", "data": [str(p) for p in args.data],
        "samplers": samplers, "nsamples": args.nsamples, "burnin": args.burnin,
        "chains": args.chains, "seed": args.seed,
        "interactions": args.interactions,
    })
    with open(out_dir / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
    print(text)
    return 0


# -------------------------------------------------------------- parser --

def _add_prior_chain_flags(parser):
    parser.add_argument("--a1", type=float, default=0.01,
                        help="sigma^2 prior shape (default 0.01)")
    parser.add_argument("--b1", type=float, default=0.01,
                        help="sigma^2 prior rate (default 0.01)")
    parser.add_argument("--u1", dest="u1", type=float, default=0.01,
                        help="lambda^2 prior shape (default 0.01)")
    parser.add_argument("--v1", dest="v1", type=float, default=0.01,
                        help="lambda^2 prior rate (default 0.01)")
    parser.add_argument("--nsamples", type=int, default=5000,
                        help="post-burn-in draws per chain (default 5000)")
    parser.add_argument("--burnin", type=int, default=1000,
                        help="discarded warm-up draws (default 1000)")
    parser.add_argument("--seed", type=int, default=0, help="base RNG seed")
    parser.add_argument("--chains", type=int, default=1,
                        help="independent chains (default 1)")
    parser.add_argument("--interactions", default="none",
                        choices=["none", "pairs", "pairs+squares"],
                        help="pairwise predictor expansion rule")
    parser.add_argument("--delimiter", default=",", help="CSV delimiter")
    parser.add_argument("--out", default=None,
                        help="output directory (default $BAYESLASSO_OUT_DIR "
                             "or ./bayeslasso-run)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bayeslasso",
        description="Lasso distribution utilities and Bayesian lasso "
                    "regression samplers.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    commands = parser.add_subparsers(dest="command", required=True)

    dist = commands.add_parser("dist", help="Lasso distribution utilities")
    dist_sub = dist.add_subparsers(dest="dist_command", required=True)
    for name, blurb in [
        ("pdf", "density at points or over a grid"),
        ("cdf", "distribution function at points or over a grid"),
        ("quantile", "inverse CDF at probabilities"),
        ("sample", "random draws"),
        ("moments", "raw moments r = 1..4"),
        ("mode", "mode of the distribution"),
    ]:
        sub = dist_sub.add_parser(name, help=blurb)
        sub.add_argument("-a", type=float, required=True, help="quadratic coefficient")
        sub.add_argument("-b", type=float, required=True, help="linear coefficient")
        sub.add_argument("-c", type=float, required=True, help="|x| coefficient")
        sub.add_argument("--digits", type=int, default=8,
                         help="decimal places in output (default 8)")
        if name in ("pdf", "cdf"):
            sub.add_argument("-x", default=None, help="comma-separated points")
            sub.add_argument("--grid", default=None, help="lo:hi:n evaluation grid")
        if name == "quantile":
            sub.add_argument("-p", default=None, help="comma-separated probabilities")
        if name == "sample":
            sub.add_argument("-n", type=int, required=True, help="number of draws")
            sub.add_argument("--seed", type=int, default=0, help="RNG seed")
        sub.set_defaults(func=_cmd_dist)

    fit = commands.add_parser("fit", help="run a Gibbs sampler on a CSV dataset")
    fit.add_argument("--data", required=True, help="CSV file path")
    fit.add_argument("--response", required=True,
                     help="response column name or 0-based index")
    fit.add_argument("--sampler", required=True, choices=["hans", "pc"])
    _add_prior_chain_flags(fit)
    fit.add_argument("--sigma2-init", type=float, default=1.0)
    fit.add_argument("--lambda2-init", type=float, default=1.0)
    fit.add_argument("--beta-init", default=None,
                     help="scalar or comma-separated initial coefficients")
    fit.add_argument("--format", default="csv", choices=["csv", "npz"],
                     help="draw storage format (default csv)")
    fit.add_argument("--verbose", action="store_true",
                     help="print progress every 1000 iterations")
    fit.set_defaults(func=_cmd_fit)

    bench = commands.add_parser("benchmark",
                                help="compare samplers across datasets")
    bench.add_argument("--data", nargs="+", required=True, help="CSV file paths")
    bench.add_argument("--response", required=True,
                       help="response column name or 0-based index")
    bench.add_argument("--samplers", default="hans,pc",
                       help="comma-separated subset of hans,pc")
    _add_prior_chain_flags(bench)
    bench.set_defaults(func=_cmd_benchmark)
    return parser


def main(argv=None):
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_preprocess_argv(argv))
        return args.func(args, argv)
    except SystemExit as exc:  # argparse usage errors carry code 2
        return exc.code if isinstance(exc.code, int) else 2
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DataFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (NumericalError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except BayesLassoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
