"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 domain error, 4 budget error, 5 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .exceptions import BudgetError, StellarKernelError

EXIT_VERIFY, EXIT_PARSE, EXIT_DOMAIN, EXIT_BUDGET, EXIT_IO = 1, 2, 3, 4, 5

_ENCODING_DEFAULTS = {
    "family": "displaced-fock",
    "n": 1,
    "bandwidth": 1.0,
    "d": 4,
    "parity": "even",
    "squeeze": 0.3,
    "budget": 50_000_000,
}

DEFAULTS = {
    "kernel": {**_ENCODING_DEFAULTS, "a": None, "b": None, "amps1": None, "amps2": None, "inner": False},
    "gram": {**_ENCODING_DEFAULTS, "dataset": None, "out": None, "threads": None},
    "experiment": {
        **_ENCODING_DEFAULTS,
        "variant": 1,
        "seed": 42,
        "out": None,
        "grid_out": None,
        "model_out": None,
        "res": 128,
        "threads": None,
        "C": 1.0,
        "tol": 1e-3,
    },
    "grid": {"model": None, "res": 64, "bounds": None, "out": None, "threads": None},
    "verify": {"suite": "all", "quick": False, "out": None},
    "dataset": {"variant": 1, "seed": 42, "n_per_set": 500, "noise": None, "out": None},
}


class UsageError(Exception):
    pass


def _point(text: str):
    try:
        x1, x2 = (float(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"cannot parse point {text!r}; expected x1,x2") from None
    return (x1, x2)


def _amps(text: str):
    try:
        return np.array([complex(v.replace(" ", "")) for v in text.split(",")])
    except ValueError:
        raise UsageError(f"cannot parse amplitudes {text!r}") from None


def _add_encoding(p):
    S = argparse.SUPPRESS
    p.add_argument("--family", choices=("displaced-fock", "coherent", "qudit", "cat", "general"), default=S)
    p.add_argument("--n", type=int, default=S, help="stellar rank / Fock level")
    p.add_argument("--bandwidth", "--c", dest="bandwidth", type=float, default=S)
    p.add_argument("--d", type=int, default=S, help="qudit dimension")
    p.add_argument("--parity", choices=("even", "odd"), default=S)
    p.add_argument("--squeeze", type=float, default=S)
    p.add_argument("--budget", type=int, default=S, help="term budget per kernel entry")


def build_parser() -> argparse.ArgumentParser:
    S = argparse.SUPPRESS
    parser = argparse.ArgumentParser(prog="stellarkernel", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="JSON file with option values", default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kernel", help="evaluate one kernel entry", argument_default=S)
    _add_encoding(k)
    k.add_argument("--a", help="first point x1,x2")
    k.add_argument("--b", help="second point x1,x2")
    k.add_argument("--amps1", help="qudit amplitudes, comma separated (complex allowed)")
    k.add_argument("--amps2")
    k.add_argument("--inner", action="store_true", help="also print the inner product")

    g = sub.add_parser("gram", help="Gram matrix of a dataset CSV", argument_default=S)
    _add_encoding(g)
    g.add_argument("--dataset")
    g.add_argument("--out")
    g.add_argument("--threads", type=int)

    e = sub.add_parser("experiment", help="train and evaluate on an annular dataset", argument_default=S)
    _add_encoding(e)
    e.add_argument("--variant", type=int, choices=(1, 2, 3))
    e.add_argument("--seed", type=int)
    e.add_argument("--out", help="report JSON path")
    e.add_argument("--grid-out", dest="grid_out")
    e.add_argument("--model-out", dest="model_out")
    e.add_argument("--res", type=int)
    e.add_argument("--threads", type=int)
    e.add_argument("--C", type=float)
    e.add_argument("--tol", type=float)

    gr = sub.add_parser("grid", help="decision grid of a saved model", argument_default=S)
    gr.add_argument("--model")
    gr.add_argument("--res", type=int)
    gr.add_argument("--bounds", help="xmin,xmax,ymin,ymax")
    gr.add_argument("--out")
    gr.add_argument("--threads", type=int)

    v = sub.add_parser("verify", help="run self-check suites", argument_default=S)
    v.add_argument("--suite", choices=("closed-form", "oracle", "invariants", "bounds", "all"))
    v.add_argument("--quick", action="store_true")
    v.add_argument("--out")

    d = sub.add_parser("dataset", help="write an annular dataset CSV", argument_default=S)
    d.add_argument("--variant", type=int, choices=(1, 2, 3))
    d.add_argument("--seed", type=int)
    d.add_argument("--n-per-set", dest="n_per_set", type=int)
    d.add_argument("--noise", type=float)
    d.add_argument("--out")
    return parser


def resolve_options(command: str, flags: dict, config_path: str | None) -> dict:
    """Merge defaults, config file and flags (later wins)."""
    opts = dict(DEFAULTS[command])
    if config_path:
        with open(config_path) as fh:
            cfg = json.load(fh)
        if not isinstance(cfg, dict):
            raise UsageError("config must be a JSON object")
        cfg = {k.replace("-", "_"): v for k, v in cfg.items()}
        unknown = sorted(set(cfg) - set(opts))
        if unknown:
            raise UsageError(f"unknown config keys for {command}: {', '.join(unknown)}")
        opts.update(cfg)
    opts.update(flags)
    return opts


def _require(opts, *names):
    missing = [n for n in names if opts.get(n) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + m.replace("_", "-") for m in missing))


def _spec(opts):
    from .mlkit.kernels import KernelSpec

    return KernelSpec(
        opts["family"], int(opts["n"]), float(opts["bandwidth"]), int(opts["d"]),
        opts["parity"], float(opts["squeeze"]), int(opts["budget"]),
    )


def _jobs(opts):
    t = opts.get("threads")
    return (os.cpu_count() or 1) if t is None else int(t)


def cmd_kernel(opts) -> int:
    from .engine import inner_product
    from .mlkit.kernels import encode_point
    from .stellar import encode_qudit

    if opts["amps1"] is not None or opts["amps2"] is not None:
        _require(opts, "amps1", "amps2")
        f1, f2 = encode_qudit(_amps(opts["amps1"])), encode_qudit(_amps(opts["amps2"]))
    else:
        _require(opts, "a", "b")
        spec = _spec(opts)
        f1, f2 = encode_point(spec, _point(opts["a"])), encode_point(spec, _point(opts["b"]))
    ip = inner_product(f1, f2, budget=int(opts["budget"]))
    print(repr(abs(ip) ** 2))
    if opts["inner"]:
        print(f"{ip.real!r} {ip.imag!r}")
    return 0


def cmd_gram(opts) -> int:
    from .mlkit.datasets import Dataset
    from .mlkit.kernels import gram

    _require(opts, "dataset", "out")
    data = Dataset.from_csv(opts["dataset"])
    g = gram(data.points, _spec(opts), n_jobs=_jobs(opts))
    g.to_csv(opts["out"])
    return 0


def cmd_experiment(opts) -> int:
    from .mlkit.experiment import run_experiment

    report = run_experiment(
        int(opts["variant"]), int(opts["n"]), float(opts["bandwidth"]), int(opts["seed"]),
        family=opts["family"], grid_path=opts["grid_out"], grid_resolution=int(opts["res"]),
        model_path=opts["model_out"], n_jobs=_jobs(opts),
        d=int(opts["d"]), parity=opts["parity"], squeeze=float(opts["squeeze"]),
        C=float(opts["C"]), tol=float(opts["tol"]),
    )
    print(report.summary_line())
    if opts["out"]:
        with open(opts["out"], "w") as fh:
            fh.write(report.to_json() + "\n")
    return 0


def cmd_grid(opts) -> int:
    from .mlkit.experiment import decision_grid, write_grid_csv
    from .mlkit.svm import StellarKernelSVC

    _require(opts, "model", "out")
    with open(opts["model"]) as fh:
        model = StellarKernelSVC.from_dict(json.load(fh))
    model.n_jobs = _jobs(opts)
    if opts["bounds"]:
        try:
            x0, x1, y0, y1 = (float(v) for v in opts["bounds"].split(","))
        except ValueError:
            raise UsageError("bounds must be xmin,xmax,ymin,ymax") from None
    else:
        lo, hi = model.support_vectors_.min(axis=0), model.support_vectors_.max(axis=0)
        pad = 0.1 * (hi - lo) + 1e-9
        (x0, y0), (x1, y1) = lo - pad, hi + pad
    write_grid_csv(decision_grid(model, ((x0, x1), (y0, y1)), int(opts["res"])), opts["out"])
    return 0


def cmd_verify(opts) -> int:
    from .verify import SUITES, run_suite

    names = SUITES if opts["suite"] == "all" else (opts["suite"],)
    reports = [run_suite(name, quick=bool(opts["quick"])) for name in names]
    text = json.dumps({"passed": all(r["passed"] for r in reports), "suites": reports}, indent=2)
    print(text)
    if opts["out"]:
        with open(opts["out"], "w") as fh:
            fh.write(text + "\n")
    return 0 if all(r["passed"] for r in reports) else EXIT_VERIFY


def cmd_dataset(opts) -> int:
    from .mlkit.datasets import DatasetSpec, make_annular

    _require(opts, "out")
    spec = DatasetSpec(variant=int(opts["variant"]), n_per_set=int(opts["n_per_set"]),
                       noise=opts["noise"], seed=int(opts["seed"]))
    make_annular(spec).to_csv(opts["out"])
    return 0


COMMANDS = {
    "kernel": cmd_kernel,
    "gram": cmd_gram,
    "experiment": cmd_experiment,
    "grid": cmd_grid,
    "verify": cmd_verify,
    "dataset": cmd_dataset,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else 0
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    try:
        opts = resolve_options(args.command, flags, args.config)
        return COMMANDS[args.command](opts)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetError as exc:
        print(f"budget error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (StellarKernelError, ValueError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
