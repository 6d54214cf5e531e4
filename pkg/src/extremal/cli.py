"""Command-line entry point.

    extremal <experiment> [--config FILE] [--seed S] [--workers W]
             [--check] [--csv-out PATH] [--json-out PATH] [--backend B]

Seed precedence: --seed, then the EXTREMAL_SEED environment variable, then
the config file, then the built-in default. Exit codes: 0 on success (and
on passing checks), 2 when --check is set and a check fails, 1 on usage or
resource errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from ._backend import set_backend
from .errors import DomainError, ResourceLimitError
from .experiments import (
    DEFAULT_SEED,
    ExperimentConfig,
    list_experiments,
    run_experiment,
    write_samples_csv,
)
from .supmeasure import extremal_fdd_cdf, gumbel_marginal_cdf


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's default 2
        self.print_usage(sys.stderr)
        raise SystemExit(f"error: {message}")


def _build_parser() -> _Parser:
    p = _Parser(prog="extremal", description="extremal limit-theorem experiments")
    sub = p.add_subparsers(dest="command", required=True, metavar="<experiment>")

    for name in list_experiments():
        sp = sub.add_parser(name, help=f"run the {name} experiment")
        sp.add_argument("--config", help="JSON config file with parameter overrides")
        sp.add_argument("--seed", type=int, help="master seed")
        sp.add_argument("--workers", type=int, default=None, help="thread workers")
        sp.add_argument(
            "--check", action="store_true", help="exit 2 when any check fails"
        )
        sp.add_argument("--csv-out", help="write replicate samples as CSV")
        sp.add_argument("--json-out", help="write the result record as JSON")
        sp.add_argument("--backend", choices=("numba", "numpy"), help="kernel backend")
        if name == "hitting-law":
            sp.add_argument(
                "--dump-sets",
                help="debug: write a few sampled visit sets (newline-delimited ints)",
            )
        if name == "process-convergence":
            sp.add_argument(
                "--dump-path",
                help="debug: write one simulated path as (time,value) CSV (large)",
            )

    lst = sub.add_parser("list", help="list experiments")
    lst.add_argument("--json", action="store_true")

    cdf = sub.add_parser("cdf", help="evaluate the closed-form limit CDFs")
    cdf.add_argument("--beta", type=float, required=True)
    cdf.add_argument("--t", type=float, help="single time for the marginal CDF")
    cdf.add_argument("--x", type=float, help="single threshold for the marginal CDF")
    cdf.add_argument("--times", help="comma-separated increasing times (joint CDF)")
    cdf.add_argument("--xs", help="comma-separated nondecreasing thresholds")
    return p


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise DomainError("config file must contain a JSON object")
    return raw


def _resolve_seed(cli_seed, env, file_seed) -> int:
    if cli_seed is not None:
        return int(cli_seed)
    if env:
        return int(env)
    if file_seed is not None:
        return int(file_seed)
    return DEFAULT_SEED


def _dump_visit_sets(path, params, seed, count=5):
    from .renewal import ReturnLaw, sample_visit_set
    from .seeding import seed_substream

    law = ReturnLaw(beta=params["beta"])
    rng = seed_substream(seed, 0, "dump-sets")
    n = params["resolution"]
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(count):
            vs = sample_visit_set(law, n, rng)
            if i:
                fh.write("---\n")
            fh.write("\n".join(str(t) for t in vs.times) + "\n")


def _dump_path(path, params, seed):
    from .experiments import _law_from
    from .process import simulate_path
    from .seeding import seed_substream
    from .tails import TailModel, family_from_dict

    model = TailModel.build(family_from_dict(params["tail"]))
    sample = simulate_path(
        model, _law_from(params), params["n"], seed_substream(seed, 0, "dump-path")
    )
    sample.to_csv(path)


def _run_cdf(args) -> int:
    if args.times and args.xs:
        times = [float(v) for v in args.times.split(",")]
        xs = [float(v) for v in args.xs.split(",")]
        val = extremal_fdd_cdf(times, xs, args.beta)
        print(f"{val:.17g}")
        return 0
    if args.t is None or args.x is None:
        raise DomainError("cdf needs either --t and --x, or --times and --xs")
    print(f"{gumbel_marginal_cdf(args.t, args.x, args.beta):.17g}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return 1
        return 0 if exc.code in (0, None) else 1

    try:
        if args.command == "list":
            names = list_experiments()
            print(json.dumps(names) if args.json else "\n".join(names))
            return 0
        if args.command == "cdf":
            return _run_cdf(args)

        raw = _load_config(args.config)
        if args.backend:
            set_backend(args.backend)
        seed = _resolve_seed(args.seed, os.environ.get("EXTREMAL_SEED"), raw.pop("seed", None))
        workers = args.workers if args.workers is not None else int(raw.pop("workers", 1))
        check = args.check or bool(raw.pop("check", False))
        raw.pop("experiment", None)
        params = raw.pop("params", None)
        if params is None:
            params = raw  # flat config files: remaining keys are parameters

        config = ExperimentConfig(
            experiment=args.command,
            params=params,
            seed=seed,
            workers=workers,
            check=check,
        )
        record, samples = run_experiment(config)

        for c in record.checks:
            status = "PASS" if c["passed"] else "FAIL"
            obs = c["observed"]
            obs_str = f"{obs:.6g}" if isinstance(obs, (int, float)) else "-"
            print(f"[{status}] {record.experiment}/{c['name']}: observed={obs_str}")
        print(
            f"{record.experiment}: {'passed' if record.passed else 'FAILED'} "
            f"in {record.wall_clock_s:.2f}s (seed={record.seed})"
        )

        if args.json_out:
            with open(args.json_out, "w", encoding="utf-8") as fh:
                fh.write(record.to_json() + "\n")
        if args.csv_out and samples:
            write_samples_csv(args.csv_out, samples)
        if getattr(args, "dump_sets", None):
            _dump_visit_sets(args.dump_sets, record.config["params"], seed)
        if getattr(args, "dump_path", None):
            _dump_path(args.dump_path, record.config["params"], seed)

        if check and not record.passed:
            return 2
        return 0
    except (DomainError, ResourceLimitError, KeyError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
