"""Command line front end.

Subcommands cover the frozen experiment catalog, ad-hoc spectrum scans and
protocol sweeps on CNF instances, the satisfiability witness, the iterative
solver, and planted-instance generation.

Exit codes: 0 for a completed run (an "unsatisfiable" verdict is a result,
not an error), 1 for protocol or output failures, 2 for usage problems.
Every run writes its effective configuration as JSON next to its outputs;
rerunning the same subcommand with --config on that file reproduces the
outputs byte for byte.  Output directory resolution: --out, else the
ZENOPT_OUT environment variable, else the working directory.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .analysis import satisfiability_witness, spectrum_vs_theta
from .constraints import (
    Clause,
    CnfFormula,
    load_bundled_instance,
    planted_generator,
    read_dimacs,
    satisfies,
    to_dimacs,
)
from .evolution import (
    EmptyKernelError,
    SolverFailure,
    ZenoSystem,
    adiabatic_sweep,
    dissipative_sweep,
    iterative_sat_solve,
    measurement_sweep,
    projected_sweep,
    transverse_field_sweep,
)
from .experiments import CATALOG, _atomic_write, run_experiment, write_csv
from .hilbert import SpaceSpec, basis_index
from .operators import IsingProblem, bit_table, offset_diagonal
from .states import HALF_PI


class UsageError(ValueError):
    """Bad invocation: missing inputs, unreadable files, out-of-range values."""


ENGINES = ("dissipative", "measurement", "adiabatic", "projected", "tf")

# Namespace entries that parametrise the run; everything else (the config
# path itself, transient switches) stays out of the effective config.
_TRANSIENT = {"command", "config", "list"}

# Repeatable flags merge by replacement, not extension, so a command line
# --add-clause discards the config's list instead of appending to it.
_REPLACE_DESTS = ("add_clause",)


def _float_list(text: str) -> list:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad number in {text!r}") from exc


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="zenopt",
        description="Constraint optimisation by Zeno-type sweeps on three-level units.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, formula=True):
        p.add_argument("--config", metavar="FILE", help="JSON with defaults; flags override")
        p.add_argument("--out", metavar="DIR", help="output directory (else $ZENOPT_OUT, else .)")
        if formula:
            p.add_argument("--bundled", action="store_true", help="use the packaged 3-SAT instance")
            p.add_argument("--cnf", metavar="FILE", help="read a DIMACS CNF file")
            p.add_argument(
                "--add-clause",
                action="append",
                metavar="LITS",
                help="extra clause as 1-indexed DIMACS literals, e.g. '1 -2 3'; repeatable",
            )

    p = sub.add_parser("experiment", help="run a named catalog experiment")
    p.add_argument("name", nargs="?", help="catalog name; see --list")
    p.add_argument("--list", action="store_true", help="print catalog names and exit")
    add_common(p, formula=False)

    p = sub.add_parser("spectrum", help="decay spectrum against the sweep angle")
    add_common(p)
    p.add_argument("--offset", type=float, default=0.0, help="undefined-level offset strength")
    p.add_argument("--points", type=int, default=100, help="grid points on [0, pi/2]")

    p = sub.add_parser("sweep", help="run one protocol engine over the sweep")
    add_common(p)
    p.add_argument("--engine", choices=ENGINES, help="protocol to run")
    p.add_argument("--times", type=_float_list, default=[100.0], metavar="T1,T2,...",
                   help="total sweep times (ignored by the measurement engine)")
    p.add_argument("--measurements", type=int, default=1000,
                   help="detector rounds for the measurement engine")
    p.add_argument("--steps", type=int, default=1000, help="integration steps")
    p.add_argument("--alpha", type=float, default=0.0,
                   help="offset strength (adiabatic and projected engines)")
    p.add_argument("--weight", type=float, default=1.0,
                   help="clause penalty strength (tf engine)")
    p.add_argument("--target", metavar="BITS",
                   help="success bit string; defaults to the planted assignment")
    p.add_argument("--record-points", type=int, default=201, help="trace rows per time")

    p = sub.add_parser("witness", help="kernel test for satisfiability")
    add_common(p)
    p.add_argument("--theta", type=float, default=0.2, help="probe angle in (0, pi/2]")

    p = sub.add_parser("solve-iterative", help="solve a CNF by repeated sweep and measure")
    add_common(p)
    p.add_argument("--seed", type=int, help="RNG seed (required)")
    p.add_argument("--theta-stop", type=float, default=HALF_PI / 2, help="sweep endpoint")
    p.add_argument("--time", type=float, default=200.0, help="sweep time per round")
    p.add_argument("--steps", type=int, default=200, help="projection steps per round")

    p = sub.add_parser("generate", help="write a planted random 3-SAT instance")
    add_common(p, formula=False)
    p.add_argument("--planted", action="store_true",
                   help="plant the all-zeros assignment (the only supported mode)")
    p.add_argument("--vars", type=int, help="variable count")
    p.add_argument("--seed", type=int, help="RNG seed (required)")
    p.add_argument("--file", metavar="FILE",
                   help="CNF destination inside the output directory (else stdout)")

    return parser, sub


def _peek(argv, flag):
    """Value of --flag in raw argv, handling both separated and = forms."""
    for i, tok in enumerate(argv):
        if tok == flag:
            if i + 1 >= len(argv):
                raise UsageError(f"{flag} needs a value")
            return argv[i + 1]
        if tok.startswith(flag + "="):
            return tok[len(flag) + 1 :]
    return None


def _load_config(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    except ValueError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise UsageError(f"config {path} must hold a JSON object")
    return cfg


def _parse(argv) -> argparse.Namespace:
    parser, sub = _build_parser()
    command = argv[0] if argv and not argv[0].startswith("-") else None
    config_path = _peek(argv, "--config")
    replaced = {}
    if config_path is not None and command is not None:
        cfg = _load_config(config_path)
        declared = cfg.pop("command", command)
        if declared != command:
            raise UsageError(f"config is for {declared!r}, not {command!r}")
        subparser = sub.choices.get(command)
        if subparser is None:
            raise UsageError(f"unknown command {command!r}")
        dests = {a.dest for a in subparser._get_optional_actions()}
        dests |= {a.dest for a in subparser._get_positional_actions()}
        unknown = set(cfg) - dests
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        for key in _REPLACE_DESTS:
            if key in cfg:
                replaced[key] = cfg.pop(key)
        subparser.set_defaults(**cfg)
    args = parser.parse_args(argv)
    for key, value in replaced.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    return args


def _resolve_out(value) -> Path:
    if value is not None:
        return Path(value)
    env = os.environ.get("ZENOPT_OUT")
    return Path(env) if env else Path(".")


def _config_name(args) -> str:
    if args.command == "experiment" and args.name:
        return f"experiment-{args.name}-config.json"
    return f"{args.command}-config.json"


def _write_run_config(args) -> Path:
    cfg = {"command": args.command}
    for key, value in vars(args).items():
        if key not in _TRANSIENT:
            cfg[key] = value
    out = _resolve_out(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / _config_name(args)
    _atomic_write(path, json.dumps(cfg, indent=2, sort_keys=True) + "\n")
    return path


def _parse_clause_text(text: str, n_vars: int) -> Clause:
    try:
        literals = [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError as exc:
        raise UsageError(f"bad clause {text!r}: literals must be integers") from exc
    if literals and literals[-1] == 0:
        literals = literals[:-1]
    if not literals or any(lit == 0 for lit in literals):
        raise UsageError(f"bad clause {text!r}: need nonzero 1-indexed literals")
    variables = tuple(abs(lit) - 1 for lit in literals)
    if any(v >= n_vars for v in variables):
        raise UsageError(f"bad clause {text!r}: only {n_vars} variables")
    try:
        return Clause(variables, tuple(lit < 0 for lit in literals))
    except ValueError as exc:
        raise UsageError(f"bad clause {text!r}: {exc}") from exc


def _load_formula(args) -> CnfFormula:
    if args.cnf is not None and args.bundled:
        raise UsageError("pass either --bundled or --cnf, not both")
    if args.cnf is not None:
        try:
            formula = read_dimacs(args.cnf)
        except OSError as exc:
            raise UsageError(f"cannot read {args.cnf}: {exc}") from exc
        except ValueError as exc:
            raise UsageError(f"{args.cnf}: {exc}") from exc
    elif args.bundled:
        formula = load_bundled_instance()
    else:
        raise UsageError("no instance given: pass --bundled or --cnf FILE")
    for text in args.add_clause or ():
        clause = _parse_clause_text(text, formula.n_vars)
        # The planted assignment may violate the extra clause, so drop it.
        formula = CnfFormula(formula.n_vars, formula.clauses + (clause,), planted=None)
    return formula


def _cmd_experiment(args) -> int:
    if args.list:
        for name in sorted(CATALOG):
            print(name)
        return 0
    if args.name is None:
        raise UsageError("experiment name required (or --list)")
    if args.name not in CATALOG:
        raise UsageError(f"unknown experiment {args.name!r}; --list shows the catalog")
    out = _resolve_out(args.out)
    for path in run_experiment(args.name, out):
        print(path)
    print(_write_run_config(args))
    return 0


def _cmd_spectrum(args) -> int:
    formula = _load_formula(args)
    spec = SpaceSpec(formula.n_vars)
    system = ZenoSystem(spec, formula=formula)
    extra = np.diag(offset_diagonal(args.offset, spec))
    grid = np.linspace(0.0, HALF_PI, args.points)
    scan = spectrum_vs_theta(lambda theta: system.generator(theta) + extra, grid)
    rows = []
    for i, theta in enumerate(scan.thetas):
        for track in range(scan.curves.shape[1]):
            rows.append(
                (
                    theta,
                    track,
                    scan.curves[i, track],
                    scan.colors[track],
                    scan.kernel_counts[i],
                )
            )
    out = _resolve_out(args.out)
    path = out / "spectrum.csv"
    write_csv(path, ("theta", "track", "eigenvalue", "color", "kernel_count"), rows)
    print(path)
    print(_write_run_config(args))
    return 0


def _qubit_target(args, formula) -> tuple:
    text = args.target
    bits = tuple(int(ch) for ch in text) if text else formula.planted
    if bits is None:
        raise UsageError("instance has no planted assignment: pass --target BITS")
    if len(bits) != formula.n_vars or any(b not in (0, 1) for b in bits):
        raise UsageError(f"target must be {formula.n_vars} bits of 0/1")
    return bits


def _cmd_sweep(args) -> int:
    if args.engine is None:
        raise UsageError("pass --engine " + "|".join(ENGINES))
    formula = _load_formula(args)
    spec = SpaceSpec(formula.n_vars)
    target = _qubit_target(args, formula)

    if args.engine == "tf":
        n = formula.n_vars
        problem = IsingProblem(np.zeros(n), {})
        table = bit_table(n)
        penalty = args.weight * np.array(
            [0.0 if satisfies(formula, row) else 1.0 for row in table]
        )
        index = int(np.sum(np.asarray(target) << np.arange(n)))
        record = transverse_field_sweep(
            problem,
            penalty,
            args.times,
            steps=args.steps,
            target_indices=[index],
            record_points=args.record_points,
        )
        xname = "s"
    else:
        system = ZenoSystem(spec, formula=formula)
        index = basis_index(target, spec)
        xname = "theta"
        if args.engine == "dissipative":
            record = dissipative_sweep(
                system,
                args.times,
                steps=args.steps,
                target_indices=[index],
                record_points=args.record_points,
            )
        elif args.engine == "measurement":
            record = measurement_sweep(
                system,
                args.measurements,
                target_indices=[index],
                record_points=args.record_points,
            )
        elif args.engine == "adiabatic":
            record = adiabatic_sweep(
                system,
                args.times,
                alpha=args.alpha,
                steps=args.steps,
                target_indices=[index],
                record_points=args.record_points,
            )
        else:
            record = projected_sweep(
                system,
                args.times,
                offset_diagonal(args.alpha, spec),
                steps=args.steps,
                target_indices=[index],
                record_points=args.record_points,
            )

    resource = "n_measurements" if args.engine == "measurement" else "total_time"
    rows = []
    for c, budget in enumerate(record.times):
        for r, x in enumerate(record.grid):
            rows.append((budget, x, record.survival[r, c], record.success[r, c]))
    out = _resolve_out(args.out)
    path = out / f"sweep-{args.engine}.csv"
    write_csv(path, (resource, xname, "survival", "success"), rows)
    print(path)
    print(_write_run_config(args))
    return 0


def _cmd_witness(args) -> int:
    formula = _load_formula(args)
    verdict = satisfiability_witness(formula, theta_probe=args.theta)
    print("satisfiable" if verdict else "unsatisfiable")
    _write_run_config(args)
    return 0


def _cmd_solve(args) -> int:
    formula = _load_formula(args)
    if args.seed is None:
        raise UsageError("--seed is required")
    rng = np.random.default_rng(args.seed)
    assignment = iterative_sat_solve(
        formula,
        rng,
        theta_stop=args.theta_stop,
        sweep_time=args.time,
        steps=args.steps,
    )
    if assignment is None:
        print("unsatisfiable")
    else:
        print("".join(str(b) for b in assignment))
    _write_run_config(args)
    return 0


def _cmd_generate(args) -> int:
    if not args.planted:
        raise UsageError("only planted instances are supported: pass --planted")
    if args.vars is None or args.vars < 1:
        raise UsageError("--vars must be a positive integer")
    if args.seed is None:
        raise UsageError("--seed is required")
    formula = planted_generator(args.vars, np.random.default_rng(args.seed))
    text = to_dimacs(formula)
    if args.file is None:
        sys.stdout.write(text)
    else:
        out = _resolve_out(args.out)
        out.mkdir(parents=True, exist_ok=True)
        path = out / args.file
        _atomic_write(path, text)
        print(path)
    _write_run_config(args)
    return 0


_HANDLERS = {
    "experiment": _cmd_experiment,
    "spectrum": _cmd_spectrum,
    "sweep": _cmd_sweep,
    "witness": _cmd_witness,
    "solve-iterative": _cmd_solve,
    "generate": _cmd_generate,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = _parse(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return _HANDLERS[args.command](args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (EmptyKernelError, SolverFailure) as exc:
        print(f"protocol failure: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
