"""Benchmark command line: run cases, convergence sweeps, stability scans.

Exit codes: 0 success, 2 configuration error (also argparse usage errors),
3 physics abort (NaN / inadmissible state).

``--nx``/``--ny`` are cell counts of the domain-covering mesh; the
``converge`` subcommand instead takes ``--meshes`` as inverse mesh sizes
(1/dx), matching the convention of convergence tables.
"""

from __future__ import annotations

import argparse
import sys

from .config import SchemeConfig
from .driver import run_case, run_convergence
from .errors import ConfigError, PhysicsError, WccsError
from .output import write_convergence_csv, write_output
from .problems import case_ids, get_problem
from .stability import max_stable_nu


def _parse_config_file(path):
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"bad config line: {line!r}")
            key, val = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = val
    return out


def _apply_config_file(args, parser):
    if not getattr(args, "config", None):
        return args
    file_vals = _parse_config_file(args.config)
    # flags given on the command line override the file
    given = {a.lstrip("-").replace("-", "_").split("=")[0] for a in sys.argv[1:] if a.startswith("--")}
    for key, val in file_vals.items():
        if key in given or not hasattr(args, key):
            continue
        current = getattr(args, key)
        if isinstance(current, bool):
            setattr(args, key, val.lower() in ("1", "true", "yes", "on"))
        elif isinstance(current, int):
            setattr(args, key, int(val))
        elif isinstance(current, float) or current is None and key in ("cfl", "tend", "alpha"):
            setattr(args, key, float(val))
        else:
            setattr(args, key, val)
    return args


def _scheme_config(args):
    return SchemeConfig(
        order=args.order,
        cfl=args.cfl,
        weighted=not args.linear,
        characteristic=not args.no_char,
        alpha=args.alpha,
    )


def _cmd_run(args):
    problem = get_problem(args.case)
    cfg = _scheme_config(args)
    cells = None
    if args.nx is not None:
        if problem.sdim == 1:
            cells = (args.nx,)
        else:
            ny = args.ny if args.ny is not None else args.nx
            cells = (args.nx, ny)
    res = run_case(problem, cfg, cells=cells, t_end=args.tend)
    if args.out:
        write_output(res.state, problem.physics, args.out, fmt=args.format)
    line = (
        f"case={args.case} order={args.order} steps={res.steps} "
        f"t={res.state.t:.6g} drift={res.conservation_drift:.3e}"
    )
    if res.error is not None:
        line += f" L1={res.error.l1:.6e} Linf={res.error.linf:.6e}"
    print(line)
    return 0


def _cmd_converge(args):
    problem = get_problem(args.case)
    orders = [int(s) for s in args.orders.split(",")]
    meshes = [int(s) for s in args.meshes.split(",")]
    variants = ["lccs", "wccs"] if not args.linear else ["lccs"]
    table = {}
    for order in orders:
        for variant in variants:
            cfg = SchemeConfig(
                order=order,
                cfl=args.cfl,
                weighted=(variant == "wccs"),
                characteristic=not args.no_char,
                alpha=args.alpha,
            )
            table[(variant, order)] = run_convergence(
                problem, cfg, meshes, t_end=args.tend
            )
    write_convergence_csv(table, sys.stdout)
    if args.out:
        write_convergence_csv(table, args.out)
    return 0


def _cmd_stability(args):
    pairs = (
        [(args.order, args.candidate)]
        if args.order is not None and args.candidate is not None
        else [
            (q, m)
            for q in ((args.order,) if args.order is not None else (2, 3, 4))
            for m in ((args.candidate,) if args.candidate is not None else (0, 1, 2))
        ]
    )
    print("order,candidate,max_stable_nu")
    for q, m in pairs:
        nu = max_stable_nu(q, m, tol=args.tol)
        print(f"{q},{m},{nu:.3f}")
    return 0


def _cmd_list_cases(args):
    for cid in case_ids():
        problem = get_problem(cid)
        dims = f"{problem.sdim}D"
        print(f"{cid:18s} {dims}  t_end={problem.t_end:<6g} {problem.description}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="wccs",
        description="Weighted compact central scheme benchmarks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one case")
    run.add_argument("--case", required=True)
    run.add_argument("--order", type=int, default=3, choices=(2, 3, 4))
    run.add_argument("--nx", type=int, default=None, help="cells in x")
    run.add_argument("--ny", type=int, default=None, help="cells in y (2D)")
    run.add_argument("--cfl", type=float, default=None)
    run.add_argument("--tend", type=float, default=None)
    run.add_argument("--linear", action="store_true", help="disable the limiter")
    run.add_argument("--no-char", action="store_true",
                     help="limit conservative instead of characteristic variables")
    run.add_argument("--alpha", type=float, default=2.0)
    run.add_argument("--out", default=None)
    run.add_argument("--format", choices=("csv", "vtk"), default="csv")
    run.add_argument("--config", default=None, help="key = value config file")
    run.set_defaults(func=_cmd_run)

    conv = sub.add_parser("converge", help="convergence sweep over meshes")
    conv.add_argument("--case", required=True)
    conv.add_argument("--orders", default="2,3,4")
    conv.add_argument("--meshes", default="25,50,100,200",
                      help="comma-separated inverse mesh sizes (1/dx)")
    conv.add_argument("--cfl", type=float, default=None)
    conv.add_argument("--tend", type=float, default=None)
    conv.add_argument("--linear", action="store_true")
    conv.add_argument("--no-char", action="store_true")
    conv.add_argument("--alpha", type=float, default=2.0)
    conv.add_argument("--out", default=None)
    conv.add_argument("--config", default=None)
    conv.set_defaults(func=_cmd_converge)

    stab = sub.add_parser("stability", help="maximal stable Courant numbers")
    stab.add_argument("--order", type=int, default=None, choices=(2, 3, 4))
    stab.add_argument("--candidate", type=int, default=None, choices=(0, 1, 2))
    stab.add_argument("--tol", type=float, default=1e-3)
    stab.set_defaults(func=_cmd_stability)

    lst = sub.add_parser("list-cases", help="list available cases")
    lst.set_defaults(func=_cmd_list_cases)
    return parser


def cli_main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    args = _apply_config_file(args, parser)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except PhysicsError as e:
        print(f"physics abort: {e}", file=sys.stderr)
        return 3
    except WccsError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main():
    sys.exit(cli_main())
