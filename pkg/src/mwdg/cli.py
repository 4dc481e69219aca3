"""Command-line interface.

Subcommands:

* ``run``   — integrate one experiment and write the CSV products.
* ``stats`` — recompute (average %, max %) from a history file.
* ``basis dump`` — multiwavelet piecewise coefficients as CSV.
* ``mwt dump``   — one-step transform blocks of a problem's initial data.
* ``reference``  — high-resolution density profile for plot overlays.
"""

from __future__ import annotations

import argparse
import sys

from .basis import build_multiwavelets, tables
from .fields import Mesh1D, Mesh2D
from .harness import (ExperimentConfig, PROBLEM_NAMES, compute_stats,
                      get_problem, reference_solution, run_experiment)
from .solver import project_initial_1d, project_initial_2d
from .transform import decompose_one_level_1d, decompose_one_level_2d, \
    dg_to_scaling_1d


def _add_run_parser(sub):
    p = sub.add_parser("run", help="run one experiment")
    p.add_argument("--problem", required=True, choices=PROBLEM_NAMES)
    p.add_argument("--k", type=int, default=1, choices=(0, 1, 2, 3, 4))
    p.add_argument("--n", type=int, default=None, help="1D dyadic level")
    p.add_argument("--nx", type=int, default=None, help="2D x level")
    p.add_argument("--ny", type=int, default=None, help="2D y level")
    p.add_argument("--indicator", default="mw",
                   choices=("mw", "multiwavelet", "kxrcf", "harten"))
    p.add_argument("--c", type=float, default=0.1)
    p.add_argument("--c-alpha", type=float, default=None)
    p.add_argument("--c-beta", type=float, default=None)
    p.add_argument("--c-gamma", type=float, default=None)
    p.add_argument("--harten-alpha", type=float, default=1.5)
    p.add_argument("--vars", default=None,
                   choices=("density", "density+entropy"))
    p.add_argument("--limiter", default="indicated",
                   choices=("indicated", "everywhere", "off"))
    p.add_argument("--cfl", type=float, default=None)
    p.add_argument("--t-final", type=float, default=None)
    p.add_argument("--snapshots", type=int, default=100)
    p.add_argument("--out", default="out")


def _cmd_run(args) -> int:
    cfg = ExperimentConfig(
        problem=args.problem, k=args.k, n=args.n, nx=args.nx, ny=args.ny,
        indicator=args.indicator, c=args.c, c_alpha=args.c_alpha,
        c_beta=args.c_beta, c_gamma=args.c_gamma,
        harten_alpha=args.harten_alpha, variables=args.vars,
        limiter=args.limiter, cfl=args.cfl, t_final=args.t_final,
        snapshots=args.snapshots, outdir=args.out)
    result = run_experiment(cfg)
    print(f"steps={result.n_steps} avg_pct={result.avg_pct:.4f} "
          f"max_pct={result.max_pct:.4f}")
    print(f"outputs in {result.outdir}")
    return 0


def _cmd_stats(args) -> int:
    avg, peak = compute_stats(args.history, mode=args.mode)
    print(f"avg_pct={avg:.4f} max_pct={peak:.4f}")
    return 0


def _cmd_basis_dump(args) -> int:
    mw = build_multiwavelets(args.k)
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        out.write("ell,half,mode,coefficient\n")
        for ell in range(args.k + 1):
            for half, block in (("L", mw.left), ("R", mw.right)):
                for r in range(args.k + 1):
                    out.write(f"{ell},{half},{r},{block[ell, r]:.17g}\n")
    finally:
        if args.out:
            out.close()
    return 0


def _cmd_mwt_dump(args) -> int:
    prob = get_problem(args.problem)
    tab = tables(args.k)
    if prob.dim == 1:
        level = args.n if args.n is not None else prob.level
        mesh = Mesh1D(level, prob.domain[0], prob.domain[1])
        law = prob.law_factory()
        field = project_initial_1d(prob.ic, mesh, args.k, law.ncomp,
                                   jumps=prob.jumps)
        s = dg_to_scaling_1d(field)
        coarse, detail = decompose_one_level_1d(s, tab.filters)
        with open(args.out_s, "w") as fh:
            fh.write("element,mode,value\n")
            for j in range(coarse.shape[1]):
                for ell in range(args.k + 1):
                    fh.write(f"{j},{ell},{coarse[0, j, ell]:.17g}\n")
        with open(args.out_d, "w") as fh:
            fh.write("element,mode,value\n")
            for j in range(detail.shape[1]):
                for ell in range(args.k + 1):
                    fh.write(f"{j},{ell},{detail[0, j, ell]:.17g}\n")
    else:
        lx = args.nx if args.nx is not None else prob.levels[0]
        ly = args.ny if args.ny is not None else prob.levels[1]
        ax, bx, ay, by = prob.domain
        mesh = Mesh2D(lx, ly, ax, bx, ay, by)
        law = prob.law_factory()
        field = project_initial_2d(prob.ic, mesh, args.k, law.ncomp)
        det = decompose_one_level_2d(field, tab.filters)
        # x-direction filter index leads: block naming is (x-filter, y-filter),
        # alpha = scaling(x)*wavelet(y), beta = wavelet(x)*scaling(y)
        blocks = {"s": det.scaling, "alpha": det.alpha, "beta": det.beta,
                  "gamma": det.gamma}
        with open(args.out_d, "w") as fh:
            fh.write("block,i,j,mode_x,mode_y,value\n")
            for name, block in blocks.items():
                b = block[0]
                for i in range(b.shape[0]):
                    for j in range(b.shape[1]):
                        for mx in range(args.k + 1):
                            for my in range(args.k + 1):
                                fh.write(f"{name},{i},{j},{mx},{my},"
                                         f"{b[i, j, mx, my]:.17g}\n")
    print("wrote transform dump")
    return 0


def _cmd_reference(args) -> int:
    out = reference_solution(args.problem, args.n, k=args.k, out=args.out)
    print(f"wrote {out}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="mwdg")
    sub = parser.add_subparsers(dest="command", required=True)

    _add_run_parser(sub)

    p = sub.add_parser("stats", help="statistics from a history file")
    p.add_argument("--history", required=True)
    p.add_argument("--mode", default=None,
                   help="2D mask: alpha|beta|gamma|comb")

    basis_p = sub.add_parser("basis", help="basis debugging")
    basis_sub = basis_p.add_subparsers(dest="basis_command", required=True)
    p = basis_sub.add_parser("dump", help="multiwavelet coefficients as CSV")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", default=None)

    mwt_p = sub.add_parser("mwt", help="transform debugging")
    mwt_sub = mwt_p.add_subparsers(dest="mwt_command", required=True)
    p = mwt_sub.add_parser("dump", help="one-step transform blocks as CSV")
    p.add_argument("--problem", required=True, choices=PROBLEM_NAMES)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--nx", type=int, default=None)
    p.add_argument("--ny", type=int, default=None)
    p.add_argument("--out-s", default="mwt_s.csv")
    p.add_argument("--out-d", default="mwt_d.csv")

    p = sub.add_parser("reference", help="fine-mesh density reference")
    p.add_argument("--problem", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--out", default="reference.csv")

    args = parser.parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "stats":
        return _cmd_stats(args)
    if args.command == "basis":
        return _cmd_basis_dump(args)
    if args.command == "mwt":
        return _cmd_mwt_dump(args)
    if args.command == "reference":
        return _cmd_reference(args)
    parser.error("unknown command")
    return 2


if __name__ == "__main__":
    sys.exit(main())
