"""``dbog`` command line: verify, residual, solve, reduce.

Exit codes: 0 success, 1 numerical failure (a check failed, the solver
diverged or did not converge), 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import checks, gauge, solver
from .config import ConfigError, FieldConfig, read_config, write_config
from .lattice import FREE, PERIODIC, Lattice
from .sampling import make_rng, uniform_coords

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_lattice(text: str, boundary: str = PERIODIC) -> Lattice:
    try:
        extents = tuple(int(x) for x in text.lower().split("x"))
        return Lattice(extents, boundary)
    except ValueError as exc:
        raise UsageError(f"bad lattice {text!r}: {exc}") from None


def _emit(record, stream=None):
    stream = stream or sys.stdout
    stream.write(json.dumps(record) + "\n")
    stream.flush()


def _write_report(path, report):
    if path:
        Path(path).write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")


def cmd_verify(args) -> int:
    suites = checks.SUITES if args.suite == "all" else (args.suite,)
    lattices = [parse_lattice(s, args.boundary) for s in args.lattice] if args.lattice else None
    ok = True
    for suite in suites:
        for result in checks.run_suite(suite, seed=args.seed, lattices=lattices, trials=args.trials):
            _emit(result.to_json())
            ok &= result.status != "fail"
    return EXIT_OK if ok else EXIT_FAIL


def _load(path) -> FieldConfig:
    cfg = read_config(path)
    if cfg.lattice.n != 3:
        raise ConfigError("$.lattice.n", "Bogomolny system is 3-dimensional")
    return cfg


def residual_report(cfg: FieldConfig) -> dict:
    res = gauge.bogomolny_residual(cfg.A, cfg.Phi)
    return {
        "command": "residual",
        "lattice": cfg.lattice.to_json(),
        "plane_norms": res.plane_norms(),
        "total_squared": res.total,
        "objective": 0.5 * res.total,
        "max_abs": res.max_abs(),
        "curvature_su2_defect": gauge.su2_defect(gauge.curvature(cfg.A)),
    }


def cmd_residual(args) -> int:
    report = residual_report(_load(args.config))
    _emit(report)
    _write_report(args.out, report)
    return EXIT_OK


def _initial(args, lattice):
    """Starting parameters and the lattice they live on."""
    if args.init == "zeros":
        return np.zeros(solver.num_parameters(lattice)), lattice
    if args.init == "noise":
        rng = make_rng(args.seed)
        coords = uniform_coords(rng, (solver.num_parameters(lattice) // 3,), args.amplitude)
        return coords.ravel(), lattice
    if not args.config:
        raise UsageError("--init config needs --config PATH")
    cfg = _load(args.config)
    return solver.pack(cfg.A, cfg.Phi), cfg.lattice


def cmd_solve(args) -> int:
    lattice = parse_lattice(args.lattice or "2x2x2", args.boundary)
    if lattice.n != 3:
        raise UsageError("Bogomolny system is 3-dimensional")
    init, lattice = _initial(args, lattice)
    meta = {
        "generator": "dbog solve",
        "init": args.init,
        "seed": args.seed,
        "amplitude": args.amplitude,
        "method": args.method,
    }
    try:
        p, report = solver.solve(
            init, lattice, max_iter=args.max_iter, tol_objective=args.tol,
            tol_step=args.tol_step, method=args.method,
        )
    except solver.DivergenceError as exc:
        out = {"command": "solve", "termination": "divergence", "iteration": exc.iteration, "options": meta}
        _emit(out)
        _write_report(_report_path(args.out), out)
        return EXIT_FAIL
    A, Phi = solver.unpack(p, lattice)
    write_config(args.out, FieldConfig(lattice, A, Phi, meta))
    out = {"command": "solve", "config": str(args.out), "options": meta,
           "tolerance": args.tol, **report.to_json()}
    _write_report(_report_path(args.out), out)
    _emit(out)
    return EXIT_OK if report.termination == "converged" else EXIT_FAIL


def _report_path(out):
    out = Path(out)
    return out.with_name(out.stem + ".report.json")


def cmd_reduce(args) -> int:
    cfg = _load(args.config)
    if args.n4 < 2:
        raise UsageError("--n4 must be at least 2")
    rep = gauge.equivalence_check(cfg.A, cfg.Phi, args.n4)
    out = {
        "command": "reduce",
        "lattice": cfg.lattice.to_json(),
        "n4": rep.n4,
        "max_discrepancy": rep.max_discrepancy,
        "bogomolny_total_squared": rep.bogomolny_total,
        "selfdual_total_squared": rep.selfdual_total,
        "correspondence": {k: {"plane": v[0], "sign": v[1]} for k, v in rep.correspondence.items()},
    }
    _emit(out)
    _write_report(args.out, out)
    return EXIT_OK if rep.max_discrepancy == 0 else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dbog", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--boundary", choices=(PERIODIC, FREE), default=PERIODIC)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="write the JSON report (or, for solve, the configuration) here")

    p = sub.add_parser("verify", help="run the identity checks on seeded random data")
    p.add_argument("suite", choices=checks.SUITES + ("all",))
    p.add_argument("--lattice", action="append", help="e.g. 3x3x3; repeatable")
    p.add_argument("--trials", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("residual", help="Bogomolny residual of a configuration")
    p.add_argument("--config", required=True)
    common(p)
    p.set_defaults(func=cmd_residual)

    p = sub.add_parser("solve", help="minimise the Bogomolny residual")
    p.add_argument("--lattice", default=None, help="default 2x2x2")
    p.add_argument("--init", choices=("zeros", "noise", "config"), default="noise")
    p.add_argument("--amplitude", type=float, default=1e-2)
    p.add_argument("--config")
    p.add_argument("--method", choices=solver.METHODS, default="gauss_newton")
    p.add_argument("--max-iter", type=int, default=10_000)
    p.add_argument("--tol", type=float, default=1e-18)
    p.add_argument("--tol-step", type=float, default=1e-12)
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("reduce", help="check the lift to four dimensions against the Bogomolny residual")
    p.add_argument("--config", required=True)
    p.add_argument("--n4", type=int, default=2)
    common(p)
    p.set_defaults(func=cmd_reduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "solve" and not args.out:
        parser.error("solve needs --out PATH")
    try:
        return args.func(args)
    except (ConfigError, UsageError, OSError) as exc:
        _emit({"command": args.command, "error": str(exc),
               "where": getattr(exc, "where", None)}, sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        _emit({"command": args.command, "error": str(exc)}, sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
