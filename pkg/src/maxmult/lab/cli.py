"""Command line entry point.

    maxmult list
    maxmult experiment NAME [--config PATH] [--out DIR] [--seed INT] [--refine]
    maxmult norm      --config PATH [--out DIR]
    maxmult apply     --config PATH [--out DIR] [--field PATH] [--seed INT] [--refine]
    maxmult maximal   ...same as apply
    maxmult squarefn  ...same as apply
    maxmult mtilde    --config PATH [--out DIR]

Exit status: 0 when every case passes (or is vacuous / not applicable),
1 on any FAIL, 2 on usage or configuration errors.

Tool subcommands read the symbol from ``"symbol": {"family", "params"}`` in
the config. ``norm`` also reads ``"space": {"kind", "p", "s", "gamma"}`` and
``"theta"``; ``apply`` reads ``"t"``; ``mtilde`` reads ``"radii"``. Operator
subcommands act on ``--field`` (a binary field file) or, by default, on the
first member of the seeded corpus.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from ..errors import ContractViolation, InvalidParameter, PreconditionError
from ..fraccalc import m_tilde
from ..grid import Domain, lebesgue_norm, read_field, write_field, write_lattice
from ..norms import SpaceTag, sigma_norm
from ..operators import apply_multiplier, maximal_operator, square_function
from ..symbols import from_spec
from .config import default_config, grid_of, load_config, mesh_of, refine, tgrid_of, window_of
from .corpus import CorpusSpec, corpus
from .experiments import EXPERIMENTS, run_experiment

__all__ = ["main", "run_cli", "build_parser"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="maxmult", description="Maximal Fourier multiplier workbench")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True
    sub.add_parser("list", help="list registered experiments")

    def common(p, config_required=True):
        p.add_argument("--config", type=Path, required=config_required, help="JSON config file")
        p.add_argument("--out", type=Path, default=None, help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override the corpus seed")
        p.add_argument("--refine", action="store_true", help="double the resolution")

    p = sub.add_parser("experiment", help="run a named experiment")
    p.add_argument("name")
    common(p, config_required=False)
    common(sub.add_parser("norm", help="dyadic norm of a symbol"))
    for name in ("apply", "maximal", "squarefn"):
        q = sub.add_parser(name, help=f"{name} on a field")
        common(q)
        q.add_argument("--field", type=Path, default=None, help="input field file (physical domain)")
    common(sub.add_parser("mtilde", help="m~ on a list of radii"))
    return ap


def _config(args, experiment=None) -> dict:
    if args.config is not None:
        if not args.config.is_file():
            raise _UsageError(f"config file not found: {args.config}")
        try:
            cfg = load_config(args.config, experiment)
        except json.JSONDecodeError as exc:
            raise _UsageError(f"config is not valid JSON: {exc}") from exc
    else:
        cfg = default_config(experiment)
    if args.seed is not None:
        cfg["corpus"]["seed"] = int(args.seed)
    if args.refine:
        cfg = refine(cfg)
    if args.out is not None:
        cfg["out"] = str(args.out)
    return cfg


def _out_dir(args, default: str) -> Path:
    out = args.out if args.out is not None else Path("runs") / default
    out.mkdir(parents=True, exist_ok=True)
    return out


def _symbol(cfg):
    if "symbol" not in cfg:
        raise _UsageError("config needs a 'symbol' entry")
    return from_spec(cfg["symbol"])


def _cmd_list(args) -> int:
    for name, fn in EXPERIMENTS.items():
        doc = (fn.__doc__ or "").strip().splitlines()[0] if fn.__doc__ else ""
        print(f"{name:18s} {doc}")
    return EXIT_OK


def _cmd_experiment(args) -> int:
    if args.name not in EXPERIMENTS:
        print(f"unknown experiment {args.name!r}; known: {', '.join(EXPERIMENTS)}", file=sys.stderr)
        return EXIT_USAGE
    cfg = _config(args, args.name)
    rep = run_experiment(cfg)
    out = _out_dir(args, args.name + ("-refined" if cfg.get("refined") else ""))
    rep.write(out)
    for c in rep.cases:
        head = f" {c.headline}={c.metrics[c.headline]:.6g}" if c.headline else ""
        print(f"{c.verdict:14s} {args.name}:{c.name}{head}")
    print(f"{rep.verdict} {args.name} ({len(rep.cases)} cases, {rep.wall_clock_s:.1f} s) -> {out}")
    return EXIT_OK if rep.passed else EXIT_FAIL


def _cmd_norm(args) -> int:
    cfg = _config(args)
    m = _symbol(cfg)
    space = SpaceTag.from_dict(cfg.get("space", {"kind": "SobolevL2", "s": 0.0}))
    rep = sigma_norm(m, space, float(cfg.get("theta", 0.0)), window_of(cfg), grid_of(cfg, "shell_grid"),
                     fingerprint_of={k: v for k, v in cfg.items() if k != "out"})
    out = _out_dir(args, "norm")
    rep.write_json(out / "norm.json")
    rep.write_csv(out / "shells.csv")
    print(f"{space.label} theta={rep.theta:g}: total={rep.total:.10g} tail={rep.tail:.3g}"
          f"{' DIVERGENT' if rep.divergent else ''} -> {out}")
    return EXIT_OK


def _input_field(args, cfg):
    if args.field is not None:
        f = read_field(args.field)
        if f.domain is not Domain.PHYSICAL:
            raise _UsageError("input field must be in the physical domain")
        return f
    c = cfg["corpus"]
    g = grid_of(cfg)
    base = cfg["corpus"].get("base_grid")
    base = grid_of({"b": base}, "b") if base else None
    return corpus(g, CorpusSpec(int(c["seed"]), 1, tuple(c["band"])), base)[0]


def _cmd_operator(args) -> int:
    cfg = _config(args)
    m = _symbol(cfg)
    f = _input_field(args, cfg)
    out = _out_dir(args, args.command)
    summary = {"command": args.command, "symbol": cfg["symbol"], "input_l2": lebesgue_norm(f, 2)}
    if args.command == "apply":
        res = apply_multiplier(m, f, float(cfg.get("t", 1.0)))
        summary["t"] = float(cfg.get("t", 1.0))
    elif args.command == "maximal":
        mr = maximal_operator(m, f, tgrid_of(cfg))
        res = mr.field
        write_lattice(f.grid, Domain.PHYSICAL, mr.achiever, out / "achiever.bin")
        summary["boundary_share"] = mr.boundary_share()
    else:
        res = square_function(m, f, tgrid_of(cfg))
    write_field(res, out / "result.bin")
    summary.update(output_l2=lebesgue_norm(res, 2), output_sup=float(np.abs(res.values).max()))
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True))
    print(f"{args.command}: ||out||_2={summary['output_l2']:.10g} sup={summary['output_sup']:.10g} -> {out}")
    return EXIT_OK


def _cmd_mtilde(args) -> int:
    cfg = _config(args)
    m = _symbol(cfg)
    radii = np.asarray(cfg.get("radii", [0.5, 1.0, 2.0, 4.0]), dtype=float)
    vals = m_tilde(m, float(cfg["eps"]), radii.reshape(-1, 1), mesh_of(cfg))
    out = _out_dir(args, "mtilde")
    with open(out / "mtilde.csv", "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["r", "re", "im"])
        for r, v in zip(radii, vals):
            wr.writerow([repr(float(r)), repr(float(v.real)), repr(float(v.imag))])
    print(f"m~ of {m.name} at {radii.size} radii -> {out / 'mtilde.csv'}")
    return EXIT_OK


_COMMANDS = {
    "list": _cmd_list,
    "experiment": _cmd_experiment,
    "norm": _cmd_norm,
    "apply": _cmd_operator,
    "maximal": _cmd_operator,
    "squarefn": _cmd_operator,
    "mtilde": _cmd_mtilde,
}


def run_cli(argv=None) -> int:
    """Parse ``argv`` and run; returns the exit status instead of exiting."""
    try:
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.command](args)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except _UsageError as exc:
        print(f"maxmult: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidParameter, ContractViolation, PreconditionError, KeyError) as exc:
        print(f"maxmult: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None) -> None:
    warnings.simplefilter("default")
    sys.exit(run_cli(argv))
