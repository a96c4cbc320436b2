"""Command-line entry points.

Subcommands: solve (single run + snapshot export), residual / decouple
(sweep studies), energy (energy and rate check on stored snapshots),
report (re-emit artifacts from stored records).  Exit code 0 iff every
check declared in the config passed.
"""

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from wavesplit.analysis import error_state
from wavesplit.config import load as load_config
from wavesplit.energy import energy, energy_rate_check
from wavesplit.errors import WaveSplitError
from wavesplit.reporting import emit_report, load_records
from wavesplit.residuals import residual_tilde
from wavesplit.snapshots import load_trajectory, save_ib_trajectory, save_wave_trajectory
from wavesplit.solvers import IBState
from wavesplit.studies import run_decoupling_study, run_residual_study, run_single_solve


def _common_args(sub):
    sub.add_argument("--config", required=True, help="path to a study config file")
    sub.add_argument("--out", default=None,
                     help="output directory (default: the config's output.dir)")
    sub.add_argument("--workers", type=int, default=1,
                     help="max concurrent sweep points")
    sub.add_argument("--seed", type=int, default=None,
                     help="override the config seed (random-ensemble suites)")


def _load(args):
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    return cfg


def _cmd_solve(args) -> int:
    cfg = _load(args)
    out = Path(args.out or cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    traj, ctrl = run_single_solve(cfg)
    name = cfg.solve_equation.upper().replace("+", "p").replace("-", "m")
    path = out / f"{name}.snap"
    if isinstance(traj[0], IBState):
        save_ib_trajectory(path, traj, ctrl)
    else:
        save_wave_trajectory(path, traj, ctrl)
    print(f"wrote {len(traj)} snapshots to {path}")
    return 0


def _emit(result, out) -> int:
    paths = emit_report(result, out)
    for name, res in sorted(result.checks.items()):
        print(f"{result.label} {name}: {'PASS' if res['pass'] else 'FAIL'}")
    print(f"report written to {paths['summary']}")
    return 0 if result.passed else 1


def _cmd_decouple(args) -> int:
    cfg = _load(args)
    out = Path(args.out or cfg.out_dir)
    result = run_decoupling_study(cfg, workers=max(1, args.workers),
                                  snapshot_dir=str(out / "snapshots"))
    return _emit(result, out)


def _cmd_residual(args) -> int:
    cfg = _load(args)
    result = run_residual_study(cfg, workers=max(1, args.workers))
    return _emit(result, Path(args.out or cfg.out_dir))


def _cmd_energy(args) -> int:
    base = Path(args.snapshots)
    traj_ib, _ = load_trajectory(base / f"{args.prefix}ib.snap")
    traj_p, _ = load_trajectory(base / f"{args.prefix}plus.snap")
    traj_m, _ = load_trajectory(base / f"{args.prefix}minus.snap")
    triples = []
    rows = []
    for st_ib, st_p, st_m in zip(traj_ib, traj_p, traj_m):
        es = error_state(st_ib, st_p, st_m)
        rep = residual_tilde(st_p, st_m)
        ev = energy(es, st_p.w + st_m.w)
        triples.append((es, ev, rep))
        rows.append({"t": es.t, "energy": ev.value, "f_tilde_norm": rep.norm_tilde})
    check = energy_rate_check(triples)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    payload = {
        "empirical_c": check.empirical_c,
        "finite": check.finite,
        "sup_f_tilde": check.sup_f_tilde,
        "ratios": list(check.ratios),
        "rows": rows,
    }
    (out / "energy.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                                     encoding="utf-8")
    print(f"empirical rate constant: {check.empirical_c:.6g} "
          f"({'finite' if check.finite else 'NOT finite'})")
    return 0 if check.finite else 1


def _cmd_report(args) -> int:
    result = load_records(args.records)
    paths = emit_report(result, args.out)
    print(f"report written to {paths['summary']}")
    return 0 if result.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavesplit",
        description="Solve the two-directional long-wave equation and its "
                    "one-way CH/BBM/KDV splittings; verify error scaling.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("solve", help="single run with snapshot export")
    _common_args(sub)
    sub.set_defaults(func=_cmd_solve)

    sub = subs.add_parser("residual", help="residual-scaling study")
    _common_args(sub)
    sub.set_defaults(func=_cmd_residual)

    sub = subs.add_parser("decouple", help="decoupling-error study")
    _common_args(sub)
    sub.set_defaults(func=_cmd_decouple)

    sub = subs.add_parser("energy", help="energy/rate check on stored snapshots")
    sub.add_argument("--snapshots", required=True,
                     help="directory containing <prefix>{ib,plus,minus}.snap")
    sub.add_argument("--prefix", default="", help="snapshot filename prefix")
    sub.add_argument("--out", default="out")
    sub.set_defaults(func=_cmd_energy)

    sub = subs.add_parser("report", help="re-emit artifacts from stored records")
    sub.add_argument("--records", required=True, help="records.json from a study")
    sub.add_argument("--out", default="out")
    sub.set_defaults(func=_cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except WaveSplitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
