"""Command-line entry point.

Subcommands, one per capability: derive, simulate, certify, sweep, fit,
baselines. Exit codes: 0 success (and certification pass), 1 certification
failure or incomplete run, 2 usage/configuration error. All randomness
comes from explicit --seed flags; nothing is seeded from the clock.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import certify as cert
from .baselines import AlohaConfig, run_aloha, run_tdma
from .engine import TRACE_HEADER, run_prism
from .harness import (
    ExperimentConfig,
    aggregate,
    fit_scaling,
    read_aggregate_csv,
    run_sweep,
    write_aggregate_csv,
    write_sweep_csv,
)
from .params import LabelAssignment, assign_labels, derive_params
from .topology import Seed, generate


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="prism", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    d = sub.add_parser("derive", help="derive protocol parameters from (K, L, c, delta)")
    d.add_argument("--K", type=int, required=True, help="transmitter/receiver count")
    d.add_argument("--L", type=int, required=True, help="maximum receiver degree")
    d.add_argument("--c", type=float, required=True, help="round-budget ratio q/L, must be > 1")
    d.add_argument("--delta", type=float, default=1.0, help="failure exponent (default 1)")

    s = sub.add_parser("simulate", help="run one seeded discovery simulation")
    s.add_argument("--K", type=int, required=True)
    s.add_argument("--L", type=int, required=True)
    s.add_argument("--c", type=float, required=True)
    s.add_argument("--delta", type=float, default=1.0)
    s.add_argument("--seed", type=int, default=0, help="topology master seed (default 0)")
    s.add_argument("--max-phases", type=int, default=None,
                   help="phase budget (default 10*M)")
    s.add_argument("--trace", default=None, metavar="PATH",
                   help="write a per-round trace CSV to PATH")

    c = sub.add_parser("certify", help="window-property certificate plus analytic bounds")
    c.add_argument("--K", type=int, required=True)
    c.add_argument("--L", type=int, required=True)
    c.add_argument("--c", type=float, required=True)
    c.add_argument("--delta", type=float, default=1.0)
    c.add_argument("--W", type=int, default=None,
                   help="window length (default: derived W = ceil(2 q ln p))")

    w = sub.add_parser("sweep", help="run an experiment grid from a JSON config")
    w.add_argument("--config", required=True, help="ExperimentConfig JSON file")
    w.add_argument("--out", required=True, help="output directory for sweep.csv / aggregate.csv")
    w.add_argument("--jobs", type=int, default=1, help="parallel workers (default 1)")

    f = sub.add_parser("fit", help="fit metric ~ L*log K from an aggregate CSV")
    f.add_argument("--aggregate", required=True, help="aggregate CSV path")
    f.add_argument("--L", type=int, required=True)
    f.add_argument("--metric", choices=("mean", "max"), required=True)
    f.add_argument("--c", type=float, default=None, help="c filter (required if ambiguous)")
    f.add_argument("--algorithm", default="prism")

    b = sub.add_parser("baselines", help="single-shot baseline run (aloha or tdma)")
    b.add_argument("--algorithm", choices=("aloha", "tdma"), required=True)
    b.add_argument("--K", type=int, required=True)
    b.add_argument("--L", type=int, required=True)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--p-tx", type=float, default=None, help="ALOHA transmit probability (default 1/L)")
    b.add_argument("--max-rounds", type=int, default=None, help="ALOHA slot budget (default 10*K)")
    return ap


def _cmd_derive(args) -> int:
    params = derive_params(args.K, args.L, args.c, args.delta)
    print(json.dumps(params.to_dict()))
    return 0


def _cmd_simulate(args) -> int:
    params = derive_params(args.K, args.L, args.c, args.delta)
    topo = generate(args.K, args.L, Seed(args.seed, 0))
    labels = assign_labels(params)
    res = run_prism(topo, params, labels, max_phases=args.max_phases,
                    record_trace=args.trace is not None)
    if args.trace is not None:
        with open(args.trace, "w") as f:
            f.write(TRACE_HEADER + "\n")
            for phase, rnd, rx, kind, label in res.trace:
                f.write(f"{phase},{rnd},{rx},{kind},{'' if label is None else label}\n")
    print(json.dumps(res.to_dict()))
    return 0 if res.completed else 1


def _cmd_certify(args) -> int:
    params = derive_params(args.K, args.L, args.c, args.delta)
    W = args.W if args.W is not None else params.W
    if not 1 <= W <= params.p - 1:
        print(f"error: W must be in [1, p-1] = [1, {params.p - 1}]", file=sys.stderr)
        return 2
    report = cert.check_window_property(params.p, params.q, params.g, W)
    out = {
        "params": params.to_dict(),
        "window": report.to_dict(),
        "survival_bound": cert.survival_bound(params.L, params.q),
        "required_phases": cert.required_phases(params.K, params.L, params.q, params.delta),
        "stuck_phase_bound": cert.stuck_phase_bound(params.p, params.q, params.g).to_dict(),
        "deterministic_round_cap": W * params.q,
        "q_exceeds_2L": params.q > 2 * params.L,
    }
    print(json.dumps(out))
    if not report.passed:
        print("certification failed; consider increasing the window length W",
              file=sys.stderr)
        return 1
    return 0


def _cmd_sweep(args) -> int:
    try:
        cfg = ExperimentConfig.from_json_file(args.config)
    except (OSError, KeyError, ValueError, json.JSONDecodeError) as e:
        print(f"error: bad config: {e}", file=sys.stderr)
        return 2
    os.makedirs(args.out, exist_ok=True)
    records = run_sweep(cfg, jobs=args.jobs)
    rows = aggregate(records)
    write_sweep_csv(records, os.path.join(args.out, "sweep.csv"))
    write_aggregate_csv(rows, os.path.join(args.out, "aggregate.csv"))
    print(json.dumps({"records": len(records), "groups": len(rows), "out": args.out}))
    return 0


def _cmd_fit(args) -> int:
    rows = read_aggregate_csv(args.aggregate)
    fit = fit_scaling(rows, args.L, args.metric, algorithm=args.algorithm, c=args.c)
    print(json.dumps(fit))
    return 0


def _cmd_baselines(args) -> int:
    topo = generate(args.K, args.L, Seed(args.seed, 0))
    labels = LabelAssignment({i: i for i in range(1, args.K + 1)})
    if args.algorithm == "tdma":
        res = run_tdma(topo, labels)
    else:
        p_tx = args.p_tx if args.p_tx is not None else 1.0 / args.L
        budget = args.max_rounds if args.max_rounds is not None else 10 * args.K
        res = run_aloha(topo, AlohaConfig(p_tx=p_tx, max_rounds=budget), labels, args.seed)
    print(json.dumps(res.to_dict()))
    return 0 if res.completed else 1


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "derive": _cmd_derive,
        "simulate": _cmd_simulate,
        "certify": _cmd_certify,
        "sweep": _cmd_sweep,
        "fit": _cmd_fit,
        "baselines": _cmd_baselines,
    }
    try:
        return handlers[args.command](args)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
