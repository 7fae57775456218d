"""Command-line front end.

    netsiri [--output-dir DIR] [--format json|csv|text] [--seed N] VERB scenario.json [flags]

Verbs: analyze, simulate, equilibrium, partition, stochastic, sweep.
Every verb writes its machine-readable artifact into the output
directory and prints a summary; --format switches the stdout rendering.
Agent indices on the command line and in scenario files are 1-based.
"""

import argparse
import json
import os
import sys

import numpy as np

from .model import classify_case, stubborn_agents
from .reproduction import extreme_numbers, classify_regime
from .equilibria import solve_ee, sample_m0
from .dynamics import simulate, OutcomeKind, IFE_STATE_TOL
from .stochastic import monte_carlo_mean
from .scenario import (load_scenario, apply_control, Vaccinate,
                       scenario_to_dict, ScenarioError)

_F = ".17g"


def _fmt(x):
    return format(float(x), _F)


def _out_path(args, stem, suffix):
    os.makedirs(args.output_dir, exist_ok=True)
    return os.path.join(args.output_dir, stem + suffix)


def _stem(path):
    return os.path.splitext(os.path.basename(path))[0]


def _load(args):
    sc = load_scenario(args.scenario)
    if getattr(args, "apply_controls", False):
        for action in sc.controls:
            sc = apply_control(sc, action)
    return sc


def _analysis_report(sc):
    model = sc.model()
    rs = extreme_numbers(model)
    return {
        "case": classify_case(model).value,
        "stubborn": sorted(a + 1 for a in stubborn_agents(model)),
        "r0": rs.r0,
        "r1": rs.r1,
        "rmin": rs.rmin,
        "rmax": rs.rmax,
        "p_min": rs.p_min.tolist(),
        "p_max": rs.p_max.tolist(),
        "exact": rs.exact,
        "regime": classify_regime(rs).value,
    }


def cmd_analyze(args):
    sc = _load(args)
    report = _analysis_report(sc)
    path = _out_path(args, _stem(args.scenario), "_analysis.json")
    with open(path, "w") as fh:
        json.dump(report, fh, indent=1)
        fh.write("\n")
    if args.format == "json":
        print(json.dumps(report, indent=1))
    elif args.format == "csv":
        for key, val in report.items():
            print("%s,%s" % (key, json.dumps(val)))
    else:
        print("case:     %s   (stubborn agents: %s)"
              % (report["case"], report["stubborn"] or "none"))
        print("r0=%.6g  r1=%.6g  rmin=%.6g  rmax=%.6g  (extremizers %s)"
              % (report["r0"], report["r1"], report["rmin"], report["rmax"],
                 "exact" if report["exact"] else "search, not certified"))
        print("p_min=%s  p_max=%s" % (report["p_min"], report["p_max"]))
        print("regime:   %s" % report["regime"])
    print("wrote %s" % path)
    return 0


def _write_trajectory_csv(path, traj):
    n = traj.p_s.shape[1]
    header = (["t"] + ["pS_%d" % (j + 1) for j in range(n)]
              + ["pI_%d" % (j + 1) for j in range(n)] + ["pI_avg", "lambda"])
    with open(path, "w") as fh:
        fh.write(", ".join(header) + "\n")
        for k in range(traj.times.size):
            row = ([_fmt(traj.times[k])]
                   + [_fmt(x) for x in traj.p_s[k]]
                   + [_fmt(x) for x in traj.p_i[k]]
                   + [_fmt(traj.weighted_avg[k]), _fmt(traj.lambda_track[k])])
            fh.write(", ".join(row) + "\n")


def _outcome_doc(outcome):
    doc = {"outcome": outcome.kind.value,
           "horizon": outcome.horizon,
           "p_s_final": outcome.p_s_final.tolist(),
           "p_i_final": outcome.p_i_final.tolist()}
    if outcome.kind == OutcomeKind.CONVERGED_EE:
        doc["ee_distance"] = outcome.ee_distance
    if outcome.resurgence is not None:
        r = outcome.resurgence
        doc["resurgence"] = {"initial_peak": r.initial_peak, "dip": r.dip,
                             "dip_time": r.dip_time,
                             "resurge_time": r.resurge_time}
    return doc


def cmd_simulate(args):
    sc = _load(args)
    model = sc.model()
    t_end = args.t_end if args.t_end else sc.t_end
    traj, outcome = simulate(model, sc.p_s0, sc.p_i0, t_end=t_end,
                             dt=sc.dt, stride=sc.stride)
    path = _out_path(args, _stem(args.scenario), "_trajectory.csv")
    _write_trajectory_csv(path, traj)
    doc = _outcome_doc(outcome)
    if args.format == "json":
        print(json.dumps(doc, indent=1))
    else:
        print("outcome: %s at t=%.6g" % (outcome.kind.value, outcome.horizon))
        if outcome.kind == OutcomeKind.CONVERGED_IFE:
            print("final susceptibles: %s"
                  % np.array2string(outcome.p_s_final, precision=6))
        elif outcome.kind == OutcomeKind.CONVERGED_EE:
            print("distance to endemic equilibrium: %.3g"
                  % outcome.ee_distance)
        if outcome.resurgence is not None:
            r = outcome.resurgence
            print("resurgence: dip %.3g at t=%.4g, rebound past 10x dip "
                  "at t=%.4g" % (r.dip, r.dip_time, r.resurge_time))
    print("wrote %s" % path)
    return 0


def cmd_equilibrium(args):
    sc = _load(args)
    model = sc.model()
    ee = solve_ee(model)
    if ee is None:
        doc = {"exists": False,
               "note": "reinfection subcritical (r1 <= 1), no endemic point"}
    else:
        doc = {"exists": True, "p_i_star": ee.p_i_star.tolist(),
               "residual": ee.residual, "ja_lambda": ee.ja_lambda}
    path = _out_path(args, _stem(args.scenario), "_equilibrium.json")
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")
    if args.format == "json":
        print(json.dumps(doc, indent=1))
    elif ee is None:
        print("no endemic equilibrium (r1 <= 1)")
    else:
        print("endemic equilibrium: %s"
              % np.array2string(ee.p_i_star, precision=6))
        print("fixed-point residual %.2e, attractor eigenvalue %.6g"
              % (ee.residual, ee.ja_lambda))
    print("wrote %s" % path)
    return 0


def cmd_partition(args):
    sc = _load(args)
    model = sc.model()
    sample = sample_m0(model, rays=args.rays)
    n = model.n
    path = _out_path(args, _stem(args.scenario), "_m0.csv")
    with open(path, "w") as fh:
        fh.write(", ".join(["pS_%d" % (j + 1) for j in range(n)]
                           + ["lambda"]) + "\n")
        for pt, lam in zip(sample.points, sample.lambdas):
            fh.write(", ".join([_fmt(x) for x in pt] + [_fmt(lam)]) + "\n")
    print("%d boundary points from %d rays (anchor %s)"
          % (len(sample.points), sample.rays,
             np.array2string(sample.anchor, precision=3)))
    print("wrote %s" % path)
    return 0


def cmd_stochastic(args):
    sc = _load(args)
    model = sc.model()
    st = sc.stochastic
    trials = args.trials or (st.trials if st else 1000)
    seed = args.seed if args.seed is not None else (st.seed if st else 0)
    generator = st.generator if st else "pcg64"
    t_end = args.t_end if args.t_end else min(sc.t_end, 50.0)
    t_grid = np.linspace(0.0, t_end, args.points)
    est = monte_carlo_mean(model, sc.p_s0, sc.p_i0, t_grid, trials, seed,
                           generator)
    n = model.n
    path = _out_path(args, _stem(args.scenario), "_mc.csv")
    with open(path, "w") as fh:
        fh.write(", ".join(["t"]
                           + ["pIhat_%d" % (j + 1) for j in range(n)]
                           + ["stderr_%d" % (j + 1) for j in range(n)])
                 + "\n")
        for k in range(t_grid.size):
            fh.write(", ".join([_fmt(t_grid[k])]
                               + [_fmt(x) for x in est.p_i_hat[k]]
                               + [_fmt(x) for x in est.stderr[k]]) + "\n")
    print("%d trials, seed %d, generator %s" % (trials, seed, generator))
    print("wrote %s" % path)
    return 0


def _parse_set(spec):
    spec = spec.strip()
    if not spec:
        return ()
    return tuple(int(tok) - 1 for tok in spec.replace(";", ",").split(","))


def cmd_sweep(args):
    sc = _load(args)
    sets = [_parse_set(s) for s in (args.sets or [""])]
    rows = []
    trajectories = []
    for agents in sets:
        variant = apply_control(sc, Vaccinate(agents=agents)) if agents \
            else sc
        model = variant.model()
        traj, outcome = simulate(model, variant.p_s0, variant.p_i0,
                                 t_end=sc.t_end, dt=sc.dt, stride=sc.stride)
        label = "+".join(str(a + 1) for a in agents) if agents else "none"
        when = ""
        if outcome.kind == OutcomeKind.CONVERGED_IFE:
            below = np.nonzero(traj.p_i.max(axis=1) <= IFE_STATE_TOL)[0]
            if below.size:
                when = "eradicated by t=%.4g" % traj.times[below[0]]
        elif outcome.resurgence is not None:
            when = "resurges at t=%.4g" % outcome.resurgence.resurge_time
        rows.append((label, outcome.kind.value, when))
        trajectories.append((label, traj))

    path = _out_path(args, _stem(args.scenario), "_sweep.csv")
    with open(path, "w") as fh:
        fh.write("set, t, pI_mean\n")
        for label, traj in trajectories:
            mean = traj.p_i.mean(axis=1)
            for k in range(traj.times.size):
                fh.write("%s, %s, %s\n"
                         % (label, _fmt(traj.times[k]), _fmt(mean[k])))
    if args.format == "json":
        print(json.dumps([{"set": a, "outcome": b, "timing": c}
                          for a, b, c in rows], indent=1))
    else:
        width = max(len(r[0]) for r in rows)
        print("%-*s  %-14s  %s" % (width, "set", "outcome", "timing"))
        for label, kind, when in rows:
            print("%-*s  %-14s  %s" % (width, label, kind, when))
    print("wrote %s" % path)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="netsiri",
        description="Network SIRI epidemic analysis and simulation")
    parser.add_argument("--output-dir", default=".",
                        help="directory for generated files (default: .)")
    parser.add_argument("--format", choices=("json", "csv", "text"),
                        default="text", help="stdout rendering")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the scenario RNG seed")
    sub = parser.add_subparsers(dest="verb", required=True)

    def add(name, fn, **extra):
        p = sub.add_parser(name, **extra)
        p.add_argument("scenario", help="scenario JSON file")
        p.set_defaults(fn=fn)
        return p

    p = add("analyze", cmd_analyze,
            help="immunity case, reproduction numbers, regime")
    p.add_argument("--apply-controls", action="store_true",
                   help="apply the scenario's control list first")

    p = add("simulate", cmd_simulate, help="integrate and classify outcome")
    p.add_argument("--apply-controls", action="store_true")
    p.add_argument("--t-end", type=float, default=None,
                   help="override the scenario horizon")

    add("equilibrium", cmd_equilibrium, help="endemic equilibrium solve")

    p = add("partition", cmd_partition,
            help="sample the stability boundary of the healthy set")
    p.add_argument("--rays", type=int, default=32)

    p = add("stochastic", cmd_stochastic, help="Monte Carlo event simulation")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--t-end", type=float, default=None)
    p.add_argument("--points", type=int, default=101)

    p = add("sweep", cmd_sweep, help="vaccination set comparison")
    p.add_argument("--sets", action="append", default=None,
                   metavar="AGENTS",
                   help="comma-separated 1-based agents; repeatable; "
                        "empty string means no vaccination")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ScenarioError, ValueError, RuntimeError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
