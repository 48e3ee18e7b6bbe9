"""Command-line front end.

Subcommands
-----------
run     one experiment config -> curve CSV (+ single-trial trajectory CSV)
table   reproduce a canned rate table -> rates.csv, nonzero exit on failure
verify  lemma-bound / descent-inequality / exponent-estimator suites -> CSV

Configs are flat ``key=value`` text files; command-line flags override file
values.  Every run writes a manifest echoing the fully resolved config.  The
environment variable LEGENDRE_OMD_SEED overrides the master seed.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .algorithms import StepSchedule, check_descent_inequality, run_omd
from .errors import ConfigError, LegendreOmdError, NumericalError
from .geometry import (DEFAULT_RADII, estimate_legendre_exponent,
                       legendre_exponent, registry_cases)
from .harness import (DEFAULT_SEED, DEFAULT_T, DEFAULT_TRIALS,
                      ExperimentConfig, TABLES, estimate_rate, master_seed,
                      reproduce_table, run_trials)
from .problems import get_problem, oracle_gaussian, oracle_none
from .domains import get_domain
from .geometry import get_geometry
from .sequences import LEMMA_IDS, run_lemma_suite

_RUN_KEYS = {
    "geometry": str, "problem": str, "domain": str, "gamma": float,
    "t0": float, "eta": float, "sigma2": float, "T": int, "trials": int,
    "x_init": float, "t_lo": int, "t_hi": int, "seed": int,
}

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _read_config(path: str) -> dict:
    cfg = {}
    for ln, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{ln}: expected key=value, got {raw!r}")
        k, _, v = line.partition("=")
        cfg[k.strip()] = v.strip()
    return cfg


def _coerce(cfg: dict) -> dict:
    out = {}
    for k, v in cfg.items():
        if k not in _RUN_KEYS:
            raise ConfigError(f"unknown config key: {k}")
        out[k] = _RUN_KEYS[k](v)
    return out


def _write_manifest(out_dir: Path, entries: dict) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "manifest.txt", "w", encoding="utf-8") as f:
        f.write(f"# legendre-omd {__version__}\n")
        for k in sorted(entries):
            f.write(f"{k}={entries[k]}\n")


def _plot_curve(curve, path: Path) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 4))
    ax.loglog(curve.t, curve.mean_d)
    ax.set_xlabel("t")
    ax.set_ylabel("mean divergence to solution")
    ax.set_title(curve.config.geometry)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def cmd_run(args) -> int:
    cfg_dict = _read_config(args.config) if args.config else {}
    for key in _RUN_KEYS:
        flag = getattr(args, key if key != "T" else "T", None)
        if flag is not None:
            cfg_dict[key] = flag
    cfg_dict = _coerce({k: str(v) for k, v in cfg_dict.items()})
    if "geometry" not in cfg_dict:
        raise ConfigError("missing required key: geometry")
    if "seed" not in cfg_dict:
        cfg_dict["seed"] = master_seed()
    cfg = ExperimentConfig(**cfg_dict)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    curve = run_trials(cfg, threads=args.threads)
    curve_path = out_dir / f"curve_{cfg.digest}.csv"
    curve.write_csv(curve_path)
    outputs = [curve_path.name]

    problem, geometry, schedule, oracle = cfg.resolve()
    if cfg.T <= 1_000_000:
        traj = run_omd(problem, geometry, schedule, oracle.for_trial(0), cfg.T,
                       cfg.x_init, raise_on_blowup=False)
        traj_path = out_dir / f"trajectory_{cfg.digest}.csv"
        traj.write_csv(traj_path)
        outputs.append(traj_path.name)
    if args.plot:
        plot_path = out_dir / f"curve_{cfg.digest}.svg"
        _plot_curve(curve, plot_path)
        outputs.append(plot_path.name)

    est = estimate_rate(curve.t, curve.mean_d, cfg.window, curve.trials_used)
    manifest = {k: getattr(cfg, k) for k in _RUN_KEYS}
    manifest.update(hash=cfg.digest, outputs=";".join(outputs),
                    fitted_nu=f"{est.nu:.6g}", r2=f"{est.r2:.6g}",
                    blowups=curve.blowups, threads=args.threads)
    _write_manifest(out_dir, manifest)
    print(f"fitted exponent {est.nu:.4f} (R^2 {est.r2:.4f}), "
          f"{curve.trials_used} trials, {curve.blowups} blow-ups -> {curve_path}")
    return EXIT_OK


def cmd_table(args) -> int:
    which = args.which
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    seed = args.seed if args.seed is not None else master_seed()
    trials = args.trials if args.trials is not None else DEFAULT_TRIALS
    T = args.T if args.T is not None else DEFAULT_T
    curves = {}
    report = reproduce_table(which, T=T, trials=trials, seed=seed,
                             threads=args.threads, curves_out=curves)
    rates_path = out_dir / "rates.csv"
    report.write_csv(rates_path)
    outputs = [rates_path.name]
    for name, curve in curves.items():
        p = out_dir / f"curve_{curve.config.digest}.csv"
        curve.write_csv(p)
        outputs.append(p.name)
        if args.plot:
            sp = out_dir / f"curve_{curve.config.digest}.svg"
            _plot_curve(curve, sp)
            outputs.append(sp.name)
    manifest = {
        "table": which, "T": T, "trials": trials, "seed": seed,
        "outputs": ";".join(outputs),
        "reduced": "true" if (trials < DEFAULT_TRIALS or T < DEFAULT_T) else "false",
    }
    _write_manifest(out_dir, manifest)
    for r in report.rows:
        print(f"{r.row.name:>14}: theory {r.row.theory_nu:.4f}  observed "
              f"{r.observed_nu:.4f}  [{r.row.nu_lo:.2f}, {r.row.nu_hi:.2f}]  "
              f"{'PASS' if r.passed else 'FAIL'}")
    return EXIT_OK if report.passed else EXIT_FAIL


def _verify_lemmas(args, out_dir: Path) -> int:
    reports = run_lemma_suite(draws=args.draws, T=args.T or 10_000,
                              seed=args.seed if args.seed is not None else master_seed())
    path = out_dir / "lemmas.csv"
    with open(path, "w", encoding="utf-8") as f:
        f.write("lemma,mode,q,qp,eta,t0,alpha,a1,pass,worst_margin\n")
        for r in reports:
            s = r.spec
            f.write(f"{r.lemma_id},{s.mode},{s.q:.6g},{s.qp:.6g},{s.eta:.6g},"
                    f"{s.t0:.6g},{s.alpha:.6g},{s.a1:.6g},"
                    f"{'true' if r.passed else 'false'},{r.worst_margin:.3e}\n")
    n_fail = sum(not r.passed for r in reports)
    print(f"lemma bounds: {len(reports)} draws, {n_fail} failures -> {path}")
    return EXIT_OK if n_fail == 0 else EXIT_FAIL


def _verify_descent(args, out_dir: Path) -> int:
    seeds = range(args.seeds)
    geoms = ("euclidean", "entropy", "tsallis:q=1.5")
    dom = get_domain("halfline")
    problem = get_problem("linear1d:lambda=1", dom)
    schedule = StepSchedule(0.25, 0.0, 0.7)   # gamma_1 = 1/(4L)
    path = out_dir / "descent.csv"
    n_fail = 0
    with open(path, "w", encoding="utf-8") as f:
        f.write("seed,geometry,max_violation,pass\n")
        for key in geoms:
            geometry = get_geometry(key, dom)
            for s in seeds:
                oracle = oracle_gaussian(1e-4, master_seed() + s)
                traj = run_omd(problem, geometry, schedule, oracle, 2000, 0.1)
                rep = check_descent_inequality(traj, problem)
                n_fail += not rep.passed
                f.write(f"{s},{key},{rep.max_violation:.3e},"
                        f"{'true' if rep.passed else 'false'}\n")
    print(f"descent inequality: {len(geoms) * args.seeds} runs, {n_fail} failures -> {path}")
    return EXIT_OK if n_fail == 0 else EXIT_FAIL


def _verify_legendre(args, out_dir: Path) -> int:
    path = out_dir / "legendre.csv"
    n_fail = 0
    with open(path, "w", encoding="utf-8") as f:
        f.write("case,beta,beta_hat,diff,pass\n")
        for case in registry_cases():
            if case.beta >= 1.0:
                f.write(f"{case.label},{case.beta:g},,,skipped\n")
                continue
            bh = estimate_legendre_exponent(case.geometry, case.point, DEFAULT_RADII)
            ok = abs(bh - case.beta) <= 0.05
            n_fail += not ok
            f.write(f"{case.label},{case.beta:g},{bh:.4f},{abs(bh - case.beta):.4f},"
                    f"{'true' if ok else 'false'}\n")
    print(f"exponent estimator: {n_fail} failures -> {path}")
    return EXIT_OK if n_fail == 0 else EXIT_FAIL


def cmd_verify(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    rc = {"lemmas": _verify_lemmas, "descent": _verify_descent,
          "legendre": _verify_legendre}[args.what](args, out_dir)
    _write_manifest(out_dir, {
        "verify": args.what, "seeds": getattr(args, "seeds", ""),
        "draws": getattr(args, "draws", ""), "T": getattr(args, "T", "") or "",
        "status": "pass" if rc == EXIT_OK else "fail"})
    return rc


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="legendre-omd",
        description="Optimistic mirror descent experiments over Bregman geometries")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one experiment config")
    run.add_argument("--config", help="key=value config file")
    run.add_argument("--geometry")
    run.add_argument("--problem")
    run.add_argument("--domain")
    run.add_argument("--gamma", type=float)
    run.add_argument("--t0", type=float)
    run.add_argument("--eta", type=float)
    run.add_argument("--sigma2", type=float)
    run.add_argument("--T", type=int)
    run.add_argument("--trials", type=int)
    run.add_argument("--x-init", dest="x_init", type=float)
    run.add_argument("--t-lo", dest="t_lo", type=int)
    run.add_argument("--t-hi", dest="t_hi", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--out", default="out")
    run.add_argument("--threads", type=int, default=os.cpu_count())
    run.add_argument("--plot", action="store_true")
    run.set_defaults(fn=cmd_run)

    table = sub.add_parser("table", help="reproduce a canned rate table")
    table.add_argument("which", choices=sorted(TABLES))
    table.add_argument("--trials", type=int)
    table.add_argument("--T", type=int)
    table.add_argument("--seed", type=int)
    table.add_argument("--out", default="out")
    table.add_argument("--threads", type=int, default=os.cpu_count())
    table.add_argument("--plot", action="store_true")
    table.set_defaults(fn=cmd_table)

    ver = sub.add_parser("verify", help="run a verification suite")
    ver.add_argument("what", choices=["lemmas", "descent", "legendre"])
    ver.add_argument("--seeds", type=int, default=10)
    ver.add_argument("--draws", type=int, default=200)
    ver.add_argument("--T", type=int)
    ver.add_argument("--seed", type=int)
    ver.add_argument("--out", default="out")
    ver.set_defaults(fn=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as e:
        print(f"numerical error: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except LegendreOmdError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
