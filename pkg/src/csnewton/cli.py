"""Experiment command line.

Three subcommands reproduce the library's benchmark experiments as CSV:

* ``rate-scan`` -- sweep the complex step h and record iteration counts,
  final errors, and experimental convergence rates for one solver variant;
* ``ode``      -- integrate the stiff test problem or the reaction model,
  emitting the trajectory and per-step iteration counts;
* ``dnls``     -- compute the lattice standing wave (``ground``) or evolve
  it while tracking the conserved quantities (``evolve``).

Every CSV is written with 17 significant digits (lossless for doubles) and
is paired with a JSON manifest echoing the exact configuration.  Exit
codes: 0 success, 1 solver non-convergence, 2 usage error.
"""

import argparse
import concurrent.futures
import json
import sys
import time

import numpy as np

from . import __version__, problems
from .errors import CsNewtonError
from .gmres import GmresConfig
from .irk import integrate
from .newton import NewtonConfig, jacobian_cs_newton, jfnk_cs_newton, scalar_cs_newton


class UsageError(Exception):
    pass


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def write_csv(path, header, rows):
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_manifest(path, command, config, outputs, duration):
    payload = {
        "command": command,
        "config": config,
        "library_version": __version__,
        "duration_seconds": duration,
        "outputs": outputs,
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load_config_file(path):
    values = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"bad config line (expected key=value): {line!r}")
            key, _, val = line.partition("=")
            values[key.strip().replace("-", "_")] = val.strip()
    return values


def _resolve(args, file_cfg, name, default, cast):
    """Flag > config file > built-in default."""
    flag_val = getattr(args, name, None)
    if flag_val is not None:
        return flag_val
    if file_cfg and name in file_cfg:
        try:
            return cast(file_cfg[name])
        except ValueError as exc:
            raise UsageError(f"bad config value for {name}: {exc}") from None
    return default


def parse_h_grid(spec, cap_n):
    """Grid specs: 'harmonic', 'geometric:lo,hi,count', 'list:a,b,...'
    or a bare comma-separated list."""
    spec = spec.strip()
    if not spec:
        raise UsageError("empty h-grid")
    if spec == "harmonic":
        if cap_n < 1:
            raise UsageError(f"cap-n must be >= 1, got {cap_n}")
        return [2.0 / n for n in range(1, cap_n + 1)]
    if spec.startswith("geometric:"):
        parts = spec[len("geometric:"):].split(",")
        if len(parts) != 3:
            raise UsageError(f"geometric grid needs lo,hi,count: {spec!r}")
        try:
            lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if lo <= 0 or hi <= 0 or count < 1:
            raise UsageError(f"bad geometric grid {spec!r}")
        return list(np.geomspace(lo, hi, count))
    if spec.startswith("list:"):
        spec = spec[len("list:"):]
    try:
        grid = [float(tok) for tok in spec.split(",") if tok.strip()]
    except ValueError as exc:
        raise UsageError(f"bad h value in grid: {exc}") from None
    if not grid:
        raise UsageError("empty h-grid")
    if any(h <= 0 for h in grid):
        raise UsageError("h values must be positive")
    return grid


# ---------------------------------------------------------------------------
# rate-scan


def _scan_point(variant, h, x0, tol, inner_tol):
    try:
        if variant == "scalar":
            cfg = NewtonConfig(h=h, step_tol=tol, known_root=0.0)
            rep = scalar_cs_newton(problems.scalar_test_fn(), x0[0], cfg)
            inner_total = None
        else:
            cfg = NewtonConfig(
                h=h,
                step_tol=tol,
                known_root=np.zeros(len(x0)),
                inner=GmresConfig(rel_tol=inner_tol),
            )
            solver = jacobian_cs_newton if variant == "jacobian" else jfnk_cs_newton
            rep = solver(problems.uncoupled_system(), np.array(x0), cfg)
            inner_total = sum(rep.inner_iteration_counts) if variant == "jfnk" else None
        failed = 0 if rep.converged else 1
        return (h, rep.iterations, rep.error_history[-1], rep.rate_estimate,
                inner_total, failed)
    except CsNewtonError:
        return (h, None, None, None, None, 1)


def cmd_rate_scan(args, file_cfg):
    variant = _resolve(args, file_cfg, "variant", None, str)
    if variant not in ("scalar", "jacobian", "jfnk"):
        raise UsageError(f"unknown variant {variant!r}")
    problem = _resolve(args, file_cfg, "problem",
                       "scalar" if variant == "scalar" else "uncoupled", str)
    if variant == "scalar" and problem != "scalar":
        raise UsageError("the scalar variant only supports --problem scalar")
    if variant != "scalar" and problem != "uncoupled":
        raise UsageError(f"unknown system problem {problem!r}")
    cap_n = _resolve(args, file_cfg, "cap_n", 10000, int)
    grid_spec = _resolve(args, file_cfg, "h_grid",
                         "harmonic" if variant == "scalar" else "geometric:1e-3,1,30",
                         str)
    tol = _resolve(args, file_cfg, "tol", 1e-14, float)
    inner_tol = _resolve(args, file_cfg, "inner_tol", 1e-14, float)
    workers = _resolve(args, file_cfg, "workers", 1, int)
    out = _resolve(args, file_cfg, "out", "rate_scan.csv", str)
    x0_spec = _resolve(args, file_cfg, "x0",
                       "2.5" if variant == "scalar" else "2.5,2.5", str)
    x0 = [float(tok) for tok in x0_spec.split(",") if tok.strip()]
    if variant == "scalar" and len(x0) != 1:
        raise UsageError("scalar variant needs a single x0")
    if variant != "scalar" and len(x0) != 2:
        raise UsageError("system variants need a 2-component x0")

    grid = parse_h_grid(grid_spec, cap_n)
    started = time.time()
    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(
                lambda h: _scan_point(variant, h, x0, tol, inner_tol), grid))
    else:
        results = [_scan_point(variant, h, x0, tol, inner_tol) for h in grid]

    header = ["h", "iterations", "final_error", "rate_estimate"]
    if variant == "jfnk":
        header.append("inner_iteration_total")
    header.append("failed")
    rows = []
    any_failed = False
    for h, iters, err, rate, inner_total, failed in results:
        row = [h, iters, err, rate]
        if variant == "jfnk":
            row.append(inner_total)
        row.append(failed)
        rows.append(row)
        any_failed = any_failed or bool(failed)

    write_csv(out, header, rows)
    config = {
        "variant": variant, "problem": problem, "h_grid": grid_spec,
        "cap_n": cap_n, "tol": tol, "inner_tol": inner_tol,
        "x0": x0, "workers": workers, "out": out,
    }
    write_manifest(out + ".manifest.json", "rate-scan", config, [out],
                   time.time() - started)
    if any_failed:
        print("rate-scan: solver failure at one or more grid points",
              file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------
# ode


def cmd_ode(args, file_cfg):
    problem = _resolve(args, file_cfg, "problem", None, str)
    if problem not in ("stiff", "olsen"):
        raise UsageError(f"unknown ode problem {problem!r}")
    defaults = {"stiff": (1e-2, 3.0, 1e-2), "olsen": (0.01, 10.0, 0.1)}
    def_dt, def_tend, def_h = defaults[problem]
    dt = _resolve(args, file_cfg, "dt", def_dt, float)
    t_end = _resolve(args, file_cfg, "t_end", def_tend, float)
    h = _resolve(args, file_cfg, "h", def_h, float)
    tol = _resolve(args, file_cfg, "tol", 1e-12, float)
    inner_tol = _resolve(args, file_cfg, "inner_tol", 1e-12, float)
    out = _resolve(args, file_cfg, "out", problem, str)
    if dt <= 0:
        raise UsageError(f"dt must be positive, got {dt}")
    if t_end <= 0:
        raise UsageError(f"t-end must be positive, got {t_end}")

    prob = (problems.stiff_ode(dt=dt, t_end=t_end) if problem == "stiff"
            else problems.olsen_system(dt=dt, t_end=t_end))
    cfg = NewtonConfig(h=h, step_tol=tol, inner=GmresConfig(rel_tol=inner_tol))

    started = time.time()
    try:
        traj = integrate(prob, cfg)
    except CsNewtonError as exc:
        print(f"ode: {exc}", file=sys.stderr)
        return 1

    traj_path = f"{out}_trajectory.csv"
    iters_path = f"{out}_iterations.csv"
    write_csv(
        traj_path,
        ["t"] + [f"y{i}" for i in range(prob.dim)],
        [[t] + list(state) for t, state in zip(traj.times, traj.states)],
    )
    write_csv(
        iters_path,
        ["step", "newton_iters", "max_gmres_iters"],
        [
            [i, rep.newton_iterations,
             max(rep.inner_iterations_per_newton, default=0)]
            for i, rep in enumerate(traj.step_reports[1:], start=1)
        ],
    )
    config = {"problem": problem, "dt": dt, "t_end": t_end, "h": h,
              "tol": tol, "inner_tol": inner_tol, "out": out}
    write_manifest(f"{out}.manifest.json", "ode", config,
                   [traj_path, iters_path], time.time() - started)
    return 0


# ---------------------------------------------------------------------------
# dnls


def _solve_ground(params, h, tol, inner_tol):
    cfg = NewtonConfig(h=h, step_tol=tol, max_iter=200,
                       inner=GmresConfig(rel_tol=inner_tol))
    rep = jfnk_cs_newton(problems.dnls_steady_residual(params),
                         problems.dnls_initial_guess(params), cfg)
    return np.asarray(rep.iterate_history[-1]), rep


def cmd_dnls(args, file_cfg):
    mode = _resolve(args, file_cfg, "mode", None, str)
    if mode not in ("ground", "evolve"):
        raise UsageError(f"unknown dnls mode {mode!r}")
    n_sites = _resolve(args, file_cfg, "N", 200, int)
    if n_sites < 1:
        raise UsageError(f"N must be >= 1, got {n_sites}")
    omega = _resolve(args, file_cfg, "omega", 0.1, float)
    h = _resolve(args, file_cfg, "h", 0.05, float)
    dt = _resolve(args, file_cfg, "dt", 0.1, float)
    t_end = _resolve(args, file_cfg, "t_end", 100.0, float)
    tol = _resolve(args, file_cfg, "tol", 1e-12, float)
    inner_tol = _resolve(args, file_cfg, "inner_tol",
                         1e-12 if mode == "ground" else 1e-6, float)
    out = _resolve(args, file_cfg, "out", f"dnls_{mode}", str)
    if dt <= 0:
        raise UsageError(f"dt must be positive, got {dt}")

    center = 100 if n_sites == 200 else (n_sites + 1) // 2
    params = problems.DnlsParams(n_sites=n_sites, omega=omega, center=center)
    started = time.time()
    ground, rep = _solve_ground(params, h, tol, 1e-12 if mode == "evolve" else inner_tol)
    p0 = problems.dnls_norm(ground)
    h0 = problems.dnls_hamiltonian(ground)
    if not rep.converged or p0 < 1e-3:
        reason = "did not converge" if not rep.converged else "fell into the trivial root"
        print(f"dnls: ground-state solve {reason}", file=sys.stderr)
        return 1

    sites = np.arange(1, n_sites + 1)
    outputs = []
    if mode == "ground":
        state_path = f"{out}_state.csv"
        inv_path = f"{out}_invariants.csv"
        write_csv(state_path, ["n", "x", "y"],
                  [[int(n), ground[i], ground[n_sites + i]]
                   for i, n in enumerate(sites)])
        write_csv(inv_path, ["P", "H", "newton_iterations"],
                  [[p0, h0, rep.iterations]])
        outputs = [state_path, inv_path]
    else:
        prob = problems.dnls_evolution(params, ground, dt=dt, t_end=t_end)
        cfg = NewtonConfig(h=h, step_tol=tol, inner=GmresConfig(rel_tol=inner_tol))
        try:
            traj = integrate(prob, cfg)
        except CsNewtonError as exc:
            print(f"dnls: {exc}", file=sys.stderr)
            return 1
        cons_path = f"{out}_conservation.csv"
        final_path = f"{out}_final_state.csv"
        rows = []
        for t, state in zip(traj.times, traj.states):
            p = problems.dnls_norm(state)
            ham = problems.dnls_hamiltonian(state)
            rows.append([t, p, ham, abs(p - p0), abs(ham - h0)])
        write_csv(cons_path, ["t", "P", "H", "abs_dP", "abs_dH"], rows)
        final = traj.states[-1]
        write_csv(final_path, ["n", "x", "y"],
                  [[int(n), final[i], final[n_sites + i]]
                   for i, n in enumerate(sites)])
        outputs = [cons_path, final_path]

    config = {"mode": mode, "N": n_sites, "omega": omega, "h": h, "dt": dt,
              "t_end": t_end, "tol": tol, "inner_tol": inner_tol, "out": out,
              "ground_newton_iterations": rep.iterations,
              "P": p0, "H": h0}
    write_manifest(f"{out}.manifest.json", "dnls", config, outputs,
                   time.time() - started)
    return 0


# ---------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="csnewton",
        description="Complex-step Newton experiment runner (CSV output).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    scan = sub.add_parser("rate-scan", help="sweep h and record convergence rates")
    scan.add_argument("--variant", choices=("scalar", "jacobian", "jfnk"))
    scan.add_argument("--problem")
    scan.add_argument("--h-grid", dest="h_grid")
    scan.add_argument("--cap-n", dest="cap_n", type=int)
    scan.add_argument("--tol", type=float)
    scan.add_argument("--inner-tol", dest="inner_tol", type=float)
    scan.add_argument("--x0")
    scan.add_argument("--workers", type=int)
    scan.add_argument("--out")
    scan.add_argument("--config")
    scan.set_defaults(func=cmd_rate_scan)

    ode = sub.add_parser("ode", help="integrate a benchmark ODE")
    ode.add_argument("--problem", choices=("stiff", "olsen"))
    ode.add_argument("--dt", type=float)
    ode.add_argument("--t-end", dest="t_end", type=float)
    ode.add_argument("--h", type=float)
    ode.add_argument("--tol", type=float)
    ode.add_argument("--inner-tol", dest="inner_tol", type=float)
    ode.add_argument("--out")
    ode.add_argument("--config")
    ode.set_defaults(func=cmd_ode)

    dnls = sub.add_parser("dnls", help="lattice standing wave and evolution")
    dnls.add_argument("--mode", choices=("ground", "evolve"))
    dnls.add_argument("--N", type=int)
    dnls.add_argument("--omega", type=float)
    dnls.add_argument("--h", type=float)
    dnls.add_argument("--dt", type=float)
    dnls.add_argument("--t-end", dest="t_end", type=float)
    dnls.add_argument("--tol", type=float)
    dnls.add_argument("--inner-tol", dest="inner_tol", type=float)
    dnls.add_argument("--out")
    dnls.add_argument("--config")
    dnls.set_defaults(func=cmd_dnls)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        file_cfg = _load_config_file(args.config) if args.config else {}
        return args.func(args, file_cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
