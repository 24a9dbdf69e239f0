"""Command-line surface: eval, sweep, simulate, validate.

Exit codes: 0 success, 1 validation-run statistical failure, 2 argument or
configuration validation, 3 runtime/simulation failure, 4 insufficient data.
Outputs carry the merged effective configuration as '#' comment headers and
contain nothing volatile, so identical invocations produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import analytic, montecarlo, traceio
from .analytic import Normalization, RegimeError, Statistic
from .model import Regime, SystemConfig, ValidationError, derive
from .specfun import ConvergenceError, DomainError

EXIT_OK = 0
EXIT_STAT_FAIL = 1
EXIT_VALIDATION = 2
EXIT_RUNTIME = 3
EXIT_INSUFFICIENT = 4

SEED_ENV_VAR = "DIVSTATS_SEED"

_CONFIG_FLAG_FIELDS = ("m_S", "m_I", "n", "omega_S", "omega_I", "sigma2", "f_m0", "f_mi")


def _fmt(v) -> str:
    if isinstance(v, float) and math.isnan(v):
        return ""
    return repr(float(v))


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--m-s", dest="m_S", type=int, help="desired-signal Nakagami severity")
    p.add_argument("--m-i", dest="m_I", type=int, help="interference Nakagami severity")
    p.add_argument("--n", dest="n", type=int, help="number of cochannel interferers")
    p.add_argument("--omega-s", dest="omega_S", type=float, help="desired fading power")
    p.add_argument("--omega-i", dest="omega_I", type=float, help="per-interferer fading power")
    p.add_argument("--sigma2", type=float, help="AWGN power")
    p.add_argument("--snr-db", type=float,
                   help="average SNR per branch in dB (sets sigma2=1, omega_S=10^(dB/10))")
    p.add_argument("--inr-db", type=float,
                   help="average INR per interferer per branch in dB (sets sigma2=1)")
    p.add_argument("--sir-limited", action="store_true",
                   help="interference-limited system (forces sigma2=0)")
    p.add_argument("--awgn-only", action="store_true",
                   help="no interference (forces omega_I=0)")
    p.add_argument("--fm0", dest="f_m0", type=float, help="desired max Doppler spread (Hz)")
    p.add_argument("--fmi", dest="f_mi", type=float,
                   help="interferer max Doppler spread (Hz, default f_m0)")
    p.add_argument("--config", help="JSON config file (flags override its fields)")


def _add_sim_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--duration", type=float, required=True, help="simulated time (s)")
    p.add_argument("--rate", type=float, help="sample rate (Hz, default 64*f_m0)")
    p.add_argument("--sinusoids", type=int, default=64, help="sinusoids per Gaussian process")
    p.add_argument("--seed", type=int, default=None,
                   help=f"RNG seed (default ${SEED_ENV_VAR} or 0)")
    p.add_argument("--warmup", type=float, default=None,
                   help="discarded leading time (s, default 5/f_m0)")


def build_config(args: argparse.Namespace) -> SystemConfig:
    """Merge defaults < JSON config file < flags into a validated SystemConfig."""
    eff = SystemConfig().to_dict()
    eff["f_mi"] = None
    if args.config:
        with open(args.config) as fh:
            loaded = json.load(fh)
        unknown = set(loaded) - set(eff)
        if unknown:
            raise ValidationError([f"unknown config field {k!r}" for k in sorted(unknown)])
        eff.update(loaded)
    for name in _CONFIG_FLAG_FIELDS:
        val = getattr(args, name, None)
        if val is not None:
            eff[name] = val
    if getattr(args, "snr_db", None) is not None or getattr(args, "inr_db", None) is not None:
        eff["sigma2"] = 1.0
        if args.snr_db is not None:
            eff["omega_S"] = 10.0 ** (args.snr_db / 10.0)
        if args.inr_db is not None:
            eff["omega_I"] = 10.0 ** (args.inr_db / 10.0)
    if getattr(args, "sir_limited", False):
        eff["sigma2"] = 0.0
    if getattr(args, "awgn_only", False):
        eff["omega_I"] = 0.0
    if eff["f_mi"] is None:
        eff["f_mi"] = eff["f_m0"]
    return SystemConfig.from_dict(eff)


def build_sim(args: argparse.Namespace, cfg: SystemConfig) -> montecarlo.SimulationConfig:
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get(SEED_ENV_VAR, "0"))
    rate = args.rate if args.rate is not None else 64.0 * cfg.f_m0
    warmup = args.warmup if args.warmup is not None else 5.0 / cfg.f_m0
    return montecarlo.SimulationConfig(sample_rate=rate, duration=args.duration,
                                       num_sinusoids=args.sinusoids, seed=seed,
                                       warmup=warmup)


def parse_grid(text: str) -> tuple[float, float, int, bool]:
    """Parse 'lo:hi:points[:log]' (4th part 'log' or 'lin', default log)."""
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise ValidationError([f"bad --grid {text!r}, expected lo:hi:points[:log|lin]"])
    lo, hi = float(parts[0]), float(parts[1])
    points = int(parts[2])
    spacing = parts[3].lower() if len(parts) == 4 else "log"
    if spacing not in ("log", "lin"):
        raise ValidationError([f"bad grid spacing {spacing!r}, expected log or lin"])
    if points < 1 or not (hi > lo):
        raise ValidationError([f"bad --grid {text!r}: need hi > lo and points >= 1"])
    if spacing == "log" and lo <= 0.0:
        raise ValidationError([f"bad --grid {text!r}: log spacing needs lo > 0"])
    return lo, hi, points, spacing == "log"


def grid_values(text: str) -> np.ndarray:
    lo, hi, points, is_log = parse_grid(text)
    if is_log:
        return np.logspace(math.log10(lo), math.log10(hi), points)
    return np.linspace(lo, hi, points)


def _config_header(cfg: SystemConfig, extra: dict | None = None) -> list[str]:
    lines = ["# divstats", "# config: " + json.dumps(cfg.to_dict(), sort_keys=True)]
    if extra:
        lines.append("# run: " + json.dumps(extra, sort_keys=True))
    return lines


# -- eval ------------------------------------------------------------------------

def cmd_eval(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    d = derive(cfg)
    scale = analytic.z_scale(cfg)
    z = args.z_over_mu * scale
    op = analytic.outage_probability(z, cfg)
    lcr = analytic.level_crossing_rate(z, cfg)
    fade = analytic.afd(z, cfg)
    record = {
        "z": z,
        "z_over_mu": args.z_over_mu,
        "op": op,
        "lcr": lcr,
        "lcr_norm": lcr / cfg.f_m0,
        "afd": fade,
        "afd_norm": fade * cfg.f_m0,
        "regime": d.regime.value,
        "mu": d.mu,
        "c": d.c,
    }
    print(json.dumps(record))
    return EXIT_OK


# -- sweep -----------------------------------------------------------------------

def _point_stats(z: float, cfg: SystemConfig) -> tuple[float, float, float, str | None]:
    try:
        op = analytic.outage_probability(z, cfg)
        lcr = analytic.level_crossing_rate(z, cfg) / cfg.f_m0
        fade = analytic.afd(z, cfg) * cfg.f_m0
        if math.isinf(fade):
            return op, lcr, math.nan, f"z={z!r}: AFD overflow (crossing rate underflow)"
        return op, lcr, fade, None
    except (DomainError, ConvergenceError, RegimeError, OverflowError) as exc:
        return math.nan, math.nan, math.nan, f"z={z!r}: {exc}"


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    jobs = max(1, args.jobs)
    diagnostics: list[str] = []
    rows: list[tuple[float, float, float, float]] = []

    if args.axis == "z_over_mu":
        grid = grid_values(args.grid) if args.grid else np.logspace(-3.0, 3.0, 121)
        zs = analytic.z_scale(cfg) * grid
        work = list(zs)

        def one(z):
            return _point_stats(float(z), cfg)

        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as ex:
                results = list(ex.map(one, work))
        else:
            results = [one(z) for z in work]
        for axis_val, (op, lcr, fade, diag) in zip(grid, results):
            rows.append((float(axis_val), op, lcr, fade))
            if diag:
                diagnostics.append(diag)
        lcr_col = np.array([r[2] for r in rows])
        th0 = float(grid[int(np.nanargmax(lcr_col))]) if np.any(np.isfinite(lcr_col)) else math.nan
        trailer = f"# th0 = {_fmt(th0)}"
    else:  # axis == "n"
        if args.z_over_mu is None:
            raise ValidationError(["--z-over-mu is required for --axis n"])
        grid = grid_values(args.grid) if args.grid else np.arange(1.0, 9.0)
        n_values = [int(round(v)) for v in grid]
        if any(v < 1 for v in n_values):
            raise ValidationError(["n grid must contain positive integers"])

        def one_n(n_val):
            cfg_n = SystemConfig.from_dict({**cfg.to_dict(), "n": n_val})
            z = args.z_over_mu * analytic.z_scale(cfg_n)
            return _point_stats(z, cfg_n)

        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as ex:
                results = list(ex.map(one_n, n_values))
        else:
            results = [one_n(v) for v in n_values]
        for n_val, (op, lcr, fade, diag) in zip(n_values, results):
            rows.append((float(n_val), op, lcr, fade))
            if diag:
                diagnostics.append(diag)
        lcr_col = np.array([r[2] for r in rows])
        if np.any(np.isfinite(lcr_col)):
            peak_n = n_values[int(np.nanargmax(lcr_col))]
            trailer = f"# lcr_max_at_n = {peak_n}"
        else:
            trailer = "# lcr_max_at_n ="

    header = _config_header(cfg, {"command": "sweep", "axis": args.axis,
                                  "grid": args.grid or "default",
                                  "z_over_mu": args.z_over_mu})
    lines = header + [f"{args.axis},op,lcr_norm,afd_norm"]
    for axis_val, op, lcr, fade in rows:
        lines.append(",".join([_fmt(axis_val), _fmt(op), _fmt(lcr), _fmt(fade)]))
    lines.append(trailer)
    text = "\n".join(lines) + "\n"
    with open(args.out, "w", newline="") as fh:
        fh.write(text)
    if diagnostics:
        with open(args.out + ".diag", "w") as fh:
            fh.write("\n".join(diagnostics) + "\n")
    print(f"wrote {args.out} ({len(rows)} points"
          + (f", {len(diagnostics)} gaps" if diagnostics else "") + ")")
    return EXIT_OK


# -- simulate --------------------------------------------------------------------

def cmd_simulate(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    sim = build_sim(args, cfg)
    trace = montecarlo.simulate(cfg, sim)
    if args.out.endswith(".csv"):
        traceio.write_trace_csv(args.out, trace)
        kind = "csv"
    else:
        traceio.write_trace_binary(args.out, trace)
        kind = "ftrc"
    record = {
        "out": args.out,
        "format": kind,
        "samples": trace.num_samples,
        "channels": len(traceio.trace_channel_names(cfg.n)),
        "time_step": trace.time_step,
        "seed": sim.seed,
    }
    print(json.dumps(record))
    return EXIT_OK


# -- validate --------------------------------------------------------------------

def _validate_rows(cfg: SystemConfig, sim: montecarlo.SimulationConfig,
                   z_grid: np.ndarray) -> tuple[list[str], bool, bool]:
    trace = montecarlo.simulate(cfg, sim)
    stats = montecarlo.measure(trace, montecarlo.g_thresholds_from_z(z_grid))
    scale = analytic.z_scale(cfg)
    lines = [f"{'z_over_mu':>12} {'stat':>4} {'analytic':>14} {'empirical':>14} "
             f"{'stderr':>12} {'tol':>12} {'status':>8}"]
    all_pass = True
    any_included = False
    insufficient = False
    for z, st in zip(z_grid, stats):
        a_op = analytic.outage_probability(float(z), cfg)
        a_lcr = analytic.level_crossing_rate(float(z), cfg)
        a_afd = analytic.afd(float(z), cfg)
        included = 0.01 <= st.op_hat <= 0.99
        if included and st.upcrossings < 10:
            insufficient = True
        rel_lcr = st.stderr_lcr / st.lcr_hat if st.lcr_hat > 0 else math.inf
        rel_op = st.stderr_op / st.op_hat if st.op_hat > 0 else math.inf
        stderr_afd = (st.afd_hat * math.hypot(rel_lcr, rel_op)
                      if math.isfinite(st.afd_hat) else math.inf)
        for name, ana, emp, se in (("op", a_op, st.op_hat, st.stderr_op),
                                   ("lcr", a_lcr, st.lcr_hat, st.stderr_lcr),
                                   ("afd", a_afd, st.afd_hat, stderr_afd)):
            tol = max(3.0 * se, 0.05 * abs(ana))
            ok = abs(emp - ana) <= tol
            if included:
                any_included = True
                if not ok:
                    all_pass = False
                status = "pass" if ok else "FAIL"
            else:
                status = "skip"
            lines.append(f"{z / scale:>12.6g} {name:>4} {ana:>14.6g} {emp:>14.6g} "
                         f"{se:>12.4g} {tol:>12.4g} {status:>8}")
    if not any_included:
        insufficient = True
    return lines, all_pass, insufficient


def cmd_validate(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    sim = build_sim(args, cfg)
    scale = analytic.z_scale(cfg)
    if args.grid:
        z_grid = scale * grid_values(args.grid)
    else:
        cand = scale * np.logspace(math.log10(0.02), math.log10(20.0), 12)
        keep = [z for z in cand
                if 0.02 <= analytic.outage_probability(float(z), cfg) <= 0.97]
        z_grid = np.array(keep if keep else cand)
    # guard against hopeless runs before paying for the simulation
    if sim.duration * cfg.f_m0 < 20.0:
        print(f"insufficient data: duration {sim.duration:g} s spans fewer than "
              f"20 Doppler cycles at f_m0 = {cfg.f_m0:g} Hz")
        return EXIT_INSUFFICIENT
    lines, all_pass, insufficient = _validate_rows(cfg, sim, z_grid)
    header = _config_header(cfg, {
        "command": "validate",
        "duration": sim.duration, "rate": sim.sample_rate,
        "sinusoids": sim.num_sinusoids, "seed": sim.seed, "warmup": sim.warmup,
    })
    report = "\n".join(header + lines) + "\n"
    if insufficient:
        report += "insufficient data: too few crossings at included thresholds\n"
    sys.stdout.write(report)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(report)
    if insufficient:
        return EXIT_INSUFFICIENT
    return EXIT_OK if all_pass else EXIT_STAT_FAIL


# -- entry point -----------------------------------------------------------------

def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="divstats",
        description="Dual selection-combining statistics under Nakagami fading "
                    "with cochannel interference: closed forms and Monte Carlo.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate OP/LCR/AFD at one threshold")
    _add_config_flags(p_eval)
    p_eval.add_argument("--z-over-mu", type=float, required=True,
                        help="threshold in units of the natural scale")
    p_eval.set_defaults(func=cmd_eval)

    p_sweep = sub.add_parser("sweep", help="CSV sweep over thresholds or interferer count")
    _add_config_flags(p_sweep)
    p_sweep.add_argument("--axis", choices=("z_over_mu", "n"), default="z_over_mu")
    p_sweep.add_argument("--grid", help="lo:hi:points[:log|lin]")
    p_sweep.add_argument("--z-over-mu", type=float, help="fixed threshold for --axis n")
    p_sweep.add_argument("--out", required=True, help="output CSV path")
    p_sweep.add_argument("--jobs", type=int, default=1)
    p_sweep.set_defaults(func=cmd_sweep)

    p_sim = sub.add_parser("simulate", help="run the fading simulator, export a trace")
    _add_config_flags(p_sim)
    _add_sim_flags(p_sim)
    p_sim.add_argument("--out", required=True,
                       help="trace path (.csv for small traces, else FTRC binary)")
    p_sim.set_defaults(func=cmd_simulate)

    p_val = sub.add_parser("validate", help="compare analytic vs Monte Carlo statistics")
    _add_config_flags(p_val)
    _add_sim_flags(p_val)
    p_val.add_argument("--grid", help="z/mu grid lo:hi:points[:log|lin] "
                                      "(default: auto inside the measurable band)")
    p_val.add_argument("--out", help="also write the report to this path")
    p_val.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, DomainError, RegimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ConvergenceError, MemoryError, OSError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
