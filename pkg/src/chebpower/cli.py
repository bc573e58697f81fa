"""Reproduction driver: run replica sweeps, emit perturbation tables, dump
filter expansions, manage element caches, and run the built-in check suites.

All CSV output uses '.' decimals and 17-significant-digit floats, so reruns
with the same seed are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import checks
from .config import ExperimentConfig, ExperimentStack, build_stack
from .engine import fidelity_with_subspace, replica_rng, run_power_method
from .fejer import alpha_for_operator, build_expansion, dump_coefficients
from .chebyshev import transformed_operator
from .diagnostics import perturbation_report
from .oracle import exact_filter_matrix

PREFILL_LIMIT = 256  # full-cache prefill keeps threaded replicas write-free


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_trace_csv(path: Path, trace) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "rayleigh_energy", "fidelity", "norm", "step_size"])
        for t in range(trace.iterations):
            writer.writerow(
                [
                    t + 1,
                    _fmt(trace.rayleigh[t]),
                    _fmt(trace.fidelity[t]),
                    _fmt(trace.norm[t]),
                    _fmt(trace.step_size[t]),
                ]
            )


def _run_point(stack: ExperimentStack, out_dir: Path, threads: int) -> dict:
    out_dir.mkdir(parents=True, exist_ok=True)
    if stack.H.dim <= PREFILL_LIMIT:
        stack.cache.dense()
    stack.cache.save(out_dir / "cache.csv")

    def one(replica: int):
        rng = replica_rng(stack.seed, replica)
        return run_power_method(
            stack.H,
            stack.cache,
            stack.m_r,
            stack.m_c,
            stack.schedule,
            stack.iterations,
            rng,
            stack.initial_state,
            ref=stack.ref,
            renorm_period=stack.renorm_period,
        )

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            traces = list(pool.map(one, range(stack.replicas)))
    else:
        traces = [one(r) for r in range(stack.replicas)]

    for r, trace in enumerate(traces):
        _write_trace_csv(out_dir / f"trace_{r}.csv", trace)

    finals = np.array([t.final_fidelity() for t in traces])
    rayleighs = np.array([t.rayleigh[-1] for t in traces])
    summary = {
        "replicas": stack.replicas,
        "iterations": stack.iterations,
        "final_fidelity_mean": float(np.mean(finals)),
        "final_fidelity_std": float(np.std(finals)),
        "final_rayleigh_mean": float(np.mean(rayleighs)),
        "ground_energy": stack.ref.ground_energy if stack.ref else None,
        "filter_normalization": stack.C,
    }
    with open(out_dir / "summary.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        keys = sorted(summary)
        writer.writerow(keys)
        writer.writerow(
            [_fmt(summary[k]) if isinstance(summary[k], float) else summary[k] for k in keys]
        )
    with open(out_dir / "report.json", "w") as fh:
        json.dump(summary, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return summary


def cmd_run(cfg: ExperimentConfig, out: Path, threads: int) -> int:
    rows = []
    for index, (label, value) in enumerate(cfg.sweep_points()):
        stack = build_stack(cfg, value, index)
        summary = _run_point(stack, out / label, threads)
        rows.append((label, summary))
        print(
            f"{label}: fidelity {summary['final_fidelity_mean']:.4f} "
            f"+- {summary['final_fidelity_std']:.4f}, "
            f"rayleigh {summary['final_rayleigh_mean']:.6f}"
        )
    with open(out / "sweep_summary.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["point", "final_fidelity_mean", "final_fidelity_std", "final_rayleigh_mean"])
        for label, s in rows:
            writer.writerow(
                [label, _fmt(s["final_fidelity_mean"]), _fmt(s["final_fidelity_std"]),
                 _fmt(s["final_rayleigh_mean"])]
            )
    return 0


def cmd_table(cfg: ExperimentConfig, out: Path) -> int:
    """Perturbation table: one row per sweep point with the noise norm, the
    filtered half-gap, the two smallest perturbed eigenvalues, the isolation
    interval, and the worst ground-state overlap."""
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for index, (label, value) in enumerate(cfg.sweep_points()):
        stack = build_stack(cfg, value, index)
        if stack.H.n > 10:
            raise SystemExit(f"{label}: dense diagnostics capped at n=10")
        p = exact_filter_matrix(stack.H, stack.spec)
        p_tilde = stack.cache.dense()
        report = perturbation_report(p, 0.5 * (p_tilde + p_tilde.conj().T))
        parameter = value if value is not None else float("nan")
        rows.append(report.to_table_row(parameter))
        print(
            f"{label}: E_norm {report.E_norm:.4f}  half_gap {report.half_gap:.4f}  "
            f"isolates {report.interval_isolates}  overlap {min(report.overlaps):.4f}"
        )
    with open(out / "table.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["parameter", "lhs", "rhs", "lam1_tilde", "lam2_tilde",
             "lam1_minus_lhs", "lam1_plus_lhs", "overlap"]
        )
        for row in rows:
            writer.writerow([_fmt(v) if isinstance(v, float) else v for v in row])
    print(f"wrote {out / 'table.csv'}")
    return 0


def cmd_check(suite: str, seed: int) -> int:
    available = sorted(checks.SUITES)
    if suite not in checks.SUITES:
        print(f"unknown suite {suite!r}; available: {', '.join(available)}", file=sys.stderr)
        return 2
    verdict = checks.SUITES[suite](seed)
    print(json.dumps(verdict, sort_keys=True))
    print(f"{suite}: {'PASS' if verdict['passed'] else 'FAIL'}")
    return 0 if verdict["passed"] else 1


def cmd_expand(cfg: ExperimentConfig, out: Path) -> int:
    stack = build_stack(cfg)
    hbar = transformed_operator(stack.H, stack.spec)
    alpha = alpha_for_operator(hbar.coefficient_norm_bound())
    K = int(cfg.oracle.get("kernel_order", 30))
    expansion = build_expansion(stack.spec.degree, alpha, K)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "expansion.csv"
    dump_coefficients(expansion, path)
    print(f"alpha={alpha:.17g} K={K} degree={stack.spec.degree}")
    print(f"wrote {path}")
    return 0


def cmd_cache(action: str, cfg: ExperimentConfig | None, path: Path) -> int:
    if action == "fill":
        assert cfg is not None
        stack = build_stack(cfg)
        if stack.H.dim > PREFILL_LIMIT:
            raise SystemExit(f"full fill capped at dimension {PREFILL_LIMIT}")
        stack.cache.dense()
        stack.cache.save(path)
        print(f"filled {stack.H.dim}x{stack.H.dim} cache -> {path}")
        return 0
    # inspect
    rows = list(csv.DictReader(open(path, newline="")))
    regimes = sorted({r["regime"] for r in rows})
    values = np.array([complex(float(r["re"]), float(r["im"])) for r in rows])
    print(f"{len(rows)} entries; regimes: {', '.join(regimes)}")
    print(f"|value| range [{np.min(np.abs(values)):.6g}, {np.max(np.abs(values)):.6g}]")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chebpower",
        description="Randomized power iteration on Chebyshev-filtered spin Hamiltonians",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, config_required=True):
        p.add_argument("--config", type=Path, required=config_required, help="JSON or TOML config")
        p.add_argument("--seed", type=int, default=None, help="override config seed")
        p.add_argument("--out", type=Path, default=None, help="override output directory")

    p_run = sub.add_parser("run", help="replica sweep with trace/summary output")
    add_common(p_run)
    p_run.add_argument("--threads", type=int, default=1)

    p_table = sub.add_parser("table", help="perturbation report table over a sweep")
    add_common(p_table)

    p_check = sub.add_parser("check", help="run a built-in property suite")
    p_check.add_argument("suite", help="suite name or 'list'")
    p_check.add_argument("--seed", type=int, default=0)

    p_expand = sub.add_parser("expand", help="dump Fourier-expansion coefficients")
    add_common(p_expand)

    p_cache = sub.add_parser("cache", help="fill or inspect an element cache file")
    p_cache.add_argument("action", choices=["fill", "inspect"])
    p_cache.add_argument("path", type=Path)
    p_cache.add_argument("--config", type=Path, default=None)
    p_cache.add_argument("--seed", type=int, default=None)
    return parser


def _load_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig.load(args.config)
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed
    if getattr(args, "out", None) is not None:
        cfg.output_dir = str(args.out)
    return cfg


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "check":
        if args.suite == "list":
            print("\n".join(sorted(checks.SUITES)))
            return 0
        return cmd_check(args.suite, args.seed)
    if args.command == "cache":
        cfg = None
        if args.action == "fill":
            if args.config is None:
                raise SystemExit("cache fill needs --config")
            cfg = ExperimentConfig.load(args.config)
            if args.seed is not None:
                cfg.seed = args.seed
        return cmd_cache(args.action, cfg, args.path)
    cfg = _load_config(args)
    out = Path(cfg.output_dir)
    if args.command == "run":
        out.mkdir(parents=True, exist_ok=True)
        return cmd_run(cfg, out, args.threads)
    if args.command == "table":
        return cmd_table(cfg, out)
    if args.command == "expand":
        return cmd_expand(cfg, out)
    raise SystemExit(f"unhandled command {args.command}")


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
