"""Command-line front end.

Every subcommand validates its configuration before any sampling starts,
writes a deterministic JSON report (plus CSV tables where the result is
tabular), and prints a one-line summary.  Exit codes: 0 success, 1
configuration error, 2 runtime error (ingestion failure,
non-convergence).
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import io as sio
from .bounds import (hyperplane_count, precision_lower_bound,
                     precision_upper_bound, precision_upper_bound_asymptotic,
                     sandwich_check)
from .errors import ConfigError, ConvergenceError, IngestError
from .frames import SimplexFrame, equidistant_points
from .generator import (GeneratorStar, ModeSet, epsilon_max, epsilon_min,
                        generate_batch)
from .measure import boundary_measure
from .metrics import (coverage, density, equilibrium, precision_support,
                      recall_support)
from .optimize import dimension_sweep, optimize_directions
from .probes import (convexity_probe, label_latents, nearest_mode_labeler,
                     train_logreg)

OUT_DIR_ENV = "SIMCLUSTER_OUT_DIR"


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as config errors (exit 1)."""

    def error(self, message):
        raise ConfigError(message)


@dataclass
class RunConfig:
    """Validated run configuration; construction fails before computation."""

    subcommand: str
    seed: int = 42
    samples: int = 1_000_000
    dim: int | None = None
    modes_path: str | None = None
    modes_m: int | None = None
    modes_dim: int | None = None
    mode_side: float = 1.0
    epsilon: float | None = None
    epsilon_policy: str = "explicit"
    L: float | None = None
    L_mult: float | None = None
    k: int = 5
    method: str = "margin"
    out_format: str = "json"
    out: str | None = None
    out_dir: Path = field(default_factory=Path)
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must be a 64-bit nonnegative integer")
        if self.samples < 100:
            raise ConfigError("samples must be >= 100")
        if self.dim is not None and self.dim < 1:
            raise ConfigError("dim must be >= 1")
        if self.epsilon_policy not in ("explicit", "auto-min", "auto-max"):
            raise ConfigError(f"unknown epsilon policy {self.epsilon_policy!r}")
        if self.epsilon_policy == "explicit" and self.epsilon is not None \
                and not self.epsilon > 0:
            raise ConfigError("epsilon must be positive")
        if self.k < 1:
            raise ConfigError("k must be >= 1")
        if self.method not in ("margin", "exact"):
            raise ConfigError(f"unknown method {self.method!r}")
        if self.out_format not in ("json", "csv"):
            raise ConfigError(f"unknown output format {self.out_format!r}")

    def resolve_modes(self) -> ModeSet:
        if self.modes_path is not None:
            return sio.read_modes(self.modes_path)
        if self.modes_m is None:
            raise ConfigError("provide --modes PATH or --m with --data-dim")
        m, D = self.modes_m, self.modes_dim
        if D is None:
            D = max(m - 1, 1)
        if m < 2:
            raise ConfigError("m must be >= 2")
        if m > D + 1:
            raise ConfigError("inline equidistant modes need m <= data-dim+1")
        return ModeSet(modes=equidistant_points(m, D, self.mode_side)
                       .directions)

    def resolve_L(self, modes: ModeSet) -> float:
        if self.L is not None:
            if not self.L > modes.diameter:
                raise ConfigError("L must exceed the mode diameter")
            return self.L
        mult = self.L_mult if self.L_mult is not None else 4.0
        L = mult * modes.diameter
        if not L > modes.diameter:
            raise ConfigError("--L-mult must exceed 1")
        return L

    def resolve_epsilon(self, modes: ModeSet, L: float) -> float:
        if self.epsilon_policy == "auto-min":
            return epsilon_min(modes, L)
        if self.epsilon_policy == "auto-max":
            return epsilon_max(modes, L)
        if self.epsilon is None:
            raise ConfigError("epsilon policy 'explicit' needs --epsilon")
        return self.epsilon

    def report_path(self, default_name: str) -> Path:
        if self.out is not None:
            return Path(self.out)
        return self.out_dir / default_name


def _write(config: RunConfig, name: str, report: dict, summary: str) -> Path:
    path = config.report_path(name)
    path.parent.mkdir(parents=True, exist_ok=True)
    sio.write_report(report, path)
    sio.write_run_meta(path.with_suffix(path.suffix + ".meta.json"))
    print(summary)
    return path


def _frame_from_config(config: RunConfig, m: int) -> SimplexFrame:
    if config.extras.get("frame"):
        return SimplexFrame.from_json(config.extras["frame"])
    if config.dim is None:
        raise ConfigError("provide --dim or --frame")
    return equidistant_points(m, config.dim, 1.0)


def cmd_simplex(config: RunConfig) -> int:
    m = config.extras["m"]
    frame = equidistant_points(m, config.dim, config.extras["side"])
    path = config.report_path("frame.json")
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_json(path)
    print(f"simplex: m={m} dim={config.dim} side={config.extras['side']} "
          f"-> {path}")
    return 0


def cmd_boundary(config: RunConfig) -> int:
    m = config.extras["m"]
    frame = _frame_from_config(config, m)
    est = boundary_measure(frame, config.epsilon, config.samples,
                           config.seed, method=config.method)
    report = {"schema": "1", "command": "boundary",
              "params": {"m": frame.count, "dim": frame.dim,
                         "epsilon": config.epsilon, "method": config.method,
                         "samples": config.samples, "seed": config.seed},
              "value": est.value, "ci": [est.lower, est.upper],
              "half_width": est.half_width, "seed": est.seed}
    _write(config, "boundary.json", report,
           f"boundary measure: {est.value:.6f} +/- {est.half_width:.2e} "
           f"(eps={config.epsilon}, m={frame.count}, d={frame.dim})")
    return 0


def cmd_generate(config: RunConfig) -> int:
    modes = config.resolve_modes()
    L = config.resolve_L(modes)
    eps = config.resolve_epsilon(modes, L)
    if config.dim is None:
        raise ConfigError("--dim is required")
    if modes.count > config.dim + 1:
        raise ConfigError("generate needs m <= dim+1 (simplex partition); "
                          "use 'optimize' to build a generalized frame first")
    frame = _frame_from_config(config, modes.count)
    if frame.count != modes.count:
        raise ConfigError("frame cell count does not match mode count")
    gstar = GeneratorStar(frame=frame, modes=modes, epsilon=eps,
                          lipschitz_budget=L)
    n = config.extras["n"]
    batch = generate_batch(gstar, n, config.seed)
    out = config.report_path("samples.csv")
    out.parent.mkdir(parents=True, exist_ok=True)
    sio.write_samples_csv(batch, out, sidecar={
        "schema": "1", "seed": config.seed, "n": n, "epsilon": eps, "L": L})
    print(f"generate: {n} samples from G* (m={modes.count}, "
          f"d={config.dim}, eps={eps:.4g}) -> {out}")
    return 0


def cmd_metrics(config: RunConfig) -> int:
    real = sio.ingest_samples(config.extras["real"], provenance="real")
    fake = sio.ingest_samples(config.extras["fake"], provenance="fake")
    if real.ambient_dim != fake.ambient_dim:
        raise ConfigError(f"real dimension {real.ambient_dim} != fake "
                          f"dimension {fake.ambient_dim}")
    if config.k >= real.size:
        raise ConfigError(f"k={config.k} must be smaller than the number "
                          f"of real points ({real.size})")
    results = []

    def add(metric, value, params):
        results.append({"metric": metric, "value": value, "ci": None,
                        "params": params})

    add("density", density(real, fake, config.k), {"k": config.k})
    add("coverage", coverage(real, fake, config.k), {"k": config.k})
    eq = equilibrium(real, fake)
    add("equilibrium_kl", eq.kl, {"empty_cells": eq.empty_cells,
                                  "smoothing": 1.0 / fake.size})
    if config.modes_path is not None or config.modes_m is not None:
        modes = config.resolve_modes()
        tol = config.extras.get("tol", 0.0)
        add("precision_support", precision_support(fake, modes, tol),
            {"tol": tol})
        add("recall_support", recall_support(fake, modes, tol),
            {"tol": tol})
    report = {"schema": "1", "command": "metrics",
              "params": {"k": config.k, "n_real": real.size,
                         "n_fake": fake.size},
              "results": results}
    summary = " ".join(f"{r['metric']}={r['value']:.4f}" for r in results)
    _write(config, "metrics.json", report, "metrics: " + summary)
    return 0


def cmd_bounds(config: RunConfig) -> int:
    m = config.extras["m"]
    d = config.dim
    eps_lo = config.extras["eps_min"]
    eps_hi = config.extras.get("eps_max") or eps_lo
    reports = [precision_upper_bound(eps_lo, m, L=config.L, d=d),
               precision_upper_bound_asymptotic(eps_lo, m)]
    if d is not None:
        reports.append(precision_lower_bound(eps_hi, m, d))
    payload = {"schema": "1", "command": "bounds",
               "params": {"m": m, "d": d, "eps_min": eps_lo,
                          "eps_max": eps_hi, "L": config.L},
               "bounds": [r.to_dict() for r in reports]}
    if d is not None and d >= 2:
        payload["hyperplane_count"] = hyperplane_count(m, d)
    path = _write(config, "bounds.json", payload,
                  "bounds: " + ", ".join(
                      f"{r.bound_name}={r.leading_value:.5f}"
                      f"{'' if r.valid else ' (flagged)'}" for r in reports))
    if config.out_format == "csv":
        table = path.with_suffix(".csv")
        sio.write_table_csv(reports[0].csv_header(),
                            [r.csv_row() for r in reports], table)
    return 0


def cmd_sandwich(config: RunConfig) -> int:
    modes = config.resolve_modes()
    L = config.resolve_L(modes)
    if config.dim is None:
        raise ConfigError("--dim is required")
    if modes.count > config.dim + 1:
        raise ConfigError("sandwich needs m <= dim+1")
    frame = equidistant_points(modes.count, config.dim, 1.0)
    gstar = GeneratorStar.with_max_radius(frame, modes, L)
    rep = sandwich_check(gstar, config.samples, config.seed)
    report = {"schema": "1", "command": "sandwich",
              "params": {"m": modes.count, "dim": config.dim, "L": L,
                         "samples": config.samples, "seed": config.seed},
              "result": rep.to_dict()}
    _write(config, "sandwich.json", report,
           f"sandwich: lower={rep.lower:.5f} <= alpha={rep.alpha:.5f} "
           f"<= upper={rep.upper:.5f} holds={rep.holds}")
    return 0 if rep.holds else 2


def cmd_probes(config: RunConfig) -> int:
    modes = config.resolve_modes()
    L = config.resolve_L(modes)
    eps = config.resolve_epsilon(modes, L)
    if config.dim is None:
        raise ConfigError("--dim is required")
    if modes.count > config.dim + 1:
        raise ConfigError("probes need m <= dim+1")
    frame = equidistant_points(modes.count, config.dim, 1.0)
    gstar = GeneratorStar(frame=frame, modes=modes, epsilon=eps,
                          lipschitz_budget=L)
    labeler = nearest_mode_labeler(modes)
    n = config.extras["n"]
    data = label_latents(gstar, labeler, n, config.seed, config.dim,
                         num_classes=modes.count)
    _, acc = train_logreg(data, seed=config.seed)
    convex = convexity_probe(gstar, labeler, n_pairs=config.extras["pairs"],
                             n_interp=config.extras["interp"],
                             seed=config.seed, dim=config.dim)
    batch = generate_batch(gstar, n, config.seed)
    precision = precision_support(batch, modes, tol=0.0)
    report = {"schema": "1", "command": "probes",
              "params": {"m": modes.count, "dim": config.dim, "n": n,
                         "epsilon": eps, "L": L, "seed": config.seed},
              "results": {"precision": precision, "logreg_accuracy": acc,
                          "convex_accuracy": convex}}
    _write(config, "probes.json", report,
           f"probes: precision={precision:.4f} logreg={acc:.4f} "
           f"convex={convex:.4f}")
    return 0


def cmd_optimize(config: RunConfig) -> int:
    m = config.extras["m"]
    frame = optimize_directions(m, config.dim, config.epsilon,
                                n_samples=config.samples,
                                iters=config.extras["iters"],
                                step=config.extras["step"],
                                seed=config.seed,
                                restarts=config.extras["restarts"])
    path = config.report_path("frame.json")
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_json(path)
    print(f"optimize: m={m} dim={config.dim} eps={config.epsilon} "
          f"-> {path}")
    return 0


def cmd_sweep(config: RunConfig) -> int:
    m = config.extras["m"]
    d_list = config.extras["dims"]
    mult = config.L_mult if config.L_mult is not None else 4.0
    rows = dimension_sweep(m, d_list, L_mult=mult,
                           n_samples=config.samples, seed=config.seed)
    report = {"schema": "1", "command": "sweep",
              "params": {"m": m, "dims": d_list, "L_mult": mult,
                         "samples": config.samples, "seed": config.seed},
              "rows": [r.to_dict() for r in rows]}
    path = _write(config, "sweep.json", report,
                  "sweep: " + " ".join(f"d={r.d}:a={r.alpha_hat:.3f}"
                                       for r in rows))
    sio.write_table_csv(rows[0].csv_header(), [r.csv_row() for r in rows],
                        path.with_suffix(".csv"))
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="simcluster",
                     description="Simplicial-cluster latent partitions and "
                                 "generator metrics")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, samples_default=1_000_000):
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--samples", type=int, default=samples_default)
        p.add_argument("--out", type=str, default=None,
                       help="report/output path")
        p.add_argument("--out-dir", type=str,
                       default=os.environ.get(OUT_DIR_ENV, "."))
        p.add_argument("--format", dest="out_format", default="json",
                       choices=["json", "csv"])

    def modes_flags(p):
        p.add_argument("--modes", type=str, default=None,
                       help="mode centers file (CSV or JSON)")
        p.add_argument("--m", type=int, default=None,
                       help="inline equidistant modes: count")
        p.add_argument("--data-dim", type=int, default=None,
                       help="inline equidistant modes: ambient dimension "
                            "(default m-1)")
        p.add_argument("--mode-side", type=float, default=1.0)
        p.add_argument("--L", type=float, default=None)
        p.add_argument("--L-mult", type=float, default=None,
                       help="L as a multiple of the mode diameter "
                            "(default 4)")

    p = sub.add_parser("simplex", help="build a regular-simplex frame")
    common(p)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--side", type=float, default=1.0)

    p = sub.add_parser("boundary", help="epsilon-boundary Gaussian measure")
    common(p)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--frame", type=str, default=None,
                   help="frame JSON (overrides --m/--dim)")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--method", default="margin", choices=["margin", "exact"])

    p = sub.add_parser("generate", help="sample the optimal generator")
    common(p, samples_default=10_000)
    modes_flags(p)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--n", type=int, default=10_000)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--epsilon-policy", default=None,
                   choices=["explicit", "auto-min", "auto-max"])
    p.add_argument("--frame", type=str, default=None)

    p = sub.add_parser("metrics", help="sample-based evaluation metrics")
    common(p, samples_default=10_000)
    modes_flags(p)
    p.add_argument("--real", type=str, required=True)
    p.add_argument("--fake", type=str, required=True)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--tol", type=float, default=0.0)

    p = sub.add_parser("bounds", help="closed-form precision bounds")
    common(p)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--eps-min", type=float, required=True)
    p.add_argument("--eps-max", type=float, default=None)
    p.add_argument("--L", type=float, default=None)

    p = sub.add_parser("sandwich", help="two-sided precision bracket check")
    common(p)
    modes_flags(p)
    p.add_argument("--dim", type=int, required=True)

    p = sub.add_parser("probes", help="latent separability/convexity probes")
    common(p, samples_default=10_000)
    modes_flags(p)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--n", type=int, default=10_000)
    p.add_argument("--pairs", type=int, default=2_000)
    p.add_argument("--interp", type=int, default=8)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--epsilon-policy", default=None,
                   choices=["explicit", "auto-min", "auto-max"])

    p = sub.add_parser("optimize", help="search directions for m > d+1")
    common(p, samples_default=20_000)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--iters", type=int, default=200)
    p.add_argument("--step", type=float, default=0.4)
    p.add_argument("--restarts", type=int, default=8)

    p = sub.add_parser("sweep", help="precision across latent dimensions")
    common(p, samples_default=200_000)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--dims", type=str, required=True,
                   help="comma-separated latent dimensions")
    p.add_argument("--L-mult", type=float, default=4.0,
                   help="L = L_MULT * diameter * sqrt(m), fixed across "
                        "dimensions")

    return parser


def _to_config(ns: argparse.Namespace) -> RunConfig:
    extras = {}
    cmd = ns.subcommand
    if cmd == "simplex":
        extras = {"m": ns.m, "side": ns.side}
        if ns.m < 2:
            raise ConfigError("--m must be >= 2")
        if not ns.side > 0:
            raise ConfigError("--side must be positive")
    elif cmd == "boundary":
        if ns.frame is None and (ns.m is None or ns.dim is None):
            raise ConfigError("boundary needs --frame or both --m and --dim")
        extras = {"m": ns.m or 0, "frame": ns.frame}
    elif cmd == "generate":
        if ns.n < 1:
            raise ConfigError("--n must be >= 1")
        extras = {"n": ns.n, "frame": ns.frame}
    elif cmd == "metrics":
        extras = {"real": ns.real, "fake": ns.fake, "tol": ns.tol}
        if ns.tol < 0:
            raise ConfigError("--tol must be nonnegative")
    elif cmd == "bounds":
        if not ns.eps_min > 0:
            raise ConfigError("--eps-min must be positive")
        if ns.eps_max is not None and not ns.eps_max > 0:
            raise ConfigError("--eps-max must be positive")
        extras = {"m": ns.m, "eps_min": ns.eps_min, "eps_max": ns.eps_max}
    elif cmd == "probes":
        extras = {"n": ns.n, "pairs": ns.pairs, "interp": ns.interp}
        if min(ns.n, ns.pairs, ns.interp) < 1:
            raise ConfigError("--n, --pairs and --interp must be >= 1")
    elif cmd == "optimize":
        extras = {"m": ns.m, "iters": ns.iters, "step": ns.step,
                  "restarts": ns.restarts}
        if ns.m < 2:
            raise ConfigError("--m must be >= 2")
        if not ns.epsilon > 0:
            raise ConfigError("--epsilon must be positive")
    elif cmd == "sweep":
        try:
            dims = [int(tok) for tok in ns.dims.split(",") if tok.strip()]
        except ValueError:
            raise ConfigError(f"--dims must be comma-separated integers, "
                              f"got {ns.dims!r}") from None
        if not dims:
            raise ConfigError("--dims is empty")
        extras = {"m": ns.m, "dims": dims}

    policy = getattr(ns, "epsilon_policy", None)
    if policy is None:
        policy = "explicit" if getattr(ns, "epsilon", None) is not None \
            else ("auto-max" if cmd in ("generate", "probes") else "explicit")
    return RunConfig(
        subcommand=cmd,
        seed=ns.seed,
        samples=getattr(ns, "samples", 1_000_000),
        dim=getattr(ns, "dim", None),
        modes_path=getattr(ns, "modes", None),
        modes_m=getattr(ns, "m", None),
        modes_dim=getattr(ns, "data_dim", None),
        mode_side=getattr(ns, "mode_side", 1.0),
        epsilon=getattr(ns, "epsilon", None),
        epsilon_policy=policy,
        L=getattr(ns, "L", None),
        L_mult=getattr(ns, "L_mult", None),
        k=getattr(ns, "k", 5),
        method=getattr(ns, "method", "margin"),
        out_format=ns.out_format,
        out=ns.out,
        out_dir=Path(ns.out_dir),
        extras=extras,
    )


_HANDLERS = {
    "simplex": cmd_simplex,
    "boundary": cmd_boundary,
    "generate": cmd_generate,
    "metrics": cmd_metrics,
    "bounds": cmd_bounds,
    "sandwich": cmd_sandwich,
    "probes": cmd_probes,
    "optimize": cmd_optimize,
    "sweep": cmd_sweep,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        config = _to_config(ns)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    try:
        return _HANDLERS[config.subcommand](config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (IngestError, ConvergenceError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
