"""Command-line interface.

::

    multifrac simulate --process ext --K 0.7 --hurst sine:mu=0.3,nu=0.7 \\
        --grid 0:1:256 --paths 100 --seed 42 --out paths.csv
    multifrac verify holder --hurst sine:mu=0.3,nu=0.7 --K 0.5
    multifrac lrd --process bfbm --H 0.9 --K 0.7
    multifrac estimate --in paths.csv --t 0.25,0.5,0.75
    multifrac --config report.json          # replay an embedded run

Exit codes: 0 when every report passes, 1 when an audit fails or a
numerical routine gives up, 2 on configuration errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time

import numpy as np

from . import __version__
from . import analysis, io
from .errors import DomainError, MultifracError, WindowError
from .estimate import DEFAULT_SCALES, DEFAULT_WINDOW, local_hurst_estimate
from .hurst import HurstFunction
from .process import Family, ProcessSpec
from .simulate import TimeGrid, simulate

COMMANDS = ("simulate", "check-psd", "verify", "lrd", "estimate")
CHECKS = ("psd", "quasi-helix", "holder", "prop2", "lass", "decomposition", "tk-identity")
OUT_DIR_ENV = "MULTIFRAC_OUT_DIR"

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    pass


@dataclasses.dataclass
class RunConfig:
    """Everything needed to reproduce one CLI run."""

    command: str
    check: str | None = None
    spec: dict | None = None
    grid: dict | None = None
    seed: int = 0
    paths: int = 100
    workers: int = 1
    out: str | None = None
    t: list | None = None
    options: dict = dataclasses.field(default_factory=dict)

    def to_dict(self):
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d):
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        cfg = cls(**d)
        if cfg.command not in COMMANDS:
            raise ConfigError(f"unknown command {cfg.command!r}")
        return cfg


# -- parsing helpers ----------------------------------------------------------


def parse_grid(text):
    """``start:end:n`` -> dict; n intervals, n + 1 points inclusive."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid must be start:end:n, got {text!r}")
    try:
        start, end, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"bad grid {text!r}: {exc}") from None
    if n < 1 or not end > start:
        raise ConfigError(f"grid {text!r} needs end > start and n >= 1")
    return {"start": start, "end": end, "n": n}


def parse_floats(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad number list {text!r}: {exc}") from None


def build_grid(g):
    if g is None:
        return None
    if "times" in g:
        return TimeGrid(np.asarray(g["times"], dtype=float))
    return TimeGrid.uniform(g["start"], g["end"], g["n"])


def spec_from_args(process, H, K, hurst):
    if process is None:
        if hurst is not None:
            process = "ext"
        elif H is not None:
            process = "bfbm"
        else:
            return None
    hf = HurstFunction.from_string(hurst) if hurst else None
    fam = Family(process)
    needs_K = fam in (Family.BFBM, Family.EXT, Family.XK)
    if K is None:
        if fam == Family.XK:
            raise ConfigError("--process xk needs --K")
        K = 1.0
    elif not needs_K and K != 1.0:
        raise ConfigError(f"--process {process} has no K parameter")
    if fam == Family.FBM:
        spec = ProcessSpec.fbm(_need(H, "--H"))
    elif fam == Family.BFBM:
        spec = ProcessSpec.bfbm(_need(H, "--H"), K)
    elif fam == Family.XK:
        spec = ProcessSpec.xk(K)
    else:
        if hf is None:
            hf = HurstFunction.constant(_need(H, "--H or --hurst"))
        spec = ProcessSpec.mbm(hf) if fam == Family.MBM else ProcessSpec.ext(hf, K)
    return spec.to_dict()


def _need(v, flag):
    if v is None:
        raise ConfigError(f"missing {flag}")
    return v


def _spec(cfg, required=True):
    if cfg.spec is None:
        if required:
            raise ConfigError("no process given (use --process/--H/--K/--hurst)")
        return None
    return ProcessSpec.from_dict(cfg.spec)


def _hurst_and_K(cfg):
    spec = _spec(cfg)
    if spec.family == Family.XK:
        raise ConfigError("this check needs a Hurst function; xk has none")
    hf = spec.hurst_fn if spec.hurst_fn is not None else HurstFunction.constant(spec.H)
    return hf, spec.K


def _opt(cfg, name, default):
    v = cfg.options.get(name)
    return default if v is None else v


def default_out(name):
    return os.path.join(os.environ.get(OUT_DIR_ENV, "."), name)


# -- commands -------------------------------------------------------------------


def cmd_simulate(cfg):
    spec = _spec(cfg)
    grid = build_grid(cfg.grid)
    if grid is None:
        raise ConfigError("simulate needs --grid or --times")
    t0 = time.perf_counter()
    e = simulate(spec, grid, cfg.paths, cfg.seed, cfg.workers)
    out = cfg.out or default_out("paths.csv")
    io.write_paths_csv(out, e)
    wall = time.perf_counter() - t0
    print(f"simulate: n_paths={e.n_paths} n_times={len(grid)} jitter={e.jitter:.3g} "
          f"wall={wall:.3f}s -> {out}")
    return None


def cmd_check_psd(cfg):
    spec = _spec(cfg)
    grid = build_grid(cfg.grid)
    if grid is None:
        raise ConfigError("check-psd needs --grid or --times")
    return [analysis.psd_audit(spec, grid, _opt(cfg, "tol", 1e-10))]


def _verify_psd(cfg):
    tol = _opt(cfg, "tol", 1e-10)
    n = cfg.options.get("configs")
    if n:
        return analysis.psd_sweep(int(n), cfg.seed, tol)
    return cmd_check_psd(cfg)


def _verify_quasi_helix(cfg):
    slack = _opt(cfg, "tol", 1e-12)
    grid = build_grid(cfg.grid) or TimeGrid(np.arange(1, 65) / 64)
    n = cfg.options.get("configs")
    if n:
        rng = np.random.default_rng(cfg.seed)
        HK = rng.uniform(0.05, 0.95, size=(int(n), 2))
        return [analysis.quasi_helix_audit(float(H), float(K), grid, slack) for H, K in HK]
    spec = _spec(cfg)
    pair = spec.as_bfbm
    if pair is None:
        raise ConfigError("quasi-helix needs constant regularity (--H, --K)")
    return [analysis.quasi_helix_audit(pair[0], pair[1], grid, slack)]


def _verify_holder(cfg):
    hf, K = _hurst_and_K(cfg)
    return [analysis.holder_bounds_audit(hf, K, int(_opt(cfg, "pairs", 10_000)), cfg.seed)]


def _K(cfg, default):
    if cfg.spec is not None:
        return float(cfg.spec.get("K", 1.0))
    return float(_opt(cfg, "K", default))


def _verify_prop2(cfg):
    o = cfg.options
    K = _K(cfg, 0.5)
    return [analysis.prop2_bound_audit(float(_opt(cfg, "a", 0.1)), float(_opt(cfg, "b", 5.0)),
                                       float(_opt(cfg, "alpha", 0.2)), float(_opt(cfg, "gamma", 0.8)),
                                       K, int(o.get("samples") or 100), cfg.seed)]


def _verify_lass(cfg):
    hf, K = _hurst_and_K(cfg)
    ts = cfg.t or [1.0]
    return [analysis.lass_covariance_limit(hf, K, t, tol=_opt(cfg, "tol", 1e-3)).report for t in ts]


def _verify_decomposition(cfg):
    hf, K = _hurst_and_K(cfg)
    if not 0 < K < 1:
        raise ConfigError("decomposition needs K in (0, 1)")
    return [analysis.decomposition_audit(hf, K, int(_opt(cfg, "samples", 1000)), cfg.seed,
                                         _opt(cfg, "tol", 1e-12))]


def _verify_tk(cfg):
    K = _K(cfg, 1.0)
    K_list = [K] if K != 1.0 else None
    return [analysis.tk_identity_audit(cfg.t, K_list, _opt(cfg, "tol", 1e-8))]


_VERIFY = {
    "psd": _verify_psd,
    "quasi-helix": _verify_quasi_helix,
    "holder": _verify_holder,
    "prop2": _verify_prop2,
    "lass": _verify_lass,
    "decomposition": _verify_decomposition,
    "tk-identity": _verify_tk,
}


def cmd_verify(cfg):
    if cfg.check not in _VERIFY:
        raise ConfigError(f"unknown check {cfg.check!r}; choose from {', '.join(CHECKS)}")
    return _VERIFY[cfg.check](cfg)


def cmd_lrd(cfg):
    spec = _spec(cfg)
    if spec.family == Family.XK:
        raise ConfigError("lrd is defined for the Hurst-indexed families")
    s = float(_opt(cfg, "s", 1.0))
    lo, hi = float(_opt(cfg, "t_lo", 1e6)), float(_opt(cfg, "t_hi", 1e9))
    if np.log10(hi / lo) < 3 - 1e-9:
        raise ConfigError("the t grid must span at least 3 decades")
    hf = spec.hurst_fn if spec.hurst_fn is not None else HurstFunction.constant(spec.H)
    reports = [analysis.lrd_process_audit(hf, spec.K, s, analysis.lrd.default_t_grid(lo, hi))]
    if hf.kind == "sine":
        period = hf.p["period"]
        grid = analysis.lattice_t_grid(period, float(_opt(cfg, "offset", 0.0)), lo, hi)
    else:
        grid = analysis.lrd.default_t_grid(lo, hi)
    reports.append(analysis.lrd_increment_audit(hf, spec.K, s, grid))
    mem = analysis.memory_classification(spec, s, float(_opt(cfg, "delta", 1.0)),
                                         int(_opt(cfg, "n_terms", 10_000)))
    reports.append(mem.report)
    if mem.label == "BOUNDARY":
        print(f"warning: memory label BOUNDARY for {spec.describe()}", file=sys.stderr)
    return reports


def cmd_estimate(cfg):
    src = cfg.options.get("input")
    if not src:
        raise ConfigError("estimate needs --in PATHS.csv")
    times, paths = io.read_paths_csv(src)
    window = int(_opt(cfg, "window", DEFAULT_WINDOW))
    scales = tuple(int(x) for x in _opt(cfg, "scales", list(DEFAULT_SCALES)))
    half = (window - 1) // 2
    if cfg.t:
        ts = cfg.t
    elif times.size > 2 * half:
        ts = [float(x) for x in np.linspace(times[half], times[times.size - 1 - half], 9)]
    else:
        raise WindowError(f"window of {window} samples exceeds the {times.size}-point grid")
    spec = _spec(cfg, required=False)
    tol = _opt(cfg, "tol", 0.1)
    reports = []
    for t in ts:
        est = local_hurst_estimate(paths, times, float(t), window, scales)
        inputs = {"t": float(t), "window": est.window, "scales": list(scales),
                  "n_paths": int(paths.shape[0]), "input": os.path.basename(src)}
        measured = [("estimate", est.estimate), ("stderr", est.stderr),
                    ("clamped", est.clamped), ("raw", est.raw)]
        if spec is not None and spec.family != Family.XK:
            target = float(spec.hurst_at(float(t))) * spec.K
            reports.append(analysis.VerificationReport(
                "local-exponent", inputs, measured, target=target, tolerance=tol, mode="abs",
                notes="target H(t)K"))
        else:
            reports.append(analysis.VerificationReport(
                "local-exponent", inputs, measured, target=(0.01, 0.99), tolerance=0.0,
                mode="within", notes="no process given; estimate only"))
    return reports


_COMMANDS = {
    "simulate": cmd_simulate,
    "check-psd": cmd_check_psd,
    "verify": cmd_verify,
    "lrd": cmd_lrd,
    "estimate": cmd_estimate,
}


def run(cfg):
    """Execute ``cfg``; return ``(exit_code, document or None)``."""
    reports = _COMMANDS[cfg.command](cfg)
    if reports is None:
        return EXIT_OK, None
    doc = {"config": cfg.to_dict(), "reports": [r.to_dict() for r in reports],
           "version": __version__}
    name = cfg.command if cfg.command != "verify" else f"verify-{cfg.check}"
    out = cfg.out or default_out(f"{name}.json")
    io.write_json(out, doc)
    n_pass = sum(r.passed for r in reports)
    n_skip = sum(r.skipped for r in reports)
    status = "PASS" if n_pass == len(reports) else "FAIL"
    print(f"{name}: {status} {n_pass}/{len(reports)} passed ({n_skip} skipped) -> {out}")
    for r in reports:
        if not r.passed:
            print("  " + r.line())
    return (EXIT_OK if n_pass == len(reports) else EXIT_FAIL), doc


# -- argparse ---------------------------------------------------------------------


def _common(p):
    p.add_argument("--process", choices=[f.value for f in Family])
    p.add_argument("--H", type=float)
    p.add_argument("--K", type=float)
    p.add_argument("--hurst", help="e.g. sine:mu=0.3,nu=0.7,period=1,phase=0")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--grid", help="start:end:n, n+1 equally spaced points")
    g.add_argument("--times", help="comma-separated explicit times")
    p.add_argument("--paths", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.add_argument("--t", help="comma-separated evaluation times")
    p.add_argument("--tol", type=float, help="override the check tolerance")


def build_parser():
    parser = argparse.ArgumentParser(prog="multifrac", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"multifrac {__version__}")
    parser.add_argument("--config", help="replay the config embedded in a JSON report")
    parser.add_argument("--replay-out", dest="replay_out", help="output path for --config replay")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("simulate", help="sample paths to CSV")
    _common(p)

    p = sub.add_parser("check-psd", help="PSD check of one kernel matrix")
    _common(p)

    p = sub.add_parser("verify", help="kernel-level verification audits")
    p.add_argument("check", choices=CHECKS)
    _common(p)
    p.add_argument("--configs", type=int, help="random sweep size (psd, quasi-helix)")
    p.add_argument("--pairs", type=int, help="holder: number of (t, s) pairs")
    p.add_argument("--samples", type=int, help="prop2/decomposition: random samples")
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--gamma", type=float)

    p = sub.add_parser("lrd", help="long-range dependence exponents and memory")
    _common(p)
    p.add_argument("--s", type=float)
    p.add_argument("--t-lo", dest="t_lo", type=float)
    p.add_argument("--t-hi", dest="t_hi", type=float)
    p.add_argument("--offset", type=float, help="lattice offset for periodic Hurst functions")
    p.add_argument("--delta", type=float)
    p.add_argument("--n-terms", dest="n_terms", type=int)

    p = sub.add_parser("estimate", help="local exponent from a paths CSV")
    _common(p)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--window", type=int)
    p.add_argument("--scales", help="comma-separated lags in grid steps")
    return parser


_OPTION_KEYS = ("tol", "configs", "pairs", "samples", "a", "b", "alpha", "gamma", "s",
                "t_lo", "t_hi", "offset", "delta", "n_terms", "input", "window", "scales")


def config_from_args(args):
    if args.grid and args.times:
        raise ConfigError("--grid and --times are exclusive")
    grid = parse_grid(args.grid) if args.grid else (
        {"times": parse_floats(args.times)} if args.times else None)
    options = {k: getattr(args, k) for k in _OPTION_KEYS if getattr(args, k, None) is not None}
    spec = spec_from_args(args.process, args.H, args.K, args.hurst)
    if spec is None and args.K is not None:
        options["K"] = args.K
    if "scales" in options:
        options["scales"] = [int(x) for x in parse_floats(options["scales"])]
    return RunConfig(
        command=args.command,
        check=getattr(args, "check", None),
        spec=spec,
        grid=grid,
        seed=args.seed,
        paths=args.paths,
        workers=args.workers,
        out=args.out,
        t=parse_floats(args.t) if args.t else None,
        options=options,
    )


def load_config(path):
    with open(path, encoding="utf-8") as f:
        doc = json.load(f)
    return RunConfig.from_dict(doc.get("config", doc) if isinstance(doc, dict) else doc)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            cfg = load_config(args.config)
            if args.replay_out:
                cfg.out = args.replay_out
        elif args.command is None:
            parser.print_usage(sys.stderr)
            print("multifrac: error: a command or --config is required", file=sys.stderr)
            return EXIT_CONFIG
        else:
            cfg = config_from_args(args)
        code, _ = run(cfg)
        return code
    except (ConfigError, DomainError, WindowError, OSError, json.JSONDecodeError, KeyError,
            ValueError) as exc:
        print(f"multifrac: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MultifracError as exc:
        print(f"multifrac: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
