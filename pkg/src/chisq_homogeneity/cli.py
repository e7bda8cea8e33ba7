"""Command line interface: ``test``, ``simulate``, ``power`` and ``validate``.

Exit codes: 0 accept (or success), 1 reject (or failed validation), 2 error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .core import InvalidArgument, custom_partition, equal_partition
from .decision import gof_test, run_test
from .density import AlternativePair, make_alternative, project_thetas
from .montecarlo import (
    ExperimentConfig,
    consistency_sweep,
    default_workers,
    rate_sweep,
    run_experiment,
    write_sweep_csv,
)
from .power import power_curve, write_power_csv
from .statistics import Weights, tally
from .validation import run_all

EXIT_ACCEPT, EXIT_REJECT, EXIT_ERROR = 0, 1, 2


class CliError(Exception):
    pass


@dataclass
class RunManifest:
    subcommand: str
    inputs: list[str] = field(default_factory=list)
    config: str | None = None
    output: str | None = None
    seed: int | None = None
    version: str = __version__
    timestamp: str = field(default_factory=lambda: time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()))


def read_sample(path: str) -> np.ndarray:
    """One real in [0, 1] per line; blank lines are skipped."""
    values = []
    try:
        fh = open(path)
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}") from None
    with fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            try:
                x = float(text)
            except ValueError:
                raise CliError(f"{path}:{lineno}: cannot parse {text!r} as a number") from None
            if not 0.0 <= x <= 1.0:
                raise CliError(f"{path}:{lineno}: value {text} is outside [0, 1]")
            values.append(x)
    if not values:
        raise CliError(f"{path}: no observations")
    return np.asarray(values)


def _floats(text: str, what: str) -> list[float]:
    p = Path(text)
    if p.is_file():
        raw = p.read_text().replace(",", " ").split()
    else:
        raw = text.replace(",", " ").split()
    try:
        return [float(v) for v in raw]
    except ValueError:
        raise CliError(f"--{what}: expected comma separated numbers, got {text!r}") from None


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from None


def _dump(obj, path: str | None) -> str:
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if path:
        Path(path).write_text(text)
    return text


def _manifest_sidecar(manifest: RunManifest, csv_path: str) -> None:
    Path(csv_path + ".manifest.json").write_text(json.dumps(asdict(manifest), sort_keys=True, indent=2) + "\n")


def _say(args, *msg) -> None:
    if not args.quiet:
        print(*msg)


def cmd_test(args) -> int:
    xs = read_sample(args.x_file)
    if args.kind != "GoF" and args.y_file is None:
        raise CliError(f"test {args.kind} needs two sample files")
    ys = read_sample(args.y_file) if args.y_file is not None else None
    if args.edges is not None:
        part = custom_partition(_floats(args.edges, "edges"))
    else:
        size = xs.size if ys is None else min(xs.size, ys.size)
        m = args.m if args.m is not None else max(2, math.isqrt(size))
        part = equal_partition(m)
    weights = Weights(_floats(args.weights, "weights")) if args.weights else None
    if args.kind == "GoF":
        report = gof_test(part, xs, args.alpha)
    else:
        report = run_test(tally(part, xs, ys), args.kind, weights, args.alpha, args.e_form)
    manifest = RunManifest("test", inputs=[p for p in (args.x_file, args.y_file) if p],
                           output=args.json_out)
    payload = {**report.to_dict(), "manifest": asdict(manifest)}
    if args.json_out:
        _dump(payload, args.json_out)
    if args.quiet:
        print(report.to_json(sort_keys=True))
    else:
        print(f"{report.kind}: statistic={report.statistic:.6g} centering={report.centering:.6g} "
              f"scale={report.scale:.6g}")
        print(f"z={report.z:.4f} x_alpha={report.x_alpha:.4f} p_value={report.p_value:.4g}")
        print("reject" if report.reject else "accept")
    return EXIT_REJECT if report.reject else EXIT_ACCEPT


def cmd_simulate(args) -> int:
    data = _load_json(args.config)
    if not isinstance(data, dict):
        raise InvalidArgument("<root>: expected a mapping")
    nested = "experiment" in data
    sweep = data.pop("sweep", None)
    base = data.pop("experiment") if nested else data
    if args.seed is not None and isinstance(base, dict):
        base = {**base, "seed": args.seed}
    cfg = ExperimentConfig.from_dict(base, "experiment" if nested else "")
    workers = args.workers if args.workers is not None else default_workers()
    manifest = RunManifest("simulate", config=args.config, output=args.out, seed=cfg.seed)
    t0 = time.perf_counter()
    if sweep is not None:
        rows = _run_sweep(cfg, sweep, workers)
        payload = {"manifest": asdict(manifest), "config": cfg.to_dict(), "sweep": sweep, "rows": rows}
    else:
        res = run_experiment(cfg, workers)
        rows = res.summary_rows()
        payload = {"manifest": asdict(manifest), "result": res.to_dict()}
    text = _dump(payload, args.out)
    if args.out:
        csv_path = str(Path(args.out).with_suffix(".csv"))
        if sweep is not None:
            write_sweep_csv(rows, csv_path)
        else:
            _write_rows(rows, csv_path)
        _manifest_sidecar(manifest, csv_path)
    elif not args.quiet:
        sys.stdout.write(text)
    _say(args, f"finished in {time.perf_counter() - t0:.1f}s with {workers} worker(s)")
    for row in rows:
        _say(args, "  " + "  ".join(f"{k}={_short(v)}" for k, v in row.items()))
    return EXIT_ACCEPT


def _short(v):
    return f"{v:.4g}" if isinstance(v, float) else v


def _write_rows(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        header = list(rows[0])
        out.writerow(header)
        for r in rows:
            out.writerow([repr(float(r[h])) if isinstance(r[h], float) else r[h] for h in header])


def _run_sweep(cfg, sweep: dict, workers: int) -> list[dict]:
    if not isinstance(sweep, dict):
        raise InvalidArgument("sweep: expected a mapping")
    kind = sweep.get("type", "consistency")
    try:
        n_grid = sweep["n_grid"]
    except KeyError:
        raise InvalidArgument("sweep.n_grid: required field missing") from None
    if kind == "consistency":
        missing = [k for k in ("gamma", "c_b") if k not in sweep]
        if missing:
            raise InvalidArgument(f"sweep.{missing[0]}: required field missing")
        return consistency_sweep(cfg, n_grid, sweep["gamma"], sweep["c_b"], workers)
    if kind == "rate":
        if "r" not in sweep:
            raise InvalidArgument("sweep.r: required field missing")
        return rate_sweep(cfg, n_grid, sweep["r"], sweep.get("c_h", 1.0), sweep.get("c_m", 1.0), workers)
    raise InvalidArgument(f"sweep.type: unknown sweep {kind!r}")


POWER_FIELDS = {"n", "l", "m", "edges", "theta", "direction", "targets", "target_statistic",
                "kinds", "alpha", "weights", "variance_form", "k2_shift", "gof_formula"}


def cmd_power(args) -> int:
    data = _load_json(args.config)
    if not isinstance(data, dict):
        raise InvalidArgument("<root>: expected a mapping")
    unknown = sorted(set(data) - POWER_FIELDS)
    if unknown:
        raise InvalidArgument(f"{unknown[0]}: unknown field")
    for key in ("n", "targets"):
        if key not in data:
            raise InvalidArgument(f"{key}: required field missing")
    if "edges" in data:
        part = custom_partition(data["edges"])
    elif "m" in data:
        part = equal_partition(data["m"])
    else:
        raise InvalidArgument("m: one of edges or m is required")
    n = data["n"]
    l = data.get("l", n)
    weights = Weights(data["weights"]) if data.get("weights") else None
    kinds = data.get("kinds", ["K1"])
    direction = data.get("direction") or np.where(np.arange(part.m) % 2 == 0, 1.0, -1.0)
    theta = data.get("theta")
    statistic = data.get("target_statistic", "T1")
    pairs = []
    for i, t in enumerate(data["targets"]):
        if not isinstance(t, (int, float)) or t < 0:
            raise InvalidArgument(f"targets[{i}]: expected a nonnegative number")
        if "GoF" in kinds:
            # one-sample case: F carries the alternative, G stays uniform
            alt = make_alternative(part, direction, t, n, "T", None, None)
            pair = AlternativePair(project_thetas(part, alt.eta), alt.f)
        else:
            pair = make_alternative(part, direction, t, n, statistic, weights, theta)
        pairs.append((float(t), pair))
    extra = {k: data[k] for k in ("variance_form", "k2_shift", "gof_formula") if k in data}
    rows = power_curve(pairs, n, l, kinds, weights, data.get("alpha", 0.05), **extra)
    manifest = RunManifest("power", config=args.config, output=args.out)
    if args.out:
        write_power_csv(rows, args.out)
        _manifest_sidecar(manifest, args.out)
    for row in rows:
        _say(args, f"{row['parameter']:.6g}  {row['kind']}  beta={row['beta']:.4f}  power={row['power']:.4f}")
    return EXIT_ACCEPT


def cmd_validate(args) -> int:
    results = run_all(deep=args.deep)
    ok = all(r.passed for r in results)
    for r in results:
        _say(args, f"{'PASS' if r.passed else 'FAIL'}  {r.name:<24} cases={r.cases:<5} "
                   f"max_abs_error={r.max_abs_error:.3e} (tol {r.tolerance:.0e})")
    if args.json_out:
        manifest = RunManifest("validate", output=args.json_out)
        _dump({"manifest": asdict(manifest),
               "results": [{**asdict(r), "passed": r.passed} for r in results]}, args.json_out)
    return EXIT_ACCEPT if ok else EXIT_REJECT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chisq-homogeneity", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--quiet", action="store_true", help="machine readable output only")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", help="test two samples (or one, for GoF) read from text files")
    p.add_argument("x_file")
    p.add_argument("y_file", nargs="?")
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--m", type=int, help="number of equal cells (default: isqrt of the smaller sample)")
    grp.add_argument("--edges", help="comma separated cell edges, or a file holding them")
    p.add_argument("--kind", choices=["K1", "K2", "K3", "GoF"], default="K1")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--weights", help="comma separated cell weights, or a file holding them")
    p.add_argument("--e-form", choices=["exact", "approx", "truncated"], default="exact")
    p.add_argument("--json-out")
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("simulate", help="run a Monte Carlo experiment or sweep from a JSON config")
    p.add_argument("config")
    p.add_argument("--out")
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("power", help="predicted power curves from a JSON config")
    p.add_argument("config")
    p.add_argument("--out")
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("validate", help="run the brute-force oracle suites")
    p.add_argument("--deep", action="store_true")
    p.add_argument("--json-out")
    p.set_defaults(func=cmd_validate)

    for name in ("test", "simulate", "power", "validate"):
        sub.choices[name].add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
