"""Replicated simulation of the tests: size, power, normality, estimator ratios.

Replication ``r`` draws from its own counter-based stream keyed by
``(seed, stream, r)``, so the output does not depend on how replications are
split across worker processes.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .core import InvalidArgument, Partition, custom_partition, equal_partition
from .decision import KINDS, gof_test_counts, run_test
from .density import AlternativePair, make_alternative, project_thetas, sample, sample_counts
from .estimators import estimate_scales
from .moments import gof_theory, t1_theory, t2_theory
from .power import predict_beta
from .statistics import TwoSampleCounts, Weights, tally

__all__ = [
    "RegimeWarning",
    "ExperimentConfig",
    "KindSummary",
    "ExperimentResult",
    "NormalityDiagnostic",
    "substream",
    "run_experiment",
    "normality_diag",
    "consistency_sweep",
    "rate_sweep",
    "write_sweep_csv",
    "default_workers",
]

WORKERS_ENV = "CHISQ_HOMOGENEITY_WORKERS"
SWEEP_HEADER = ("n", "m", "b_n", "kind", "rate", "se", "predicted_beta")
LOW_POWER_REPS = 100


class RegimeWarning(UserWarning):
    """The number of cells is outside the regime covered by the asymptotics."""


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise InvalidArgument(f"{WORKERS_ENV}={raw!r} is not an integer") from None


def substream(seed: int, stream: int, rep: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(stream, rep))
    return np.random.Generator(np.random.Philox(ss))


@dataclass
class ExperimentConfig:
    """Inputs of a Monte Carlo study.

    The cells are ``edges`` if given, else ``m`` equal cells, else
    ``floor(n ** gamma)`` equal cells. ``theta`` / ``tau`` are raw
    coefficients (projected onto the constraint). When ``target`` or ``c_b``
    is set, ``tau`` is ignored and the second density is built by
    :func:`make_alternative` with ``target`` (or ``c_b * sqrt(m)``) as the
    value of ``target_statistic``.
    """

    n: int
    l: int | None = None
    m: int | None = None
    gamma: float | None = None
    edges: list[float] | None = None
    theta: list[float] | None = None
    tau: list[float] | None = None
    direction: list[float] | str | None = None
    target: float | None = None
    c_b: float | None = None
    target_statistic: str = "T1"
    weights: list[float] | None = None
    alpha: float = 0.05
    reps: int = 1000
    seed: int = 0
    stream: int = 0
    kinds: tuple[str, ...] = ("K1",)
    e_form: str = "exact"
    draw: str = "points"

    def __post_init__(self) -> None:
        self.kinds = tuple(self.kinds)
        errors = self._problems()
        if errors:
            raise InvalidArgument("; ".join(errors))

    def _problems(self) -> list[str]:
        out = []
        if not isinstance(self.n, int) or self.n < 1:
            out.append("n: must be a positive integer")
        if self.l is not None and (not isinstance(self.l, int) or self.l < 1):
            out.append("l: must be a positive integer")
        if not isinstance(self.reps, int) or self.reps < 1:
            out.append("reps: must be >= 1")
        if not 0.0 < self.alpha < 1.0:
            out.append("alpha: must lie in (0, 1)")
        if not self.kinds:
            out.append("kinds: must not be empty")
        for i, k in enumerate(self.kinds):
            if k not in KINDS:
                out.append(f"kinds[{i}]: unknown test {k!r}")
        if self.draw not in ("points", "counts"):
            out.append("draw: must be 'points' or 'counts'")
        if self.e_form not in ("exact", "approx", "truncated"):
            out.append("e_form: must be 'exact', 'approx' or 'truncated'")
        if self.target_statistic not in ("T1", "T2", "T"):
            out.append("target_statistic: must be 'T1', 'T2' or 'T'")
        if self.edges is None and self.m is None and self.gamma is None:
            out.append("m: one of edges, m or gamma is required")
        if self.target is not None and self.c_b is not None:
            out.append("c_b: give either target or c_b, not both")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            out.append("seed: must be an unsigned 64-bit integer")
        return out

    @classmethod
    def from_dict(cls, data: dict, path: str = "") -> ExperimentConfig:
        """Build from a mapping; unknown or mistyped keys are reported by path."""
        prefix = f"{path}." if path else ""
        if not isinstance(data, dict):
            raise InvalidArgument(f"{path or '<root>'}: expected a mapping")
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - names)
        if unknown:
            raise InvalidArgument(f"{prefix}{unknown[0]}: unknown field")
        if "n" not in data:
            raise InvalidArgument(f"{prefix}n: required field missing")
        try:
            return cls(**data)
        except InvalidArgument as exc:
            raise InvalidArgument(prefix + str(exc).replace("; ", f"; {prefix}")) from None
        except TypeError as exc:
            raise InvalidArgument(f"{path or '<root>'}: {exc}") from None

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["kinds"] = list(self.kinds)
        return d

    @property
    def l_eff(self) -> int:
        return self.n if self.l is None else self.l

    def partition(self) -> Partition:
        if self.edges is not None:
            return custom_partition(self.edges)
        if self.m is not None:
            return equal_partition(self.m)
        return equal_partition(max(2, math.floor(self.n**self.gamma)))

    def resolve(self) -> tuple[Partition, AlternativePair, Weights | None]:
        part = self.partition()
        weights = None if self.weights is None else Weights(self.weights)
        if weights is not None and len(weights) != part.m:
            raise InvalidArgument(f"weights: length {len(weights)} does not match m = {part.m}")
        theta = np.zeros(part.m) if self.theta is None else np.asarray(self.theta, float)
        if theta.shape != (part.m,):
            raise InvalidArgument(f"theta: length {theta.size} does not match m = {part.m}")
        target = self.target
        if self.c_b is not None:
            target = self.c_b * math.sqrt(part.m)
        if target is not None:
            direction = self.direction
            if direction is None or direction == "alternating":
                direction = np.where(np.arange(part.m) % 2 == 0, 1.0, -1.0)
            pair = make_alternative(
                part, direction, target, self.n, self.target_statistic, weights, theta
            )
        else:
            f = project_thetas(part, theta)
            if self.tau is None:
                pair = AlternativePair(f, f)
            else:
                tau = np.asarray(self.tau, float)
                if tau.shape != (part.m,):
                    raise InvalidArgument(f"tau: length {tau.size} does not match m = {part.m}")
                pair = AlternativePair(f, project_thetas(part, tau))
        return part, pair, weights

    def regime_warnings(self, m: int) -> list[str]:
        out = []
        if m >= self.n:
            out.append(f"m = {m} is not small compared to n = {self.n}")
        if "K2" in self.kinds and m >= self.n ** (2.0 / 3.0):
            out.append(f"m = {m} >= n^(2/3) = {self.n ** (2 / 3):.1f}; K2 bias estimate may drift")
        return out


@dataclass
class KindSummary:
    rejections: int
    reps: int
    rejection_rate: float
    se: float
    stat_mean: float
    stat_var: float
    theory_mean: float
    theory_var: float
    z_mean: float
    z_sd: float
    ks_distance: float
    predicted_beta: float
    sigma_ratio: dict | None


@dataclass
class ExperimentResult:
    config: dict
    kinds: dict[str, KindSummary]
    m: int
    n: int
    l: int
    b_n: float
    low_power: bool
    warnings: list[str] = field(default_factory=list)
    samples: dict[str, dict[str, np.ndarray]] = field(default_factory=dict, repr=False)

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "m": self.m,
            "n": self.n,
            "l": self.l,
            "b_n": self.b_n,
            "low_power": self.low_power,
            "warnings": list(self.warnings),
            "kinds": {k: dataclasses.asdict(v) for k, v in self.kinds.items()},
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)

    def summary_rows(self) -> list[dict]:
        rows = []
        for kind, s in self.kinds.items():
            rows.append({"kind": kind, "n": self.n, "l": self.l, "m": self.m,
                         "rate": s.rejection_rate, "se": s.se,
                         "predicted_beta": s.predicted_beta, "ks_distance": s.ks_distance})
        return rows


def _theory(kind, pair, n, l, weights):
    if kind == "K1":
        return t1_theory(pair, n, l)
    if kind in ("K2", "K3"):
        rep = t2_theory(pair, n, l, weights)
        if kind == "K3":
            # T3 = T2 - W and E W equals the exact bias term
            return dataclasses.replace(rep, mean=rep.shift, centering=0.0)
        return rep
    return gof_theory(pair.f, n)


def _chunk(cfg: ExperimentConfig, start: int, stop: int) -> dict[str, dict[str, np.ndarray]]:
    part, pair, weights = cfg.resolve()
    n, l = cfg.n, cfg.l_eff
    two_sample = any(k != "GoF" for k in cfg.kinds)
    size = stop - start
    out = {k: {"statistic": np.empty(size), "z": np.empty(size),
               "reject": np.empty(size, dtype=bool), "scale": np.empty(size)} for k in cfg.kinds}
    for i, rep in enumerate(range(start, stop)):
        rng = substream(cfg.seed, cfg.stream, rep)
        if cfg.draw == "points":
            xs = sample(pair.f, n, rng)
            ys = sample(pair.g, l, rng) if two_sample else xs
            counts = tally(part, xs, ys)
        else:
            cx = sample_counts(pair.f, n, rng)
            cy = sample_counts(pair.g, l, rng) if two_sample else cx
            counts = TwoSampleCounts(part, cx, cy)
        for kind in cfg.kinds:
            if kind == "GoF":
                rep_ = gof_test_counts(part, counts.cx, cfg.alpha)
            else:
                rep_ = run_test(counts, kind, weights, cfg.alpha, cfg.e_form)
            arr = out[kind]
            arr["statistic"][i] = rep_.statistic
            arr["z"][i] = rep_.z
            arr["reject"][i] = rep_.reject
            arr["scale"][i] = rep_.scale
    return out


def _split(reps: int, workers: int) -> list[tuple[int, int]]:
    bounds = np.linspace(0, reps, min(workers, reps) + 1).round().astype(int)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def _simulate(cfg: ExperimentConfig, workers: int) -> dict[str, dict[str, np.ndarray]]:
    chunks = _split(cfg.reps, workers)
    if len(chunks) == 1:
        parts = [_chunk(cfg, *chunks[0])]
    else:
        with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
            parts = list(pool.map(_chunk, [cfg] * len(chunks), *zip(*chunks)))
    return {k: {key: np.concatenate([p[k][key] for p in parts]) for key in parts[0][k]}
            for k in cfg.kinds}


def run_experiment(cfg: ExperimentConfig, workers: int | None = None) -> ExperimentResult:
    """Run ``cfg.reps`` replications and aggregate per test kind."""
    workers = default_workers() if workers is None else max(1, int(workers))
    part, pair, weights = cfg.resolve()
    n, l = cfg.n, cfg.l_eff
    notes = cfg.regime_warnings(part.m)
    for msg in notes:
        warnings.warn(msg, RegimeWarning, stacklevel=2)
    raw = _simulate(cfg, workers)

    p = part.widths
    a = n / l
    summaries = {}
    for kind in cfg.kinds:
        arr = raw[kind]
        reps = cfg.reps
        k = int(arr["reject"].sum())
        rate = k / reps
        theory = _theory(kind, pair, n, l, weights)
        if kind == "K1":
            sigma = math.sqrt(2.0 * part.m**2 * np.sum((pair.f.masses + a * pair.g.masses) ** 2))
        elif kind in ("K2", "K3"):
            g = np.ones(part.m) if weights is None else weights.g
            sigma = math.sqrt(2.0 * np.sum(g**2 * (pair.f.masses + a * pair.g.masses) ** 2 / p**2))
        else:
            sigma = None
        if sigma is not None:
            ratio = arr["scale"] ** 2 / sigma**2
            sigma_ratio = {
                "mean": float(ratio.mean()),
                "q05": float(np.quantile(ratio, 0.05)),
                "q95": float(np.quantile(ratio, 0.95)),
                "within_10pct": float(np.mean(np.abs(ratio - 1.0) <= 0.1)),
            }
        else:
            sigma_ratio = None
        z = arr["z"]
        pred_pair = pair if kind != "GoF" else AlternativePair(pair.f, project_thetas(part, np.zeros(part.m)))
        summaries[kind] = KindSummary(
            rejections=k,
            reps=reps,
            rejection_rate=rate,
            se=math.sqrt(rate * (1.0 - rate) / reps),
            stat_mean=float(arr["statistic"].mean()),
            stat_var=float(arr["statistic"].var(ddof=1)) if reps > 1 else 0.0,
            theory_mean=theory.mean,
            theory_var=theory.variance,
            z_mean=float(z.mean()),
            z_sd=float(z.std(ddof=1)) if reps > 1 else 0.0,
            ks_distance=float(stats.kstest(z, "norm").statistic),
            predicted_beta=predict_beta(pred_pair, n, l, kind, weights, cfg.alpha).beta,
            sigma_ratio=sigma_ratio,
        )
    target = cfg.c_b * math.sqrt(part.m) if cfg.c_b is not None else (cfg.target or 0.0)
    return ExperimentResult(
        config=cfg.to_dict(),
        kinds=summaries,
        m=part.m,
        n=n,
        l=l,
        b_n=float(target),
        low_power=cfg.reps < LOW_POWER_REPS,
        warnings=notes,
        samples=raw,
    )


@dataclass
class NormalityDiagnostic:
    ks_distance: float
    bin_edges: np.ndarray
    counts: np.ndarray
    z_mean: float
    z_sd: float
    low_power: bool


def normality_diag(cfg: ExperimentConfig, kind: str = "K1", bins: int = 40,
                   workers: int | None = None) -> NormalityDiagnostic:
    """KS distance of the standardized statistic to the standard normal law."""
    if kind not in cfg.kinds:
        cfg = dataclasses.replace(cfg, kinds=(kind,))
    res = run_experiment(cfg, workers)
    z = res.samples[kind]["z"]
    counts, edges = np.histogram(z, bins=bins)
    return NormalityDiagnostic(
        ks_distance=res.kinds[kind].ks_distance,
        bin_edges=edges,
        counts=counts,
        z_mean=float(z.mean()),
        z_sd=float(z.std(ddof=1)) if z.size > 1 else 0.0,
        low_power=res.low_power,
    )


def _sweep(base: ExperimentConfig, entries, workers) -> list[dict]:
    rows = []
    ratio = base.l_eff / base.n
    for idx, (n, overrides) in enumerate(entries):
        changes = {"n": int(n), "l": max(1, round(n * ratio)), "edges": None, "theta": None,
                   "tau": None, "target": None, "c_b": None, "stream": base.stream + idx + 1}
        changes.update(overrides)
        cfg = dataclasses.replace(base, **changes)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RegimeWarning)
            res = run_experiment(cfg, workers)
        for kind, s in res.kinds.items():
            rows.append({"n": res.n, "m": res.m, "b_n": res.b_n, "kind": kind,
                         "rate": s.rejection_rate, "se": s.se, "predicted_beta": s.predicted_beta})
    return rows


def consistency_sweep(base_cfg: ExperimentConfig, n_grid, gamma: float, c_b: float,
                      workers: int | None = None) -> list[dict]:
    """Power along ``n`` with ``m = floor(n^gamma)`` and ``b_n = c_b sqrt(m)``."""
    n_grid = [int(n) for n in n_grid]
    if any(b <= a for a, b in zip(n_grid, n_grid[1:])):
        raise InvalidArgument("n_grid must be increasing")
    entries = [(n, {"m": None, "gamma": gamma, "c_b": c_b}) for n in n_grid]
    return _sweep(base_cfg, entries, workers)


def rate_sweep(base_cfg: ExperimentConfig, n_grid, r: float, c_h: float = 1.0, c_m: float = 1.0,
               workers: int | None = None) -> list[dict]:
    """Simple alternatives with ``||f - g|| = c_h n^-r`` on ``m = floor(c_m n^(2 - 4r))`` equal cells.

    Requires ``1/4 < r < 1/2``; the alternative is scaled through the
    unweighted functional ``T = n sum p eta^2 = n ||f - g||^2``.
    """
    if not 0.25 < r < 0.5:
        raise InvalidArgument("r must lie in (1/4, 1/2)")
    entries = []
    for n in n_grid:
        m = max(2, math.floor(c_m * n ** (2.0 - 4.0 * r)))
        entries.append((n, {"m": m, "gamma": None, "target_statistic": "T",
                            "target": c_h**2 * n ** (1.0 - 2.0 * r)}))
    return _sweep(base_cfg, entries, workers)


def write_sweep_csv(rows: list[dict], path) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(SWEEP_HEADER)
        for row in rows:
            out.writerow([repr(float(row[h])) if isinstance(row[h], float) else row[h]
                          for h in SWEEP_HEADER])
