"""Asymptotic type II error of the tests: ``beta = Phi((sigma x_alpha - M) / sigma_full)``."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable, Literal

import numpy as np

from .core import InvalidArgument
from .decision import critical_value, normal_cdf
from .density import AlternativePair
from .moments import t1_theory, t2_theory
from .statistics import Weights

__all__ = ["PowerPrediction", "predict_beta", "power_curve", "write_power_csv"]

PowerKind = Literal["K1", "K2", "K3", "GoF"]


@dataclass(frozen=True)
class PowerPrediction:
    beta: float
    power: float
    shift: float
    leading_scale: float
    full_scale: float
    offset: float = 0.0


def predict_beta(
    pair: AlternativePair,
    n: int,
    l: int | None,
    kind: PowerKind = "K1",
    w: Weights | None = None,
    alpha: float = 0.05,
    *,
    variance_form: str = "full",
    k2_shift: Literal["M1", "M2"] = "M2",
    gof_formula: Literal["refined", "classical"] = "refined",
    centering_offset: bool = False,
) -> PowerPrediction:
    """Predicted type II error of ``kind`` against ``pair``.

    Parameters
    ----------
    variance_form
        ``"full"`` (default) or ``"reduced"`` coefficient of the
        alternative-driven variance addendum, see :mod:`.moments`.
    k2_shift
        Shift used for K2: ``M2`` (weighted, default) or ``M1``.
    gof_formula
        For ``GoF`` (``pair.g`` must be uniform): ``"classical"`` is
        ``Phi(x_alpha - M / sqrt(2m))``; ``"refined"`` also inflates the
        denominator by the alternative variance.
    centering_offset
        Add the gap between the test's centering constant and the null mean
        of the statistic (``1 + a`` for K1, zero otherwise). Off by default.
    """
    x_alpha = critical_value(alpha)
    part = pair.part
    offset = 0.0
    if kind == "K1":
        rep = t1_theory(pair, n, l, variance_form)
        leading, full, shift = rep.leading_sigma_sq, rep.full_sigma_sq, rep.shift
        if centering_offset:
            offset = 1.0 + n / l
        leading, full = np.sqrt(leading), np.sqrt(full)
    elif kind in ("K2", "K3"):
        rep = t2_theory(pair, n, l, w, variance_form=variance_form)
        leading, full, shift = np.sqrt(rep.leading_sigma_sq), np.sqrt(rep.full_sigma_sq), rep.shift
        if kind == "K2" and k2_shift == "M1":
            shift = t1_theory(pair, n, l).shift
    elif kind == "GoF":
        if np.any(pair.tau != 0.0):
            raise InvalidArgument("GoF predictions need the second density to be uniform")
        p, th = part.widths, pair.theta
        shift = n * float(np.sum(p * th**2))
        leading = np.sqrt(2.0 * part.m)
        if gof_formula == "classical":
            full = leading
        else:
            k = 4.0 if variance_form == "full" else 1.0
            full = np.sqrt(2.0 * np.sum((1.0 + th) ** 2) + k * n * np.sum(p * (1.0 + th) * th**2))
    else:
        raise InvalidArgument(f"unknown test kind {kind!r}")
    beta = normal_cdf((leading * x_alpha + offset - shift) / full)
    return PowerPrediction(beta, 1.0 - beta, float(shift), float(leading), float(full), offset)


def power_curve(
    pairs: Iterable[tuple[float, AlternativePair]],
    n: int,
    l: int | None,
    kinds: Iterable[str] = ("K1",),
    w: Weights | None = None,
    alpha: float = 0.05,
    **kw,
) -> list[dict]:
    """Rows ``{parameter, kind, beta, power}`` for each ``(parameter, pair)``."""
    kinds = list(kinds)
    rows = []
    for param, pair in pairs:
        for kind in kinds:
            pred = predict_beta(pair, n, l, kind, w, alpha, **kw)
            rows.append({"parameter": param, "kind": kind, "beta": pred.beta, "power": pred.power})
    return rows


def write_power_csv(rows: list[dict], path, header=("parameter", "kind", "beta", "power")) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(header)
        for row in rows:
            out.writerow([_fmt(row[h]) for h in header])


def _fmt(v):
    # repr keeps full precision and always uses '.' as decimal separator
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v
