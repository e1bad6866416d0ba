"""CSV sweeps of ``D^alpha f`` over an alpha family and a t grid."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterator, TextIO

import numpy as np

from .deform import deform_closed
from .expr import EvalDomainError, Expr, lambdify

HEADER = ("t", "alpha", "value")


class SweepError(ArithmeticError):
    def __init__(self, t: float, alpha: float, cause: str):
        self.t = t
        self.alpha = alpha
        super().__init__(f"cannot evaluate at t={t!r}, alpha={alpha!r}: {cause}")


@dataclass(frozen=True)
class SweepSpec:
    f: Expr
    alpha_list: tuple[float, ...]
    t_lo: float
    t_hi: float
    points: int

    def __post_init__(self):
        object.__setattr__(self, "alpha_list", tuple(float(a) for a in self.alpha_list))
        if not self.alpha_list:
            raise ValueError("alpha_list must not be empty")
        if any(not 0.0 <= a <= 1.0 for a in self.alpha_list):
            raise ValueError("every alpha must lie in [0, 1]")
        if not self.t_lo < self.t_hi:
            raise ValueError("need t_lo < t_hi")
        if int(self.points) != self.points or self.points < 2:
            raise ValueError("points must be an integer >= 2")

    def t_grid(self) -> np.ndarray:
        return np.linspace(self.t_lo, self.t_hi, int(self.points))


def sweep_rows(spec: SweepSpec) -> Iterator[tuple[float, float, float]]:
    """Rows ``(t, alpha, D^alpha f(t))`` ordered by alpha, then t."""
    ts = [float(t) for t in spec.t_grid()]
    for alpha in spec.alpha_list:
        fn = lambdify(deform_closed(spec.f, alpha))
        for t in ts:
            try:
                yield t, alpha, fn(t)
            except EvalDomainError as exc:
                raise SweepError(t, alpha, exc.cause) from exc


def _fmt(v: float) -> str:
    return format(v, ".17g")


def write_sweep(spec: SweepSpec, out: TextIO) -> int:
    """Write the CSV to ``out``; returns the number of data rows."""
    # materialize first so a domain error leaves no partial file content
    rows = list(sweep_rows(spec))
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(HEADER)
    writer.writerows((_fmt(t), _fmt(a), _fmt(v)) for t, a, v in rows)
    return len(rows)


def sweep_csv(spec: SweepSpec) -> str:
    buf = io.StringIO()
    write_sweep(spec, buf)
    return buf.getvalue()
