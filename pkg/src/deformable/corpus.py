"""Reference expressions with hand-written float semantics.

Each entry pairs grammar text with an independent Python implementation of
the function and its derivative. All entries are defined and smooth on
``[0.2, 3]``.
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple


class Sample(NamedTuple):
    text: str
    f: Callable[[float], float]
    df: Callable[[float], float]


EXPRESSIONS: tuple[Sample, ...] = (
    Sample("t^2", lambda t: t * t, lambda t: 2 * t),
    Sample("sin(t) + 3*t", lambda t: math.sin(t) + 3 * t, lambda t: math.cos(t) + 3),
    Sample("2^3^2 + 0*t", lambda t: 512.0, lambda t: 0.0),
    Sample("exp(t)", math.exp, math.exp),
    Sample("log(t)", math.log, lambda t: 1 / t),
    Sample("t*exp(t)", lambda t: t * math.exp(t), lambda t: (1 + t) * math.exp(t)),
    Sample("sqrt(t)", math.sqrt, lambda t: 0.5 / math.sqrt(t)),
    Sample("t^(3/2)", lambda t: t**1.5, lambda t: 1.5 * t**0.5),
    Sample("cos(2*t) - t/3", lambda t: math.cos(2 * t) - t / 3, lambda t: -2 * math.sin(2 * t) - 1 / 3),
    Sample("-t^2 + 4", lambda t: 4 - t * t, lambda t: -2 * t),
    Sample(
        "exp(-t)*sin(t)",
        lambda t: math.exp(-t) * math.sin(t),
        lambda t: math.exp(-t) * (math.cos(t) - math.sin(t)),
    ),
    Sample("1/(1 + t^2)", lambda t: 1 / (1 + t * t), lambda t: -2 * t / (1 + t * t) ** 2),
    Sample("(t - 1)^3", lambda t: (t - 1) ** 3, lambda t: 3 * (t - 1) ** 2),
    Sample("log(t^2 + 1)", lambda t: math.log(t * t + 1), lambda t: 2 * t / (t * t + 1)),
    Sample(
        "sqrt(1 + t)*cos(t)",
        lambda t: math.sqrt(1 + t) * math.cos(t),
        lambda t: 0.5 / math.sqrt(1 + t) * math.cos(t) - math.sqrt(1 + t) * math.sin(t),
    ),
    Sample("pi*t - e", lambda t: math.pi * t - math.e, lambda t: math.pi),
    Sample("t^t", lambda t: t**t, lambda t: t**t * (math.log(t) + 1)),
    Sample("2^t", lambda t: 2**t, lambda t: 2**t * math.log(2)),
    Sample("sin(t)^2 + cos(t)^2", lambda t: 1.0, lambda t: 0.0),
    Sample(
        "exp(sin(t))/t",
        lambda t: math.exp(math.sin(t)) / t,
        lambda t: math.exp(math.sin(t)) * (t * math.cos(t) - 1) / (t * t),
    ),
)

SAMPLE_POINTS: tuple[float, ...] = (0.2, 0.35, 0.5, 0.8, 1.0, 1.3, 1.7, 2.1, 2.5, 3.0)

# smooth functions used for the operator identities and integral checks
SMOOTH: tuple[str, ...] = (
    "t^2",
    "sin(t)",
    "exp(t)",
    "t*exp(-t)",
    "cos(2*t) - t/3",
    "log(t)",
    "sqrt(1 + t)*cos(t)",
    "t^(3/2)",
)

# members of the exponential-polynomial-trig family
FAMILY: tuple[str, ...] = (
    "1",
    "t",
    "t^2",
    "t^3",
    "sin(t)",
    "cos(3*t)",
    "exp(t)",
    "exp(-2*t)",
    "t*exp(-t)",
    "t^2*sin(2*t) + 0.5*cos(t)",
    "exp(0.5*t)*cos(t) - 3*t",
)
