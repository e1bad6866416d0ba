import math

import pytest

from deformable.expr import parse


@pytest.fixture
def p():
    return parse


def rel_close(x: float, y: float, tol: float, scale: float = 0.0) -> bool:
    return abs(x - y) <= tol * max(1.0, abs(x), abs(y), scale)


E = math.e
