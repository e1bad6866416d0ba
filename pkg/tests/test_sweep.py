import csv
import io

import pytest

from deformable.expr import parse
from deformable.sweep import HEADER, SweepError, SweepSpec, sweep_csv, write_sweep


def rows(text):
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    return header, [tuple(float(x) for x in r) for r in reader]


def test_square_crossing_point():
    header, data = rows(sweep_csv(SweepSpec(parse("t^2"), (0.0, 0.5, 1.0), 0.0, 2.0, 5)))
    assert tuple(header) == HEADER
    assert len(data) == 15
    assert [v for t, _, v in data if t == 2.0] == [4.0, 4.0, 4.0]
    # ordered by alpha, then t
    assert [a for _, a, _ in data] == sorted(a for _, a, _ in data)


def test_trivial_values():
    _, data = rows(sweep_csv(SweepSpec(parse("sin(t)"), (1.0,), 0.0, 1.0, 3)))
    assert data[0] == (0.0, 1.0, 1.0)
    _, data = rows(sweep_csv(SweepSpec(parse("t^(3/2)"), (0.0,), 0.0, 1.0, 3)))
    assert data[-1] == (1.0, 0.0, 1.0)


def test_seventeen_digits_roundtrip():
    spec = SweepSpec(parse("exp(sin(t))"), (0.3,), 0.1, 1.0, 7)
    text = sweep_csv(spec)
    _, data = rows(text)
    for line, (t, a, v) in zip(text.splitlines()[1:], data):
        assert line == ",".join(format(x, ".17g") for x in (t, a, v))
        assert float(format(v, ".17g")) == v


def test_domain_error_names_point():
    with pytest.raises(SweepError) as info:
        sweep_csv(SweepSpec(parse("log(t)"), (0.5,), 0.0, 1.0, 3))
    assert info.value.t == 0.0 and info.value.alpha == 0.5


def test_no_partial_output_on_error():
    buf = io.StringIO()
    with pytest.raises(SweepError):
        write_sweep(SweepSpec(parse("sqrt(1 - t)"), (0.0,), 0.0, 2.0, 5), buf)
    assert buf.getvalue() == ""


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(alpha_list=()),
        dict(alpha_list=(1.5,)),
        dict(t_lo=1.0, t_hi=1.0),
        dict(points=1),
    ],
)
def test_spec_validation(kwargs):
    base = dict(f=parse("t"), alpha_list=(0.5,), t_lo=0.0, t_hi=1.0, points=3)
    base.update(kwargs)
    with pytest.raises(ValueError):
        SweepSpec(**base)
