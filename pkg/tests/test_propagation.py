import numpy as np
import pytest
from hypothesis import given, strategies as st

from shadowsim.errors import InvalidDistance, NonPositivePower
from shadowsim.propagation import (
    PathLossParams,
    SlowFading,
    db_to_linear,
    linear_to_db,
    path_loss,
)

URBAN = PathLossParams(a=16.0, b=36.0)


def test_path_loss_at_one_meter():
    assert path_loss(URBAN, 1.0) == 16.0


def test_path_loss_one_kilometer():
    assert path_loss(URBAN, 1000.0) == pytest.approx(124.0, abs=1e-12)


def test_path_loss_ten_meters():
    assert path_loss(URBAN, 10.0) == pytest.approx(52.0, abs=1e-12)


def test_path_loss_rejects_nonpositive_distance():
    for d in (0.0, -5.0):
        with pytest.raises(InvalidDistance):
            path_loss(URBAN, d)


@given(st.floats(0.1, 1e5), st.floats(1.0, 80.0))
def test_one_decade_adds_b(d, b):
    p = PathLossParams(a=10.0, b=b)
    assert path_loss(p, 10 * d) - path_loss(p, d) == pytest.approx(b, rel=1e-9)


def test_db_to_linear_anchors():
    assert db_to_linear(0.0) == 1.0
    assert db_to_linear(10.0) == pytest.approx(10.0, rel=1e-12)


def test_round_trip():
    assert linear_to_db(db_to_linear(7.3)) == pytest.approx(7.3, abs=1e-12)


@given(st.floats(-200, 200))
def test_round_trip_property(x):
    assert abs(linear_to_db(db_to_linear(x)) - x) < 1e-9


def test_linear_to_db_rejects_nonpositive():
    with pytest.raises(NonPositivePower):
        linear_to_db(0.0)
    with pytest.raises(NonPositivePower):
        linear_to_db(np.array([1.0, -2.0]))


def test_array_conversions():
    x = np.array([0.0, 10.0, 20.0])
    assert np.allclose(db_to_linear(x), [1.0, 10.0, 100.0])
    assert np.allclose(linear_to_db(db_to_linear(x)), x)


def test_slow_fading_total():
    sf = SlowFading(path_loss=124.0, shadowing=-3.5)
    assert sf.total == 120.5
