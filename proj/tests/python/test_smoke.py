import math

import pytest

import ndde


def test_uniform_lightcone_roots():
    traj = ndde.Trajectory.linear((-10, 0, 0), (0.5, 0, 0), -20.0, 20.0)
    ret = ndde.solve_lightcone(traj, (0, 0, 0), 1.5, "retarded")
    adv = ndde.solve_lightcone(traj, (0, 0, 0), 1.5, "advanced")
    # x(t) = -10 + 0.5 (t + 20): roots t = 1 and t = 3
    assert ret["t_dev"] == pytest.approx(1.0, abs=1e-12)
    assert adv["t_dev"] == pytest.approx(3.0, abs=1e-12)
    for hit, sign in ((ret, -1), (adv, 1)):
        x = -10 + 0.5 * (hit["t_dev"] + 20)
        assert sign * (hit["t_dev"] - 1.5) == pytest.approx(abs(x), abs=1e-12)


def test_trajectory_json_round_trip():
    traj = ndde.Trajectory.circular((0, 0, 0), 1.0, 0.5, 0.0, 10.0)
    back = ndde.Trajectory.from_json(traj.to_json())
    assert back.eval(3.3) == traj.eval(3.3)


def test_retarded_delay_first_step():
    # y' = -y(t-1), y = 1 on [-1, 0]: y = 1 - t on [0, 1]
    sol = ndde.solve_linear_delay("retarded", a=-1.0, horizon=1.0)
    assert sol["y"][-1] == pytest.approx(0.0, abs=1e-12)
    assert sol["breaking_points"][0]["jumps"][0] == pytest.approx(-1.0)


def test_neutral_persistence():
    sol = ndde.solve_linear_delay("neutral", a=0.5, h0=0.0, h1=1.0, horizon=4.0)
    jumps = [bp["jumps"][0] for bp in sol["breaking_points"]]
    for n, j in enumerate(jumps):
        assert j == pytest.approx(-(0.5 ** (n + 1)), rel=1e-12)


def test_semi_sum_fields_is_average():
    traj = ndde.Trajectory.circular((0, 0, 0), 0.5, 1.0, -50.0, 50.0)
    f = ndde.semi_sum_fields(traj, (10, 0, 0), 0.0)
    for k in range(3):
        assert f["E"][k] == pytest.approx(0.5 * (f["E_plus"][k] + f["E_minus"][k]))


def test_recoil_factor_and_double_slit():
    assert ndde.recoil_factor(1836.15267) == pytest.approx((math.sqrt(2) * 1836.15267) ** (2 / 3))
    report = ndde.double_slit()
    assert report["ratio_to_h_over_mv"] == pytest.approx(2 * math.pi * 137.035999 / report["recoil_factor"])


def test_crystal_pendulum_and_errors():
    w = ndde.pendulum_frequency((2 * math.pi, 0, 0), 1.0, 1e-3)
    assert w == pytest.approx(math.sqrt(2e-3) * 2 * math.pi)
    assert ndde.first_order_residual((2 * math.pi, 0, 0), 1j, 1e-3, (0.3, 0.7, 0)) < 1e-14
    with pytest.raises(ValueError):
        ndde.vonlaue_shift(-1.0, (1, 0, 0), (1, 0, 0))
