import math

import pytest

import qtrunc


def test_version_string():
    assert qtrunc.__version__.count(".") == 2


def test_segment_bound_matches_closed_form():
    for r in (0.0, 0.25, 0.5):
        for delta in range(1, 12):
            expect = 2.0 ** (1 - delta) / math.factorial(delta) ** (1 - r)
            assert qtrunc.segment_bound(r, delta) == pytest.approx(expect, rel=1e-13)


def test_long_time_hand_values():
    linear = qtrunc.WalkProfile(1.0, 0.0)
    a = qtrunc.long_time_bound(linear, 0, 2, 1.0)
    assert (a.lambda_, a.j_count, a.bound) == (2, 2, 0.5)
    b = qtrunc.long_time_bound(linear, 0, 5, 1.0)
    assert b.lambda_ == 8
    assert b.bound == pytest.approx(1.0 / 960.0, rel=1e-14)


def test_state_threshold_meets_target():
    profile = qtrunc.profile_hubbard_holstein(0.5)
    rep = qtrunc.minimal_state_threshold(profile, 2, 1.5, 1e-3)
    assert rep.bound <= 1e-3
    assert rep.lambda_ >= 2
    assert qtrunc.leakage_bound_at(profile, 2, rep.lambda_, 1.5) <= 1e-3
    if rep.lambda_ > 2:
        assert qtrunc.leakage_bound_at(profile, 2, rep.lambda_ - 1, 1.5) > 1e-3


def test_energy_threshold_single_mode():
    def oracle(omega0, lambda0, eps):
        return math.ceil(((2.0 / omega0 + math.sqrt(lambda0 + 1)) ** 2 - 1) / eps**2) - 1

    assert qtrunc.energy_threshold_single_mode(1.0, 4, 0.1) == 1694 == oracle(1.0, 4, 0.1)
    assert qtrunc.energy_threshold_single_mode(1.0, 0, 0.5) == 31 == oracle(1.0, 0, 0.5)


def test_invalid_profile_raises():
    with pytest.raises(ValueError):
        qtrunc.WalkProfile(-1.0, 0.0)
    with pytest.raises(ValueError):
        qtrunc.WalkProfile(1.0, 1.0)


def test_model_summary_single_mode():
    info = qtrunc.model_summary("single", {"g_lin": 0.0, "omega0": 1.0, "n_max": 6})
    assert info["dim"] == 7
    assert info["ground_energy"] == pytest.approx(0.0, abs=1e-9)


def test_coherent_oracle_is_sound():
    reports = qtrunc.coherent_oracle_check([0.5, 1.0])
    assert reports
    assert all(r.sound for r in reports)


def test_state_verification_small():
    params = {"n_sites": 2, "hop": 1.0, "u": 0.0, "mu": 0.0, "g": 0.5, "omega0": 1.0, "n_max": 6}
    reports = qtrunc.verify_state_truncation("hh", params, 0, [0.5], [2, 3], mode=0)
    assert reports
    for r in reports:
        assert r.sound
        assert r.empirical <= r.analytic + 1e-8
