import math

import pytest

import nsrlab


def test_bits():
    assert nsrlab.sign_bit(1.0, 1.0) == pytest.approx(math.tanh(1.0))
    assert nsrlab.zero_bit(0.0, 5.0) == 1.0


def test_hand_weights_classify():
    gt = nsrlab.hand_weighted_nsr("gt")
    y, ybar = gt.forward([3.0, 1.0])
    assert y > 0.5
    assert y + ybar == pytest.approx(1.0)
    assert gt.forward([1.0, 3.0])[0] < 0.5
    with pytest.raises(ValueError):
        nsrlab.hand_weighted_nsr("bogus")


def test_parameter_count_and_snapshot_round_trip():
    p = nsrlab.init_params(2, 10, 1.0, seed=3)
    assert p.learnable_count == 70
    back = nsrlab.nsr_from_snapshot(p.to_snapshot())
    assert back.forward([4.0, -2.0]) == p.forward([4.0, -2.0])


def test_datasets():
    inputs, targets = nsrlab.comparison_dataset("eq", magnitude=6, seed=1)
    assert len(inputs) == len(targets) == 21
    assert 10**6 <= inputs[0][0] < 10**7


def test_compare_rows_are_deterministic():
    a = nsrlab.compare("lt", epochs=50, seeds=[0, 1])
    b = nsrlab.compare("lt", epochs=50, seeds=[0, 1], workers=2)
    assert len(a) == 2 * 13 * 2
    assert a == b
    assert {r["model"] for r in a} == {"nsr", "mlp"}


def test_graphs():
    text = nsrlab.random_graph(8, seed=4)
    assert text.splitlines()[0] == "8 0"
    exact = nsrlab.shortest_paths(text)
    assert exact[0] == 0.0
    assert nsrlab.shortest_paths(text, perfect_gnn_rollout=True) == exact


def test_selftest():
    checks = nsrlab.selftest(seed=2)
    assert checks
    assert all(passed for _, passed, _ in checks)
