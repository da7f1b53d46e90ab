import math

import numpy as np
import pytest

import chemotaxis as cx


def test_config_defaults_and_overrides():
    c = cx.Config()
    assert c.n_t == 4
    assert c.t_life == 200.0
    assert c.epochs == 1600
    tg = cx.Config(flow="tg", flow_aware=True)
    assert tg.t_life == 400.0
    assert tg.hidden_nodes == 36
    assert tg.input_dim == 20
    assert "n_t = 4" in str(c)


def test_config_errors():
    with pytest.raises(ValueError):
        cx.Config(n_t=3)
    with pytest.raises(cx.ConfigError, match="unknown configuration key"):
        cx.Config(kapa=1)
    with pytest.raises(OSError):
        cx.Config.from_file("/nonexistent/run.cfg")


def test_fields():
    assert cx.concentration("linear", 3.0, 2.0) == pytest.approx(22.0)
    assert cx.concentration("radial", 3.0, 4.0) == pytest.approx(95.0)
    ux, uy, w = cx.taylor_green(0.0, 5.0)
    assert ux == pytest.approx(0.1)
    assert abs(uy) < 1e-15
    assert abs(w) < 1e-15
    _, _, w0 = cx.taylor_green(0.0, 0.0)
    assert w0 == pytest.approx(-0.1 * math.pi / 10)


def test_swinging_episode_arrays():
    ep = cx.run_episode(cx.Config(t_life=20), policy="swinging")
    assert ep["t"].shape == ep["x"].shape == (1001,)
    assert ep["t"][-1] == pytest.approx(20.0)
    assert ep["centerline"].shape[1] == 2
    assert len(ep["actions"]) == ep["centerline"].shape[0]
    assert ep["gain"] == pytest.approx(ep["c"][-1] - ep["c"][0])
    assert set(np.unique(ep["kappa"])) <= {3.0, 5.0}


def test_train_evaluate_and_persist(tmp_path):
    config = cx.Config(epochs=3, cells=4, t_life=30, seed=5)
    net, curve = cx.train(config)
    assert len(curve) == 3
    assert curve[0]["epsilon"] == 1.0
    assert net.layer_sizes == [8, 24, 24, 24, 2]

    path = tmp_path / "weights.txt"
    net.save(str(path))
    loaded = cx.QNetwork.load(str(path))
    assert loaded == net

    a = cx.evaluate(config, policy="qnet", net=net)
    b = cx.evaluate(config, policy="qnet", net=loaded)
    assert a["gains"] == b["gains"]
    assert len(a["gains"]) == 4

    again, _ = cx.train(config)
    assert again == net


def test_policy_requires_matching_network():
    net = cx.QNetwork.create(16, 1, 4)
    with pytest.raises(cx.ConfigError):
        cx.evaluate(cx.Config(cells=1, t_life=5), policy="qnet", net=net)
    with pytest.raises(cx.ConfigError):
        cx.evaluate(cx.Config(cells=1, t_life=5), policy="qnet")


def test_greedy_cohort_climbs():
    r = cx.evaluate(cx.Config(n_t=2, cells=10), policy="greedy")
    assert r["mean"] > 0
    assert r["variance"] >= 0
