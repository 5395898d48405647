import math

import pytest

import netmech


@pytest.fixture(scope="module")
def sample():
    net = netmech.generate_network(4000, min_degree=1, max_degree=6, seed=3)
    data = netmech.generate_data(net, "h1-UUU", seed=4)
    return net, data


def test_network_basics():
    net = netmech.Network(4, [(0, 1), (1, 2), (1, 2)])
    assert net.n_units == 4 and net.n_edges == 2
    assert net.neighbors(1) == [0, 2]
    assert net.degree(3) == 0
    with pytest.raises(ValueError):
        netmech.Network(2, [(0, 5)])


def test_generated_network_respects_degrees(sample):
    net, data = sample
    assert all(1 <= net.degree(i) <= 6 for i in range(net.n_units))
    assert len(data) == net.n_units
    assert set(data.A) <= {0, 1} and set(data.Y) <= {0, 1}
    assert "h3-BBB" in netmech.presets()


def test_separated_sets_verify(sample):
    net, _ = sample
    members = netmech.greedy_separated_set(net, 6, "rings12", restarts=2, seed=1)
    assert len(members) > 50
    assert netmech.verify_separated_set(net, 6, members, "rings12") == {
        "separated": True, "eligible": True, "maximal": True}
    dyads = netmech.greedy_dyad_set(net, 2)
    assert all(net.adjacent(u, v) for u, v in dyads)


def test_mechanism_report(sample):
    net, data = sample
    report = netmech.determine_mechanisms(net, data, alpha=0.05, seed=2)
    assert [layer["layer"] for layer in report["layers"]] == ["L", "A", "Y"]
    for layer in report["layers"]:
        assert layer["df"] == 1
        assert 0.0 <= layer["p_value"] <= 1.0
    assert report["separated_set_size"] == report["layers"][0]["effective_sample_size"]


def test_effects(sample):
    net, data = sample
    out = netmech.overall_effect(net, data, "UUU", draws=30, burn_in=20, seed=5)
    assert math.isclose(out["contrast"], out["treated"] - out["untreated"])
    assert len(out["y_params"]) == 6
    est = netmech.estimate_effects(net, data, "UUU", [1] * net.n_units, draws=30, burn_in=20)
    assert all(0.0 <= p <= 1.0 for p in est["per_unit"])
    with pytest.raises(RuntimeError):
        netmech.overall_effect(net, data, "BUU")  # binary L has no dyad normal model


def test_s_separation_on_example():
    net = netmech.Network(3, [(0, 1), (1, 2)])
    assert netmech.s_separated(net, "UUU", ["L0"], ["L2"], ["L1"])
    assert not netmech.s_separated(net, "BUU", ["L0"], ["L2"], ["L1"])
