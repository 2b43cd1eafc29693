import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resonator_net.network import (
    CATALOG,
    EffectiveLink,
    Network,
    Node,
    PhysicalLink,
    ScenarioError,
    conjugate_phases,
    derive_effective,
    effective_drive,
    effective_rate,
    lab_config_iii,
    link_rate,
    load_scenario,
    network_from_dict,
    network_to_dict,
    ring,
    scenario_catalog,
    set_z,
    z_values,
)


def test_rate_formula_by_hand():
    # J^2 kappa / (kappa^2 + Delta^2) with J=2, kappa=3, Delta=4 -> 12/25
    assert effective_rate(2.0, 3.0, 4.0) == pytest.approx(12 / 25)


def test_drive_formula_by_hand():
    # alpha e^{i phi} (Delta - i kappa) / (J kappa) at phi = pi/2 -> i (4 - 3i) / 6
    assert effective_drive(1.0, math.pi / 2, 2.0, 3.0, 4.0) == pytest.approx((3 + 4j) / 6)


def test_drive_without_coupling_is_rejected():
    with pytest.raises(ValueError):
        effective_drive(1.0, 0.0, 0.0, 1.0, 1.0)


def test_lab_values_map_to_catalog_magnitudes():
    eff = derive_effective(lab_config_iii())
    G = [l.Gamma for l in eff.links]
    assert G[0] == pytest.approx(G[2])
    assert G[1] / G[0] == pytest.approx(1e-3, rel=0.01)
    assert all(l.y == pytest.approx(15.0) for l in eff.links)
    # the pi phase on link 3 gives the opposite drive sign
    assert eff.links[2].x == pytest.approx(-eff.links[0].x)


def test_conjugate_phases_flips_drive_phase():
    net = Network((Node(), Node()), (PhysicalLink((0, 1), J=1, alpha=1, phi=0.3, omega_c=2, kappa=1),))
    a = derive_effective(net).links[0].x
    b = derive_effective(conjugate_phases(net)).links[0].x
    assert abs(a) == pytest.approx(abs(b))
    assert math.atan2(b.imag, b.real) - math.atan2(a.imag, a.real) == pytest.approx(-0.6)


def test_self_energy_shift_lands_on_sites():
    net = Network((Node(), Node(), Node()),
                  (PhysicalLink((0, 1), J=1, alpha=0, phi=0, omega_c=3, kappa=1),))
    eff = derive_effective(net, self_energy=True)
    shift = eff.links[0].Gamma * 3.0
    assert [n.detuning for n in eff.nodes] == pytest.approx([shift, shift, 0.0])


def test_single_endpoint_link_has_no_exchange():
    with pytest.raises(ValueError):
        EffectiveLink((0,), 1.0, 0j, 2.0)


def test_network_validation():
    with pytest.raises(ValueError):
        Network(tuple(Node() for _ in range(6)), ())
    with pytest.raises(ValueError):
        Network((Node(), Node()), (EffectiveLink((0, 2), 1.0),))
    with pytest.raises(ValueError):
        EffectiveLink((1, 1), 1.0)


def test_z_roundtrip():
    net = ring(3, [1.0, 1e-3, 1.0], 1.0, 15.0, 0.0)
    net = set_z(net, {0: 1.01, 2: 1.01})
    z = z_values(net)
    assert z[0] == pytest.approx(1.01)
    assert z[2] == pytest.approx(1.01)
    # the weak link sees the same node loss against a 1000x smaller rate
    assert z[1] == pytest.approx(11.0)
    assert link_rate(net, 0) == pytest.approx(1.0)


def test_z_inconsistent_assignment():
    net = ring(3, [1.0, 1e-3, 1.0], 1.0, 15.0, 0.0)
    with pytest.raises(ValueError):
        set_z(net, {0: 1.01, 1: 1.5})
    with pytest.raises(ValueError):
        set_z(net, 0, 0.5)


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_catalog_json_roundtrip(name):
    net = scenario_catalog(name)
    back = network_from_dict(json.loads(json.dumps(network_to_dict(net))))
    assert back == net


def test_unknown_catalog_name():
    with pytest.raises(KeyError):
        scenario_catalog("nope")


def test_schema_rejects_unknown_keys():
    doc = network_to_dict(scenario_catalog("config_i"))
    doc["links"][0]["extra"] = 1
    with pytest.raises(ScenarioError):
        network_from_dict(doc)
    doc = network_to_dict(scenario_catalog("config_i"))
    doc["colour"] = "red"
    with pytest.raises(ScenarioError):
        network_from_dict(doc)


def test_schema_endpoints_are_one_based():
    doc = {"mode": "effective", "nodes": [{}, {}], "links": [{"endpoints": [1, 2], "Gamma": 1.0}]}
    assert network_from_dict(doc).links[0].endpoints == (0, 1)
    doc["links"][0]["endpoints"] = [0, 1]
    with pytest.raises(ScenarioError):
        network_from_dict(doc)


def test_load_scenario_malformed(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(ScenarioError):
        load_scenario(str(p))
    with pytest.raises(ScenarioError):
        load_scenario(str(tmp_path / "missing.json"))


finite = st.floats(-50, 50, allow_nan=False)


@settings(max_examples=50, deadline=None)
@given(n=st.integers(2, 5), G=st.floats(1e-3, 10), xr=finite, xi=finite, y=finite,
       gamma=st.floats(0, 5))
def test_effective_json_roundtrip_property(n, G, xr, xi, y, gamma):
    net = ring(n, G, complex(xr, xi), y, gamma)
    assert network_from_dict(json.loads(json.dumps(network_to_dict(net)))) == net
