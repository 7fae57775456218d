"""Scenario file round-trips, 1-based index mapping, control actions."""

import numpy as np
import pytest

from netsiri.scenario import (Rewire, Scenario, ScenarioError, SetInfection,
                              SetRecovery, SetReinfection,
                              StochasticSettings, Vaccinate, apply_control,
                              load_scenario, save_scenario,
                              scenario_from_dict, scenario_to_dict)


def ring_scenario(**over):
    """4-node bidirectional ring with deliberately awkward float values."""
    n = 4
    a = np.zeros((n, n))
    for j in range(n):
        a[(j + 1) % n, j] = 1.0
        a[j, (j + 1) % n] = 1.0
    beta = a * (1.0 / 3.0)
    beta_hat = a * 0.7
    delta = np.array([1.0, 0.9, 1.1, np.pi / 3.0])
    p_s0 = np.array([0.9, 1.0, 1.0, 0.8])
    p_i0 = np.array([0.1, 0.0, 0.0, 0.1])
    kw = dict(n=n, adjacency=a, beta=beta, beta_hat=beta_hat, delta=delta,
              p_s0=p_s0, p_i0=p_i0, t_end=123.456, dt=0.007,
              controls=(SetRecovery(agent=2, value=0.3),
                        Vaccinate(agents=(0, 3))),
              stochastic=StochasticSettings(trials=250, seed=42,
                                            generator="philox"),
              provenance="round-trip fixture")
    kw.update(over)
    return Scenario(**kw)


def assert_scenarios_equal(a, b):
    assert a.n == b.n
    for field in ("adjacency", "beta", "beta_hat", "delta", "p_s0", "p_i0"):
        assert np.array_equal(getattr(a, field), getattr(b, field)), field
    assert a.t_end == b.t_end and a.dt == b.dt
    assert a.stride == b.stride
    assert a.controls == b.controls
    assert a.stochastic == b.stochastic
    assert a.provenance == b.provenance


class TestRoundTrip:
    def test_save_load_bit_exact(self, tmp_path):
        sc = ring_scenario()
        path = tmp_path / "ring.json"
        save_scenario(sc, path)
        back = load_scenario(path)
        assert_scenarios_equal(sc, back)

    def test_double_round_trip_stable(self, tmp_path):
        sc = ring_scenario()
        p1 = tmp_path / "a.json"
        p2 = tmp_path / "b.json"
        save_scenario(sc, p1)
        save_scenario(load_scenario(p1), p2)
        assert p1.read_text() == p2.read_text()

    def test_awkward_floats_survive(self, tmp_path):
        val = np.nextafter(1.0 / 3.0, 1.0)
        sc = ring_scenario(dt=val)
        path = tmp_path / "c.json"
        save_scenario(sc, path)
        assert load_scenario(path).dt == val

    def test_stride_omitted_when_none(self, tmp_path):
        sc = ring_scenario()
        assert sc.stride is None
        doc = scenario_to_dict(sc)
        assert "stride" not in doc
        sc2 = ring_scenario(stride=25)
        assert scenario_to_dict(sc2)["stride"] == 25

    def test_shipped_scenarios_parse(self):
        import glob
        import os
        here = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
        paths = sorted(glob.glob(os.path.join(here, "scenarios", "*.json")))
        assert paths
        for p in paths:
            sc = load_scenario(p)
            assert sc.n >= 2
            sc.model()


class TestOneBasedMapping:
    def test_controls_parse_to_zero_based(self):
        doc = scenario_to_dict(ring_scenario(controls=()))
        doc["controls"] = [
            {"type": "set_recovery", "agent": 3, "value": 0.5},
            {"type": "set_infection", "edge": [1, 4], "value": 0.2},
            {"type": "vaccinate", "agents": [2, 4]},
        ]
        sc = scenario_from_dict(doc)
        assert sc.controls[0] == SetRecovery(agent=2, value=0.5)
        assert sc.controls[1] == SetInfection(edge=(0, 3), value=0.2)
        assert sc.controls[2] == Vaccinate(agents=(1, 3))

    def test_controls_serialize_back_to_one_based(self):
        sc = ring_scenario(controls=(
            SetReinfection(edge=(2, 1), value=0.4),
            Rewire(remove=(1, 0), add=(0, 2), weight=2.0, beta=0.3,
                   beta_hat=0.6),
        ))
        doc = scenario_to_dict(sc)
        assert doc["controls"][0]["edge"] == [3, 2]
        assert doc["controls"][1]["remove"] == [2, 1]
        assert doc["controls"][1]["add"] == [1, 3]


class TestValidation:
    def test_missing_fields_listed(self):
        with pytest.raises(ScenarioError, match="beta_hat, delta"):
            scenario_from_dict({"n": 2, "adjacency": [[0, 1], [1, 0]],
                                "beta": [[0, 1], [1, 0]],
                                "p_s0": [1, 1], "p_i0": [0, 0]})

    def test_shape_mismatch(self):
        doc = scenario_to_dict(ring_scenario())
        doc["beta"] = [[0.0, 1.0], [1.0, 0.0]]
        with pytest.raises(ScenarioError, match="beta must be an 4x4"):
            scenario_from_dict(doc)

    def test_simplex_violation(self):
        doc = scenario_to_dict(ring_scenario())
        doc["p_s0"] = [0.9, 1.0, 1.0, 0.95]
        doc["p_i0"] = [0.2, 0.0, 0.0, 0.1]
        with pytest.raises(ScenarioError, match="not on simplex"):
            scenario_from_dict(doc)

    def test_invalid_model_rejected(self):
        doc = scenario_to_dict(ring_scenario())
        doc["delta"] = [1.0, 0.0, 1.0, 1.0]
        with pytest.raises(ScenarioError, match="model invalid"):
            scenario_from_dict(doc)

    def test_unknown_control_tag(self):
        doc = scenario_to_dict(ring_scenario())
        doc["controls"] = [{"type": "quarantine", "agents": [1]}]
        with pytest.raises(ScenarioError, match="unknown control type"):
            scenario_from_dict(doc)

    def test_edge_out_of_range(self):
        doc = scenario_to_dict(ring_scenario())
        doc["controls"] = [{"type": "set_infection", "edge": [1, 5],
                            "value": 0.1}]
        with pytest.raises(ScenarioError, match="out of range 1..4"):
            scenario_from_dict(doc)

    def test_parse_error_reports_position(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"n": 2,\n  "adjacency": [[0, 1], [1, 0]],, }\n')
        with pytest.raises(ScenarioError, match="line 2"):
            load_scenario(path)


class TestApplyControl:
    def test_input_untouched(self):
        sc = ring_scenario(controls=())
        before = {f: getattr(sc, f).copy()
                  for f in ("adjacency", "beta", "beta_hat", "delta", "p_s0")}
        apply_control(sc, SetRecovery(agent=1, value=2.0))
        apply_control(sc, Vaccinate(agents=(0,)))
        for f, arr in before.items():
            assert np.array_equal(getattr(sc, f), arr), f

    def test_repeat_application_identical(self):
        sc = ring_scenario(controls=())
        act = Rewire(remove=(1, 0), add=(3, 1), weight=1.0, beta=0.25,
                     beta_hat=0.5)
        out1 = apply_control(sc, act)
        out2 = apply_control(sc, act)
        assert_scenarios_equal(out1, out2)

    def test_vaccinate_zeroes_p_s0_only(self):
        sc = ring_scenario(controls=())
        out = apply_control(sc, Vaccinate(agents=(0, 2)))
        assert out.p_s0[0] == 0.0 and out.p_s0[2] == 0.0
        assert out.p_s0[1] == sc.p_s0[1] and out.p_s0[3] == sc.p_s0[3]
        assert np.array_equal(out.p_i0, sc.p_i0)

    def test_set_recovery(self):
        sc = ring_scenario(controls=())
        out = apply_control(sc, SetRecovery(agent=3, value=2.5))
        assert out.delta[3] == 2.5
        assert np.array_equal(out.delta[:3], sc.delta[:3])

    def test_set_rates_on_edge(self):
        sc = ring_scenario(controls=())
        out = apply_control(sc, SetInfection(edge=(1, 0), value=0.9))
        assert out.beta[1, 0] == 0.9
        out = apply_control(out, SetReinfection(edge=(1, 0), value=0.05))
        assert out.beta_hat[1, 0] == 0.05

    def test_rewire_moves_edge(self):
        sc = ring_scenario(controls=())
        act = Rewire(remove=(1, 0), add=(1, 3), weight=1.5, beta=0.2,
                     beta_hat=0.8)
        out = apply_control(sc, act)
        assert out.adjacency[1, 0] == 0.0
        assert out.beta[1, 0] == 0.0 and out.beta_hat[1, 0] == 0.0
        assert out.adjacency[1, 3] == 1.5
        assert out.beta[1, 3] == 0.2 and out.beta_hat[1, 3] == 0.8

    def test_invalidating_control_raises(self):
        sc = ring_scenario(controls=())
        with pytest.raises(ScenarioError, match="invalidates the model"):
            apply_control(sc, SetInfection(edge=(0, 2), value=0.5))

    def test_rewire_with_zero_rate_raises(self):
        sc = ring_scenario(controls=())
        act = Rewire(remove=(1, 0), add=(2, 0), weight=1.0, beta=0.0,
                     beta_hat=0.1)
        with pytest.raises(ScenarioError, match="invalidates the model"):
            apply_control(sc, act)

    def test_unknown_action_type_error(self):
        with pytest.raises(TypeError, match="not a control action"):
            apply_control(ring_scenario(controls=()), object())
