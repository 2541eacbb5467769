import json

import pytest
from hypothesis import given, strategies as st
from fractions import Fraction

from affind.config import DEFAULT_BOUNDS, ConfigError, build_plan, load_config, parse_rational


def test_minimal_config_defaults(tmp_path):
    path = tmp_path / "plan.json"
    path.write_text(json.dumps({"type": "A2~1", "S": [1]}))
    plan = load_config(path)
    assert (plan.window, plan.operator_bound, plan.depth) == (3, 3, 2)
    assert DEFAULT_BOUNDS == {"window": 3, "operator": 3, "depth": 2}
    assert plan.S == (1,) and plan.mode == "pseudo" and plan.primitive_mode == "nilradical"


def test_zero_charge_rejected():
    with pytest.raises(ConfigError, match="zero"):
        build_plan({"type": "A2~1", "S": [1], "weights": [{"levi": ["1/3"], "charge": 0}]})


def test_flag_and_S_ambiguous():
    with pytest.raises(ConfigError, match="both"):
        build_plan({"type": "A2~1", "S": [1], "flag": "m2-m0"})


def test_problems_listed_together():
    with pytest.raises(ConfigError) as err:
        build_plan({"type": "A2~1", "flag": 3, "colour": 1, "bounds": {"window": -1, "x": 2},
                    "mode": "other"})
    probs = err.value.problems
    assert len(probs) == 5
    assert any("colour" in p for p in probs) and any("bounds.x" in p for p in probs)


def test_missing_required():
    with pytest.raises(ConfigError) as err:
        build_plan({})
    assert len(err.value.problems) == 2


def test_float_refused(tmp_path):
    path = tmp_path / "plan.json"
    path.write_text('{"type": "A2~1", "S": [1], "weights": [{"levi": [0.5]}]}')
    with pytest.raises(ConfigError, match="p/q"):
        load_config(path)
    with pytest.raises(ValueError, match="decimals"):
        parse_rational("0.5")


def test_json_error_has_position(tmp_path):
    path = tmp_path / "plan.json"
    path.write_text('{"type": "A2~1",\n "S": [1,}')
    with pytest.raises(ConfigError, match="line 2"):
        load_config(path)


def test_rational_parse_position():
    with pytest.raises(ValueError, match="position 2"):
        parse_rational("1/x")


@given(st.fractions())
def test_plan_round_trip(q):
    plan = build_plan({"type": "A2~1", "S": [1], "weights": [{"levi": [f"{q.numerator}/{q.denominator}"],
                                                                "complement": [3]}]})
    again = build_plan(json.loads(json.dumps(plan.to_dict())))
    assert again == plan
    assert again.weights[0]["levi"] == (Fraction(q),)
