import pathlib

import pytest

import dhilb

ROOT = pathlib.Path(__file__).resolve().parents[2]


def test_version_and_schema():
    assert dhilb.version() == "0.1.0"
    assert dhilb.REPORT_SCHEMA == "dhilb.report/1"


def test_truncation_of_conic():
    # dim of degree-d forms on a conic is 2d + 1
    assert dhilb.truncation_dims(2, ["x0*x2 - x1^2"], 2, 4) == {2: 5, 3: 7, 4: 9}


def test_tangent_of_point_in_p2():
    r = dhilb.tangent(2, [], ["x1", "x2"], 1, 4, m=2, n_max=5)
    assert r["dims"] == [2, 0, 0]
    assert r["classical_dim"] == 2
    assert r["euler_ok"]


def test_prime_field_agrees_on_point():
    r = dhilb.tangent(2, [], ["x1", "x2"], 1, 4, m=1, field="p:1000003")
    assert r["dims"] == [2, 0]


def test_oracle_plane_cubic():
    # normal bundle O_E(3) of a plane cubic: h^0 = 9, h^1 = 0
    assert dhilb.ci_cohomology(2, ["x0^3 + x1^3 + x2^3"]) == [9, 0, 0]
    assert dhilb.ci_cohomology(2, ["x0^3 + x1^3 + x2^3"], e=0) == [1, 1, 0]


def test_errors_map_to_exceptions():
    with pytest.raises(dhilb.ValidationError):
        dhilb.truncation_dims(2, ["x0 + x1^2"], 1, 3)
    with pytest.raises(dhilb.DhilbError):
        dhilb.ci_cohomology(2, ["x0", "x0"])


def test_scenario_matches_golden_exit_codes():
    report, code = dhilb.run_scenario_file(ROOT / "scenarios" / "point_p2.yaml")
    assert code == 0 and report["status"] == "ok"
    report, code = dhilb.run_scenario_file(ROOT / "scenarios" / "error_budget.yaml")
    assert code == 2 and report["error"]["kind"] == "budget"


def test_scenario_string_errors_carry_position():
    report, code = dhilb.run_scenario("task: truncate\nbogus: 1\n")
    assert code == 1
    assert report["status"] == "error"
    assert "<string>:" in report["error"]["message"]
