import json

import pytest

from conftest import registry_run
from zassenhaus.verify import (
    CHECK_IDS,
    REGISTRY,
    CheckResult,
    UnsupportedError,
    overall_status,
    report,
    report_json,
    run_checks,
)

EXPECTED_IDS = (
    "alg.jacobi alg.oracle alg.LE alg.simple env.dim env.closure env.cent torus.spow torus.t0 deco.sum "
    "borel.radu mod.rep1 mod.rep2 irr.class irr.selfdual borel.general torus.Lfix mod.free mod.aug "
    "pim.indec pim.dim pim.count pim.head bound.eq"
).split()


def by_id(results):
    return {r.id: r for r in results}


def test_registry_is_exactly_the_expected_list():
    assert list(CHECK_IDS) == EXPECTED_IDS
    assert all(spec.claim for spec in REGISTRY)


def test_n1_full_run():
    res = by_id(registry_run(1))
    assert res["alg.simple"].status == "skip"
    assert all(r.status == "pass" for k, r in res.items() if k != "alg.simple")
    assert set(res["pim.dim"].data["dims"].values()) == {2}
    assert res["borel.general"].data["condition_i"] == "omitted for n = 1"


def test_n2_full_run():
    res = by_id(registry_run(2))
    assert all(r.status == "pass" for r in res.values())
    assert res["env.dim"].data["dim_der"] == 5
    c = res["pim.count"].data
    assert c["characters"] == 4
    assert (c["dim_u"], c["dim_P_F"], c["dim_L"], c["dim_P_L"]) == (32, 8, 3, 8)
    assert set(res["pim.dim"].data["dims"].values()) == {8}
    assert res["pim.head"].data["heads"] == {"00": "F", "01": "L", "10": "L", "11": "L"}


def test_n4_algebra_checks_pass_module_checks_skip():
    res = run_checks(4)
    for r in res:
        spec = next(s for s in REGISTRY if s.id == r.id)
        assert r.status == ("skip" if spec.needs_modules else "pass"), r.id


def test_filter_keeps_registry_order():
    res = run_checks(2, ids=["pim.dim", "alg.jacobi"])
    assert [r.id for r in res] == ["alg.jacobi", "pim.dim"]


@pytest.mark.parametrize(
    "kwargs",
    [
        {"n": 9},
        {"n": 0},
        {"n": 2, "ids": ["nope"]},
        {"n": 4, "ids": ["pim.dim"]},
        {"n": 2, "m": 3},
        {"n": 2, "p": 3},
    ],
)
def test_invalid_requests(kwargs):
    with pytest.raises(UnsupportedError):
        run_checks(**kwargs)


def test_larger_field_also_passes():
    res = run_checks(2, m=4, ids=["torus.t0", "pim.indec", "pim.head"])
    assert all(r.status == "pass" for r in res)


def test_report_is_deterministic():
    a = report_json(report(run_checks(2, seed=3), 2, 2, 3))
    b = report_json(report(run_checks(2, seed=3), 2, 2, 3))
    assert a == b
    js = json.loads(a)
    assert js["meta"] == {"m": 2, "modulus": "111", "n": 2, "p": 2, "seed": 3, "version": js["meta"]["version"]}
    assert [c["id"] for c in js["checks"]] == EXPECTED_IDS
    assert "millis" not in js["checks"][0]


def test_overall_status():
    mk = lambda s: CheckResult("x", s, "")  # noqa: E731
    assert overall_status([mk("pass"), mk("skip")]) == 0
    assert overall_status([mk("pass"), mk("fail"), mk("needs-extension")]) == 1
    assert overall_status([mk("pass"), mk("needs-extension")]) == 3
