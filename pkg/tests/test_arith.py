import json
from fractions import Fraction
from importlib import resources
from math import gcd

import pytest
from sympy import factorint, isprime

from intergraph import arith, presets


def test_prime_powers_against_sympy():
    pp = arith.prime_powers(1, 2000)
    brute = [n for n in range(2, 2001) if len(factorint(n)) == 1]
    assert pp == brute
    assert arith.prime_powers(3, 10_000)[0] == 3
    assert len(arith.prime_powers(3, 10_000)) == 1279
    assert len(arith.prime_powers(2, 10_000)) == 1280
    assert arith.prime_powers(5, 1) == []


@pytest.mark.parametrize("n,q,order", [(3, 3, 6048), (3, 2, 72), (5, 2, 13685760), (3, 4, 62400), (3, 5, 126000)])
def test_un_order(n, q, order):
    assert arith.un_order(n, q) == order


def test_un_order_matches_preset():
    assert arith.un_order(3, 3) == presets.load("u3_3").order


def test_u3_ratio_examples():
    assert arith.u3_ratio(3) == Fraction(54, 7)
    assert arith.u3_ratio(5) == Fraction(1000, 126)
    assert arith.u3_ratio(4) == Fraction(64 * 15, 65)


def test_u3_ratio_is_order_ratio():
    # stabiliser of a totally singular point: |L| = q^3 (q^2 - 1) / gcd(3, q+1)
    for q in (3, 4, 5, 7, 8, 9):
        L = Fraction(q**3 * (q * q - 1), gcd(3, q + 1))
        assert L * L / arith.un_order(3, q) == arith.u3_ratio(q)


def test_u5_ratio_examples():
    ts, nd = arith.u5_ratios(2)
    assert ts == Fraction(1024 * 27 * 9, 15 * 33)
    assert nd == Fraction(12 * 1215, 33)
    assert all(r > 1 for r in arith.u5_ratios(3))


def test_ratio_checks_full_range():
    u3 = arith.u3_ratio_check(3, 10_000)
    assert u3.passed and u3.data["q_values"] == 1279 and u3.data["q_max"] == 9973
    u5 = arith.u5_ratio_check(2, 10_000)
    assert u5.passed and u5.data["q_values"] == 1280
    assert [c.name for c in u5.checks] == [
        "totally_singular_gt_1", "totally_singular_chain", "nondegenerate_gt_1", "nondegenerate_chain",
    ]


def test_u3_check_rejects_q2():
    with pytest.raises(ValueError):
        arith.u3_ratio_check(2, 10)


def test_constants_load_and_factor():
    c = arith.load_constants()
    for name in ("order_B", "order_Fi23", "order_Co2", "order_M23", "order_M22"):
        f = factorint(c[name])
        assert all(isprime(p) for p in f)
    assert c["order_M23"] == 10200960 and c["order_M22"] == 443520
    assert c["bm_M1"] == 47 * 23
    assert c.order_L_bm == 2**23 * c["order_Co2"]
    assert sorted(c.m23_maximal_orders, reverse=True)[0] == c["order_M22"]
    with pytest.raises(arith.ConstantsError):
        c["missing"]


def _tampered(tmp_path, name, value):
    data = json.loads((resources.files("intergraph") / "data" / "atlas_constants.json").read_text())
    for row in data["constants"]:
        if row["name"] == name:
            row["value"] = str(value)
            row.pop("factors", None)
    p = tmp_path / "c.json"
    p.write_text(json.dumps(data))
    return p


@pytest.mark.parametrize("name,value", [("bm_M1", 1082), ("bm_N_K_H", 254), ("order_M22", 443521), ("bm_S", 43)])
def test_constants_tamper_detected(tmp_path, name, value):
    with pytest.raises(arith.ConstantsError):
        arith.load_constants(_tampered(tmp_path, name, value))


def test_factor_mismatch_detected(tmp_path):
    data = json.loads((resources.files("intergraph") / "data" / "atlas_constants.json").read_text())
    data["constants"][0]["value"] = str(int(data["constants"][0]["value"]) * 2)
    p = tmp_path / "c.json"
    p.write_text(json.dumps(data))
    with pytest.raises(arith.ConstantsError):
        arith.load_constants(p)


def test_exact_div():
    assert arith.exact_div(506, 23) == 22
    assert arith.exact_div(506, 253) == 2
    with pytest.raises(arith.ConstantsError):
        arith.exact_div(10, 3)


def test_m23_check():
    rep = arith.m23_check()
    assert rep.passed
    assert rep.data["product_M1_L"] == str(253 * 443520)
    assert len(rep["every_M2_times_L_gt_G"].detail["rows"]) == 7


def test_bm_check():
    rep = arith.bm_check()
    assert rep.passed and len(rep.checks) == 4
    assert rep["index_NG_NM1_eq_22"].detail["value"] == 22
    assert rep["index_NG_NK_eq_2"].detail["value"] == 2
    num, den = map(int, rep.data["slack_rhs_over_lhs"].split("/"))
    assert Fraction(num, den) > 1


def test_bm_check_fails_on_bad_constants():
    # |Fi23| too small breaks K^2 > |G| while keeping divisibility intact
    c = arith.load_constants()
    bad = arith.AtlasConstants({**c.values, "order_Fi23": 253 * 23}, c.sources)
    rep = arith.bm_check(bad)
    assert rep["K_squared_gt_G"].verdict == "fail"
