"""Acceptance criteria, one test per criterion.

Each test records a single ``PASS``/``FAIL`` line, printed at the end of the
pytest run (and directly when this file is executed as a script).
"""
from functools import lru_cache

import pytest

from conftest import ACCEPTANCE_LINES
from intergraph import arith, igraph, presets
from intergraph.cli import run_graph
from intergraph.permgrp import LATTICE_CAP, all_subgroups, double_count_all, maximals
from intergraph.unitary3 import verify_proposition

BAND_PRESETS = ("a5", "a6", "a7", "psl2_7", "psl2_11", "psl2_13")


def record(n, ok, text):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {text}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


@lru_cache(maxsize=None)
def graph_for(name):
    L = all_subgroups(presets.load(name).group())
    mx = maximals(L)
    return L, igraph.build(L), mx


def test_criterion_1_witness_e1():
    rows = []
    ok = True
    for q in (3, 4, 5, 7, 8, 9, 11, 13):
        rep = verify_proposition(q, "e1")
        n = q**4 + q**2 + 1
        good = rep.passed and rep.data["pairs_checked"] == n
        ok &= good
        rows.append(f"q={q}:{rep.data['pairs_checked']}/{n}")
    ok &= rep.data["pairs_checked"] == 28_731  # last q is 13
    record(1, ok, "SU3(q) witnesses for X=span(e1), all Y, " + " ".join(rows))


def test_criterion_2_witness_all():
    expected = {3: 63 * 91, 4: 208 * 273, 5: 525 * 651}
    rows = []
    ok = True
    for q, n in expected.items():
        rep = verify_proposition(q, "all")
        good = rep.passed and rep.data["pairs_checked"] == n
        ok &= good
        rows.append(f"q={q}:{rep.data['x_points']}x{rep.data['points']}")
    record(2, ok, "witnesses for every nondegenerate X and every Y, " + " ".join(rows))


def test_criterion_3_band_and_oracle():
    rows = []
    ok = True
    for name in BAND_PRESETS:
        p = presets.load(name)
        _, g, mx = graph_for(name)
        d = igraph.diameter(g)
        band = igraph.check_theorem_band(g, p.simple, p.family == "alternating", mx, d)
        oracle = igraph.diameter_by_powers(g)
        good = band.passed and d.connected and 3 <= d.value <= 5 and oracle == d.value
        if p.family == "alternating":
            good &= d.value <= 4
        ok &= good
        rows.append(f"{p.name}={d.value}")
    record(3, ok, "connected, 3 <= diam <= 5, alternating <= 4, BFS == powers oracle: " + " ".join(rows))


def test_criterion_4_u3_3_diameter():
    rep = run_graph("u3_3", opt_in_large=True)
    d = rep.data.get("diameter")
    record(4, rep.passed and d == 3 and rep["expected_diameter"].verdict == "pass",
           f"diam of U3(3) intersection graph = {d} (expected 3; opt-in preset run)")


def test_criterion_5_dihedral_connectors():
    rows = []
    ok = True
    for name in BAND_PRESETS:
        _, g, mx = graph_for(name)
        rep = igraph.dihedral_connector_check(g, mx)
        ok &= rep.passed
        rows.append(f"{name}:{rep.data['pairs']}")
    record(5, ok, "involution pairs give proper dihedral connectors for all even maximal pairs, " + " ".join(rows))


def test_criterion_6_l2q_pointstab():
    rows = []
    ok = True
    for q in (7, 11, 19):
        rep = igraph.l2q_pointstab_check(q)
        ok &= rep.passed
        rows.append(f"q={q}:{rep.data['pairs']} pairs, |G_U|={rep.data['stabilizer_orders'][0]}")
    record(6, ok, "PSL(2,q) point stabilisers odd and pairwise nontrivial, " + "; ".join(rows))


def test_criterion_7_inequalities():
    c = arith.load_constants()
    u3 = arith.u3_ratio_check(3, 10_000)
    u5 = arith.u5_ratio_check(2, 10_000)
    m23 = arith.m23_check(c)
    bm = arith.bm_check(c)
    ok = all(r.passed for r in (u3, u5, m23, bm)) and len(bm.checks) == 4
    ok &= u3.data["q_values"] == 1279 and u5.data["q_values"] == 1280
    ok &= bm["index_NG_NM1_eq_22"].detail["value"] == 22
    record(7, ok, f"exact u3 ({u3.data['q_values']} q), u5 ({u5.data['q_values']} q), m23, bm "
                  f"(slack {bm.data['slack_rhs_over_lhs'].split('/')[0][:6]}...)")


def test_criterion_8_double_counting():
    rows = []
    ok = True
    for name in presets.available():
        p = presets.load(name)
        if p.order > 1_000:
            continue
        L, _, _ = graph_for(name) if p.simple else (all_subgroups(p.group()), None, None)
        rep = double_count_all(L)
        ok &= rep.passed and rep["identity"].verdict == "pass"
        rows.append(f"{name}:{rep.data['pairs_checked']}")
    record(8, ok, "containment-pair identity for every H <= M, " + " ".join(rows))


NOT_REPRODUCED = {
    "baby monster B, diam 5": int(arith.load_constants()["order_B"]),
    "U3(7), diam 4": arith.un_order(3, 7),
    "U7(2), diam 5": arith.un_order(7, 2),
}


def test_criterion_9_not_reproducible():
    # these diameters, and the distance-5 pair in B, need lattices far past the cap
    ok = all(order > LATTICE_CAP for order in NOT_REPRODUCED.values())
    names = "; ".join(f"{k} (|G|={v:.2e})" for k, v in NOT_REPRODUCED.items())
    record(9, ok, f"NOT reproduced at desk scale, group order above lattice cap {LATTICE_CAP}: {names}; "
                  "distance-5 pair in B also not reproduced. Substituted by criteria 4 and 7")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
