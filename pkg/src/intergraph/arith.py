"""Exact integer and rational checks of the order and index inequalities.

Everything here is ``int`` or :class:`fractions.Fraction`; no floats.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from math import gcd, prod

from .report import Report

M23_MAXIMAL_KEYS = (
    "m23_max_M22", "m23_max_L3_4_2", "m23_max_2_4_A7", "m23_max_A8",
    "m23_max_M11", "m23_max_2_4_3xA5_2", "m23_max_23_11",
)


class ConstantsError(ValueError):
    pass


@dataclass(frozen=True)
class AtlasConstants:
    values: dict[str, int]
    sources: dict[str, str]

    def __getitem__(self, name: str) -> int:
        try:
            return self.values[name]
        except KeyError:
            raise ConstantsError(f"missing constant {name!r}") from None

    @property
    def m23_maximal_orders(self) -> list[int]:
        return [self[k] for k in M23_MAXIMAL_KEYS]

    @property
    def order_L_bm(self) -> int:
        """|2^(1+22).Co2|."""
        return self["order_2_1_22"] * self["order_Co2"]


def exact_div(a: int, b: int, what: str = "") -> int:
    q, r = divmod(a, b)
    if r:
        raise ConstantsError(f"{b} does not divide {a}" + (f" ({what})" if what else ""))
    return q


def load_constants(path=None) -> AtlasConstants:
    """Load the constants file and re-verify its integrity invariants."""
    if path is None:
        text = (resources.files("intergraph") / "data" / "atlas_constants.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    rows = json.loads(text)["constants"]
    values, sources = {}, {}
    for row in rows:
        name = row["name"]
        if name in values:
            raise ConstantsError(f"duplicate constant {name}")
        v = int(row["value"])
        if v <= 0:
            raise ConstantsError(f"{name} must be positive")
        if "factors" in row:
            f = prod(int(p) ** e for p, e in row["factors"].items())
            if f != v:
                raise ConstantsError(f"{name}: factorisation gives {f}, value is {v}")
        values[name] = v
        sources[name] = row.get("source", "")
    c = AtlasConstants(values, sources)
    _verify_divisibility(c)
    return c


def _verify_divisibility(c: AtlasConstants):
    exact_div(c["order_B"], c["bm_M1"], "|M1| divides |B|")
    exact_div(c["order_Fi23"], c["bm_N_K_H"], "253 divides |Fi23|")
    exact_div(c["order_B"], c.order_L_bm, "|2^(1+22).Co2| divides |B|")
    exact_div(c["order_B"], c["order_Fi23"], "|Fi23| divides |B|")
    exact_div(c.order_L_bm, c["bm_N_L_H"], "|N_L(H)| divides |L|")
    for m in c.m23_maximal_orders:
        exact_div(c["order_M23"], m, "maximal subgroup order divides |M23|")
    exact_div(c["order_M23"], c["order_M22"], "|M22| divides |M23|")
    if c["bm_M1"] != c["bm_S"] * c["bm_H"]:
        raise ConstantsError("|M1| must equal 47 * 23 for shape 47:23")
    exact_div(c["bm_N_G_H"], c["bm_H"], "H is normal in N_G(H)")


def prime_powers(lo: int, hi: int) -> list[int]:
    """All prime powers q with lo <= q <= hi, by sieve."""
    if hi < 2:
        return []
    sieve = bytearray([1]) * (hi + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, int(hi**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    out = set()
    for p in range(2, hi + 1):
        if sieve[p]:
            q = p
            while q <= hi:
                if q >= lo:
                    out.add(q)
                q *= p
    return sorted(out)


def un_order(n: int, q: int) -> int:
    """|U_n(q)| = q^(n(n-1)/2) prod_{i=2..n} (q^i - (-1)^i) / gcd(n, q+1)."""
    num = q ** (n * (n - 1) // 2) * prod(q**i - (-1) ** i for i in range(2, n + 1))
    return exact_div(num, gcd(n, q + 1), "gcd(n, q+1) divides |SU_n(q)|")


def u3_ratio(q: int) -> Fraction:
    """|L|^2/|G| for G = U_3(q) and L the stabiliser of a totally singular point."""
    return Fraction(q**3 * (q**2 - 1), (q**3 + 1) * gcd(q + 1, 3))


def u3_ratio_check(q_lo: int = 3, q_hi: int = 10_000) -> Report:
    if q_lo <= 2:
        raise ValueError("u3 check needs q > 2")
    rep = Report(f"u3 ratio {q_lo}..{q_hi}")
    qs = prime_powers(q_lo, q_hi)
    bad_ratio, bad_chain = [], []
    ratios = []
    for q in qs:
        r = u3_ratio(q)
        lower = Fraction(q**3 * (q - 1), q**3 + 1)
        ratios.append(r)
        if not r > 1:
            bad_ratio.append(q)
        if not (r >= lower and lower > 1):
            bad_chain.append(q)
    rep.data.update({
        "q_values": len(qs),
        "q_min": qs[0] if qs else None,
        "q_max": qs[-1] if qs else None,
        "samples": {str(q): _frac(u3_ratio(q)) for q in qs[:4]},
        "monotone_increasing": all(a < b for a, b in zip(ratios, ratios[1:])),
    })
    rep.check("ratio_gt_1", not bad_ratio, failures=bad_ratio[:20])
    rep.check("bound_chain", not bad_chain, failures=bad_chain[:20])
    return rep


def u5_ratios(q: int) -> tuple[Fraction, Fraction]:
    """(totally singular, nondegenerate) values of |L|^2/|G| for G = U_5(q)."""
    g = gcd(q + 1, 5)
    ts = Fraction(q**10 * (q**2 - 1) ** 3 * (q**3 + 1), (q**4 - 1) * (q**5 + 1) * g)
    nd = Fraction(q**2 * (q + 1) * prod(q**i - (-1) ** i for i in range(1, 5)), (q**5 + 1) * g)
    return ts, nd


def u5_ratio_check(q_lo: int = 2, q_hi: int = 10_000) -> Report:
    rep = Report(f"u5 ratio {q_lo}..{q_hi}")
    qs = prime_powers(q_lo, q_hi)
    failures = {k: [] for k in ("ts_gt_1", "ts_chain", "nd_gt_1", "nd_chain")}
    ts_list, nd_list = [], []
    for q in qs:
        ts, nd = u5_ratios(q)
        ts_list.append(ts)
        nd_list.append(nd)
        if not ts > 1:
            failures["ts_gt_1"].append(q)
        ts_mid = Fraction(q**10, (q**4 - 1) * (q**5 + 1))
        ts_expanded = Fraction(q**10, q**9 - q**5 + q**4 - 1)
        if not (ts > ts_mid and ts_mid == ts_expanded and ts_expanded > 1):
            failures["ts_chain"].append(q)
        if not nd > 1:
            failures["nd_gt_1"].append(q)
        nd_mid = Fraction(q**2 * (q**4 - 1), q**5 + 1)
        nd_expanded = Fraction(q**6 - q**2, q**5 + 1)
        if not (nd > nd_mid and nd_mid == nd_expanded and nd_expanded > 1):
            failures["nd_chain"].append(q)
    rep.data.update({
        "q_values": len(qs),
        "q_min": qs[0] if qs else None,
        "q_max": qs[-1] if qs else None,
        "samples": {str(q): [_frac(x) for x in u5_ratios(q)] for q in qs[:3]},
        "monotone_increasing_ts": all(a < b for a, b in zip(ts_list, ts_list[1:])),
        "monotone_increasing_nd": all(a < b for a, b in zip(nd_list, nd_list[1:])),
    })
    rep.check("totally_singular_gt_1", not failures["ts_gt_1"], failures=failures["ts_gt_1"][:20])
    rep.check("totally_singular_chain", not failures["ts_chain"], failures=failures["ts_chain"][:20])
    rep.check("nondegenerate_gt_1", not failures["nd_gt_1"], failures=failures["nd_gt_1"][:20])
    rep.check("nondegenerate_chain", not failures["nd_chain"], failures=failures["nd_chain"][:20])
    return rep


def m23_check(c: AtlasConstants | None = None) -> Report:
    c = c or load_constants()
    G, L = c["order_M23"], c["order_M22"]
    M1 = c["m23_max_23_11"]
    rep = Report("m23")
    rep.data.update({"order_M23": str(G), "order_M22": str(L), "product_M1_L": str(M1 * L)})
    rep.check("M1_times_L_gt_G", M1 * L > G, lhs=str(M1 * L), rhs=str(G))
    rows = []
    ok = True
    for key in M23_MAXIMAL_KEYS:
        m = c[key]
        good = m * L > G
        ok &= good
        rows.append({"name": key, "order": m, "product": str(m * L), "pass": good})
    rep.check("every_M2_times_L_gt_G", ok, rows=rows)
    return rep


def bm_check(c: AtlasConstants | None = None) -> Report:
    c = c or load_constants()
    B, K = c["order_B"], c["order_Fi23"]
    L = c.order_L_bm
    M1 = c["bm_M1"]
    NG, NK, NL, NM1 = c["bm_N_G_H"], c["bm_N_K_H"], c["bm_N_L_H"], c["bm_N_M1_H"]
    rep = Report("bm")
    rep.check("K_squared_gt_G", K * K > B, lhs=str(K * K), rhs=str(B))
    idx_m1 = exact_div(NG, NM1, "|N_G(H):N_M1(H)|")
    rep.check("index_NG_NM1_eq_22", idx_m1 == c["bm_index_factor"] == 22, value=idx_m1)
    idx_k = exact_div(NG, NK, "|N_G(H):N_K(H)|")
    rep.check("index_NG_NK_eq_2", idx_k == 2, value=idx_k)
    k_idx = exact_div(K, NK, "|K:N_K(H)|")
    l_idx = exact_div(L, NL, "|L:N_L(H)|")
    s = c["bm_S"]
    lhs = s * (2 * k_idx + c["bm_index_factor"] * s + l_idx)
    g_m1 = exact_div(B, M1, "|G:M1|")
    rhs = Fraction(g_m1, c["bm_index_factor"])
    rep.data.update({
        "K_index_NK": str(k_idx),
        "L_index_NL": str(l_idx),
        "G_index_M1": str(g_m1),
        "U_bound": str(lhs),
        "rhs": _frac(rhs),
        "slack_rhs_over_lhs": _frac(rhs / lhs),
    })
    rep.check("U_bound_lt_G_M1_over_22", lhs < rhs, lhs=str(lhs), rhs=_frac(rhs))
    return rep


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
