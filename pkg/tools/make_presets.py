"""Regenerate the shipped preset files from natural actions.

PSL(2, p) acts on the projective line {0, ..., p-1, inf}; U3(3) is SU_3(3)
acting on the 28 isotropic points of PG(2, 9).
"""
from pathlib import Path

from intergraph.permgrp import Permutation, generate
from intergraph.unitary3 import (
    _pt, _vecmat, enumerate_points, is_nondegenerate, move_to_e1, normalize, Vector3,
)
from intergraph.gfq import quadratic_field

OUT = Path(__file__).resolve().parents[1] / "src" / "intergraph" / "presets"


def write(name, degree, order, gens, simple, family, extra=()):
    lines = [f"degree {degree}", f"order {order}", f"name {name}", f"simple {'yes' if simple else 'no'}", f"family {family}"]
    lines += list(extra)
    lines += [str(g) for g in gens]
    (OUT / f"{name.lower()}.txt").write_text("\n".join(lines) + "\n")


def psl2(p):
    inf = p

    def perm(f):
        return Permutation([f(x) for x in range(p + 1)])

    prim = next(g for g in range(2, p) if all(pow(g, (p - 1) // r, p) != 1 for r in range(2, p) if (p - 1) % r == 0 and all(r % d for d in range(2, r))))
    t = prim * prim % p
    shift = perm(lambda x: inf if x == inf else (x + 1) % p)
    scale = perm(lambda x: inf if x == inf else t * x % p)

    def inv_neg(x):
        if x == inf:
            return 0
        if x == 0:
            return inf
        return (-pow(x, p - 2, p)) % p

    flip = perm(inv_neg)
    return [shift, scale, flip]


def u3_3():
    F = quadratic_field(3)
    iso = [P for P in enumerate_points(F) if not is_nondegenerate(P)]
    pos = {P.rep.c: i for i, P in enumerate(iso)}
    mats = [move_to_e1(P) for P in enumerate_points(F) if is_nondegenerate(P)]

    def action(M):
        return Permutation([pos[normalize(Vector3._raw(F, _vecmat(F, P.rep.c, M.e))).c] for P in iso])

    gens = []
    order = 1
    for M in mats:
        g = action(M)
        if g.is_identity() or g in gens:
            continue
        G = generate(gens + [g])
        if G.order > order:
            gens.append(g)
            order = G.order
        if order == 6048:
            break
    return gens


if __name__ == "__main__":
    for p in (7, 11, 13, 19):
        gens = psl2(p)
        G = generate(gens)
        assert G.order == p * (p * p - 1) // 2
        write(f"PSL2_{p}", p + 1, G.order, gens, True, "psl2", [f"q {p}"] + (["opt_in yes"] if p == 19 else []))
    gens = u3_3()
    write("U3_3", 28, 6048, gens, True, "unitary", ["opt_in yes", "diameter 3"])
