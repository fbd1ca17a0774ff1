"""Compare the compiled and pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--presets a5 a6 a7] [--repeat 3]

Each backend runs in a fresh subprocess (the backend is fixed at import
time), timing lattice enumeration and the all-pairs BFS diameter.
"""
import argparse
import json
import os
import subprocess
import sys

CHILD = r"""
import json, sys, time
from intergraph import igraph, kernels, presets
from intergraph.permgrp import all_subgroups
name, repeat = sys.argv[1], int(sys.argv[2])
G = presets.load(name).group()
G.mult
best = {"lattice": float("inf"), "bfs": float("inf")}
for _ in range(repeat):
    t0 = time.perf_counter()
    L = all_subgroups(G)
    t1 = time.perf_counter()
    g = igraph.build(L)
    t2 = time.perf_counter()
    d = igraph.diameter(g)
    t3 = time.perf_counter()
    best["lattice"] = min(best["lattice"], t1 - t0)
    best["bfs"] = min(best["bfs"], t3 - t2)
print(json.dumps({"backend": kernels.BACKEND, "subgroups": len(L), "diameter": d.value, **best}))
"""


def run(name, repeat, pure):
    env = dict(os.environ)
    env.pop("INTERGRAPH_PURE_PYTHON", None)
    if pure:
        env["INTERGRAPH_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", CHILD, name, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--presets", nargs="+", default=["a5", "psl2_11", "a6", "psl2_13", "a7"])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'preset':<10}{'backend':<9}{'subgroups':>10}{'lattice s':>11}{'bfs s':>9}{'speedup':>9}")
    for name in args.presets:
        fast = run(name, args.repeat, pure=False)
        slow = run(name, args.repeat, pure=True)
        assert (fast["subgroups"], fast["diameter"]) == (slow["subgroups"], slow["diameter"])
        for r in (fast, slow):
            total = slow["lattice"] + slow["bfs"]
            sp = total / (r["lattice"] + r["bfs"])
            print(f"{name:<10}{r['backend']:<9}{r['subgroups']:>10}{r['lattice']:>11.3f}{r['bfs']:>9.3f}{sp:>8.1f}x")


if __name__ == "__main__":
    main()
