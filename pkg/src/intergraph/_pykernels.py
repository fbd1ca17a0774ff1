"""Pure-Python kernels, used when the compiled extension is unavailable.

Same signatures and results as ``_ckernels``.
"""
import numpy as np


def coset_closure(mult, sub, gens):
    """Elements of <H, gens> for a subgroup H given by its element indices.

    Works coset by coset: the result is a union of right cosets H*r, and it
    is closed once every coset representative times every generator lands
    inside it.
    """
    n = mult.shape[0]
    sub = np.asarray(sub, dtype=np.int32)
    member = np.zeros(n, dtype=bool)
    member[sub] = True
    blocks = [sub]
    reps = [int(sub[0])]
    gens = [int(g) for g in gens]
    i = 0
    while i < len(reps):
        r = reps[i]
        for g in gens:
            y = int(mult[r, g])
            if not member[y]:
                coset = mult[sub, y]
                member[coset] = True
                blocks.append(coset)
                reps.append(y)
        i += 1
    return np.concatenate(blocks).astype(np.int32)


def rows_to_ints(adj):
    return [int.from_bytes(row.tobytes(), "little") for row in adj]


def bfs_sweep(adj, sources):
    """Eccentricity, smallest farthest vertex and reach count per source."""
    rows = rows_to_ints(np.ascontiguousarray(adj))
    ns = len(sources)
    ecc = np.zeros(ns, dtype=np.int32)
    far = np.zeros(ns, dtype=np.int32)
    reach = np.zeros(ns, dtype=np.int32)
    for si, s in enumerate(sources):
        s = int(s)
        visited = front = 1 << s
        level, count = 0, 1
        while True:
            nxt = 0
            f = front
            while f:
                low = f & -f
                nxt |= rows[low.bit_length() - 1]
                f ^= low
            nxt &= ~visited
            if not nxt:
                break
            visited |= nxt
            level += 1
            count += nxt.bit_count()
            front = nxt
        ecc[si] = level
        reach[si] = count
        far[si] = (front & -front).bit_length() - 1
    return ecc, far, reach
