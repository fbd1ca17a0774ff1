"""Hermitian geometry on GF(q^2)^3 and stabiliser witnesses in SU_3(q).

The form is ``herm(u, v) = sum(u_i * v_i**q)`` (identity Gram matrix).
Matrices act on row vectors: the image of ``v`` under ``A`` is ``v @ A``.
With this convention the witness matrices below stabilise the required
lines exactly as written.

Vectors and matrices hold integer field codes internally (see
:mod:`intergraph.gfq`) and expose :class:`FieldElement` entries on access.
"""
from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from itertools import product

from .gfq import Field, FieldElement, FieldError, prime_power, quadratic_field
from .report import Report

WITNESS_Q_CAP = int(os.environ.get("INTERGRAPH_Q_CAP", "64"))

CASE_ZERO = "zero_coordinate"
CASE_NORM_MINUS_ONE = "norm_minus_one"
CASE_GENERIC = "generic"


class Vector3:
    __slots__ = ("field", "c")

    def __init__(self, field: Field, entries):
        self.field = field
        self.c = tuple(field._own(e) for e in entries)
        if len(self.c) != 3:
            raise ValueError("Vector3 needs exactly 3 entries")

    @classmethod
    def _raw(cls, field, codes):
        v = cls.__new__(cls)
        v.field = field
        v.c = tuple(codes)
        return v

    @classmethod
    def from_codes(cls, field: Field, codes) -> Vector3:
        for x in codes:
            if not 0 <= x < field.order:
                raise FieldError(f"code {x} out of range")
        return cls._raw(field, codes)

    def __getitem__(self, i) -> FieldElement:
        return FieldElement(self.field, self.c[i])

    def __iter__(self):
        return (FieldElement(self.field, x) for x in self.c)

    def __eq__(self, other):
        return isinstance(other, Vector3) and self.field is other.field and self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def is_zero(self) -> bool:
        return not any(self.c)

    def scale(self, s: FieldElement) -> Vector3:
        F = self.field
        s = F._own(s)
        return Vector3._raw(F, [F.mul_c(s, x) for x in self.c])

    def __matmul__(self, A: Matrix3) -> Vector3:
        if A.field is not self.field:
            raise FieldError("operands from different fields")
        return Vector3._raw(self.field, _vecmat(self.field, self.c, A.e))

    def __repr__(self):
        return f"Vector3({[list(x.coeffs) for x in self]})"


class Matrix3:
    """3x3 matrix over GF(q^2), row-major tuple of 9 codes."""

    __slots__ = ("field", "e")

    def __init__(self, field: Field, rows):
        self.field = field
        flat = [x for row in rows for x in row]
        if len(flat) != 9:
            raise ValueError("Matrix3 needs 3 rows of 3 entries")
        self.e = tuple(field._own(x) for x in flat)

    @classmethod
    def _raw(cls, field, codes):
        m = cls.__new__(cls)
        m.field = field
        m.e = tuple(codes)
        return m

    @classmethod
    def identity(cls, field: Field) -> Matrix3:
        return cls._raw(field, (1, 0, 0, 0, 1, 0, 0, 0, 1))

    @classmethod
    def diag(cls, field: Field, a, b, c) -> Matrix3:
        a, b, c = (field._own(x) for x in (a, b, c))
        return cls._raw(field, (a, 0, 0, 0, b, 0, 0, 0, c))

    def __getitem__(self, ij) -> FieldElement:
        i, j = ij
        return FieldElement(self.field, self.e[3 * i + j])

    def rows(self) -> list[list[FieldElement]]:
        return [[self[i, j] for j in range(3)] for i in range(3)]

    def __matmul__(self, other: Matrix3) -> Matrix3:
        if other.field is not self.field:
            raise FieldError("operands from different fields")
        return Matrix3._raw(self.field, _matmul(self.field, self.e, other.e))

    def __eq__(self, other):
        return isinstance(other, Matrix3) and self.field is other.field and self.e == other.e

    def __hash__(self):
        return hash(self.e)

    def conj_transpose(self) -> Matrix3:
        F = self.field
        e = self.e
        return Matrix3._raw(F, [F.frob_c(e[3 * j + i]) for i in range(3) for j in range(3)])

    def det(self) -> FieldElement:
        return FieldElement(self.field, _det(self.field, self.e))

    def inverse(self) -> Matrix3:
        F = self.field
        d = _det(F, self.e)
        if d == 0:
            raise ZeroDivisionError("singular matrix")
        di = F.inv_c(d)
        e = self.e
        mul, sub = F.mul_c, F.sub_c

        def cof(r0, r1, c0, c1):
            return sub(mul(e[3 * r0 + c0], e[3 * r1 + c1]), mul(e[3 * r0 + c1], e[3 * r1 + c0]))

        # adjugate = transpose of cofactor matrix
        adj = [
            cof(1, 2, 1, 2), cof(0, 2, 2, 1), cof(0, 1, 1, 2),
            cof(1, 2, 2, 0), cof(0, 2, 0, 2), cof(0, 1, 2, 0),
            cof(1, 2, 0, 1), cof(0, 2, 1, 0), cof(0, 1, 0, 1),
        ]
        return Matrix3._raw(F, [mul(di, x) for x in adj])

    def to_json(self) -> list[list[list[int]]]:
        """Entries as coefficient arrays (lowest degree first)."""
        F = self.field
        return [[list(F._digits[self.e[3 * i + j]]) for j in range(3)] for i in range(3)]

    def __repr__(self):
        return f"Matrix3({self.to_json()})"


def _vecmat(F: Field, v, e):
    mul, add = F.mul_c, F.add_c
    return tuple(
        add(add(mul(v[0], e[j]), mul(v[1], e[3 + j])), mul(v[2], e[6 + j])) for j in range(3)
    )


def _matmul(F: Field, a, b):
    mul, add = F.mul_c, F.add_c
    out = []
    for i in range(3):
        a0, a1, a2 = a[3 * i], a[3 * i + 1], a[3 * i + 2]
        for j in range(3):
            out.append(add(add(mul(a0, b[j]), mul(a1, b[3 + j])), mul(a2, b[6 + j])))
    return out


def _det(F: Field, e):
    mul, add, sub = F.mul_c, F.add_c, F.sub_c
    t0 = mul(e[0], sub(mul(e[4], e[8]), mul(e[5], e[7])))
    t1 = mul(e[1], sub(mul(e[3], e[8]), mul(e[5], e[6])))
    t2 = mul(e[2], sub(mul(e[3], e[7]), mul(e[4], e[6])))
    return add(sub(t0, t1), t2)


class ProjPoint:
    """A 1-dimensional subspace, represented with first nonzero entry 1."""

    __slots__ = ("rep",)

    def __init__(self, v: Vector3):
        if v.is_zero():
            raise ValueError("zero vector spans no point")
        self.rep = normalize(v)

    @classmethod
    def span(cls, field: Field, *entries) -> ProjPoint:
        return cls(Vector3(field, entries))

    @property
    def field(self) -> Field:
        return self.rep.field

    def __eq__(self, other):
        return isinstance(other, ProjPoint) and self.rep == other.rep

    def __hash__(self):
        return hash(self.rep)

    def __repr__(self):
        return f"ProjPoint({[list(x.coeffs) for x in self.rep]})"


def normalize(v: Vector3) -> Vector3:
    F = v.field
    lead = next(x for x in v.c if x)
    if lead == 1:
        return v
    inv = F.inv_c(lead)
    return Vector3._raw(F, [F.mul_c(inv, x) for x in v.c])


def herm(u: Vector3, v: Vector3) -> FieldElement:
    if u.field is not v.field:
        raise FieldError("vectors from different fields")
    return FieldElement(u.field, _herm(u.field, u.c, v.c))


def _herm(F: Field, u, v):
    mul, add, fr = F.mul_c, F.add_c, F.frob_c
    return add(add(mul(u[0], fr(v[0])), mul(u[1], fr(v[1]))), mul(u[2], fr(v[2])))


def is_special_unitary(A: Matrix3) -> bool:
    F = A.field
    if _det(F, A.e) != 1:
        return False
    return _matmul(F, A.e, A.conj_transpose().e) == [1, 0, 0, 0, 1, 0, 0, 0, 1]


def is_scalar(A: Matrix3) -> bool:
    e = A.e
    return e[1] == e[2] == e[3] == e[5] == e[6] == e[7] == 0 and e[0] == e[4] == e[8]


def is_nondegenerate(X: ProjPoint) -> bool:
    return _herm(X.field, X.rep.c, X.rep.c) != 0


def enumerate_points(field: Field) -> list[ProjPoint]:
    """All q^4 + q^2 + 1 points of PG(2, q^2), canonical representatives."""
    field._require_quadratic()
    n = field.order
    pts = []
    for b, c in product(range(n), repeat=2):
        pts.append(_pt(field, (1, b, c)))
    for c in range(n):
        pts.append(_pt(field, (0, 1, c)))
    pts.append(_pt(field, (0, 0, 1)))
    return pts


def _pt(field, codes) -> ProjPoint:
    P = ProjPoint.__new__(ProjPoint)
    P.rep = Vector3._raw(field, codes)
    return P


def stabilizes(A: Matrix3, P: ProjPoint) -> bool:
    F = A.field
    if _det(F, A.e) == 0:
        raise ValueError("singular matrix cannot act on points")
    img = _vecmat(F, P.rep.c, A.e)
    lead = next(x for x in img if x)
    inv = F.inv_c(lead)
    return tuple(F.mul_c(inv, x) for x in img) == P.rep.c


def _norm_one_scale(F: Field, h: int) -> int:
    """A scalar s with s^(q+1) * h == 1, for h a nonzero element of GF(q)."""
    q = F.q
    target = F.inv_c(h)
    lg = F._log[target]
    if lg % (q + 1):
        raise AssertionError("Hermitian norm outside GF(q)")
    return F._exp[lg // (q + 1)]


def move_to_e1(X: ProjPoint) -> Matrix3:
    """A special unitary M with ``X.rep @ M`` in span(e1).

    Builds an orthonormal basis u1, u2, u3 with u1 spanning X; the matrix with
    columns conj(u_i) sends u1 to e1.  The determinant (of norm 1) is then
    absorbed into the third column.
    """
    F = X.field
    q = F._require_quadratic()
    if q <= 2:
        raise FieldError("move_to_e1 requires q > 2")
    if not is_nondegenerate(X):
        raise ValueError("point is degenerate (isotropic)")
    if X.rep.c == (1, 0, 0):
        return Matrix3.identity(F)
    mul, sub, fr = F.mul_c, F.sub_c, F.frob_c
    x = X.rep.c
    s = _norm_one_scale(F, _herm(F, x, x))
    u1 = tuple(mul(s, v) for v in x)

    def perp(v, u):
        # v - herm(v, u) u, for herm(u, u) == 1
        h = _herm(F, v, u)
        return tuple(sub(a, mul(h, b)) for a, b in zip(v, u))

    # u1^perp is a nondegenerate plane; find a non-isotropic vector in it
    ws = [perp(e, u1) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    w1 = next(w for w in ws if any(w))
    w2 = next(w for w in ws if any(w) and not _is_parallel(F, w1, w))
    cands = [tuple(F.add_c(a, mul(t, b)) for a, b in zip(w1, w2)) for t in range(F.order)] + [w2]
    u2 = next((v for v in cands if _herm(F, v, v)), None)
    if u2 is None:
        raise AssertionError("no anisotropic vector in a nondegenerate plane")
    u2 = tuple(mul(_norm_one_scale(F, _herm(F, u2, u2)), v) for v in u2)
    # cross(conj u1, conj u2) is orthogonal to u1 and u2
    a, b = [fr(v) for v in u1], [fr(v) for v in u2]
    cross = (
        sub(mul(a[1], b[2]), mul(a[2], b[1])),
        sub(mul(a[2], b[0]), mul(a[0], b[2])),
        sub(mul(a[0], b[1]), mul(a[1], b[0])),
    )
    u3 = tuple(mul(_norm_one_scale(F, _herm(F, cross, cross)), v) for v in cross)
    # M[i][j] = conj(u_j)[i]
    cols = [[fr(v) for v in u] for u in (u1, u2, u3)]
    M = [cols[j][i] for i in range(3) for j in range(3)]
    d = _det(F, M)
    dinv = F.inv_c(d)
    for i in range(3):
        M[3 * i + 2] = mul(M[3 * i + 2], dinv)
    return Matrix3._raw(F, M)


def _is_parallel(F, u, v):
    mul, sub = F.mul_c, F.sub_c
    return not any(sub(mul(u[i], v[j]), mul(u[j], v[i])) for i, j in ((0, 1), (0, 2), (1, 2)))


def standard_witness(field: Field, y, lam: int | None = None, beta: int | None = None):
    """Witness fixing span(e1) and span(y), y given as a code triple.

    Returns ``(matrix, case)``.
    """
    F = field
    mul, add, sub, inv, fr = F.mul_c, F.add_c, F.sub_c, F.inv_c, F.frob_c
    if lam is None:
        lam = F.lambda_element().code
    a, b, c = y
    if a == 0 or b == 0 or c == 0:
        lam_m2 = inv(mul(lam, lam))
        # two zero coordinates: any arrangement works, use the c = 0 form
        if c == 0 or (a, b, c).count(0) == 2:
            d = (lam, lam, lam_m2)
        elif b == 0:
            d = (lam, lam_m2, lam)
        else:
            d = (lam_m2, lam, lam)
        return Matrix3._raw(F, (d[0], 0, 0, 0, d[1], 0, 0, 0, d[2])), CASE_ZERO
    mu = mul(inv(b), c)
    nmu = F.pow_c(mu, F.q + 1)
    minus_one = F.neg_c(1)
    mu_inv = inv(mu)
    if nmu == minus_one:
        if beta is None:
            beta = F.solve_trace(F.element(2 % F.p), [F.one]).code
        bq = fr(beta)
        rows = (
            1, 0, 0,
            0, beta, mul(mu, sub(1, bq)),
            0, mul(mu_inv, sub(1, beta)), bq,
        )
        return Matrix3._raw(F, rows), CASE_NORM_MINUS_ONE
    lam3 = F.pow_c(lam, 3)
    gamma = mul(mul(inv(mul(lam, lam)), add(lam3, nmu)), inv(add(1, nmu)))
    rows = (
        lam, 0, 0,
        0, gamma, mul(mu, sub(lam, fr(mul(gamma, lam)))),
        0, mul(mu_inv, sub(lam, gamma)), fr(mul(lam, gamma)),
    )
    return Matrix3._raw(F, rows), CASE_GENERIC


def _check_q(field: Field):
    q = field._require_quadratic()
    if q <= 2:
        raise FieldError("the stabiliser witnesses need q > 2")
    return q


def witness(X: ProjPoint, Y: ProjPoint, field: Field | None = None) -> Matrix3:
    """A non-scalar matrix of SU_3(q) stabilising both X and Y."""
    return witness_with_case(X, Y, field)[0]


def witness_with_case(X: ProjPoint, Y: ProjPoint, field: Field | None = None, M: Matrix3 | None = None):
    F = field or X.field
    _check_q(F)
    if not is_nondegenerate(X):
        raise ValueError("X must be nondegenerate")
    if M is None:
        M = move_to_e1(X)
    if M.e == (1, 0, 0, 0, 1, 0, 0, 0, 1):
        W, case = standard_witness(F, Y.rep.c)
        return W, case
    y = _vecmat(F, Y.rep.c, M.e)
    W, case = standard_witness(F, y)
    Minv = M.conj_transpose()
    return Matrix3._raw(F, _matmul(F, _matmul(F, M.e, W.e), Minv.e)), case


def check_witness(A: Matrix3, X: ProjPoint, Y: ProjPoint) -> list[str]:
    """Names of the violated post-conditions (empty when A is a valid witness)."""
    bad = []
    if not is_special_unitary(A):
        bad.append("special_unitary")
    if is_scalar(A):
        bad.append("non_scalar")
    if _det(A.field, A.e) == 0:
        return bad + ["stabilizes_X", "stabilizes_Y"]
    if not stabilizes(A, X):
        bad.append("stabilizes_X")
    if not stabilizes(A, Y):
        bad.append("stabilizes_Y")
    return bad


def _run_block(q: int, xs: list[tuple[int, int, int]]):
    F = quadratic_field(q)
    points = enumerate_points(F)
    counts = Counter()
    failures = []
    checked = 0
    for xc in xs:
        X = _pt(F, xc)
        M = move_to_e1(X)
        if not is_special_unitary(M) or not stabilizes_to_e1(M, X):
            failures.append({"X": list(xc), "Y": None, "violations": ["move_to_e1"], "matrix": M.to_json()})
            continue
        for Y in points:
            A, case = witness_with_case(X, Y, F, M)
            counts[case] += 1
            checked += 1
            bad = check_witness(A, X, Y)
            if bad:
                failures.append({
                    "X": [list(F._digits[v]) for v in xc],
                    "Y": [list(F._digits[v]) for v in Y.rep.c],
                    "case": case,
                    "violations": bad,
                    "matrix": A.to_json(),
                })
    return checked, counts, failures


def stabilizes_to_e1(M: Matrix3, X: ProjPoint) -> bool:
    img = _vecmat(M.field, X.rep.c, M.e)
    return img[0] != 0 and img[1] == 0 and img[2] == 0


def verify_proposition(q: int, mode: str = "e1", workers: int = 1) -> Report:
    """Run the witness construction over every point pair and check it.

    ``mode="e1"`` fixes X = span(e1); ``mode="all"`` ranges over every
    nondegenerate X.
    """
    if prime_power(q) is None:
        raise FieldError(f"{q} is not a prime power")
    if q <= 2:
        raise FieldError("q must exceed 2")
    if q > WITNESS_Q_CAP:
        raise FieldError(f"q = {q} exceeds the witness cap {WITNESS_Q_CAP}")
    if mode not in ("e1", "all"):
        raise ValueError(f"unknown mode {mode!r}")
    F = quadratic_field(q)
    points = enumerate_points(F)
    if mode == "e1":
        xs = [(1, 0, 0)]
    else:
        xs = [P.rep.c for P in points if is_nondegenerate(P)]

    if workers > 1 and len(xs) > 1:
        chunks = [xs[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_run_block, [q] * len(chunks), chunks))
    else:
        parts = [_run_block(q, xs)]
    checked = sum(p[0] for p in parts)
    counts = Counter()
    failures = []
    for _, c, f in parts:
        counts.update(c)
        failures.extend(f)
    failures.sort(key=lambda r: (r["X"], r["Y"] or []))

    rep = Report(f"witness q={q}")
    rep.data.update({
        "q": q,
        "mode": mode,
        "points": len(points),
        "x_points": len(xs),
        "pairs_checked": checked,
        "case_counts": {k: counts.get(k, 0) for k in (CASE_ZERO, CASE_NORM_MINUS_ONE, CASE_GENERIC)},
    })
    rep.check("witness_postconditions", not failures, failures=failures[:50], failure_count=len(failures))
    rep.check("pair_count", checked == len(xs) * len(points), expected=len(xs) * len(points), got=checked)
    return rep
