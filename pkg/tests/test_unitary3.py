import random

import pytest

from intergraph.gfq import FieldError, quadratic_field
from intergraph.unitary3 import (
    CASE_GENERIC,
    CASE_NORM_MINUS_ONE,
    CASE_ZERO,
    Matrix3,
    ProjPoint,
    Vector3,
    check_witness,
    enumerate_points,
    herm,
    is_nondegenerate,
    is_scalar,
    is_special_unitary,
    move_to_e1,
    stabilizes,
    standard_witness,
    verify_proposition,
    witness,
    witness_with_case,
)


# -- independent oracle: plain FieldElement arithmetic, no code-level helpers --

def vm(v, A):
    return [sum((v[i] * A[i, j] for i in range(3)), v[0].field.zero) for j in range(3)]


def same_line(u, v):
    return all(u[i] * v[j] == u[j] * v[i] for i in range(3) for j in range(3))


def oracle_ok(A, X, Y):
    F = A.field
    I = [[F.one if i == j else F.zero for j in range(3)] for i in range(3)]
    AAh = [[sum((A[i, k] * F.frobenius(A[j, k]) for k in range(3)), F.zero) for j in range(3)] for i in range(3)]
    unitary = AAh == I
    det = (A[0, 0] * (A[1, 1] * A[2, 2] - A[1, 2] * A[2, 1])
           - A[0, 1] * (A[1, 0] * A[2, 2] - A[1, 2] * A[2, 0])
           + A[0, 2] * (A[1, 0] * A[2, 1] - A[1, 1] * A[2, 0]))
    scalar = all(A[i, j] == (A[0, 0] if i == j else 0) for i in range(3) for j in range(3))
    x, y = list(X.rep), list(Y.rep)
    return unitary and det == 1 and not scalar and same_line(vm(x, A), x) and same_line(vm(y, A), y)


def test_herm_examples():
    F = quadratic_field(3)
    e1 = Vector3(F, [1, 0, 0])
    assert herm(e1, e1) == 1
    v = Vector3(F, [1, 1, 0])
    assert herm(v, v) == 2
    rng = random.Random(1)
    for _ in range(50):
        u = Vector3.from_codes(F, [rng.randrange(9) for _ in range(3)])
        w = Vector3.from_codes(F, [rng.randrange(9) for _ in range(3)])
        assert herm(u, w) == F.frobenius(herm(w, u))


def test_special_unitary_examples():
    F = quadratic_field(3)
    lam = F.lambda_element()
    assert is_special_unitary(Matrix3.identity(F))
    D = Matrix3.diag(F, lam, lam, (lam * lam).inverse())
    assert is_special_unitary(D) and not is_scalar(D)
    assert not is_special_unitary(Matrix3.diag(F, F.omega, 1, 1))
    assert is_scalar(Matrix3.identity(F))


@pytest.mark.parametrize("q,count", [(2, 21), (3, 91), (4, 273), (5, 651)])
def test_point_counts(q, count):
    F = quadratic_field(q)
    pts = enumerate_points(F)
    assert len(pts) == count == q**4 + q**2 + 1
    assert len(set(pts)) == count
    for P in pts:
        first = next(x for x in P.rep if x)
        assert first == 1


@pytest.mark.parametrize("q", [3, 4, 5])
def test_nondegenerate_count(q):
    F = quadratic_field(q)
    pts = enumerate_points(F)
    degenerate = [P for P in pts if not is_nondegenerate(P)]
    assert len(degenerate) == q**3 + 1
    assert len(pts) - len(degenerate) == {3: 63, 4: 208, 5: 525}[q]


def test_degenerate_example_q3():
    F = quadratic_field(3)
    w = next(a for a in F.elements() if a**4 == -1)
    assert not is_nondegenerate(ProjPoint.span(F, 1, w, 0))
    assert is_nondegenerate(ProjPoint.span(F, 1, 0, 0))


def test_stabilizes_examples():
    F = quadratic_field(3)
    I = Matrix3.identity(F)
    assert all(stabilizes(I, P) for P in enumerate_points(F))
    D = Matrix3.diag(F, F.omega, 2, F.omega**3)
    assert stabilizes(D, ProjPoint.span(F, 1, 0, 0))
    swap = Matrix3(F, [[1, 0, 0], [0, 0, 1], [0, 1, 0]])
    assert not stabilizes(swap, ProjPoint.span(F, 0, 1, 0))
    with pytest.raises(ValueError):
        stabilizes(Matrix3(F, [[0] * 3] * 3), ProjPoint.span(F, 1, 0, 0))


@pytest.mark.parametrize("q", [3, 4, 5])
def test_move_to_e1_all_nondegenerate(q):
    F = quadratic_field(q)
    e1 = ProjPoint.span(F, 1, 0, 0)
    for X in enumerate_points(F):
        if not is_nondegenerate(X):
            with pytest.raises(ValueError):
                move_to_e1(X)
            continue
        M = move_to_e1(X)
        assert is_special_unitary(M)
        assert ProjPoint(X.rep @ M) == e1


def test_move_to_e1_identity_on_e1():
    F = quadratic_field(3)
    assert move_to_e1(ProjPoint.span(F, 1, 0, 0)) == Matrix3.identity(F)


def test_witness_documented_cases_q3():
    F = quadratic_field(3)
    lam = F.lambda_element()
    e1 = ProjPoint.span(F, 1, 0, 0)
    A, case = witness_with_case(e1, e1)
    assert case == CASE_ZERO and A == Matrix3.diag(F, lam, lam, (lam * lam).inverse())
    w = next(a for a in F.elements() if a**4 == -1)
    Y = ProjPoint.span(F, 1, 1, w)
    A, case = witness_with_case(e1, Y)
    assert case == CASE_NORM_MINUS_ONE and oracle_ok(A, e1, Y)
    beta = A[1, 1]
    assert beta != 1 and F.trace(beta) == 2
    Y = ProjPoint.span(F, 1, 1, 1)
    A, case = witness_with_case(e1, Y)
    assert case == CASE_GENERIC and oracle_ok(A, e1, Y)
    assert A[0, 0] == lam and A[1, 1] != lam


def test_case_one_arrangement():
    F = quadratic_field(5)
    lam = F.lambda_element().code
    m2 = F.inv_c(F.mul_c(lam, lam))
    assert standard_witness(F, (0, 1, 1))[0].e[::4] == (m2, lam, lam)
    assert standard_witness(F, (1, 0, 1))[0].e[::4] == (lam, m2, lam)
    assert standard_witness(F, (1, 1, 0))[0].e[::4] == (lam, lam, m2)
    assert standard_witness(F, (0, 0, 1))[0].e[::4] == (lam, lam, m2)


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8, 9])
def test_witness_oracle_e1(q):
    F = quadratic_field(q)
    e1 = ProjPoint.span(F, 1, 0, 0)
    for Y in enumerate_points(F):
        A = witness(e1, Y)
        assert oracle_ok(A, e1, Y)
        assert check_witness(A, e1, Y) == []


def test_witness_oracle_random_pairs_q4_q5():
    rng = random.Random(7)
    for q in (4, 5):
        F = quadratic_field(q)
        pts = enumerate_points(F)
        nd = [P for P in pts if is_nondegenerate(P)]
        for _ in range(300):
            X, Y = rng.choice(nd), rng.choice(pts)
            assert oracle_ok(witness(X, Y), X, Y)


def test_unitarity_preserves_form():
    F = quadratic_field(4)
    rng = random.Random(3)
    pts = [P for P in enumerate_points(F) if is_nondegenerate(P)]
    for X in rng.sample(pts, 20):
        M = move_to_e1(X)
        for _ in range(10):
            u = Vector3.from_codes(F, [rng.randrange(16) for _ in range(3)])
            v = Vector3.from_codes(F, [rng.randrange(16) for _ in range(3)])
            assert herm(u @ M, v @ M) == herm(u, v)


def test_check_witness_flags_bad_matrices():
    F = quadratic_field(3)
    e1, e2 = ProjPoint.span(F, 1, 0, 0), ProjPoint.span(F, 0, 1, 0)
    assert "non_scalar" in check_witness(Matrix3.identity(F), e1, e2)
    swap = Matrix3(F, [[0, 1, 0], [1, 0, 0], [0, 0, -1]])
    bad = check_witness(swap, e1, e2)
    assert "stabilizes_X" in bad and "special_unitary" not in bad


def test_witness_rejects_bad_input():
    F = quadratic_field(3)
    w = next(a for a in F.elements() if a**4 == -1)
    with pytest.raises(ValueError):
        witness(ProjPoint.span(F, 1, w, 0), ProjPoint.span(F, 1, 0, 0))
    F2 = quadratic_field(2)
    with pytest.raises(FieldError):
        witness(ProjPoint.span(F2, 1, 0, 0), ProjPoint.span(F2, 1, 0, 0))


@pytest.mark.parametrize("q", [3, 4, 5, 7])
def test_verify_e1_case_counts(q):
    rep = verify_proposition(q, "e1")
    assert rep.passed
    n = q**4 + q**2 + 1
    nonzero = (q * q - 1) ** 2
    assert rep.data["pairs_checked"] == n
    # all-nonzero points: b ranges over GF(q^2)*, mu = c/b over GF(q^2)*
    assert rep.data["case_counts"] == {
        CASE_ZERO: n - nonzero,
        CASE_NORM_MINUS_ONE: (q * q - 1) * (q + 1),
        CASE_GENERIC: nonzero - (q * q - 1) * (q + 1),
    }


def test_verify_all_q3():
    rep = verify_proposition(3, "all")
    assert rep.passed
    assert rep.data["x_points"] == 63 and rep.data["pairs_checked"] == 63 * 91


def test_verify_parallel_matches_serial():
    a = verify_proposition(4, "all", workers=1).to_dict()
    b = verify_proposition(4, "all", workers=2).to_dict()
    assert a == b


def test_verify_errors():
    for q in (2, 6):
        with pytest.raises(FieldError):
            verify_proposition(q)
    with pytest.raises(ValueError):
        verify_proposition(3, "bogus")
