import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from matfound.homology import invariant_factors
from matfound.smith import matmul, smith_normal_form, smith_with_transforms, solve_left


def det(A):
    return int(Matrix(A).det())


def sympy_factors(A):
    D = sympy_snf(Matrix(A), domain=ZZ)
    return tuple(sorted(abs(int(D[i, i])) for i in range(min(D.shape)) if D[i, i] != 0))


matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@pytest.mark.parametrize(
    "A, expected",
    [
        ([[2, 0], [0, 3]], (1, 6)),  # [TRIVIAL] 2 and 3 are coprime
        ([[2, 4, 4], [-6, 6, 12], [10, -4, -16]], (2, 6, 12)),  # [DERIVED] sympy
        ([[0, 0], [0, 0]], ()),
        ([[1, 1, 0], [0, 1, 1], [1, 0, 1]], (1, 1, 2)),  # boundary of a triangle, mod 2 torsion
    ],
)
def test_known_forms(A, expected):
    assert smith_normal_form(A) == expected


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_agrees_with_sympy(A):
    assert smith_normal_form(A) == sympy_factors(A)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_transforms_are_unimodular(A):
    d, U, V = smith_with_transforms(A)
    D = matmul(matmul(U, A), V)
    for i, row in enumerate(D):
        for j, x in enumerate(row):
            assert x == (d[i] if i == j and i < len(d) else 0)
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    assert all(b % a == 0 for a, b in zip(d, d[1:]))


@settings(max_examples=100, deadline=None)
@given(matrices, st.data())
def test_solve_left_finds_combinations(A, data):
    x = data.draw(st.lists(st.integers(-3, 3), min_size=len(A), max_size=len(A)))
    b = matmul([x], A)[0]
    y = solve_left(A, b)
    assert y is not None and matmul([y], A)[0] == b


def test_solve_left_rejects_outside_lattice():
    assert solve_left([[2, 0], [0, 2]], [1, 0]) is None


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_sparse_route_matches_dense(A):
    rows = [{j: v for j, v in enumerate(r) if v} for r in A]
    assert tuple(invariant_factors(rows)) == smith_normal_form(A)
