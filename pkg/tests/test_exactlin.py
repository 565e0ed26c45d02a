import math

from hypothesis import given, strategies as st
import pytest
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import smith_normal_form

from homext.errors import MalformedInputError, PreconditionError
from homext.exactlin import (LinearMap, determinant, diagonal, homology, int_matrix, is_exact_at, matmul,
                             nullspace_mod, snf, solve_mod)
from homext.testing.ground_truth import snf_diagonal_by_minors, solve_by_search

from tests.strategies import small_matrices


def _is_diagonal_chain(d) -> bool:
    rows, cols = d.shape
    if any(d[i, j] for i in range(rows) for j in range(cols) if i != j):
        return False
    diag = [d[i, i] for i in range(min(rows, cols))]
    if any(v < 0 for v in diag):
        return False
    return all(b % a == 0 if a else b == 0 for a, b in zip(diag, diag[1:]))


def test_snf_known_matrix():
    res = snf([[12, 6, 4, 8], [3, 9, 6, 12], [2, 16, 14, 28], [20, 10, 10, 20]])
    assert res.diagonal == [1, 10, 30, 0]
    assert res.rank == 3


def test_snf_of_zero_matrix():
    res = snf([[0, 0], [0, 0], [0, 0]])
    assert res.diagonal == [0, 0]
    assert res.rank == 0


@given(small_matrices())
def test_snf_transforms(rows):
    a = int_matrix(rows)
    res = snf(a)
    assert (matmul(matmul(res.U, a), res.V) == res.D).all()
    assert _is_diagonal_chain(res.D)
    assert abs(determinant(res.U)) == 1
    assert abs(determinant(res.V)) == 1


@given(small_matrices())
def test_snf_matches_minors(rows):
    assert snf(rows).diagonal == snf_diagonal_by_minors(rows)


@given(small_matrices())
def test_snf_matches_sympy(rows):
    expected = smith_normal_form(DomainMatrix([[ZZ(v) for v in r] for r in rows], (len(rows), len(rows[0])), ZZ))
    m = expected.to_Matrix()
    theirs = [abs(int(m[i, i])) for i in range(min(m.shape)) if m[i, i] != 0]
    ours = [d for d in snf(rows).diagonal if d != 0]
    assert len(ours) == len(theirs)
    assert math.prod(ours) == math.prod(theirs)


@given(small_matrices(max_rows=2, max_cols=3, bound=5), st.sampled_from([4, 6, 8, 9]), st.data())
def test_solve_mod_is_lexicographically_minimal(rows, n, data):
    b = [data.draw(st.integers(0, n - 1)) for _ in rows]
    assert solve_mod(rows, b, n) == solve_by_search(rows, b, n)


def test_solve_mod_without_solution():
    assert solve_mod([[2, 4]], [1], 8) is None


def test_solve_mod_rejects_bad_input():
    with pytest.raises(MalformedInputError):
        solve_mod([[1, 2]], [1], 1)
    with pytest.raises(MalformedInputError):
        solve_mod([[1, 2]], [1, 2], 5)


def test_nullspace_mod_spans_solutions():
    null = nullspace_mod(int_matrix([[2, 0]]), 4)
    for j in range(null.shape[1]):
        assert (2 * null[0, j]) % 4 == 0


def test_linear_map_kernel_image_cokernel():
    # x2 on Z/4
    f = LinearMap((4,), (4,), int_matrix([[2]]))
    assert f.kernel().factors == (2,)
    assert f.image().factors == (2,)
    assert f.cokernel().factors == (2,)
    assert not f.is_injective()
    assert not f.is_surjective()
    assert f.solve([2]) == (1,)
    assert f.solve([1]) is None


def test_linear_map_rejects_ill_defined_entries():
    with pytest.raises(MalformedInputError):
        LinearMap((2,), (4,), int_matrix([[1]]))


def test_subquotient_coordinates():
    q = LinearMap((4, 2), (4,), int_matrix([[2, 2]])).cokernel()
    assert q.factors == (2,)
    assert q.coords([1]) == (1,)
    assert q.coords([2]) == (0,)
    assert sorted(q.elements()) == [(0,), (1,)]


def test_homology_of_two_by_two():
    twice = LinearMap((4,), (4,), int_matrix([[2]]))
    assert homology(twice, twice).order == 1
    assert is_exact_at(twice, twice)
    ident = LinearMap((4,), (4,), diagonal([1]))
    with pytest.raises(PreconditionError):
        homology(ident, ident)
