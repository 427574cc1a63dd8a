import random
from fractions import Fraction

import numpy as np
import pytest

from qpii.gaussian import gauss
from qpii.quasidet import (
    BlockMatrix,
    ComplexMatrixCarrier,
    ExactScalarCarrier,
    NonInvertibleEntry,
    NonInvertibleMatrix,
    NonInvertibleMinor,
    all_quasideterminants,
    commutative_reduction_check,
    det_cofactor,
    invert_by_block_partition,
    invert_by_elimination,
    load_matrix_json,
    quasideterminant_expand,
    quasideterminant_via_inverse,
)

EXACT = ExactScalarCarrier()


def exact_matrix(rows):
    return BlockMatrix(EXACT, [[gauss(Fraction(e)) for e in row] for row in rows])


def random_exact_matrix(rng, n):
    return BlockMatrix(
        EXACT,
        [
            [
                gauss(
                    Fraction(rng.randint(-6, 6), rng.randint(1, 4)),
                    Fraction(rng.randint(-6, 6), rng.randint(1, 4)),
                )
                for _ in range(n)
            ]
            for _ in range(n)
        ],
    )


def random_block_matrix(rng, n, dim):
    carrier = ComplexMatrixCarrier(dim)

    def block(diag_boost):
        b = np.array(
            [
                [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(dim)]
                for _ in range(dim)
            ]
        )
        return b + diag_boost * np.eye(dim)

    rows = [[block(3.0 if r == c else 0.0) for c in range(n)] for r in range(n)]
    return BlockMatrix(carrier, rows)


# -- basic positions ---------------------------------------------------------


def test_two_by_two_upper_left():
    M = exact_matrix([[1, 2], [3, 4]])
    got = quasideterminant_expand(M, 0, 0)
    # 1 - 2 * (1/4) * 3 = -1/2, equal to det/det^11 = -2/4
    assert got == gauss(Fraction(-1, 2))


def test_diagonal_matrix_positions():
    M = exact_matrix([[5, 0, 0], [0, 7, 0], [0, 0, 9]])
    for i, want in enumerate((5, 7, 9)):
        assert quasideterminant_expand(M, i, i) == gauss(want)


def test_identity_via_inverse():
    M = exact_matrix([[1, 0], [0, 1]])
    assert quasideterminant_via_inverse(M, 0, 0) == gauss(1)
    assert quasideterminant_via_inverse(M, 1, 1) == gauss(1)


def test_enumeration_has_n_squared_positions():
    M = exact_matrix([[1, 2, 3], [4, 5, 6], [7, 8, 10]])
    qs = all_quasideterminants(M)
    assert len(qs) == 9


def test_singular_minor_raises():
    M = exact_matrix([[1, 2], [0, 0]])
    with pytest.raises(NonInvertibleMinor) as err:
        quasideterminant_expand(M, 0, 0)
    assert (err.value.row, err.value.col) == (0, 0)


def test_block_partition_requires_invertible_leading_block():
    M = exact_matrix([[0, 1], [1, 0]])
    with pytest.raises(NonInvertibleMatrix):
        quasideterminant_via_inverse(M, 0, 0)


def test_noninvertible_entry():
    # inverse of [[1,1],[0,1]] is [[1,-1],[0,1]]; its (1,0) entry is zero,
    # so position (0,1) has no quasideterminant by the inverse route.
    M = exact_matrix([[1, 1], [0, 1]])
    with pytest.raises(NonInvertibleEntry):
        quasideterminant_via_inverse(M, 0, 1)


# -- inverses ----------------------------------------------------------------


def test_elimination_inverse_exact():
    rng = random.Random(2041)
    for n in (2, 3, 4):
        for _ in range(10):
            M = random_exact_matrix(rng, n)
            if det_cofactor(M).is_zero():
                continue
            inv = invert_by_elimination(M)
            for i in range(n):
                for j in range(n):
                    acc = gauss(0)
                    for k in range(n):
                        acc = acc + M[(i, k)] * inv[(k, j)]
                    assert acc == (gauss(1) if i == j else gauss(0))


def test_block_partition_inverse_exact():
    rng = random.Random(2042)
    done = 0
    while done < 20:
        n = rng.choice((2, 3, 4))
        M = random_exact_matrix(rng, n)
        try:
            inv = invert_by_block_partition(M)
        except NonInvertibleMatrix:
            continue
        done += 1
        for i in range(n):
            for j in range(n):
                acc = gauss(0)
                for k in range(n):
                    acc = acc + M[(i, k)] * inv[(k, j)]
                assert acc == (gauss(1) if i == j else gauss(0))


# -- commutative reduction ----------------------------------------------------


def test_commutative_reduction_random():
    rng = random.Random(2043)
    checked = 0
    for _ in range(40):
        n = rng.choice((2, 3, 4))
        M = random_exact_matrix(rng, n)
        for i in range(n):
            for j in range(n):
                out = commutative_reduction_check(M, i, j)
                if out is None:
                    continue
                checked += 1
                assert out is True
    assert checked > 100


def test_reduction_check_vacuous_on_singular_minor():
    M = exact_matrix([[1, 2, 3], [1, 2, 3], [0, 0, 1]])
    # minor of (2, 2) is [[1,2],[1,2]], singular
    assert commutative_reduction_check(M, 2, 2) is None


# -- expand vs via-inverse over matrix blocks ---------------------------------


def test_expand_matches_via_inverse_on_blocks():
    rng = random.Random(2044)
    for _ in range(25):
        n = rng.choice((2, 3))
        M = random_block_matrix(rng, n, 3)
        for i in range(n):
            for j in range(n):
                a = quasideterminant_expand(M, i, j)
                b = quasideterminant_via_inverse(M, i, j)
                assert np.max(np.abs(a - b)) <= 1e-9


def test_scalar_blocks_match_exact_values():
    carrier = ComplexMatrixCarrier(1)
    M = BlockMatrix(
        carrier,
        [
            [np.array([[1.0 + 0j]]), np.array([[2.0 + 0j]])],
            [np.array([[3.0 + 0j]]), np.array([[4.0 + 0j]])],
        ],
    )
    got = quasideterminant_expand(M, 0, 0)
    assert abs(got[0, 0] - (-0.5)) < 1e-14


# -- permutation equivariance --------------------------------------------------


def test_permutation_equivariance():
    rng = random.Random(2045)
    for _ in range(30):
        n = rng.choice((2, 3, 4))
        M = random_exact_matrix(rng, n)
        row_perm = list(range(n))
        col_perm = list(range(n))
        rng.shuffle(row_perm)
        rng.shuffle(col_perm)
        P = M.permuted(row_perm, col_perm)
        i, j = rng.randrange(n), rng.randrange(n)
        try:
            original = quasideterminant_expand(M, i, j)
        except NonInvertibleMinor:
            continue
        moved = quasideterminant_expand(P, row_perm.index(i), col_perm.index(j))
        assert moved == original


# -- JSON loading --------------------------------------------------------------


def test_load_exact_matrix_json():
    M = load_matrix_json('[["3/4+1/2i", "1"], ["0", "2"]]')
    assert isinstance(M.carrier, ExactScalarCarrier)
    assert M[(0, 0)] == gauss("3/4+1/2i")
    assert quasideterminant_expand(M, 0, 0) == gauss("3/4+1/2i")


def test_load_block_matrix_json():
    doc = """
    [
      [[[ [1,0], [0,0] ], [ [0,0], [1,0] ]], [[ [0,0], [0,0] ], [ [0,0], [0,0] ]]],
      [[[ [0,0], [0,0] ], [ [0,0], [0,0] ]], [[ [2,0], [0,0] ], [ [0,0], [2,0] ]]]
    ]
    """
    M = load_matrix_json(doc)
    assert isinstance(M.carrier, ComplexMatrixCarrier)
    assert M.carrier.dim == 2
    got = quasideterminant_expand(M, 1, 1)
    assert np.allclose(got, 2 * np.eye(2))


def test_load_rejects_bad_entries():
    with pytest.raises(Exception):
        load_matrix_json('[["not a number"]]')
