import pytest

from artifact.oracle import (
    LaurentViolation,
    NotFound,
    Seed,
    coefficient_free_seed,
    denominator_vector,
    enumerate_cluster_variables,
    f_polynomial_mutation,
    initial_seed,
    mutate_seed,
)
from artifact.poly import Poly, parse_poly
from artifact.quiver import Quiver, linear_dn


def test_framed_a1_exchange():
    seed = mutate_seed(initial_seed(Quiver(1, ())), 0)
    x0, y0 = Poly.var(2, 0), Poly.var(2, 1)
    assert seed.cluster[0] * x0 == y0 + 1


def test_a2_words():
    q = Quiver(2, ((0, 1),))
    assert f_polynomial_mutation(q, [0]) == parse_poly("1+u0", 2)
    assert f_polynomial_mutation(q, [0, 1]) == parse_poly("1+u1+u0u1", 2)
    assert f_polynomial_mutation(q, []) == Poly.one(2)
    assert enumerate_cluster_variables(q) == {
        (1, 0): parse_poly("1+u0", 2),
        (0, 1): parse_poly("1+u1", 2),
        (1, 1): parse_poly("1+u1+u0u1", 2),
    }


def test_mutating_twice_restores_the_seed():
    q = linear_dn(5)
    seed = initial_seed(q)
    for k in range(q.n):
        assert mutate_seed(mutate_seed(seed, k), k) == seed


@pytest.mark.parametrize("n", [4, 5, 6])
def test_type_d_has_n_squared_minus_n_new_variables(n):
    table = enumerate_cluster_variables(linear_dn(n))
    assert len(table) == n * n - n
    assert all(f.coefficient((0,) * n) == 1 for f in table.values())


def test_d4_fork_variable():
    f = f_polynomial_mutation(linear_dn(4), (1, 1, 2, 1))
    assert f == parse_poly(
        "1+u2+u3+2u2u3+u0u2u3+u1u2u3+u2^2u3+u0u2^2u3+u1u2^2u3+u0u1u2^2u3", 4
    )
    assert f.coefficient((0, 0, 1, 1)) == 2
    assert f.coefficient((1, 1, 2, 1)) == 1
    assert len(f) == 10


def test_initial_and_unknown_targets():
    q = linear_dn(4)
    assert f_polynomial_mutation(q, (0, 0, 0, 0)) == Poly.one(4)
    assert f_polynomial_mutation(q, (-1, 0, 0, 0)) == Poly.one(4)
    with pytest.raises(NotFound):
        f_polynomial_mutation(q, (2, 2, 2, 2))
    with pytest.raises(ValueError):
        f_polynomial_mutation(q, (1, 1))


def test_denominator_vector_reads_negative_powers():
    x = Poly(4, {(-1, -2, 0, 0): 1, (0, -1, 0, 0): 1})
    assert denominator_vector(x, 2) == (1, 2)


def test_inexact_exchange_is_reported():
    bogus = Seed(Quiver(2, ((0, 1),)), (Poly.var(2, 0) + 1, Poly.var(2, 1)))
    with pytest.raises(LaurentViolation):
        mutate_seed(bogus, 0)


def test_coefficient_free_seed_has_no_frozen_part():
    seed = coefficient_free_seed(linear_dn(4))
    assert seed.rank == 4 and seed.quiver.frozen == frozenset()
    x = [Poly.var(4, i) for i in range(4)]
    assert mutate_seed(seed, 2).cluster[2] * x[2] == x[0] * x[1] + x[3]
