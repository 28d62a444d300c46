import random
from itertools import product

import pytest

from artifact.dimer import build_base_graph, configuration_from_flips, minimal_matching, place_nodes
from artifact.evector import (
    BijectionError,
    EVector,
    coefficient,
    critical_components,
    dimer_to_e,
    e_to_dimer,
    enumerate_submodule_indexing,
    f_polynomial_evector,
    global_nu,
    is_acceptable,
    is_critical,
    is_submodule_indexing,
    literal_critical_count,
    nu_disagreements,
)
from artifact.poly import Poly, parse_poly
from artifact.quiver import Quiver

from test_acceptance import WHEEL_D, WHEEL_REFERENCE

WHEEL = Quiver(6, ((1, 0), (0, 2), (2, 1), (2, 5), (5, 3), (4, 5), (3, 2), (3, 4)))
WHEEL_SINGULAR = frozenset({(1, 0), (5, 3)})


def test_acceptability_inequality():
    assert is_acceptable((2, 1), (1, 0), (0, 1))
    assert is_critical((2, 1), (1, 0), (0, 1))
    assert not is_acceptable((1, 2), (1, 0), (0, 1))
    assert all(is_acceptable((1, 2), (0, 0), a) for a in [(0, 1), (1, 0)])


def test_wheel_critical_components():
    # 2u1u2u5: the 2 at vertex 2 is free, so the coefficient is 2
    assert critical_components(WHEEL, WHEEL_D, (0, 1, 1, 0, 0, 1), WHEEL_SINGULAR) == [(frozenset({2}), 0)]
    assert coefficient(WHEEL, WHEEL_D, (0, 1, 1, 0, 0, 1), WHEEL_SINGULAR) == 2
    # u0u2u5: the arrow 0 -> 2 pins it
    assert critical_components(WHEEL, WHEEL_D, (1, 0, 1, 0, 0, 1), WHEEL_SINGULAR) == [(frozenset({2}), 1)]
    assert coefficient(WHEEL, WHEEL_D, (1, 0, 1, 0, 0, 1), WHEEL_SINGULAR) == 1


def test_wheel_vectors_cover_the_reference_terms_plus_u5():
    reference = {e for e, _ in parse_poly(WHEEL_REFERENCE, 6).items()}
    got = {v.entries for v in enumerate_submodule_indexing(WHEEL, WHEEL_D, WHEEL_SINGULAR)}
    assert reference <= got
    # the only extra vector: arrow 5 -> 3 is singular, so e = e_5 is a submodule
    assert got - reference == {(0, 0, 0, 0, 0, 1)}


def test_enumeration_order_and_bounds():
    out = enumerate_submodule_indexing(WHEEL, WHEEL_D, WHEEL_SINGULAR)
    keys = [(sum(v.entries), v.entries) for v in out]
    assert keys == sorted(keys)
    assert out[0] == EVector((0,) * 6)
    assert out[-1] == EVector(WHEEL_D)
    assert enumerate_submodule_indexing(WHEEL, (0,) * 6) == [EVector((0,) * 6)]
    assert f_polynomial_evector(WHEEL, (0,) * 6) == Poly.one(6)


def test_evector_text_form():
    assert EVector.parse("0,1,2").serialize() == "0,1,2"


def test_literal_counting_would_drop_printed_terms():
    # u0u2u5 and u0u2u4u5 appear in the reference polynomial, yet counting
    # 0 -> 2 and 2 -> 1 separately gives nu = 2 on {2}
    reference = parse_poly(WHEEL_REFERENCE, 6)
    differ = [v.entries for v in nu_disagreements(WHEEL, WHEEL_D, WHEEL_SINGULAR)]
    assert differ == [(1, 0, 1, 0, 0, 1), (1, 0, 1, 0, 1, 1)]
    for e in differ:
        assert reference.coefficient(e) == 1
        assert global_nu(WHEEL, WHEEL_D, e, WHEEL_SINGULAR) == 2
        assert literal_critical_count(WHEEL, WHEEL_D, e, {2}, WHEEL_SINGULAR) == 2
        assert critical_components(WHEEL, WHEEL_D, e, WHEEL_SINGULAR) == [(frozenset({2}), 1)]


def test_shared_constraint_counts_once():
    # 0 -> 1 -> 2 -> 0 with 2 -> 0 singular; both critical arrows at 1 pin one line
    q = Quiver(3, ((0, 1), (1, 2), (2, 0)))
    d, e, sing = (1, 2, 1), (1, 1, 0), {(2, 0)}
    assert literal_critical_count(q, d, e, {1}, sing) == 2
    assert critical_components(q, d, e, sing) == [(frozenset({1}), 1)]
    assert is_submodule_indexing(q, d, e, sing)


def wheel_graph():
    g = place_nodes(build_base_graph(WHEEL), WHEEL_D, WHEEL_SINGULAR)
    return g, minimal_matching(g, WHEEL_D, WHEEL_SINGULAR)


def test_wheel_round_trip_with_random_ties():
    g, mmin = wheel_graph()
    rng = random.Random(2024)
    for v in enumerate_submodule_indexing(WHEEL, WHEEL_D, WHEEL_SINGULAR):
        m = e_to_dimer(g, WHEEL, WHEEL_D, WHEEL_SINGULAR, v.entries)
        assert dimer_to_e(g, m, mmin).entries == v.entries
        for _ in range(5):
            assert dimer_to_e(g, m, mmin, rng=rng).entries == v.entries


def test_flip_order_does_not_matter():
    g, _ = wheel_graph()
    e = WHEEL_D
    first = e_to_dimer(g, WHEEL, WHEEL_D, WHEEL_SINGULAR, e)
    for order in ([5, 4, 3, 2, 1, 0], [2, 0, 5, 1, 3, 4]):
        assert e_to_dimer(g, WHEEL, WHEEL_D, WHEEL_SINGULAR, e, order=order) == first


def test_trace_lists_flips_and_peels():
    g, mmin = wheel_graph()
    steps: list[str] = []
    m = e_to_dimer(g, WHEEL, WHEEL_D, WHEEL_SINGULAR, (0, 1, 1, 0, 0, 1), trace=steps)
    assert [s.split(":")[0] for s in steps] == ["flip tile 1", "flip tile 2", "flip tile 5"]
    peel: list[str] = []
    dimer_to_e(g, m, mmin, trace=peel)
    assert peel and all(s.startswith("peel ") for s in peel)


def test_unacceptable_vector_leaves_antiedges():
    g, mmin = wheel_graph()
    # 2 -> 5 is not singular and e_2 - e_5 = 2 > [d_2 - d_5]_+ = 1
    bad = (0, 0, 2, 0, 0, 0)
    assert not is_acceptable(WHEEL_D, bad, (2, 5))
    with pytest.raises(BijectionError):
        e_to_dimer(g, WHEEL, WHEEL_D, WHEEL_SINGULAR, bad)


def test_weights_are_nonnegative_exactly_for_acceptable_vectors():
    g, mmin = wheel_graph()
    for e in product(*[range(x + 1) for x in WHEEL_D]):
        ok = all(a in WHEEL_SINGULAR or is_acceptable(WHEEL_D, e, a) for a in WHEEL.arrows)
        assert ok == (min(configuration_from_flips(g, mmin, e).mult) >= 0), e
