import pytest

from artifact.quiver import (
    NOT_TYPE_D,
    Quiver,
    QuiverError,
    classify_vatne,
    frame,
    linear_dn,
    mutate,
    mutation_reaches_dn,
    opposite,
)


def wheel():
    return Quiver(6, ((1, 0), (0, 2), (2, 1), (2, 5), (5, 3), (4, 5), (3, 2), (3, 4)))


def test_text_round_trip():
    q = wheel()
    text = q.serialize()
    assert text == "n=6\narrows=0->2,1->0,2->1,2->5,3->2,3->4,4->5,5->3\n"
    assert Quiver.parse(text) == q
    assert Quiver.parse(" n = 6 \n arrows = 5->3 , 0->2,1->0,2->1,2->5,3->2,3->4,4->5") == q


@pytest.mark.parametrize(
    "text",
    ["arrows=0->1", "n=2\narrows=0->2", "n=2\narrows=0-1", "n=2\narrows=0->1,1->0", "n=2\ncolour=red", "n=x"],
)
def test_bad_text_is_rejected(text):
    with pytest.raises(QuiverError):
        Quiver.parse(text)


def test_mutation_is_an_involution():
    q = wheel()
    for k in range(q.n):
        assert mutate(mutate(q, k), k) == q


def test_mutation_adds_composites_and_cancels_two_cycles():
    # 0 -> 1 -> 2 with 2 -> 0: mutating at 1 kills the 3-cycle
    q = Quiver(3, ((0, 1), (1, 2), (2, 0)))
    assert mutate(q, 1) == Quiver(3, ((1, 0), (2, 1)))
    assert mutate(Quiver(3, ((0, 1), (1, 2))), 1) == Quiver(3, ((0, 2), (1, 0), (2, 1)))


def test_sink_framing_points_into_frozen_copies():
    q = Quiver(2, ((0, 1),))
    assert frame(q, sink=True).arrows == ((0, 1), (0, 2), (1, 3))
    assert frame(q, sink=False).arrows == ((0, 1), (2, 0), (3, 1))
    assert frame(q, sink=True).frozen == frozenset({2, 3})


def test_opposite_reverses_arrows():
    assert opposite(Quiver(3, ((0, 1), (1, 2)))).arrows == ((1, 0), (2, 1))


def test_wheel_is_type_four():
    vc = classify_vatne(wheel())
    assert vc.type_tag == "IV"
    assert sorted(vc.central_cycle) == [3, 4, 5]
    assert vc.role_map[3] == vc.role_map[4] == vc.role_map[5] == "central-cycle"


def test_linear_d4_is_type_one():
    vc = classify_vatne(linear_dn(4))
    assert vc.type_tag == "I"
    assert {vc.vertex("a"), vc.vertex("b")} == {0, 1}
    assert vc.vertex("c") == 2


def test_bare_four_cycle_reports_type_three():
    assert classify_vatne(Quiver(4, ((0, 1), (1, 2), (2, 3), (3, 0)))).type_tag == "III"


@pytest.mark.parametrize(
    "q",
    [
        Quiver(4, ((0, 1), (1, 2), (2, 3))),  # A_4
        Quiver(5, ((0, 1), (1, 2), (2, 3), (3, 4), (1, 3))),
        Quiver(3, ((0, 1), (1, 2))),
        Quiver(4, ((0, 1), (2, 3))),  # disconnected
    ],
)
def test_non_d_shapes(q):
    assert classify_vatne(q).type_tag == NOT_TYPE_D


def test_every_classified_shape_is_mutation_equivalent_to_dn():
    assert mutation_reaches_dn(wheel())
    assert not mutation_reaches_dn(Quiver(4, ((0, 1), (1, 2), (2, 3))), depth_limit=6)
