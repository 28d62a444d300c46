import pytest

from artifact.quiver import Quiver, mutate
from artifact.surface import (
    FlipNotPossible,
    SurfaceError,
    Triangulation,
    all_tagged_arcs,
    arc_for_vector,
    catalog_dvectors,
    chord,
    crossing_vector,
    fan_triangulation,
    flip,
    ideal_triangulations,
    loop,
    plain_crossing,
    puncture_cycle,
    quiver_from_triangulation,
    radius,
    realize,
    support_is_connected,
    tagged_crossing,
    twos_form_tree,
)


@pytest.mark.parametrize("n, count", [(3, 10), (4, 35), (5, 126), (6, 462)])
def test_number_of_ideal_triangulations(n, count):
    assert len(ideal_triangulations(n)) == count


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_tagged_arcs_are_n_squared(n):
    assert len(all_tagged_arcs(n)) == n * n


def test_all_radii_fan_gives_oriented_cycle():
    t = fan_triangulation(4)
    q = quiver_from_triangulation(t)
    assert q == Quiver(4, ((0, 3), (1, 0), (2, 1), (3, 2)))
    assert puncture_cycle(t) == (3, 2, 1, 0)


def test_self_folded_arcs_share_their_neighbours():
    # punctured pentagon with a loop at 4 around the radius at 4
    n = 5
    t = Triangulation(n, (chord(0, 2, n), chord(2, 4, n), chord(4, 2, n), loop(4, n), radius(4, n)))
    q = quiver_from_triangulation(t)
    assert not q.has_arrow(3, 4) and not q.has_arrow(4, 3)
    into = lambda v: {s for s, u in q.arrows if u == v}
    out_of = lambda v: {u for s, u in q.arrows if s == v}
    assert into(3) == into(4) and out_of(3) == out_of(4)


def test_invalid_triangulations():
    n = 4
    with pytest.raises(SurfaceError):
        Triangulation(n, (chord(0, 2, n), chord(1, 3, n), radius(0, n), radius(2, n)))
    with pytest.raises(SurfaceError):
        Triangulation(n, (chord(0, 2, n), radius(0, n), radius(2, n)))
    with pytest.raises(SurfaceError):
        Triangulation(n, (chord(0, 2, n), chord(2, 0, n), loop(0, n), radius(2, n)))
    with pytest.raises(SurfaceError):
        chord(0, 1, n)


def test_text_round_trip():
    t = realize(Quiver(4, ((0, 2), (1, 2), (2, 3))))
    assert Triangulation.parse(t.serialize()) == t


def test_tagged_compatibility_of_radii():
    n = 4
    assert tagged_crossing(radius(0, n), radius(0, n, True), n) == 0
    assert tagged_crossing(radius(0, n), radius(1, n, True), n) == 1
    assert tagged_crossing(radius(0, n, True), radius(1, n, True), n) == 0
    assert plain_crossing(chord(0, 2, n), chord(1, 3, n), n) == 1


def test_flip_mutates_the_quiver():
    checked = 0
    for t, q in ideal_triangulations(5):
        for k in range(5):
            try:
                t2 = flip(t, k)
            except FlipNotPossible:
                continue
            assert quiver_from_triangulation(t2) == mutate(q, k)
            checked += 1
    assert checked > 400


def test_realize_reproduces_the_quiver():
    for _, q in ideal_triangulations(5):
        assert quiver_from_triangulation(realize(q)) == q


@pytest.mark.parametrize("n", [4, 5, 6])
def test_catalog_size_and_shape(n):
    for _, q in ideal_triangulations(n)[:40]:
        cat = catalog_dvectors(q)
        assert len(cat) == n * n - n
        for cv in cat:
            assert max(cv.entries) <= 2
            assert support_is_connected(q, cv.entries)
            assert twos_form_tree(q, cv.entries)


def test_linear_d4_catalog():
    q = Quiver(4, ((0, 2), (1, 2), (2, 3)))
    got = [cv.serialize() for cv in catalog_dvectors(q)]
    assert got == [
        "0,0,0,1", "0,0,1,0", "0,0,1,1", "0,1,0,0", "0,1,1,0", "0,1,1,1",
        "1,0,0,0", "1,0,1,0", "1,0,1,1", "1,1,1,0", "1,1,1,1", "1,1,2,1",
    ]
    assert catalog_dvectors(q)[-1].provenance.endswith("(1,1,2|A)")


def test_arc_for_vector_inverts_crossing_vector():
    q = Quiver(4, ((0, 2), (1, 2), (2, 3)))
    t = realize(q)
    for cv in catalog_dvectors(q):
        assert crossing_vector(t, arc_for_vector(t, cv.entries)) == cv.entries
    with pytest.raises(SurfaceError):
        arc_for_vector(t, (2, 2, 2, 2))


def test_support_checks_reject_bad_vectors():
    q = Quiver(4, ((0, 2), (1, 2), (2, 3)))
    assert not support_is_connected(q, (1, 1, 0, 0))
    assert not twos_form_tree(q, (2, 2, 0, 0))
    assert twos_form_tree(q, (1, 1, 2, 1))
