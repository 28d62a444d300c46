"""Acceptance criteria.  Each test records one PASS/FAIL line in the terminal summary.

Tolerances are exact throughout (integer polynomials, integer counts); the
only numeric bounds are wall-clock limits, pinned below.
"""

from __future__ import annotations

import time
from collections import Counter
from itertools import product

from conftest import record

from artifact.dimer import (
    check_valence,
    count_cycles,
    is_node_monochromatic,
    multiplicity_mismatches,
    valence_violations,
)
from artifact.evector import critical_components, dimer_to_e, e_to_dimer, enumerate_submodule_indexing
from artifact.jacobian import (
    euler_characteristic_by_counting,
    module_from_arc,
    potential_from_triangulation,
    relation_residues,
)
from artifact.cli import polynomials
from artifact.oracle import coefficient_free_seed, enumerate_cluster_variables, mutate_seed
from artifact.poly import Poly, parse_poly
from artifact.quiver import Quiver
from artifact.surface import (
    Triangulation,
    arc_for_vector,
    catalog_dvectors,
    chord,
    loop,
    radius,
    realize,
    support_is_connected,
    twos_form_tree,
)

WHEEL_SECONDS = 5.0
SWEEP_SECONDS = 600.0
POINT_COUNT_MAX_DIM = 8

WHEEL_D = (1, 1, 2, 1, 1, 1)
WHEEL_REFERENCE = (
    "1+u1+u1u5+u4u5+u1u2+u2u5+u2u4u5+u1u4u5+2u1u2u5+u0u2u5"
    "+2u1u2u4u5+u0u2u4u5+u1u2^2u5+u0u1u2u5+u1u2u3u4u5+u1u2^2u4u5"
    "+u0u1u2u4u5+u0u1u2^2u5+u1u2^2u3u4u5+u0u1u2^2u4u5+u0u1u2^2u3u4u5"
)


def test_wheel_polynomial_matches_reference(root):
    q = Quiver.parse((root / "quivers" / "d6_wheel.quiver").read_text())
    reference = parse_poly(WHEEL_REFERENCE, 6)
    start = time.perf_counter()
    polys = polynomials(q, WHEEL_D)
    seconds = time.perf_counter() - start
    twos_ok = all(p.coefficient((0, 1, 1, 0, 0, 1)) == 2 and p.coefficient((0, 1, 1, 0, 1, 1)) == 2 for p in polys.values())
    equal = {k: p == reference for k, p in polys.items()}
    extra = {k: str(p - reference) for k, p in polys.items() if p != reference}
    ok = all(equal.values()) and twos_ok and seconds < WHEEL_SECONDS
    detail = f"{len(reference)} reference terms; " + ", ".join(f"{k} has {len(p)}" for k, p in polys.items())
    detail += f"; coefficient 2 on u1u2u5 and u1u2u4u5: {twos_ok}; {seconds:.2f}s"
    if extra:
        detail += f"; difference {sorted(set(extra.values()))}"
    record("D6 wheel, d=(1,1,2,1,1,1): all three methods give the 21-term reference polynomial", ok, detail)
    assert len(reference) == 21
    assert twos_ok
    assert seconds < WHEEL_SECONDS
    assert all(equal.values()), extra


def test_three_way_agreement(sweep):
    bad = [(inst.q.arrows, inst.d) for inst in sweep.instances if not inst.dimer == inst.evector == inst.oracle]
    types = Counter((inst.q.n, inst.vc.type_tag) for inst in sweep.instances)
    shapes = Counter((q.n, vc.type_tag) for q, vc, _ in sweep.quivers)
    covered = sorted({t for _, t in shapes})
    ok = not bad and sweep.seconds < SWEEP_SECONDS and set(covered) >= {"I", "II", "III", "IV"}
    record(
        "three-way agreement dimer = e-vector = mutation on every catalog vector, n = 4, 5, 6",
        ok,
        f"{len(sweep.instances)} vectors over {len(sweep.quivers)} shapes, types {covered}, "
        f"{len(bad)} mismatches, sweep {sweep.seconds:.0f}s",
    )
    assert not bad, bad[:5]
    assert sweep.seconds < SWEEP_SECONDS
    assert set(covered) >= {"I", "II", "III", "IV"}
    assert all(types[(n, t)] for n, t in shapes)


def test_bijection_suite(sweep):
    problems = []
    checked = 0
    for inst in sweep.instances:
        q, d, sing, g, poset = inst.q, inst.d, inst.singular, inst.g, inst.poset
        indexing = [v.entries for v in enumerate_submodule_indexing(q, d, sing)]
        if len(poset) != len(indexing):
            problems.append(("size", q.arrows, d, len(poset), len(indexing)))
            continue
        by_flips = poset.index()
        recovered = []
        for m in poset.elements:
            e = dimer_to_e(g, m, inst.mmin).entries
            recovered.append(e)
            if e != m.flips:
                problems.append(("dimer_to_e", q.arrows, d, m.flips, e))
        for e in indexing:
            m = e_to_dimer(g, q, d, sing, e)
            k = by_flips.get(e)
            if k is None or poset.elements[k].mult != m.mult:
                problems.append(("e_to_dimer", q.arrows, d, e))
        for lo, hi, tile in poset.covers:
            step = [b - a for a, b in zip(recovered[lo], recovered[hi])]
            if step != [int(i == tile) for i in range(len(d))]:
                problems.append(("order", q.arrows, d, recovered[lo], recovered[hi]))
        checked += len(poset)
    record(
        "bijection: |P| = #submodule-indexing vectors, round trips exact, covers map to unit steps",
        not problems,
        f"{checked} configurations, {len(problems)} problems",
    )
    assert not problems, problems[:5]


def test_multiplicity_identities(sweep):
    bad = []
    edges = 0
    for inst in sweep.instances:
        for m in inst.poset.elements:
            edges += len(m.mult)
            miss = multiplicity_mismatches(inst.g, inst.d, inst.singular, m)
            if miss:
                bad.append((inst.q.arrows, inst.d, m.flips, miss[:3]))
    record(
        "edge multiplicities follow the closed form on arrow, singular-arrow and boundary edges",
        not bad,
        f"{edges} edge checks, {len(bad)} configurations off",
    )
    assert not bad, bad[:5]


def test_cycles_count_free_components(sweep):
    bad = []
    total = 0
    for inst in sweep.instances:
        for m in inst.poset.elements:
            free = sum(1 for _, nu in critical_components(inst.q, inst.d, m.flips, inst.singular) if nu == 0)
            total += 1
            if count_cycles(inst.g, m) != free:
                bad.append((inst.q.arrows, inst.d, m.flips, count_cycles(inst.g, m), free))
    record("cycle count equals the number of critical components with no constraint", not bad, f"{total} configurations, {len(bad)} off")
    assert not bad, bad[:5]


def test_catalog_supports(sweep):
    bad = []
    count = 0
    for q, vc, _ in sweep.quivers:
        for cv in catalog_dvectors(q, vc):
            count += 1
            if not support_is_connected(q, cv.entries) or not twos_form_tree(q, cv.entries):
                bad.append((q.arrows, cv.entries))
    record("every catalog vector has connected support and a connected tree of 2s", not bad, f"{count} vectors, {len(bad)} off")
    assert not bad, bad[:5]


def test_minimal_matching_is_admissible(sweep):
    bad = []
    for inst in sweep.instances:
        if valence_violations(inst.g, inst.d, inst.mmin) or not is_node_monochromatic(inst.g, inst.mmin):
            bad.append((inst.q.arrows, inst.d))
        else:
            check_valence(inst.g, inst.d, inst.mmin)
    record("minimal matching satisfies valence and is node-monochromatic", not bad, f"{len(sweep.instances)} instances, {len(bad)} off")
    assert not bad, bad[:5]


def heptagon_module():
    n = 7
    t = Triangulation(
        n,
        (chord(0, 2, n), chord(0, 3, n), radius(0, n), radius(3, n), radius(5, n), chord(3, 5, n), chord(5, 0, n)),
    )
    return t, module_from_arc(t, loop(2, n))


def test_heptagon_module():
    t, m = heptagon_module()
    w = potential_from_triangulation(t, signed=True)
    checks = {
        "dims": m.dims == (0, 2, 1, 1, 1, 0, 0),
        "singular 4->3": m.singular == frozenset({(3, 2)}),
        "2->1 is (0 1)": m.matrix((1, 0)) == [[0, 1]],
        "2->4 is (1 0)": m.matrix((1, 3)) == [[1, 0]],
        "3->2 is (1 1)^T": m.matrix((2, 1)) == [[1], [1]],
        "relations vanish": relation_residues(m, w) == [],
    }
    failed = [k for k, v in checks.items() if not v]
    detail = "all items hold" if not failed else f"failing: {failed}; map on 2->1 is {m.matrix((1, 0))} because 1-based vertex 1 has dimension 0"
    record("punctured heptagon loop module: dims, singular arrow, printed matrices, relations", not failed, detail)
    assert not failed, failed


def test_mutation_sanity(sweep):
    q = Quiver(5, ((0, 2), (1, 0), (1, 3), (2, 1), (3, 2), (4, 2)))
    seed = mutate_seed(coefficient_free_seed(q), 2)
    x = [Poly.var(5, i) for i in range(5)]
    # x3' * x3 = x1 x4 x5 + x2 in 1-based names
    exchange_ok = seed.cluster[2] * x[2] == x[0] * x[3] * x[4] + x[1]
    twice_ok = mutate_seed(seed, 2).cluster == coefficient_free_seed(q).cluster
    tables = sum(len(enumerate_cluster_variables(shape)) for shape, _, _ in sweep.quivers)
    ok = exchange_ok and twice_ok
    record(
        "exchange x3' = (x1x4x5 + x2)/x3 reproduced; every exchange in the sweep divides exactly",
        ok,
        f"{tables} cluster variables enumerated with no inexact division",
    )
    assert exchange_ok
    assert twice_ok


def test_point_counts_match_oracle(sweep):
    start = time.perf_counter()
    bad = []
    vectors = pairs = 0
    for q, vc, t in sweep.quivers:
        table = enumerate_cluster_variables(q)
        for cv in catalog_dvectors(q, vc):
            d = cv.entries
            if sum(d) > POINT_COUNT_MAX_DIM:
                continue
            m = module_from_arc(t, arc_for_vector(t, d))
            vectors += 1
            for e in product(*[range(x + 1) for x in d]):
                pairs += 1
                value, coeffs = euler_characteristic_by_counting(m, e)
                if value != table[d].coefficient(e) or any(c.denominator != 1 for c in coeffs):
                    bad.append((q.arrows, d, e, value))
    record(
        "point counts over F_2, F_3, F_5 fit an integer polynomial whose value at 1 is the oracle coefficient",
        not bad,
        f"{vectors} vectors of total dimension <= {POINT_COUNT_MAX_DIM}, {pairs} (d, e) pairs, "
        f"{len(bad)} off, {time.perf_counter() - start:.0f}s",
    )
    assert not bad, bad[:5]
