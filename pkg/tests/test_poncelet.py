from fractions import Fraction

import pytest

from porism.geometry import Conic, ProjPoint
from porism.poncelet import (
    Degeneracy,
    NoClosure,
    NoSignChange,
    PonceletPair,
    ValidationFailed,
    certify_pair,
    classify_degenerate,
    default_family,
    degenerate_pairing,
    find_periodic_pair,
    random_origins,
    reverse_step,
    trace,
    transverse_step,
    _origin_on_conic,
)


def test_found_pairs_are_periodic(pair4, pair6):
    assert pair4.period == 4
    assert pair6.period == 6
    assert len(pair4.nodes) == 4
    assert len(pair4.bitangents) == 4


def test_real_bitangents(pair4):
    for b in pair4.bitangents:
        assert b.line.is_real()
        assert pair4.c1.contains(b.touch1)
        assert pair4.c2.contains(b.touch2)


def test_periodicity_from_many_origins(pair4, pair6):
    for pair in (pair4, pair6):
        for origin in random_origins(pair, 6, seed=11):
            t = trace(pair, origin, pair.period)
            assert t.closed and t.period == pair.period


def test_step_applied_period_times_returns_start(pair4):
    origin = _origin_on_conic(pair4.c1, Fraction(1, 9))
    from porism.geometry import tangent_lines_from_point

    l = tangent_lines_from_point(origin, pair4.c2)[0]
    p, cur = origin, l
    for _ in range(pair4.period):
        p, cur = transverse_step(pair4, p, cur)
    assert p.equal(origin, 1e-9)
    assert cur.equal(l, 1e-9)


def test_step_then_reverse_is_identity(pair4):
    origin = _origin_on_conic(pair4.c1, Fraction(2, 11))
    from porism.geometry import tangent_lines_from_point

    l0 = tangent_lines_from_point(origin, pair4.c2)[0]
    p1, l1 = transverse_step(pair4, origin, l0)
    p0, back = reverse_step(pair4, p1, l1)
    assert p0.equal(origin, 1e-9)
    assert back.equal(l0, 1e-9)


def test_no_closure_raised_for_short_budget(pair6):
    origin = _origin_on_conic(pair6.c1, Fraction(1, 9))
    with pytest.raises(NoClosure):
        trace(pair6, origin, max_steps=3)


def test_degenerate_from_bitangent_touch(pair6):
    bit = pair6.bitangents[0]
    t = trace(pair6, bit.touch1, 6, start_line=bit.line)
    assert t.degeneracy is Degeneracy.TWO_BITANGENTS
    assert t.period == 6
    # two bitangent edges, m - 1 = 2 doubled ordinary lines
    label, reflections = classify_degenerate(t, pair6)
    assert label is Degeneracy.TWO_BITANGENTS
    assert len(reflections) == 2


def test_degenerate_from_node(pair6):
    t = trace(pair6, pair6.nodes[0], 6)
    assert t.degeneracy is Degeneracy.TWO_NODE_TANGENTS
    # vertex set has m + 1 = 4 distinct points
    distinct = []
    for p in t.points:
        if not any(p.equal(q, 1e-8) for q in distinct):
            distinct.append(p)
    assert len(distinct) == 4


def test_degenerate_census_counts(pair4, pair6):
    # each even pair: 2 two-bitangent and 2 two-node-tangent transverses
    for pair in (pair4, pair6):
        bit_sets = []
        for b in pair.bitangents:
            t = trace(pair, b.touch1, pair.period, start_line=b.line)
            assert t.degeneracy is Degeneracy.TWO_BITANGENTS
            if not any(all(any(l.equal(r, 1e-8) for r in s) for l in t.lines)
                       for s in bit_sets):
                bit_sets.append(t.lines)
        assert len(bit_sets) == 2
        node_sets = []
        for p in pair.nodes:
            t = trace(pair, p, pair.period)
            assert t.degeneracy is Degeneracy.TWO_NODE_TANGENTS
            if not any(all(any(l.equal(r, 1e-8) for r in s) for l in t.lines)
                       for s in node_sets):
                node_sets.append(t.lines)
        assert len(node_sets) == 2


def test_reflection_symmetry_of_degenerate_lines(pair6):
    bit = pair6.bitangents[0]
    t = trace(pair6, bit.touch1, 6, start_line=bit.line)
    lines = t.lines
    n = len(lines)
    a, b = t.reflections
    # reading forward from one reflection equals reading backward from it
    for k in range(1, n):
        assert lines[(a + k) % n].equal(lines[(a - k) % n], 1e-8)
    assert (b - a) % n == n // 2


def test_odd_period_mixed_degeneracies():
    pair5 = find_periodic_pair(5)
    assert pair5.period == 5
    assert pair5.bitangent_pairing == ()
    mixed = 0
    for b in pair5.bitangents:
        t = trace(pair5, b.touch1, 5, start_line=b.line)
        assert t.degeneracy is Degeneracy.MIXED
        mixed += 1
    for p in pair5.nodes:
        t = trace(pair5, p, 5)
        assert t.degeneracy is Degeneracy.MIXED
    assert mixed == 4


def test_degenerate_pairing_partition(pair4, pair6):
    for pair in (pair4, pair6):
        pairing = pair.bitangent_pairing
        assert len(pairing) == 2
        flat = sorted(i for grp in pairing for i in grp)
        assert flat == [0, 1, 2, 3]
        # both touch points of one bitangent recover the same transverse
        i = pairing[0][0]
        bit = pair.bitangents[i]
        t1 = trace(pair, bit.touch1, pair.period, start_line=bit.line)
        partner = pair.bitangents[pairing[0][1]]
        assert any(l.equal(partner.line, 1e-8) for l in t1.lines)


def test_no_sign_change_on_bad_bracket():
    with pytest.raises(NoSignChange):
        find_periodic_pair(4, bracket=(0.6, 0.62))


def test_validation_rejects_perturbed_pair(pair4):
    coeffs = [c.value.real for c in pair4.c1.coeffs()]
    coeffs[0] += 1e-4
    c1 = Conic.from_coeffs(coeffs)
    with pytest.raises(ValidationFailed):
        certify_pair(c1, pair4.c2, 4)


def test_certify_pair_round_trips_found_pair(pair4):
    again = certify_pair(pair4.c1, pair4.c2, 4)
    assert again.period == 4
    assert again.bitangent_pairing == pair4.bitangent_pairing


def test_complex_origin_still_closes(pair4):
    # an origin inside the circle has complex tangents; closure is projective
    origin = _origin_on_conic(pair4.c1, Fraction(10, 11))
    x, y, _ = origin.normalized().float_coords()
    t = trace(pair4, origin, 4)
    assert t.period == 4
