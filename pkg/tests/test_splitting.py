import itertools
from fractions import Fraction

import pytest

from porism.covers import BranchDivisor, conic_component, line_component
from porism.geometry import Conic, ProjLine, ProjPoint
from porism.splitting import (
    CombSignature,
    HypothesisViolation,
    SplittingType,
    Verdict,
    branch_avoids_nodes,
    comb_signature,
    splitting_type,
    zariski_certificate,
)

UNIT_CIRCLE = Conic.from_coeffs([1, 0, 1, 0, 0, -1])


def components_for(pair, transverse, i, j):
    comps = [conic_component(pair.c1), conic_component(pair.c2)]
    comps += [line_component(l) for l in transverse.lines]
    comps += [line_component(pair.bitangents[i].line),
              line_component(pair.bitangents[j].line)]
    return comps


def branch_for(pair, transverse, i, j):
    return BranchDivisor(lines=transverse.lines + (pair.bitangents[i].line,
                                                   pair.bitangents[j].line))


def test_splitting_type_ordering():
    with pytest.raises(ValueError):
        SplittingType(3, 1)
    assert str(SplittingType(0, 4)) == "(0,4)"


def test_bitangent_pairs_all_2_2(pair4):
    for i, j in itertools.combinations(range(4), 2):
        b = BranchDivisor(lines=(pair4.bitangents[i].line,
                                 pair4.bitangents[j].line))
        st = splitting_type(pair4.c1, pair4.c2, b)
        assert (st.m1, st.m2) == (2, 2)


def test_splitting_partition_by_pairing(pair4, transverse4):
    paired = set(pair4.bitangent_pairing)
    for i, j in itertools.combinations(range(4), 2):
        st = splitting_type(pair4.c1, pair4.c2,
                            branch_for(pair4, transverse4, i, j))
        if (i, j) in paired:
            assert st == SplittingType(0, 4)
        else:
            assert st == SplittingType(2, 2)
        assert st.m1 + st.m2 == 4


def test_splitting_sum_is_four_period6(pair6, transverse6):
    for i, j in itertools.combinations(range(4), 2):
        st = splitting_type(pair6.c1, pair6.c2,
                            branch_for(pair6, transverse6, i, j))
        assert st.m1 + st.m2 == 4


def test_comb_signature_two_conics(pair4):
    sig = comb_signature([conic_component(pair4.c1), conic_component(pair4.c2)])
    assert sig.degrees == (2, 2)
    assert sig.points == (((2, 2), ((2, 2, 1),)),) * 4


def test_comb_signature_conic_pair_plus_bitangent(pair4):
    comps = [conic_component(pair4.c1), conic_component(pair4.c2),
             line_component(pair4.bitangents[0].line)]
    sig = comb_signature(comps)
    counts = dict(sig.counts())
    # 4 conic nodes and 2 simple tangencies of the bitangent
    assert counts[((2, 2), ((2, 2, 1),))] == 4
    assert counts[((1, 2), ((1, 2, 2),))] == 2


def test_comb_signatures_equal_across_choices(pair4, transverse4):
    sigs = [
        comb_signature(components_for(pair4, transverse4, i, j))
        for i, j in itertools.combinations(range(4), 2)
    ]
    assert all(s == sigs[0] for s in sigs)


def test_comb_signature_structure_period4(pair4, transverse4):
    sig = comb_signature(components_for(pair4, transverse4, 0, 1))
    counts = dict(sig.counts())
    n = pair4.period
    # polygon vertices are ordinary triple points: conic + two lines
    assert counts[((1, 1, 2), ((1, 1, 1), (1, 2, 1), (1, 2, 1)))] == n
    # tangencies: n on the inner conic plus 4 bitangent tangency points
    assert counts[((1, 2), ((1, 2, 2),))] == n + 4
    # the four nodes of the conic pair
    assert counts[((2, 2), ((2, 2, 1),))] == 4
    # line-line crossings: C(n+2, 2) pairs minus n absorbed by the vertices
    expected = (n + 2) * (n + 1) // 2 - n
    assert counts[((1, 1), ((1, 1, 1),))] == expected


def test_comb_signature_invariant_under_projective_change(pair4, transverse4):
    from porism.geometry import transform_line

    a = ((1, 1, 0), (0, 2, 1), (1, 0, 1))
    comps = components_for(pair4, transverse4, 0, 2)
    moved = []
    for c in comps:
        if c.kind == "conic":
            moved.append(conic_component(c.geom.transform(a)))
        else:
            moved.append(line_component(transform_line(a, c.geom)))
    assert comb_signature(moved) == comb_signature(comps)


def test_comb_signature_detects_difference(pair4, transverse4):
    # dropping a line changes the combinatorics
    full = comb_signature(components_for(pair4, transverse4, 0, 1))
    partial = comb_signature(components_for(pair4, transverse4, 0, 1)[:-1])
    assert full != partial


def test_duplicate_component_rejected(pair4):
    comps = [conic_component(pair4.c1), conic_component(pair4.c1)]
    with pytest.raises(HypothesisViolation):
        comb_signature(comps)


def test_branch_avoids_nodes(pair4, transverse4):
    b = branch_for(pair4, transverse4, 0, 1)
    assert branch_avoids_nodes(pair4.c1, pair4.c2, b)
    from porism.geometry import line_through

    nodes = [p for p in pair4.nodes]
    bad = BranchDivisor(lines=(line_through(nodes[0], nodes[1]),
                               pair4.bitangents[0].line))
    assert not branch_avoids_nodes(pair4.c1, pair4.c2, bad)


def test_zariski_certificate_paired_vs_cross(pair4, transverse4):
    (i, j), _ = pair4.bitangent_pairing
    k, l = 0, 2
    cert = zariski_certificate(
        components_for(pair4, transverse4, i, j),
        components_for(pair4, transverse4, k, l),
        pair4.c1, pair4.c2,
        branch_for(pair4, transverse4, i, j),
        branch_for(pair4, transverse4, k, l),
        pair_id="paired-vs-cross",
    )
    assert cert.comb_equal
    assert cert.verdict is Verdict.ZARISKI_PAIR
    assert {cert.splitting_a, cert.splitting_b} == \
        {SplittingType(0, 4), SplittingType(2, 2)}
    assert cert.precision_used <= 256
    d = cert.to_dict()
    assert d["verdict"] == "ZariskiPair"
    assert "tolerances" in d and "precision_used" in d


def test_zariski_certificate_indistinguishable_cases(pair4, transverse4):
    paired = list(pair4.bitangent_pairing)
    cert = zariski_certificate(
        components_for(pair4, transverse4, *paired[0]),
        components_for(pair4, transverse4, *paired[1]),
        pair4.c1, pair4.c2,
        branch_for(pair4, transverse4, *paired[0]),
        branch_for(pair4, transverse4, *paired[1]),
        pair_id="both-paired",
    )
    assert cert.verdict is Verdict.INDISTINGUISHABLE
    cross = [key for key in itertools.combinations(range(4), 2)
             if key not in pair4.bitangent_pairing]
    cert2 = zariski_certificate(
        components_for(pair4, transverse4, *cross[0]),
        components_for(pair4, transverse4, *cross[1]),
        pair4.c1, pair4.c2,
        branch_for(pair4, transverse4, *cross[0]),
        branch_for(pair4, transverse4, *cross[1]),
        pair_id="both-cross",
    )
    assert cert2.verdict is Verdict.INDISTINGUISHABLE
    assert cert2.splitting_a == cert2.splitting_b == SplittingType(2, 2)


def test_certificate_text_format(pair4, transverse4):
    cert = zariski_certificate(
        components_for(pair4, transverse4, 0, 1),
        components_for(pair4, transverse4, 0, 2),
        pair4.c1, pair4.c2,
        branch_for(pair4, transverse4, 0, 1),
        branch_for(pair4, transverse4, 0, 2),
        pair_id="text-check",
    )
    text = cert.to_text()
    assert "verdict" in text and "text-check" in text
    assert str(cert.splitting_a) in text
