"""Splitting types, combinatorial signatures and Zariski-pair certificates.

Two arrangements with the same combinatorial type can still be embedded
differently in the plane.  For a pair of conics that both split in a
double cover branched along the remaining lines, the distribution of the
four conic nodes between the sheet intersections is a homeomorphism
invariant: the splitting type ``(m1, m2)``.  Equal combinatorics plus
distinct splitting types certify a Zariski pair; equal splitting types
certify nothing, which the verdict taxonomy keeps explicit.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .covers import (
    BranchDivisor,
    Component,
    NodalArrangement,
    OddMultiplicity,
    SupportHitsNode,
    _conic_on_line,
    _pair_intersections,
    induced_gluing,
)
from .geometry import COINCIDENCE_TOL, Conic, ProjLine, ProjPoint, lines_meet
from .numeric import DEFAULT_ZERO_TOL, CertPoly, certified_small


class HypothesisViolation(Exception):
    """A hypothesis needed by the splitting-type comparison fails."""


@dataclass(frozen=True, order=True)
class SplittingType:
    m1: int
    m2: int

    def __post_init__(self):
        if self.m1 > self.m2:
            raise ValueError("splitting type is ordered: m1 <= m2")

    def __str__(self):
        return f"({self.m1},{self.m2})"


def splitting_type(c1: Conic, c2: Conic, b: BranchDivisor,
                   arrangement: NodalArrangement | None = None) -> SplittingType:
    """Splitting type of the conic pair with respect to the branch curve.

    Both conics split because their branch restrictions are squares; a
    node glued by '+' contributes to the plus-plus sheet intersection, so
    the two sheet intersection numbers are the sign counts, which the
    component flips can only swap.
    """
    arr = arrangement or NodalArrangement.from_conic_pair(c1, c2)
    try:
        g = induced_gluing(b, arr)
    except SupportHitsNode as e:
        raise HypothesisViolation(str(e)) from e
    plus = sum(1 for s in g.signs if s == 0)
    minus = len(g.signs) - plus
    st = SplittingType(min(plus, minus), max(plus, minus))
    object.__setattr__(st, "_precision_used", g._precision_used)
    return st


# -- combinatorial signatures --------------------------------------------------


@dataclass(frozen=True)
class CombSignature:
    """Canonicalized combinatorics of a conic-line arrangement.

    ``degrees`` is the multiset of component degrees; each point record is
    ``(incident degrees, ((deg, deg, local multiplicity), ...))`` with all
    tuples sorted, so equality is label independent.
    """

    degrees: tuple
    points: tuple

    def counts(self) -> tuple:
        c = Counter(self.points)
        return tuple(sorted(c.items()))

    def __str__(self):
        lines = [f"components by degree: {list(self.degrees)}"]
        for rec, cnt in self.counts():
            lines.append(f"  {cnt} x degrees {list(rec[0])} mults "
                         f"{[m for _, _, m in rec[1]]}")
        return "\n".join(lines)


def comb_signature(components, tol: float = COINCIDENCE_TOL) -> CombSignature:
    """Compute the canonical combinatorial signature of an arrangement.

    All pairwise intersections are computed with local multiplicities
    (transversal 1, simple tangency 2), coincident points are clustered at
    ``tol``, and each cluster becomes one singular-point record.
    """
    comps = tuple(components)
    _reject_duplicates(comps, tol)
    records = []  # (normalized point, (i, j), mult)
    for i in range(len(comps)):
        for j in range(i + 1, len(comps)):
            for pt, mult in _pair_intersections(comps[i], comps[j]):
                records.append((pt.normalized(), (i, j), mult))
    clusters = _cluster_points(records, tol)
    point_records = []
    for cluster in clusters:
        incident = sorted({k for _, pair, _ in cluster for k in pair})
        pair_mults = tuple(sorted(
            (min(comps[i].degree, comps[j].degree),
             max(comps[i].degree, comps[j].degree),
             mult)
            for _, (i, j), mult in cluster
        ))
        expected_pairs = len(incident) * (len(incident) - 1) // 2
        if len(cluster) != expected_pairs:
            raise HypothesisViolation(
                "inconsistent clustering: a component pair is missing at a "
                "multiple point")
        degrees = tuple(sorted(comps[k].degree for k in incident))
        point_records.append((degrees, pair_mults))
    return CombSignature(
        degrees=tuple(sorted(c.degree for c in comps)),
        points=tuple(sorted(point_records)),
    )


def _reject_duplicates(comps, tol):
    for i in range(len(comps)):
        for j in range(i + 1, len(comps)):
            a, b = comps[i], comps[j]
            if a.kind != b.kind:
                continue
            if a.kind == "line" and a.geom.equal(b.geom, tol):
                raise HypothesisViolation(f"components {i} and {j} coincide")
            if a.kind == "conic" and a.geom.same_as(b.geom, tol):
                raise HypothesisViolation(f"components {i} and {j} coincide")


def _cluster_points(records, tol):
    n = len(records)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if find(i) == find(j):
                continue
            if records[i][0].equal(records[j][0], tol):
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(records[i])
    return list(groups.values())


# -- hypothesis audits ---------------------------------------------------------


def branch_avoids_nodes(c1: Conic, c2: Conic, b: BranchDivisor,
                        tol: float = 1e-9) -> bool:
    """Certified check that no branch line meets a node of the conic pair."""
    arr = NodalArrangement.from_conic_pair(c1, c2)
    for p, _ in arr.nodes:
        phat = p.normalized()
        for l in b.lines:
            val = sum(a * c for a, c in zip(l.coords, phat.coords))
            scale = 3 * max(float(x.abs_upper()) for x in l.coords) \
                * max(float(x.abs_upper()) for x in phat.coords)
            if certified_small(val, tol * scale):
                return False
    return True


def lines_tangency_audit(c1: Conic, c2: Conic, transverse_lines,
                         bitangent_lines, tol: float = 1e-9) -> dict:
    """Configuration checks behind the equal-combinatorics argument.

    All lines are tangent to the second conic, so no three can be
    concurrent; a transverse line and a bitangent must not meet on either
    conic.  Both facts are re-certified on the concrete coordinates.
    """
    all_lines = list(transverse_lines) + list(bitangent_lines)
    meets = {}
    for i in range(len(all_lines)):
        for j in range(i + 1, len(all_lines)):
            meets[(i, j)] = lines_meet(all_lines[i], all_lines[j]).normalized()
    no_three = True
    keys = list(meets)
    for a in range(len(keys)):
        for bkey in range(a + 1, len(keys)):
            ka, kb = keys[a], keys[bkey]
            if set(ka) & set(kb):
                continue
            if meets[ka].equal(meets[kb], COINCIDENCE_TOL):
                no_three = False
    off_conics = True
    nt = len(transverse_lines)
    for i in range(nt):
        for j in range(nt, len(all_lines)):
            pt = meets[(i, j)]
            for conic in (c1, c2):
                scale = conic.scale_upper() * max(
                    1.0, max(float(x.abs_upper()) for x in pt.coords)) ** 2
                if certified_small(conic.evaluate(pt), tol * scale):
                    off_conics = False
    return {"no_three_concurrent": no_three,
            "mixed_meets_off_conics": off_conics}


# -- certificates ---------------------------------------------------------------


class Verdict(Enum):
    ZARISKI_PAIR = "ZariskiPair"
    INDISTINGUISHABLE = "Indistinguishable"
    HYPOTHESIS_FAILED = "HypothesisFailed"


@dataclass(frozen=True)
class ZariskiCertificate:
    """Machine-checkable record distinguishing (or not) two arrangements."""

    pair_id: str
    comb_equal: bool
    splitting_a: SplittingType | None
    splitting_b: SplittingType | None
    hypotheses: tuple  # ((name, bool), ...)
    verdict: Verdict
    tolerances: tuple  # ((name, value), ...)
    precision_used: int

    def to_dict(self) -> dict:
        return {
            "pair_id": self.pair_id,
            "comb_equal": self.comb_equal,
            "splitting_a": str(self.splitting_a) if self.splitting_a else None,
            "splitting_b": str(self.splitting_b) if self.splitting_b else None,
            "hypotheses": {k: v for k, v in self.hypotheses},
            "verdict": self.verdict.value,
            "tolerances": {k: v for k, v in self.tolerances},
            "precision_used": self.precision_used,
        }

    def to_text(self) -> str:
        lines = [f"certificate {self.pair_id}",
                 f"  comb_equal      {self.comb_equal}",
                 f"  splitting_a     {self.splitting_a}",
                 f"  splitting_b     {self.splitting_b}"]
        for k, v in self.hypotheses:
            lines.append(f"  hypothesis {k:<22} {v}")
        lines.append(f"  precision_used  {self.precision_used} bits")
        for k, v in self.tolerances:
            lines.append(f"  tolerance {k:<23} {v}")
        lines.append(f"  verdict         {self.verdict.value}")
        return "\n".join(lines)


def zariski_certificate(arr_a, arr_b, c1: Conic, c2: Conic,
                        b_a: BranchDivisor, b_b: BranchDivisor,
                        pair_id: str = "A-vs-B") -> ZariskiCertificate:
    """Assemble the certificate for two arrangements over one conic pair.

    ``arr_a`` and ``arr_b`` are the full component lists (conics plus
    lines); the branch divisors are the line parts.  The verdict is
    ``ZariskiPair`` only when the combinatorial signatures agree, the
    hypotheses certify, and the splitting types differ.
    """
    sig_a = comb_signature(arr_a)
    sig_b = comb_signature(arr_b)
    comb_equal = sig_a == sig_b

    nodal = NodalArrangement.from_conic_pair(c1, c2)
    hyp = {"conics_transversal": True}
    hyp["branch_a_avoids_nodes"] = branch_avoids_nodes(c1, c2, b_a)
    hyp["branch_b_avoids_nodes"] = branch_avoids_nodes(c1, c2, b_b)

    audits = []
    for arr, branch in ((arr_a, b_a), (arr_b, b_b)):
        trans, bits = _split_roles(c1, c2, branch)
        audits.append(lines_tangency_audit(c1, c2, trans, bits))
    hyp["no_three_concurrent"] = all(a["no_three_concurrent"] for a in audits)
    hyp["mixed_meets_off_conics"] = all(a["mixed_meets_off_conics"]
                                        for a in audits)

    splitting_a = splitting_b = None
    precision = 64
    hypotheses_ok = all(hyp.values())
    if hypotheses_ok:
        try:
            splitting_a = splitting_type(c1, c2, b_a, nodal)
            splitting_b = splitting_type(c1, c2, b_b, nodal)
            precision = max(splitting_a._precision_used,
                            splitting_b._precision_used)
        except (HypothesisViolation, OddMultiplicity) as e:
            hyp["splitting_computable"] = False
            hypothesis_note = str(e)
            hypotheses_ok = False

    if not (comb_equal and hypotheses_ok):
        verdict = Verdict.HYPOTHESIS_FAILED
    elif splitting_a != splitting_b:
        verdict = Verdict.ZARISKI_PAIR
    else:
        verdict = Verdict.INDISTINGUISHABLE

    return ZariskiCertificate(
        pair_id=pair_id,
        comb_equal=comb_equal,
        splitting_a=splitting_a,
        splitting_b=splitting_b,
        hypotheses=tuple(sorted(hyp.items())),
        verdict=verdict,
        tolerances=(
            ("coincidence", COINCIDENCE_TOL),
            ("zero", DEFAULT_ZERO_TOL),
            ("node_avoidance", 1e-9),
        ),
        precision_used=precision,
    )


def _split_roles(c1: Conic, c2: Conic, branch: BranchDivisor):
    """Separate branch lines into bitangents and ordinary tangents of C2."""
    trans, bits = [], []
    for l in branch.lines:
        (bits if c1.is_tangent(l) else trans).append(l)
    return trans, bits


# -- the Salmon rank check ------------------------------------------------------


def conic_monomial_matrix(points) -> tuple[np.ndarray, float]:
    """Complex matrix of conic monomials at normalized points, with a
    certified entrywise radius bound (Frobenius)."""
    rows = []
    rad2 = 0.0
    for p in points:
        n = p.normalized()
        x, y, z = n.coords
        entries = [x * x, x * y, y * y, x * z, y * z, z * z]
        rows.append([e.value for e in entries])
        rad2 += sum(float(e.radius_mpf) ** 2 for e in entries)
    return np.array(rows, dtype=complex), rad2 ** 0.5


def salmon_rank_check(pair, rel_tol: float = 1e-10) -> dict:
    """Certify that the eight bitangent tangency points lie on one conic.

    The 8x6 matrix of conic monomials must have rank 5: its smallest
    singular value certifies below ``rel_tol`` relative to the largest,
    and the fifth one certifies nonzero.  The bound combines the entry
    radii (Weyl perturbation) with a backward-stability allowance for the
    floating SVD.
    """
    points = []
    for b in pair.bitangents:
        points.append(b.touch1)
        points.append(b.touch2)
    for p in points:
        for c in p.coords:
            c.ensure_radius_below(1e-14)
    matrix, frob = conic_monomial_matrix(points)
    svals = np.linalg.svd(matrix, compute_uv=False)
    bound = frob + 50 * np.finfo(float).eps * svals[0]
    rank5 = svals[5] + bound < rel_tol * (svals[0] - bound)
    fifth_nonzero = svals[4] - bound > rel_tol * (svals[0] + bound)
    return {
        "singular_values": [float(s) for s in svals],
        "perturbation_bound": float(bound),
        "rank_le_5": bool(rank5),
        "rank_eq_5": bool(rank5 and fifth_nonzero),
    }
