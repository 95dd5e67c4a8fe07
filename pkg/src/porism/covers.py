"""Unramified double covers of conic-line arrangements via node signs.

A double cover of an arrangement whose components are rational curves is
determined, up to the relabeling of sheets, by a sign at every node: '+'
glues the two plus-sheets (and the two minus-sheets) of the incident
components, '-' glues plus to minus.  Relabeling the sheets over one
component flips the signs at all of its nodes, so covers correspond to
sign vectors modulo the GF(2) row space of the component-node incidence
matrix.  Tensoring order-2 sheaves multiplies their node signs, hence is
XOR on sign vectors.

The sign vector induced by a plane double cover branched along a curve
``F = 0`` is computed per component: the restriction of ``F`` to the
component is an exact square (even intersection multiplicities), its
polynomial square root plays the role of a fiber coordinate, and the sign
at a node is the certified ratio of the two component square roots there.
Flipping a component's square-root branch is exactly a component flip, so
the equivalence class is well defined.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .geometry import (
    COINCIDENCE_TOL,
    Conic,
    ConicParam,
    HomPoly,
    LineParam,
    ProjLine,
    ProjPoint,
    intersect_conics,
    parametrize,
    restrict_poly,
)
from .numeric import (
    DEFAULT_MAX_DOUBLINGS,
    CertNumber,
    CertPoly,
    NotASquare,
    PrecisionExhausted,
    Sign,
    as_cert,
    certified_small,
    certify_sign,
    poly_sqrt,
)


class ArrangementMismatch(Exception):
    """Gluing data over different arrangements cannot be combined."""


class NotSimpleNodes(Exception):
    """The component intersections are not all ordinary double points."""


class OddMultiplicity(Exception):
    """The branch curve meets a component with an odd local multiplicity."""


class SupportHitsNode(Exception):
    """The branch curve passes through a node of the arrangement."""


class SignUncertified(Exception):
    """A node sign ratio could not be certified against {+1, -1}."""


@dataclass(frozen=True)
class Component:
    kind: str  # "line" or "conic"
    geom: object  # ProjLine or Conic

    @property
    def degree(self) -> int:
        return 1 if self.kind == "line" else 2


def line_component(l: ProjLine) -> Component:
    return Component(kind="line", geom=l)


def conic_component(c: Conic) -> Component:
    return Component(kind="conic", geom=c)


class NodalArrangement:
    """A reduced conic-line curve with ordered, certified simple nodes.

    Node order is deterministic: sorted by the normalized coordinates of
    the node, ties broken by the incident component pair, so sign vectors
    are reproducible across runs.
    """

    def __init__(self, components: Sequence[Component], nodes, incidence):
        self.components = tuple(components)
        self.nodes = tuple(nodes)  # ((ProjPoint, (i, j)), ...)
        self.incidence = incidence  # uint8 array, components x nodes

    @classmethod
    def from_components(cls, components: Sequence[Component],
                        tol: float = COINCIDENCE_TOL) -> "NodalArrangement":
        comps = tuple(components)
        for i in range(len(comps)):
            for j in range(i + 1, len(comps)):
                a, b = comps[i], comps[j]
                if a.kind != b.kind:
                    continue
                same = (a.geom.equal(b.geom, tol) if a.kind == "line"
                        else a.geom.same_as(b.geom, tol))
                if same:
                    raise NotSimpleNodes(
                        f"components {i} and {j} coincide; the curve must "
                        f"be reduced")
        records = []
        for i in range(len(comps)):
            for j in range(i + 1, len(comps)):
                for pt, mult in _pair_intersections(comps[i], comps[j]):
                    if mult != 1:
                        raise NotSimpleNodes(
                            f"components {i},{j} meet with multiplicity {mult}")
                    records.append((pt.normalized(), (i, j)))
        for a in range(len(records)):
            for b in range(a + 1, len(records)):
                if records[a][0].equal(records[b][0], tol):
                    raise NotSimpleNodes(
                        f"three components meet near {records[a][0]}")
        records.sort(key=lambda r: (r[0].sort_key(), r[1]))
        inc = np.zeros((len(comps), len(records)), dtype=np.uint8)
        for col, (_, (i, j)) in enumerate(records):
            inc[i, col] = 1
            inc[j, col] = 1
        return cls(comps, records, inc)

    @classmethod
    def from_conic_pair(cls, c1: Conic, c2: Conic) -> "NodalArrangement":
        return cls.from_components([conic_component(c1), conic_component(c2)])

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    def node_points(self) -> tuple:
        return tuple(p for p, _ in self.nodes)

    def __repr__(self):
        kinds = ",".join(c.kind for c in self.components)
        return f"NodalArrangement({kinds}; {self.num_nodes} nodes)"


def _pair_intersections(a: Component, b: Component):
    from .numeric import poly_roots

    if a.kind == "line" and b.kind == "line":
        from .geometry import lines_meet

        return [(lines_meet(a.geom, b.geom), 1)]
    if a.kind == "conic" and b.kind == "conic":
        inter = intersect_conics(a.geom, b.geom)
        return list(inter.points)
    line = a.geom if a.kind == "line" else b.geom
    conic = a.geom if a.kind == "conic" else b.geom
    param = LineParam(line)
    full = CertPoly(_conic_on_line(conic, param))
    chopped = full.chop()
    out = []
    inf_mult = full.degree - chopped.degree
    if chopped.degree >= 1:
        for root, mult in poly_roots(chopped):
            out.append((param.point_at(root), mult))
    if inf_mult:
        out.append((param.infinity_point(), inf_mult))
    return out


def _conic_on_line(conic: Conic, param: LineParam):
    """Quadratic in t of the conic form along X = t A + s B, ascending."""
    from .geometry import _bilinear, _quadform

    a = param.a.coords
    b = param.b.coords
    m = conic.matrix
    return [_quadform(m, b), _bilinear(m, a, b) * 2, _quadform(m, a)]


# -- gluing data -------------------------------------------------------------


@dataclass(frozen=True)
class GluingData:
    """Signs over the nodes of an arrangement: 0 is '+', 1 is '-'."""

    arrangement: NodalArrangement
    signs: tuple

    def __post_init__(self):
        if len(self.signs) != self.arrangement.num_nodes:
            raise ArrangementMismatch("sign vector length differs from node count")

    def __str__(self):
        return "".join("+" if s == 0 else "-" for s in self.signs)

    @classmethod
    def from_string(cls, arrangement: NodalArrangement, text: str) -> "GluingData":
        signs = tuple(0 if ch == "+" else 1 for ch in text)
        return cls(arrangement, signs)

    def is_trivial_vector(self) -> bool:
        return all(s == 0 for s in self.signs)


@dataclass(frozen=True)
class GluingClass:
    """The lexicographically minimal coset member under component flips."""

    canonical: GluingData

    def __str__(self):
        return str(self.canonical)

    def __eq__(self, other):
        return (self.canonical.arrangement is other.canonical.arrangement
                and self.canonical.signs == other.canonical.signs)

    def __hash__(self):
        return hash((id(self.canonical.arrangement), self.canonical.signs))

    def is_trivial(self) -> bool:
        return self.canonical.is_trivial_vector()


def _check_same(k1: GluingData, k2: GluingData):
    if k1.arrangement is not k2.arrangement:
        raise ArrangementMismatch("gluing data over different arrangements")


def flip(k: GluingData, i: int) -> GluingData:
    """Reverse the sheet labels over component ``i``."""
    row = k.arrangement.incidence[i]
    signs = tuple(int(s ^ int(r)) for s, r in zip(k.signs, row))
    return GluingData(k.arrangement, signs)


def tensor(k1: GluingData, k2: GluingData) -> GluingData:
    _check_same(k1, k2)
    return GluingData(k1.arrangement,
                      tuple(a ^ b for a, b in zip(k1.signs, k2.signs)))


def _rref(matrix: np.ndarray) -> np.ndarray:
    a = (matrix & 1).astype(np.uint8).copy()
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        pivots = np.nonzero(a[r:, c])[0]
        if pivots.size == 0:
            continue
        p = r + int(pivots[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        others = np.nonzero(a[:, c])[0]
        for o in others:
            if o != r:
                a[o] ^= a[r]
        r += 1
    return a[:r]


def _reduce(signs: tuple, basis: np.ndarray) -> tuple:
    v = np.array(signs, dtype=np.uint8)
    for row in basis:
        pivot = int(np.argmax(row))
        if row[pivot] and v[pivot]:
            v ^= row
    return tuple(int(x) for x in v)


def equivalent(k1: GluingData, k2: GluingData) -> bool:
    """True iff the data differ by component flips (same cover)."""
    _check_same(k1, k2)
    basis = _rref(k1.arrangement.incidence)
    diff = tuple(a ^ b for a, b in zip(k1.signs, k2.signs))
    return all(x == 0 for x in _reduce(diff, basis))


def canonical_form(k: GluingData) -> GluingClass:
    basis = _rref(k.arrangement.incidence)
    return GluingClass(GluingData(k.arrangement, _reduce(k.signs, basis)))


def enumerate_pic2(a: NodalArrangement) -> list[GluingClass]:
    """All order-2 classes: one canonical vector per flip coset.

    There are ``2^(nodes - rank)`` of them, supported on the non-pivot
    node columns of the incidence matrix; the list is closed under tensor
    and starts with the trivial class.
    """
    basis = _rref(a.incidence)
    pivots = {int(np.argmax(row)) for row in basis if row.any()}
    free = [c for c in range(a.num_nodes) if c not in pivots]
    out = []
    for mask in range(1 << len(free)):
        signs = [0] * a.num_nodes
        for bit, col in enumerate(free):
            if (mask >> bit) & 1:
                signs[col] = 1
        out.append(GluingClass(GluingData(a, tuple(signs))))
    out.sort(key=lambda g: g.canonical.signs)
    return out


@dataclass(frozen=True)
class AbstractCover:
    """The glued two-sheet cover: sheets, node gluings, connectivity."""

    sheets: tuple  # ((component index, +1|-1), ...)
    edges: tuple  # per node: ((sheet, sheet), (sheet, sheet))
    components: tuple  # frozensets partitioning the sheets

    @property
    def is_connected(self) -> bool:
        return len(self.components) == 1

    def component_sizes(self) -> tuple:
        return tuple(sorted(len(c) for c in self.components))


def build_cover(k: GluingData) -> AbstractCover:
    arr = k.arrangement
    sheets = tuple((i, sgn) for i in range(len(arr.components)) for sgn in (1, -1))
    parent = {s: s for s in sheets}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        parent[find(x)] = find(y)

    edges = []
    for (_, (i, j)), s in zip(arr.nodes, k.signs):
        if s == 0:
            pair = (((i, 1), (j, 1)), ((i, -1), (j, -1)))
        else:
            pair = (((i, 1), (j, -1)), ((i, -1), (j, 1)))
        for x, y in pair:
            union(x, y)
        edges.append(pair)
    groups: dict = {}
    for s in sheets:
        groups.setdefault(find(s), set()).add(s)
    comps = tuple(sorted((frozenset(g) for g in groups.values()),
                         key=lambda g: sorted(g)))
    return AbstractCover(sheets=sheets, edges=tuple(edges), components=comps)


# -- branch divisors and induced covers ---------------------------------------


@dataclass(frozen=True)
class BranchDivisor:
    """An even-degree union of lines, the branch curve of a plane double cover."""

    lines: tuple  # ProjLine entries

    @property
    def degree(self) -> int:
        return len(self.lines)

    def evaluate(self, p: ProjPoint) -> CertNumber:
        total = as_cert(1)
        for l in self.lines:
            total = total * _dot3(l.coords, p.coords)
        return total

    def hom_poly(self) -> HomPoly:
        poly = HomPoly.from_line(self.lines[0])
        for l in self.lines[1:]:
            poly = poly * HomPoly.from_line(l)
        return poly

    def restricted(self, param) -> CertPoly:
        """Restriction to a component chart, built line by line."""
        coords = param.coordinate_polys()
        total = None
        for l in self.lines:
            a, b, c = l.coords
            piece = coords[0].scale(a) + coords[1].scale(b) + coords[2].scale(c)
            total = piece if total is None else total * piece
        return total


def _dot3(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _component_param(comp: Component, node_points, tol: float = 1e-6):
    """A chart of the component whose node parameters stay finite."""
    for probe in range(8):
        param = (parametrize(comp.geom, probe=probe) if comp.kind == "conic"
                 else LineParam(comp.geom, probe=probe))
        ok = True
        for p in node_points:
            if comp.kind == "conic" and p.equal(param.base, 1e-5):
                ok = False
                break
            t, s = param.param_of(p)
            ts = max(abs(t.value), abs(s.value))
            if ts == 0 or abs(s.value) < tol * ts:
                ok = False
                break
        if ok:
            return param
    raise PrecisionExhausted("no chart keeps all node parameters finite")


def induced_gluing(b: BranchDivisor, a: NodalArrangement,
                   max_doublings: int = DEFAULT_MAX_DOUBLINGS) -> GluingData:
    """Node signs of the double cover of ``a`` induced by the branch ``b``.

    Preconditions certified along the way: the branch degree is even, the
    restriction to every component is a polynomial square (all local
    intersection multiplicities even), and no node lies on the branch
    curve.  The returned representative depends on per-component branch
    choices; its class does not.
    """
    if b.degree % 2 != 0:
        raise OddMultiplicity(f"branch degree {b.degree} is odd")
    half_degree = b.degree // 2

    node_pts = a.node_points()
    params = []
    sqrts = []
    for idx, comp in enumerate(a.components):
        incident = [p for p, (i, j) in a.nodes if idx in (i, j)]
        param = _component_param(comp, incident)
        restricted = b.restricted(param).chop()
        if restricted.degree % 2 != 0:
            raise OddMultiplicity(
                f"restriction to component {idx} has odd degree "
                f"{restricted.degree}")
        try:
            s = poly_sqrt(restricted, max_doublings=max_doublings)
        except NotASquare as e:
            raise OddMultiplicity(
                f"restriction to component {idx} is not a square: {e}") from e
        params.append(param)
        sqrts.append(s)

    signs = []
    precision_used = 0
    for p, (i, j) in a.nodes:
        phat = p.normalized()
        for l in b.lines:
            val = _dot3(l.coords, phat.coords)
            scale = 3 * max(float(c.abs_upper()) for c in l.coords) \
                * max(float(c.abs_upper()) for c in phat.coords)
            if certified_small(val, 1e-9 * scale, max_doublings):
                raise SupportHitsNode(
                    f"a branch line passes through node {phat}")
        sigma_i = _section_value(params[i], sqrts[i], phat, half_degree)
        sigma_j = _section_value(params[j], sqrts[j], phat, half_degree)
        ratio = sigma_i / sigma_j
        check = ratio * ratio - as_cert(1)
        if not certified_small(check, 1e-5, max_doublings):
            raise SignUncertified(f"ratio at node {phat} is not near +-1")
        sgn = certify_sign(ratio.real(), 1e-5, max_doublings)
        if sgn is Sign.POSITIVE:
            signs.append(0)
        elif sgn is Sign.NEGATIVE:
            signs.append(1)
        else:
            raise SignUncertified(f"cannot certify the sign at node {phat}")
        precision_used = max(precision_used, ratio.prec)
    data = GluingData(a, tuple(signs))
    object.__setattr__(data, "_precision_used", precision_used)
    return data


def _section_value(param, sqrt_poly: CertPoly, phat: ProjPoint,
                   half_degree: int) -> CertNumber:
    """Value at a node of the square root of the restricted branch poly.

    The chart evaluates points only up to scale, so the raw value is
    rescaled by ``lambda^d`` with ``lambda`` the coordinate ratio between
    the chart point and the chosen node representative and ``d`` half the
    branch degree; the result squares to the branch value at the
    representative.
    """
    t, s = param.param_of(phat)
    tq = t / s
    raw = sqrt_poly.evaluate(tq)
    chart_pt = param.point_at(tq)
    m = phat.max_index()
    lam = phat.coords[m] / chart_pt.coords[m]
    return (lam ** half_degree) * raw
