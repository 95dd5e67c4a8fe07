"""Projective-plane primitives over certified complex arithmetic.

Points, lines and smooth conics live in the complex projective plane;
coordinates are :class:`~porism.numeric.CertNumber` discs so that every
incidence or tangency decision can be refined until it certifies.  Conics
are symmetric 3x3 forms, duality goes through the adjugate, and rational
parametrization via the pencil of lines through a base point turns
restriction-to-a-conic into univariate polynomial work.

Conventions:

* Conic coefficient order is ``(x^2, xy, y^2, xz, yz, z^2)``.
* Points and lines are normalized for labeling by scaling the coordinate
  of largest modulus to 1 (ties broken by index), and sorted by the real
  then imaginary parts of the normalized coordinates.
* Equality of projective triples is a tolerance decision on the 2x2
  minors of the stacked normalized coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .numeric import (
    DEFAULT_MAX_DOUBLINGS,
    DEFAULT_ZERO_TOL,
    CertNumber,
    CertPoly,
    PrecisionExhausted,
    as_cert,
    certified_nonzero,
    certified_small,
    poly_roots,
)

INCIDENCE_TOL = 1e-9
COINCIDENCE_TOL = 1e-8


class IncidenceViolation(Exception):
    """A stated incidence precondition failed certification."""


class DegenerateDuals(Exception):
    """The dual conics do not meet transversally (multiple bitangent)."""


class DegenerateConic(Exception):
    """The 3x3 form has no certified-nonzero determinant."""


# -- vector helpers ---------------------------------------------------------


def _vec(items) -> tuple:
    return tuple(as_cert(x) for x in items)


def _dot(a, b) -> CertNumber:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _cross(a, b) -> tuple:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def _matvec(m, v) -> tuple:
    return tuple(_dot(row, v) for row in m)


def _quadform(m, v) -> CertNumber:
    return _dot(v, _matvec(m, v))


def _bilinear(m, u, v) -> CertNumber:
    return _dot(u, _matvec(m, v))


def _adjugate(m) -> tuple:
    def cof(i, j):
        r = [k for k in range(3) if k != i]
        c = [k for k in range(3) if k != j]
        minor = m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]]
        return minor if (i + j) % 2 == 0 else -minor

    # adjugate = transpose of the cofactor matrix
    return tuple(tuple(cof(j, i) for j in range(3)) for i in range(3))


def _det3(m) -> CertNumber:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def _scale_upper(v) -> float:
    return max(float(c.abs_upper()) for c in v)


_BASIS = (
    (1, 0, 0),
    (0, 1, 0),
    (0, 0, 1),
)


class _Triple:
    """Shared behaviour of homogeneous coordinate triples."""

    __slots__ = ("coords",)

    def __init__(self, a, b=None, c=None):
        if b is None:
            self.coords = _vec(a)
        else:
            self.coords = _vec((a, b, c))
        if len(self.coords) != 3:
            raise ValueError("need exactly three homogeneous coordinates")
        if all(x.mid == 0 and x.radius_mpf == 0 for x in self.coords):
            raise ValueError("homogeneous coordinates are identically zero")

    def float_coords(self) -> tuple[complex, complex, complex]:
        return tuple(c.value for c in self.coords)

    def max_index(self) -> int:
        mags = [abs(c.value) for c in self.coords]
        return max(range(3), key=lambda i: (mags[i], -i))

    def normalized(self):
        m = self.max_index()
        d = self.coords[m]
        return type(self)(tuple(c / d for c in self.coords))

    def sort_key(self) -> tuple:
        z = self.normalized().float_coords()
        return tuple(x for c in z for x in (c.real, c.imag))

    def is_real(self, tol: float = INCIDENCE_TOL) -> bool:
        n = self.normalized()
        return all(certified_small(c.imag(), tol) for c in n.coords)

    def conjugate(self):
        return type(self)(tuple(c.conjugate() for c in self.coords))

    def equal(self, other, tol: float = COINCIDENCE_TOL,
              max_doublings: int = DEFAULT_MAX_DOUBLINGS) -> bool:
        """Projective coincidence at tolerance ``tol``.

        A cheap float screen rejects clearly distinct triples; otherwise
        all 2x2 minors of the two normalized triples must certify below
        ``tol``.
        """
        if type(other) is not type(self):
            raise TypeError("cannot compare different projective kinds")
        a = self.normalized()
        b = other.normalized()
        av, bv = a.float_coords(), b.float_coords()
        screen = max(
            abs(av[1] * bv[2] - av[2] * bv[1]),
            abs(av[2] * bv[0] - av[0] * bv[2]),
            abs(av[0] * bv[1] - av[1] * bv[0]),
        )
        if screen > 100 * tol:
            return False
        minors = _cross(a.coords, b.coords)
        return all(certified_small(m, tol, max_doublings) for m in minors)

    def __repr__(self):
        z = self.float_coords()
        body = " : ".join(f"{c.real:.6g}{c.imag:+.6g}j" for c in z)
        return f"{type(self).__name__}({body})"


class ProjPoint(_Triple):
    """A point of the projective plane in homogeneous coordinates."""


class ProjLine(_Triple):
    """A line of the projective plane in dual homogeneous coordinates."""


def incidence(point: ProjPoint, line: ProjLine) -> CertNumber:
    return _dot(point.coords, line.coords)


def incidence_residual(point: ProjPoint, line: ProjLine) -> CertNumber:
    """Scale-normalized incidence value of a normalized point and line."""
    return incidence(point.normalized(), line.normalized())


def line_through(p: ProjPoint, q: ProjPoint) -> ProjLine:
    return ProjLine(_cross(p.coords, q.coords))


def lines_meet(l1: ProjLine, l2: ProjLine) -> ProjPoint:
    return ProjPoint(_cross(l1.coords, l2.coords))


class Conic:
    """A smooth conic as a symmetric 3x3 certified form."""

    __slots__ = ("matrix",)

    def __init__(self, matrix, check_smooth: bool = True):
        self.matrix = tuple(tuple(as_cert(x) for x in row) for row in matrix)
        if check_smooth and not certified_nonzero(self.det()):
            raise DegenerateConic("determinant not certified nonzero")

    @classmethod
    def from_coeffs(cls, coeffs: Sequence, check_smooth: bool = True) -> "Conic":
        """Build from ``(x^2, xy, y^2, xz, yz, z^2)`` coefficients."""
        a, b, c, d, e, f = (as_cert(x) for x in coeffs)
        h = as_cert(0.5)
        return cls(
            (
                (a, b * h, d * h),
                (b * h, c, e * h),
                (d * h, e * h, f),
            ),
            check_smooth=check_smooth,
        )

    def coeffs(self) -> tuple:
        m = self.matrix
        return (m[0][0], m[0][1] * 2, m[1][1], m[0][2] * 2, m[1][2] * 2, m[2][2])

    def float_coeffs(self) -> tuple[complex, ...]:
        return tuple(c.value for c in self.coeffs())

    def det(self) -> CertNumber:
        return _det3(self.matrix)

    def evaluate(self, p: ProjPoint) -> CertNumber:
        return _quadform(self.matrix, p.coords)

    def polar(self, p: ProjPoint) -> ProjLine:
        return ProjLine(_matvec(self.matrix, p.coords))

    def pole(self, l: ProjLine) -> ProjPoint:
        return ProjPoint(_matvec(_adjugate(self.matrix), l.coords))

    def dual(self) -> "Conic":
        return Conic(_adjugate(self.matrix), check_smooth=False)

    def dual_evaluate(self, l: ProjLine) -> CertNumber:
        return _quadform(_adjugate(self.matrix), l.coords)

    def scale_upper(self) -> float:
        return max(float(x.abs_upper()) for row in self.matrix for x in row)

    def contains(self, p: ProjPoint, tol: float = INCIDENCE_TOL,
                 max_doublings: int = DEFAULT_MAX_DOUBLINGS) -> bool:
        n = p.normalized()
        scale = self.scale_upper() * max(1.0, _scale_upper(n.coords)) ** 2
        return certified_small(self.evaluate(n), tol * scale, max_doublings)

    def is_tangent(self, l: ProjLine, tol: float = INCIDENCE_TOL,
                   max_doublings: int = DEFAULT_MAX_DOUBLINGS) -> bool:
        n = l.normalized()
        adj = _adjugate(self.matrix)
        scale = max(float(x.abs_upper()) for row in adj for x in row)
        scale *= max(1.0, _scale_upper(n.coords)) ** 2
        return certified_small(_quadform(adj, n.coords), tol * scale, max_doublings)

    def is_real(self, tol: float = INCIDENCE_TOL) -> bool:
        cs = Conic(self.matrix, check_smooth=False)
        m = max(range(6), key=lambda i: abs(cs.coeffs()[i].value))
        d = cs.coeffs()[m]
        return all(certified_small((c / d).imag(), tol) for c in cs.coeffs())

    def same_as(self, other: "Conic", tol: float = COINCIDENCE_TOL) -> bool:
        """Projective equality of the two forms."""
        a = [x for row in self.matrix for x in row]
        b = [x for row in other.matrix for x in row]
        ma = max(range(9), key=lambda i: abs(a[i].value))
        if abs(b[ma].value) == 0:
            return False
        ra, rb = a[ma], b[ma]
        return all(
            certified_small(a[i] * rb - b[i] * ra,
                            tol * float(ra.abs_upper() * rb.abs_upper()) * 4)
            for i in range(9)
        )

    def transform(self, a_matrix) -> "Conic":
        """Substitute ``x -> A x`` into the form (matrix becomes ``A^T M A``)."""
        a = tuple(tuple(as_cert(x) for x in row) for row in a_matrix)
        at = tuple(tuple(a[j][i] for j in range(3)) for i in range(3))
        ma = tuple(
            tuple(_dot(self.matrix[i], tuple(a[k][j] for k in range(3)))
                  for j in range(3))
            for i in range(3)
        )
        return Conic(tuple(
            tuple(_dot(at[i], tuple(ma[k][j] for k in range(3))) for j in range(3))
            for i in range(3)
        ), check_smooth=False)

    def __repr__(self):
        cs = ", ".join(f"{c.value.real:.6g}" if abs(c.value.imag) < 1e-14
                       else f"{c.value:.6g}" for c in self.coeffs())
        return f"Conic[{cs}]"


def transform_point(a_matrix, p: ProjPoint) -> ProjPoint:
    """Image of a point under the substitution ``x -> A x`` (uses adj A)."""
    a = tuple(tuple(as_cert(x) for x in row) for row in a_matrix)
    return ProjPoint(_matvec(_adjugate(a), p.coords))


def transform_line(a_matrix, l: ProjLine) -> ProjLine:
    a = tuple(tuple(as_cert(x) for x in row) for row in a_matrix)
    at = tuple(tuple(a[j][i] for j in range(3)) for i in range(3))
    return ProjLine(_matvec(at, l.coords))


# -- homogeneous quadratics and probe machinery -----------------------------


def _hom_quad_roots(c0, c1, c2, tol_rel: float = DEFAULT_ZERO_TOL,
                    max_doublings: int = DEFAULT_MAX_DOUBLINGS):
    """Roots ``(t : s)`` of ``c0 s^2 + c1 t s + c2 t^2`` with multiplicity.

    Returns a list of ((t, s), mult) with CertNumber entries.  The leading
    side is chopped at tolerance, so a root at ``(1 : 0)`` is reported when
    the quadratic degenerates.
    """
    scale = max(c0.abs_upper(), c1.abs_upper(), c2.abs_upper())
    if not scale > 0:
        raise ValueError("identically zero quadratic")
    tol = tol_rel * scale
    one = as_cert(1)
    zero = as_cert(0)
    if certified_small(c2, tol, max_doublings):
        if certified_small(c1, tol, max_doublings):
            return [((one, zero), 2)]
        return [((one, zero), 1), ((-c0, c1), 1)]
    disc = c1 * c1 - c0 * c2 * 4
    sc2 = c1.abs_upper() ** 2 + 4 * c0.abs_upper() * c2.abs_upper()
    if certified_small(disc, tol_rel * max(sc2, scale ** 2), max_doublings):
        return [((-c1, c2 * 2), 2)]
    sq = disc.sqrt()
    if not sq.ensure_radius_below(scale, max_doublings):
        raise PrecisionExhausted("discriminant square root did not certify")
    # cancellation-stable root pair: q/c2 and c0/q via Vieta
    neg = -(c1 + sq)
    alt = -(c1 - sq)
    q = neg if neg.abs_upper() >= alt.abs_upper() else alt
    h = as_cert(Fraction(1, 2))
    qh = q * h
    return [((qh, c2), 1), ((c0, qh), 1)]


def _probe_lines():
    return (
        ProjLine((0, 1, 0)),
        ProjLine((1, 0, 0)),
        ProjLine((0, 0, 1)),
        ProjLine((1, -1, 0)),
        ProjLine((1, 0, -1)),
        ProjLine((0, 1, -1)),
        ProjLine((1, 1, -1)),
        ProjLine((2, 1, -2)),
    )


def _points_on_line(l: ProjLine) -> tuple[ProjPoint, ProjPoint]:
    cands = []
    for e in _BASIS:
        v = _cross(l.coords, _vec(e))
        mag = _scale_upper(v)
        if mag > 0:
            cands.append((mag, ProjPoint(v)))
    cands.sort(key=lambda t: -t[0])
    return cands[0][1], cands[1][1]


def find_point_on_conic(c: Conic, probe: int = 0, want_real: bool = False) -> ProjPoint:
    """A certified point of the conic from a deterministic probe-line sweep."""
    probes = _probe_lines()
    for k in range(len(probes)):
        line = probes[(probe + k) % len(probes)]
        a, b = _points_on_line(line)
        # X = t A + s B has form  t^2 F(A) + 2 t s G(A,B) + s^2 F(B)
        fa = _quadform(c.matrix, a.coords)
        g = _bilinear(c.matrix, a.coords, b.coords)
        fb = _quadform(c.matrix, b.coords)
        try:
            roots = _hom_quad_roots(fb, g * 2, fa)
        except PrecisionExhausted:
            continue
        pts = []
        for (t, s), _ in roots:
            p = ProjPoint(tuple(t * ai + s * bi
                                for ai, bi in zip(a.coords, b.coords)))
            if want_real and not _is_real_fast(p):
                continue
            if not c.contains(p):
                continue
            pts.append(p)
        if pts:
            pts.sort(key=lambda p: p.sort_key())
            return pts[0]
    raise PrecisionExhausted("no usable probe line found")


def _is_real_fast(p: ProjPoint, tol: float = 1e-9) -> bool:
    z = p.normalized().float_coords()
    return all(abs(c.imag) <= tol * (1 + abs(c)) for c in z)


# -- rational parametrization ------------------------------------------------


class ConicParam:
    """Degree-2 rational chart of a smooth conic.

    The chart is the pencil of lines through ``base``; the point with
    parameter ``(t : s)`` is ``(D^T M D) B - 2 (B^T M D) D`` for the
    direction ``D = t U + s V``.  The image lies on the conic identically.
    """

    __slots__ = ("conic", "base", "u", "v", "coeff_a", "coeff_b", "coeff_c")

    def __init__(self, conic: Conic, base: ProjPoint, u, v):
        self.conic = conic
        self.base = base
        self.u = _vec(u)
        self.v = _vec(v)
        m = conic.matrix
        bu = _bilinear(m, base.coords, self.u)
        bv = _bilinear(m, base.coords, self.v)
        uu = _quadform(m, self.u)
        uv = _bilinear(m, self.u, self.v)
        vv = _quadform(m, self.v)
        b = base.coords
        self.coeff_a = tuple(uu * b[i] - 2 * bu * self.u[i] for i in range(3))
        self.coeff_b = tuple(2 * uv * b[i] - 2 * bu * self.v[i] - 2 * bv * self.u[i]
                             for i in range(3))
        self.coeff_c = tuple(vv * b[i] - 2 * bv * self.v[i] for i in range(3))

    def point_at(self, t, s=1) -> ProjPoint:
        t = as_cert(t)
        s = as_cert(s)
        return ProjPoint(tuple(
            self.coeff_a[i] * t * t + self.coeff_b[i] * t * s + self.coeff_c[i] * s * s
            for i in range(3)
        ))

    def infinity_point(self) -> ProjPoint:
        return ProjPoint(self.coeff_a)

    def param_of(self, p: ProjPoint) -> tuple[CertNumber, CertNumber]:
        """Projective parameter ``(t, s)`` of a point on the conic."""
        chord = _cross(self.base.coords, p.coords)
        if _scale_upper(chord) < COINCIDENCE_TOL * _scale_upper(p.coords) * \
                _scale_upper(self.base.coords):
            chord = _matvec(self.conic.matrix, self.base.coords)
        t = _dot(chord, self.v)
        s = -_dot(chord, self.u)
        return t, s

    def coordinate_polys(self) -> tuple[CertPoly, CertPoly, CertPoly]:
        """The three coordinates as polynomials in ``t`` on the chart ``s=1``."""
        return tuple(
            CertPoly([self.coeff_c[i], self.coeff_b[i], self.coeff_a[i]])
            for i in range(3)
        )

    def pullback_residual(self) -> CertPoly:
        """Composition of the conic form with the chart; certifiably zero."""
        xs = self.coordinate_polys()
        m = self.conic.matrix
        total = CertPoly([0])
        for i in range(3):
            for j in range(3):
                total = total + (xs[i] * xs[j]).scale(m[i][j])
        return total


class LineParam:
    """Degree-1 chart of a line through two of its points."""

    __slots__ = ("line", "a", "b")

    def __init__(self, line: ProjLine, probe: int = 0):
        self.line = line
        a, b = _points_on_line(line)
        if probe % 2 == 1:
            a, b = b, ProjPoint(tuple(ai + bi for ai, bi in zip(a.coords, b.coords)))
        self.a = a
        self.b = b

    def point_at(self, t, s=1) -> ProjPoint:
        t = as_cert(t)
        s = as_cert(s)
        return ProjPoint(tuple(t * ai + s * bi
                               for ai, bi in zip(self.a.coords, self.b.coords)))

    def infinity_point(self) -> ProjPoint:
        return self.a

    def param_of(self, p: ProjPoint) -> tuple[CertNumber, CertNumber]:
        ab = _cross(self.a.coords, self.b.coords)
        idx = max(range(3), key=lambda i: abs(ab[i].value))
        xb = _cross(p.coords, self.b.coords)
        ax = _cross(self.a.coords, p.coords)
        return xb[idx], ax[idx]

    def coordinate_polys(self) -> tuple[CertPoly, CertPoly, CertPoly]:
        return tuple(
            CertPoly([self.b.coords[i], self.a.coords[i]]) for i in range(3)
        )


def parametrize(c: Conic, base: ProjPoint | None = None, probe: int = 0) -> ConicParam:
    """Rational chart of ``c`` through ``base`` (found by probing if omitted)."""
    if base is None:
        base = find_point_on_conic(c, probe=probe)
    elif not c.contains(base):
        raise IncidenceViolation("base point is not on the conic")
    m = base.max_index()
    others = [i for i in range(3) if i != m]
    u = _BASIS[others[0]]
    v = _BASIS[others[1]]
    return ConicParam(c, base, u, v)


# -- trivariate homogeneous polynomials --------------------------------------


class HomPoly:
    """Homogeneous trivariate polynomial as a monomial-exponent mapping."""

    __slots__ = ("degree", "terms")

    def __init__(self, degree: int, terms: dict):
        self.degree = degree
        self.terms = {k: as_cert(v) for k, v in terms.items()}
        for (i, j, k) in self.terms:
            if i + j + k != degree:
                raise ValueError("non-homogeneous term")

    @classmethod
    def from_line(cls, l: ProjLine) -> "HomPoly":
        a, b, c = l.coords
        return cls(1, {(1, 0, 0): a, (0, 1, 0): b, (0, 0, 1): c})

    @classmethod
    def from_conic(cls, c: Conic) -> "HomPoly":
        a, b, cc, d, e, f = c.coeffs()
        return cls(2, {
            (2, 0, 0): a, (1, 1, 0): b, (0, 2, 0): cc,
            (1, 0, 1): d, (0, 1, 1): e, (0, 0, 2): f,
        })

    def __mul__(self, other: "HomPoly") -> "HomPoly":
        out: dict = {}
        for (i1, j1, k1), a in self.terms.items():
            for (i2, j2, k2), b in other.terms.items():
                key = (i1 + i2, j1 + j2, k1 + k2)
                prod = a * b
                out[key] = out[key] + prod if key in out else prod
        return HomPoly(self.degree + other.degree, out)

    def evaluate(self, p: ProjPoint) -> CertNumber:
        x, y, z = p.coords
        powers = {}

        def pw(base, n, tag):
            key = (tag, n)
            if key not in powers:
                acc = as_cert(1)
                for _ in range(n):
                    acc = acc * base
                powers[key] = acc
            return powers[key]

        total = as_cert(0)
        for (i, j, k), c in self.terms.items():
            total = total + c * pw(x, i, 0) * pw(y, j, 1) * pw(z, k, 2)
        return total


def _poly_list_mul(a: list, b: list) -> list:
    out = [as_cert(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def restrict_poly_full(poly: HomPoly, param) -> list:
    """Homogeneous coefficients of the pullback, ascending in ``t``.

    The result has ``poly.degree * chart_degree + 1`` entries; index ``k``
    multiplies ``t^k s^(n-k)``.  Index ``n`` corresponds to the chart point
    at ``(1 : 0)``.
    """
    xs = [list(p.coeffs) for p in param.coordinate_polys()]
    n = poly.degree * (len(xs[0]) - 1)
    powers: dict = {}

    def pw(axis, e):
        key = (axis, e)
        if key not in powers:
            if e == 0:
                powers[key] = [as_cert(1)]
            else:
                powers[key] = _poly_list_mul(pw(axis, e - 1), xs[axis])
        return powers[key]

    out = [as_cert(0)] * (n + 1)
    for (i, j, k), c in poly.terms.items():
        term = _poly_list_mul(pw(0, i), pw(1, j))
        term = _poly_list_mul(term, pw(2, k))
        for idx, v in enumerate(term):
            out[idx] = out[idx] + v * c
    return out


def restrict_poly(poly: HomPoly, param, rel_tol: float = DEFAULT_ZERO_TOL) -> CertPoly:
    """Dehomogenized restriction of ``poly`` to the chart of ``param``.

    The degree drop against ``poly.degree * chart_degree`` records the
    multiplicity of the zero locus at the chart point ``(1 : 0)``.
    """
    return CertPoly(restrict_poly_full(poly, param)).chop(rel_tol)


# -- intersections and tangency ----------------------------------------------


@dataclass(frozen=True)
class ConicIntersection:
    points: tuple  # ((ProjPoint, multiplicity), ...)
    transversal: bool


def intersect_conics(c1: Conic, c2: Conic,
                     tol: float = DEFAULT_ZERO_TOL) -> ConicIntersection:
    """The four common points of two distinct smooth conics.

    Points come with multiplicities summing to 4 and a flag telling
    whether all of them are simple (transversal intersection).
    """
    if c1.same_as(c2):
        raise ValueError("the conics coincide projectively")
    last_err = None
    for probe in range(6):
        try:
            return _intersect_once(c1, c2, tol, probe)
        except PrecisionExhausted as e:
            last_err = e
    raise last_err


def _intersect_once(c1, c2, tol, probe):
    param = parametrize(c1, probe=probe)
    full = restrict_poly_full(HomPoly.from_conic(c2), param)
    poly = CertPoly(full)
    chopped = poly.chop(tol)
    inf_mult = poly.degree - chopped.degree
    found = []
    if chopped.degree >= 1:
        for root, mult in poly_roots(chopped):
            found.append((param.point_at(root), mult))
    elif inf_mult == 4:
        raise PrecisionExhausted("restriction collapsed; bad chart")
    if inf_mult:
        found.append((param.infinity_point(), inf_mult))
    total = sum(m for _, m in found)
    if total != 4:
        raise PrecisionExhausted(f"intersection multiplicities sum to {total}")
    found.sort(key=lambda pm: pm[0].sort_key())
    transversal = all(m == 1 for _, m in found)
    return ConicIntersection(points=tuple(found), transversal=transversal)


def tangent_lines_from_point(p: ProjPoint, c: Conic,
                             tol: float = INCIDENCE_TOL) -> list[ProjLine]:
    """Tangent lines of ``c`` through ``p``.

    One line (the polar) when ``p`` lies on the conic, otherwise the two
    tangents, which are complex conjugates for a real point interior to a
    real conic.
    """
    if c.contains(p, tol):
        return [c.polar(p)]
    m = p.max_index()
    others = [i for i in range(3) if i != m]
    l1 = _cross(p.coords, _vec(_BASIS[others[0]]))
    l2 = _cross(p.coords, _vec(_BASIS[others[1]]))
    adj = _adjugate(c.matrix)
    # L = t l1 + s l2 is tangent iff  t^2 F*(l1) + 2 t s G* + s^2 F*(l2) = 0
    f1 = _quadform(adj, l1)
    g = _bilinear(adj, l1, l2)
    f2 = _quadform(adj, l2)
    roots = _hom_quad_roots(f2, g * 2, f1)
    lines = []
    for (t, s), mult in roots:
        line = ProjLine(tuple(t * a + s * b for a, b in zip(l1, l2)))
        for _ in range(mult):
            lines.append(line)
    lines.sort(key=lambda l: l.sort_key())
    return lines


def other_intersection(l: ProjLine, c: Conic, known: ProjPoint,
                       tol: float = INCIDENCE_TOL) -> ProjPoint:
    """Second point of ``l`` on ``c`` given one; equals ``known`` at tangency."""
    kn = known.normalized()
    ln = l.normalized()
    if not certified_small(incidence(kn, ln), tol):
        raise IncidenceViolation("known point is not on the line")
    if not c.contains(kn, tol):
        raise IncidenceViolation("known point is not on the conic")
    a, b = _points_on_line(l)
    p0 = a if not _fast_proportional(a, known) else b
    m = c.matrix
    mu = _quadform(m, p0.coords)
    lam = _bilinear(m, kn.coords, p0.coords) * -2
    return ProjPoint(tuple(mu * k + lam * q for k, q in zip(kn.coords, p0.coords)))


def _fast_proportional(a: ProjPoint, b: ProjPoint, tol: float = 1e-6) -> bool:
    av = a.normalized().float_coords()
    bv = b.normalized().float_coords()
    return max(
        abs(av[1] * bv[2] - av[2] * bv[1]),
        abs(av[2] * bv[0] - av[0] * bv[2]),
        abs(av[0] * bv[1] - av[1] * bv[0]),
    ) < tol


@dataclass(frozen=True)
class Bitangent:
    """A common tangent line with its two points of tangency."""

    line: ProjLine
    touch1: ProjPoint  # tangency on the first conic
    touch2: ProjPoint  # tangency on the second conic


def bitangents(c1: Conic, c2: Conic, tol: float = DEFAULT_ZERO_TOL) -> list[Bitangent]:
    """The four common tangents, as transversal dual-conic intersections."""
    d1, d2 = c1.dual(), c2.dual()
    inter = intersect_conics(d1, d2, tol)
    if not inter.transversal:
        raise DegenerateDuals("dual conics do not meet transversally")
    out = []
    for pt, _ in inter.points:
        line = ProjLine(pt.coords)
        out.append(Bitangent(line=line, touch1=c1.pole(line), touch2=c2.pole(line)))
    out.sort(key=lambda b: b.line.sort_key())
    return out
