"""Poncelet transverse iteration, closure search and degeneracy analysis.

A transverse for a conic pair ``(C1, C2)`` is the sequence of pairs
``(P_i, L_i)`` with ``P_i`` on ``C1``, ``L_i`` tangent to ``C2`` through
``P_i``, linked by "other intersection / other tangent".  Closure of one
orbit implies closure of all orbits with the same period, which is what
the numeric search exploits: a cheap floating-point scan finds a parameter
where a reference orbit closes, and certified arithmetic then validates
closure from independent origins.

Closure detection always matches the (point, line) *pair*: reflected
degenerate transverses revisit points with a different line, so matching
points alone would report false periods.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Sequence

import mpmath
from mpmath import mp, mpf

from .geometry import (
    Bitangent,
    Conic,
    ConicIntersection,
    IncidenceViolation,
    ProjLine,
    ProjPoint,
    bitangents,
    intersect_conics,
    other_intersection,
    tangent_lines_from_point,
)
from .numeric import PrecisionExhausted

CLOSURE_TOL = 1e-10
BISECT_TOL = 1e-13


class NoClosure(Exception):
    """The transverse did not return to its initial pair within max_steps."""


class NoSignChange(Exception):
    """No bracket with a sign change of the closure defect was found."""


class ValidationFailed(Exception):
    """A numerically found parameter failed certified validation."""


class MalformedTransverse(Exception):
    """A closed transverse violates the expected doubling structure."""


class UnexpectedDegeneracy(Exception):
    """A traced transverse does not have the required degeneracy type."""


class Degeneracy(Enum):
    NONDEGENERATE = "non-degenerate"
    TWO_BITANGENTS = "two-bitangents"
    TWO_NODE_TANGENTS = "two-node-tangents"
    MIXED = "mixed"


@dataclass(frozen=True)
class Transverse:
    """A closed Poncelet transverse with its degeneracy classification."""

    steps: tuple  # ((ProjPoint, ProjLine), ...)
    closed: bool
    period: int | None
    degeneracy: Degeneracy
    reflections: tuple  # step indices of the reflection lines, () if none

    @property
    def lines(self) -> tuple:
        return tuple(l for _, l in self.steps)

    @property
    def points(self) -> tuple:
        return tuple(p for p, _ in self.steps)


@dataclass(frozen=True)
class PonceletPair:
    """A validated conic pair admitting an n-periodic transverse."""

    c1: Conic
    c2: Conic
    period: int
    nodes: tuple  # 4 ProjPoints, transversal
    bitangents: tuple  # 4 Bitangent records, deterministic order
    bitangent_pairing: tuple  # ((i, j), (k, l)) partition of range(4)
    parameter: float | Fraction | None = None  # family parameter of the witness


# -- certified stepping -----------------------------------------------------


def _step(c1: Conic, c2: Conic, p: ProjPoint, l: ProjLine,
          tol: float = CLOSURE_TOL) -> tuple[ProjPoint, ProjLine]:
    # normalization keeps homogeneous magnitudes bounded along long traces
    p2 = other_intersection(l, c1, p).normalized()
    tangents = [t.normalized() for t in tangent_lines_from_point(p2, c2)]
    if len(tangents) == 1:
        # point on C2: the tangent there is the only choice
        return p2, tangents[0]
    far = max(tangents, key=lambda t: _line_gap(t, l))
    if _line_gap(far, l) < 1e-9:
        # both candidates coincide with the incoming line only at a
        # tangency point of C2, which the branch above already handles
        raise PrecisionExhausted("cannot distinguish the outgoing tangent")
    return p2, far


def _line_gap(a: ProjLine, b: ProjLine) -> float:
    av = a.normalized().float_coords()
    bv = b.normalized().float_coords()
    return max(
        abs(av[1] * bv[2] - av[2] * bv[1]),
        abs(av[2] * bv[0] - av[0] * bv[2]),
        abs(av[0] * bv[1] - av[1] * bv[0]),
    )


def transverse_step(pair: PonceletPair, p: ProjPoint, l: ProjLine,
                    tol: float = CLOSURE_TOL) -> tuple[ProjPoint, ProjLine]:
    """One step of the transverse: next point on C1 and next tangent to C2.

    At a bitangent the sequence reflects (the point repeats); at a point of
    ``C1 \\cap C2`` the unique tangent line there is returned.
    """
    return _step(pair.c1, pair.c2, p, l, tol)


def reverse_step(pair: PonceletPair, p: ProjPoint, l: ProjLine,
                 tol: float = CLOSURE_TOL) -> tuple[ProjPoint, ProjLine]:
    """Inverse of :func:`transverse_step` on non-degenerate steps."""
    tangents = tangent_lines_from_point(p, pair.c2)
    if len(tangents) == 1:
        prev_line = tangents[0]
    else:
        prev_line = max(tangents, key=lambda t: _line_gap(t, l))
    prev_point = other_intersection(prev_line, pair.c1, p)
    return prev_point, prev_line


def _pair_matches(a, b, tol):
    return a[0].equal(b[0], tol) and a[1].equal(b[1], tol)


def trace(pair: PonceletPair, origin: ProjPoint, max_steps: int,
          start_line: ProjLine | None = None,
          tol: float = CLOSURE_TOL) -> Transverse:
    """Iterate the transverse from ``origin`` until it closes.

    Raises :class:`NoClosure` after ``max_steps`` steps without returning
    to the initial (point, line) pair.
    """
    return _trace(pair.c1, pair.c2, origin, max_steps, start_line, tol)


def _trace(c1, c2, origin, max_steps, start_line=None, tol=CLOSURE_TOL):
    if not c1.contains(origin):
        raise IncidenceViolation("origin is not on the first conic")
    if start_line is None:
        start_line = tangent_lines_from_point(origin, c2)[0]
    else:
        from .geometry import incidence
        from .numeric import certified_small
        if not certified_small(incidence(origin.normalized(),
                                         start_line.normalized()), 1e-7):
            raise IncidenceViolation("start line does not pass through origin")
    steps = [(origin, start_line)]
    p, l = origin, start_line
    period = None
    for k in range(1, max_steps + 1):
        p, l = _step(c1, c2, p, l, tol)
        if _pair_matches((p, l), steps[0], tol):
            period = k
            break
        steps.append((p, l))
    if period is None:
        raise NoClosure(f"no closure within {max_steps} steps")
    degeneracy, reflections = _classify(tuple(steps), c1, c2, tol)
    return Transverse(steps=tuple(steps), closed=True, period=period,
                      degeneracy=degeneracy, reflections=reflections)


# -- degeneracy classification ----------------------------------------------


def _group_by(items, same):
    groups: list[list[int]] = []
    for i, x in enumerate(items):
        for g in groups:
            if same(items[g[0]], x):
                g.append(i)
                break
        else:
            groups.append([i])
    return groups


def _classify(steps, c1, c2, tol):
    lines = [l for _, l in steps]
    points = [p for p, _ in steps]
    n = len(steps)
    line_groups = _group_by(lines, lambda a, b: a.equal(b, tol))
    special = []
    for g in line_groups:
        l = lines[g[0]]
        if c1.is_tangent(l):
            special.append(("bitangent", g))
        else:
            touch = c2.pole(l)
            if c1.contains(touch):
                special.append(("node-tangent", g))
    if not special:
        if any(len(g) > 1 for g in line_groups):
            raise MalformedTransverse("repeated line without a reflection line")
        return Degeneracy.NONDEGENERATE, ()
    kinds = sorted(k for k, _ in special)
    if len(special) != 2:
        raise MalformedTransverse(f"{len(special)} reflection lines, expected 2")
    if kinds == ["bitangent", "bitangent"]:
        label = Degeneracy.TWO_BITANGENTS
    elif kinds == ["node-tangent", "node-tangent"]:
        label = Degeneracy.TWO_NODE_TANGENTS
    else:
        label = Degeneracy.MIXED
    _check_doubling(label, line_groups, special, points, n, tol)
    reflections = tuple(sorted(g[0] for _, g in special))
    return label, reflections


def _check_doubling(label, line_groups, special, points, n, tol):
    special_ids = {id(g) for _, g in special}
    ordinary = [g for g in line_groups if id(g) not in special_ids]
    if any(len(g) != 2 for g in ordinary):
        raise MalformedTransverse("a non-reflection line does not appear twice")
    for kind, g in special:
        want = 1 if kind == "bitangent" else 2
        if len(g) != want:
            raise MalformedTransverse(
                f"a {kind} line appears {len(g)} times, expected {want}")
    point_groups = _group_by(points, lambda a, b: a.equal(b, tol))
    distinct = len(point_groups)
    m = n // 2
    expected = {
        Degeneracy.TWO_BITANGENTS: m,
        Degeneracy.TWO_NODE_TANGENTS: m + 1,
        Degeneracy.MIXED: m + 1,
    }[label]
    if distinct != expected:
        raise MalformedTransverse(
            f"{distinct} distinct vertices, expected {expected}")


def classify_degenerate(t: Transverse, pair: PonceletPair,
                        tol: float = CLOSURE_TOL):
    """Degeneracy label and reflection-step indices of a closed transverse."""
    if not t.closed:
        raise MalformedTransverse("transverse is not closed")
    return _classify(t.steps, pair.c1, pair.c2, tol)


# -- floating-point fast path for the search ---------------------------------

_BASIS_F = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def _fadj(m):
    def cof(i, j):
        r = [k for k in range(3) if k != i]
        c = [k for k in range(3) if k != j]
        minor = m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]]
        return minor if (i + j) % 2 == 0 else -minor

    return tuple(tuple(cof(j, i) for j in range(3)) for i in range(3))


def _fcross(a, b):
    return (a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0])


def _fdot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _fmatvec(m, v):
    return tuple(_fdot(row, v) for row in m)


def _fq(m, v):
    return _fdot(v, _fmatvec(m, v))


def _fbil(m, u, v):
    return _fdot(u, _fmatvec(m, v))


def _fscale(v):
    n = max(abs(x) for x in v)
    return tuple(x / n for x in v)


def _fmat(coeffs):
    a, b, c, d, e, f = coeffs
    return ((a, b / 2, d / 2), (b / 2, c, e / 2), (d / 2, e / 2, f))


def _fquad_roots(c0, c1, c2, sqrt):
    # (t:s) roots of c0 s^2 + c1 ts + c2 t^2, cancellation-stable
    if abs(c2) < 1e-300:
        return [(1, 0), (-c0, c1)]
    sq = sqrt(c1 * c1 - 4 * c0 * c2)
    q = -(c1 + sq) / 2 if abs(c1 + sq) >= abs(c1 - sq) else -(c1 - sq) / 2
    if abs(q) < 1e-300:
        return [(0, 1), (0, 1)]
    return [(q, c2), (c0, q)]


def _ftangents(p, n2, sqrt):
    m = max(range(3), key=lambda i: abs(p[i]))
    others = [i for i in range(3) if i != m]
    l1 = _fcross(p, _BASIS_F[others[0]])
    l2 = _fcross(p, _BASIS_F[others[1]])
    f1 = _fq(n2, l1)
    g = _fbil(n2, l1, l2)
    f2 = _fq(n2, l2)
    return [
        _fscale(tuple(t * a + s * b for a, b in zip(l1, l2)))
        for t, s in _fquad_roots(f2, 2 * g, f1, sqrt)
    ]


def _fother(l, m1, k):
    cands = []
    for e in _BASIS_F:
        v = _fcross(l, e)
        mag = max(abs(x) for x in v)
        if mag > 1e-12:
            cands.append(_fscale(v))
    kk = _fscale(k)
    p0 = max(cands, key=lambda v: max(abs(x) for x in _fcross(v, kk)))
    mu = _fq(m1, p0)
    lam = -2 * _fbil(m1, k, p0)
    return _fscale(tuple(mu * ki + lam * qi for ki, qi in zip(k, p0)))


def _fgap(a, b):
    return max(abs(x) for x in _fcross(_fscale(a), _fscale(b)))


def _fstep(m1, n2, p, l, sqrt):
    p2 = _fother(l, m1, p)
    t1, t2 = _ftangents(p2, n2, sqrt)
    return p2, (t1 if _fgap(t1, l) > _fgap(t2, l) else t2)


def _freal(v, tol=1e-7):
    return all(abs(getattr(x, "imag", 0.0)) <= tol * (1 + abs(x)) for x in v)


@dataclass(frozen=True)
class ConicFamily:
    """One-parameter family of conic pairs for the closure search.

    ``coeffs(s)`` returns the two 6-tuples of conic coefficients.  The
    default family keeps the second conic the unit circle and sweeps the
    ``x^2`` coefficient of a crossing ellipse.
    """

    coeffs: Callable[[float], tuple[tuple, tuple]]
    s_min: float
    s_max: float
    origin_heights: tuple = (0.0, 0.7, 0.4)
    label: str = "family"


def default_family(b=Fraction(21, 20), c=Fraction(1, 8)) -> ConicFamily:
    """``C1: s x^2 + b y^2 + c xz - z^2 = 0`` against the unit circle.

    For moderate ``s`` the ellipse crosses the circle in four real points
    and the pair has four real bitangents; sweeping ``s`` sweeps the
    rotation number of the transverse map.  Coefficients are kept exact so
    that rational closure parameters produce exactly periodic fixtures.
    """

    def coeffs(s):
        return (s, 0, b, c, 0, -1), (1, 0, 1, 0, 0, -1)

    return ConicFamily(coeffs=coeffs, s_min=0.03, s_max=0.92,
                       label=f"ellipse-circle b={b} c={c}")


def _forigin(m1, q, sqrt):
    # point of the conic on the line y = q z with the larger x coordinate
    a = (1, 0, 0)
    b = (0, q, 1)
    fa = _fq(m1, a)
    g = _fbil(m1, a, b)
    fb = _fq(m1, b)
    disc = g * g - fa * fb
    if isinstance(disc, complex) or disc >= 0:
        sq = sqrt(disc)
    else:
        return None
    roots = [(-g + sq) / fa, (-g - sq) / fa]
    if not _freal(roots, 1e-9):
        return None
    t = max(r.real if isinstance(r, complex) else r for r in roots)
    return (t, q, 1)


def _fcenter(m):
    return _fmatvec(_fadj(m), (0, 0, 1))


def _fangle(p, ctr):
    x = p[0] / p[2] - ctr[0] / ctr[2]
    y = p[1] / p[2] - ctr[1] / ctr[2]
    return math.atan2(getattr(y, "real", y), getattr(x, "real", x))


def _to_mp(x):
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    return mpf(x)


def _fdefect(family, s, n, q, sqrt=cmath.sqrt):
    """Wrapped angular defect of the n-step orbit, None if it leaves R."""
    co1, co2 = family.coeffs(s)
    conv = _to_mp if sqrt is mpmath.sqrt else float
    co1 = tuple(conv(x) for x in co1)
    co2 = tuple(conv(x) for x in co2)
    m1 = _fmat(co1)
    n2 = _fadj(_fmat(co2))
    p0 = _forigin(m1, q, sqrt)
    if p0 is None:
        return None
    tangs = _ftangents(p0, n2, sqrt)
    if not all(_freal(t) for t in tangs):
        return None
    ctr = _fcenter(m1)
    pole = lambda l: _fmatvec(_fadj(_fmat(co2)), l)

    def turn(l):
        qq = pole(l)
        px = p0[0] / p0[2] - ctr[0] / ctr[2]
        py = p0[1] / p0[2] - ctr[1] / ctr[2]
        qx = qq[0] / qq[2] - p0[0] / p0[2]
        qy = qq[1] / qq[2] - p0[1] / p0[2]
        v = px * qy - py * qx
        return getattr(v, "real", v)

    l0 = max(tangs, key=turn)
    p, l = p0, l0
    for _ in range(n):
        p, l = _fstep(m1, n2, p, l, sqrt)
        if not _freal(p, 1e-6):
            return None
    d = _fangle(p, ctr) - _fangle(p0, ctr)
    while d > math.pi:
        d -= 2 * math.pi
    while d <= -math.pi:
        d += 2 * math.pi
    return d


def _scan_brackets(family, n, scan_points):
    out = []
    for q in family.origin_heights:
        prev = s_prev = None
        for i in range(scan_points + 1):
            s = family.s_min + (family.s_max - family.s_min) * i / scan_points
            d = _fdefect(family, s, n, q)
            if (d is not None and prev is not None and d * prev < 0
                    and abs(d) < 1.5 and abs(prev) < 1.5):
                out.append((s_prev, s, q))
            prev, s_prev = d, (s if d is not None else None)
            if d is None:
                prev = None
    return out


def _bisect(family, n, lo, hi, q, tol):
    dlo = _fdefect(family, lo, n, q)
    dhi = _fdefect(family, hi, n, q)
    if dlo is None or dhi is None or dlo * dhi > 0:
        return None
    for _ in range(90):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        d = _fdefect(family, mid, n, q)
        if d is None:
            return None
        if d == 0:
            return mid
        if d * dlo < 0:
            hi = mid
        else:
            lo, dlo = mid, d
    # settle on the endpoint with the smaller high-precision defect
    def hp(s, prec=160):
        with mp.workprec(prec):
            d = _fdefect(family, s, n, q, sqrt=mpmath.sqrt)
        return abs(d) if d is not None else mpf("inf")

    cands = [(hp(s), s) for s in (lo, 0.5 * (lo + hi), hi)]
    cands.sort(key=lambda t: t[0])
    best_defect, best = cands[0]
    if best_defect > tol * 100:
        return None
    # prefer an exact rational witness when the defect certifiably vanishes
    for den in (100, 10_000, 1_000_000):
        r = Fraction(best).limit_denominator(den)
        if abs(float(r) - best) > 1e-9:
            continue
        if hp(r, 240) < mpf(10) ** -40:
            return r
    return best


def _faffine(p):
    x = p[0] / p[2]
    y = p[1] / p[2]
    return complex(getattr(x, "real", x), getattr(y, "real", y))


def _fminimal(family, s, n, q):
    """Float check that some orbit has n distinct vertices (period minimal)."""
    co1, co2 = family.coeffs(s)
    m1 = _fmat(tuple(float(x) for x in co1))
    n2 = _fadj(_fmat(tuple(float(x) for x in co2)))
    for dq in (0.08, 0.17, -0.11):
        p0 = _forigin(m1, q + dq, cmath.sqrt)
        if p0 is None:
            continue
        p, l = p0, _ftangents(p0, n2, cmath.sqrt)[0]
        pts = [_faffine(p0)]
        ok = True
        for _ in range(n - 1):
            p, l = _fstep(m1, n2, p, l, cmath.sqrt)
            if not _freal(p, 1e-6):
                ok = False
                break
            pts.append(_faffine(p))
        if not ok:
            continue
        sep = min(abs(a - b) for i, a in enumerate(pts) for b in pts[i + 1:])
        if sep > 1e-4:
            return True
    return False


# -- search and validation ----------------------------------------------------


def find_periodic_pair(
    n: int,
    family: ConicFamily | None = None,
    bracket: tuple[float, float] | None = None,
    tol: float = BISECT_TOL,
    scan_points: int = 600,
    closure_tol: float = CLOSURE_TOL,
) -> PonceletPair:
    """Bisection search for a conic pair with an n-periodic transverse.

    The closure defect (signed angular gap after ``n`` steps from a
    reference origin) is bisected to ``tol``; the winning parameter is then
    validated with certified arithmetic: transversal nodes, four real
    bitangents, and closure with minimal period ``n`` from three
    independent origins.
    """
    if n < 3:
        raise ValueError("period must be at least 3")
    fam = family or default_family()
    if bracket is not None:
        cands = [(bracket[0], bracket[1], q) for q in fam.origin_heights]
    else:
        cands = _scan_brackets(fam, n, scan_points)
    if not cands:
        raise NoSignChange(f"no defect sign change for n={n} in "
                           f"[{fam.s_min}, {fam.s_max}]")
    last = None
    sign_change_seen = False
    for lo, hi, q in cands:
        s = _bisect(fam, n, lo, hi, q, tol)
        if s is None:
            continue
        sign_change_seen = True
        if not _fminimal(fam, s, n, q):
            last = ValidationFailed(f"s={s}: closure has a smaller period")
            continue
        try:
            return validate_pair(fam, s, n, closure_tol)
        except (ValidationFailed, PrecisionExhausted, NoClosure) as e:
            last = ValidationFailed(f"s={s}: {e}")
    if not sign_change_seen and bracket is not None:
        raise NoSignChange(f"no defect sign change on bracket {bracket}")
    raise last or ValidationFailed(f"no bracket for n={n} validated")


def validate_pair(family: ConicFamily, s, n: int,
                  closure_tol: float = CLOSURE_TOL) -> PonceletPair:
    """Certified validation of a family parameter as an n-periodic pair."""
    co1, co2 = family.coeffs(s)
    return certify_pair(Conic.from_coeffs(co1), Conic.from_coeffs(co2), n,
                        closure_tol=closure_tol, parameter=s)


def certify_pair(c1: Conic, c2: Conic, n: int,
                 closure_tol: float = CLOSURE_TOL, parameter=None,
                 skip_validation: bool = False) -> PonceletPair:
    """Certified validation of a concrete conic pair as n-periodic.

    Checks transversality of the four nodes, four real bitangents, and
    closure with minimal period ``n`` from three independent origins, then
    computes the degenerate bitangent pairing (even periods).
    """
    inter = intersect_conics(c1, c2)
    if not inter.transversal:
        raise ValidationFailed("conics do not intersect transversally")
    nodes = tuple(p for p, _ in inter.points)
    bits = bitangents(c1, c2)
    if len(bits) != 4:
        raise ValidationFailed("expected four bitangents")
    for b in bits:
        if not b.line.is_real():
            raise ValidationFailed("bitangent is not certified real")
    if not skip_validation:
        for q in (Fraction(1, 10), Fraction(-1, 7), Fraction(1, 5)):
            origin = _origin_on_conic(c1, q)
            try:
                t = _trace(c1, c2, origin, max_steps=n, tol=closure_tol)
            except NoClosure as e:
                raise ValidationFailed(str(e)) from e
            if t.period != n:
                raise ValidationFailed(
                    f"closure with period {t.period} from origin y={q}, "
                    f"wanted {n}")
    pair = PonceletPair(c1=c1, c2=c2, period=n, nodes=nodes,
                        bitangents=tuple(bits), bitangent_pairing=(),
                        parameter=parameter)
    if n % 2 == 0:
        pairing = degenerate_pairing(pair)
        pair = PonceletPair(c1=c1, c2=c2, period=n, nodes=nodes,
                            bitangents=tuple(bits), bitangent_pairing=pairing,
                            parameter=parameter)
    return pair


def _origin_on_conic(c1: Conic, q) -> ProjPoint:
    """Certified point of the conic on the line y = q z (larger branch)."""
    from .numeric import as_cert

    a = (as_cert(1), as_cert(0), as_cert(0))
    b = (as_cert(0), as_cert(q), as_cert(1))
    m = c1.matrix
    from .geometry import _bilinear, _quadform

    fa = _quadform(m, a)
    g = _bilinear(m, a, b)
    fb = _quadform(m, b)
    disc = g * g - fa * fb
    sq = disc.sqrt()
    roots = [(-g + sq) / fa, (-g - sq) / fa]
    t = max(roots, key=lambda r: r.value.real)
    return ProjPoint((t, as_cert(q), as_cert(1)))


def random_origins(pair: PonceletPair, count: int, seed: int) -> list[ProjPoint]:
    """Seeded exact rational origins on C1 for closure experiments."""
    import random

    rng = random.Random(seed)
    out = []
    seen = set()
    while len(out) < count:
        q = Fraction(rng.randint(-4200, 4200), 10000)
        if q in seen:
            continue
        seen.add(q)
        out.append(_origin_on_conic(pair.c1, q))
    return out


def degenerate_pairing(pair: PonceletPair, tol: float = CLOSURE_TOL) -> tuple:
    """Partition of the four bitangents into the two degenerate transverses.

    Each bitangent is traced from its tangency point on C1 with the
    bitangent itself as the starting line; the resulting degenerate
    transverse contains exactly one other bitangent, its partner.
    """
    if pair.period % 2 != 0:
        raise UnexpectedDegeneracy("pairing needs an even period")
    partner = {}
    for i, bit in enumerate(pair.bitangents):
        t = _trace(pair.c1, pair.c2, bit.touch1, max_steps=pair.period,
                   start_line=bit.line, tol=tol)
        if t.degeneracy is not Degeneracy.TWO_BITANGENTS:
            raise UnexpectedDegeneracy(
                f"trace from bitangent {i} is {t.degeneracy.value}")
        others = [
            j for j, other in enumerate(pair.bitangents)
            if j != i and any(l.equal(other.line, tol) for l in t.lines)
        ]
        if len(others) != 1:
            raise UnexpectedDegeneracy(
                f"bitangent {i} pairs with {len(others)} others")
        partner[i] = others[0]
    for i, j in partner.items():
        if partner.get(j) != i:
            raise UnexpectedDegeneracy("bitangent pairing is not symmetric")
    first = (0, partner[0])
    rest = tuple(sorted(k for k in range(4) if k not in first))
    return (first, rest)
