"""Certified adaptive-precision complex arithmetic.

A :class:`CertNumber` represents a closed disc ``|z - value| <= radius``
guaranteed to contain the true value of the expression that produced it.
Every number remembers how to recompute itself at higher working precision,
so enclosures can be tightened on demand: derived quantities re-evaluate
their whole expression tree with ball-arithmetic error propagation at the
new precision.  Exact leaves (integers, floats, fractions) refine all the
way down to radius zero; inexact leaves keep their stated error floor.

Design notes:

* Values are mpmath ``mpc`` midpoints; radii are nonnegative ``mpf`` so
  they never underflow at high precision.
* All radius bounds include a term for the rounding of the midpoint
  operation itself and a small multiplicative slack for the float
  arithmetic used to combine radii.
* Refinement memoizes in place: a number only ever tightens, and the new
  disc is contained in the numerical closure of the old one.  Recomputation
  is idempotent, which keeps shared read-only use safe under the GIL.

Sign and zero decisions are *tolerance decisions*: ``certify_sign`` reports
``POSITIVE``/``NEGATIVE`` only when the disc provably lies in that half
plane, and ``ZERO`` only when the whole disc sits below the requested
tolerance.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import mpmath
from mpmath import mp, mpc, mpf

DEFAULT_PREC = 64
DEFAULT_ZERO_TOL = 1e-12
DEFAULT_MAX_DOUBLINGS = 10

_GUARD_BITS = 12
# covers the float rounding of the radius combination formulas themselves
_RADIUS_SLACK = None
_TWO = None


def _slack():
    global _RADIUS_SLACK
    if _RADIUS_SLACK is None:
        _RADIUS_SLACK = mpf(1) + mpf(2) ** -40
    return _RADIUS_SLACK


def _eps(prec):
    # bound on the relative rounding error of a handful of mpc operations
    return mpf(2) ** (4 - prec)


class PrecisionExhausted(Exception):
    """The refinement budget ran out before a certified decision was reached."""


class NotASquare(Exception):
    """A residual coefficient of q^2 - p is certifiably above tolerance."""


class Sign(Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    ZERO = "zero"
    UNDECIDABLE = "undecidable"


class CertNumber:
    """A complex number enclosed in a disc, refinable on demand.

    Instances are created through :meth:`exact`, :meth:`approx` or by
    arithmetic on existing instances.  Arithmetic builds an expression
    graph; evaluating a node at precision ``p`` evaluates its operands at
    ``p`` first and then applies a rigorous ball-arithmetic bound.
    """

    __slots__ = ("_recompute", "_prec", "_value", "_radius")

    def __init__(self, recompute: Callable[[int], tuple], prec: int | None = None):
        self._recompute = recompute
        p = prec if prec is not None else DEFAULT_PREC
        self._value, self._radius = recompute(p)
        self._prec = p

    # -- evaluation ------------------------------------------------------

    def _eval(self, prec: int):
        if prec > self._prec:
            self._value, self._radius = self._recompute(prec)
            self._prec = prec
        return self._value, self._radius

    def refine(self) -> "CertNumber":
        """Tighten the enclosure by doubling the working precision."""
        self._eval(2 * self._prec)
        return self

    def ensure_radius_below(self, bound, max_doublings: int = DEFAULT_MAX_DOUBLINGS) -> bool:
        """Refine until ``radius < bound``; False if the budget runs out."""
        b = mpf(bound)
        for _ in range(max_doublings + 1):
            if self._radius < b:
                return True
            self.refine()
        return self._radius < b

    # -- accessors -------------------------------------------------------

    @property
    def mid(self) -> mpc:
        return self._value

    @property
    def value(self) -> complex:
        return complex(self._value)

    @property
    def radius(self) -> float:
        r = float(self._radius)
        if r == 0.0 and self._radius > 0:
            return 5e-324
        return r

    @property
    def radius_mpf(self) -> mpf:
        return self._radius

    @property
    def prec(self) -> int:
        return self._prec

    def abs_upper(self) -> mpf:
        return abs(self._value) + self._radius

    def abs_lower(self) -> mpf:
        low = abs(self._value) - self._radius
        return low if low > 0 else mpf(0)

    def __repr__(self):
        return f"CertNumber({complex(self._value)!r} ± {self.radius:.3g})"

    # -- constructors ----------------------------------------------------

    @classmethod
    def exact(cls, z) -> "CertNumber":
        """Exact leaf from int, float, Fraction, complex or decimal string."""
        re, im = _to_fraction_pair(z)

        def recompute(prec):
            with mp.workprec(prec + _GUARD_BITS):
                vre, ere = _frac_to_mpf(re, prec)
                vim, eim = _frac_to_mpf(im, prec)
                return mpc(vre, vim), (ere + eim) * _slack()

        return cls(recompute)

    @classmethod
    def approx(cls, z, radius: float) -> "CertNumber":
        """Non-refinable leaf: a value known only up to ``radius``."""
        v0 = mpc(z)
        r0 = mpf(radius)
        if r0 < 0:
            raise ValueError("radius must be nonnegative")

        def recompute(prec):
            return v0, r0

        return cls(recompute)

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        return _add(self, as_cert(other))

    def __radd__(self, other):
        return _add(as_cert(other), self)

    def __sub__(self, other):
        return _sub(self, as_cert(other))

    def __rsub__(self, other):
        return _sub(as_cert(other), self)

    def __mul__(self, other):
        return _mul(self, as_cert(other))

    def __rmul__(self, other):
        return _mul(as_cert(other), self)

    def __truediv__(self, other):
        return _div(self, as_cert(other))

    def __rtruediv__(self, other):
        return _div(as_cert(other), self)

    def __neg__(self):
        return _neg(self)

    def __pow__(self, n: int):
        return _powint(self, n)

    def sqrt(self) -> "CertNumber":
        """Principal square root.

        The enclosure is tight once the operand's disc excludes zero and
        stays clear of the branch cut; otherwise the whole image of the
        disc under both square roots is enclosed, and refinement is the
        way to a useful radius.
        """
        return _sqrt(self)

    def conjugate(self) -> "CertNumber":
        return _conj(self)

    def real(self) -> "CertNumber":
        return _real(self)

    def imag(self) -> "CertNumber":
        return _imag(self)

    def abs_val(self) -> "CertNumber":
        return _absval(self)


# -- leaf helpers ---------------------------------------------------------


def _to_fraction_pair(z):
    if isinstance(z, CertNumber):
        raise TypeError("already a CertNumber")
    if isinstance(z, complex):
        return Fraction(z.real), Fraction(z.imag)
    if isinstance(z, (int, Fraction)):
        return Fraction(z), Fraction(0)
    if isinstance(z, float):
        return Fraction(z), Fraction(0)
    if isinstance(z, str):
        return Fraction(z), Fraction(0)
    raise TypeError(f"cannot build an exact number from {type(z).__name__}")


def _frac_to_mpf(fr: Fraction, prec: int):
    num, den = fr.numerator, fr.denominator
    if num == 0:
        return mpf(0), mpf(0)
    dyadic = den & (den - 1) == 0
    exact = dyadic and num.bit_length() <= prec
    v = mpf(num) / den if den != 1 else mpf(num)
    if exact:
        return v, mpf(0)
    return v, abs(v) * (mpf(2) ** (2 - prec))


def as_cert(x) -> CertNumber:
    if isinstance(x, CertNumber):
        return x
    return CertNumber.exact(x)


# -- operation nodes ------------------------------------------------------


def _node(children, compute):
    def recompute(prec):
        vals = [c._eval(prec) for c in children]
        with mp.workprec(prec + _GUARD_BITS):
            v, r = compute(vals, prec)
            return v, r * _slack()

    return CertNumber(recompute)


def _add(a, b):
    def compute(vals, prec):
        (va, ra), (vb, rb) = vals
        v = va + vb
        return v, ra + rb + _eps(prec) * abs(v)

    return _node((a, b), compute)


def _sub(a, b):
    def compute(vals, prec):
        (va, ra), (vb, rb) = vals
        v = va - vb
        return v, ra + rb + _eps(prec) * abs(v)

    return _node((a, b), compute)


def _mul(a, b):
    def compute(vals, prec):
        (va, ra), (vb, rb) = vals
        v = va * vb
        return v, abs(va) * rb + abs(vb) * ra + ra * rb + _eps(prec) * abs(v)

    return _node((a, b), compute)


def _div(a, b):
    def compute(vals, prec):
        (va, ra), (vb, rb) = vals
        ab = abs(vb)
        if not ab > rb:
            # denominator disc contains zero at this precision
            v = va / vb if vb != 0 else mpc(0)
            return v, mpf("inf")
        v = va / vb
        low = ab - rb
        r = (abs(va) * rb + ab * ra) / (ab * low) + _eps(prec) * abs(v)
        return v, r

    return _node((a, b), compute)


def _neg(a):
    def compute(vals, prec):
        (va, ra), = vals
        return -va, ra

    return _node((a,), compute)


def _conj(a):
    def compute(vals, prec):
        (va, ra), = vals
        return mpmath.conj(va), ra

    return _node((a,), compute)


def _real(a):
    def compute(vals, prec):
        (va, ra), = vals
        return mpc(mpmath.re(va), 0), ra

    return _node((a,), compute)


def _imag(a):
    def compute(vals, prec):
        (va, ra), = vals
        return mpc(mpmath.im(va), 0), ra

    return _node((a,), compute)


def _absval(a):
    def compute(vals, prec):
        (va, ra), = vals
        v = mpc(abs(va), 0)
        return v, ra + _eps(prec) * abs(v)

    return _node((a,), compute)


def _powint(a, n):
    if not isinstance(n, int):
        raise TypeError("only integer powers are supported")
    if n < 0:
        return _div(as_cert(1), _powint(a, -n))
    if n == 0:
        return CertNumber.exact(1)

    def compute(vals, prec):
        (va, ra), = vals
        v = va ** n
        outer = abs(va) + ra
        r = n * outer ** (n - 1) * ra + _eps(prec) * abs(v)
        return v, r

    return _node((a,), compute)


def _sqrt(a):
    # A disc that excludes zero is simply connected and carries two
    # analytic square-root branches no matter where the principal cut
    # lies.  The node tracks one branch consistently across refinements by
    # choosing, at each evaluation, the root closest to the previously
    # selected one (first evaluation: positive real part, ties towards
    # positive imaginary part).  Downstream code must treat the result as
    # "a square root", fixing any sign convention explicitly.
    state = {"prev": None}

    def compute(vals, prec):
        (va, ra), = vals
        w = mpmath.sqrt(va)
        prev = state["prev"]
        if prev is None:
            re, im = mpmath.re(w), mpmath.im(w)
            if re < 0 or (re == 0 and im < 0):
                w = -w
        else:
            if abs(w - prev) > abs(-w - prev):
                w = -w
        state["prev"] = w
        aw = abs(w)
        av = abs(va)
        if av > ra:
            return w, ra / (aw + mpmath.sqrt(av - ra)) + _eps(prec) * aw
        # disc contains 0: enclose the image of both branches
        return w, aw + mpmath.sqrt(av + ra) + _eps(prec) * aw

    return _node((a,), compute)


# -- certified decisions --------------------------------------------------


def certify_sign(
    x: CertNumber,
    zero_tolerance: float = DEFAULT_ZERO_TOL,
    max_doublings: int = DEFAULT_MAX_DOUBLINGS,
) -> Sign:
    """Certified sign of the real part of ``x`` with a tolerance-zero verdict.

    ``POSITIVE``/``NEGATIVE`` mean the disc lies strictly in that half
    plane (in particular zero is excluded).  ``ZERO`` means the whole disc
    has modulus below ``zero_tolerance``.  Values that stay close to the
    imaginary axis but not close to zero exhaust the budget and come back
    ``UNDECIDABLE``.
    """
    if zero_tolerance <= 0:
        raise ValueError("zero_tolerance must be positive")
    tol = mpf(zero_tolerance)
    for _ in range(max_doublings + 1):
        v, r = x._value, x._radius
        if abs(v) + r < tol:
            return Sign.ZERO
        re = mpmath.re(v)
        if re - r > 0:
            return Sign.POSITIVE
        if -re - r > 0:
            return Sign.NEGATIVE
        x._eval(2 * x._prec)
    return Sign.UNDECIDABLE


def certified_small(
    x: CertNumber,
    tol: float,
    max_doublings: int = DEFAULT_MAX_DOUBLINGS,
) -> bool:
    """Decide ``|x| < tol`` (True) against ``|x| > tol`` certified (False).

    Raises :class:`PrecisionExhausted` when the disc straddles the
    tolerance circle for the whole budget.
    """
    t = mpf(tol)
    for _ in range(max_doublings + 1):
        v, r = x._value, x._radius
        if abs(v) + r < t:
            return True
        if abs(v) - r > t:
            return False
        x._eval(2 * x._prec)
    raise PrecisionExhausted(f"cannot separate |{x!r}| from tolerance {tol}")


def certified_nonzero(
    x: CertNumber,
    max_doublings: int = DEFAULT_MAX_DOUBLINGS,
) -> bool:
    """True once the disc excludes zero; False only exhausts the budget."""
    for _ in range(max_doublings + 1):
        v, r = x._value, x._radius
        if abs(v) - r > 0:
            return True
        x._eval(2 * x._prec)
    return False


# -- polynomials -----------------------------------------------------------


class CertPoly:
    """Univariate polynomial with certified coefficients, ascending order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        cs = tuple(as_cert(c) for c in coeffs)
        self.coeffs = cs if cs else (CertNumber.exact(0),)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_roots(cls, leading, roots: Sequence) -> "CertPoly":
        p = cls([leading])
        for r in roots:
            p = p * cls([-as_cert(r), 1])
        return p

    def evaluate(self, x) -> CertNumber:
        x = as_cert(x)
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def evaluate_complex(self, z: complex) -> complex:
        acc = self.coeffs[-1].value
        for c in reversed(self.coeffs[:-1]):
            acc = acc * z + c.value
        return acc

    def derivative(self) -> "CertPoly":
        if self.degree == 0:
            return CertPoly([0])
        return CertPoly([self.coeffs[i] * i for i in range(1, len(self.coeffs))])

    def __mul__(self, other):
        if isinstance(other, CertPoly):
            out = [as_cert(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                for j, b in enumerate(other.coeffs):
                    out[i + j] = out[i + j] + a * b
            return CertPoly(out)
        return self.scale(other)

    def scale(self, c) -> "CertPoly":
        c = as_cert(c)
        return CertPoly([a * c for a in self.coeffs])

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        out = []
        for i in range(n):
            a = self.coeffs[i] if i < len(self.coeffs) else as_cert(0)
            b = other.coeffs[i] if i < len(other.coeffs) else as_cert(0)
            out.append(a + b)
        return CertPoly(out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return CertPoly([-c for c in self.coeffs])

    def coeff_scale(self) -> mpf:
        return max(c.abs_upper() for c in self.coeffs)

    def chop(self, rel_tol: float = DEFAULT_ZERO_TOL,
             max_doublings: int = DEFAULT_MAX_DOUBLINGS) -> "CertPoly":
        """Strip leading coefficients certified below ``rel_tol * scale``.

        The result has a certified-nonzero leading coefficient or is the
        zero polynomial.
        """
        scale = self.coeff_scale()
        if not scale > 0:
            return CertPoly([0])
        tol = rel_tol * scale
        cs = list(self.coeffs)
        while cs:
            if not certified_small(cs[-1], tol, max_doublings):
                break
            cs.pop()
        if not cs:
            return CertPoly([0])
        return CertPoly(cs)

    def is_zero(self, rel_tol: float = DEFAULT_ZERO_TOL) -> bool:
        p = self.chop(rel_tol)
        return p.degree == 0 and not certified_nonzero(p.coeffs[0], 0)

    def __repr__(self):
        return f"CertPoly(degree={self.degree})"


def poly_sqrt(
    p: CertPoly,
    rel_tol: float = DEFAULT_ZERO_TOL,
    max_doublings: int = DEFAULT_MAX_DOUBLINGS,
) -> CertPoly:
    """Certified polynomial square root with a fixed branch convention.

    ``p`` must have even degree and a certified-nonzero leading
    coefficient.  The result ``q`` satisfies ``q^2 = p`` coefficient-wise
    within ``rel_tol`` times the coefficient scale of ``p``; a residual
    certifiably above that threshold raises :class:`NotASquare`.  The
    branch is normalized so that the leading coefficient of ``q`` has
    positive real part, with ties broken towards positive imaginary part.
    """
    n = p.degree
    if n % 2 != 0:
        raise NotASquare(f"odd degree {n}")
    if not certified_nonzero(p.coeffs[-1], max_doublings):
        raise PrecisionExhausted("leading coefficient not certified nonzero")
    k = n // 2
    b = [None] * (k + 1)
    b[k] = p.coeffs[-1].sqrt()
    lead2 = b[k] * 2
    for j in range(k - 1, -1, -1):
        s = p.coeffs[k + j]
        for i in range(j + 1, k):
            s = s - b[i] * b[k + j - i]
        b[j] = s / lead2
    q = CertPoly(b)

    resid = q * q - p
    scale = p.coeff_scale()
    tol = rel_tol * scale if scale > 0 else mpf(rel_tol)
    for c in resid.coeffs:
        if not certified_small(c, tol, max_doublings):
            raise NotASquare("residual coefficient certified above tolerance")
    return _normalize_branch(q, rel_tol, max_doublings)


def _normalize_branch(q: CertPoly, rel_tol: float, max_doublings: int) -> CertPoly:
    lead = q.coeffs[-1]
    tol = rel_tol * lead.abs_upper()
    s = certify_sign(lead.real(), max(tol, 1e-300), max_doublings)
    if s is Sign.POSITIVE:
        return q
    if s is Sign.NEGATIVE:
        return -q
    if s is Sign.ZERO:
        si = certify_sign(lead.imag(), max(tol, 1e-300), max_doublings)
        if si is Sign.POSITIVE:
            return q
        if si is Sign.NEGATIVE:
            return -q
    raise PrecisionExhausted("cannot normalize square-root branch")


# -- root isolation ---------------------------------------------------------


def poly_roots(
    p: CertPoly,
    cluster_tol: float = 1e-6,
    certify_tol: float = DEFAULT_ZERO_TOL,
    max_doublings: int = DEFAULT_MAX_DOUBLINGS,
) -> list[tuple[CertNumber, int]]:
    """All complex roots with certified enclosures and tolerance multiplicities.

    Roots of the midpoint polynomial closer than ``cluster_tol`` (relative
    to the root scale) are merged into one root of higher multiplicity; a
    multiplicity ``k`` is only reported after the derivatives of order
    ``< k`` are certified below ``certify_tol`` at the root, which is the
    working-tolerance notion of a multiple root for inexact input.  The
    returned discs are rigorous: each contains a true root of the
    corresponding derivative for every polynomial within the coefficient
    discs.
    """
    p = p.chop(certify_tol, max_doublings)
    n = p.degree
    if n < 1:
        raise ValueError("degree must be at least 1")

    approx = _midpoint_roots(p)
    scale = 1.0 + max(abs(z) for z in approx)
    clusters = _cluster(approx, cluster_tol * scale)

    derivs = [p]
    for _ in range(max(len(c) for c in clusters) - 1):
        derivs.append(derivs[-1].derivative())

    out = []
    for cl in clusters:
        k = len(cl)
        centre = sum(cl) / k
        root = _root_number(derivs[k - 1], centre)
        if not root.ensure_radius_below(cluster_tol * scale, max_doublings):
            raise PrecisionExhausted("root enclosure did not shrink")
        if k > 1:
            _certify_multiplicity(p, derivs, root, k, certify_tol, max_doublings)
        out.append((root, k))

    _certify_isolation(out, max_doublings)
    out.sort(key=lambda rm: (rm[0].value.real, rm[0].value.imag))
    return out


def _midpoint_roots(p: CertPoly) -> list[complex]:
    n = p.degree
    if n == 1:
        return [complex((-p.coeffs[0] / p.coeffs[1]).value)]
    prec = max(p.coeffs[0].prec, 53)
    with mp.workprec(prec + 10 * n):
        coeffs = [c.mid for c in reversed(p.coeffs)]
        for extra in (10, 50, 200):
            try:
                rs = mpmath.polyroots(coeffs, maxsteps=200, extraprec=extra * n)
                return [complex(r) for r in rs]
            except mpmath.libmp.NoConvergence:
                continue
    raise PrecisionExhausted("root finding did not converge")


def _cluster(zs: list[complex], tol: float) -> list[list[complex]]:
    parent = list(range(len(zs)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(zs)):
        for j in range(i + 1, len(zs)):
            if abs(zs[i] - zs[j]) < tol:
                parent[find(i)] = find(j)
    groups = {}
    for i, z in enumerate(zs):
        groups.setdefault(find(i), []).append(z)
    return list(groups.values())


def _root_number(d: CertPoly, start: complex) -> CertNumber:
    """Refinable enclosure of the simple root of ``d`` nearest ``start``."""
    state = {"z": mpc(start)}
    n = d.degree

    def recompute(prec):
        with mp.workprec(prec + _GUARD_BITS):
            coeffs = [c._eval(prec) for c in d.coeffs]
            mids = [v for v, _ in coeffs]
            rads = [r for _, r in coeffs]
            z = state["z"]
            for _ in range(int(mpmath.log(prec, 2)) + 4):
                fv = _horner(mids, z)
                dv = _horner_deriv(mids, z)
                if dv == 0:
                    break
                step = fv / dv
                z = z - step
                if abs(step) < mpf(2) ** (8 - prec) * (1 + abs(z)):
                    break
            state["z"] = z
            az = abs(z)
            powz = [mpf(1)]
            for _ in range(len(mids) - 1):
                powz.append(powz[-1] * az)
            upper = abs(_horner(mids, z)) + sum(r * w for r, w in zip(rads, powz))
            dmids = [mids[i] * i for i in range(1, len(mids))]
            drads = [rads[i] * i for i in range(1, len(mids))]
            lower = abs(_horner(dmids, z)) - sum(r * w for r, w in zip(drads, powz))
            if not lower > 0:
                return z, mpf("inf")
            return z, n * upper / lower * _slack()

    return CertNumber(recompute)


def _horner(coeffs_asc, z):
    acc = coeffs_asc[-1]
    for c in reversed(coeffs_asc[:-1]):
        acc = acc * z + c
    return acc


def _horner_deriv(coeffs_asc, z):
    dc = [coeffs_asc[i] * i for i in range(1, len(coeffs_asc))]
    if not dc:
        return mpc(0)
    return _horner(dc, z)


def _certify_multiplicity(p, derivs, root, k, certify_tol, max_doublings):
    for j in range(k):
        d = derivs[j]
        sc = d.coeff_scale() * max(mpf(1), abs(root.mid)) ** d.degree
        val = d.evaluate(root)
        if not certified_small(val, certify_tol * sc if sc > 0 else mpf(certify_tol),
                               max_doublings):
            raise PrecisionExhausted(
                f"cluster of size {k} is not a multiplicity-{k} root at tolerance")


def _certify_isolation(roots, max_doublings):
    for _ in range(max_doublings + 1):
        ok = True
        for i in range(len(roots)):
            for j in range(i + 1, len(roots)):
                a, b = roots[i][0], roots[j][0]
                if not abs(a.mid - b.mid) > a.radius_mpf + b.radius_mpf:
                    ok = False
                    a.refine()
                    b.refine()
        if ok:
            return
    raise PrecisionExhausted("could not isolate root enclosures")
