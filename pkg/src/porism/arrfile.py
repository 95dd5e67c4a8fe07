"""Plain-text arrangement files.

Grammar (one record per line, ``#`` starts a comment):

    meta  <key> <value...>
    conic <label> <6 numbers>     # coefficient order x^2 xy y^2 xz yz z^2
    line  <label> <3 numbers>     # dual coordinates

A number token is an integer, a rational ``p/q``, a float in shortest
round-trip form, or a complex ``(re,im)`` whose parts are any of the
former.  Serialization writes rationals exactly and floats via ``repr``,
so ``parse(serialize(x))`` reproduces ``x`` bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

HEADER = "# porism arrangement v1"


class FormatError(Exception):
    """The arrangement file does not follow the documented grammar."""


Number = object  # int | Fraction | float | complex


@dataclass(frozen=True)
class ArrangementFile:
    conics: tuple = ()  # ((label, (6 numbers)), ...)
    lines: tuple = ()  # ((label, (3 numbers)), ...)
    metadata: tuple = ()  # ((key, value string), ...)

    def meta(self, key: str, default=None) -> str | None:
        for k, v in self.metadata:
            if k == key:
                return v
        return default


def format_number(x) -> str:
    if isinstance(x, complex):
        return f"({format_number(x.real)},{format_number(x.imag)})"
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if x == int(x) and abs(x) < 1e15:
            return repr(x)
        return repr(x)
    raise FormatError(f"cannot serialize {type(x).__name__}")


def parse_number(tok: str):
    tok = tok.strip()
    if tok.startswith("(") and tok.endswith(")"):
        body = tok[1:-1]
        depth = 0
        for idx, ch in enumerate(body):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "," and depth == 0:
                re = parse_number(body[:idx])
                im = parse_number(body[idx + 1:])
                return complex(float(re), float(im)) if im else re
        raise FormatError(f"malformed complex token {tok!r}")
    if "/" in tok:
        num, den = tok.split("/", 1)
        return Fraction(int(num), int(den))
    if any(c in tok for c in ".eE") or tok in ("inf", "-inf", "nan"):
        return float(tok)
    return int(tok)


def serialize(af: ArrangementFile) -> str:
    out = [HEADER]
    for k, v in af.metadata:
        out.append(f"meta {k} {v}")
    for label, coeffs in af.conics:
        toks = " ".join(format_number(c) for c in coeffs)
        out.append(f"conic {label} {toks}")
    for label, coeffs in af.lines:
        toks = " ".join(format_number(c) for c in coeffs)
        out.append(f"line {label} {toks}")
    return "\n".join(out) + "\n"


def parse(text: str) -> ArrangementFile:
    conics, lines, metadata = [], [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        parts = stripped.split()
        kind = parts[0]
        if kind == "meta":
            if len(parts) < 3:
                raise FormatError(f"line {lineno}: meta needs a key and value")
            metadata.append((parts[1], " ".join(parts[2:])))
        elif kind == "conic":
            if len(parts) != 8:
                raise FormatError(f"line {lineno}: conic needs label + 6 numbers")
            conics.append((parts[1], tuple(parse_number(t) for t in parts[2:])))
        elif kind == "line":
            if len(parts) != 5:
                raise FormatError(f"line {lineno}: line needs label + 3 numbers")
            lines.append((parts[1], tuple(parse_number(t) for t in parts[2:])))
        else:
            raise FormatError(f"line {lineno}: unknown record {kind!r}")
    return ArrangementFile(conics=tuple(conics), lines=tuple(lines),
                           metadata=tuple(metadata))


# -- conversions to and from validated pairs -----------------------------------


def _real_number(cert_value: complex):
    """Float form of a certified coordinate known to be real."""
    return cert_value.real


def pair_to_file(pair, transverse=None, origin_q=None) -> ArrangementFile:
    """Snapshot a validated pair (and optionally a traced transverse).

    Conic coefficients are stored exactly; derived elements (bitangents,
    transverse lines, nodes) are stored as float approximations for
    inspection and are recomputed by loaders.
    """
    meta = [("period", str(pair.period))]
    if pair.parameter is not None:
        meta.append(("parameter", format_number(pair.parameter)))
    if origin_q is not None:
        meta.append(("transverse_origin", format_number(origin_q)))
    if pair.bitangent_pairing:
        meta.append(("bitangent_pairing",
                     " ".join(f"{i}{j}" for i, j in pair.bitangent_pairing)))
    conics = [
        ("C1", tuple(_store(c) for c in pair.c1.coeffs())),
        ("C2", tuple(_store(c) for c in pair.c2.coeffs())),
    ]
    lines = []
    for idx, b in enumerate(pair.bitangents, start=1):
        coords = b.line.normalized().float_coords()
        lines.append((f"T{idx}", tuple(_real_or_complex(c) for c in coords)))
    if transverse is not None:
        for idx, l in enumerate(transverse.lines, start=1):
            coords = l.normalized().float_coords()
            lines.append((f"L{idx}", tuple(_real_or_complex(c) for c in coords)))
    return ArrangementFile(conics=tuple(conics), lines=tuple(lines),
                           metadata=tuple(meta))


def _store(cert):
    # conic coefficients in this package are exact leaves; keep them exact
    v = cert.value
    if v.imag == 0:
        f = v.real
        fr = Fraction(f).limit_denominator(10 ** 12)
        if float(fr) == f:
            return fr
        return f
    return v


def _real_or_complex(c: complex):
    if abs(c.imag) < 1e-13 * (1 + abs(c.real)):
        return c.real
    return c


def file_to_pair(af: ArrangementFile, revalidate: bool = True):
    """Rebuild a validated pair from a file; derived data is recomputed.

    With ``revalidate`` the stored period is re-certified (closure from
    three origins), so corrupted coefficients fail loudly.
    """
    from .geometry import Conic
    from .poncelet import certify_pair

    named = dict(af.conics)
    if "C1" not in named or "C2" not in named:
        raise FormatError("file must define conics C1 and C2")
    c1 = Conic.from_coeffs(named["C1"])
    c2 = Conic.from_coeffs(named["C2"])
    period = af.meta("period")
    if period is None:
        raise FormatError("file has no period metadata")
    parameter = af.meta("parameter")
    return certify_pair(
        c1, c2, int(period),
        parameter=parse_number(parameter) if parameter else None,
        skip_validation=not revalidate,
    )
