"""Deterministic SVG figures of conic pairs, transverses and arrangements.

Output is plain SVG 1.1 with fixed sampling density and fixed number
formatting, so identical inputs produce byte-identical documents.
Elements with non-real coordinates cannot be drawn and are skipped with a
warning comment embedded in the file.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

SAMPLES = 512
STYLE = {
    "conic": 'fill="none" stroke="#1f4e79" stroke-width="0.012"',
    "conic2": 'fill="none" stroke="#8c1f1f" stroke-width="0.012"',
    "line": 'stroke="#3a7d44" stroke-width="0.008"',
    "bitangent": 'stroke="#b3780a" stroke-width="0.010" stroke-dasharray="0.05,0.025"',
    "point": 'fill="#111111"',
}


class IoFailure(Exception):
    """The SVG document could not be written."""


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def _is_real_triple(coords, tol=1e-9) -> bool:
    return all(abs(c.imag) <= tol * (1 + abs(c)) for c in coords)


def _affine(coords):
    x, y, z = coords
    if abs(z) < 1e-12 * max(abs(x), abs(y), 1.0):
        return None
    return (x / z).real, (y / z).real


@dataclass
class Viewport:
    xmin: float
    xmax: float
    ymin: float
    ymax: float

    def contains(self, x, y, margin=0.0):
        return (self.xmin - margin <= x <= self.xmax + margin
                and self.ymin - margin <= y <= self.ymax + margin)


def _auto_viewport(conics) -> Viewport:
    radius = 1.8
    for c in conics:
        pts = _sample_conic(c)
        for x, y in pts:
            radius = max(radius, abs(x), abs(y))
    radius = min(radius * 1.15, 8.0)
    return Viewport(-radius, radius, -radius, radius)


def _sample_conic(conic):
    """Real points of the conic via its rational chart, viewport-agnostic."""
    from .geometry import find_point_on_conic, parametrize

    try:
        base = find_point_on_conic(conic, want_real=True)
    except Exception:
        return []
    if not _is_real_triple(base.normalized().float_coords()):
        return []
    param = parametrize(conic, base=base)
    out = []
    polys = param.coordinate_polys()
    mids = [[c.value for c in p.coeffs] for p in polys]
    for k in range(SAMPLES):
        theta = math.pi * (k / SAMPLES - 0.5)
        t = math.tan(theta)
        coords = [m[0] + m[1] * t + m[2] * t * t for m in mids]
        if not _is_real_triple(coords, 1e-7):
            continue
        aff = _affine(coords)
        if aff is not None:
            out.append(aff)
    inf = _affine([c.value for c in param.infinity_point().coords])
    if inf is not None:
        out.append(inf)
    return out


def _polyline_paths(points, view):
    """Split samples into polyline runs inside the viewport."""
    runs = []
    run = []
    prev = None
    for p in sorted(points, key=lambda q: math.atan2(q[1], q[0])):
        if not view.contains(*p, margin=0.2):
            if run:
                runs.append(run)
                run = []
            prev = None
            continue
        if prev is not None and math.hypot(p[0] - prev[0], p[1] - prev[1]) > 0.6:
            runs.append(run)
            run = []
        run.append(p)
        prev = p
    if run:
        runs.append(run)
    return [r for r in runs if len(r) >= 2]


def _clip_line(coeffs, view):
    """Segment of the projective line a x + b y + c = 0 inside the viewport."""
    a, b, c = (x.real for x in coeffs)
    pts = []
    for x in (view.xmin, view.xmax):
        if abs(b) > 1e-12:
            y = -(a * x + c) / b
            if view.ymin <= y <= view.ymax:
                pts.append((x, y))
    for y in (view.ymin, view.ymax):
        if abs(a) > 1e-12:
            x = -(b * y + c) / a
            if view.xmin <= x <= view.xmax:
                pts.append((x, y))
    uniq = []
    for p in pts:
        if all(math.hypot(p[0] - q[0], p[1] - q[1]) > 1e-9 for q in uniq):
            uniq.append(p)
    if len(uniq) < 2:
        return None
    uniq.sort()
    return uniq[0], uniq[-1]


def render_svg(pair, what: str = "arrangement", transverse=None,
               size: int = 640) -> str:
    """SVG document for a validated pair.

    ``what`` selects the layers: ``transverse`` draws the traced polygon,
    ``degenerate`` the two degenerate transverses through the bitangent
    tangencies, ``arrangement`` the full curve with bitangents.
    """
    warnings = []
    conic_pts = [_sample_conic(pair.c1), _sample_conic(pair.c2)]
    view = _auto_viewport([pair.c1, pair.c2])
    scale = size / (view.xmax - view.xmin)

    body = []

    def emit_polyline(run, style):
        pts = " ".join(f"{_fmt(x)},{_fmt(-y)}" for x, y in run)
        body.append(f'<polyline points="{pts}" {style} fill="none"/>')

    for pts, style in zip(conic_pts, (STYLE["conic"], STYLE["conic2"])):
        if not pts:
            warnings.append("a conic has no drawable real points")
            continue
        for run in _polyline_paths(pts, view):
            emit_polyline(run, style)

    lines = []
    if what in ("arrangement", "degenerate"):
        for idx, b in enumerate(pair.bitangents, start=1):
            lines.append((f"T{idx}", b.line, STYLE["bitangent"]))
    if what in ("arrangement", "transverse") and transverse is not None:
        for idx, l in enumerate(transverse.lines, start=1):
            lines.append((f"L{idx}", l, STYLE["line"]))
    if what == "degenerate":
        from .poncelet import trace

        seen = []
        for b in pair.bitangents:
            t = trace(pair, b.touch1, pair.period, start_line=b.line)
            if any(t.lines[0].equal(l, 1e-8) for s in seen for l in s):
                continue
            seen.append(t.lines)
            for idx, l in enumerate(t.lines, start=1):
                lines.append((f"D{idx}", l, STYLE["line"]))

    for label, line, style in lines:
        coords = line.normalized().float_coords()
        if not _is_real_triple(coords):
            warnings.append(f"line {label} is not real; skipped")
            continue
        seg = _clip_line(coords, view)
        if seg is None:
            continue
        (x1, y1), (x2, y2) = seg
        body.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(-y1)}" x2="{_fmt(x2)}" '
            f'y2="{_fmt(-y2)}" {style}/>')

    points = []
    if what in ("transverse",) and transverse is not None:
        points += [(f"P{i+1}", p) for i, p in enumerate(transverse.points)]
    if what in ("arrangement", "degenerate"):
        points += [(f"N{i+1}", p) for i, p in enumerate(pair.nodes)]
    for label, p in points:
        coords = p.normalized().float_coords()
        if not _is_real_triple(coords):
            warnings.append(f"point {label} is not real; skipped")
            continue
        aff = _affine(coords)
        if aff is None or not view.contains(*aff):
            continue
        x, y = aff
        body.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(-y)}" r="0.028" '
                    f'{STYLE["point"]}/>')
        body.append(
            f'<text x="{_fmt(x + 0.05)}" y="{_fmt(-y - 0.05)}" '
            f'font-size="0.1" font-family="monospace">{label}</text>')

    width = view.xmax - view.xmin
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{size}" height="{size}" '
        f'viewBox="{_fmt(view.xmin)} {_fmt(view.ymin)} {_fmt(width)} '
        f'{_fmt(width)}">',
        f'<rect x="{_fmt(view.xmin)}" y="{_fmt(view.ymin)}" '
        f'width="{_fmt(width)}" height="{_fmt(width)}" fill="#ffffff"/>',
    ]
    for w in sorted(set(warnings)):
        parts.append(f"<!-- warning: {w} -->")
    parts += body
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_svg(document: str, path: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(document)
    except OSError as e:
        raise IoFailure(f"cannot write {path}: {e}") from e
