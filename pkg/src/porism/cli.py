"""Command-line front end.

Commands: find-pair, trace, covers, splitting, verify, render.  Reports
are deterministic for fixed inputs and flags; ``--format structured``
emits JSON with sorted keys.  Exit code 0 means every executed check
passed.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import arrfile
from .covers import (
    BranchDivisor,
    NodalArrangement,
    build_cover,
    canonical_form,
    conic_component,
    enumerate_pic2,
    induced_gluing,
    line_component,
)
from .poncelet import (
    CLOSURE_TOL,
    Degeneracy,
    NoClosure,
    NoSignChange,
    ValidationFailed,
    _origin_on_conic,
    default_family,
    find_periodic_pair,
    random_origins,
    trace,
)
from .render import IoFailure, render_svg, write_svg
from .splitting import (
    SplittingType,
    Verdict,
    comb_signature,
    salmon_rank_check,
    splitting_type,
    zariski_certificate,
)

DEFAULT_ORIGIN_Q = Fraction(3, 25)


def _load_pair(args):
    if args.input:
        with open(args.input, "r", encoding="utf-8") as fh:
            af = arrfile.parse(fh.read())
        return arrfile.file_to_pair(af)
    if args.n:
        return find_periodic_pair(args.n, tol=args.tol)
    raise SystemExit("either --input FILE or --n N is required")


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.format == "structured":
        print(json.dumps(payload, sort_keys=True, indent=2, default=str))
    else:
        print("\n".join(text_lines))


def _pair_payload(pair) -> dict:
    return {
        "period": pair.period,
        "parameter": str(pair.parameter),
        "c1": [str(arrfile.format_number(arrfile._store(c)))
               for c in pair.c1.coeffs()],
        "c2": [str(arrfile.format_number(arrfile._store(c)))
               for c in pair.c2.coeffs()],
        "nodes": [_triple(p) for p in pair.nodes],
        "bitangents": [_triple(b.line) for b in pair.bitangents],
        "bitangent_pairing": [list(p) for p in pair.bitangent_pairing],
    }


def _triple(obj) -> list[str]:
    return [f"{c.real:.12g}{c.imag:+.12g}j" if abs(c.imag) > 1e-12
            else f"{c.real:.12g}" for c in obj.normalized().float_coords()]


# -- commands ------------------------------------------------------------------


def cmd_find_pair(args) -> int:
    try:
        pair = find_periodic_pair(args.n, bracket=args.bracket, tol=args.tol)
    except NoSignChange as e:
        print(f"NoSignChange: {e}", file=sys.stderr)
        return 1
    except ValidationFailed as e:
        print(f"ValidationFailed: {e}", file=sys.stderr)
        return 1
    origin_q = DEFAULT_ORIGIN_Q
    t = trace(pair, _origin_on_conic(pair.c1, origin_q), pair.period)
    af = arrfile.pair_to_file(pair, transverse=t, origin_q=origin_q)
    text = arrfile.serialize(af)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    _emit(args, _pair_payload(pair),
          [text if not args.output else f"wrote {args.output}",
           f"period {pair.period} at parameter {pair.parameter}"])
    return 0


def cmd_trace(args) -> int:
    pair = _load_pair(args)
    q = Fraction(args.origin) if args.origin else DEFAULT_ORIGIN_Q
    origin = _origin_on_conic(pair.c1, q)
    try:
        t = trace(pair, origin, args.steps or pair.period)
    except NoClosure as e:
        print(f"NoClosure: {e}", file=sys.stderr)
        return 1
    lines = [f"origin on y = {q} z",
             f"closed with period {t.period}, {t.degeneracy.value}"]
    for i, (p, l) in enumerate(t.steps, start=1):
        lines.append(f"  P{i} {_triple(p)}  L{i} {_triple(l)}")
    payload = {
        "period": t.period,
        "degeneracy": t.degeneracy.value,
        "reflections": list(t.reflections),
        "points": [_triple(p) for p in t.points],
        "lines": [_triple(l) for l in t.lines],
    }
    _emit(args, payload, lines)
    return 0


def cmd_covers(args) -> int:
    pair = _load_pair(args)
    arr = NodalArrangement.from_conic_pair(pair.c1, pair.c2)
    classes = enumerate_pic2(arr)
    t = trace(pair, _origin_on_conic(pair.c1, DEFAULT_ORIGIN_Q), pair.period)
    payload = {
        "nodes": [_triple(p) for p, _ in arr.nodes],
        "pic2": [str(c) for c in classes],
        "gluings": {},
    }
    lines = [f"{arr}", "order-2 classes: " + " ".join(str(c) for c in classes)]
    for i in range(4):
        for j in range(i + 1, 4):
            b = BranchDivisor(lines=(pair.bitangents[i].line,
                                     pair.bitangents[j].line))
            g = induced_gluing(b, arr)
            cov = build_cover(g)
            payload["gluings"][f"T{i+1}+T{j+1}"] = {
                "signs": str(g),
                "class": str(canonical_form(g)),
                "connected": cov.is_connected,
            }
            lines.append(f"  T{i+1}+T{j+1}: signs {g}  class "
                         f"{canonical_form(g)}  connected {cov.is_connected}")
    gp = induced_gluing(BranchDivisor(lines=t.lines), arr)
    payload["gluings"]["transverse"] = {"signs": str(gp),
                                        "class": str(canonical_form(gp))}
    lines.append(f"  transverse lines: signs {gp}  class {canonical_form(gp)}")
    _emit(args, payload, lines)
    return 0


def cmd_splitting(args) -> int:
    pair = _load_pair(args)
    arr = NodalArrangement.from_conic_pair(pair.c1, pair.c2)
    t = trace(pair, _origin_on_conic(pair.c1, DEFAULT_ORIGIN_Q), pair.period)
    payload, lines = {}, []
    for i in range(4):
        for j in range(i + 1, 4):
            b = BranchDivisor(lines=t.lines + (pair.bitangents[i].line,
                                               pair.bitangents[j].line))
            st = splitting_type(pair.c1, pair.c2, b, arr)
            paired = (i, j) in pair.bitangent_pairing
            payload[f"C{i+1}{j+1}"] = {"splitting": str(st), "paired": paired}
            lines.append(f"  C_{i+1}{j+1}: splitting {st}"
                         f"{'  [paired bitangents]' if paired else ''}")
    _emit(args, payload, lines)
    return 0


def cmd_render(args) -> int:
    pair = _load_pair(args)
    transverse = None
    if args.what in ("transverse", "arrangement"):
        transverse = trace(pair, _origin_on_conic(pair.c1, DEFAULT_ORIGIN_Q),
                           pair.period)
    doc = render_svg(pair, what=args.what, transverse=transverse,
                     size=args.size)
    try:
        write_svg(doc, args.output)
    except IoFailure as e:
        print(f"IoFailure: {e}", file=sys.stderr)
        return 1
    print(f"wrote {args.output}")
    return 0


# -- the verification pipeline ---------------------------------------------------


def verification_report(pair, seed: int = 1, level: str = "full") -> dict:
    """Run the full invariant chain for one validated pair.

    Steps (in order): order-2 class count, bitangent-pair splitting types
    and the class grid, the eight-tangency rank check, closure from random
    origins, the degenerate census, transverse-versus-bitangent cover
    classes, equal combinatorics, the splitting partition, and the final
    certificates.  ``level="quick"`` stops after the cover classes.
    """
    checks = []
    arr = NodalArrangement.from_conic_pair(pair.c1, pair.c2)
    n = pair.period
    m = n // 2

    classes = enumerate_pic2(arr)
    checks.append(("pic2_count_8", len(classes) == 8))

    bit_classes = {}
    sub_ok = True
    two_two = True
    for i in range(4):
        for j in range(i + 1, 4):
            b = BranchDivisor(lines=(pair.bitangents[i].line,
                                     pair.bitangents[j].line))
            g = induced_gluing(b, arr)
            bit_classes[(i, j)] = canonical_form(g)
            plus = sum(1 for s in g.signs if s == 0)
            two_two = two_two and {plus, 4 - plus} == {2}
            st = splitting_type(pair.c1, pair.c2, b, arr)
            sub_ok = sub_ok and (st.m1, st.m2) == (2, 2)
    checks.append(("bitangent_pairs_split_2_2", sub_ok and two_two))

    grid_ok = True
    import itertools

    for (i, j, k) in itertools.combinations(range(4), 3):
        triple = {bit_classes[(i, j)], bit_classes[(i, k)], bit_classes[(j, k)]}
        grid_ok = grid_ok and len(triple) == 3
    for (i, j) in [(0, 1), (0, 2), (0, 3)]:
        k, l = sorted(set(range(4)) - {i, j})
        grid_ok = grid_ok and bit_classes[(i, j)] == bit_classes[(k, l)]
    checks.append(("bitangent_class_grid", grid_ok))

    salmon = salmon_rank_check(pair)
    checks.append(("salmon_rank_5", salmon["rank_eq_5"]))

    closure_ok = True
    for origin in random_origins(pair, 10, seed=seed):
        try:
            t = trace(pair, origin, n)
            closure_ok = closure_ok and t.period == n
        except NoClosure:
            closure_ok = False
    checks.append(("closure_10_random_origins", closure_ok))

    census_ok = True
    if n % 2 == 0:
        bit_traces = []
        for b in pair.bitangents:
            t = trace(pair, b.touch1, n, start_line=b.line)
            census_ok = census_ok and t.degeneracy is Degeneracy.TWO_BITANGENTS
            bit_traces.append(t)
        distinct = _distinct_line_sets(bit_traces)
        census_ok = census_ok and distinct == 2
        node_traces = []
        for p in pair.nodes:
            t = trace(pair, p, n)
            census_ok = census_ok and t.degeneracy is Degeneracy.TWO_NODE_TANGENTS
            node_traces.append(t)
        census_ok = census_ok and _distinct_line_sets(node_traces) == 2
    checks.append(("degenerate_census", census_ok))

    origin = _origin_on_conic(pair.c1, DEFAULT_ORIGIN_Q)
    tgen = trace(pair, origin, n)
    transverse_class = canonical_form(
        induced_gluing(BranchDivisor(lines=tgen.lines), arr))
    paired = set(pair.bitangent_pairing)
    equiv_ok = True
    for key, cls in bit_classes.items():
        want = key in paired
        equiv_ok = equiv_ok and ((cls == transverse_class) == want)
    checks.append(("transverse_matches_paired_bitangents", equiv_ok))

    report = {
        "period": n,
        "parameter": str(pair.parameter),
        "pic2": [str(c) for c in classes],
        "transverse_class": str(transverse_class),
        "salmon_singular_values": salmon["singular_values"],
        "checks": checks,
    }

    if level == "quick":
        report["checks"] = checks
        report["passed"] = all(ok for _, ok in checks)
        return report

    comps_base = [conic_component(pair.c1), conic_component(pair.c2)]
    comps_base += [line_component(l) for l in tgen.lines]

    def components(i, j):
        return comps_base + [line_component(pair.bitangents[i].line),
                             line_component(pair.bitangents[j].line)]

    sigs = {}
    for i in range(4):
        for j in range(i + 1, 4):
            sigs[(i, j)] = comb_signature(components(i, j))
    first = next(iter(sigs.values()))
    checks.append(("comb_signatures_equal", all(s == first
                                                for s in sigs.values())))

    types = {}
    for i in range(4):
        for j in range(i + 1, 4):
            b = BranchDivisor(lines=tgen.lines + (pair.bitangents[i].line,
                                                  pair.bitangents[j].line))
            types[(i, j)] = splitting_type(pair.c1, pair.c2, b, arr)
    partition_ok = all(
        (types[key] == SplittingType(0, 4)) == (key in paired)
        and (types[key] == SplittingType(2, 2)) == (key not in paired)
        for key in types
    )
    checks.append(("splitting_partition", partition_ok))

    verdicts = {}
    verdict_ok = True
    for pk in sorted(paired):
        for ck in sorted(set(types) - paired):
            b_a = BranchDivisor(lines=tgen.lines + (pair.bitangents[pk[0]].line,
                                                    pair.bitangents[pk[1]].line))
            b_b = BranchDivisor(lines=tgen.lines + (pair.bitangents[ck[0]].line,
                                                    pair.bitangents[ck[1]].line))
            cert = zariski_certificate(
                components(*pk), components(*ck), pair.c1, pair.c2, b_a, b_b,
                pair_id=f"C{pk[0]+1}{pk[1]+1}-vs-C{ck[0]+1}{ck[1]+1}")
            verdicts[cert.pair_id] = cert
            verdict_ok = verdict_ok and cert.verdict is Verdict.ZARISKI_PAIR
    checks.append(("zariski_verdicts", verdict_ok))

    report["splitting_types"] = {f"C{i+1}{j+1}": str(t)
                                 for (i, j), t in sorted(types.items())}
    report["certificates"] = {k: v.to_dict() for k, v in sorted(verdicts.items())}
    report["checks"] = checks
    report["passed"] = all(ok for _, ok in checks)
    return report


def _distinct_line_sets(traces) -> int:
    reps = []
    for t in traces:
        for rep in reps:
            if all(any(l.equal(r, 1e-8) for r in rep) for l in t.lines):
                break
        else:
            reps.append(t.lines)
    return len(reps)


def cmd_verify(args) -> int:
    pair = _load_pair(args)
    report = verification_report(pair, seed=args.seed, level=args.level)
    if args.format == "structured":
        payload = dict(report)
        payload["checks"] = {name: ok for name, ok in report["checks"]}
        print(json.dumps(payload, sort_keys=True, indent=2, default=str))
    else:
        print(f"verification for period-{report['period']} pair "
              f"(parameter {report['parameter']})")
        for name, ok in report["checks"]:
            print(f"  {'PASS' if ok else 'FAIL'}  {name}")
        if "certificates" in report:
            for k in sorted(report["certificates"]):
                v = report["certificates"][k]
                print(f"  certificate {k}: {v['splitting_a']} vs "
                      f"{v['splitting_b']} -> {v['verdict']}")
    return 0 if report["passed"] else 1


# -- argument parsing -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="porism",
        description="Poncelet conic-line arrangements, double covers and "
                    "Zariski-pair certificates")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, needs_pair=True):
        if needs_pair:
            sp.add_argument("--input", help="arrangement file of a validated pair")
            sp.add_argument("--n", type=int, help="search for a period-n pair")
        sp.add_argument("--tol", type=float, default=1e-13,
                        help="bisection tolerance for the closure defect")
        sp.add_argument("--precision", type=int, default=None,
                        help="base working precision in bits")
        sp.add_argument("--seed", type=int, default=1,
                        help="seed for random origins")
        sp.add_argument("--format", choices=("text", "structured"),
                        default="text")

    sp = sub.add_parser("find-pair", help="search for an n-periodic pair")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--bracket", type=float, nargs=2, default=None,
                    metavar=("LO", "HI"))
    sp.add_argument("--output", help="write the arrangement file here")
    common(sp, needs_pair=False)
    sp.set_defaults(fn=cmd_find_pair)

    sp = sub.add_parser("trace", help="trace a transverse from an origin")
    sp.add_argument("--origin", help="rational q: origin on the line y = q z")
    sp.add_argument("--steps", type=int, default=None)
    common(sp)
    sp.set_defaults(fn=cmd_trace)

    sp = sub.add_parser("covers", help="order-2 classes and induced gluings")
    common(sp)
    sp.set_defaults(fn=cmd_covers)

    sp = sub.add_parser("splitting", help="splitting types of the arrangements")
    common(sp)
    sp.set_defaults(fn=cmd_splitting)

    sp = sub.add_parser("verify", help="run the full verification pipeline")
    sp.add_argument("--level", choices=("quick", "full"), default="full")
    common(sp)
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("render", help="draw the configuration as SVG")
    sp.add_argument("--what", choices=("transverse", "degenerate",
                                       "arrangement"), default="arrangement")
    sp.add_argument("--output", required=True)
    sp.add_argument("--size", type=int, default=640)
    common(sp)
    sp.set_defaults(fn=cmd_render)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.precision:
        from . import numeric

        numeric.DEFAULT_PREC = args.precision
    try:
        return args.fn(args)
    except (ValidationFailed, NoSignChange) as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except arrfile.FormatError as e:
        print(f"FormatError: {e}", file=sys.stderr)
        return 2
    except FileNotFoundError as e:
        print(f"IoFailure: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
