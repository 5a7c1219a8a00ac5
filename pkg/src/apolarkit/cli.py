"""Command-line front end.

One job per invocation: parse the inputs, run the named computation, and
emit a deterministic report.  JSON is the machine format; the text
renderer exists for eyeball comparison of Betti tables and PASS/FAIL
lines.  Exit codes: 0 success, 2 parse error, 3 precondition violation,
4 reference mismatch in a reproduction run.
"""

import argparse
import hashlib
import json
import random
import sys
from fractions import Fraction

from . import __version__, catalog, rankloci
from .apolarity import (
    PointSet,
    apolar_ideal_component,
    catalecticant,
    cube_span_contains,
    is_apolar_pointset,
    is_apolar_variety,
    min_partial_rank_scan,
    partial_space,
    q_f,
    subspace_forms,
)
from .errors import ParseError, PreconditionError, ReferenceMismatch
from .fields import GF, QQ
from .forms import monomial_count, parse_form
from .resolutions import (
    apolar_quotient_module,
    graded_betti,
    m2_matrix,
    points_quotient_module,
    restrict_linear_matrix,
)

REPRO_CASES = (
    "betti-generic", "points9", "points10", "thom-porteous", "drop-curve",
    "scroll-example", "veronese-rank-drop", "rank-scan",
)


def parse_field_flag(text):
    """q -> QQ, fp:<p> -> GF(p), fp2:<p> -> GF(p^2)."""
    if text == "q":
        return QQ
    for prefix, degree in (("fp:", 1), ("fp2:", 2)):
        if text.startswith(prefix):
            try:
                p = int(text[len(prefix):])
            except ValueError:
                raise ParseError("field prime must be an integer: %r" % text)
            try:
                return GF(p, degree)
            except (ValueError, PreconditionError) as exc:
                raise ParseError("bad field %r: %s" % (text, exc))
    raise ParseError("unknown field descriptor %r (try q, fp:5, fp2:5)" % text)


def parse_family_flag(text):
    parts = text.split(",")
    if len(parts) != 5:
        raise ParseError("family wants 5 comma-separated values, got %d"
                         % len(parts))
    try:
        return tuple(Fraction(part.strip()) for part in parts)
    except (ValueError, ZeroDivisionError):
        raise ParseError("family values must be rationals: %r" % text)


def random_rational_points(count, seed, nvars=6, spread=9):
    """Seeded random points with small integer coordinates, no repeats."""
    rng = random.Random(seed)
    points = []
    seen = set()
    attempts = 0
    while len(points) < count:
        attempts += 1
        if attempts > 100 * count:
            raise PreconditionError("could not draw %d distinct points" % count)
        pt = tuple(Fraction(rng.randint(-spread, spread))
                   for _ in range(nvars))
        if not any(pt):
            continue
        lead = next(c for c in pt if c)
        key = tuple(c / lead for c in pt)
        if key in seen:
            continue
        seen.add(key)
        points.append(pt)
    return points


def _random_field_point(field, rng, nvars):
    while True:
        pt = [field.random_element(rng) for _ in range(nvars)]
        if any(not field.is_zero(c) for c in pt):
            return pt


def _random_line(field, rng, nvars):
    p = field.char
    while True:
        a = _random_field_point(field, rng, nvars)
        b = _random_field_point(field, rng, nvars)
        proportional = all(
            (int(a[i]) * int(b[j]) - int(a[j]) * int(b[i])) % p == 0
            for i in range(nvars) for j in range(i + 1, nvars))
        if not proportional:
            return (a, b)


def _envelope(command, field, seed, input_text, payload):
    digest = hashlib.sha256(input_text.encode("utf-8")).hexdigest()
    return {
        "tool": "apolarkit",
        "version": __version__,
        "command": command,
        "field": field.describe() if field is not None else None,
        "seed": seed,
        "input_sha256": digest,
        "report": payload,
    }


def _family_or_form(args, field):
    if getattr(args, "family", None):
        params = parse_family_flag(args.family)
        form = catalog.cubic_family(*params, field=field)
        label = "family(%s)" % ",".join(str(v) for v in params)
        return form, label
    if getattr(args, "form", None):
        form = parse_form(args.form, field, "x")
        return form, form.to_text()
    raise ParseError("provide a polynomial or --family a,b,c,d,e")


# ---- subcommands ------------------------------------------------------


def run_apolar(args, field, seed):
    f, label = _family_or_form(args, field)
    ranks = {}
    ideal_dims = {}
    hilbert = []
    for k in range(f.degree + 1):
        cat = catalecticant(f, k)
        ranks[k] = cat.rank()
        ideal_dims[k] = monomial_count(f.nvars, k) - ranks[k]
        hilbert.append(ranks[k])
    payload = {
        "input": label,
        "degree": f.degree,
        "variables": f.nvars,
        "hilbert_function": hilbert,
        "catalecticant_ranks": ranks,
        "apolar_ideal_dims": ideal_dims,
    }
    payload["partial_space_dim"] = partial_space(f).dim
    if f.degree == 3:
        payload["qf_basis"] = [g.to_text() for g in subspace_forms(q_f(f))]
    return payload, True


def _betti_payload(table):
    return {"cells": [[i, j, b] for (i, j), b in sorted(table.nonzero().items())],
            "rendered": table.render_text()}


def run_betti(args, field, seed):
    max_row = args.max_row
    module_degree = max_row + 1
    if args.points:
        pts = random_rational_points(args.points, seed)
        Z = PointSet(pts, QQ)
        module = points_quotient_module(Z, module_degree)
        label = "points(%d, seed=%d)" % (args.points, seed)
    else:
        f, label = _family_or_form(args, field)
        module = apolar_quotient_module(f, module_degree)
    table = graded_betti(module, args.max_i, args.max_j, max_row=max_row)
    payload = {"input": label, "window": [args.max_i, args.max_j, max_row]}
    payload.update(_betti_payload(table))
    matches = [name for name, ref in catalog.reference_betti_tables().items()
               if ref == table]
    payload["matches_reference"] = matches[0] if matches else None
    return payload, True


def run_m2(args, field, seed):
    f, label = _family_or_form(args, field)
    M = m2_matrix(f)
    rng = random.Random(seed)
    samples = []
    for _ in range(args.samples):
        pt = _random_field_point(field, rng, M.nvars)
        samples.append({
            "point": [field.format_scalar(c) for c in pt],
            "rank": M.evaluate_at(pt).rank(),
        })
    payload = {
        "input": label,
        "shape": [M.nrows, M.ncols],
        "variables": M.nvars,
        "samples": samples,
    }
    if args.dump:
        payload["entries"] = M.to_json()
    return payload, True


def run_ranklocus(args, field, seed):
    f, label = _family_or_form(args, field)
    M = m2_matrix(f)
    matrix_ref = "m2(%s)" % label
    if args.restrict_plane:
        M = restrict_linear_matrix(M, catalog.plane_substitution(field))
        matrix_ref += "|plane"
    rng = random.Random(seed)
    degrees = []
    if field.char > 50 and field.degree == 1:
        for _ in range(args.lines):
            line = _random_line(field, rng, M.nvars)
            degrees.append(rankloci.drop_degree_on_line(
                M, line, args.threshold, seed=rng.randrange(1 << 30)))
    curve = None
    singulars = []
    classification = None
    point_field = field
    if args.interpolate:
        if M.nvars != 3:
            raise PreconditionError(
                "interpolation needs a 3-variable matrix; use --restrict-plane")
        curve = rankloci.interpolate_drop_curve(
            M, args.threshold, extension_degree=2, seed=seed)
        ext = GF(field.char, 2)
        lifted = curve.lift_to(ext)
        singulars = rankloci.singular_points_plane_curve(curve, search_extension=2)
        classification = None
        if len(singulars) == 1:
            classification = rankloci.classify_singularity(
                lifted, list(singulars[0]))
        point_field = ext
    payload = rankloci.drop_report(matrix_ref, args.threshold, degrees,
                                   curve, singulars, classification,
                                   point_field=point_field)
    return payload, True


def run_catalog(args, field, seed):
    entries = {
        "veronese-quadrics": lambda F: [g.to_text()
                                        for g in catalog.veronese_ideal_quadrics(F)],
        "discriminant-cubic": lambda F: catalog.discriminant_cubic(F).to_text(),
        "plane-substitution": lambda F: [g.to_text()
                                         for g in catalog.plane_substitution(F)],
        "family-basis": lambda F: list(catalog.CUBIC_FAMILY_BASIS_TEXTS),
        "scroll-cubic": lambda F: catalog.scroll_apolar_cubic(F).to_text(),
        "scroll-minors": lambda F: [g.to_text() for g in catalog.scroll_minors(F)],
        "scroll-points": lambda F: [[F.format_scalar(c) for c in pt]
                                    for pt in catalog.scroll_configuration_points(F)],
        "reference-betti": lambda F: {
            name: table.to_json()
            for name, table in sorted(catalog.reference_betti_tables().items())},
        "reference-drop-curve": lambda F: catalog.reference_drop_curve_mod5().to_text(),
    }
    if not args.name:
        return {"names": sorted(entries)}, True
    if args.name not in entries:
        raise ParseError("unknown catalog entry %r (run without a name to list)"
                         % args.name)
    return {"name": args.name, "value": entries[args.name](field)}, True


def run_powersum(args, field, seed):
    forms, lams, f = catalog.random_power_sum(
        args.count, field, seed, coplanar=args.coplanar)
    Z = PointSet([g.coeffs for g in forms], field, allow_duplicates=False)
    route_a = is_apolar_pointset(Z, f)
    route_b = cube_span_contains(Z, f)
    payload = {
        "count": args.count,
        "coplanar": args.coplanar,
        "forms": [g.to_text() for g in forms],
        "weights": [field.format_scalar(v) for v in lams],
        "cubic": f.to_text(),
        "apolar_pointset": route_a,
        "cube_span_membership": route_b,
        "routes_agree": route_a == route_b,
    }
    return payload, route_a and route_b


# ---- reproduction cases -----------------------------------------------


def _check(checks, name, expected, got):
    checks.append({"name": name, "expected": expected, "got": got,
                   "pass": expected == got})


def _check_true(checks, name, got, detail=None):
    entry = {"name": name, "expected": True, "got": bool(got), "pass": bool(got)}
    if detail is not None:
        entry["detail"] = detail
    checks.append(entry)


def _repro_betti_generic(seed, checks):
    f = catalog.cubic_family(1, -1, 1, -1, 1)
    table = graded_betti(apolar_quotient_module(f, 4), 6, 9, max_row=3)
    ref = catalog.reference_betti_tables()["generic-cubic"]
    _check(checks, "betti-table", sorted(ref.nonzero().items()),
           sorted(table.nonzero().items()))


def _repro_points(count, name, seed, checks):
    Z = PointSet(random_rational_points(count, seed), QQ)
    table = graded_betti(points_quotient_module(Z, 4), 6, 9, max_row=3)
    ref = catalog.reference_betti_tables()[name]
    _check(checks, "betti-table", sorted(ref.nonzero().items()),
           sorted(table.nonzero().items()))


def _repro_thom_porteous(seed, checks):
    field = GF(101)
    M = m2_matrix(catalog.cubic_family(1, -1, 1, -1, 1, field=field))
    rng = random.Random(seed)
    degrees = [rankloci.drop_degree_on_line(M, _random_line(field, rng, 6), 20,
                                            seed=rng.randrange(1 << 30))
               for _ in range(5)]
    _check(checks, "line-degrees", [9] * 5, degrees)


def _repro_drop_curve(seed, checks):
    field = GF(5)
    M = m2_matrix(catalog.cubic_family(1, -1, 1, -1, 1, field=field))
    R = restrict_linear_matrix(M, catalog.plane_substitution(field))
    curve = rankloci.interpolate_drop_curve(R, 20, extension_degree=2, seed=seed)
    _check(checks, "curve-degree", 9, curve.degree)
    ref = catalog.reference_drop_curve_mod5()
    _check_true(checks, "matches-stored-reference",
                _proportional_mod_p(curve, ref, 5),
                detail={"computed": curve.to_text(), "reference": ref.to_text()})
    ext = GF(5, 2)
    lifted = curve.lift_to(ext)
    singulars = rankloci.singular_points_plane_curve(curve, search_extension=2)
    _check(checks, "singular-point-count", 1, len(singulars))
    if len(singulars) == 1:
        pt = [ext.format_scalar(c) for c in singulars[0]]
        _check(checks, "singular-point-location", ["0", "1", "0"], pt)
        _check(checks, "node-classification", "node",
               rankloci.classify_singularity(lifted, list(singulars[0])))


def _proportional_mod_p(f, g, p):
    fc = [int(c) for c in f.coeffs]
    gc = [int(c) for c in g.coeffs]
    if len(fc) != len(gc):
        return False
    lead_f = next((c for c in fc if c % p), None)
    lead_g = next((c for c in gc if c % p), None)
    if lead_f is None or lead_g is None:
        return lead_f is lead_g
    scale = lead_g * pow(lead_f, p - 2, p)
    return all((c * scale - d) % p == 0 for c, d in zip(fc, gc))


def _repro_scroll_example(seed, checks):
    cubic = catalog.scroll_apolar_cubic()
    _check_true(checks, "apolar-to-scroll",
                is_apolar_variety(catalog.scroll_minors(), cubic))
    table = graded_betti(apolar_quotient_module(cubic, 4), 6, 9, max_row=3)
    ref = catalog.reference_betti_tables()["generic-cubic"]
    _check(checks, "betti-table", sorted(ref.nonzero().items()),
           sorted(table.nonzero().items()))
    M = m2_matrix(cubic)
    zero = parse_form("0", QQ, alphabet="z", degree=1)
    sub = [parse_form("z0", QQ, "z"), parse_form("z1", QQ, "z"),
           parse_form("z2", QQ, "z"), zero, zero, zero]
    R = restrict_linear_matrix(M, sub)
    rng = random.Random(seed)
    ranks = [R.evaluate_at(_random_field_point(QQ, rng, 3)).rank()
             for _ in range(5)]
    _check(checks, "restricted-ranks", [21] * 5, ranks)


def _repro_veronese_rank_drop(seed, checks):
    M = m2_matrix(catalog.cubic_family(1, -1, 1, -1, 1))
    rng = random.Random(seed)
    ranks = []
    while len(ranks) < 20:
        a = [Fraction(rng.randint(-9, 9)) for _ in range(3)]
        if not any(a):
            continue
        ranks.append(M.evaluate_at(list(catalog.veronese_point(a))).rank())
    _check_true(checks, "all-ranks-drop", all(r <= 20 for r in ranks),
                detail={"ranks": ranks})
    _check_true(checks, "majority-rank-20",
                sum(1 for r in ranks if r == 20) > 10,
                detail={"rank20": sum(1 for r in ranks if r == 20)})


def _repro_rank_scan(seed, checks):
    f = catalog.cubic_family(1, -1, 1, -1, 1, field=GF(5))
    best = min_partial_rank_scan(f)
    _check_true(checks, "min-partial-rank-at-least-4", best >= 4,
                detail={"minimum": best})


def run_repro(args, field, seed):
    runners = {
        "betti-generic": lambda: _repro_betti_generic(seed, checks),
        "points9": lambda: _repro_points(9, "points-9", seed, checks),
        "points10": lambda: _repro_points(10, "points-10", seed, checks),
        "thom-porteous": lambda: _repro_thom_porteous(seed, checks),
        "drop-curve": lambda: _repro_drop_curve(seed, checks),
        "scroll-example": lambda: _repro_scroll_example(seed, checks),
        "veronese-rank-drop": lambda: _repro_veronese_rank_drop(seed, checks),
        "rank-scan": lambda: _repro_rank_scan(seed, checks),
    }
    if args.case not in runners:
        raise ParseError("unknown repro case %r; cases: %s"
                         % (args.case, ", ".join(REPRO_CASES)))
    checks = []
    runners[args.case]()
    ok = all(c["pass"] for c in checks)
    return {"case": args.case, "checks": checks,
            "overall": "PASS" if ok else "FAIL"}, ok


# ---- rendering and entry point ----------------------------------------


def _render_text(envelope):
    lines = ["apolarkit %s | %s | field %s | seed %s" % (
        envelope["version"], envelope["command"], envelope["field"],
        envelope["seed"])]
    payload = envelope["report"]
    if envelope["command"] == "repro":
        lines.append("case: %s" % payload["case"])
        for c in payload["checks"]:
            status = "PASS" if c["pass"] else "FAIL"
            line = "%s %s" % (status, c["name"])
            if not c["pass"]:
                line += " (expected %r, got %r)" % (c["expected"], c["got"])
            lines.append(line)
        lines.append("overall: %s" % payload["overall"])
        return "\n".join(lines) + "\n"
    for key, value in payload.items():
        if key == "rendered":
            lines.append(value)
        elif isinstance(value, (list, dict)):
            lines.append("%s: %s" % (key, json.dumps(value, sort_keys=True)))
        else:
            lines.append("%s: %s" % (key, value))
    return "\n".join(lines) + "\n"


def build_parser():
    parser = argparse.ArgumentParser(
        prog="apolarkit",
        description="Exact apolarity, Betti table, and rank-locus computations.")
    parser.add_argument("--field", default="q",
                        help="q (rationals), fp:<p>, or fp2:<p>")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for every randomized draw (default 0)")
    parser.add_argument("--out", default=None, help="write the report here")
    parser.add_argument("--format", choices=("json", "text"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("apolar", help="apolar ideal summary of a form")
    p.add_argument("form", nargs="?", default=None)
    p.add_argument("--family", default=None, help="a,b,c,d,e family parameters")
    p.set_defaults(runner=run_apolar)

    p = sub.add_parser("betti", help="graded Betti table")
    p.add_argument("form", nargs="?", default=None)
    p.add_argument("--family", default=None)
    p.add_argument("--points", type=int, default=None,
                   help="use this many seeded random rational points instead")
    p.add_argument("--max-i", type=int, default=6)
    p.add_argument("--max-j", type=int, default=9)
    p.add_argument("--max-row", type=int, default=3)
    p.set_defaults(runner=run_betti)

    p = sub.add_parser("m2", help="second-syzygy matrix of a cubic")
    p.add_argument("form", nargs="?", default=None)
    p.add_argument("--family", default=None)
    p.add_argument("--samples", type=int, default=3,
                   help="random points to sample the rank at")
    p.add_argument("--dump", action="store_true", help="include all entries")
    p.set_defaults(runner=run_m2)

    p = sub.add_parser("ranklocus", help="rank-drop loci of the syzygy matrix")
    p.add_argument("form", nargs="?", default=None)
    p.add_argument("--family", default=None)
    p.add_argument("--threshold", type=int, default=20)
    p.add_argument("--lines", type=int, default=5,
                   help="random lines for degree measurement (needs p > 50)")
    p.add_argument("--restrict-plane", action="store_true",
                   help="restrict to the stored plane substitution first")
    p.add_argument("--interpolate", action="store_true",
                   help="interpolate the plane drop curve (3-variable matrices)")
    p.set_defaults(runner=run_ranklocus)

    p = sub.add_parser("catalog", help="stored constants as polynomial text")
    p.add_argument("name", nargs="?", default=None)
    p.set_defaults(runner=run_catalog)

    p = sub.add_parser("powersum", help="seeded random power sum with checks")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--coplanar", action="store_true",
                   help="force the first four forms into a common plane")
    p.set_defaults(runner=run_powersum)

    p = sub.add_parser("repro", help="reproduction suite against stored values")
    p.add_argument("case", choices=REPRO_CASES)
    p.set_defaults(runner=run_repro)
    return parser


def _input_text(args):
    parts = [args.command]
    for key in ("form", "family", "points", "count", "case", "name",
                "threshold", "lines", "samples", "max_i", "max_j", "max_row",
                "coplanar", "restrict_plane", "interpolate", "dump"):
        value = getattr(args, key, None)
        if value not in (None, False):
            parts.append("%s=%s" % (key, value))
    return "|".join(parts)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        field = parse_field_flag(args.field)
        payload, ok = args.runner(args, field, args.seed)
    except ParseError as exc:
        print("parse error: %s" % exc, file=sys.stderr)
        return 2
    except ReferenceMismatch as exc:
        print("reference mismatch: %s" % exc, file=sys.stderr)
        return 4
    except PreconditionError as exc:
        print("precondition violated: %s" % exc, file=sys.stderr)
        return 3
    envelope = _envelope(args.command, field, args.seed, _input_text(args),
                         payload)
    if args.format == "json":
        rendered = json.dumps(envelope, sort_keys=True, indent=2) + "\n"
    else:
        rendered = _render_text(envelope)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(rendered)
    else:
        sys.stdout.write(rendered)
    return 0 if ok else 4


if __name__ == "__main__":
    sys.exit(main())
