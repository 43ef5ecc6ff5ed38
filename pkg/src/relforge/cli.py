"""Command-line interface: ``relforge <command> ...``.

Every command prints a short human summary, or with ``--json`` a versioned
report. Exit status is 0 on success, 1 on a mathematical failure (the
report names the error class) and 2 on a usage error.
"""

import argparse
import json
import sys
from fractions import Fraction

from .errors import ExpressionSyntaxError, RelforgeError, UnknownCorpusEntry
from .grammar import format_coefficient, parse_expression, parse_multipoly, parse_scalar
from .numberfield import NFElem, NumberField

REPORT_SCHEMA = "relforge.report/1"


class UsageError(Exception):
    pass


def _fraction(text):
    """Rational from '3/4', '0.99', '1e-30' or '10^-30'."""
    text = str(text).strip()
    try:
        if "^" in text:
            base, exp = text.split("^", 1)
            return Fraction(base) ** int(exp)
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None


def _text(x):
    if isinstance(x, (int, Fraction, NFElem)):
        return format_coefficient(x)
    return str(x)


def _csv(text):
    return [t.strip() for t in text.split(",") if t.strip()]


def _bindings(text):
    """'f=bs,g=rs' -> {'f': 'bs', 'g': 'rs'}; a bare name binds to itself."""
    out = {}
    for item in _csv(text):
        label, _, target = item.partition("=")
        out[label] = target or label
    return out


def _workspace(args):
    from .corpus import Workspace
    return Workspace(args.corpus)


def _kind_of(f):
    from .efunc import EFunction
    from .relations import DELTA, SIGMA
    return DELTA if isinstance(f, EFunction) else SIGMA(f.q)


# command handlers: each returns (summary lines, result dict)

def cmd_series(args):
    f = _workspace(args).function(args.name)
    cs = f.series.coeffs(args.terms)
    return [f"{args.name}: " + ", ".join(_text(c) for c in cs)], {"name": args.name, "coeffs": [_text(c) for c in cs]}


def cmd_guess(args):
    from .efunc import EFunction, guess_delta_operator
    from .mahler import DegreeBounds, guess_linear_sigma_relation
    from .relations import RelationPoly
    ws = _workspace(args)
    names = _csv(args.functions)
    funcs = [ws.function(n) for n in names]
    if any(isinstance(f, EFunction) for f in funcs):
        if len(funcs) != 1:
            raise UsageError("E-function guessing takes a single function")
        L = guess_delta_operator(funcs[0].series, args.order, args.degree, args.terms)
        return [f"operator: {L}"], {"operators": [L.to_json()]}
    bounds = DegreeBounds(args.order, args.degree, args.terms)
    rels = guess_linear_sigma_relation(funcs, bounds, args.inhomogeneous)
    out = [RelationPoly.from_linear_relation(r, names) for r in rels]
    lines = [f"{len(out)} relation(s) within m={args.order}, d={args.degree}, N={args.terms}"]
    lines += [f"  {q} = 0" for q in out]
    return lines, {"relations": [q.to_json() for q in out], "verified_to": 2 * args.terms}


def cmd_minimize(args):
    from .mahler import minimal_operator
    f = _workspace(args).function(args.name)
    L, cert = minimal_operator(f, args.degree, args.terms, args.max_order)
    lines = [f"minimal operator: {L}", f"certificate: {cert.status}; orders excluded {cert.lower_orders_excluded}"]
    return lines, {"operator": L.to_json(), "certificate": cert.to_json()}


def cmd_denominator(args):
    from .mahler import mahler_denominator
    ws = _workspace(args)
    f = ws.function(args.name)
    res = mahler_denominator(f, ws.profile.degree_bounds(args.order, args.degree, args.terms))
    lines = [f"denominator: {res.denominator}", f"witness: {res.witness}", f"caveat: {res.caveat}"]
    return lines, {"denominator": str(res.denominator), "witness": res.witness.to_json(),
                   "checked": res.checked, "caveat": res.caveat}


def cmd_level(args):
    from .mahler import make_level_R
    ws = _workspace(args)
    f = ws.function(args.name)
    L = make_level_R(f, _fraction(args.radius), ws.profile.degree_bounds())
    return [f"level-{args.radius} operator: {L}"], {"operator": L.to_json(), "radius": args.radius}


def _operator_arg(ws, args):
    if args.operator:
        return ws.operator(args.operator)
    if args.function:
        f = ws.function(args.function)
        return f.homogeneous_annihilator() if hasattr(f, "homogeneous_annihilator") else f.annihilator
    raise UsageError("give --operator or --function")


def cmd_regularize(args):
    from .mahler import remove_singularities
    ws = _workspace(args)
    L = _operator_arg(ws, args)
    op, s = remove_singularities(L, _fraction(args.radius))
    return [f"s = {s}", f"operator (order {op.order}): {op}"], {"s": s, "operator": op.to_json()}


def _system_of(f):
    from .mahler import companion_with_constant
    return companion_with_constant(f.annihilator, f.inhom, f.name)


def cmd_regular_point(args):
    from .mahler import is_regular_point
    ws = _workspace(args)
    pt = ws.point(args.point)
    if args.system:
        target = _system_of(ws.function(args.system))
    else:
        target = _operator_arg(ws, args)
    ok = is_regular_point(target, pt.value)
    return [f"{pt.name}: {'regular' if ok else 'singular'}"], {"point": pt.name, "regular": ok}


def cmd_iterate(args):
    from .mahler import iterate_system
    ws = _workspace(args)
    A = iterate_system(_system_of(ws.function(args.name)), args.times)
    rows = [[str(c) for c in row] for row in A.entries]
    lines = [f"q = {A.q}, labels {A.labels}"] + ["  [" + ", ".join(r) + "]" for r in rows]
    return lines, {"q": A.q, "labels": A.labels, "entries": rows, "det": str(A.det())}


def cmd_relations(args):
    from .relations import guess_algebraic_relations
    ws = _workspace(args)
    funcs = {label: ws.function(name) for label, name in _bindings(args.functions).items()}
    kind = _kind_of(next(iter(funcs.values())))
    rels = guess_algebraic_relations(funcs, kind, args.depth, args.total_degree, args.degree, args.terms,
                                     not args.homogeneous)
    lines = [f"{len(rels)} relation(s) within s={args.depth}, D={args.total_degree}, d={args.degree}"]
    lines += [f"  {q} = 0" for q in rels]
    return lines, {"relations": [q.to_json() for q in rels], "verified_to": 2 * args.terms}


def cmd_degenerate(args):
    from .relations import NotDegenerate, detect_degeneration, split_var
    ws = _workspace(args)
    rel = ws.relation(args.relation)
    pt = ws.point(args.point)
    banality = tuple(int(x) for x in _csv(args.banality)) if args.banality else None
    rep = detect_degeneration(rel.relation, rel.functions, pt.value, _fraction(args.width), banality)
    if isinstance(rep, NotDegenerate):
        return [f"no degeneration at {pt.name}: {rep.reason}"], rep.to_json()
    result = rep.to_json()
    result["point"] = pt.name
    lines = [f"degenerates at {pt.name}: {rep.P} = 0"]
    labels = {split_var(v)[0] for v in rep.P.used_vars()} - {"1"}
    if len(labels) == 1:
        label = labels.pop()
        try:
            value = rep.solve_for(label)
        except RelforgeError:
            value = None
        if value is not None:
            closed = _closed_form(rel.relation, label, pt.name)
            result["values"] = {label: _text(value)}
            text = f"{label}({pt.name}) = " + (f"{closed} = " if closed else "") + _text(value)
            if closed:
                result["closed_form"] = f"{label}({pt.name}) = {closed}"
            lines.append(text)
    if rep.consistency is not None:
        lines.append(f"numeric check: {'consistent' if rep.consistency.contains_zero() else 'FAILED'}")
    lines.extend(f"note: {n}" for n in rep.notes)
    return lines, result


def _closed_form(Q, label, point_name):
    """-b(z)/a(z) written in the point name when Q = b + a X_{label,0} + (prolongation terms)."""
    from .grammar import format_ratfunc
    from .polyring import RatFunc
    from .relations import var_name
    v = var_name(label, 0)
    shallow = {}
    for e, c in Q.poly.terms.items():
        used = [(w, k) for w, k in zip(Q.poly.vars, e) if k]
        if not used:
            shallow["1"] = c
        elif used == [(v, 1)]:
            shallow[v] = c
        elif any(w.endswith(".0") for w, _ in used):
            return None
    if v not in shallow:
        return None
    b = shallow.get("1")
    if b is None:
        return "0"
    r = RatFunc(-b, shallow[v])
    low = next(c for c in r.den.coeffs if c != 0)
    if low < 0:
        r = RatFunc(-r.num, -r.den, _reduced=True)
    return format_ratfunc_ascending(r, point_name)


def _ascending(p, var):
    parts = []
    for k, c in enumerate(p.coeffs):
        if c == 0:
            continue
        body = "" if abs(c) == 1 else format_coefficient(abs(c))
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        term = (body + ("*" if body and mono else "") + mono) or "1"
        parts.append(("-" if c < 0 else "+", term))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, term in parts[1:]:
        out += sign + term
    return out, len(parts) > 1


def format_ratfunc_ascending(r, var):
    """Rational function in ``var`` with numerator and denominator in increasing powers."""
    num, num_sum = _ascending(r.num, var)
    if r.den.degree == 0 and r.den.coeffs[0] == 1:
        return num
    den, den_sum = _ascending(r.den, var)
    num = f"({num})" if num_sum else num
    den = f"({den})" if den_sum or r.den.degree == 0 else den
    return f"{num}/{den}"


def cmd_scan(args):
    from .relations import scan_degeneration_points
    rel = _workspace(args).relation(args.relation)
    hits = scan_degeneration_points(rel.relation, _fraction(args.radius))
    lines = [f"{len(hits)} candidate point(s) in 0 < |z| < {args.radius}"]
    lines += [f"  root of {h.factor} near {h.box.decimal(12)}" for h in hits]
    return lines, {"hits": [h.to_json() for h in hits]}


def _order_arg(text):
    if text.startswith("block:"):
        return ("block", int(text.split(":", 1)[1]))
    if text in ("lex", "grevlex"):
        return text
    raise UsageError(f"unknown monomial order {text!r}")


def _generators(args, variables):
    field = NumberField.from_json({"minpoly": args.field}) if args.field else None
    return [parse_multipoly(g, variables, field) for g in args.generators]


def cmd_groebner(args):
    from .relations import buchberger
    variables = _csv(args.vars)
    basis = buchberger(_generators(args, variables), variables, _order_arg(args.order))
    return ["basis:"] + [f"  {p}" for p in basis], {"variables": variables, "basis": [str(p) for p in basis]}


def cmd_badset(args):
    from .relations import elimination_bad_set
    variables = _csv(args.vars)
    res = elimination_bad_set(_generators(args, variables), variables, args.keep)
    lines = [f"bad set: roots of {res.bad_set}"] + [f"  eliminant: {p}" for p in res.eliminant]
    return lines, {"bad_set": str(res.bad_set), "basis": [str(p) for p in res.cleared],
                   "eliminant": [str(p) for p in res.eliminant]}


def cmd_descend(args):
    from .relations import descend_relation
    ws = _workspace(args)
    field = NumberField.from_json({"minpoly": args.field}) if args.field else None
    weights = [parse_expression(w, field) for w in args.weights.split(";")]
    funcs = [ws.function(n) for n in _csv(args.functions)]
    if len(weights) != len(funcs):
        raise UsageError("one weight per function is required")
    pt = ws.point(args.point)
    zero_set = [int(i) for i in _csv(args.zero_set)] if args.zero_set else []
    comp = descend_relation(weights, funcs, pt.value, zero_set, args.pivot, args.terms)
    return [f"rational relation: {[str(w) for w in comp]}"], {"weights": [str(w) for w in comp]}


def cmd_conjugate(args):
    from .numberfield import FieldAutomorphism
    from .relations import conjugate_object
    field = NumberField.from_json({"minpoly": args.field})
    tau = FieldAutomorphism(field, parse_scalar(args.image, field))
    x = parse_expression(args.expression, field)
    y = conjugate_object(x, tau)
    return [f"{x} -> {y}"], {"input": str(x), "image": str(y)}


def cmd_decompose(args):
    from .relations import decompose_function
    ws = _workspace(args)
    f = ws.function(args.name)
    values = []
    for item in args.value:
        pname, _, vtext = item.partition("=")
        if not vtext:
            raise UsageError("values are written POINT=EXPR")
        pt = ws.point(pname)
        values.append((pt.value, parse_scalar(vtext, pt.field)))
    dec = decompose_function(f, _fraction(args.radius), values, args.terms)
    ok = dec.check(f, args.terms)
    lines = [f"R1 = {dec.R1}", f"R2 = {dec.R2}", f"check mod z^{args.terms}: {'ok' if ok else 'FAILED'}"]
    g = dec.g
    result = {"R1": str(dec.R1), "R2": str(dec.R2), "steps": dec.steps, "check": ok, "note": dec.note}
    if g is not None and getattr(g, "annihilator", None) is not None:
        result["g"] = {"operator": g.annihilator.to_json(), "inhom": str(g.inhom)}
        lines.append(f"g: {g.inhom} + {g.annihilator} g = 0")
    return lines, result


def cmd_eval(args):
    from .evalnum import evaluate
    ws = _workspace(args)
    f = ws.function(args.name)
    pt = ws.point(args.point)
    rep = evaluate(f, pt.value, _fraction(args.width), args.depth)
    result = rep.to_json(pt.name)
    return [f"{args.name}({pt.name}) in {rep.ball.decimal(30)}", f"method: {rep.method}; bound: {rep.bound.describe()}"], result


def cmd_check_value(args):
    from .evalnum import check_algebraic_value
    ws = _workspace(args)
    f = ws.function(args.name)
    pt = ws.point(args.point)
    cand = parse_scalar(args.candidate, pt.field)
    verdict = check_algebraic_value(f, pt.value, cand, _fraction(args.width))
    return [f"{args.name}({pt.name}) vs {args.candidate}: {verdict}"], {"verdict": verdict, "point": pt.name}


def cmd_verify(args):
    from .relations import verify_relation
    rel = _workspace(args).relation(args.relation)
    res = verify_relation(rel.relation, rel.functions, args.terms)
    status = "pass" if res.passed else f"fail (first nonzero order {res.first_failure})"
    return [f"{rel.name} mod z^{args.terms}: {status}"], {"relation": rel.name, "passed": res.passed,
                                                           "truncation": res.truncation,
                                                           "first_failure": res.first_failure}


def cmd_corpus(args):
    from .corpus import KINDS
    ws = _workspace(args)
    if args.action == "validate":
        loaded = ws.validate_all()
        return [f"{k}: {len(v)} entries valid" for k, v in loaded.items()], {"directory": str(ws.directory), "valid": loaded}
    if args.action == "show":
        if not args.entry:
            raise UsageError("corpus show needs an entry name")
        for kind in KINDS:
            try:
                name = ws._resolve(kind, args.entry)
            except UnknownCorpusEntry:
                continue
            data = ws._read(kind, name)
            return [json.dumps(data, indent=2)], {"kind": kind, "entry": data}
        raise UnknownCorpusEntry(f"no corpus entry named {args.entry!r}")
    listing = {k: ws.names(k) for k in KINDS}
    return [f"{k}: {', '.join(v)}" for k, v in listing.items()], {"directory": str(ws.directory), "entries": listing}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a machine-readable report")
    common.add_argument("--corpus", default=None, help="corpus directory (default: RELFORGE_CORPUS or the packaged corpus)")

    p = argparse.ArgumentParser(prog="relforge", description="Exact operators and relations for Mahler functions and E-functions.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(handler=fn)
        return sp

    sp = add("series", cmd_series, "print the first coefficients of a corpus function")
    sp.add_argument("name")
    sp.add_argument("--terms", type=int, default=16)

    sp = add("guess", cmd_guess, "guess linear sigma relations (or a delta operator) within degree bounds")
    sp.add_argument("--functions", required=True, help="comma-separated corpus names")
    sp.add_argument("--order", type=int, default=2)
    sp.add_argument("--degree", type=int, default=4)
    sp.add_argument("--terms", type=int, default=256)
    sp.add_argument("--inhomogeneous", action="store_true", help="adjoin the constant function 1")

    sp = add("minimize", cmd_minimize, "least-order annihilator with an exclusion certificate")
    sp.add_argument("name")
    sp.add_argument("--degree", type=int, default=4)
    sp.add_argument("--max-order", type=int, default=4)
    sp.add_argument("--terms", type=int, default=None)

    sp = add("denominator", cmd_denominator, "Mahler denominator of a function")
    sp.add_argument("name")
    sp.add_argument("--order", type=int, default=None)
    sp.add_argument("--degree", type=int, default=None)
    sp.add_argument("--terms", type=int, default=None)

    sp = add("level", cmd_level, "annihilator whose constant coefficient avoids 0 < |z| < R")
    sp.add_argument("name")
    sp.add_argument("--radius", required=True)

    sp = add("regularize", cmd_regularize, "add a shifted copy to clear the leading coefficient from the disk")
    sp.add_argument("--operator")
    sp.add_argument("--function")
    sp.add_argument("--radius", required=True)

    sp = add("regular-point", cmd_regular_point, "decide whether a point is regular for an operator or system")
    sp.add_argument("--operator")
    sp.add_argument("--function", help="use the annihilator of this function")
    sp.add_argument("--system", help="use the companion system (with constant) of this function")
    sp.add_argument("--point", required=True)

    sp = add("iterate", cmd_iterate, "iterate the companion system of a function")
    sp.add_argument("name")
    sp.add_argument("--times", type=int, default=2)

    sp = add("relations", cmd_relations, "guess polynomial relations among prolongations")
    sp.add_argument("--functions", required=True, help="label=name pairs, e.g. f=bs,g=bsg")
    sp.add_argument("--depth", type=int, default=1)
    sp.add_argument("--total-degree", type=int, default=2)
    sp.add_argument("--degree", type=int, default=1)
    sp.add_argument("--terms", type=int, default=128)
    sp.add_argument("--homogeneous", action="store_true")

    sp = add("degenerate", cmd_degenerate, "specialize a relation at a point")
    sp.add_argument("--relation", required=True)
    sp.add_argument("--point", required=True)
    sp.add_argument("--width", default="1e-20")
    sp.add_argument("--banality", default=None, help="d,N bounds for the banality search")

    sp = add("scan", cmd_scan, "points of a disk where a relation may degenerate")
    sp.add_argument("--relation", required=True)
    sp.add_argument("--radius", required=True)

    for name, fn, help_text in (("groebner", cmd_groebner, "reduced Groebner basis over Q(z)"),
                                ("badset", cmd_badset, "points where evaluation and elimination disagree")):
        sp = add(name, fn, help_text)
        sp.add_argument("generators", nargs="+", help="polynomials in z and the variables")
        sp.add_argument("--vars", required=True, help="comma-separated, largest (eliminated) first")
        sp.add_argument("--field", default=None, help="minimal polynomial of t, e.g. x^2-5")
        if name == "groebner":
            sp.add_argument("--order", default="lex", help="lex, grevlex or block:k")
        else:
            sp.add_argument("--keep", type=int, default=1, help="number of trailing variables kept")

    sp = add("descend", cmd_descend, "rational relation from one with number-field coefficients")
    sp.add_argument("--functions", required=True)
    sp.add_argument("--weights", required=True, help="';'-separated coefficient polynomials")
    sp.add_argument("--field", default=None)
    sp.add_argument("--point", required=True)
    sp.add_argument("--zero-set", default="")
    sp.add_argument("--pivot", type=int, default=0)
    sp.add_argument("--terms", type=int, default=256)

    sp = add("conjugate", cmd_conjugate, "apply a field automorphism to an expression")
    sp.add_argument("expression")
    sp.add_argument("--field", required=True)
    sp.add_argument("--image", required=True, help="image of the generator t")

    sp = add("decompose", cmd_decompose, "split off supplied algebraic values: f = R1 + R2 g")
    sp.add_argument("name")
    sp.add_argument("--radius", required=True)
    sp.add_argument("--value", action="append", default=[], help="POINT=EXPR, repeatable")
    sp.add_argument("--terms", type=int, default=256)

    sp = add("eval", cmd_eval, "certified ball for f(alpha)")
    sp.add_argument("name")
    sp.add_argument("--point", required=True)
    sp.add_argument("--width", default="1e-30")
    sp.add_argument("--depth", type=int, default=None)

    sp = add("check-value", cmd_check_value, "test a candidate algebraic value")
    sp.add_argument("name")
    sp.add_argument("--point", required=True)
    sp.add_argument("--candidate", required=True)
    sp.add_argument("--width", default="1e-40")

    sp = add("verify", cmd_verify, "check a stored relation to a given order")
    sp.add_argument("--relation", required=True)
    sp.add_argument("--terms", type=int, default=256)

    sp = add("corpus", cmd_corpus, "list, show or validate corpus entries")
    sp.add_argument("action", nargs="?", default="list", choices=["list", "show", "validate"])
    sp.add_argument("entry", nargs="?")
    return p


def run_command(argv):
    """Run one command; returns (exit status, report dict)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 2
        return code, {"schema": REPORT_SCHEMA, "status": "usage" if code else "ok"}
    report = {"schema": REPORT_SCHEMA, "command": args.command}
    try:
        lines, result = args.handler(args)
    except (UsageError, ExpressionSyntaxError, UnknownCorpusEntry) as exc:
        report.update(status="usage", error={"name": type(exc).__name__, "message": str(exc)})
        _emit(args, report, [f"usage error: {exc}"], sys.stderr)
        return 2, report
    except RelforgeError as exc:
        report.update(status="error", error={"name": type(exc).__name__, "message": str(exc)})
        _emit(args, report, [f"{type(exc).__name__}: {exc}"], sys.stderr)
        return 1, report
    report.update(status="ok", result=result)
    _emit(args, report, lines, sys.stdout)
    return 0, report


def _emit(args, report, lines, stream):
    if args.json:
        print(json.dumps(report, indent=2, default=str))
    else:
        print("\n".join(lines), file=stream)


def main(argv=None):
    code, _ = run_command(sys.argv[1:] if argv is None else argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
