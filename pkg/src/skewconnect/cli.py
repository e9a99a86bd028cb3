"""Batch front end: parse system documents, run constructions and
verifications, emit byte-deterministic reports.

Commands: tensor, dual, hom, ext, sym, casorati, curvature, pcurvature,
solve, verify, hypergeometric, confluence, heine.  Input documents are
JSON (expressions are strings); reports are JSON with sorted keys or a
stable text rendering.  Exit codes: 0 success, 2 verification failure,
1 input error.  SKEWCONNECT_MAX_ORDER (default 64) caps truncation
orders.
"""

import argparse
import json
import os
import sys
from fractions import Fraction

from . import confluence as confl
from . import constructions as cons
from .connection import Action, ActionType, LinearSystem, companion_system, derivation_companion
from .curvature import integrability_defect, is_integrable, p_curvature
from .errors import CliError, SkewConnectError, UndefinedName
from .exactalg import Matrix, ScalarTower, TowerMode
from .expr import ExprContext, elaborate_operator, elaborate_scalar, parse_expression
from .sigma import Direction, DirectionKind, SigmaBase, XAction
from .solutions import fundamental_matrix
from .confluence import HypergeometricSpec, z_coefficients

MAX_ORDER_ENV = "SKEWCONNECT_MAX_ORDER"


def max_order():
    raw = os.environ.get(MAX_ORDER_ENV, "64")
    try:
        return int(raw)
    except ValueError:
        raise CliError(f"{MAX_ORDER_ENV} must be an integer, got {raw!r}")


def check_order(n, what="order"):
    cap = max_order()
    if n < 1:
        raise CliError(f"{what} must be >= 1")
    if n > cap:
        raise CliError(f"{what} {n} exceeds {MAX_ORDER_ENV} = {cap}")
    return n


# ---------------------------------------------------------------------------
# document loading
# ---------------------------------------------------------------------------


class Document:
    def __init__(self, tower, base, objects):
        self.tower = tower
        self.base = base
        self.objects = objects

    def get(self, name, kinds=None):
        if name not in self.objects:
            raise UndefinedName(f"object {name!r} is not defined in the document")
        obj = self.objects[name]
        if kinds and obj["kind"] not in kinds:
            raise CliError(f"object {name!r} is a {obj['kind']}, expected one of {sorted(kinds)}")
        return obj


def load_document(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as e:
        raise CliError(f"cannot read document: {e}")
    except json.JSONDecodeError as e:
        raise CliError(f"document is not valid JSON: {e}")
    return build_document(doc)


def build_document(doc):
    if not isinstance(doc, dict):
        raise CliError("document must be a JSON object")
    constants = doc.get("constants", {"mode": "rational"})
    mode = constants.get("mode", "rational")
    variables = doc.get("variables", [])
    if not variables:
        raise CliError("document needs at least one variable")
    names = [v["name"] for v in variables]
    try:
        mode = TowerMode(mode)
    except ValueError:
        raise CliError(f"unknown mode {constants.get('mode')!r}")
    if mode is TowerMode.PRIME_FIELD:
        tower = ScalarTower.prime_field(int(constants.get("p", 0)), names)
    elif mode is TowerMode.H_TRUNC:
        tower = ScalarTower.h_trunc(check_order(int(constants.get("N", 0)), "N"), names)
    else:
        tower = ScalarTower(mode, names)
    directions = []
    for v in variables:
        sigma = v.get("sigma", {"kind": "identity"})
        kind = DirectionKind(sigma.get("kind", "identity"))
        if kind is DirectionKind.IDENTITY:
            directions.append(Direction(v["name"], kind))
        else:
            param_src = sigma.get("parameter")
            if param_src is None:
                raise CliError(f"direction {v['name']!r} needs a parameter")
            param = scalar_in(tower, str(param_src))
            directions.append(Direction(v["name"], kind, param))
    base = SigmaBase(tower, directions)
    objects = {}
    for name, spec in doc.get("objects", {}).items():
        objects[name] = build_object(base, name, spec)
    return Document(tower, base, objects)


def scalar_in(tower, src):
    base = SigmaBase(tower, [])
    return elaborate_scalar(parse_expression(src), ExprContext(base))


def build_object(base, name, spec):
    if not isinstance(spec, dict):
        raise CliError(f"object {name!r} must be a JSON object")
    if "operator" in spec:
        direction = spec.get("direction")
        if direction is None:
            raise CliError(f"operator object {name!r} needs a direction")
        ctx = ExprContext(base, direction, spec.get("x_action"))
        op = elaborate_operator(parse_expression(spec["operator"]), ctx)
        return {"kind": "operator", "value": op, "direction": direction}
    if "matrixA" in spec or "matrixG" in spec:
        system = _system_from_actions(base, name, [spec])
        return {"kind": "system", "value": system}
    if "actions" in spec:
        system = _system_from_actions(base, name, spec["actions"])
        return {"kind": "system", "value": system}
    if "series" in spec:
        direction = spec.get("direction")
        if direction is None:
            raise CliError(f"series object {name!r} needs a direction")
        ctx = ExprContext(base, direction)
        coeffs = [elaborate_scalar(parse_expression(str(c)), ctx) for c in spec["series"]]
        return {"kind": "series", "value": coeffs, "direction": direction}
    raise CliError(f"object {name!r} has no operator/matrixA/matrixG/actions/series field")


def _system_from_actions(base, name, entries):
    t = base.tower
    actions = {}
    rank = None
    for entry in entries:
        direction = entry.get("direction")
        if direction is None:
            raise CliError(f"system object {name!r}: every action needs a direction")
        i = base.direction_index(direction)
        key = "matrixA" if "matrixA" in entry else "matrixG" if "matrixG" in entry else None
        if key is None:
            raise CliError(f"system object {name!r}: action needs matrixA or matrixG")
        raw = entry[key]
        ctx = ExprContext(base, direction)
        data = [[elaborate_scalar(parse_expression(str(x)), ctx) for x in row] for row in raw]
        m = Matrix(t, data)
        if not m.is_square():
            raise CliError(f"system object {name!r}: matrix must be square")
        if rank is None:
            rank = m.rows
        elif m.rows != rank:
            raise CliError(f"system object {name!r}: inconsistent matrix sizes")
        actions[i] = Action(
            ActionType.DIFFERENCE if key == "matrixA" else ActionType.DIFFERENTIAL, m
        )
    return LinearSystem(base, rank, actions)


def as_system(doc, name):
    obj = doc.get(name, {"system", "operator"})
    if obj["kind"] == "system":
        return obj["value"]
    op = obj["value"]
    if op.flavor is XAction.SIGMA_ONLY:
        return companion_system(op.monic())
    return derivation_companion(op)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def ser_matrix(m):
    return m.to_strings()


def ser_system(s):
    base = s.base
    out = {"rank": s.rank, "mode": base.tower.mode.value, "directions": []}
    for i in s.directions():
        action = s.actions[i]
        out["directions"].append(
            {
                "variable": base.directions[i].variable,
                "type": action.type.value,
                "matrix": ser_matrix(action.matrix),
            }
        )
    return out


def ser_scalar(tower, x):
    return tower.canonical_str(x)


def render_text(value, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for k in sorted(value):
            v = value[k]
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}{k}:")
                lines.extend(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(value, list):
        simple = all(not isinstance(v, (dict, list)) for v in value)
        if simple:
            lines.append(pad + "[" + ", ".join(str(v) for v in value) + "]")
        else:
            for v in value:
                lines.extend(render_text(v, indent))
                lines.append(pad + "-")
            if lines and lines[-1] == pad + "-":
                lines.pop()
    else:
        lines.append(pad + str(value))
    return lines if indent else "\n".join(lines) + "\n"


def emit(report, args):
    if args.format == "json":
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    else:
        text = render_text(report)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# command handlers
# ---------------------------------------------------------------------------


def cmd_tensor(args):
    doc = load_document(args.input)
    s = cons.tensor(as_system(doc, args.left), as_system(doc, args.right))
    return {"result": {"system": ser_system(s)}}


def cmd_dual(args):
    doc = load_document(args.input)
    s = cons.dual(as_system(doc, args.object))
    return {"result": {"system": ser_system(s)}}


def cmd_hom(args):
    doc = load_document(args.input)
    s = cons.internal_hom(as_system(doc, args.left), as_system(doc, args.right))
    return {"result": {"system": ser_system(s)}}


def cmd_ext(args):
    doc = load_document(args.input)
    s = cons.ext_power(as_system(doc, args.object), args.degree)
    return {"result": {"system": ser_system(s)}}


def cmd_sym(args):
    doc = load_document(args.input)
    s = cons.sym_power(as_system(doc, args.object), args.degree)
    return {"result": {"system": ser_system(s)}}


def cmd_casorati(args):
    doc = load_document(args.input)
    s = as_system(doc, args.object)
    rate = cons.casorati_rate(s, args.direction)
    return {"result": {"rate": ser_scalar(doc.tower, rate)}}


def cmd_curvature(args):
    doc = load_document(args.input)
    s = as_system(doc, args.object)
    keys = s.directions()
    pairs = []
    integrable = True
    for a in range(len(keys)):
        for b in range(a + 1, len(keys)):
            d = integrability_defect(s, keys[a], keys[b])
            zero = d.is_zero()
            integrable = integrable and zero
            pairs.append(
                {
                    "directions": [
                        s.base.directions[keys[a]].variable,
                        s.base.directions[keys[b]].variable,
                    ],
                    "defect": ser_matrix(d),
                    "zero": zero,
                }
            )
    verdict = "INTEGRABLE" if integrable else "NOT_INTEGRABLE"
    if len(keys) < 2:
        verdict = "INTEGRABLE"
    return {"result": {"verdict": verdict, "pairs": pairs, "integrable": is_integrable(s)}}


def cmd_pcurvature(args):
    doc = load_document(args.input)
    s = as_system(doc, args.object)
    psi = p_curvature(s, args.direction)
    return {"result": {"matrix": ser_matrix(psi)}}


def parse_point(doc, system, raw):
    keys = system.directions()
    vars_ = [system.base.directions[i].variable for i in keys]
    point = {}
    parts = [p for p in raw.split(",") if p]
    for k, part in enumerate(parts):
        if "=" in part:
            name, val = part.split("=", 1)
            point[name.strip()] = Fraction(val)
        else:
            if k >= len(vars_):
                raise CliError("more point coordinates than acting directions")
            point[vars_[k]] = Fraction(part)
    missing = [v for v in vars_ if v not in point]
    if missing:
        raise CliError(f"missing point coordinates for {missing}")
    return point


def cmd_solve(args):
    doc = load_document(args.input)
    s = as_system(doc, args.object)
    order = check_order(args.order)
    point = parse_point(doc, s, args.at)
    fm = fundamental_matrix(s, point, order)
    return {"result": {"fundamental_matrix": fm.to_json_dict()}}


def cmd_verify(args):
    doc = load_document(args.input)
    series_obj = doc.get(args.series, {"series"})
    op_obj = doc.get(args.operator, {"operator"})
    op = op_obj["value"]
    order = check_order(args.order)
    t = doc.tower
    var = doc.base.directions[doc.base.direction_index(series_obj["direction"])].variable
    z = t.var(var)
    poly = t.zero()
    for n, c in enumerate(series_obj["value"]):
        poly = poly + c * z**n
    res = op.apply(poly)
    coeffs = z_coefficients(t, res, order)
    first = None
    for k, c in enumerate(coeffs):
        if not t.is_zero(c):
            first = {"index": k, "value": ser_scalar(t, c)}
            break
    ok = first is None
    return {
        "status": "ok" if ok else "fail",
        "result": {"ok": ok, "checked_through": order, "first_failure": first},
    }


def hyperg_spec(args):
    alphas = [Fraction(a) for a in args.alphas.split(",") if a]
    betas = [Fraction(b) for b in args.betas.split(",") if b]
    trunc = args.trunc
    if trunc is not None:
        trunc = check_order(trunc, "trunc")
    return HypergeometricSpec(tuple(alphas), tuple(betas), args.mode, trunc)


def cmd_hypergeometric(args):
    spec = hyperg_spec(args)
    qhg = confl.build_q_hypergeometric(spec)
    return {
        "result": {
            "order": spec.order,
            "sigma_operator": str(qhg.sigma_op),
            "delta_operator": str(qhg.delta_op),
            "sigma_companion": ser_system(qhg.sigma_companion),
            "system": ser_system(qhg.system),
            "casorati_rate": ser_scalar(qhg.tower, cons.casorati_rate(qhg.sigma_companion)),
        }
    }


def cmd_confluence(args):
    if args.object:
        if not args.input:
            raise CliError("--object needs --input")
        doc = load_document(args.input)
        s = as_system(doc, args.object)
    else:
        if not (args.alphas and args.betas):
            raise CliError("confluence needs --object or --alphas/--betas")
        spec = hyperg_spec(args)
        s = confl.build_q_hypergeometric(spec).system
    limit = confl.confluence_specialize(s)
    return {"result": {"system": ser_system(limit)}}


def cmd_heine(args):
    spec = hyperg_spec(args)
    order = check_order(args.order)
    qhg = confl.build_q_hypergeometric(spec)
    series = confl.heine_series(spec, order, qhg=qhg)
    through = max(order - spec.order, 0)
    res = series.residual_z_coefficients(qhg.sigma_op, through)
    t = qhg.tower
    first = None
    for k, c in enumerate(res):
        if not t.is_zero(c):
            first = {"index": k, "value": ser_scalar(t, c)}
            break
    ok = first is None
    return {
        "status": "ok" if ok else "fail",
        "result": {
            "coefficients": [ser_scalar(t, c) for c in series.coefficients],
            "residual_ok": ok,
            "residual_checked_through": through,
            "first_failure": first,
        },
    }


def cmd_triviality(args):
    spec = hyperg_spec(args)
    rep = confl.casorati_trivial_predicate(spec)
    t = spec.tower()
    return {
        "result": {
            "rate": ser_scalar(t, rep.rate),
            "rate_at_zero": ser_scalar(t, rep.rate_at_zero),
            "rate_at_infinity": ser_scalar(t, rep.rate_at_infinity),
            "exponent_zero": str(rep.exponent_zero),
            "exponent_infinity": str(rep.exponent_infinity),
            "trivial": rep.trivial,
        }
    }


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def make_parser():
    parser = argparse.ArgumentParser(prog="skewconnect", description=__doc__)
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("--input", required=True, help="JSON system document")
        p.add_argument("--output", help="write the report here instead of stdout")
        p.add_argument("--format", choices=["json", "text"], default="json")

    p = sub.add_parser("tensor", help="tensor product of two systems")
    common(p)
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.set_defaults(fn=cmd_tensor)

    p = sub.add_parser("dual", help="dual system")
    common(p)
    p.add_argument("--object", required=True)
    p.set_defaults(fn=cmd_dual)

    p = sub.add_parser("hom", help="internal hom of two systems")
    common(p)
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.set_defaults(fn=cmd_hom)

    for verb, fn in (("ext", cmd_ext), ("sym", cmd_sym)):
        p = sub.add_parser(verb, help=f"{verb} power of a system")
        common(p)
        p.add_argument("--object", required=True)
        p.add_argument("--degree", type=int, required=True)
        p.set_defaults(fn=fn)

    p = sub.add_parser("casorati", help="first-order rate of the top exterior power")
    common(p)
    p.add_argument("--object", required=True)
    p.add_argument("--direction")
    p.set_defaults(fn=cmd_casorati)

    p = sub.add_parser("curvature", help="pairwise integrability defects")
    common(p)
    p.add_argument("--object", required=True)
    p.set_defaults(fn=cmd_curvature)

    p = sub.add_parser("pcurvature", help="p-curvature matrix over a prime field")
    common(p)
    p.add_argument("--object", required=True)
    p.add_argument("--direction", required=True)
    p.set_defaults(fn=cmd_pcurvature)

    p = sub.add_parser("solve", help="truncated fundamental matrix")
    common(p)
    p.add_argument("--object", required=True)
    p.add_argument("--at", required=True, help="base point, e.g. 0 or z1=0,z2=1/2")
    p.add_argument("--order", type=int, required=True)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("verify", help="check a truncated series against an operator")
    common(p)
    p.add_argument("--series", required=True)
    p.add_argument("--operator", required=True)
    p.add_argument("--order", type=int, required=True)
    p.set_defaults(fn=cmd_verify)

    def hyper_args(p, with_mode=True):
        p.add_argument("--alphas", required=True, help="comma-separated rationals")
        p.add_argument("--betas", required=True, help="comma-separated rationals (last = 1)")
        if with_mode:
            p.add_argument("--mode", choices=["exact_q", "h_trunc"], default="exact_q")
            p.add_argument("--trunc", type=int, help="truncation order for h_trunc mode")

    p = sub.add_parser("hypergeometric", help="build the basic hypergeometric family")
    common(p, needs_input=False)
    hyper_args(p)
    p.set_defaults(fn=cmd_hypergeometric)

    p = sub.add_parser("confluence", help="h = 0 specialization of a truncated system")
    common(p, needs_input=False)
    p.add_argument("--input")
    p.add_argument("--object")
    p.add_argument("--alphas")
    p.add_argument("--betas")
    p.add_argument("--mode", choices=["exact_q", "h_trunc"], default="h_trunc")
    p.add_argument("--trunc", type=int)
    p.set_defaults(fn=cmd_confluence)

    p = sub.add_parser("heine", help="basic hypergeometric series with residual check")
    common(p, needs_input=False)
    hyper_args(p)
    p.add_argument("--order", type=int, required=True, help="series order in z")
    p.set_defaults(fn=cmd_heine)

    p = sub.add_parser("triviality", help="rank-one Casorati triviality predicate")
    common(p, needs_input=False)
    hyper_args(p)
    p.set_defaults(fn=cmd_triviality)

    return parser


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        code = e.code or 0
        # argparse usage problems are input errors (exit 1), not verification
        # failures; --help keeps its zero exit
        return 1 if code not in (0, "0") else 0
    report = {"command": ["skewconnect"] + argv, "status": "ok"}
    try:
        out = args.fn(args)
    except SkewConnectError as e:
        report["status"] = "error"
        report["error"] = e.to_dict()
        emit(report, args)
        return 1
    except (ValueError, ZeroDivisionError, KeyError) as e:
        report["status"] = "error"
        report["error"] = {"code": "INPUT_ERROR", "module": "cli", "message": str(e)}
        emit(report, args)
        return 1
    except AssertionError as e:
        report["status"] = "error"
        report["error"] = {"code": "INTERNAL_ASSERTION", "module": "cli", "message": str(e)}
        emit(report, args)
        return 1
    report.update(out)
    emit(report, args)
    return 2 if report.get("status") == "fail" else 0


def console_main():
    sys.exit(main())


if __name__ == "__main__":
    console_main()
