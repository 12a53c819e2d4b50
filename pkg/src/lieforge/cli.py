"""Command-line surface with deterministic JSON/CSV outputs.

Exit codes: 0 success, 1 usage error, 2 verification failure (a nonzero
residual where zero was expected, or a numeric residual above tolerance).
Outputs are byte-identical for identical configurations; wall-clock timings
are only attached when --timings is passed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import catalog, reduce as red
from .expr_core import Expr, sym
from .hierarchy import (REAL_JET, audit_member, catalogue_member, complex_split,
                        hierarchy_member)
from .liealg import algebra_signature, jacobi_check, structure_constants
from .parser import expr_text, parse_expr
from .symmetry import (UnknownFunctionConstraint, VectorField, ansatz_dictionary,
                       determining_system, discover_symmetries, field_text,
                       verify_generator)

SCHEMA = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _field_json(X: VectorField) -> dict:
    out = {}
    for kind, var, coeff in X.coeff_vector_atoms():
        if not coeff.is_zero():
            out[f"{kind}_{var}"] = expr_text(coeff)
    if X.name:
        out["name"] = X.name
    return out


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_member(args) -> int:
    rhs = hierarchy_member(args.n)
    if args.split:
        v_rhs, w_rhs = complex_split(rhs)
        _emit({"schema": SCHEMA, "n": args.n,
               "v_t": expr_text(v_rhs), "w_t": expr_text(w_rhs)})
    else:
        _emit({"schema": SCHEMA, "n": args.n, "u_t": expr_text(rhs)})
    return 0


def cmd_audit(args) -> int:
    rep = audit_member(args.k)
    _emit({"schema": SCHEMA, "member": args.k, "match": rep.match,
           "delta": rep.itemized()})
    return 0


_MEMBER_DICTIONARIES = {1: (1, 0, 0), 2: (2, 0, 0), 3: (1, 2, 0), 4: (2, 2, 1)}


def cmd_symmetries_find(args) -> int:
    S = catalogue_member(args.member)
    d_def, m_def, k_def = _MEMBER_DICTIONARIES[args.member]
    degree = args.degree if args.degree is not None else d_def
    trig = args.trig if args.trig is not None else m_def
    expw = args.expw if args.expw is not None else k_def
    import time
    t0 = time.time()
    basis = ansatz_dictionary(REAL_JET, degree, trig, expw)
    det = determining_system(S, basis)
    fields = discover_symmetries(S, basis, det)
    out = {
        "schema": SCHEMA,
        "member": args.member,
        "ansatz": {"degree": degree, "trig": trig, "expw": expw,
                   "unknowns": det.n_unknowns, "rows": len(det.rows)},
        "dimension": len(fields),
        "basis": [field_text(F) for F in fields],
    }
    if args.timings:
        out["timings"] = {"seconds": round(time.time() - t0, 3)}
    _emit(out)
    return 0


def _parse_field_file(path: str) -> VectorField:
    xi: dict[str, Expr] = {}
    eta: dict[str, Expr] = {}
    unknowns = []
    functions: dict[str, tuple[str, ...]] = {}
    lines = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if line:
                lines.append(line)
    for line in lines:
        if line.startswith("unknown "):
            head, rule = line[len("unknown "):].split(":", 1)
            name, argpart = head.split("(", 1)
            name = name.strip()
            fargs = tuple(a.strip() for a in argpart.rstrip(") ").split(","))
            functions[name] = fargs
    ctx = REAL_JET.with_functions(functions) if functions else \
        REAL_JET.with_constants(())
    ctx = ctx.with_constants(("c",))
    for line in lines:
        if line.startswith("unknown "):
            head, rule = line[len("unknown "):].split(":", 1)
            name = head.split("(", 1)[0].strip()
            lhs, rhs = rule.split("=", 1)
            lhs = lhs.strip()
            order = len(lhs.split("_", 1)[1]) if "_" in lhs else 1
            unknowns.append(UnknownFunctionConstraint(
                name, functions[name], order, parse_expr(rhs.strip(), ctx)))
            continue
        lhs, rhs = line.split("=", 1)
        lhs = lhs.strip()
        e = parse_expr(rhs.strip(), ctx)
        if lhs.startswith("xi_"):
            xi[lhs[3:]] = e
        elif lhs.startswith("eta_"):
            eta[lhs[4:]] = e
        else:
            raise ValueError(f"unrecognised slot {lhs!r}")
    return VectorField(ctx, xi, eta, tuple(unknowns))


def cmd_symmetries_verify(args) -> int:
    S = catalogue_member(args.member)
    X = _parse_field_file(args.field)
    rep = verify_generator(S, X)
    _emit({"schema": SCHEMA, "member": args.member, "status": rep.status,
           "remainder": rep.remainders()})
    return 0 if rep.zero else 2


def _named_basis(member: int, reduced: bool):
    if reduced:
        fams = {2: catalog.fields_reduced2, 3: catalog.fields_reduced3}
        if member not in fams:
            raise ValueError("reduced bracket tables exist for members 2 and 3")
        return fams[member]()
    fams = {2: catalog.fields_member2, 3: catalog.fields_member3,
            4: catalog.fields_member4}
    if member not in fams:
        raise ValueError("bracket tables exist for members 2, 3, 4")
    fields = fams[member]()
    if member == 3:
        # printed G2b is not a symmetry; the scaling field is
        fields = [f if f.name != "G2b" else catalog.fields_member3_scaling()
                  for f in fields]
    return fields


def cmd_brackets(args) -> int:
    basis = _named_basis(args.member, args.reduced)
    table = structure_constants(basis)
    out = {
        "schema": SCHEMA,
        "member": args.member,
        "reduced": bool(args.reduced),
        "basis": [f"{F.name}: {field_text(F)}" for F in basis],
        "table": [f"[{basis[i].name},{basis[j].name}] = {txt}"
                  for i, j, txt in table.nonzero_entries()],
        "closed": table.closed,
    }
    if table.closed:
        out["jacobi"] = jacobi_check(table)
    else:
        # brackets of symmetries are again symmetries, but the catalogued
        # basis need not span them; report the escaping fields
        out["jacobi"] = None
        out["non_closing"] = [
            f"[{basis[i].name},{basis[j].name}] leaves the span: {field_text(Z)}"
            for (i, j), Z in sorted(table.non_closing.items())]
    if not args.reduced and args.member in (2, 3):
        printed = catalog.printed_table_member2() if args.member == 2 \
            else catalog.printed_table_member3()
        out["printed_table_disagreements"] = _printed_disagreements(table, printed)
    out["signature"] = _signature_json(algebra_signature(table)) \
        if table.closed else None
    _emit(out)
    return 0


def _printed_disagreements(table, printed_entries) -> list[str]:
    names = {F.name: k for k, F in enumerate(table.basis)}
    out = []
    for a, b, combo in printed_entries:
        i, j = names[a], names[b]
        computed = table.constants[(i, j)] if (i, j) in table.constants else \
            [-q for q in table.constants[(j, i)]]
        claimed = [Expr.rational(combo.get(F.name, Fraction(0)))
                   for F in table.basis]
        if any(not (x - y).is_zero() for x, y in zip(computed, claimed)):
            comp_txt = _combo_text_local(computed, table.basis)
            out.append(f"[{a},{b}]: printed {_combo_dict_text(combo)}, "
                       f"computed {comp_txt}")
    return out


def _combo_dict_text(combo: dict) -> str:
    parts = []
    for name, q in combo.items():
        if q == 1:
            parts.append(name)
        else:
            parts.append(f"({q})*{name}")
    return " + ".join(parts) if parts else "0"


def _combo_text_local(vec, basis) -> str:
    from .liealg import _combo_text
    return _combo_text(vec, basis)


def _signature_json(sig) -> dict:
    return {
        "dimension": sig.dimension,
        "derived_series": sig.derived_series,
        "lower_central_series": sig.lower_central_series,
        "center_dim": sig.center_dim,
        "abelian": sig.abelian,
        "nilpotent": sig.nilpotent,
        "solvable": sig.solvable,
        "abelian_complement_dim": sig.abelian_complement_dim,
    }


def cmd_classify(args) -> int:
    basis = _named_basis(args.member, args.reduced)
    table = structure_constants(basis)
    out = {"schema": SCHEMA, "member": args.member, "reduced": bool(args.reduced),
           "closed": table.closed}
    out["jacobi"] = jacobi_check(table) if table.closed else None
    out["signature"] = _signature_json(algebra_signature(table)) \
        if table.closed else None
    _emit(out)
    return 0 if table.closed else 2


def cmd_reduce(args) -> int:
    c = _c_arg(args.c)
    S = red.reduced_system(args.member, c)
    if args.order_reduce:
        S = red.order_reduce(S)
    _emit({"schema": SCHEMA, "member": args.member,
           "c": expr_text(c) if isinstance(c, Expr) else str(c),
           "order_reduced": bool(args.order_reduce),
           "equations": [expr_text(e) + " = 0" for e in S.equations_zero()]})
    return 0


def _c_arg(text: str):
    if text == "c":
        return sym("c").as_expr()
    return Expr.rational(Fraction(text))


_SYSTEMS = {
    "3.2": lambda c: red.reduced_system(2, c),
    "3.3": red.system_33,
    "3.20": lambda c: red.reduced_system(3, c),
    "3.22": red.system_322,
    "3.22-printed": red.system_322_printed,
    "3.22-F": red.f_branch_322,
    "3.22-F-printed": red.f_branch_322_printed,
    "4.3": lambda c: red.reduced_system(4, c),
}


def _solution(name: str, args) -> red.SolutionCandidate:
    if name == "tan":
        return red.tan_solution()
    if name == "s11":
        return red.s11_solution()
    if name == "rational-trig":
        return red.rational_trig_solution()
    if name == "rational-trig-printed":
        return red.rational_trig_solution(printed=True)
    if name == "sn":
        return red.sn_solution(args.k, printed_system="printed" in args.system)
    if name == "linear4":
        return red.linear_solution_member4()
    raise ValueError(f"unknown solution {name!r}")


def cmd_verify_solution(args) -> int:
    mode = args.mode
    c = float(Fraction(args.c)) if args.c != "c" else None
    # symbolic verification holds for symbolic c; numeric mode specialises
    S = _SYSTEMS[args.system]("c" if (c is None or mode == "symbolic")
                              else Fraction(args.c))
    cand = _solution(args.solution, args)
    params = dict(cand.params)
    if c is not None:
        params["c"] = c
    if args.solution == "sn":
        kk = args.k
        params["c"] = -(1 + kk * kk) if "printed" in args.system else (1 + kk * kk)
        S = _SYSTEMS[args.system](Fraction(params["c"]).limit_denominator(10 ** 9))
    rep = red.verify_solution(S, cand, mode=mode,
                              param_values=params if mode == "numeric" else None)
    out = {"schema": SCHEMA, "system": S.label, "solution": cand.name,
           "mode": mode, "status": rep.statuses}
    if rep.max_residual is not None:
        out["max_residual"] = rep.max_residual
        out["samples"] = rep.samples
    if rep.notes:
        out["notes"] = rep.notes
    _emit(out)
    ok = rep.zero if mode == "symbolic" else (rep.max_residual or 0) < args.tol
    return 0 if ok else 2


def cmd_integrate(args) -> int:
    lo, hi = (float(x) for x in args.range.split(":"))
    c = float(Fraction(args.c))
    S = _SYSTEMS[args.system](Fraction(args.c))
    if args.init_from == "tan":
        cand = red.tan_solution()
        import math
        F0 = 0.5 * c
        G0 = -0.5 * c * math.tan(0.5 * c * (lo - args.s0))
        state0 = {"F": F0, "G": G0}
    else:
        raise ValueError(f"unknown init {args.init_from!r}")
    traj = red.rk4_from_system(S, {}, state0, (lo, hi), args.h)
    rows = [(s, traj.values["F"][i], traj.values["G"][i])
            for i, s in enumerate(traj.grid)]
    if args.csv:
        red.emit_series_csv(rows, args.csv)
    _emit({"schema": SCHEMA, "system": S.label, "points": len(rows),
           "h": args.h, "csv": args.csv or None})
    return 0


def cmd_fig1(args) -> int:
    c = float(Fraction(args.c))
    f1_values = [float(Fraction(x)) for x in args.F1.split(",")]
    reports = []
    for f1 in f1_values:
        rows = red.fig1_rows(c, f1, n=args.n)
        path = args.csv
        if path and len(f1_values) > 1:
            stem, dot, ext = path.rpartition(".")
            path = f"{stem or ext}_F1_{f1:g}.{ext}" if dot else f"{path}_F1_{f1:g}"
        if path:
            red.emit_series_csv(rows, path)
        feats = red.fig1_features(c, f1)
        reports.append({"F1": f1, "csv": path or None,
                        "periodicity_error": feats["periodicity_error"],
                        "dFre_sign_changes_per_period":
                            feats["dFre_sign_changes_per_period"]})
    _emit({"schema": SCHEMA, "c": c, "series": reports})
    return 0


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------

def build_parser() -> _Parser:
    p = _Parser(prog="lieforge", description=(
        "Symbolic point-symmetry engine and travelling-wave reduction toolkit "
        "for the complex Burgers-type hierarchy: generate members, discover "
        "and verify symmetries, compute bracket tables, reduce to wave-profile "
        "systems, and check closed-form solutions."))
    sub = p.add_subparsers(dest="cmd", required=True)

    m = sub.add_parser("member", help="generate hierarchy member n (complex rhs)")
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--split", action="store_true",
                   help="print the real/imaginary system")
    m.set_defaults(fn=cmd_member)

    a = sub.add_parser("audit", help="compare generated member against the "
                                     "built-in catalogue")
    a.add_argument("--k", type=int, required=True)
    a.set_defaults(fn=cmd_audit)

    s = sub.add_parser("symmetries", help="discover or verify point symmetries")
    ssub = s.add_subparsers(dest="subcmd", required=True)
    f = ssub.add_parser("find", help="ansatz-based discovery (exact nullspace)")
    f.add_argument("--member", type=int, required=True, choices=(1, 2, 3, 4))
    f.add_argument("--degree", type=int, default=None)
    f.add_argument("--trig", type=int, default=None)
    f.add_argument("--expw", type=int, default=None)
    f.add_argument("--timings", action="store_true")
    f.set_defaults(fn=cmd_symmetries_find)
    v = ssub.add_parser("verify", help="verify a generator from a field file")
    v.add_argument("--member", type=int, required=True, choices=(1, 2, 3, 4))
    v.add_argument("--field", required=True, help="file with xi_*/eta_* lines")
    v.set_defaults(fn=cmd_symmetries_verify)

    b = sub.add_parser("brackets", help="bracket table, Jacobi check, signature")
    b.add_argument("--member", type=int, required=True, choices=(2, 3, 4))
    b.add_argument("--reduced", action="store_true",
                   help="use the wave-profile algebra of the reduced system")
    b.set_defaults(fn=cmd_brackets)

    cl = sub.add_parser("classify", help="structural signature of the algebra")
    cl.add_argument("--member", type=int, required=True, choices=(2, 3, 4))
    cl.add_argument("--reduced", action="store_true")
    cl.set_defaults(fn=cmd_classify)

    r = sub.add_parser("reduce", help="travelling-wave reduction")
    r.add_argument("--member", type=int, required=True, choices=(1, 2, 3, 4))
    r.add_argument("--c", default="c", help="wave speed (rational or 'c')")
    r.add_argument("--order-reduce", action="store_true")
    r.set_defaults(fn=cmd_reduce)

    vs = sub.add_parser("verify-solution", help="check a closed form against a "
                                                "reduced system")
    vs.add_argument("--system", required=True, choices=sorted(_SYSTEMS))
    vs.add_argument("--solution", required=True)
    vs.add_argument("--c", default="c")
    vs.add_argument("--mode", choices=("symbolic", "numeric"), default="numeric")
    vs.add_argument("--k", type=float, default=0.9, help="elliptic modulus")
    vs.add_argument("--tol", type=float, default=1e-9)
    vs.set_defaults(fn=cmd_verify_solution)

    it = sub.add_parser("integrate", help="RK4 integration of a reduced system")
    it.add_argument("--system", required=True, choices=sorted(_SYSTEMS))
    it.add_argument("--c", required=True)
    it.add_argument("--from", dest="init_from", required=True)
    it.add_argument("--s0", type=float, default=0.0)
    it.add_argument("--h", type=float, default=1e-3)
    it.add_argument("--range", default="0:2")
    it.add_argument("--csv", default=None)
    it.set_defaults(fn=cmd_integrate)

    fg = sub.add_parser("fig1", help="wave-profile series CSV and features")
    fg.add_argument("--c", default="1")
    fg.add_argument("--F1", default="0,1,2")
    fg.add_argument("--n", type=int, default=1000)
    fg.add_argument("--csv", default=None)
    fg.set_defaults(fn=cmd_fig1)
    return p


def main(argv=None) -> int:
    seed = os.environ.get("LIEFORGE_SEED")
    if seed is not None:
        import random
        random.seed(int(seed))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    except (ValueError, KeyError, OSError) as exc:
        sys.stderr.write(f"lieforge: error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
