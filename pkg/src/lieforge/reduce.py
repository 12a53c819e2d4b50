"""Similarity reduction along translation generators, autonomous order
reduction, elimination to the second-order wave-profile equation, closed-form
solution verification (exact and sampled), solution lifting back to the PDE,
and CSV emission for wave-profile series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .expr_core import (
    DomainError, Expr, I, Jet, PoleError, Sym, atoms_of, collect_terms, cos_e,
    derive, eval_numeric, exp_e, jet, recip_e, sin_e, sqrt_e, substitute, sym,
    tan_e,
)
from .numerics import Trajectory, integrate_rk4, jacobi_sn
from .parser import expr_text
from .symmetry import VectorField
from .systems import JetSpec, ODESystem, PDESystem

__all__ = [
    "SimilarityMap", "PivotDegenerateError", "invariants_of_translation",
    "travelling_wave_reduce", "order_reduce", "reduced_system", "system_33",
    "system_322", "system_322_printed", "f_branch_322", "f_branch_322_printed",
    "eliminate_to_second_order", "printed_second_order", "computed_second_order",
    "equal_up_to_factor",
    "SolutionCandidate", "VerifyReport", "verify_solution", "tan_solution",
    "tan_antiderivatives", "s11_solution", "rational_trig_solution", "sn_solution",
    "linear_solution_member4", "reconstruct_G", "rk4_from_system",
    "lift_and_check", "emit_series_csv", "fig1_rows", "fig1_features",
    "fd_weights",
]

ODE_JET = JetSpec(("s",), ("f", "g"), constants=("c",))
ODE_JET_FG = JetSpec(("s",), ("F", "G"), constants=("c",))
ODE_JET_F = JetSpec(("s",), ("F",), constants=("c",))


class PivotDegenerateError(DomainError):
    """Division pivot vanished identically (e.g. 2F - c on the F = c/2 branch)."""


# ---------------------------------------------------------------------------
# similarity maps and travelling-wave reduction
# ---------------------------------------------------------------------------

@dataclass
class SimilarityMap:
    """Invariants of a constant-coefficient generator xi1 d_t + xi2 d_x +
    eta^A d_A: travelling variable s = x - c t with c = xi2/xi1, plus the
    drift u^A = f^A(s) + (eta^A/xi1) t."""

    speed: Expr
    drift: dict[str, Expr]
    steady: bool = False  # xi1 == 0: s = x is absent, s = t instead

    def describe(self) -> str:
        c = expr_text(self.speed)
        parts = [f"s = x - ({c})*t" if not self.steady else "s = x"]
        for dep, k in self.drift.items():
            if not k.is_zero():
                parts.append(f"{dep} = {dep}(s) + ({expr_text(k)})*t")
        return ", ".join(parts)


def invariants_of_translation(X: VectorField) -> SimilarityMap:
    """Zero-order invariants of a translation generator; rejects non-constant
    coefficients (general characteristics are out of scope)."""
    for _, _, coeff in X.coeff_vector_atoms():
        for a in atoms_of(coeff):
            if isinstance(a, Jet) or (isinstance(a, Sym) and
                                      a.name in X.jet.independents):
                raise DomainError("translation invariants need constant coefficients")
    t_var, x_var = X.jet.independents
    xi1 = X.xi_of(t_var)
    xi2 = X.xi_of(x_var)
    if xi1.is_zero() and xi2.is_zero():
        raise DomainError("vanishing translation part")
    if xi1.is_zero():
        return SimilarityMap(speed=Expr.zero(), drift={}, steady=True)
    inv1 = recip_e(xi1) if not xi1.is_rational() else \
        Expr.rational(1 / xi1.as_rational())
    speed = xi2 * inv1
    drift = {dep: X.eta_of(dep) * inv1 for dep in X.jet.dependents
             if not X.eta_of(dep).is_zero()}
    return SimilarityMap(speed=speed, drift=drift)


_DEP_MAP = {"v": "f", "w": "g"}


def travelling_wave_reduce(S: PDESystem, c, drift: dict[str, Expr] | None = None,
                           jet_out: JetSpec = ODE_JET) -> ODESystem:
    """Substitute v(t,x) = f(s) (+ drift t), w(t,x) = g(s), s = x - c t and
    solve the reduced equations for their highest derivatives."""
    c = c if isinstance(c, Expr) else Expr.rational(c)
    drift = drift or {}
    svar = jet_out.independents[0]
    bindings = {}
    for phi in S.rhs.values():
        for a in atoms_of(phi):
            if isinstance(a, Jet):
                bindings.setdefault(a, None)
    t_var, x_var = S.jet.independents
    for dep in S.jet.dependents:
        bindings.setdefault(jet(dep, (t_var,)), None)
    for a in list(bindings):
        p = a.idx.count(t_var)
        q = a.idx.count(x_var)
        new_dep = _DEP_MAP.get(a.dep, a.dep)
        val = (-c) ** p * jet(new_dep, (svar,) * (p + q)).as_expr()
        if p == 1 and q == 0 and a.dep in drift:
            val = val + drift[a.dep]
        bindings[a] = val

    equations = []
    for dep in S.jet.dependents:
        phi_sub = substitute(S.rhs[dep], bindings)
        lhs_sub = bindings[jet(dep, (t_var,))]
        E = phi_sub - lhs_sub
        for a in atoms_of(E):
            if isinstance(a, Sym) and a.name in (t_var, x_var):
                raise DomainError("reduction left explicit (t, x) dependence")
        equations.append(_contract_common_jet(E))
    return _solve_leads(equations, jet_out, label=f"TW reduction of {S.label}",
                        parameters=_params_of(c))


def _params_of(c: Expr) -> tuple[str, ...]:
    return tuple(sorted(a.name for a in atoms_of(c) if isinstance(a, Sym)))


def _contract_common_jet(E: Expr) -> Expr:
    """If every term shares one jet monomial, the equation contracts to that
    monomial (a nonzero constant multiplier is dropped)."""
    if E.is_zero():
        return E
    jet_parts = set()
    for m, _ in E._terms.items():
        jet_parts.add(tuple((a, k) for a, k in m if isinstance(a, Jet)))
    if len(jet_parts) == 1:
        part = jet_parts.pop()
        if part:
            return Expr.from_terms([(part, Fraction(1))])
    return E


def _leading_jet(E: Expr) -> Jet:
    best = None
    for a in atoms_of(E, recurse=False):
        if isinstance(a, Jet) and (best is None or a.order > best.order):
            best = a
    if best is None:
        raise DomainError("reduced equation carries no jet coordinate")
    return best


def _solve_leads(equations: list[Expr], jet_out: JetSpec, label: str,
                 parameters=()) -> ODESystem:
    leads: dict[str, tuple[int, Expr]] = {}
    for E in equations:
        lead = _leading_jet(E)
        cls = collect_terms(E, [Expr.one(), lead.as_expr()])
        coeff = cls[lead.as_expr()]
        rest = cls[Expr.one()]
        if not coeff.is_rational():
            raise DomainError(f"lead {lead!r} has non-constant coefficient")
        q = coeff.as_rational()
        if q == 0:
            raise DomainError("vanishing lead coefficient")
        if lead.dep in leads:
            raise DomainError(f"two equations solve for {lead.dep}")
        leads[lead.dep] = (lead.order, rest * Expr.rational(Fraction(-1) / q))
    return ODESystem(jet=jet_out, leads=leads, label=label,
                     parameters=tuple(parameters))


def order_reduce(S: ODESystem) -> ODESystem:
    """Autonomous order reduction: rename f' -> F, g' -> G, drop one order.
    Fails when an undifferentiated dependent is present."""
    rename = {"f": "F", "g": "G"}
    svar = S.svar
    new_jet = ODE_JET_FG if set(S.jet.dependents) == {"f", "g"} else JetSpec(
        (svar,), tuple(rename.get(d, d.upper()) for d in S.jet.dependents),
        S.jet.constants)
    bindings = {}
    for dep, (m, rhs) in S.leads.items():
        for a in atoms_of(rhs) | {jet(dep, (svar,) * m)}:
            if isinstance(a, Jet):
                if a.order == 0:
                    raise DomainError(
                        f"undifferentiated dependent {a.dep} blocks order reduction")
                nd = rename.get(a.dep, a.dep.upper())
                bindings[a] = jet(nd, (svar,) * (a.order - 1)).as_expr()
    leads = {}
    for dep, (m, rhs) in S.leads.items():
        nd = rename.get(dep, dep.upper())
        leads[nd] = (m - 1, substitute(rhs, bindings))
    return ODESystem(jet=new_jet, leads=leads,
                     label=f"order-reduced {S.label}", parameters=S.parameters)


# ---------------------------------------------------------------------------
# named reduced systems
# ---------------------------------------------------------------------------

def _c_expr(c) -> Expr:
    if isinstance(c, Expr):
        return c
    if isinstance(c, str):
        return sym(c).as_expr()
    return Expr.rational(c)


def reduced_system(member: int, c="c") -> ODESystem:
    from .hierarchy import catalogue_member
    return travelling_wave_reduce(catalogue_member(member), _c_expr(c))


def system_33(c="c") -> ODESystem:
    """First-order wave-profile pair of the second member."""
    out = order_reduce(reduced_system(2, c))
    out.label = "(3.3)"
    return out


def system_322(c="c") -> ODESystem:
    """Second-order wave-profile pair of the third member, as computed from
    the third-order reduction (the c-terms carry + signs)."""
    out = order_reduce(reduced_system(3, c))
    out.label = "(3.22)"
    return out


def system_322_printed(c="c") -> ODESystem:
    """The pair exactly as printed, with -cF and -cG; inconsistent with the
    third-order reduction but kept for comparison and for the elliptic
    branch as stated."""
    ce = _c_expr(c)
    ctx = ODE_JET_FG.with_constants(("q",) + _params_of(ce))
    P = ctx.parse
    leads = {
        "F": (2, substitute(P("q*F + F^3 - 3*F*G^2 - 3*G*F' - 3*F*G'"),
                            {sym("q"): ce})),
        "G": (2, substitute(P("q*G + 3*F^2*G - G^3 + 3*F*F' - 3*G*G'"),
                            {sym("q"): ce})),
    }
    return ODESystem(jet=ODE_JET_FG, leads=leads, label="(3.22) as printed",
                     parameters=_params_of(ce))


def f_branch_322(c="c") -> ODESystem:
    """G = 0 branch of the computed (3.22): F'' = F^3 - c F."""
    ce = _c_expr(c)
    rhs = jet("F").as_expr() ** 3 - ce * jet("F").as_expr()
    return ODESystem(jet=ODE_JET_F, leads={"F": (2, rhs)},
                     label="(3.22) F-branch", parameters=_params_of(ce))


def f_branch_322_printed(c="c") -> ODESystem:
    """G = 0 branch of the printed (3.22): F'' = c F + F^3."""
    ce = _c_expr(c)
    rhs = ce * jet("F").as_expr() + jet("F").as_expr() ** 3
    return ODESystem(jet=ODE_JET_F, leads={"F": (2, rhs)},
                     label="(3.22) F-branch as printed", parameters=_params_of(ce))


# ---------------------------------------------------------------------------
# elimination to the second-order wave-profile equation
# ---------------------------------------------------------------------------

def eliminate_to_second_order(S: ODESystem) -> Expr:
    """From the first-order pair: solve the F-equation for G = -F'/(2F - c),
    substitute into the derivative of that equation combined with the
    G-equation; returns the polynomial form (multiplied through by the
    pivot squared)."""
    if sorted(S.leads) != ["F", "G"] or S.order != 1:
        raise DomainError("elimination expects the first-order (F, G) pair")
    svar = S.svar
    G0 = jet("G")
    F1 = jet("F", (svar,))
    G1 = jet("G", (svar,))
    eq_F = F1.as_expr() - S.leads["F"][1]   # = 0
    eq_G = G1.as_expr() - S.leads["G"][1]   # = 0
    cls = collect_terms(eq_F, [Expr.one(), G0.as_expr()])
    pivot = cls[G0.as_expr()]          # 2F - c
    numer = cls[Expr.one()]            # F'
    if pivot.is_zero():
        raise PivotDegenerateError("pivot coefficient of G vanishes identically")
    from .systems import total_derivative
    dEF = total_derivative(eq_F, svar)
    g_prime_val = G1.as_expr() - eq_G  # G' on solutions
    dEF = substitute(dEF, {G1: g_prime_val})
    G0_sq = Expr.from_terms([(((G0, 2),), Fraction(1))])
    cls2 = collect_terms(dEF, [Expr.one(), G0.as_expr(), G0_sq])
    a0 = cls2[Expr.one()]
    a1 = cls2[G0.as_expr()]
    a2 = cls2[G0_sq]
    lam = equal_up_to_factor(a2, pivot)
    if lam is not None:
        # a2 is a rational multiple of the pivot: minimal polynomial form
        result = a0 * pivot - a1 * numer + Expr.rational(lam) * numer * numer
    else:
        result = a0 * pivot * pivot - a1 * pivot * numer + a2 * numer * numer
    return _normalize_equation(result)


def _normalize_equation(E: Expr) -> Expr:
    """Divide by the rational content and normalise the sign of the
    highest-derivative term."""
    if E.is_zero():
        return E
    qs = list(E._terms.values())
    from math import gcd
    num = 0
    den = 1
    for q in qs:
        num = gcd(num, abs(q.numerator))
        den = den * q.denominator // gcd(den, q.denominator)
    content = Fraction(num, 1) / den if num else Fraction(1)
    E = E * Expr.rational(1 / content)
    lead = _leading_jet(E)
    sign = None
    best_key = None
    for m, q in E._terms.items():
        if any(a is lead for a, _ in m):
            key = tuple((a.key, k) for a, k in m)
            if best_key is None or key < best_key:
                best_key = key
                sign = q
    if sign is not None and sign < 0:
        E = -E
    return E


def printed_second_order(c="c") -> Expr:
    """The printed wave-profile equation multiplied through by (2F - c):
    (2F - c) F'' + 3 F'^2 - F (F - c)(2F - c)^2."""
    ce = _c_expr(c)
    ctx = ODE_JET_F.with_constants(("q",) + _params_of(ce))
    e = ctx.parse("(2*F - q)*F'' + 3*F'^2 - F*(F - q)*(2*F - q)^2")
    return _normalize_equation(substitute(e, {sym("q"): ce}))


def computed_second_order(c="c") -> Expr:
    return eliminate_to_second_order(system_33(c))


def equal_up_to_factor(e1: Expr, e2: Expr):
    """Rational lambda with e1 = lambda * e2, or None."""
    if e1.is_zero() and e2.is_zero():
        return Fraction(1)
    if e1.is_zero() or e2.is_zero():
        return None
    m2, q2 = min(e2._terms.items(), key=lambda t: tuple((a.key, k) for a, k in t[0]))
    q1 = e1._terms.get(m2)
    if q1 is None:
        return None
    lam = q1 / q2
    return lam if (e1 - e2 * Expr.rational(lam)).is_zero() else None


# ---------------------------------------------------------------------------
# solution candidates
# ---------------------------------------------------------------------------

@dataclass
class SolutionCandidate:
    """Closed-form (or sampled) wave profiles for a reduced system.

    `exprs` maps dependents to expressions in s and parameter symbols;
    `callables` supplies numeric-only dependents (derivatives by central
    differences).  `constraints` are parameter relations that must hold."""

    name: str
    exprs: dict[str, Expr] = dc_field(default_factory=dict)
    callables: dict = dc_field(default_factory=dict)
    constraints: list[Expr] = dc_field(default_factory=list)
    params: dict[str, complex] = dc_field(default_factory=dict)
    pole_denoms: list[Expr] = dc_field(default_factory=list)
    notes: list[str] = dc_field(default_factory=list)


def tan_solution(c="c", s0="s0") -> SolutionCandidate:
    """F = c/2, G = -(c/2) tan((c/2)(s - s0)); exact on the first-order pair."""
    ce = _c_expr(c)
    s0e = sym(s0).as_expr() if isinstance(s0, str) else Expr.rational(s0)
    s = sym("s").as_expr()
    half = Expr.rational(Fraction(1, 2))
    arg = half * ce * (s - s0e)
    return SolutionCandidate(
        name="tan",
        exprs={"F": half * ce, "G": -half * ce * tan_e(arg)},
        pole_denoms=[cos_e(arg)],
        params={"c": 1.0, "s0": 0.0},
    )


def tan_antiderivatives(c: float, s0: float = 0.0):
    """f, g with f' = F, g' = G for the tan branch: f = (c/2) s,
    g = ln|cos((c/2)(s - s0))|."""
    def f_fn(s):
        return 0.5 * c * s

    def g_fn(s):
        return math.log(abs(math.cos(0.5 * c * (s - s0))))

    return f_fn, g_fn


def s11_solution() -> SolutionCandidate:
    """The printed two-parameter closed form: F as stated (with
    q = exp(-i c s)) and G reconstructed through G = -F'/(2F - c).

    Direct substitution shows the printed F does not satisfy the pair (the
    residual of the G-equation is O(1)); the candidate is kept verbatim so
    the verifier reports the actual residual."""
    c = sym("c").as_expr()
    F0 = sym("F0").as_expr()
    F1 = sym("F1").as_expr()
    s = sym("s").as_expr()
    q2 = exp_e(Expr.integer(-2) * I.as_expr() * c * s)
    q1 = exp_e(Expr.integer(-1) * I.as_expr() * c * s)
    D = F0 * (q2 - F1 * c) ** 2 - Expr.integer(16) * c * c
    N = D - Expr.integer(8) * c * F0 * q1
    F = Expr.rational(Fraction(1, 2)) * c * N / D
    G = reconstruct_G(F, c)
    return SolutionCandidate(
        name="s11", exprs={"F": F, "G": G},
        params={"c": 1.0, "F0": 1.0, "F1": 0.0},
        pole_denoms=[D],
        notes=["printed closed form; fails the reduced pair by O(1)"])


def reconstruct_G(F: Expr, c: Expr) -> Expr:
    """G = -F'/(2F - c); raises PivotDegenerateError on the F = c/2 branch."""
    pivot = Expr.integer(2) * F - c
    if pivot.is_zero():
        raise PivotDegenerateError("2F - c vanishes identically for this profile")
    return -derive(F, sym("s")) / pivot


def rational_trig_solution(printed: bool = False) -> SolutionCandidate:
    """F = 0 with the log-derivative trig profile for G on the computed
    (3.22).  The printed numerator sign fails; the corrected profile
    G = sqrt(c) (G0 cos - sin)/(G0 sin + cos + G1) verifies."""
    rc = sqrt_e(sym("c").as_expr())
    s = sym("s").as_expr()
    G0 = sym("G0").as_expr()
    G1 = sym("G1").as_expr()
    S, C = sin_e(rc * s), cos_e(rc * s)
    D = G0 * S + C + G1
    numer = (S - G0 * C) if printed else (G0 * C - S)
    name = "rational-trig (printed)" if printed else "rational-trig"
    notes = ["numerator sign as printed; fails verification"] if printed else \
        ["numerator sign corrected relative to the printed solution"]
    return SolutionCandidate(name=name,
                             exprs={"F": Expr.zero(), "G": rc * numer / D},
                             params={"c": 1.0, "G0": 0.5, "G1": 0.25},
                             pole_denoms=[D], notes=notes)


def sn_solution(k: float, printed_system: bool = True) -> SolutionCandidate:
    """G = 0, F = F0 sn(s, k) with the derived parameter constraints
    F0^2 = 2 k^2 and c = -(1 + k^2) on the printed F-branch
    (c = +(1 + k^2) on the computed branch)."""
    F0 = math.sqrt(2.0) * k
    c = -(1.0 + k * k) if printed_system else (1.0 + k * k)

    def F_fn(s):
        return F0 * jacobi_sn(s, k)

    return SolutionCandidate(
        name="sn", callables={"F": F_fn}, exprs={"G": Expr.zero()},
        params={"c": c, "F0": F0, "k": k},
        notes=[f"derived constraints: F0^2 = 2 k^2, c = {'-' if printed_system else '+'}(1 + k^2)"])


def linear_solution_member4() -> SolutionCandidate:
    """g = g0, f = f1 s + f0 on the fourth member's reduction, valid exactly
    under f1 (f1^3 + c) = 0 (the printed solution omits the constraint)."""
    ctx = JetSpec(("s",), ("f", "g"), constants=("c", "f0", "f1", "g0"))
    f1 = sym("f1").as_expr()
    c = sym("c").as_expr()
    return SolutionCandidate(
        name="member4-linear",
        exprs={"f": ctx.parse("f1*s + f0"), "g": ctx.parse("g0")},
        constraints=[f1 ** 4 + c * f1],
        params={"c": -1.0, "f0": 0.25, "f1": 1.0, "g0": 2.0},
        notes=["constraint f1 (f1^3 + c) = 0 required by direct substitution"])


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

@dataclass
class VerifyReport:
    candidate: str
    system: str
    mode: str
    statuses: list[str]
    max_residual: float | None = None
    samples: int = 0
    notes: list[str] = dc_field(default_factory=list)

    @property
    def zero(self) -> bool:
        return all(s == "Zero" for s in self.statuses)


def _candidate_jet_values(S: ODESystem, cand: SolutionCandidate) -> dict[Jet, Expr]:
    """Symbolic values for every jet coordinate the equations use."""
    svar = S.svar
    need_order = {}
    for dep, (m, rhs) in S.leads.items():
        need_order[dep] = max(need_order.get(dep, 0), m)
        for a in atoms_of(rhs):
            if isinstance(a, Jet):
                need_order[a.dep] = max(need_order.get(a.dep, 0), a.order)
    out = {}
    for dep, mx in need_order.items():
        if dep not in cand.exprs:
            continue
        cur = cand.exprs[dep]
        out[jet(dep)] = cur
        for k in range(1, mx + 1):
            cur = derive(cur, sym(svar))
            out[jet(dep, (svar,) * k)] = cur
    return out


def _reduce_mod_constraints(R: Expr, constraints: list[Expr]) -> Expr:
    for P in constraints:
        if R.is_zero():
            break
        m2, q2 = min(P._terms.items(),
                     key=lambda t: tuple((a.key, k) for a, k in t[0]))
        q1 = R._terms.get(m2)
        if q1 is None:
            continue
        cand = R - P * Expr.rational(q1 / q2)
        if cand.is_zero():
            R = cand
    return R


def verify_solution(S: ODESystem, cand: SolutionCandidate, mode: str = "symbolic",
                    param_values: dict | None = None, s_range=(0.25, 10.0),
                    samples: int = 200, fd_step: float = 3e-3,
                    pole_tol: float = 0.05) -> VerifyReport:
    """Symbolic: substitute the profile, canonicalise under the parameter
    constraints, expect Zero.  Numeric: max |residual| over pole-free
    samples, derivatives taken analytically for expression profiles and by
    fourth-order central differences for callable ones."""
    if mode == "symbolic":
        if cand.callables:
            raise DomainError("symbolic mode needs expression profiles")
        vals = _candidate_jet_values(S, cand)
        statuses = []
        for lead, rhs in S.equations():
            E = lead.as_expr() - rhs
            R = substitute(E, vals)
            R = _reduce_mod_constraints(R, cand.constraints)
            statuses.append("Zero" if R.is_zero() else "Nonzero")
        return VerifyReport(cand.name, S.label, "symbolic", statuses,
                            notes=list(cand.notes))

    params = dict(cand.params)
    params.update(param_values or {})
    bind_syms = {sym(k): complex(v) for k, v in params.items()}
    from .expr_core import Root, root as root_atom
    if "c" in params:
        cval = complex(params["c"])
        bind_syms[root_atom("c")] = cval ** 0.5

    svar = S.svar
    sym_vals = _candidate_jet_values(S, cand)
    # orders needed for callable dependents
    need_order = {}
    for dep, (m, rhs) in S.leads.items():
        need_order[dep] = max(need_order.get(dep, 0), m)
        for a in atoms_of(rhs):
            if isinstance(a, Jet):
                need_order[a.dep] = max(need_order.get(a.dep, 0), a.order)

    lo, hi = s_range
    worst = 0.0
    good = 0
    idx = 0
    total_budget = samples * 6
    while good < samples and idx < total_budget:
        if idx < samples:
            sval = lo + (hi - lo) * idx / samples
        else:
            sval = lo + (hi - lo) * ((idx * 0.6180339887498949) % 1.0)
        idx += 1
        point = dict(bind_syms)
        point[sym(svar)] = sval
        try:
            if any(abs(eval_numeric(d, point)) < pole_tol for d in cand.pole_denoms):
                continue
            for J, expr_val in sym_vals.items():
                point[J] = eval_numeric(expr_val, point)
            for dep, fn in cand.callables.items():
                for k in range(need_order.get(dep, 0) + 1):
                    point[jet(dep, (svar,) * k)] = _fd_derivative(fn, sval, k, fd_step)
            res = 0.0
            for lead, rhs in S.equations():
                E = lead.as_expr() - rhs
                res = max(res, abs(eval_numeric(E, point)))
            worst = max(worst, res)
            good += 1
        except PoleError:
            continue
    if good < samples:
        raise PoleError("all samples in excluded domain")
    return VerifyReport(cand.name, S.label, "numeric",
                        ["sampled"] * len(S.leads), max_residual=worst,
                        samples=good, notes=list(cand.notes))


_FD_CACHE: dict[tuple, list[Fraction]] = {}


def fd_weights(offsets: list[int], order: int) -> list[Fraction]:
    """Exact finite-difference weights on integer offsets for the given
    derivative order (solve the moment system over rationals)."""
    key = (tuple(offsets), order)
    if key in _FD_CACHE:
        return _FD_CACHE[key]
    n = len(offsets)
    if order >= n:
        raise DomainError("not enough stencil points for the derivative order")
    from .linalg import rref
    rows = []
    fact = math.factorial(order)
    for m in range(n):
        row = {j: Fraction(offsets[j]) ** m for j in range(n)
               if Fraction(offsets[j]) ** m != 0}
        row[n] = Fraction(-fact) if m == order else Fraction(0)
        if row.get(n) == 0:
            row.pop(n)
        if row:
            rows.append(row)
    pivot_rows, pivots = rref(rows, n + 1)
    w = [Fraction(0)] * n
    for prow, pc in zip(pivot_rows, pivots):
        if pc < n:
            w[pc] = -prow.get(n, Fraction(0))
    _FD_CACHE[key] = w
    return w


def _fd_derivative(fn, s: float, order: int, h: float):
    if order == 0:
        return fn(s)
    offsets = list(range(-(order // 2 + 2), order // 2 + 3))
    w = fd_weights(offsets, order)
    return sum(float(wj) * fn(s + oj * h) for wj, oj in zip(w, offsets)) / h ** order


# ---------------------------------------------------------------------------
# numeric integration of reduced systems
# ---------------------------------------------------------------------------

def rk4_from_system(S: ODESystem, params: dict, state0: dict, s_range, h,
                    guard: float = 1e8) -> Trajectory:
    """Integrate an explicit first-order reduced system with RK4."""
    if S.order != 1:
        raise DomainError("integrate the first-order form")
    svar = S.svar
    bind = {sym(k): complex(v) for k, v in params.items()}
    eqs = {dep: rhs for dep, (m, rhs) in S.leads.items()}

    def rhs_fn(s, state):
        point = dict(bind)
        point[sym(svar)] = s
        for d, v in state.items():
            point[jet(d)] = v
        return {d: eval_numeric(e, point) for d, e in eqs.items()}

    return integrate_rk4(rhs_fn, state0, s_range, h, guard=guard)


# ---------------------------------------------------------------------------
# lifting back to the PDE
# ---------------------------------------------------------------------------

def lift_and_check(S: PDESystem, profiles: dict, c: float,
                   t_range=(-0.5, 0.5), x_range=(-0.5, 0.5), n: int = 50,
                   h: float = 1e-2) -> float:
    """Evaluate v(t,x) = f(x - c t), w(t,x) = g(x - c t) on a grid and return
    the max PDE residual by fourth-order finite differences."""
    tvar, xvar = S.jet.independents
    order = S.order
    worst = 0.0
    t0, t1 = t_range
    x0, x1 = x_range
    for i in range(n):
        t = t0 + (t1 - t0) * i / (n - 1)
        for j in range(n):
            x = x0 + (x1 - x0) * j / (n - 1)
            point = {sym(tvar): t, sym(xvar): x}
            for dep in S.jet.dependents:
                fn = profiles.get(dep) or profiles[_DEP_MAP[dep]]
                point[jet(dep)] = fn(x - c * t)
                for k in range(1, order + 1):
                    point[jet(dep, (xvar,) * k)] = _fd_derivative(
                        lambda xx, fn=fn, t=t: fn(xx - c * t), x, k, h)
                point[jet(dep, (tvar,))] = _fd_derivative(
                    lambda tt, fn=fn, x=x: fn(x - c * tt), t, 1, h)
            for dep in S.jet.dependents:
                res = point[jet(dep, (tvar,))] - eval_numeric(S.rhs[dep], point)
                worst = max(worst, abs(res))
    return worst


# ---------------------------------------------------------------------------
# CSV emission and wave-profile features
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return format(x, ".17g")


def emit_series_csv(rows: list[tuple], path) -> None:
    """Columns s, F_re, F_im, G_re, G_im; 17 significant digits."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("s,F_re,F_im,G_re,G_im\n")
        for s, F, G in rows:
            fh.write(",".join([_fmt(s), _fmt(F.real), _fmt(F.imag),
                               _fmt(G.real), _fmt(G.imag)]) + "\n")


def fig1_rows(c: float, F1: float, F0: float = 1.0, s_range=(0.0, 10.0),
              n: int = 1000) -> list[tuple]:
    """(s, F, G) samples of the printed closed form for the wave-profile
    figure."""
    cand = s11_solution()
    Fe, Ge = cand.exprs["F"], cand.exprs["G"]
    base = {sym("c"): complex(c), sym("F0"): complex(F0), sym("F1"): complex(F1)}
    lo, hi = s_range
    rows = []
    for i in range(n):
        s = lo + (hi - lo) * i / (n - 1)
        point = dict(base)
        point[sym("s")] = s
        try:
            rows.append((s, eval_numeric(Fe, point), eval_numeric(Ge, point)))
        except PoleError:
            continue
    return rows


def fig1_features(c: float, F1: float, F0: float = 1.0, n: int = 2048,
                  s_start: float = 0.1) -> dict:
    """Periodicity error of Re F and Re G over one period 2 pi / c (exact
    offset evaluation) and the number of sign changes of dF_re/ds per
    period."""
    period = 2 * math.pi / c
    cand = s11_solution()
    Fe, Ge = cand.exprs["F"], cand.exprs["G"]
    base = {sym("c"): complex(c), sym("F0"): complex(F0), sym("F1"): complex(F1)}

    def at(e, s):
        point = dict(base)
        point[sym("s")] = s
        return eval_numeric(e, point)

    per_err = 0.0
    for i in range(25):
        s = s_start + period * i / 25
        per_err = max(per_err, abs(at(Fe, s).real - at(Fe, s + period).real))
        per_err = max(per_err, abs(at(Ge, s).real - at(Ge, s + period).real))

    samples = [at(Fe, s_start + period * i / n).real for i in range(n + 2)]
    dF = [samples[i + 1] - samples[i - 1] for i in range(1, n + 1)]
    changes = 0
    for a, b in zip(dF, dF[1:]):
        if a == 0 or (a < 0) != (b < 0):
            changes += 1
    return {"period": period, "periodicity_error": per_err,
            "dFre_sign_changes_per_period": changes}
