"""Point-symmetry machinery: prolongation of generators, symmetry residuals,
determining systems from finite ansatz dictionaries, exact nullspace
discovery, and verification of concrete generators including families that
carry constrained unknown functions.

The same pipeline serves evolution PDE systems (independents t, x) and
reduced ODE systems (single independent s); for the latter the time slot is
simply absent.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .expr_core import (
    DomainError, Expr, Jet, atoms_of, derive, jet, sym,
)
from .linalg import nullspace, solve_exact
from .parser import expr_text
from .systems import JetSpec, PDESystem, Reducer, total_derivative

__all__ = [
    "VectorField", "UnknownFunctionConstraint", "AnsatzBasis",
    "DeterminingSystem", "VerificationReport", "prolong_generator",
    "symmetry_residual", "determining_system", "discover_symmetries",
    "verify_generator", "ansatz_dictionary", "field_text", "project_onto_ansatz",
    "span_membership",
]


@dataclass(frozen=True)
class UnknownFunctionConstraint:
    """Constraint PDE/ODE for an unknown function carried by a generator.

    For functions of (t, x): rule is the right-hand side of name_t = rhs.
    For functions of (s,): rule is (order m, rhs of name^(m) = rhs).
    """

    name: str
    args: tuple[str, ...]
    lead_order: int
    rhs: Expr


@dataclass
class VectorField:
    """Infinitesimal generator xi^i d_i + eta^A d_A with optional unknown
    functions subject to constraint equations."""

    jet: JetSpec
    xi: dict[str, Expr] = dc_field(default_factory=dict)
    eta: dict[str, Expr] = dc_field(default_factory=dict)
    unknowns: tuple[UnknownFunctionConstraint, ...] = ()
    name: str = ""

    def __post_init__(self):
        for slot, coeff in list(self.xi.items()) + list(self.eta.items()):
            for atom in atoms_of(coeff):
                if isinstance(atom, Jet) and atom.order >= 1:
                    raise DomainError(
                        f"generator coefficient for {slot} depends on jet "
                        f"derivative {atom!r}")

    def xi_of(self, indep: str) -> Expr:
        return self.xi.get(indep, Expr.zero())

    def eta_of(self, dep: str) -> Expr:
        return self.eta.get(dep, Expr.zero())

    def is_concrete(self) -> bool:
        return not self.unknowns

    def coeff_vector_atoms(self):
        for indep in self.jet.independents:
            yield ("xi", indep, self.xi_of(indep))
        for dep in self.jet.dependents:
            yield ("eta", dep, self.eta_of(dep))

    def scale(self, q) -> "VectorField":
        qe = Expr.rational(q) if not isinstance(q, Expr) else q
        return VectorField(self.jet,
                           {k: v * qe for k, v in self.xi.items()},
                           {k: v * qe for k, v in self.eta.items()},
                           self.unknowns, self.name)

    def add(self, other: "VectorField") -> "VectorField":
        xi = dict(self.xi)
        for k, v in other.xi.items():
            xi[k] = xi.get(k, Expr.zero()) + v
        eta = dict(self.eta)
        for k, v in other.eta.items():
            eta[k] = eta.get(k, Expr.zero()) + v
        return VectorField(self.jet, xi, eta, self.unknowns + other.unknowns)

    def __repr__(self):
        return field_text(self)


def field_text(X: VectorField) -> str:
    parts = []
    for kind, var, coeff in X.coeff_vector_atoms():
        if coeff.is_zero():
            continue
        txt = expr_text(coeff)
        if txt == "1":
            parts.append(f"d_{var}")
        elif txt == "-1":
            parts.append(f"-d_{var}")
        elif " " in txt:
            parts.append(f"({txt})*d_{var}")
        else:
            parts.append(f"{txt}*d_{var}")
    return " + ".join(parts).replace("+ -", "- ") if parts else "0"


# ---------------------------------------------------------------------------
# prolongation
# ---------------------------------------------------------------------------

def prolong_generator(X: VectorField, needed) -> dict[Jet, Expr]:
    """Extended coefficients eta^{A,J} for the requested jet coordinates via
    eta^{A,Ji} = D_i(eta^{A,J}) - sum_j D_i(xi^j) u^A_{Jj}."""
    memo: dict[Jet, Expr] = {}
    for dep in X.jet.dependents:
        memo[jet(dep, ())] = X.eta_of(dep)
    dxi = {(j, i): total_derivative(X.xi_of(j), i)
           for j in X.jet.independents for i in X.jet.independents}

    def get(J: Jet) -> Expr:
        got = memo.get(J)
        if got is not None:
            return got
        base = J.idx[:-1]
        i = J.idx[-1]
        val = total_derivative(get(jet(J.dep, base)), i)
        for j in X.jet.independents:
            d = dxi[(j, i)]
            if not d.is_zero():
                val = val - d * jet(J.dep, base + (j,)).as_expr()
        memo[J] = val
        return val

    return {J: get(J) for J in needed}


# ---------------------------------------------------------------------------
# residuals
# ---------------------------------------------------------------------------

def _reducer_with_unknowns(system, X: VectorField) -> Reducer:
    r = system.reducer()
    for uc in X.unknowns:
        if len(uc.args) == 2:
            r.add_pde_rule(uc.name, uc.args[0], uc.args[1], uc.rhs, args=uc.args)
        else:
            r.add_ode_rule(uc.name, uc.args[0], uc.lead_order, uc.rhs, args=uc.args)
    return r


def symmetry_residual(system, X: VectorField, eliminate: bool = True) -> list[Expr]:
    """Apply the prolonged generator to each equation H^A = lead - rhs and
    substitute the equations (and their differential consequences) so the
    result lives on solutions.  A generator is a symmetry iff every entry is
    zero."""
    is_pde = isinstance(system, PDESystem)
    reducer = _reducer_with_unknowns(system, X) if eliminate else None
    residuals = []
    for lead, rhs in system.equations():
        needed = {lead}
        rhs_jets = [a for a in atoms_of(rhs) if isinstance(a, Jet)]
        needed.update(a for a in rhs_jets if a.order >= 1)
        coeffs = prolong_generator(X, needed)
        r = coeffs[lead]
        for indep in system.jet.independents:
            xi_c = X.xi_of(indep)
            if not xi_c.is_zero():
                d = derive(rhs, sym(indep))
                if not d.is_zero():
                    r = r - xi_c * d
        for a in rhs_jets:
            d = derive(rhs, a)
            if d.is_zero():
                continue
            co = coeffs[a] if a.order >= 1 else X.eta_of(a.dep)
            r = r - co * d
        # unknown-function content of rhs is not acted on: generators carry
        # unknown functions only in their own coefficients
        if eliminate:
            r = reducer.reduce(r)
        residuals.append(r)
    return residuals


@dataclass
class VerificationReport:
    field: VectorField
    residuals: list[Expr]
    zero: bool
    notes: list[str] = dc_field(default_factory=list)

    @property
    def status(self) -> str:
        return "Zero" if self.zero else "Nonzero"

    def remainders(self) -> list[str]:
        return [expr_text(r) for r in self.residuals]


def verify_generator(system, X: VectorField) -> VerificationReport:
    """Residual check with unknown-function derivatives reduced modulo their
    constraint equations."""
    res = symmetry_residual(system, X, eliminate=True)
    zero = all(r.is_zero() for r in res)
    notes = []
    if not zero:
        nz = [i for i, r in enumerate(res) if not r.is_zero()]
        notes.append(f"nonzero residual in equation(s) {nz}")
    return VerificationReport(field=X, residuals=res, zero=zero, notes=notes)


# ---------------------------------------------------------------------------
# ansatz dictionaries
# ---------------------------------------------------------------------------

@dataclass
class AnsatzBasis:
    """Candidate expressions per generator slot ('xi', indep) / ('eta', dep)."""

    jet: JetSpec
    slots: dict[tuple[str, str], list[Expr]]

    def columns(self):
        cols = []
        for key in sorted(self.slots):
            for k, e in enumerate(self.slots[key]):
                cols.append((key, k, e))
        return cols

    def size(self) -> int:
        return sum(len(v) for v in self.slots.values())


def ansatz_dictionary(jet_spec: JetSpec, degree: int, trig_order: int = 0,
                      exp_range: int = 0, trig_dep: str | None = None,
                      exp_dep: str | None = None) -> AnsatzBasis:
    """Dictionary {prod of independents^a, total degree <= D} on every slot;
    eta slots are additionally multiplied by {1, sin(m dep0), cos(m dep0)}
    (m <= trig_order) and {exp(k dep1)} (|k| <= exp_range)."""
    indeps = jet_spec.independents
    polys = []
    if len(indeps) == 1:
        s = sym(indeps[0]).as_expr()
        polys = [s ** a for a in range(degree + 1)]
    else:
        t, x = (sym(i).as_expr() for i in indeps)
        polys = [t ** a * x ** b
                 for a in range(degree + 1) for b in range(degree + 1 - a)]
    trig_dep = trig_dep or jet_spec.dependents[0]
    exp_dep = exp_dep or (jet_spec.dependents[1] if len(jet_spec.dependents) > 1
                          else jet_spec.dependents[0])
    from .expr_core import cos_e, exp_e, sin_e
    trig_parts = [Expr.one()]
    for m in range(1, trig_order + 1):
        arg = Expr.integer(m) * jet(trig_dep).as_expr()
        trig_parts += [sin_e(arg), cos_e(arg)]
    exp_parts = [exp_e(Expr.integer(k) * jet(exp_dep).as_expr())
                 for k in range(-exp_range, exp_range + 1)]
    slots: dict[tuple[str, str], list[Expr]] = {}
    for indep in indeps:
        slots[("xi", indep)] = list(polys)
    eta_dict = []
    seen = set()
    for p in polys:
        for tr in trig_parts:
            for ex in exp_parts:
                e = p * tr * ex
                if e not in seen:
                    seen.add(e)
                    eta_dict.append(e)
    for dep in jet_spec.dependents:
        slots[("eta", dep)] = list(eta_dict)
    return AnsatzBasis(jet=jet_spec, slots=slots)


# ---------------------------------------------------------------------------
# determining systems and discovery
# ---------------------------------------------------------------------------

@dataclass
class DeterminingSystem:
    """Homogeneous rational system over the ansatz coefficients; its nullspace
    is the symmetry space inside the dictionary."""

    system_label: str
    basis: AnsatzBasis
    columns: list[tuple[tuple[str, str], int, Expr]]
    rows: list[dict[int, Fraction]]
    provenance: list[tuple[int, tuple]]  # (equation index, class monomial key)

    @property
    def n_unknowns(self) -> int:
        return len(self.columns)

    def rank(self) -> int:
        from .linalg import rank as _rank
        return _rank(self.rows, self.n_unknowns)

    def nullity(self) -> int:
        return self.n_unknowns - self.rank()


def _unit_field(jet_spec: JetSpec, key: tuple[str, str], e: Expr) -> VectorField:
    kind, var = key
    if kind == "xi":
        return VectorField(jet_spec, xi={var: e})
    return VectorField(jet_spec, eta={var: e})


def determining_system(system, basis: AnsatzBasis) -> DeterminingSystem:
    """Rows: residual coefficients per (equation, monomial class); the
    residual map is linear in the generator, so each dictionary entry is
    processed independently."""
    cols = basis.columns()
    rowmap: dict[tuple[int, tuple], dict[int, Fraction]] = {}
    for col_idx, (key, _, e) in enumerate(cols):
        X = _unit_field(basis.jet, key, e)
        res = symmetry_residual(system, X, eliminate=True)
        for eq_i, r in enumerate(res):
            for mono, q in r._terms.items():
                rk = (eq_i, tuple((a.key, k) for a, k in mono))
                rowmap.setdefault(rk, {})[col_idx] = q
    prov = sorted(rowmap)
    rows = [rowmap[k] for k in prov]
    return DeterminingSystem(system_label=getattr(system, "label", ""),
                             basis=basis, columns=cols, rows=rows,
                             provenance=prov)


def discover_symmetries(system, basis: AnsatzBasis,
                        det: DeterminingSystem | None = None) -> list[VectorField]:
    """Exact nullspace of the determining system mapped back to generators;
    canonical reduced-echelon basis, pivot on the lowest-indexed coefficient."""
    if det is None:
        det = determining_system(system, basis)
    null = nullspace(det.rows, det.n_unknowns)
    fields = []
    for vec in null:
        xi: dict[str, Expr] = {}
        eta: dict[str, Expr] = {}
        for col_idx, q in sorted(vec.items()):
            (kind, var), _, e = det.columns[col_idx]
            tgt = xi if kind == "xi" else eta
            tgt[var] = tgt.get(var, Expr.zero()) + Expr.rational(q) * e
        fields.append(VectorField(basis.jet,
                                  {k: v for k, v in xi.items() if not v.is_zero()},
                                  {k: v for k, v in eta.items() if not v.is_zero()}))
    return fields


# ---------------------------------------------------------------------------
# exact span membership
# ---------------------------------------------------------------------------

def project_onto_ansatz(X: VectorField, basis: AnsatzBasis):
    """Coefficient vector of X over the dictionary, or None when a slot
    expression leaves the dictionary."""
    index: dict[tuple[tuple[str, str], tuple], int] = {}
    for col_idx, (key, _, e) in enumerate(basis.columns()):
        mono, q = next(iter(e._terms.items())) if e._terms else ((), Fraction(0))
        if q != 1 or len(e._terms) != 1:
            raise DomainError("ansatz dictionary entries must be unit monomials")
        index[(key, tuple((a.key, k) for a, k in mono))] = col_idx
    vec: dict[int, Fraction] = {}
    for kind, var, coeff in X.coeff_vector_atoms():
        for mono, q in coeff._terms.items():
            key = ((kind, var), tuple((a.key, k) for a, k in mono))
            col = index.get(key)
            if col is None:
                return None
            vec[col] = q
    return vec


def span_membership(X: VectorField, fields: list[VectorField],
                    basis: AnsatzBasis):
    """Exact coordinates of X in span{fields} (all projected onto the
    dictionary), or None."""
    target = project_onto_ansatz(X, basis)
    if target is None:
        return None
    cols = []
    for F in fields:
        vec = project_onto_ansatz(F, basis)
        if vec is None:
            return None
        cols.append(vec)
    return solve_exact(cols, target)
