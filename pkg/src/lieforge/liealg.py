"""Lie brackets, structure constants relative to a computed basis, closure
and Jacobi checks, and a structural signature of the resulting algebra.

Structure constants are expressions in the declared parameter symbols (most
tables are purely rational; the reduced third-member algebra needs sqrt(c)).
Membership of a bracket in the span of a basis is decided by matching
coefficients over the shared functional basis of monomials and solving
exactly, never by sampling points.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations

from .expr_core import (
    DomainError, Expr, Root, Sym, atoms_of, derive, jet, substitute, sym,
)
from .linalg import nullspace, rref, solve_exact
from .parser import expr_text
from .symmetry import VectorField

__all__ = ["lie_bracket", "StructureTable", "structure_constants",
           "jacobi_check", "AlgebraSignature", "algebra_signature"]


def _apply_field(X: VectorField, f: Expr) -> Expr:
    """X acting as a first-order operator on a coefficient function."""
    out = Expr.zero()
    for indep in X.jet.independents:
        c = X.xi_of(indep)
        if not c.is_zero():
            d = derive(f, sym(indep))
            if not d.is_zero():
                out = out + c * d
    for dep in X.jet.dependents:
        c = X.eta_of(dep)
        if not c.is_zero():
            d = derive(f, jet(dep))
            if not d.is_zero():
                out = out + c * d
    return out


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """[X, Y]^i = X(Y^i) - Y(X^i), componentwise."""
    if X.jet.independents != Y.jet.independents or \
            X.jet.dependents != Y.jet.dependents:
        raise DomainError("mismatched jet spaces in lie_bracket")
    if not (X.is_concrete() and Y.is_concrete()):
        raise DomainError("lie_bracket needs concrete coefficients")
    xi = {}
    for indep in X.jet.independents:
        c = _apply_field(X, Y.xi_of(indep)) - _apply_field(Y, X.xi_of(indep))
        if not c.is_zero():
            xi[indep] = c
    eta = {}
    for dep in X.jet.dependents:
        c = _apply_field(X, Y.eta_of(dep)) - _apply_field(Y, X.eta_of(dep))
        if not c.is_zero():
            eta[dep] = c
    return VectorField(X.jet, xi, eta)


# ---------------------------------------------------------------------------
# span arithmetic over a shared functional basis
# ---------------------------------------------------------------------------

def _param_atoms(fields) -> list:
    params = set()
    for F in fields:
        for _, _, coeff in F.coeff_vector_atoms():
            for a in atoms_of(coeff):
                if isinstance(a, Root):
                    params.add(a)
                elif isinstance(a, Sym) and a.name not in F.jet.independents:
                    params.add(a)
    return sorted(params, key=lambda a: a.key)


def _const_dictionary(params, span: int = 2) -> list[Expr]:
    """Candidate constant monomials: Laurent powers of parameter symbols times
    at most one root factor."""
    syms = [a for a in params if isinstance(a, Sym)]
    roots = [a for a in params if isinstance(a, Root)]
    consts = [Expr.one()]
    for a in syms:
        cur = list(consts)
        for k in list(range(-span, 0)) + list(range(1, span + 1)):
            consts += [c * a.as_expr() ** k for c in cur]
    out = list(consts)
    for r in roots:
        out += [c * r.as_expr() for c in consts]
    seen, uniq = set(), []
    for c in out:
        if c not in seen:
            seen.add(c)
            uniq.append(c)
    return uniq


def _field_rows(F: VectorField, const: Expr):
    """Sparse row of (slot, monomial) -> coefficient for const * F."""
    row = {}
    for kind, var, coeff in F.coeff_vector_atoms():
        e = coeff * const
        for m, q in e._terms.items():
            row[((kind, var), tuple((a.key, k) for a, k in m))] = q
    return row


def in_span(target: VectorField, basis: list[VectorField], params=None):
    """Exact membership: target = sum_k alpha_k basis_k with alpha_k constant
    expressions over the parameter dictionary.  Returns the list of alpha_k
    Exprs or None."""
    if params is None:
        params = _param_atoms(basis + [target])
    consts = _const_dictionary(params)
    cols = []
    labels = []
    for k, F in enumerate(basis):
        for c in consts:
            cols.append(_field_rows(F, c))
            labels.append((k, c))
    tgt = _field_rows(target, Expr.one())
    # re-index rows densely
    row_ids = sorted({r for col in cols for r in col} | set(tgt))
    idx = {r: i for i, r in enumerate(row_ids)}
    cols_i = [{idx[r]: q for r, q in col.items()} for col in cols]
    tgt_i = {idx[r]: q for r, q in tgt.items()}
    sol = solve_exact(cols_i, tgt_i)
    if sol is None:
        return None
    alphas = [Expr.zero() for _ in basis]
    for (k, c), q in zip(labels, sol):
        if q:
            alphas[k] = alphas[k] + Expr.rational(q) * c
    return alphas


def basis_independent(basis: list[VectorField]) -> bool:
    """Exact linear independence over rational constants."""
    cols = [_field_rows(F, Expr.one()) for F in basis]
    row_ids = sorted({r for col in cols for r in col})
    idx = {r: i for i, r in enumerate(row_ids)}
    rows_t = [dict() for _ in row_ids]
    for k, col in enumerate(cols):
        for r, q in col.items():
            rows_t[idx[r]][k] = q
    _, pivots = rref([r for r in rows_t if r], len(basis))
    return len(pivots) == len(basis)


# ---------------------------------------------------------------------------
# structure tables
# ---------------------------------------------------------------------------

@dataclass
class StructureTable:
    basis: list[VectorField]
    constants: dict[tuple[int, int], list[Expr]]
    closed: bool
    non_closing: dict[tuple[int, int], VectorField] = dc_field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def c(self, i: int, j: int, k: int) -> Expr:
        if i == j:
            return Expr.zero()
        if (i, j) in self.constants:
            return self.constants[(i, j)][k]
        return -self.constants[(j, i)][k]

    def bracket_in_basis(self, vi: list[Expr], vj: list[Expr]) -> list[Expr]:
        """Bilinear extension of the table to coordinate vectors."""
        out = [Expr.zero() for _ in range(self.dim)]
        for i in range(self.dim):
            if vi[i].is_zero():
                continue
            for j in range(self.dim):
                if vj[j].is_zero() or i == j:
                    continue
                for k in range(self.dim):
                    ck = self.c(i, j, k)
                    if not ck.is_zero():
                        out[k] = out[k] + vi[i] * vj[j] * ck
        return out

    def nonzero_entries(self) -> list[tuple[int, int, str]]:
        rows = []
        for (i, j), vec in sorted(self.constants.items()):
            txt = _combo_text(vec, self.basis)
            if txt != "0":
                rows.append((i, j, txt))
        return rows


def _combo_text(vec: list[Expr], basis: list[VectorField]) -> str:
    parts = []
    for k, q in enumerate(vec):
        if q.is_zero():
            continue
        name = basis[k].name or f"X{k + 1}"
        qt = expr_text(q)
        if qt == "1":
            parts.append(f"+ {name}")
        elif qt == "-1":
            parts.append(f"- {name}")
        elif qt.startswith("-"):
            parts.append(f"- ({qt[1:]})*{name}" if " " in qt else f"- {qt[1:]}*{name}")
        else:
            parts.append(f"+ ({qt})*{name}" if " " in qt else f"+ {qt}*{name}")
    if not parts:
        return "0"
    out = " ".join(parts)
    return out[2:] if out.startswith("+ ") else "-" + out[2:] if out.startswith("- ") else out


def structure_constants(basis: list[VectorField]) -> StructureTable:
    """Pairwise brackets expressed exactly in the span of the basis;
    non-closing pairs are flagged with their residual field."""
    if not basis_independent(basis):
        raise DomainError("basis fields are linearly dependent")
    params = _param_atoms(basis)
    constants = {}
    non_closing = {}
    closed = True
    for i, j in combinations(range(len(basis)), 2):
        br = lie_bracket(basis[i], basis[j])
        alphas = in_span(br, basis, params)
        if alphas is None:
            closed = False
            non_closing[(i, j)] = br
            constants[(i, j)] = [Expr.zero()] * len(basis)
        else:
            constants[(i, j)] = alphas
    return StructureTable(basis=basis, constants=constants, closed=closed,
                          non_closing=non_closing)


def jacobi_check(table: StructureTable) -> bool:
    """Exact Jacobi identity on the structure constants."""
    if not table.closed:
        raise DomainError("Jacobi check needs a closed table")
    n = table.dim
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                for l in range(n):
                    total = Expr.zero()
                    for m in range(n):
                        total = total + table.c(i, j, m) * table.c(m, k, l)
                        total = total + table.c(j, k, m) * table.c(m, i, l)
                        total = total + table.c(k, i, m) * table.c(m, j, l)
                    if not total.is_zero():
                        return False
    return True


# ---------------------------------------------------------------------------
# structural signature
# ---------------------------------------------------------------------------

@dataclass
class AlgebraSignature:
    dimension: int
    derived_series: list[int]
    lower_central_series: list[int]
    center_dim: int
    abelian: bool
    nilpotent: bool
    solvable: bool
    abelian_complement_dim: int


def _specialize(q: Expr, point) -> Fraction:
    e = substitute(q, point)
    return e.as_rational()


def _span_rank(vectors: list[list[Fraction]], dim: int) -> list[dict[int, Fraction]]:
    rows = [{i: v for i, v in enumerate(vec) if v} for vec in vectors]
    pivot_rows, _ = rref([r for r in rows if r], dim)
    return pivot_rows


def algebra_signature(table: StructureTable) -> AlgebraSignature:
    """Derived/lower-central series via exact rank computations.  Parameter
    symbols are specialised at exact rational square points (c = 4 and
    c = 9/4); the runs must agree, which guards against accidental rank
    drops at special parameter values."""
    if not table.closed:
        raise DomainError("signature needs a closed table")
    params = _param_atoms(table.basis)
    sigs = []
    for base in (Fraction(4), Fraction(9, 4)):
        point = {}
        for a in params:
            if isinstance(a, Root):
                rq = Fraction(2) if base == 4 else Fraction(3, 2)
                point[a] = Expr.rational(rq)
                point[sym(a.of)] = Expr.rational(base)
            elif a not in point:
                point[a] = Expr.rational(base)
        sigs.append(_signature_at(table, point))
    if sigs[0] != sigs[1]:
        raise DomainError("signature differs between parameter specialisations")
    return sigs[0]


def _signature_at(table: StructureTable, point) -> AlgebraSignature:
    n = table.dim
    c = [[[_specialize(table.c(i, j, k), point) for k in range(n)]
          for j in range(n)] for i in range(n)]

    def bracket_vec(u, v):
        out = [Fraction(0)] * n
        for i in range(n):
            if not u[i]:
                continue
            for j in range(n):
                if not v[j] or i == j:
                    continue
                cij = c[i][j]
                for k in range(n):
                    if cij[k]:
                        out[k] += u[i] * v[j] * cij[k]
        return out

    def subspace_dim(rows) -> int:
        return len(_span_rank(rows, n))

    def basis_of(rows):
        pivot_rows = _span_rank(rows, n)
        return [[r.get(i, Fraction(0)) for i in range(n)] for r in pivot_rows]

    full = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def bracket_span(A, B):
        vecs = [bracket_vec(u, v) for u in A for v in B]
        return basis_of(vecs)

    derived = [n]
    cur = full
    while True:
        nxt = bracket_span(cur, cur)
        d = len(nxt)
        if d == derived[-1] or d == 0:
            derived.append(d)
            break
        derived.append(d)
        cur = nxt
    derived_series = derived[1:]

    lcs = [n]
    cur = full
    while True:
        nxt = bracket_span(full, cur)
        d = len(nxt)
        if d == lcs[-1] or d == 0:
            lcs.append(d)
            break
        lcs.append(d)
        cur = nxt
    lcs_series = lcs[1:]

    # center: vectors u with [u, e_j] = 0 for all j
    rows = []
    for j in range(n):
        for k in range(n):
            row = {}
            for i in range(n):
                val = c[i][j][k]
                if val:
                    row[i] = val
            if row:
                rows.append(row)
    center = len(nullspace(rows, n))

    # abelian direct-sum complement: central directions outside [g, g]
    der_basis = bracket_span(full, full)
    der_rows = [{i: v for i, v in enumerate(vec) if v} for vec in der_basis]
    cen_basis = nullspace(rows, n)
    joint = der_rows + cen_basis
    dim_sum = len(_span_rank(
        [[r.get(i, Fraction(0)) for i in range(n)] for r in joint], n))
    center_in_derived = len(der_rows) + center - dim_sum
    abelian_complement = center - center_in_derived

    abelian = derived_series[0] == 0
    nilpotent = lcs_series[-1] == 0
    solvable = derived_series[-1] == 0
    return AlgebraSignature(
        dimension=n,
        derived_series=derived_series,
        lower_central_series=lcs_series,
        center_dim=center,
        abelian=abelian,
        nilpotent=nilpotent,
        solvable=solvable,
        abelian_complement_dim=abelian_complement,
    )
