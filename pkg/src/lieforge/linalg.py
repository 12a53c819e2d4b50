"""Exact rational linear algebra on sparse rows.

Rows are dicts {column index: Fraction}.  Reduction is Gauss-Jordan with
pivots chosen in declared column order and normalised to 1, so echelon forms,
nullspace bases, and solve results are deterministic.
"""

from __future__ import annotations

from fractions import Fraction

__all__ = ["rref", "nullspace", "rank", "solve_exact"]


def _scale(row: dict[int, Fraction], q: Fraction) -> dict[int, Fraction]:
    return {c: v * q for c, v in row.items()}


def _axpy(dst: dict[int, Fraction], src: dict[int, Fraction], q: Fraction) -> None:
    for c, v in src.items():
        s = dst.get(c, Fraction(0)) + q * v
        if s:
            dst[c] = s
        else:
            dst.pop(c, None)


def rref(rows: list[dict[int, Fraction]], ncols: int):
    """Reduced row-echelon form.  Returns (pivot_rows, pivots) where
    pivot_rows[i] has a 1 in column pivots[i] and zeros in other pivot
    columns."""
    pivot_rows: list[dict[int, Fraction]] = []
    pivots: list[int] = []

    def reduce_row(row: dict[int, Fraction]) -> dict[int, Fraction]:
        row = dict(row)
        for prow, pc in zip(pivot_rows, pivots):
            v = row.get(pc)
            if v:
                _axpy(row, prow, -v)
        return row

    # dedupe incoming rows, smallest support first for cheaper elimination
    seen = set()
    todo = []
    for row in rows:
        key = tuple(sorted((c, v.numerator, v.denominator) for c, v in row.items()))
        if key and key not in seen:
            seen.add(key)
            todo.append(row)
    todo.sort(key=len)

    for row in todo:
        row = reduce_row(row)
        if not row:
            continue
        pc = min(row)
        row = _scale(row, 1 / row[pc])
        for prow in pivot_rows:
            v = prow.get(pc)
            if v:
                _axpy(prow, row, -v)
        pivot_rows.append(row)
        pivots.append(pc)

    order = sorted(range(len(pivots)), key=lambda i: pivots[i])
    return [pivot_rows[i] for i in order], [pivots[i] for i in order]


def rank(rows: list[dict[int, Fraction]], ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: list[dict[int, Fraction]], ncols: int) -> list[dict[int, Fraction]]:
    """Canonical nullspace basis: one vector per free column, with a 1 in the
    free column and pivot columns filled in; ordered by free column index."""
    pivot_rows, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for j in range(ncols):
        if j in pivot_set:
            continue
        vec: dict[int, Fraction] = {j: Fraction(1)}
        for prow, pc in zip(pivot_rows, pivots):
            v = prow.get(j)
            if v:
                vec[pc] = -v
        basis.append(vec)
    return basis


def solve_exact(cols: list[dict[int, Fraction]], target: dict[int, Fraction]):
    """Solve sum_k x_k * cols[k] = target exactly.

    Column vectors and target are sparse over an arbitrary row index set.
    Returns the coefficient list, or None when the target is outside the
    span.  The solution with free variables set to zero is returned."""
    nc = len(cols)
    rows_idx: set[int] = set(target)
    for col in cols:
        rows_idx.update(col)
    system = []
    for r in sorted(rows_idx):
        row = {k: col[r] for k, col in enumerate(cols) if r in col}
        row[nc] = -target.get(r, Fraction(0))
        if row:
            system.append(row)
    pivot_rows, pivots = rref(system, nc + 1)
    if nc in pivots:
        return None  # inconsistent
    x = [Fraction(0)] * nc
    for prow, pc in zip(pivot_rows, pivots):
        x[pc] = -prow.get(nc, Fraction(0))
    return x
