"""Exact rational linear algebra: square solves and a phase-1 simplex.

The simplex decides feasibility of {x >= 0 : A x = b} over Fractions and
always returns a verifiable witness: a feasible point, or a Farkas vector
y with yA <= 0 componentwise and y.b > 0.  Bland's rule makes pivoting
deterministic and cycle-free; problem sizes here are tiny (<= 64 columns,
<= ~40 rows), so exactness is cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

Row = list[Fraction]


def solve_square(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction] | None:
    """Solve a square system exactly; None if the matrix is singular."""
    n = len(rhs)
    a = [[Fraction(v) for v in row] + [Fraction(rhs[i])] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return None
        a[col], a[pivot] = a[pivot], a[col]
        inv = a[col][col]
        a[col] = [v / inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


@dataclass(frozen=True)
class LPFeasible:
    x: tuple[Fraction, ...]

    @property
    def feasible(self) -> bool:
        return True


@dataclass(frozen=True)
class LPInfeasible:
    farkas: tuple[Fraction, ...]

    @property
    def feasible(self) -> bool:
        return False


def solve_equality_feasibility(
    matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
) -> LPFeasible | LPInfeasible:
    """Decide {x >= 0 : A x = b} by phase-1 simplex with Bland's rule."""
    m = len(rhs)
    n = len(matrix[0]) if m else 0
    signs = [Fraction(1)] * m
    tableau: list[Row] = []
    b = []
    for i in range(m):
        row = [Fraction(v) for v in matrix[i]]
        bi = Fraction(rhs[i])
        if bi < 0:
            row = [-v for v in row]
            bi = -bi
            signs[i] = Fraction(-1)
        art = [Fraction(1 if j == i else 0) for j in range(m)]
        tableau.append(row + art + [bi])
    ncols = n + m

    basis = [n + i for i in range(m)]
    # Reduced costs for min sum(artificials); artificials are the basis.
    reduced = [Fraction(0)] * (ncols + 1)
    for j in range(ncols):
        cj = Fraction(1) if j >= n else Fraction(0)
        reduced[j] = cj - sum(tableau[i][j] for i in range(m))
    reduced[ncols] = -sum(tableau[i][ncols] for i in range(m))  # minus objective

    while True:
        enter = next((j for j in range(ncols) if reduced[j] < 0), None)
        if enter is None:
            break
        # Bland: among minimal-ratio rows pick the one with smallest basis index.
        best = None
        for i in range(m):
            coeff = tableau[i][enter]
            if coeff > 0:
                ratio = tableau[i][ncols] / coeff
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < best[1]):
                    best = (ratio, basis[i], i)
        if best is None:
            raise RuntimeError("phase-1 objective unbounded; inconsistent tableau")
        leave = best[2]
        pivot = tableau[leave][enter]
        tableau[leave] = [v / pivot for v in tableau[leave]]
        for i in range(m):
            if i != leave and tableau[i][enter] != 0:
                f = tableau[i][enter]
                tableau[i] = [v - f * w for v, w in zip(tableau[i], tableau[leave])]
        if reduced[enter] != 0:
            f = reduced[enter]
            reduced = [v - f * w for v, w in zip(reduced, tableau[leave])]
        basis[leave] = enter

    objective = -reduced[ncols]
    if objective == 0:
        x = [Fraction(0)] * n
        for i, j in enumerate(basis):
            if j < n:
                x[j] = tableau[i][ncols]
        return LPFeasible(tuple(x))

    # y_i = 1 - reduced cost of artificial i; undo the row sign flips.
    y = [signs[i] * (Fraction(1) - reduced[n + i]) for i in range(m)]
    return LPInfeasible(tuple(y))


def verify_farkas(
    matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction], y: Sequence[Fraction]
) -> bool:
    """Check yA <= 0 componentwise and y.b > 0 by direct arithmetic."""
    m = len(rhs)
    if len(y) != m:
        return False
    n = len(matrix[0]) if m else 0
    for j in range(n):
        if sum(y[i] * matrix[i][j] for i in range(m)) > 0:
            return False
    return sum(y[i] * rhs[i] for i in range(m)) > 0
