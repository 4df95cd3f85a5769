"""Exact dense linear algebra over the rationals.

Matrices are row-major lists of lists of `Fraction`; vectors are lists of
`Fraction`.  Everything here is small and dense (the systems in this repo
top out around 65x65), so plain Gaussian elimination with partial pivoting
is the right tool: deterministic, exact, and no spurious singularity
reports.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence

ExactVector = List[Fraction]
ExactMatrix = List[List[Fraction]]


class SingularSystemError(ValueError):
    """Raised when an exact linear solve meets a singular matrix."""


def as_vector(values: Sequence[Fraction | int]) -> ExactVector:
    return [Fraction(v) for v in values]

def as_matrix(rows: Sequence[Sequence[Fraction | int]]) -> ExactMatrix:
    matrix = [[Fraction(v) for v in row] for row in rows]
    if matrix and any(len(row) != len(matrix[0]) for row in matrix):
        raise ValueError("ragged rows in matrix")
    return matrix

def identity(n: int) -> ExactMatrix:
    return [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]

def zeros_matrix(rows: int, cols: int) -> ExactMatrix:
    return [[Fraction(0)] * cols for _ in range(rows)]

def zeros_vector(n: int) -> ExactVector:
    return [Fraction(0)] * n


def matvec(matrix: ExactMatrix, vector: Sequence[Fraction | int]) -> ExactVector:
    if matrix and len(matrix[0]) != len(vector):
        raise ValueError(f"shape mismatch: matrix is {len(matrix)}x{len(matrix[0])}, vector has {len(vector)}")
    xs = as_vector(vector)
    return [sum((w * x for w, x in zip(row, xs) if w), Fraction(0)) for row in matrix]


def matmul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    if a and b and len(a[0]) != len(b):
        raise ValueError(f"shape mismatch: {len(a)}x{len(a[0])} times {len(b)}x{len(b[0])}")
    cols = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col) if x), Fraction(0)) for col in cols] for row in a]


def transpose(matrix: ExactMatrix) -> ExactMatrix:
    return [list(col) for col in zip(*matrix)]


def solve_linear_exact_multi(matrix: ExactMatrix, rhs_columns: ExactMatrix) -> ExactMatrix:
    """Solve M X = R exactly for several right-hand sides at once.

    `rhs_columns` is an n x r matrix whose columns are the right-hand sides;
    the result has the same shape.  One elimination is shared by all
    columns.  Pivoting picks the largest absolute rational in the column,
    which keeps the procedure deterministic.
    """
    n = len(matrix)
    if n == 0:
        return []
    if any(len(row) != n for row in matrix):
        raise ValueError("matrix must be square")
    if len(rhs_columns) != n:
        raise ValueError(f"right-hand side has {len(rhs_columns)} rows, expected {n}")
    r = len(rhs_columns[0]) if rhs_columns[0] is not None else 0
    work = [list(row) + list(rhs) for row, rhs in zip(matrix, rhs_columns)]
    width = n + r

    for col in range(n):
        pivot_row = max(range(col, n), key=lambda i: abs(work[i][col]))
        if work[pivot_row][col] == 0:
            raise SingularSystemError("singular system")
        if pivot_row != col:
            work[col], work[pivot_row] = work[pivot_row], work[col]
        pivot = work[col][col]
        upper = work[col]
        for i in range(col + 1, n):
            factor = work[i][col]
            if factor == 0:
                continue
            factor /= pivot
            row = work[i]
            row[col] = Fraction(0)
            for j in range(col + 1, width):
                if upper[j]:
                    row[j] -= factor * upper[j]

    solution = zeros_matrix(n, r)
    for i in range(n - 1, -1, -1):
        row = work[i]
        for j in range(r):
            acc = row[n + j]
            for k in range(i + 1, n):
                if row[k]:
                    acc -= row[k] * solution[k][j]
            solution[i][j] = acc / row[i]
    return solution


def solve_linear_exact(matrix: ExactMatrix, vector: Sequence[Fraction | int]) -> ExactVector:
    """Solve M x = v exactly; raises SingularSystemError if M is singular."""
    if len(vector) != len(matrix):
        raise ValueError(f"vector has length {len(vector)}, expected {len(matrix)}")
    columns = [[Fraction(v)] for v in vector]
    return [row[0] for row in solve_linear_exact_multi(matrix, columns)]


def invert_exact(matrix: ExactMatrix) -> ExactMatrix:
    """Exact inverse via one elimination with n right-hand sides."""
    return solve_linear_exact_multi(matrix, identity(len(matrix)))
