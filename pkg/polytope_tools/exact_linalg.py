"""
Exact linear algebra module for Polydist

This module provides the rational scalars, vectors and matrices that every
geometric routine in the package works with, along with exact solvers:

1. Rationals are fractions.Fraction (always in lowest terms, positive denominator)
2. Vectors and matrices are plain tuples, so every value is immutable
3. Square systems are solved by fraction-free (Bareiss) elimination
4. Ranks and null spaces use exact Gauss-Jordan elimination over Fraction
"""

from fractions import Fraction
from math import lcm
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from .errors import AffinelyDependent, MalformedInput

Rational = Fraction
RatVector = Tuple[Fraction, ...]
RatMatrix = Tuple[RatVector, ...]
RationalLike = Union[Fraction, int, str]

ZERO = Fraction(0)
ONE = Fraction(1)


def to_rational(value: RationalLike) -> Fraction:
    """
    Convert an int, Fraction or "p/q" string to a Fraction

    Floats are refused: there is no inexact mode.
    """
    if isinstance(value, bool):
        raise MalformedInput(f"boolean {value!r} is not a rational")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedInput(f"cannot parse rational {value!r}: {exc}") from exc
    raise MalformedInput(f"cannot use {type(value).__name__} value {value!r} as an exact rational")


def vector(values: Iterable[RationalLike]) -> RatVector:
    return tuple(to_rational(v) for v in values)


def matrix(rows: Iterable[Iterable[RationalLike]]) -> RatMatrix:
    """Build a rectangular RatMatrix, rejecting ragged input"""
    result = tuple(vector(row) for row in rows)
    if result and any(len(row) != len(result[0]) for row in result):
        raise MalformedInput("matrix rows have different lengths")
    return result


def format_rational(value: Fraction) -> str:
    """Serialize as "p/q", or "p" when the denominator is 1"""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_vector(values: Sequence[Fraction]) -> List[str]:
    return [format_rational(v) for v in values]


def parse_vector(text: str) -> RatVector:
    """Parse a comma-separated list such as "1/2,0,1" """
    parts = [part for part in text.split(",") if part.strip()]
    if not parts:
        raise MalformedInput("empty vector")
    return vector(parts)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise MalformedInput(f"dimension mismatch: {len(u)} vs {len(v)}")
    total = ZERO
    for a, b in zip(u, v):
        if a and b:
            total += a * b
    return total


def add(u: Sequence[Fraction], v: Sequence[Fraction]) -> RatVector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence[Fraction], v: Sequence[Fraction]) -> RatVector:
    return tuple(a - b for a, b in zip(u, v))


def scale(u: Sequence[Fraction], factor: Fraction) -> RatVector:
    return tuple(a * factor for a in u)


def negate(u: Sequence[Fraction]) -> RatVector:
    return tuple(-a for a in u)


def midpoint(u: Sequence[Fraction], v: Sequence[Fraction]) -> RatVector:
    return tuple((a + b) / 2 for a, b in zip(u, v))


def squared_norm(u: Sequence[Fraction]) -> Fraction:
    return dot(u, u)


def squared_distance(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return squared_norm(sub(u, v))


def unit_vector(dim: int, index: int) -> RatVector:
    return tuple(ONE if i == index else ZERO for i in range(dim))


def transpose(rows: Sequence[Sequence[Fraction]]) -> RatMatrix:
    return tuple(zip(*rows)) if rows else ()


# Fraction-free elimination

def _integer_rows(rows: Sequence[Sequence[Fraction]]) -> List[List[int]]:
    """Scale each row by the lcm of its denominators so every entry is an integer"""
    cleared = []
    for row in rows:
        common = lcm(*(entry.denominator for entry in row)) if row else 1
        cleared.append([entry.numerator * (common // entry.denominator) for entry in row])
    return cleared


def _bareiss_forward(rows: List[List[int]], n: int) -> bool:
    """
    Bareiss elimination on the leading n columns, in place

    Returns:
        False when the leading n x n block is singular
    """
    previous = 1
    for k in range(n):
        pivot_row = next((i for i in range(k, n) if rows[i][k] != 0), None)
        if pivot_row is None:
            return False
        if pivot_row != k:
            rows[k], rows[pivot_row] = rows[pivot_row], rows[k]
        pivot = rows[k][k]
        row_k = rows[k]
        for i in range(k + 1, n):
            row_i = rows[i]
            factor = row_i[k]
            for j in range(k + 1, len(row_i)):
                # exact: Sylvester's identity guarantees divisibility
                row_i[j] = (row_i[j] * pivot - factor * row_k[j]) // previous
            row_i[k] = 0
        previous = pivot
    return True


def _back_substitute(rows: List[List[int]], n: int, column: int) -> RatVector:
    solution: List[Fraction] = [ZERO] * n
    for i in range(n - 1, -1, -1):
        acc = Fraction(rows[i][column])
        row = rows[i]
        for j in range(i + 1, n):
            if row[j]:
                acc -= row[j] * solution[j]
        solution[i] = acc / row[i]
    return tuple(solution)


def _solve_columns(M: Sequence[Sequence[Fraction]],
                   columns: Sequence[Sequence[Fraction]]) -> Optional[List[RatVector]]:
    n = len(M)
    if any(len(row) != n for row in M):
        raise MalformedInput("solve_square needs a square matrix")
    if any(len(column) != n for column in columns):
        raise MalformedInput("right-hand side has the wrong length")
    augmented = [list(M[i]) + [column[i] for column in columns] for i in range(n)]
    rows = _integer_rows(augmented)
    if not _bareiss_forward(rows, n):
        return None
    return [_back_substitute(rows, n, n + c) for c in range(len(columns))]


def solve_square(M: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Optional[RatVector]:
    """
    Solve M x = rhs exactly

    Args:
        M: Square matrix
        rhs: Right-hand side of matching length

    Returns:
        The unique solution, or None when M is singular
    """
    if not M:
        return ()
    solutions = _solve_columns(M, [rhs])
    return solutions[0] if solutions is not None else None


def inverse(M: Sequence[Sequence[Fraction]]) -> Optional[RatMatrix]:
    """Exact inverse, or None when M is singular"""
    n = len(M)
    identity = [unit_vector(n, i) for i in range(n)]
    columns = _solve_columns(M, identity)
    if columns is None:
        return None
    return transpose(columns)


# Gauss-Jordan over Fraction, for rank and null spaces

def _reduced_row_echelon(rows: Sequence[Sequence[Fraction]]) -> Tuple[List[List[Fraction]], List[int]]:
    work = [list(row) for row in rows]
    pivots: List[int] = []
    if not work:
        return work, pivots
    width = len(work[0])
    r = 0
    for c in range(width):
        pivot_row = next((i for i in range(r, len(work)) if work[i][c] != 0), None)
        if pivot_row is None:
            continue
        work[r], work[pivot_row] = work[pivot_row], work[r]
        pivot = work[r][c]
        work[r] = [entry / pivot for entry in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c] != 0:
                factor = work[i][c]
                work[i] = [a - factor * b for a, b in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return work, pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(_reduced_row_echelon(rows)[1])


def nullspace(rows: Sequence[Sequence[Fraction]], width: int) -> List[RatVector]:
    """
    Basis of {x : rows . x = 0}

    Args:
        rows: Matrix rows, each of length width
        width: Number of unknowns (needed when rows is empty)

    Returns:
        One vector per free column, with a 1 in that column
    """
    reduced, pivots = _reduced_row_echelon(rows)
    free = [c for c in range(width) if c not in pivots]
    basis = []
    for f in free:
        vec = [ZERO] * width
        vec[f] = ONE
        for r, c in enumerate(pivots):
            vec[c] = -reduced[r][f]
        basis.append(tuple(vec))
    return basis


def hyperplane_through_points(points: Sequence[Sequence[Fraction]]) -> Tuple[RatVector, Fraction]:
    """
    Unique hyperplane w.x = alpha through the given points

    The normal is scaled so that its first nonzero entry is 1.

    Args:
        points: d affinely independent points in d-space

    Returns:
        (w, alpha)

    Raises:
        AffinelyDependent: when the points do not pin down a single hyperplane
    """
    if not points:
        raise AffinelyDependent("no points given")
    d = len(points[0])
    if any(len(p) != d for p in points):
        raise MalformedInput("points have different dimensions")
    rows = [tuple(p) + (-ONE,) for p in points]
    basis = nullspace(rows, d + 1)
    if len(basis) != 1:
        raise AffinelyDependent(f"{len(points)} points span no unique hyperplane in dimension {d}",
                                points=[format_vector(p) for p in points])
    solution = basis[0]
    normal, offset = solution[:d], solution[d]
    lead = next(x for x in normal if x != 0)
    return tuple(x / lead for x in normal), offset / lead


# Encoding length

def _integer_size(n: int) -> int:
    # 1 + ceil(log2(|n| + 1)) is exactly 1 + bit_length(|n|)
    return 1 + abs(n).bit_length()


def encoding_length(value: Union[Fraction, int, Sequence]) -> int:
    """
    Bit length of a rational, vector or matrix

    An integer n costs 1 + ceil(log2(|n|+1)) bits; a rational p/q costs the sum
    of its parts; containers cost the sum of their entries.
    """
    if isinstance(value, Fraction):
        return _integer_size(value.numerator) + _integer_size(value.denominator)
    if isinstance(value, int) and not isinstance(value, bool):
        return _integer_size(value) + _integer_size(1)
    return sum(encoding_length(entry) for entry in value)
