"""Small exact linear algebra over the rationals.

Matrices are tuples of row tuples.  Entries are ints or Fractions; results
are normalized so that integral Fractions come back as plain ints, which
keeps hashing and printing tidy.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Vector = tuple
Matrix = tuple


def norm(x):
    """Collapse an integral Fraction to int."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def vec(xs) -> Vector:
    return tuple(norm(x) for x in xs)


def add(u: Sequence, v: Sequence) -> Vector:
    return tuple(norm(a + b) for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> Vector:
    return tuple(norm(a - b) for a, b in zip(u, v))


def scale(c, u: Sequence) -> Vector:
    return tuple(norm(c * a) for a in u)


def dot(u: Sequence, v: Sequence):
    return norm(sum((a * b for a, b in zip(u, v)), 0))


def mat_vec(m: Matrix, v: Sequence) -> Vector:
    return tuple(norm(sum((a * b for a, b in zip(row, v)), 0)) for row in m)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(norm(sum((x * y for x, y in zip(row, col)), 0)) for col in cols) for row in a)


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m))


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def inverse(m: Matrix) -> Matrix:
    """Gauss-Jordan inverse; raises ValueError on a singular matrix."""
    n = len(m)
    rows = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular matrix")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        p = rows[col][col]
        rows[col] = [x / p for x in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return tuple(tuple(norm(x) for x in row[n:]) for row in rows)


def is_integral(v: Sequence) -> bool:
    return all(Fraction(x).denominator == 1 for x in v)


def fmt(x) -> str:
    """Render a rational as 'p/q' (or 'p' when integral)."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse 'p/q', an integer, or a finite decimal without going through float."""
    text = text.strip()
    if not text:
        raise ValueError("empty rational")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc
