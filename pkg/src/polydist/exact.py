"""Exact rational scalars, vectors and linear solvers.

Scalars are :class:`fractions.Fraction` (always in lowest terms with a
positive denominator); vectors are tuples of fractions and matrices are
tuples of such rows. Everything here is a pure function of its arguments.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .errors import AffinelyDependent, InputError

Rational = Fraction
RatVector = tuple  # tuple[Fraction, ...]
RatMatrix = tuple  # tuple[RatVector, ...]


def rational(value) -> Fraction:
    """Coerce ints, fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected: every quantity in this package is exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(ch in text for ch in "eE.") and "/" not in text:
            raise InputError(f"not an exact rational string: {value!r}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational: {value!r}") from exc
    raise InputError(f"not an exact rational: {value!r} ({type(value).__name__})")


def vector(values: Iterable) -> RatVector:
    out = tuple(rational(v) for v in values)
    if not out:
        raise InputError("vectors must have positive dimension")
    return out


def matrix(rows: Iterable[Iterable]) -> RatMatrix:
    out = tuple(vector(r) for r in rows)
    if out and len({len(r) for r in out}) != 1:
        raise InputError("matrix rows must all have the same length")
    return out


def format_rational(x: Fraction) -> str:
    """Serialize as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    x = rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_vector(text: str) -> RatVector:
    """Parse a comma separated list such as ``"1/2,0,5"``."""
    return vector(part for part in text.split(",") if part.strip())


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def sub(u, v) -> RatVector:
    return tuple(a - b for a, b in zip(u, v))


def add(u, v) -> RatVector:
    return tuple(a + b for a, b in zip(u, v))


def scale(c, u) -> RatVector:
    return tuple(c * a for a in u)


def midpoint(u, v) -> RatVector:
    return tuple((a + b) / 2 for a, b in zip(u, v))


def norm2(u) -> Fraction:
    return dot(u, u)


def integer_row(coeffs: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a rational row by the lcm of its denominators (a positive factor)."""
    m = 1
    for c in coeffs:
        m = lcm(m, c.denominator)
    return tuple(int(c * m) for c in coeffs)


def _bareiss_forward(aug: list[list[int]], ncols: int) -> bool:
    """In-place fraction-free elimination of the first ``ncols`` columns.

    Returns False as soon as a column has no pivot (singular leading block).
    Each division by the previous pivot is exact.
    """
    n = len(aug)
    prev = 1
    for k in range(ncols):
        piv = next((i for i in range(k, n) if aug[i][k] != 0), None)
        if piv is None:
            return False
        if piv != k:
            aug[k], aug[piv] = aug[piv], aug[k]
        pk = aug[k][k]
        rowk = aug[k]
        for i in range(k + 1, n):
            rowi = aug[i]
            f = rowi[k]
            for j in range(k + 1, len(rowi)):
                rowi[j] = (pk * rowi[j] - f * rowk[j]) // prev
            rowi[k] = 0
        prev = pk
    return True


def solve_square(M: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]):
    """Exact solution of ``M x = rhs``, or ``None`` when M is singular."""
    n = len(M)
    if any(len(row) != n for row in M) or len(rhs) != n:
        raise InputError("solve_square needs an n x n matrix and a length-n rhs")
    aug = [list(integer_row([rational(a) for a in row] + [rational(r)])) for row, r in zip(M, rhs)]
    if not _bareiss_forward(aug, n):
        return None
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = Fraction(aug[i][n])
        for j in range(i + 1, n):
            s -= aug[i][j] * x[j]
        x[i] = s / aug[i][i]
    return tuple(x)


def determinant(M: Sequence[Sequence[Fraction]]) -> Fraction:
    n = len(M)
    if n == 0:
        return Fraction(1)
    scales = []
    rows = []
    for row in M:
        fr = [rational(a) for a in row]
        m = 1
        for c in fr:
            m = lcm(m, c.denominator)
        scales.append(m)
        rows.append([int(c * m) for c in fr])
    sign = 1
    prev = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if rows[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            rows[k], rows[piv] = rows[piv], rows[k]
            sign = -sign
        pk = rows[k][k]
        for i in range(k + 1, n):
            f = rows[i][k]
            for j in range(k + 1, n):
                rows[i][j] = (pk * rows[i][j] - f * rows[k][j]) // prev
            rows[i][k] = 0
        prev = pk
    denom = 1
    for s in scales:
        denom *= s
    return Fraction(sign * rows[n - 1][n - 1], denom)


def rref(rows: Sequence[Sequence[Fraction]]):
    """Reduced row echelon form; returns ``(rows, pivot_columns)``."""
    A = [[rational(a) for a in r] for r in rows]
    if not A:
        return [], []
    ncols = len(A[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        p = A[r][c]
        A[r] = [a / p for a in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> list[RatVector]:
    """A basis of ``{x : rows @ x = 0}``, one vector per free column."""
    if ncols is None:
        ncols = len(rows[0])
    R, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(R, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def normalize_first_nonzero(w: Sequence[Fraction], alpha: Fraction):
    lead = next(a for a in w if a != 0)
    return tuple(a / lead for a in w), alpha / lead


def hyperplane_through_points(points: Sequence[Sequence[Fraction]]):
    """The hyperplane ``w . x = alpha`` through d affinely independent points in d-space.

    The result is scaled so that the first nonzero entry of ``w`` is 1.
    """
    pts = [vector(p) for p in points]
    if not pts:
        raise AffinelyDependent("need at least one point")
    d = len(pts[0])
    if len(pts) != d or any(len(p) != d for p in pts):
        raise AffinelyDependent(f"need exactly {d} points in {d}-space")
    # unknowns (w_1..w_d, alpha): w . p - alpha = 0
    null = nullspace([p + (Fraction(-1),) for p in pts], d + 1)
    if len(null) != 1:
        raise AffinelyDependent("points do not determine a unique hyperplane")
    sol = null[0]
    w, alpha = sol[:d], sol[d]
    if all(a == 0 for a in w):
        raise AffinelyDependent("degenerate hyperplane")
    return normalize_first_nonzero(w, alpha)


def _int_bits(n: int) -> int:
    # 1 + ceil(log2(|n| + 1)); the ceiling equals the bit length of |n|
    return 1 + abs(n).bit_length()


def encoding_length(x) -> int:
    """Bit size: integers n cost 1 + ceil(log2(|n|+1)); rationals add numerator and denominator."""
    if isinstance(x, (Fraction, int)) and not isinstance(x, bool):
        q = Fraction(x)
        return _int_bits(q.numerator) + _int_bits(q.denominator)
    if isinstance(x, str):
        return encoding_length(rational(x))
    return sum(encoding_length(item) for item in x)
