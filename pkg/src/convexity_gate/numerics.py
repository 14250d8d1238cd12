"""Scalar, vector and matrix arithmetic in two modes: exact rational and binary64.

Every value in the library lives in exactly one arithmetic mode.  Exact mode
stores :class:`fractions.Fraction` entries and all predicates (rank, span
membership, stochastic validation) are decided with zero tolerance.  Float
mode stores plain ``float`` entries and decides the same predicates against
the thresholds in :class:`ToleranceConfig`.  Mixing the two modes in one
computation raises :class:`ModeMismatchError` instead of silently coercing,
because "lies in the column span" is a zero-tolerance statement that a silent
downgrade to floats would quietly weaken.

Plain ``int`` inputs are accepted in either mode and coerced on construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

Scalar = Union[Fraction, float]

EXACT = "exact"
FLOAT = "float"


class NumericsError(ValueError):
    """Base class for errors raised by this package."""


class ModeMismatchError(NumericsError):
    """Exact and float values were combined in one computation."""


def infer_mode(values: Iterable) -> str:
    """Return the arithmetic mode of a collection of raw entries.

    ``Fraction``/``int`` entries give exact mode, ``float`` entries give
    float mode.  All-int input defaults to exact (rationals are the default
    whenever the input permits them).  A mix of ``Fraction`` and ``float``
    raises :class:`ModeMismatchError`.
    """
    saw_fraction = saw_float = False
    for v in values:
        if isinstance(v, bool):
            raise NumericsError(f"bool is not a scalar: {v!r}")
        if isinstance(v, Fraction):
            saw_fraction = True
        elif isinstance(v, float):
            saw_float = True
        elif not isinstance(v, int):
            raise NumericsError(f"unsupported scalar type: {type(v).__name__}")
    if saw_fraction and saw_float:
        raise ModeMismatchError("cannot mix exact rationals and floats in one value")
    return FLOAT if saw_float else EXACT


def coerce(value, mode: str) -> Scalar:
    """Coerce one raw entry into the given mode, rejecting cross-mode input."""
    if isinstance(value, bool):
        raise NumericsError(f"bool is not a scalar: {value!r}")
    if mode == EXACT:
        if isinstance(value, float):
            raise ModeMismatchError("float entry in an exact-mode value")
        return Fraction(value)
    if mode == FLOAT:
        if isinstance(value, Fraction):
            raise ModeMismatchError("rational entry in a float-mode value")
        return float(value)
    raise NumericsError(f"unknown mode: {mode!r}")


def check_same_mode(*modes: str) -> str:
    first = modes[0]
    for m in modes[1:]:
        if m != first:
            raise ModeMismatchError(f"mode mismatch: {first} vs {m}")
    return first


def parse_scalar(text) -> Scalar:
    """Parse a JSON-ish scalar: ''p/q'' strings are exact, numbers are float.

    Integers (JSON numbers without a fractional part) stay exact so that
    matrices written as plain integer arrays validate exactly.
    """
    if isinstance(text, str):
        return Fraction(text)
    if isinstance(text, bool):
        raise NumericsError(f"bool is not a scalar: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        return float(text)
    raise NumericsError(f"cannot parse scalar from {text!r}")


def format_scalar(value: Scalar):
    """Inverse of :func:`parse_scalar`: Fractions become strings, floats stay."""
    if isinstance(value, Fraction):
        return str(value)
    return float(value)


@dataclass(frozen=True)
class ToleranceConfig:
    """Thresholds used by float-mode predicates; exact mode ignores them all."""

    rank_tol: float = 1e-9
    residual_tol: float = 1e-9
    gap_tol: float = 1e-12
    stochastic_tol: float = 1e-12

    def __post_init__(self):
        for name in ("rank_tol", "residual_tol", "gap_tol", "stochastic_tol"):
            if getattr(self, name) < 0:
                raise NumericsError(f"{name} must be nonnegative")


DEFAULT_TOL = ToleranceConfig()


@dataclass(frozen=True)
class Vec:
    """Immutable vector whose entries all share one arithmetic mode."""

    entries: tuple
    mode: str

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> Scalar:
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def to_float(self) -> "Vec":
        return Vec(tuple(float(e) for e in self.entries), FLOAT)

    def norm2_sq(self) -> Scalar:
        return sum(e * e for e in self.entries)

    def norm2(self) -> float:
        return math.sqrt(float(self.norm2_sq()))

    def sum(self) -> Scalar:
        zero = Fraction(0) if self.mode == EXACT else 0.0
        return sum(self.entries, zero)


def vec(values: Sequence, mode: str | None = None) -> Vec:
    values = list(values)
    if not values:
        raise NumericsError("empty vector")
    if mode is None:
        mode = infer_mode(values)
    return Vec(tuple(coerce(v, mode) for v in values), mode)


def basis_vector(i: int, n: int, mode: str = EXACT) -> Vec:
    """Standard basis vector with a 1 in (1-based) position ``i``."""
    if not 1 <= i <= n:
        raise NumericsError(f"basis index {i} out of range 1..{n}")
    return vec([1 if j == i else 0 for j in range(1, n + 1)], mode)


@dataclass(frozen=True)
class Mat:
    """Immutable row-major matrix; all entries share one arithmetic mode."""

    rows: tuple  # tuple of row tuples
    mode: str

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0])

    def entry(self, i: int, j: int) -> Scalar:
        """Entry at 1-based position (i, j)."""
        return self.rows[i - 1][j - 1]

    def row(self, i: int) -> Vec:
        return Vec(self.rows[i - 1], self.mode)

    def col(self, j: int) -> Vec:
        return Vec(tuple(r[j - 1] for r in self.rows), self.mode)

    def to_float(self) -> "Mat":
        return Mat(tuple(tuple(float(e) for e in r) for r in self.rows), FLOAT)

    def transpose(self) -> "Mat":
        return Mat(tuple(zip(*self.rows)), self.mode)


def mat(rows: Sequence[Sequence], mode: str | None = None) -> Mat:
    converted = [list(r) for r in rows]
    if not converted or not converted[0]:
        raise NumericsError("empty matrix")
    width = len(converted[0])
    for r in converted:
        if len(r) != width:
            raise NumericsError("inconsistent row width")
    if mode is None:
        mode = infer_mode(v for r in converted for v in r)
    return Mat(tuple(tuple(coerce(v, mode) for v in r) for r in converted), mode)


def identity(n: int, mode: str = EXACT) -> Mat:
    return mat([[1 if i == j else 0 for j in range(n)] for i in range(n)], mode)


def mat_vec(m: Mat, x: Vec) -> Vec:
    check_same_mode(m.mode, x.mode)
    if m.ncols != len(x):
        raise NumericsError(f"dimension mismatch: {m.nrows}x{m.ncols} @ {len(x)}")
    return Vec(tuple(sum(a * b for a, b in zip(r, x.entries)) for r in m.rows), m.mode)


def mat_mul(a: Mat, b: Mat) -> Mat:
    check_same_mode(a.mode, b.mode)
    if a.ncols != b.nrows:
        raise NumericsError("dimension mismatch in matrix product")
    bt = b.transpose()
    rows = tuple(
        tuple(sum(x * y for x, y in zip(r, c)) for c in bt.rows) for r in a.rows
    )
    return Mat(rows, a.mode)


def vec_sub(a: Vec, b: Vec) -> Vec:
    check_same_mode(a.mode, b.mode)
    if len(a) != len(b):
        raise NumericsError("length mismatch")
    return Vec(tuple(x - y for x, y in zip(a.entries, b.entries)), a.mode)


def augment(m: Mat, v: Vec) -> Mat:
    """Matrix [m | v]; used for the span-membership rank characterization."""
    check_same_mode(m.mode, v.mode)
    if m.nrows != len(v):
        raise NumericsError("length mismatch in augment")
    return Mat(tuple(r + (e,) for r, e in zip(m.rows, v.entries)), m.mode)


# ---------------------------------------------------------------------------
# Rank
# ---------------------------------------------------------------------------

def rank(m: Mat, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """Rank of ``m``: exact fraction-free elimination, or float pivot counting.

    Exact mode clears denominators row by row (rank-invariant) and runs
    Bareiss one-step fraction-free elimination over the integers, so every
    intermediate value is an integer and the answer is exact.  Float mode
    runs Gaussian elimination with partial pivoting and counts pivots with
    magnitude above ``tol.rank_tol``.
    """
    if m.mode == EXACT:
        return _rank_exact(m)
    return _rank_float(m, tol.rank_tol)


def _rank_exact(m: Mat) -> int:
    # Clear denominators per row; scaling a row by a nonzero constant keeps rank.
    a: list[list[int]] = []
    for r in m.rows:
        lcm = 1
        for e in r:
            lcm = lcm * e.denominator // math.gcd(lcm, e.denominator)
        a.append([int(e * lcm) for e in r])
    nr, nc = len(a), len(a[0])
    prev_pivot = 1
    rk = 0
    col = 0
    while rk < nr and col < nc:
        pivot_row = next((i for i in range(rk, nr) if a[i][col] != 0), None)
        if pivot_row is None:
            col += 1
            continue
        a[rk], a[pivot_row] = a[pivot_row], a[rk]
        pivot = a[rk][col]
        for i in range(rk + 1, nr):
            for j in range(col + 1, nc):
                a[i][j] = (pivot * a[i][j] - a[i][col] * a[rk][j]) // prev_pivot
            a[i][col] = 0
        prev_pivot = pivot
        rk += 1
        col += 1
    return rk


def _rank_float(m: Mat, rank_tol: float) -> int:
    a = np.array(m.rows, dtype=float)
    nr, nc = a.shape
    rk = 0
    col = 0
    while rk < nr and col < nc:
        pivot_row = rk + int(np.argmax(np.abs(a[rk:, col])))
        if abs(a[pivot_row, col]) <= rank_tol:
            col += 1
            continue
        a[[rk, pivot_row]] = a[[pivot_row, rk]]
        a[rk + 1:, col + 1:] -= np.outer(a[rk + 1:, col] / a[rk, col], a[rk, col + 1:])
        a[rk + 1:, col] = 0.0
        rk += 1
        col += 1
    return rk


# ---------------------------------------------------------------------------
# Minimum-residual solve
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LstsqResult:
    """Minimizer of ||M c - v||_2 together with the exact squared residual.

    ``residual_sq`` is an exact rational in exact mode (the norm itself is
    generally irrational, its square is not); ``residual_norm`` is the float
    square root in either mode.
    """

    coeffs: Vec
    residual_sq: Scalar
    mode: str

    @property
    def residual_norm(self) -> float:
        return math.sqrt(float(self.residual_sq))


def min_residual_solve(m: Mat, v: Vec, tol: ToleranceConfig = DEFAULT_TOL) -> LstsqResult:
    """Least-squares solve: coeffs minimizing ||m @ coeffs - v||_2.

    Exact mode solves the (always consistent) normal equations over the
    rationals by Gauss-Jordan elimination, setting free variables to zero;
    float mode delegates to numpy's least-squares.  The residual is always
    recomputed from ``v - m @ coeffs`` so the reported value is faithful to
    the returned coefficients.
    """
    check_same_mode(m.mode, v.mode)
    if m.nrows != len(v):
        raise NumericsError(f"matrix has {m.nrows} rows but vector has {len(v)}")
    if m.mode == EXACT:
        coeffs = _normal_equations_solve(m, v)
    else:
        sol, *_ = np.linalg.lstsq(np.array(m.rows, dtype=float),
                                  np.array(v.entries, dtype=float), rcond=None)
        coeffs = Vec(tuple(float(c) for c in sol), FLOAT)
    residual = vec_sub(v, mat_vec(m, coeffs))
    return LstsqResult(coeffs, residual.norm2_sq(), m.mode)


def _normal_equations_solve(m: Mat, v: Vec) -> Vec:
    mt = m.transpose()
    g = mat_mul(mt, m)
    h = mat_vec(mt, v)
    k = g.nrows
    a = [list(row) + [h.entries[i]] for i, row in enumerate(g.rows)]
    pivot_cols: list[int] = []
    r = 0
    for col in range(k):
        pivot_row = next((i for i in range(r, k) if a[i][col] != 0), None)
        if pivot_row is None:
            continue
        a[r], a[pivot_row] = a[pivot_row], a[r]
        inv = 1 / a[r][col]
        a[r] = [x * inv for x in a[r]]
        for i in range(k):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivot_cols.append(col)
        r += 1
        if r == k:
            break
    # Normal equations are consistent by construction; free variables get 0.
    coeffs = [Fraction(0)] * k
    for row_idx, col in enumerate(pivot_cols):
        coeffs[col] = a[row_idx][k]
    return Vec(tuple(coeffs), EXACT)
