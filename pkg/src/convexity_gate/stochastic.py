"""Doubly stochastic matrices: validation, the uniform matrix, Birkhoff sampling.

A doubly stochastic matrix is square, entrywise nonnegative, and has every
row and column summing to 1.  The validator re-checks all three conditions
rather than trusting callers; in float mode the checks run against
``ToleranceConfig.stochastic_tol``, in exact mode with zero tolerance.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .numerics import (
    DEFAULT_TOL,
    EXACT,
    FLOAT,
    Mat,
    NumericsError,
    ToleranceConfig,
    Vec,
    format_scalar,
    mat,
    mat_vec,
    parse_scalar,
)


class ValidationError(NumericsError):
    """A matrix failed doubly stochastic validation."""


class NotSquareError(ValidationError):
    def __init__(self, nrows, ncols):
        super().__init__(f"matrix is {nrows}x{ncols}, not square")


class NegativeEntryError(ValidationError):
    def __init__(self, i, j, value):
        super().__init__(f"negative entry {value} at ({i},{j})")
        self.i, self.j = i, j


class RowSumOffError(ValidationError):
    def __init__(self, i, total):
        super().__init__(f"row {i} sums to {total}, expected 1")
        self.i = i


class ColSumOffError(ValidationError):
    def __init__(self, j, total):
        super().__init__(f"column {j} sums to {total}, expected 1")
        self.j = j


@dataclass(frozen=True)
class PermutationSpec:
    """A bijection on {1..n}, stored as the image sequence sigma(1..n)."""

    sigma: tuple

    def __post_init__(self):
        n = len(self.sigma)
        if sorted(self.sigma) != list(range(1, n + 1)):
            raise NumericsError(f"not a permutation of 1..{n}: {self.sigma}")

    @property
    def n(self) -> int:
        return len(self.sigma)

    def matrix(self, mode: str = EXACT) -> Mat:
        n = self.n
        rows = [[1 if self.sigma[i] == j + 1 else 0 for j in range(n)] for i in range(n)]
        return mat(rows, mode)


@dataclass(frozen=True)
class DoublyStochasticMatrix:
    """A validated doubly stochastic matrix of order ``n``.

    Construct via :func:`validate` (or the samplers below) so that the
    invariants have actually been checked.
    """

    n: int
    entries: Mat

    @property
    def mode(self) -> str:
        return self.entries.mode

    def apply(self, x: Vec) -> Vec:
        return mat_vec(self.entries, x)

    def to_float(self) -> "DoublyStochasticMatrix":
        return DoublyStochasticMatrix(self.n, self.entries.to_float())

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "entries": [[format_scalar(e) for e in row] for row in self.entries.rows],
        }


def validate(m: Mat, tol: ToleranceConfig = DEFAULT_TOL) -> DoublyStochasticMatrix:
    """Check the doubly stochastic invariants and wrap ``m`` on success.

    Errors name the first offending (1-based) index, scanning entries in
    row-major order, then row sums, then column sums.
    """
    if m.nrows != m.ncols:
        raise NotSquareError(m.nrows, m.ncols)
    n = m.nrows
    eps = 0 if m.mode == EXACT else tol.stochastic_tol
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if m.entry(i, j) < -eps:
                raise NegativeEntryError(i, j, m.entry(i, j))
    for i in range(1, n + 1):
        total = m.row(i).sum()
        if abs(total - 1) > eps:
            raise RowSumOffError(i, total)
    for j in range(1, n + 1):
        total = m.col(j).sum()
        if abs(total - 1) > eps:
            raise ColSumOffError(j, total)
    return DoublyStochasticMatrix(n, m)


def uniform(n: int) -> DoublyStochasticMatrix:
    """The order-n matrix with every entry 1/n (exact mode)."""
    if n < 1:
        raise NumericsError("order must be at least 1")
    w = Fraction(1, n)
    return DoublyStochasticMatrix(n, mat([[w] * n for _ in range(n)]))


def sample_birkhoff(n: int, k: int, seed: int,
                    mode: str = FLOAT) -> DoublyStochasticMatrix:
    """Random convex combination of ``k`` permutation matrices.

    Weights are k uniform draws normalized to sum 1 (float mode) or k random
    integers in 1..12 normalized (exact mode, giving a rational matrix).
    Deterministic for a fixed ``(n, k, seed, mode)``.  Any convex combination
    of permutation matrices is doubly stochastic, but the result is run
    through :func:`validate` anyway.
    """
    if n < 1 or k < 1:
        raise NumericsError("need n >= 1 and k >= 1")
    rng = random.Random(seed)
    perms = []
    for _ in range(k):
        image = list(range(1, n + 1))
        rng.shuffle(image)
        perms.append(PermutationSpec(tuple(image)))
    if mode == EXACT:
        raw = [rng.randint(1, 12) for _ in range(k)]
        total = sum(raw)
        weights = [Fraction(r, total) for r in raw]
    else:
        raw = [rng.random() for _ in range(k)]
        total = sum(raw)
        weights = [r / total for r in raw]
    zero = Fraction(0) if mode == EXACT else 0.0
    rows = [[zero] * n for _ in range(n)]
    for w, p in zip(weights, perms):
        for i, target in enumerate(p.sigma):
            rows[i][target - 1] += w
    return validate(mat(rows, mode))


def matrix_from_json_dict(data: dict, tol: ToleranceConfig = DEFAULT_TOL) -> DoublyStochasticMatrix:
    """Read the JSON form {"n": int, "entries": [[...]]}.

    Entries may be numbers (float mode) or "p/q" strings (exact mode); a mix
    of the two is rejected.
    """
    try:
        n = data["n"]
        entries = data["entries"]
    except (KeyError, TypeError) as exc:
        raise NumericsError(f"malformed matrix JSON: missing {exc}") from exc
    parsed = [[parse_scalar(e) for e in row] for row in entries]
    m = mat(parsed)
    if m.nrows != n:
        raise NumericsError(f"declared n={n} but entries have {m.nrows} rows")
    return validate(m, tol)
