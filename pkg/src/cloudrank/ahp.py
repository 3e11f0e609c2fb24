"""Criterion weighting from pairwise comparisons.

Decision criteria are weighted with a reciprocal pairwise-comparison matrix.
Judgments use the classic 1..9 odd-valued intensity scale: comparing
criterion ``a`` against criterion ``b`` yields 1 (equal importance), 3
(moderate), 5 (strong), 7 (very strong) or 9 (extreme), and the mirrored
cell holds the reciprocal.  Weights are the normalized row sums of the
matrix.  Squaring the matrix and re-normalizing gives a second estimate;
the largest change between the two estimates is reported as a convergence
diagnostic so callers can tell how settled the weights are.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

#: Verbal intensity scale for pairwise judgments.
VERBAL_SCALE: dict[str, float] = {
    "equal": 1.0,
    "moderate": 3.0,
    "strong": 5.0,
    "very strong": 7.0,
    "extreme": 9.0,
}

#: Direct intensities; a judgment may also be the reciprocal of one of these.
SCALE_VALUES: tuple[float, ...] = (1.0, 3.0, 5.0, 7.0, 9.0)

_ALLOWED_VALUES: tuple[float, ...] = SCALE_VALUES + tuple(1.0 / v for v in SCALE_VALUES[1:])

#: Tolerance when matching a judgment against the scale, and when checking
#: that mirrored matrix cells are reciprocals.
SCALE_TOLERANCE = 1e-9
RECIPROCAL_TOLERANCE = 1e-9
WEIGHT_SUM_TOLERANCE = 1e-9

#: A single pairwise judgment: (criterion_a, criterion_b, intensity).
Judgment = tuple[str, str, float]


class JudgmentError(ValueError):
    """Raised for malformed, conflicting or incomplete pairwise judgments."""


def _is_scale_value(value: float) -> bool:
    return any(abs(value - allowed) <= SCALE_TOLERANCE for allowed in _ALLOWED_VALUES)


@dataclass(frozen=True, eq=False)
class WeightVector:
    """Normalized weights over named criteria.

    Invariants: criteria are unique and non-empty, every weight lies in
    [0, 1], and the weights sum to 1 within a small absolute tolerance.
    """

    criteria: tuple[str, ...]
    weights: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.criteria:
            raise ValueError("weight vector needs at least one criterion")
        if len(set(self.criteria)) != len(self.criteria):
            raise ValueError(f"duplicate criteria in weight vector: {self.criteria}")
        if len(self.weights) != len(self.criteria):
            raise ValueError("criteria and weights must have equal length")
        for name, weight in zip(self.criteria, self.weights):
            if not np.isfinite(weight) or weight < -1e-12 or weight > 1 + 1e-12:
                raise ValueError(f"weight for {name!r} must be in [0, 1], got {weight}")
        total = sum(self.weights)
        if abs(total - 1.0) > WEIGHT_SUM_TOLERANCE:
            raise ValueError(f"weights sum to {total:.12g}, expected 1")

    def get(self, criterion: str, default: float = 0.0) -> float:
        for name, weight in zip(self.criteria, self.weights):
            if name == criterion:
                return weight
        return default

    def __contains__(self, criterion: str) -> bool:
        return criterion in self.criteria

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.criteria, self.weights))


@dataclass(frozen=True, eq=False)
class ComparisonMatrix:
    """A validated pairwise-comparison matrix over named criteria.

    ``cells`` is square and positive, the diagonal is exactly 1, and each
    mirrored pair multiplies to 1 within ``RECIPROCAL_TOLERANCE``.
    """

    criteria: tuple[str, ...]
    cells: np.ndarray

    def __post_init__(self) -> None:
        n = len(self.criteria)
        if n == 0:
            raise ValueError("comparison matrix needs at least one criterion")
        if len(set(self.criteria)) != n:
            raise ValueError(f"duplicate criteria: {self.criteria}")
        cells = np.asarray(self.cells, dtype=float)
        if cells.shape != (n, n):
            raise ValueError(f"expected a {n}x{n} matrix, got shape {cells.shape}")
        if not np.all(np.isfinite(cells)) or np.any(cells <= 0):
            raise ValueError("matrix cells must be finite and positive")
        if np.any(cells.diagonal() != 1.0):
            raise ValueError("matrix diagonal must be exactly 1")
        product = cells * cells.T
        if np.max(np.abs(product - 1.0)) > RECIPROCAL_TOLERANCE:
            i, j = divmod(int(np.argmax(np.abs(product - 1.0))), n)
            raise ValueError(
                f"cells ({self.criteria[i]}, {self.criteria[j]}) and mirror are not reciprocal"
            )
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)

    @property
    def size(self) -> int:
        return len(self.criteria)


def build_matrix(
    judgments: Iterable[Judgment],
    criteria: Sequence[str] | None = None,
) -> ComparisonMatrix:
    """Assemble a comparison matrix from pairwise judgments.

    Args:
        judgments: ``(a, b, value)`` triples stating that criterion ``a``
            compared against ``b`` has the given intensity.  ``value`` must
            be one of the odd scale values 1, 3, 5, 7, 9 or the reciprocal
            of one; anything else (including the even integers 2, 4, 6, 8)
            is rejected.  The mirrored cell is filled with the reciprocal.
        criteria: optional explicit criterion order.  When omitted, criteria
            are ordered by first appearance in the judgment list.

    Every unordered pair of criteria must be judged exactly once; duplicate
    or conflicting judgments for a pair raise :class:`JudgmentError`.
    """
    triples: list[Judgment] = []
    seen_order: list[str] = []
    for entry in judgments:
        try:
            a, b, value = entry
        except (TypeError, ValueError) as exc:
            raise JudgmentError(f"judgment must be (a, b, value), got {entry!r}") from exc
        a, b = str(a), str(b)
        value = float(value)
        if a == b:
            raise JudgmentError(f"criterion {a!r} cannot be compared against itself")
        if not _is_scale_value(value):
            raise JudgmentError(
                f"judgment ({a!r}, {b!r}): {value!r} is not on the 1/3/5/7/9 scale "
                "or a reciprocal of it"
            )
        for name in (a, b):
            if name not in seen_order:
                seen_order.append(name)
        triples.append((a, b, value))

    if criteria is None:
        names = tuple(seen_order)
    else:
        names = tuple(str(c) for c in criteria)
        unknown = [c for c in seen_order if c not in names]
        if unknown:
            raise JudgmentError(f"judgments mention criteria outside the declared list: {unknown}")

    n = len(names)
    if n == 0:
        raise JudgmentError("no judgments given")
    index = {name: i for i, name in enumerate(names)}

    cells = np.ones((n, n), dtype=float)
    filled: set[tuple[int, int]] = set()
    for a, b, value in triples:
        i, j = index[a], index[b]
        pair = (min(i, j), max(i, j))
        if pair in filled:
            raise JudgmentError(f"pair ({a!r}, {b!r}) judged more than once")
        filled.add(pair)
        cells[i, j] = value
        cells[j, i] = 1.0 / value

    expected_pairs = n * (n - 1) // 2
    if len(filled) != expected_pairs:
        missing = [
            f"({names[i]}, {names[j]})"
            for i in range(n)
            for j in range(i + 1, n)
            if (i, j) not in filled
        ]
        raise JudgmentError(f"missing judgments for pairs: {', '.join(missing)}")

    return ComparisonMatrix(criteria=names, cells=cells)


def row_sum_weights(cells: np.ndarray) -> np.ndarray:
    """Normalized row sums of a positive square matrix."""
    cells = np.asarray(cells, dtype=float)
    row_sums = cells.sum(axis=1)
    return row_sums / row_sums.sum()


def compute_weights(matrix: ComparisonMatrix) -> WeightVector:
    """Derive criterion weights as the matrix's normalized row sums."""
    weights = row_sum_weights(matrix.cells)
    return WeightVector(
        criteria=matrix.criteria,
        weights=tuple(float(w) for w in weights),
    )


def weights_from_judgments(
    judgments: Iterable[Judgment],
    criteria: Sequence[str] | None = None,
) -> WeightVector:
    """Shorthand for :func:`build_matrix` followed by :func:`compute_weights`."""
    return compute_weights(build_matrix(judgments, criteria))


def square_matrix(matrix: ComparisonMatrix) -> np.ndarray:
    """The matrix multiplied by itself.

    The square of a reciprocal matrix is generally not reciprocal, so the
    result is returned as a plain array rather than a
    :class:`ComparisonMatrix`.
    """
    return matrix.cells @ matrix.cells


def convergence_gap(matrix: ComparisonMatrix) -> float:
    """Largest absolute weight change after one squaring of the matrix.

    A small gap means the row-sum weights are already close to the limiting
    weights; a large gap signals that the judgments are far from consistent.
    """
    first = row_sum_weights(matrix.cells)
    second = row_sum_weights(square_matrix(matrix))
    return float(np.max(np.abs(second - first)))
