"""
Deriving criterion weights from pairwise judgments
==================================================

A stakeholder rarely hands you a ready-made weight vector, but they can
usually answer questions like "is download speed more important than
upload speed, and by how much?".  This walkthrough turns a handful of
such answers into a normalized weight vector, then checks how stable
that vector is.
"""

from cloudrank.ahp import (
    VERBAL_SCALE,
    JudgmentError,
    build_matrix,
    compute_weights,
    convergence_gap,
    square_matrix,
)

# Judgments use the classic odd verbal scale.  Each entry maps a phrase a
# person would actually say to the numeric intensity stored in the matrix.
print("verbal scale:")
for phrase, value in VERBAL_SCALE.items():
    print(f"  {phrase:12s} -> {value}")

# Four criteria for picking a cloud service, compared two at a time.
# (a, b, 3) reads "a is moderately more important than b"; fractional
# values point the other way.
judgments = [
    ("upload", "download", 1 / 3),  # download matters moderately more
    ("upload", "ram", 1 / 5),
    ("upload", "disk", 1 / 5),
    ("download", "ram", 3),
    ("download", "disk", 5),
    ("ram", "disk", 3),
]

matrix = build_matrix(judgments, criteria=("upload", "download", "ram", "disk"))
print("\ncomparison matrix (rows/columns in criterion order):")
for name, row in zip(matrix.criteria, matrix.cells):
    print(f"  {name:9s}", "  ".join(f"{cell:7.4f}" for cell in row))

# Weights are the normalized row sums: each criterion's share of the
# total "importance mass" in the matrix.
weights = compute_weights(matrix)
print("\nderived weights:")
for name, weight in weights.as_dict().items():
    print(f"  {name:9s} {weight:.4f}")

# Squaring the matrix propagates indirect comparisons (a beats b, b beats
# c, so a indirectly beats c).  If the judgments are close to consistent,
# the weights barely move; a large gap flags contradictory answers.
squared = square_matrix(matrix)
print("\nmatrix squared, first row:", "  ".join(f"{cell:7.4f}" for cell in squared[0]))
gap = convergence_gap(matrix)
print(f"largest weight shift after one squaring: {gap:.4f}")

# The scale is deliberately strict: only 1, 3, 5, 7, 9 and their
# reciprocals are accepted.  Even intensities are rejected outright, so a
# typo cannot silently skew the weights.
try:
    build_matrix([("a", "b", 2)])
except JudgmentError as exc:
    print(f"\nrejected judgment: {exc}")
