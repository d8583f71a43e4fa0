"""Exact equality of two-layer ReLU networks as functions on R^n.

Two bias-free piecewise-linear homogeneous functions agree everywhere iff
their feature matrices agree on every full-dimensional cell of the common
channel-hyperplane arrangement; one rational interior witness per cell
decides each cell.
"""

from __future__ import annotations

from typing import Optional

from .arrangement import central_cell_points, distinct_lines
from .networks import TwoLayerNet, feature_at, require_rational
from .rational import Mat, Vec, mat_is_zero, vdot


def _check_compatible(a: TwoLayerNet, b: TwoLayerNet) -> None:
    if a.n != b.n or a.d != b.d:
        raise ValueError(
            f"shape mismatch: ({a.n},{a.d}) vs ({b.n},{b.d})")
    require_rational(a, b)


def _cell_witnesses(a: TwoLayerNet, b: TwoLayerNet) -> list[Vec]:
    lines = distinct_lines(list(a.alphas) + list(b.alphas))
    return central_cell_points(lines, a.n)


def _feature_diff(a: TwoLayerNet, b: TwoLayerNet, x: Vec) -> Mat:
    fa = feature_at(a, x)
    fb = feature_at(b, x)
    return tuple(tuple(p - q for p, q in zip(ra, rb))
                 for ra, rb in zip(fa, fb))


def nets_equal_exact(a: TwoLayerNet, b: TwoLayerNet) -> bool:
    """True iff a(x) = b(x) for every x in R^n, decided exactly.

    Compares feature matrices (and function values) at one interior witness
    per arrangement cell; both nets are linear within each cell.
    """
    _check_compatible(a, b)
    for x in _cell_witnesses(a, b):
        if not mat_is_zero(_feature_diff(a, b, x)):
            return False
    return True


def nets_value_witness(a: TwoLayerNet, b: TwoLayerNet) -> Optional[Vec]:
    """A rational point where the two functions take different values,
    or None when the nets are equal as functions."""
    _check_compatible(a, b)
    for x in _cell_witnesses(a, b):
        diff = _feature_diff(a, b, x)
        if mat_is_zero(diff):
            continue
        value_gap = tuple(
            sum(diff[r][c] * x[r] for r in range(a.n)) for c in range(a.d))
        if any(v != 0 for v in value_gap):
            return x
        # Values coincide at the witness; move inside the cell along a
        # coordinate axis on which the feature difference acts.
        j = next(r for r in range(a.n) if any(v != 0 for v in diff[r]))
        eps = None
        for alpha in list(a.alphas) + list(b.alphas):
            if alpha[j] != 0:
                bound = abs(vdot(alpha, x)) / abs(alpha[j]) / 2
                if bound > 0 and (eps is None or bound < eps):
                    eps = bound
        if eps is None:
            eps = 1
        return tuple(x[r] + eps if r == j else x[r] for r in range(a.n))
    return None
