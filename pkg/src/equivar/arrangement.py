"""Exact interior witnesses for the cells of central hyperplane arrangements.

A two-layer bias-free ReLU network is linear on each full-dimensional cell
of the central arrangement spanned by its channel hyperplanes, so one
rational interior point per cell decides global function equality.  Cells
are enumerated by slicing the central arrangement with x_n = 1 and building
the induced affine arrangements recursively: when a hyperplane splits a
cell, the interior of the dividing face is found in the induced arrangement
one dimension down and pushed off both sides by an exact margin.
"""

from __future__ import annotations

from fractions import Fraction

from .rational import Vec, basis, canon_line, is_zero, vdot, zeros

AffineConstraint = tuple[Vec, Fraction]  # <normal, x> + offset compared to 0


def _affine_canonical(normal: Vec, offset: Fraction) -> Vec:
    return canon_line(tuple(normal) + (offset,))


def _dedupe_affine(constraints: list[AffineConstraint]) -> list[AffineConstraint]:
    seen: set[Vec] = set()
    out: list[AffineConstraint] = []
    for normal, offset in constraints:
        if is_zero(normal):
            continue
        key = _affine_canonical(normal, offset)
        if key not in seen:
            seen.add(key)
            out.append((normal, offset))
    return out


def _restrict_to_hyperplane(plane: AffineConstraint,
                            others: list[AffineConstraint],
                            dim: int):
    """Parameterize the plane and restrict the other constraints onto it.

    Returns (induced constraints in dim-1 coordinates, lift) where lift maps
    a parameter point back to a point of the plane in ambient coordinates.
    """
    a, c = plane
    pivot = next(i for i in range(dim) if a[i] != 0)
    free = [i for i in range(dim) if i != pivot]

    def lift(t: Vec) -> Vec:
        x = [Fraction(0)] * dim
        for pos, i in enumerate(free):
            x[i] = t[pos]
        x[pivot] = (-c - sum(a[i] * x[i] for i in free)) / a[pivot]
        return tuple(x)

    induced: list[AffineConstraint] = []
    for b, d0 in others:
        normal = tuple(b[i] - b[pivot] * a[i] / a[pivot] for i in free)
        offset = d0 - b[pivot] * c / a[pivot]
        induced.append((normal, offset))
    return induced, lift


def affine_cell_points(constraints: list[AffineConstraint],
                       dim: int) -> list[Vec]:
    """One exact interior point per full-dimensional cell of the arrangement.

    Constraints with a zero normal are constant-sign and ignored; duplicate
    hyperplanes are merged.  Deterministic for a fixed input order.
    """
    planes = _dedupe_affine(constraints)
    if dim == 0:
        return [()]
    if dim == 1:
        roots = sorted({-c / a[0] for a, c in planes})
        if not roots:
            return [zeros(1)]
        points = [(roots[0] - 1,)]
        points += [((lo + hi) / 2,) for lo, hi in zip(roots, roots[1:])]
        points.append((roots[-1] + 1,))
        return points

    points: list[Vec] = [zeros(dim)]
    for i, plane in enumerate(planes):
        a, c = plane
        prior = planes[:i]
        induced, lift = _restrict_to_hyperplane(plane, prior, dim)
        norm_sq = vdot(a, a)
        for t in affine_cell_points(induced, dim - 1):
            z = lift(t)
            eps = Fraction(1)
            for b, d0 in prior:
                val = vdot(b, z) + d0
                der = vdot(b, a)
                if der != 0:
                    eps = min(eps, abs(val) / abs(der) / 2)
            assert norm_sq > 0
            step = tuple(eps * x for x in a)
            points.append(tuple(p + s for p, s in zip(z, step)))
            points.append(tuple(p - s for p, s in zip(z, step)))

    interior: list[Vec] = []
    seen_signs: set[tuple[int, ...]] = set()
    for p in points:
        values = [vdot(a, p) + c for a, c in planes]
        if any(v == 0 for v in values):
            continue
        signs = tuple(1 if v > 0 else -1 for v in values)
        if signs not in seen_signs:
            seen_signs.add(signs)
            interior.append(p)
    return interior


def distinct_lines(vectors: list[Vec]) -> list[Vec]:
    """Canonical normals of the distinct hyperplanes through 0, in first-seen order."""
    seen: set[Vec] = set()
    out: list[Vec] = []
    for v in vectors:
        if is_zero(v):
            continue
        key = canon_line(v)
        if key not in seen:
            seen.add(key)
            out.append(key)
    return out


def central_cell_points(normals: list[Vec], dim: int) -> list[Vec]:
    """One exact interior point per full-dimensional cell of the central
    arrangement {x : <normal, x> = 0}.

    Every cell is an open cone meeting the slice x_n = 1 or x_n = -1, so the
    affine cells of the sliced arrangement, taken with both signs, cover all
    cones; duplicates are merged by sign vector.
    """
    lines = distinct_lines(normals)
    if dim == 0:
        return [()]
    if not lines:
        return [basis(dim, 0)]
    if dim == 1:
        return [(Fraction(1),), (Fraction(-1),)]

    sliced = [(tuple(l[:-1]), l[-1]) for l in lines]
    points: list[Vec] = []
    seen_signs: set[tuple[int, ...]] = set()
    for y in affine_cell_points(sliced, dim - 1):
        for cand in (y + (Fraction(1),),
                     tuple(-t for t in y) + (Fraction(-1),)):
            values = [vdot(l, cand) for l in lines]
            if any(v == 0 for v in values):
                continue
            signs = tuple(1 if v > 0 else -1 for v in values)
            if signs not in seen_signs:
                seen_signs.add(signs)
                points.append(cand)
    return points
