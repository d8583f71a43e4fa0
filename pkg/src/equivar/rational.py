"""Exact rational vectors and matrices.

All verification paths in this package run on `fractions.Fraction` scalars so
that every equality test is decidable.  Vectors are tuples of Fractions and
matrices are tuples of row tuples; both are hashable and safe to share.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

Scalar = Union[int, str, Fraction]
Vec = tuple[Fraction, ...]
Mat = tuple[Vec, ...]


def frac(x: Scalar) -> Fraction:
    """Coerce an int, Fraction, or "p/q" / integer string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational scalar: {x!r}")


def vec(items: Iterable[Scalar]) -> Vec:
    return tuple(frac(x) for x in items)


def mat(rows: Iterable[Iterable[Scalar]]) -> Mat:
    m = tuple(vec(r) for r in rows)
    if m and any(len(r) != len(m[0]) for r in m):
        raise ValueError("ragged matrix")
    return m


def zeros(n: int) -> Vec:
    return (Fraction(0),) * n


def basis(n: int, i: int) -> Vec:
    return tuple(Fraction(1 if j == i else 0) for j in range(n))


def identity(n: int) -> Mat:
    return tuple(basis(n, i) for i in range(n))


def is_zero(v: Vec) -> bool:
    return all(x == 0 for x in v)


def vdot(u: Vec, v: Vec) -> Fraction:
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def vadd(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c: Fraction, v: Vec) -> Vec:
    return tuple(c * x for x in v)


def mat_vec(m: Mat, v: Vec) -> Vec:
    return tuple(vdot(row, v) for row in m)


def transpose(m: Mat) -> Mat:
    return tuple(zip(*m)) if m else ()


def mat_mul(a: Mat, b: Mat) -> Mat:
    bt = transpose(b)
    return tuple(tuple(vdot(row, col) for col in bt) for row in a)


def mat_add(a: Mat, b: Mat) -> Mat:
    return tuple(vadd(ra, rb) for ra, rb in zip(a, b))


def mat_scale(c: Fraction, m: Mat) -> Mat:
    return tuple(vscale(c, row) for row in m)


def outer(u: Vec, v: Vec) -> Mat:
    """u v^T as a len(u) x len(v) matrix."""
    return tuple(tuple(a * b for b in v) for a in u)


def mat_is_zero(m: Mat) -> bool:
    return all(x == 0 for row in m for x in row)


def mat_inverse(m: Mat) -> Mat:
    """Invert a square rational matrix by Gauss-Jordan elimination.

    Raises ValueError on a singular input.
    """
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("matrix is not square")
    aug = [list(row) + [Fraction(1 if i == j else 0) for j in range(n)]
           for i, row in enumerate(m)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv_p = Fraction(1) / aug[col][col]
        aug[col] = [x * inv_p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def is_invertible(m: Mat) -> bool:
    try:
        mat_inverse(m)
        return True
    except ValueError:
        return False


def canon_direction(v: Vec) -> Vec:
    """Positive rescaling of a nonzero vector to coprime integer entries.

    Preserves orientation: v and -v map to distinct forms.  Two vectors have
    equal forms iff one is a positive rational multiple of the other.
    """
    if is_zero(v):
        raise ValueError("zero vector has no direction")
    den_lcm = 1
    for x in v:
        den_lcm = den_lcm * x.denominator // gcd(den_lcm, x.denominator)
    ints = [int(x * den_lcm) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return tuple(Fraction(x // g) for x in ints)


def canon_line(v: Vec) -> Vec:
    """Canonical normal for the line/hyperplane spanned by v.

    Coprime integer entries with the first nonzero entry positive, so v and
    -v map to the same form.
    """
    d = canon_direction(v)
    first = next(x for x in d if x != 0)
    return d if first > 0 else tuple(-x for x in d)


def scale_factor(u: Vec, v: Vec) -> Fraction | None:
    """The rational k with u = k * v, or None if u and v are not parallel."""
    if len(u) != len(v):
        raise ValueError("dimension mismatch")
    if is_zero(v):
        return None
    k = None
    for a, b in zip(u, v):
        if b == 0:
            if a != 0:
                return None
        else:
            r = a / b
            if k is None:
                k = r
            elif r != k:
                return None
    return k
