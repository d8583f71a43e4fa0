"""Boundary hyperplanes of two-layer ReLU networks and the neuron lower
bound they impose on layer-wise equivariant rewrites.

All hyperplanes are codimension-1 subspaces through the origin (bias-free
networks), identified by a canonical normal: coprime integer entries with
the first nonzero entry positive.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .groups import Representation, orbit_transposed
from .networks import TwoLayerNet, require_rational
from .rational import (
    Mat,
    Vec,
    canon_line,
    is_zero,
    mat_inverse,
    mat_is_zero,
    mat_vec,
    transpose,
    vdot,
)


@dataclass(frozen=True)
class Hyperplane:
    """The subspace {x : <normal, x> = 0} with a canonical normal."""

    normal: Vec

    def __post_init__(self):
        if is_zero(self.normal):
            raise ValueError("hyperplane normal must be nonzero")
        if canon_line(self.normal) != self.normal:
            raise ValueError("normal must be in canonical form; "
                             "use Hyperplane.through()")

    @classmethod
    def through(cls, v: Vec) -> "Hyperplane":
        return cls(canon_line(v))


@dataclass(frozen=True)
class BoundaryHyperplane:
    """A boundary hyperplane with its feature-function crossing jump."""

    plane: Hyperplane
    jump: Mat


def candidate_hyperplanes(net: TwoLayerNet) -> tuple[Hyperplane, ...]:
    """Distinct channel hyperplanes in first-occurrence order; antipodal
    and rescaled channel vectors collapse to one plane."""
    require_rational(net)
    seen: set[Vec] = set()
    planes: list[Hyperplane] = []
    for a in net.alphas:
        if is_zero(a):
            continue
        key = canon_line(a)
        if key not in seen:
            seen.add(key)
            planes.append(Hyperplane(key))
    return tuple(planes)


def is_boundary(net: TwoLayerNet, plane: Hyperplane) -> tuple[bool, Mat]:
    """Decide the boundary criterion for a plane and return the jump matrix.

    The jump is the difference of the aligned channels' feature
    contributions on the two sides of the plane, evaluated with the test
    direction v fixed to the canonical normal; a sign flip of v negates the
    jump but not its vanishing.
    """
    require_rational(net)
    v = plane.normal
    pos = [[Fraction(0)] * net.d for _ in range(net.n)]
    for a, b in zip(net.alphas, net.betas):
        if is_zero(a) or canon_line(a) != plane.normal:
            continue
        sign = 1 if vdot(a, v) > 0 else -1
        for r in range(net.n):
            for c in range(net.d):
                pos[r][c] += sign * a[r] * b[c]
    jump = tuple(tuple(row) for row in pos)
    return (not mat_is_zero(jump), jump)


def boundary_hyperplanes(net: TwoLayerNet) -> tuple[BoundaryHyperplane, ...]:
    """Candidate planes filtered by the boundary criterion, annotated with
    their jump matrices."""
    out = []
    for plane in candidate_hyperplanes(net):
        boundary, jump = is_boundary(net, plane)
        if boundary:
            out.append(BoundaryHyperplane(plane, jump))
    return tuple(out)


@dataclass(frozen=True)
class SymmetryVerdict:
    ok: bool
    element: Optional[str] = None
    plane: Optional[Hyperplane] = None


def transformed_plane(plane: Hyperplane, rho: Representation,
                      g: int) -> Hyperplane:
    """The image plane rho_g M: its normal is (rho_g^T)^{-1} applied to the
    source normal, re-canonicalized."""
    inv_t = mat_inverse(transpose(rho.matrix(g)))
    return Hyperplane.through(mat_vec(inv_t, plane.normal))


def is_hyperplane_set_symmetric(planes: Sequence[Hyperplane],
                                rho: Representation) -> SymmetryVerdict:
    """True iff the plane set is closed under every rho_g."""
    have = {p.normal for p in planes}
    for g in range(rho.group.order):
        for p in planes:
            image = transformed_plane(p, rho, g)
            if image.normal not in have:
                return SymmetryVerdict(False, rho.group.elements[g], p)
    return SymmetryVerdict(True)


@dataclass(frozen=True)
class OrbitCertificate:
    planes: tuple[Hyperplane, ...]
    representative: Vec
    channel_count: int  # size of the transposed-representation vector orbit


@dataclass(frozen=True)
class LowerBoundCertificate:
    total: int
    orbits: tuple[OrbitCertificate, ...]


def len_neuron_lower_bound(planes: Sequence[Hyperplane],
                           rho: Representation) -> LowerBoundCertificate:
    """Minimum channel count of any layer-wise equivariant net whose
    boundary set contains the given symmetric plane set.

    Every plane needs an aligned channel vector, and closure of the
    rewritten channel set under the transposed representation forces the
    whole vector orbit of each plane's normal, so the bound is the sum of
    orbit sizes over plane orbits.  Invariant to rescaling or flipping any
    representative normal.
    """
    symmetric = is_hyperplane_set_symmetric(planes, rho)
    if not symmetric.ok:
        raise ValueError(
            f"plane set is not closed under the representation "
            f"(element {symmetric.element}, plane {symmetric.plane})")
    remaining = list(dict.fromkeys(planes))
    orbits: list[OrbitCertificate] = []
    total = 0
    while remaining:
        seed = remaining[0]
        orbit_planes = {seed.normal: seed}
        frontier = [seed]
        while frontier:
            p = frontier.pop()
            for g in range(rho.group.order):
                image = transformed_plane(p, rho, g)
                if image.normal not in orbit_planes:
                    orbit_planes[image.normal] = image
                    frontier.append(image)
        members = [p for p in remaining if p.normal in orbit_planes]
        remaining = [p for p in remaining if p.normal not in orbit_planes]
        rep = seed.normal
        count = len(orbit_transposed(rho, rep).members)
        orbits.append(OrbitCertificate(tuple(members), rep, count))
        total += count
    return LowerBoundCertificate(total, tuple(orbits))
