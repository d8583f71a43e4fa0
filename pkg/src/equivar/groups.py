"""Finite groups, matrix representations, orbits, and stabilizers.

Groups are stored as a multiplication table over dense element indices;
element names appear only at the file boundary.  Representations hold one
invertible rational matrix per element and are verified to be exact
homomorphisms before use.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .rational import (
    Mat,
    Vec,
    canon_direction,
    identity,
    is_invertible,
    is_zero,
    mat,
    mat_mul,
    mat_vec,
    scale_factor,
    transpose,
)


@dataclass(frozen=True)
class GroupCheck:
    """Outcome of a group-axiom verification.

    On failure, ``axiom`` names the first violated axiom and ``witness``
    holds the element indices exhibiting the violation.
    """

    ok: bool
    axiom: Optional[str] = None
    witness: Optional[tuple[int, ...]] = None


def verify_group(table: Sequence[Sequence[int]], identity_index: int) -> GroupCheck:
    """Check closure, associativity, identity, and inverses on a table."""
    n = len(table)
    if any(len(row) != n for row in table):
        raise ValueError("multiplication table is not square")
    if not 0 <= identity_index < n:
        raise ValueError(f"identity index {identity_index} out of range")
    for i in range(n):
        for j in range(n):
            if not 0 <= table[i][j] < n:
                return GroupCheck(False, "closure", (i, j))
    e = identity_index
    for i in range(n):
        if table[e][i] != i or table[i][e] != i:
            return GroupCheck(False, "identity", (i,))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if table[table[i][j]][k] != table[i][table[j][k]]:
                    return GroupCheck(False, "associativity", (i, j, k))
    for i in range(n):
        inv = next((j for j in range(n)
                    if table[i][j] == e and table[j][i] == e), None)
        if inv is None:
            return GroupCheck(False, "inverse", (i,))
    return GroupCheck(True)


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group over named elements with a dense index table."""

    elements: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]
    identity_index: int
    inverse: tuple[int, ...]

    @classmethod
    def from_table(cls, elements: Sequence[str],
                   table: Sequence[Sequence[int]],
                   identity_index: int) -> "FiniteGroup":
        if len(elements) != len(table):
            raise ValueError("element list and table size disagree")
        if len(set(elements)) != len(elements):
            raise ValueError("duplicate element names")
        check = verify_group(table, identity_index)
        if not check.ok:
            raise ValueError(
                f"group axiom '{check.axiom}' fails at indices {check.witness}")
        e = identity_index
        inverse = tuple(
            next(j for j in range(len(table)) if table[i][j] == e)
            for i in range(len(table)))
        return cls(tuple(elements), tuple(tuple(r) for r in table),
                   identity_index, inverse)

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def index_of(self, name: str) -> int:
        try:
            return self.elements.index(name)
        except ValueError:
            raise KeyError(f"unknown group element {name!r}") from None


def trivial_group() -> FiniteGroup:
    return FiniteGroup.from_table(("e",), ((0,),), 0)


@dataclass(frozen=True)
class RepCheck:
    """Outcome of a representation verification.

    ``pair`` is the (g, h) index pair violating the homomorphism property;
    ``singular`` is the index of a non-invertible matrix.
    """

    ok: bool
    reason: Optional[str] = None
    pair: Optional[tuple[int, int]] = None
    singular: Optional[int] = None


def verify_representation(group: FiniteGroup,
                          matrices: Sequence[Mat]) -> RepCheck:
    """Check that matrices form an exact homomorphism into GL(dim)."""
    if len(matrices) != group.order:
        raise ValueError("need one matrix per group element")
    dim = len(matrices[0])
    for m in matrices:
        if len(m) != dim or any(len(row) != dim for row in m):
            raise ValueError("matrices must all be square of equal dimension")
    if matrices[group.identity_index] != identity(dim):
        return RepCheck(False, "identity-not-mapped-to-identity")
    for i, m in enumerate(matrices):
        if not is_invertible(m):
            return RepCheck(False, "singular", singular=i)
    for i in range(group.order):
        for j in range(group.order):
            if mat_mul(matrices[i], matrices[j]) != matrices[group.mul(i, j)]:
                return RepCheck(False, "homomorphism", pair=(i, j))
    return RepCheck(True)


@dataclass(frozen=True)
class Representation:
    """Per-element invertible rational matrices forming a homomorphism."""

    group: FiniteGroup
    dim: int
    matrices: tuple[Mat, ...]

    @classmethod
    def from_matrices(cls, group: FiniteGroup,
                      matrices: Sequence[Mat]) -> "Representation":
        check = verify_representation(group, matrices)
        if not check.ok:
            raise ValueError(f"not a representation: {check.reason} "
                             f"(pair={check.pair}, singular={check.singular})")
        return cls(group, len(matrices[0]), tuple(matrices))

    def matrix(self, i: int) -> Mat:
        return self.matrices[i]

    def transposed_apply(self, i: int, v: Vec) -> Vec:
        """rho_g^T v for the element with index i."""
        return mat_vec(transpose(self.matrices[i]), v)

    def inverse_matrix(self, i: int) -> Mat:
        return self.matrices[self.group.inverse[i]]


def trivial_representation(group: FiniteGroup, dim: int) -> Representation:
    return Representation(group, dim, (identity(dim),) * group.order)


@dataclass(frozen=True)
class OrbitClass:
    """The orbit {rho_g^T v} of a vector with its stabilizer subgroup."""

    representative: Vec
    members: tuple[Vec, ...]
    stabilizer_indices: tuple[int, ...]


def orbit_transposed(rep: Representation, v: Vec) -> OrbitClass:
    """Exactly deduplicated orbit of v under the transposed representation.

    Member order follows first occurrence over the group's element order.
    The orbit-stabilizer identity is asserted on every call.
    """
    if len(v) != rep.dim:
        raise ValueError(f"vector length {len(v)} != representation dim {rep.dim}")
    members: list[Vec] = []
    stabilizer: list[int] = []
    for i in range(rep.group.order):
        image = rep.transposed_apply(i, v)
        if image == v:
            stabilizer.append(i)
        if image not in members:
            members.append(image)
    assert len(members) * len(stabilizer) == rep.group.order, \
        "orbit-stabilizer identity violated"
    return OrbitClass(v, tuple(members), tuple(stabilizer))


def normalized_orbits_relation(rep: Representation, u: Vec,
                               v: Vec) -> Optional[Fraction]:
    """Positive rational k with orbit(u) = k * orbit(v), or None if disjoint.

    The normalized orbits of two nonzero vectors either coincide or are
    disjoint; when they coincide the scaling factor along the orbit is
    unique and positive.
    """
    if is_zero(u) or is_zero(v):
        raise ValueError("orbit relation requires nonzero vectors")
    orbit_u = orbit_transposed(rep, u).members
    orbit_v = orbit_transposed(rep, v).members
    directions_v = {canon_direction(w): w for w in orbit_v}
    match = directions_v.get(canon_direction(orbit_u[0]))
    if match is None:
        return None
    k = scale_factor(orbit_u[0], match)
    assert k is not None and k > 0
    scaled = {tuple(k * x for x in w) for w in orbit_v}
    if scaled != set(orbit_u):
        return None
    return k
