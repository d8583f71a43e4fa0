"""Exact decision procedures for equivariance constraints.

Global equivariance of a two-layer net is decided per group element by
composing the representation into the weights on both sides and invoking
the piecewise-linear equality oracle, never by sampling.  Layer-wise
checks are plain matrix identities plus the generalized-permutation
characterization of hidden representations that commute with ReLU.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .equality import nets_value_witness
from .groups import FiniteGroup, Representation, trivial_representation
from .networks import TwoLayerNet, require_rational
from .rational import Mat, Vec, mat_mul, mat_vec, transpose, vscale


@dataclass(frozen=True)
class EquivarianceTriple:
    """Input, hidden, and output representations of one group."""

    rho: Representation
    psi: Representation
    phi: Representation

    def __post_init__(self):
        if not (self.rho.group is self.psi.group is self.phi.group
                or self.rho.group == self.psi.group == self.phi.group):
            raise ValueError("representations must share one group")


@dataclass(frozen=True)
class EquivarianceVerdict:
    ok: bool
    element: Optional[str] = None
    point: Optional[Vec] = None


def _compose_input(net: TwoLayerNet, rho: Representation,
                   g: int) -> TwoLayerNet:
    """The net x -> F(rho_g x); channel vectors become rho_g^T alpha_i."""
    alphas = tuple(rho.transposed_apply(g, a) for a in net.alphas)
    return TwoLayerNet(net.n, net.d, alphas, net.betas)


def _compose_output(net: TwoLayerNet, phi: Representation,
                    g: int) -> TwoLayerNet:
    """The net x -> phi_g F(x); output weights become phi_g beta_i."""
    betas = tuple(mat_vec(phi.matrix(g), b) for b in net.betas)
    return TwoLayerNet(net.n, net.d, net.alphas, betas)


def is_equivariant(net: TwoLayerNet, rho: Representation,
                   phi: Optional[Representation] = None) -> EquivarianceVerdict:
    """Decide F(rho_g x) = phi_g F(x) for all g, with a witness on failure.

    phi=None means the trivial (invariant) case.
    """
    require_rational(net)
    if rho.dim != net.n:
        raise ValueError(f"input representation dim {rho.dim} != n={net.n}")
    if phi is None:
        phi = trivial_representation(rho.group, net.d)
    if phi.dim != net.d:
        raise ValueError(f"output representation dim {phi.dim} != d={net.d}")
    for g in range(rho.group.order):
        left = _compose_input(net, rho, g)
        right = _compose_output(net, phi, g)
        witness = nets_value_witness(left, right)
        if witness is not None:
            return EquivarianceVerdict(False, rho.group.elements[g], witness)
    return EquivarianceVerdict(True)


@dataclass(frozen=True)
class AdmittedVerdict:
    ok: bool
    element: Optional[str] = None
    row: Optional[int] = None
    reason: Optional[str] = None


def matrix_admitted_failure(m: Mat) -> Optional[tuple[int, str]]:
    """(row, reason) of the first row violating the generalized positive
    permutation shape, or None when the matrix is admitted."""
    size = len(m)
    col_seen = [False] * size
    for i, row in enumerate(m):
        nonzero = [j for j in range(size) if row[j] != 0]
        if len(nonzero) == 0:
            return i, "zero-row"
        if len(nonzero) > 1:
            return i, "multiple-nonzeros-in-row"
        j = nonzero[0]
        if row[j] < 0:
            return i, "negative-entry"
        if col_seen[j]:
            return i, "column-reused"
        col_seen[j] = True
    return None


def is_admitted(psi: Representation) -> AdmittedVerdict:
    """True iff every psi_g is a generalized permutation matrix with
    exclusively positive nonzero entries (i.e. commutes with ReLU)."""
    for g in range(psi.group.order):
        failure = matrix_admitted_failure(psi.matrix(g))
        if failure is not None:
            row, reason = failure
            return AdmittedVerdict(False, psi.group.elements[g], row, reason)
    return AdmittedVerdict(True)


def relu_commutation_counterexample(m: Mat) -> Optional[Vec]:
    """A vector x with m @ relu(x) != relu(m @ x), built from the failing
    row of a non-admitted matrix; None when m is admitted."""
    failure = matrix_admitted_failure(m)
    if failure is None:
        return None
    i, reason = failure
    size = len(m)
    row = m[i]
    nonzero = [j for j in range(size) if row[j] != 0]
    if reason == "multiple-nonzeros-in-row":
        j, k = nonzero[0], nonzero[1]
        if row[j] > row[k]:
            j, k = k, j
        return tuple(Fraction(1 if c == j else -1 if c == k else 0)
                     for c in range(size))
    if reason == "negative-entry":
        j = nonzero[0]
        return tuple(Fraction(1 if c == j else 0) for c in range(size))
    # zero-row / column-reused: the matrix is singular, but a reused column
    # always co-occurs with some other violating row; fall back to probing
    # basis vectors and differences.
    candidates = [tuple(Fraction(1 if c == j else 0) for c in range(size))
                  for j in range(size)]
    candidates += [tuple(Fraction(1 if c == j else -1 if c == k else 0)
                         for c in range(size))
                   for j in range(size) for k in range(size) if j != k]
    for x in candidates:
        relu_x = tuple(t if t > 0 else Fraction(0) for t in x)
        lhs = mat_vec(m, relu_x)
        mx = mat_vec(m, x)
        rhs = tuple(t if t > 0 else Fraction(0) for t in mx)
        if lhs != rhs:
            return x
    return None


def permutation_of(psi_g: Mat) -> tuple[tuple[int, ...], tuple[Fraction, ...]]:
    """The permutation P with P(i) = column of the unique nonzero in row i,
    and the positive scale factors lambda_i at those positions."""
    if matrix_admitted_failure(psi_g) is not None:
        raise ValueError("matrix is not an admitted (generalized positive "
                         "permutation) matrix")
    perm = []
    scales = []
    for row in psi_g:
        j = next(c for c in range(len(row)) if row[c] != 0)
        perm.append(j)
        scales.append(row[j])
    return tuple(perm), tuple(scales)


@dataclass(frozen=True)
class LenVerdict:
    ok: bool
    condition: Optional[str] = None  # "first-layer" | "last-layer" | "admitted"
    element: Optional[str] = None


def _first_layer_matrix(net: TwoLayerNet) -> Mat:
    return tuple(net.alphas)  # m x n, rows are the channel vectors


def _second_layer_matrix(net: TwoLayerNet) -> Mat:
    return tuple(tuple(b[j] for b in net.betas) for j in range(net.d))  # d x m


def is_len(net: TwoLayerNet, triple: EquivarianceTriple) -> LenVerdict:
    """Layer-wise equivariance: W1 rho_g = psi_g W1, phi_g W2 = W2 psi_g,
    and psi admitted, all exactly per group element."""
    require_rational(net)
    rho, psi, phi = triple.rho, triple.psi, triple.phi
    if rho.dim != net.n or phi.dim != net.d or psi.dim != net.m:
        raise ValueError("representation dimensions do not match the network")
    w1 = _first_layer_matrix(net)
    w2 = _second_layer_matrix(net)
    group = rho.group
    for g in range(group.order):
        if mat_mul(w1, rho.matrix(g)) != mat_mul(psi.matrix(g), w1):
            return LenVerdict(False, "first-layer", group.elements[g])
    for g in range(group.order):
        if mat_mul(phi.matrix(g), w2) != mat_mul(w2, psi.matrix(g)):
            return LenVerdict(False, "last-layer", group.elements[g])
    admitted = is_admitted(psi)
    if not admitted.ok:
        return LenVerdict(False, "admitted", admitted.element)
    return LenVerdict(True)


@dataclass(frozen=True)
class OrbitAlignment:
    """Connected components of the neuron-index action with the positive
    proportionality constants tying the output weights together.

    Within a component with representative r, beta_i = scale[i] * beta_r and
    scale[r] = 1.  ``permuting`` records whether every psi_g scale factor is
    1 (a plain permutation representation).
    """

    components: tuple[tuple[int, ...], ...]
    scales: tuple[Fraction, ...]
    component_of: tuple[int, ...]
    permuting: bool
    violations: tuple[str, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return not self.violations


def check_orbit_alignment(net: TwoLayerNet, psi: Representation,
                          phi: Optional[Representation] = None) -> OrbitAlignment:
    """Verify Lemma-4 alignment: connected output weights are positive
    multiples of each other with element-independent factors."""
    require_rational(net)
    if psi.dim != net.m:
        raise ValueError(f"hidden representation dim {psi.dim} != m={net.m}")
    admitted = is_admitted(psi)
    if not admitted.ok:
        raise ValueError(f"hidden representation is not admitted "
                         f"(element {admitted.element}, row {admitted.row})")
    if phi is not None and phi.matrices != trivial_representation(
            phi.group, phi.dim).matrices:
        raise ValueError("orbit alignment is defined for invariant networks "
                         "(trivial output representation)")
    perms = [permutation_of(psi.matrix(g)) for g in range(psi.group.order)]
    permuting = all(all(s == 1 for s in scales) for _, scales in perms)

    m = net.m
    violations: list[str] = []
    # factor[i][j] over connected pairs, checked for element independence
    factor: dict[tuple[int, int], Fraction] = {}
    adjacency: dict[int, set[int]] = {i: set() for i in range(m)}
    for g, (perm, scales) in enumerate(perms):
        for i in range(m):
            j = perm[i]
            adjacency[i].add(j)
            adjacency[j].add(i)
            lam = scales[i]
            prev = factor.get((i, j))
            if prev is None:
                factor[(i, j)] = lam
            elif prev != lam:
                msg = (f"pair ({i},{j}): inconsistent scale across elements "
                       f"({prev} vs {lam} at {psi.group.elements[g]})")
                if msg not in violations:
                    violations.append(msg)
            # alignment: beta_j must equal lambda * beta_i exactly
            if vscale(lam, net.betas[i]) != net.betas[j]:
                msg = f"pair ({i},{j}): beta_{j} != {lam} * beta_{i}"
                if msg not in violations:
                    violations.append(msg)

    # connected components via BFS
    component_of = [-1] * m
    components: list[tuple[int, ...]] = []
    for start in range(m):
        if component_of[start] != -1:
            continue
        comp = []
        stack = [start]
        component_of[start] = len(components)
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in adjacency[u]:
                if component_of[w] == -1:
                    component_of[w] = len(components)
                    stack.append(w)
        components.append(tuple(sorted(comp)))

    # positive scale of each neuron relative to its component representative
    scales_rel = [Fraction(1)] * m
    for comp in components:
        rep = comp[0]
        scales_rel[rep] = Fraction(1)
        pending = [rep]
        seen = {rep}
        while pending:
            u = pending.pop()
            for perm, lam_scales in perms:
                v = perm[u]
                if v not in seen:
                    scales_rel[v] = scales_rel[u] * lam_scales[u]
                    seen.add(v)
                    pending.append(v)
    return OrbitAlignment(tuple(components), tuple(scales_rel),
                          tuple(component_of), permuting, tuple(violations))


def project_equivariant(net: TwoLayerNet, rho: Representation,
                        phi: Optional[Representation] = None) -> TwoLayerNet:
    """Group-averaging projection realized as an m*|G|-neuron network.

    Channels are rho_g^T alpha_i and output weights phi_g^{-1} beta_i / |G|;
    the output function is (1/|G|) sum_g phi_g^{-1} F(rho_g x), which is the
    projection onto the equivariant space.
    """
    if rho.dim != net.n:
        raise ValueError(f"input representation dim {rho.dim} != n={net.n}")
    group = rho.group
    if phi is None:
        phi = trivial_representation(group, net.d)
    if phi.dim != net.d:
        raise ValueError(f"output representation dim {phi.dim} != d={net.d}")
    size = Fraction(group.order)
    alphas: list[Vec] = []
    betas: list[Vec] = []
    for i in range(net.m):
        for g in range(group.order):
            alphas.append(rho.transposed_apply(g, net.alphas[i]))
            scaled = mat_vec(phi.inverse_matrix(g), net.betas[i])
            betas.append(vscale(Fraction(1) / size, scaled))
    return TwoLayerNet(net.n, net.d, tuple(alphas), tuple(betas))
