"""Constructive network rewrites: symmetrization of layer-wise equivariant
nets, orbit expansion of arbitrary nets into layer-wise equivariant form,
and orbit compression down to pairwise non-parallel channels.

Every transform is function-preserving with respect to its mathematical
target (the input itself, or its group-averaging projection) and all
weights stay rational throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .equality import nets_equal_exact
from .equivariance import (
    EquivarianceTriple,
    check_orbit_alignment,
    is_equivariant,
    is_len,
    permutation_of,
)
from .geometry import boundary_hyperplanes
from .groups import (
    FiniteGroup,
    Representation,
    normalized_orbits_relation,
    orbit_transposed,
    trivial_representation,
)
from .networks import MultiLayerNet, TwoLayerNet, require_rational
from .rational import (
    Mat,
    Vec,
    canon_direction,
    is_zero,
    mat_mul,
    scale_factor,
    transpose,
    vdot,
    vscale,
    zeros,
)


def permuting_representation(group: FiniteGroup,
                             perms: list[tuple[int, ...]]) -> Representation:
    """Build the permutation-matrix representation from per-element index
    maps P_g, where neuron i is carried to P_g(i)."""
    size = len(perms[0]) if perms else 0
    matrices = []
    for perm in perms:
        rows = []
        for i in range(size):
            rows.append(tuple(Fraction(1 if j == perm[i] else 0)
                              for j in range(size)))
        matrices.append(tuple(rows))
    return Representation.from_matrices(group, matrices)


@dataclass(frozen=True)
class SymmetrizedLen:
    """A same-size rewrite of a layer-wise equivariant net whose channel
    multiset is exactly closed under the transposed input representation.

    ``provenance`` maps each neuron index to (orbit block index, name of the
    group element carrying the block representative to that neuron).
    """

    net: TwoLayerNet
    psi: Representation
    provenance: tuple[tuple[int, str], ...]

    def blocks(self) -> tuple[tuple[int, ...], ...]:
        count = 1 + max((b for b, _ in self.provenance), default=-1)
        out: list[list[int]] = [[] for _ in range(count)]
        for i, (b, _) in enumerate(self.provenance):
            out[b].append(i)
        return tuple(tuple(b) for b in out)


def symmetrize_len(net: TwoLayerNet, rho: Representation,
                   psi: Representation) -> SymmetrizedLen:
    """Rewrite an invariant layer-wise equivariant net, preserving its size
    and function, so the channel multiset is closed under rho_g^T.

    Each neuron is rescaled by the positive alignment constant of its orbit
    block: beta_i/c_i against c_i*alpha_i.  After the rescaling the hidden
    representation becomes a plain permutation.  Neurons with beta_i = 0
    contribute nothing and are dropped first.
    """
    triple = EquivarianceTriple(
        rho, psi, trivial_representation(rho.group, net.d))
    verdict = is_len(net, triple)
    if not verdict.ok:
        raise ValueError(f"not a layer-wise equivariant net: condition "
                         f"'{verdict.condition}' fails at {verdict.element}")
    keep = [i for i in range(net.m) if not is_zero(net.betas[i])]
    group = rho.group
    if len(keep) < net.m:
        # zero-output neurons form an invariant index subset; restrict psi
        sub = [tuple(tuple(psi.matrix(g)[i][j] for j in keep) for i in keep)
               for g in range(group.order)]
        psi = Representation.from_matrices(group, sub)
        net = TwoLayerNet(net.n, net.d,
                          tuple(net.alphas[i] for i in keep),
                          tuple(net.betas[i] for i in keep))
    alignment = check_orbit_alignment(net, psi)
    if not alignment.ok:
        raise ValueError("output weights are not orbit-aligned: "
                         + "; ".join(alignment.violations))
    scales = alignment.scales
    alphas = tuple(vscale(scales[i], net.alphas[i]) for i in range(net.m))
    betas = tuple(vscale(Fraction(1) / scales[i], net.betas[i])
                  for i in range(net.m))
    rewritten = TwoLayerNet(net.n, net.d, alphas, betas)

    perms = [permutation_of(psi.matrix(g))[0] for g in range(group.order)]
    new_psi = permuting_representation(group, perms)
    provenance: list[tuple[int, str]] = [(-1, "")] * net.m
    for block_index, comp in enumerate(alignment.components):
        rep = comp[0]
        for g in range(group.order):
            target = perms[g][rep]
            if provenance[target][0] == -1:
                provenance[target] = (block_index, group.elements[g])
    assert all(b != -1 for b, _ in provenance)
    return SymmetrizedLen(rewritten, new_psi, tuple(provenance))


def expand_to_len(net: TwoLayerNet,
                  rho: Representation) -> tuple[TwoLayerNet, Representation]:
    """The m*|G|-neuron layer-wise equivariant net realizing the
    group-averaging projection of the input.

    Block i holds the channels rho_g^T alpha_i over all g with output
    weight beta_i/|G|; the hidden representation permutes each block by
    right translation.  For an invariant input the result computes the same
    function as the input.
    """
    require_rational(net)
    if rho.dim != net.n:
        raise ValueError(f"input representation dim {rho.dim} != n={net.n}")
    group = rho.group
    order = group.order
    alphas: list[Vec] = []
    betas: list[Vec] = []
    for i in range(net.m):
        for g in range(order):
            alphas.append(rho.transposed_apply(g, net.alphas[i]))
            betas.append(vscale(Fraction(1, order), net.betas[i]))
    perms = []
    for g in range(order):
        perm = [0] * (net.m * order)
        for i in range(net.m):
            for k in range(order):
                perm[i * order + k] = i * order + group.mul(k, g)
        perms.append(tuple(perm))
    psi = permuting_representation(group, perms)
    return TwoLayerNet(net.n, net.d, tuple(alphas), tuple(betas)), psi


def expanded_as_symmetrized(expanded: TwoLayerNet, psi: Representation,
                            source_m: int,
                            group: FiniteGroup) -> SymmetrizedLen:
    """View an expand_to_len output directly as a SymmetrizedLen (its
    channel multiset is already closed and its betas are block-uniform)."""
    provenance = []
    for i in range(source_m):
        for k in range(group.order):
            provenance.append((i, group.elements[k]))
    return SymmetrizedLen(expanded, psi, tuple(provenance))


def _rank_factorization(m: Mat) -> list[tuple[Vec, Vec]]:
    """Exact decomposition of a matrix into rank-one terms u v^T."""
    rows = [list(r) for r in m]
    n = len(rows)
    d = len(rows[0]) if rows else 0
    terms: list[tuple[Vec, Vec]] = []
    while True:
        pivot = next(((i, j) for i in range(n) for j in range(d)
                      if rows[i][j] != 0), None)
        if pivot is None:
            return terms
        i0, j0 = pivot
        u = tuple(rows[r][j0] for r in range(n))
        v = tuple(rows[i0][c] / rows[i0][j0] for c in range(d))
        terms.append((u, v))
        for r in range(n):
            for c in range(d):
                rows[r][c] -= u[r] * v[c]


@dataclass(frozen=True)
class CompressedClass:
    representative: Vec          # canonical-minimal orbit member
    coefficient: Vec             # orbit-form output weight after merging
    orbit_size: int
    stabilizer_size: int


@dataclass(frozen=True)
class CompressionResult:
    """Outcome of orbit compression.

    ``net`` carries one channel per distinct orbit member plus, when an
    exactly cancelling antipodal pair was found, a minimal channel pair per
    rank-one piece of the linear remainder (reported separately in
    ``linear_remainder``).
    """

    net: TwoLayerNet
    classes: tuple[CompressedClass, ...]
    linear_remainder: Optional[Mat]
    nonlinear_channels: int
    remainder_channels: int


def compress_orbits(sym: SymmetrizedLen, rho: Representation) -> CompressionResult:
    """Merge orbit blocks with equal normalized orbits, collapse stabilizer
    multiplicity, and extract any exactly linear antipodal remainder.

    The result computes the same function with no two channel vectors of
    the same direction.
    """
    net = sym.net
    require_rational(net)
    group = rho.group
    order = group.order

    # orbit-form coefficients: block function = coeff * sum_{g in G} relu(...)
    blocks = sym.blocks()
    class_reps: list[Vec] = []
    class_coeffs: list[Vec] = []
    for comp in blocks:
        rep_idx = comp[0]
        rep_vec = net.alphas[rep_idx]
        if is_zero(rep_vec):
            continue  # zero channels contribute relu(0) = 0
        if any(net.betas[i] != net.betas[rep_idx] for i in comp):
            raise ValueError("orbit block output weights are not uniform; "
                             "input is not in symmetrized orbit form")
        coeff = vscale(Fraction(len(comp), order), net.betas[rep_idx])
        class_reps.append(rep_vec)
        class_coeffs.append(coeff)

    # merge classes whose normalized orbits coincide
    merged: dict[frozenset, tuple[Vec, list[Vec]]] = {}
    merged_order: list[frozenset] = []
    for rep_vec, coeff in zip(class_reps, class_coeffs):
        orbit = orbit_transposed(rho, rep_vec)
        key = frozenset(canon_direction(w) for w in orbit.members)
        if key not in merged:
            canonical_rep = min(canon_direction(w) for w in orbit.members)
            merged[key] = (canonical_rep, [zeros(net.d)])
            merged_order.append(key)
        canonical_rep, acc = merged[key]
        k = normalized_orbits_relation(rho, rep_vec, canonical_rep)
        assert k is not None and k > 0
        acc[0] = tuple(a + k * c for a, c in zip(acc[0], coeff))

    # collapse stabilizers and assemble channels
    classes: list[CompressedClass] = []
    channels: list[tuple[Vec, Vec]] = []
    for key in merged_order:
        rep_vec, acc = merged[key]
        coeff = acc[0]
        if all(c == 0 for c in coeff):
            continue
        orbit = orbit_transposed(rho, rep_vec)
        stab = len(orbit.stabilizer_indices)
        beta = vscale(Fraction(stab), coeff)
        classes.append(CompressedClass(rep_vec, coeff,
                                       len(orbit.members), stab))
        for w in orbit.members:
            channels.append((w, beta))

    # extract exactly-linear antipodal pairs: b*relu(t) + b'*relu(-kt) is
    # linear iff b' = -b/k, contributing <w, x> b per pair
    remainder = [[Fraction(0)] * net.d for _ in range(net.n)]
    by_line: dict[Vec, list[int]] = {}
    for idx, (w, _) in enumerate(channels):
        by_line.setdefault(tuple(canon_direction(w)), []).append(idx)
    drop: set[int] = set()
    for direction, idxs in by_line.items():
        assert len(idxs) == 1, "duplicate channel direction after merging"
        opposite = by_line.get(tuple(-x for x in direction))
        if not opposite or direction < tuple(-x for x in direction):
            continue  # handle each antipodal line pair once
        i, j = idxs[0], opposite[0]
        w, b = channels[i]
        w2, b2 = channels[j]
        k = scale_factor(w2, w)
        assert k is not None and k < 0
        # b*relu(t) + b2*relu(k t) is linear in t iff b2 = b/k
        if b2 == vscale(Fraction(1) / k, b):
            drop.update((i, j))
            for r in range(net.n):
                for c in range(net.d):
                    remainder[r][c] += w[r] * b[c]
    kept = [ch for idx, ch in enumerate(channels) if idx not in drop]

    remainder_mat = tuple(tuple(row) for row in remainder)
    remainder_channels: list[tuple[Vec, Vec]] = []
    has_remainder = any(x != 0 for row in remainder_mat for x in row)
    if has_remainder:
        for u, v in _rank_factorization(remainder_mat):
            remainder_channels.append((u, v))
            remainder_channels.append((tuple(-x for x in u),
                                       tuple(-x for x in v)))

    alphas = tuple(w for w, _ in kept + remainder_channels)
    betas = tuple(b for _, b in kept + remainder_channels)
    out = TwoLayerNet(net.n, net.d, alphas, betas)
    return CompressionResult(out, tuple(classes),
                             remainder_mat if has_remainder else None,
                             len(kept), len(remainder_channels))


def block_permutation_representation(group: FiniteGroup,
                                     block_dim: int) -> Representation:
    """|G| copies of an identity block permuted by right translation:
    psi_g sends block a to block a*g."""
    order = group.order
    size = order * block_dim
    matrices = []
    for g in range(order):
        rows = [[Fraction(0)] * size for _ in range(size)]
        for a in range(order):
            b = group.mul(a, g)
            for t in range(block_dim):
                rows[a * block_dim + t][b * block_dim + t] = Fraction(1)
        matrices.append(tuple(tuple(r) for r in rows))
    return Representation.from_matrices(group, matrices)


def expand_multilayer(net: MultiLayerNet, rho: Representation,
                      phi: Representation) -> MultiLayerNet:
    """Multilayer analogue of expand_to_len: the first layer stacks
    W1 rho_g over g, interior layers are block-diagonal copies, and the
    last layer averages phi_g^{-1} W_L over g.  The result computes
    (1/|G|) sum_g phi_g^{-1} F(rho_g x) and intertwines layer-wise with
    the block right-translation permutations.
    """
    if rho.dim != net.input_dim:
        raise ValueError(f"input representation dim {rho.dim} != "
                         f"{net.input_dim}")
    if phi.dim != net.output_dim:
        raise ValueError(f"output representation dim {phi.dim} != "
                         f"{net.output_dim}")
    group = rho.group
    order = group.order
    first = net.weights[0]
    stacked: list[Vec] = []
    for g in range(order):
        for row in mat_mul(first, rho.matrix(g)):
            stacked.append(row)
    layers: list[Mat] = [tuple(stacked)]
    for w in net.weights[1:-1]:
        rows_out = len(w)
        cols = len(w[0])
        big: list[Vec] = []
        for g in range(order):
            for r in range(rows_out):
                row = [Fraction(0)] * (cols * order)
                for c in range(cols):
                    row[g * cols + c] = w[r][c]
                big.append(tuple(row))
        layers.append(tuple(big))
    last = net.weights[-1]
    cols = len(last[0])
    rows_out = len(last)
    final: list[list[Fraction]] = [[Fraction(0)] * (cols * order)
                                   for _ in range(rows_out)]
    inv_order = Fraction(1, order)
    for g in range(order):
        block = mat_mul(phi.inverse_matrix(g), last)
        for r in range(rows_out):
            for c in range(cols):
                final[r][g * cols + c] = inv_order * block[r][c]
    layers.append(tuple(tuple(r) for r in final))
    return MultiLayerNet(tuple(layers))


@dataclass(frozen=True)
class DoubleSizeReport:
    input_neurons: int
    output_neurons: int
    boundary_count: int
    within_double_plus_two: bool   # m' <= 2N + 2
    within_double: bool            # m' <= 2m
    function_equal: bool
    linear_remainder_extracted: bool


def double_size_bound_check(invariant_gen: TwoLayerNet,
                            rho: Representation
                            ) -> tuple[CompressionResult, DoubleSizeReport]:
    """Run expand -> symmetrized orbit form -> compress on an invariant net
    and check the compressed size against both size-bound readings."""
    require_rational(invariant_gen)
    verdict = is_equivariant(invariant_gen, rho)
    if not verdict.ok:
        raise ValueError(f"input is not invariant (element "
                         f"{verdict.element}, point {verdict.point})")
    boundaries = boundary_hyperplanes(invariant_gen)
    expanded, psi = expand_to_len(invariant_gen, rho)
    sym = expanded_as_symmetrized(expanded, psi, invariant_gen.m, rho.group)
    compressed = compress_orbits(sym, rho)
    m_in = invariant_gen.m
    m_out = compressed.net.m
    n_planes = len(boundaries)
    equal = nets_equal_exact(compressed.net, invariant_gen)
    report = DoubleSizeReport(
        input_neurons=m_in,
        output_neurons=m_out,
        boundary_count=n_planes,
        within_double_plus_two=m_out <= 2 * n_planes + 2,
        within_double=m_out <= 2 * m_in,
        function_equal=equal,
        linear_remainder_extracted=compressed.linear_remainder is not None,
    )
    if not equal:
        raise RuntimeError("compression pipeline failed to preserve the "
                           "function; this is a bug")
    return compressed, report
