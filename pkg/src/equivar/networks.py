"""Two-layer and multilayer ReLU networks, values, and feature functions.

A TwoLayerNet holds the channel vectors (rows of the first weight matrix)
and the output weight columns.  Entries are exact rationals on every
verification path; the optimizer uses the same container with floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .rational import Mat, Vec, is_zero, outer, vdot


class NotGenericError(ValueError):
    """Raised when a point lies on the activation hyperplane of a channel."""

    def __init__(self, channel_index: int):
        super().__init__(
            f"point lies on the hyperplane of channel {channel_index}")
        self.channel_index = channel_index


@dataclass(frozen=True)
class TwoLayerNet:
    """sum_i beta_i * relu(<alpha_i, x>), bias-free."""

    n: int
    d: int
    alphas: tuple[Vec, ...]
    betas: tuple[Vec, ...]

    def __post_init__(self):
        if len(self.alphas) != len(self.betas):
            raise ValueError("need one output weight per channel")
        if any(len(a) != self.n for a in self.alphas):
            raise ValueError(f"all channel vectors must have length {self.n}")
        if any(len(b) != self.d for b in self.betas):
            raise ValueError(f"all output weights must have length {self.d}")

    @property
    def m(self) -> int:
        return len(self.alphas)

    def is_rational(self) -> bool:
        return all(isinstance(x, (Fraction, int))
                   for v in self.alphas + self.betas for x in v)


def require_rational(*nets: TwoLayerNet) -> None:
    for net in nets:
        if not net.is_rational():
            raise TypeError("exact operation requires rational weights")


def evaluate(net: TwoLayerNet, x: Vec) -> Vec:
    """Network value at x; exact when weights and x are rational."""
    if len(x) != net.n:
        raise ValueError(f"input length {len(x)} != n={net.n}")
    zero = x[0] * 0 if x else 0
    out = [zero] * net.d
    for a, b in zip(net.alphas, net.betas):
        t = vdot(a, x)
        if t > 0:
            for j in range(net.d):
                out[j] += b[j] * t
    return tuple(out)


def feature_at(net: TwoLayerNet, x: Vec) -> Mat:
    """The n x d feature value sum_{active i} alpha_i beta_i^T at a generic x.

    Raises NotGenericError if x lies on the hyperplane of a nonzero channel.
    Satisfies evaluate(net, x) = feature_at(net, x)^T x.
    """
    if len(x) != net.n:
        raise ValueError(f"input length {len(x)} != n={net.n}")
    acc = [[Fraction(0)] * net.d for _ in range(net.n)]
    for i, (a, b) in enumerate(zip(net.alphas, net.betas)):
        if is_zero(a):
            continue
        t = vdot(a, x)
        if t == 0:
            raise NotGenericError(i)
        if t > 0:
            for r in range(net.n):
                for c in range(net.d):
                    acc[r][c] += a[r] * b[c]
    return tuple(tuple(row) for row in acc)


def feature_outer(alpha: Vec, beta: Vec) -> Mat:
    """alpha beta^T, one channel's contribution to the feature function."""
    return outer(alpha, beta)


@dataclass(frozen=True)
class MultiLayerNet:
    """W^(L) relu(W^(L-1) relu(... relu(W^(1) x)...)) with a linear last layer."""

    weights: tuple[Mat, ...]

    def __post_init__(self):
        if not self.weights:
            raise ValueError("need at least one layer")
        for a, b in zip(self.weights, self.weights[1:]):
            if len(b[0]) != len(a):
                raise ValueError("consecutive layer dimensions disagree")

    @property
    def input_dim(self) -> int:
        return len(self.weights[0][0])

    @property
    def output_dim(self) -> int:
        return len(self.weights[-1])

    @property
    def depth(self) -> int:
        return len(self.weights)


def evaluate_multilayer(net: MultiLayerNet, x: Vec) -> Vec:
    if len(x) != net.input_dim:
        raise ValueError(f"input length {len(x)} != {net.input_dim}")
    h = x
    for layer, w in enumerate(net.weights):
        h = tuple(vdot(row, h) for row in w)
        if layer < len(net.weights) - 1:
            h = tuple(t if t > 0 else 0 * t for t in h)
    return h


def two_layer_as_multilayer(net: TwoLayerNet) -> MultiLayerNet:
    w1 = tuple(net.alphas)
    w2 = tuple(tuple(b[j] for b in net.betas) for j in range(net.d))
    return MultiLayerNet((w1, w2))
