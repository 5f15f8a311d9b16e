"""Classical-quantum channels on single and product alphabets.

A channel maps a finite alphabet to density matrices. Product-alphabet
channels keep a flat base channel whose tuple labels are the per-axis
letters joined by commas, in row-major order (last axis fastest). Channels
are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product as _cartesian
from typing import Sequence

import numpy as np

from .errors import (
    AxisOutOfRange,
    DimensionMismatch,
    InvalidEnsemble,
    LengthMismatch,
    ShapeMismatch,
    UnknownLetter,
)
from .quantum import DensityMatrix, ProbDist, mix, validate_state

LABEL_SEP = ","


@dataclass(frozen=True, eq=False)
class CqChannel:
    """A finite alphabet mapped to same-dimension density matrices."""

    alphabet: tuple[str, ...]
    dim: int
    states: tuple[DensityMatrix, ...]

    def __post_init__(self):
        if len(self.alphabet) < 1:
            raise ShapeMismatch("alphabet must carry at least one letter")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ShapeMismatch("alphabet labels must be distinct")
        if len(self.states) != len(self.alphabet):
            raise LengthMismatch(
                f"{len(self.states)} states for {len(self.alphabet)} letters"
            )
        for label, s in zip(self.alphabet, self.states):
            if s.dim != self.dim:
                raise DimensionMismatch(
                    f"state at {label!r} has dimension {s.dim}, expected {self.dim}"
                )

    @classmethod
    def from_states(cls, alphabet, states: Sequence[DensityMatrix]) -> "CqChannel":
        states = tuple(states)
        if not states:
            raise ShapeMismatch("need at least one state")
        return cls(
            alphabet=tuple(str(a) for a in alphabet),
            dim=states[0].dim,
            states=states,
        )

    @classmethod
    def from_arrays(cls, alphabet, arrays) -> "CqChannel":
        return cls.from_states(alphabet, [validate_state(a) for a in arrays])

    def letter_index(self, letter: str) -> int:
        try:
            return self.alphabet.index(letter)
        except ValueError:
            raise UnknownLetter(f"letter {letter!r} is not in the alphabet") from None

    @cached_property
    def _stack(self) -> np.ndarray:
        return np.stack([s.entries for s in self.states])

    def stacked(self) -> np.ndarray:
        """All states as one (n, dim, dim) complex array (shared; do not mutate)."""
        return self._stack


@dataclass(frozen=True, eq=False)
class MultipartiteChannel:
    """A channel whose alphabet is the cartesian product of k axis alphabets."""

    axes: tuple[tuple[str, ...], ...]
    base: CqChannel

    def __post_init__(self):
        if len(self.axes) < 1:
            raise ShapeMismatch("need at least one axis")
        expected = [LABEL_SEP.join(t) for t in _cartesian(*self.axes)]
        if list(self.base.alphabet) != expected:
            raise ShapeMismatch(
                "base alphabet is not the row-major product of the axes"
            )

    @property
    def k(self) -> int:
        return len(self.axes)

    @property
    def dim(self) -> int:
        return self.base.dim

    def axis_sizes(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.axes)

    @classmethod
    def build(cls, axes, states: Sequence[DensityMatrix]) -> "MultipartiteChannel":
        axes = tuple(tuple(str(x) for x in a) for a in axes)
        labels = [LABEL_SEP.join(t) for t in _cartesian(*axes)]
        return cls(axes=axes, base=CqChannel.from_states(labels, states))

    @classmethod
    def wrap(cls, channel: CqChannel) -> "MultipartiteChannel":
        """View a plain channel as arity 1 (the recursion base for k > 2)."""
        return cls(axes=(tuple(channel.alphabet),), base=channel)

    def flat_index(self, tuple_index: Sequence[int]) -> int:
        """Row-major flat index of a tuple of per-axis letter indices."""
        sizes = self.axis_sizes()
        if len(tuple_index) != self.k:
            raise ShapeMismatch(f"expected {self.k} indices, got {len(tuple_index)}")
        flat = 0
        for i, (ti, sz) in enumerate(zip(tuple_index, sizes)):
            if not 0 <= ti < sz:
                raise AxisOutOfRange(f"index {ti} out of range for axis {i}")
            flat = flat * sz + ti
        return flat

    def tuple_index(self, flat: int) -> tuple[int, ...]:
        """Inverse of :meth:`flat_index`."""
        sizes = self.axis_sizes()
        n = int(np.prod(sizes))
        if not 0 <= flat < n:
            raise AxisOutOfRange(f"flat index {flat} out of range for {n} tuples")
        out = []
        for sz in reversed(sizes):
            out.append(flat % sz)
            flat //= sz
        return tuple(reversed(out))


@dataclass(frozen=True, eq=False)
class DerivedCollection:
    """Per-letter conditional distributions over one axis's complementary tuples."""

    axis: int
    dists: tuple[ProbDist, ...]


def _complement_axes(channel: MultipartiteChannel, axis: int):
    return channel.axes[:axis] + channel.axes[axis + 1 :]


def _complement_size(channel: MultipartiteChannel, axis: int) -> int:
    return int(np.prod([len(a) for a in _complement_axes(channel, axis)]))


def complement_alphabet(channel: MultipartiteChannel, axis: int) -> tuple[str, ...]:
    """Row-major tuple labels of all axes except ``axis``."""
    if not 0 <= axis < channel.k:
        raise AxisOutOfRange(f"axis {axis} for arity {channel.k}")
    rest = _complement_axes(channel, axis)
    return tuple(LABEL_SEP.join(t) for t in _cartesian(*rest))


def slice_channel(channel: MultipartiteChannel, axis: int, letter: str):
    """Fix one axis letter and return the channel on the complementary axes.

    Arity drops by one; a bipartite input collapses to a plain CqChannel.
    """
    k = channel.k
    if not 0 <= axis < k:
        raise AxisOutOfRange(f"axis {axis} for arity {k}")
    if k < 2:
        raise AxisOutOfRange("cannot slice an arity-1 channel")
    ax = channel.axes[axis]
    if letter not in ax:
        raise UnknownLetter(f"letter {letter!r} is not in axis {axis}")
    li = ax.index(letter)
    sizes = channel.axis_sizes()
    rest_axes = _complement_axes(channel, axis)
    rest_sizes = [len(a) for a in rest_axes]
    comp = int(np.prod(rest_sizes))
    multi = list(np.unravel_index(np.arange(comp), rest_sizes))
    full = multi[:axis] + [np.full(comp, li)] + multi[axis:]
    src = np.ravel_multi_index(full, sizes)
    states = [channel.base.states[int(j)] for j in src]
    if k == 2:
        return CqChannel.from_states(rest_axes[0], states)
    return MultipartiteChannel.build(rest_axes, states)


def _slice_states(sliced) -> tuple[DensityMatrix, ...]:
    return sliced.states if isinstance(sliced, CqChannel) else sliced.base.states


def _check_collection(channel: MultipartiteChannel, coll: DerivedCollection) -> None:
    if not 0 <= coll.axis < channel.k:
        raise AxisOutOfRange(f"axis {coll.axis} for arity {channel.k}")
    if channel.k < 2:
        raise AxisOutOfRange("deriving needs at least two axes")
    nx = len(channel.axes[coll.axis])
    comp = _complement_size(channel, coll.axis)
    if len(coll.dists) != nx:
        raise ShapeMismatch(f"{len(coll.dists)} conditionals for {nx} letters")
    for i, dist in enumerate(coll.dists):
        if dist.n != comp:
            raise ShapeMismatch(
                f"conditional {i} has support {dist.n}, expected {comp}"
            )


def _derive_from_slices(axis_alphabet, slices, dists) -> CqChannel:
    states = [mix(dist, _slice_states(sl)) for sl, dist in zip(slices, dists)]
    return CqChannel.from_states(axis_alphabet, states)


def derive_channel(channel: MultipartiteChannel, coll: DerivedCollection) -> CqChannel:
    """Average the complementary axes: F(x) = E_{t ~ mu_x}[E(x, t)]."""
    _check_collection(channel, coll)
    letters = channel.axes[coll.axis]
    slices = [slice_channel(channel, coll.axis, x) for x in letters]
    return _derive_from_slices(letters, slices, coll.dists)


def point_mass_collection(
    channel: MultipartiteChannel, axis: int, comp_index: int
) -> DerivedCollection:
    """Every letter conditions on the same single complementary tuple."""
    comp = _complement_size(channel, axis)
    nx = len(channel.axes[axis])
    dist = ProbDist.point_mass(comp, comp_index)
    return DerivedCollection(axis=axis, dists=(dist,) * nx)


def uniform_collection(channel: MultipartiteChannel, axis: int) -> DerivedCollection:
    comp = _complement_size(channel, axis)
    nx = len(channel.axes[axis])
    dist = ProbDist.uniform(comp)
    return DerivedCollection(axis=axis, dists=(dist,) * nx)


def random_collection(
    channel: MultipartiteChannel, axis: int, rng: np.random.Generator
) -> DerivedCollection:
    """Independent flat-Dirichlet conditionals for every axis letter."""
    comp = _complement_size(channel, axis)
    nx = len(channel.axes[axis])
    dists = []
    for _ in range(nx):
        w = rng.dirichlet(np.ones(comp))
        dists.append(ProbDist.validated(w / w.sum()))
    return DerivedCollection(axis=axis, dists=tuple(dists))


def _random_state(rng: np.random.Generator, dim: int, ensemble: str) -> DensityMatrix:
    if ensemble == "pure":
        g = rng.standard_normal((2, dim))
        v = g[0] + 1j * g[1]
        v /= np.linalg.norm(v)
        return validate_state(np.outer(v, v.conj()))
    g = rng.standard_normal((2, dim, dim))
    m = g[0] + 1j * g[1]
    rho = m @ m.conj().T
    return validate_state(rho / rho.trace().real)


def random_channel(
    dim: int, axis_sizes: Sequence[int], ensemble: str, seed: int
) -> MultipartiteChannel:
    """Seed-deterministic random channel.

    ``pure`` draws each state as vv† with v a normalized vector of standard
    complex Gaussian entries; ``mixed`` normalizes GG† for a square complex
    Ginibre matrix G.
    """
    if ensemble not in ("pure", "mixed"):
        raise InvalidEnsemble(f"ensemble must be 'pure' or 'mixed', not {ensemble!r}")
    if dim < 1:
        raise ValueError("dim must be positive")
    if len(axis_sizes) < 1 or any(s < 1 for s in axis_sizes):
        raise ValueError("axis sizes must be positive")
    rng = np.random.default_rng(seed)
    n = int(np.prod(axis_sizes))
    states = [_random_state(rng, dim, ensemble) for _ in range(n)]
    axes = [tuple(str(i) for i in range(s)) for s in axis_sizes]
    return MultipartiteChannel.build(axes, states)


def tensor_channel(
    left: MultipartiteChannel, right: MultipartiteChannel
) -> MultipartiteChannel:
    """Product channel: axes concatenate, states are Kronecker products."""
    axes = left.axes + right.axes
    states = [
        validate_state(np.kron(a.entries, b.entries))
        for a in left.base.states
        for b in right.base.states
    ]
    return MultipartiteChannel.build(axes, states)
