"""Channel builders shared across the test modules."""

import numpy as np

import cqcap as cq


def orthogonal_channel() -> cq.CqChannel:
    return cq.CqChannel.from_arrays(["0", "1"], [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])


def bsc_channel(p: float) -> cq.CqChannel:
    return cq.CqChannel.from_arrays(
        ["0", "1"], [np.diag([1.0 - p, p]), np.diag([p, 1.0 - p])]
    )


def purepair_channel(c: float) -> cq.CqChannel:
    second = cq.pure_state([c, np.sqrt(1.0 - c * c)])
    return cq.CqChannel.from_states(["0", "1"], [cq.pure_state([1.0, 0.0]), second])


def xor_channel() -> cq.MultipartiteChannel:
    """E(x, y) = |x xor y><x xor y| over bits."""
    bit = [cq.pure_state([1.0, 0.0]), cq.pure_state([0.0, 1.0])]
    states = [bit[(x + y) % 2] for x in range(2) for y in range(2)]
    return cq.MultipartiteChannel.build([["0", "1"], ["0", "1"]], states)


def ignore_y_channel() -> cq.MultipartiteChannel:
    """E(x, y) = |x><x|: the second axis is dead weight."""
    bit = [cq.pure_state([1.0, 0.0]), cq.pure_state([0.0, 1.0])]
    states = [bit[x] for x in range(2) for _ in range(2)]
    return cq.MultipartiteChannel.build([["0", "1"], ["0", "1"]], states)


def perfect_two_bit_channel() -> cq.MultipartiteChannel:
    """E(x, y) = |x><x| (x) |y><y|: a perfect two-bit channel."""
    bit = [cq.pure_state([1.0, 0.0]), cq.pure_state([0.0, 1.0])]
    states = [
        cq.validate_state(np.kron(bit[x].entries, bit[y].entries))
        for x in range(2)
        for y in range(2)
    ]
    return cq.MultipartiteChannel.build([["0", "1"], ["0", "1"]], states)


def random_ensemble(seed: int, dim: int, letters: int):
    """(ProbDist, [DensityMatrix]) drawn from one seeded generator."""
    rng = np.random.default_rng(seed)
    w = rng.dirichlet(np.ones(letters))
    mu = cq.ProbDist.validated(w / w.sum())
    states = []
    for _ in range(letters):
        g = rng.standard_normal((2, dim, dim))
        m = g[0] + 1j * g[1]
        rho = m @ m.conj().T
        states.append(cq.validate_state(rho / rho.trace().real))
    return mu, states


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.standard_normal((2, dim, dim))
    q, r = np.linalg.qr(g[0] + 1j * g[1])
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))
