"""Certified channel-capacity solver.

The maximizer runs multiplicative updates mu'(x) ∝ mu(x) · 2^D(rho_x || rho_bar)
from the uniform prior. Every sweep yields a certified bracket: the Holevo
information of the current prior lower-bounds the capacity, and the
divergence radius max_x D(rho_x || rho_bar) upper-bounds it, so the gap is a
true error certificate rather than a heuristic stopping rule. Non-convergence
within the iteration budget is reported, never raised.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .backend import kernels
from .channels import CqChannel
from .errors import LengthMismatch, NumericalBreakdown, SupportError
from .quantum import ProbDist, mix, quantum_relative_entropy

DEFAULT_TOL = 1e-6
DEFAULT_MAX_ITERS = 100_000


@dataclass(frozen=True, eq=False)
class CapacityResult:
    """Outcome of a capacity solve.

    ``value`` is the certified final lower bound, equal to the Holevo
    information of ``optimizer``. The per-sweep bound histories are kept for
    bracket audits.
    """

    value: float
    optimizer: ProbDist
    lower_bound: float
    upper_bound: float
    iterations: int
    converged: bool
    lower_trace: np.ndarray
    upper_trace: np.ndarray

    @property
    def gap(self) -> float:
        return self.upper_bound - self.lower_bound


def capacity(
    channel: CqChannel,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> CapacityResult:
    """Maximize Holevo information over input priors, with a certified bracket.

    Stops when upper - lower <= tol or after max_iters multiplicative
    updates; in the latter case ``converged`` is False and the bracket
    reached so far is reported.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    if max_iters < 1:
        raise ValueError("max_iters must be at least 1")
    states = channel.stacked()
    try:
        entropies = kernels.state_entropies(states)
        mu, lower_hist, upper_hist, iterations, converged, ok = (
            kernels.capacity_iterations(states, entropies, float(tol), int(max_iters))
        )
    except np.linalg.LinAlgError as exc:
        raise NumericalBreakdown(f"eigendecomposition failed: {exc}") from exc
    if not ok:
        raise NumericalBreakdown(
            "capacity bounds became non-finite; an intermediate state failed validation"
        )
    value = float(lower_hist[-1])
    return CapacityResult(
        value=value,
        optimizer=ProbDist.validated(mu),
        lower_bound=value,
        upper_bound=float(upper_hist[-1]),
        iterations=int(iterations),
        converged=bool(converged),
        lower_trace=lower_hist,
        upper_trace=upper_hist,
    )


def capacity_upper_bound(channel: CqChannel, mu: ProbDist) -> float:
    """Divergence-radius bound max_x D(rho_x || mix(mu)), in bits.

    Valid as a capacity upper bound for any strictly positive prior; a prior
    with zero mass on some letter is rejected because the mixed state may
    then miss part of a state's support.
    """
    if mu.n != len(channel.alphabet):
        raise LengthMismatch(f"{mu.n} weights for {len(channel.alphabet)} letters")
    if float(mu.weights.min()) <= 0.0:
        raise SupportError("prior must be strictly positive on every letter")
    rho_bar = mix(mu, channel.states)
    return max(quantum_relative_entropy(s, rho_bar) for s in channel.states)
