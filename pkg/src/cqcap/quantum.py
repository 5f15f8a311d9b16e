"""Quantum states, entropies, and classical-quantum ensemble constructions.

Everything here is desk scale (dimensions up to a few dozen), so all
entropic quantities go through full eigendecompositions rather than series
approximations. Logarithms are base 2 throughout: entropies, divergences,
and capacities are in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    LengthMismatch,
    NotHermitian,
    NotPSD,
    NotUnitTrace,
)

HERMITIAN_TOL = 1e-9
TRACE_TOL = 1e-9
PSD_TOL = 1e-9
PROB_SUM_TOL = 1e-12

# Spectral weights at or below this floor are treated as exact zeros wherever
# a logarithm is needed (0 * log 0 := 0).
EIG_FLOOR = 1e-15

# Support containment for relative entropy: an eigenvector of rho with weight
# above the eigenvalue cutoff must not overlap the null space of sigma by
# more than the overlap cutoff, otherwise D(rho||sigma) is +infinity.
SUPPORT_EIG_CUTOFF = 1e-12
SUPPORT_OVERLAP_CUTOFF = 1e-10


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A Hermitian, positive-semidefinite, unit-trace complex matrix.

    Build instances through :func:`validate_state`; the constructor itself
    does not re-check the invariants.
    """

    dim: int
    entries: np.ndarray

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues in ascending order."""
        return np.linalg.eigvalsh(self.entries)


@dataclass(frozen=True, eq=False)
class ProbDist:
    """A probability vector: nonnegative weights summing to one."""

    n: int
    weights: np.ndarray

    @classmethod
    def validated(cls, weights) -> "ProbDist":
        w = np.asarray(weights, dtype=np.float64)
        if w.ndim != 1 or w.size < 1:
            raise ValueError("weights must be a nonempty 1-D array")
        if float(w.min()) < 0.0:
            raise ValueError(f"negative weight {float(w.min()):.3e}")
        defect = abs(float(w.sum()) - 1.0)
        if defect > PROB_SUM_TOL:
            raise ValueError(
                f"weight sum defect {defect:.3e} exceeds {PROB_SUM_TOL:g}"
            )
        return cls(n=w.size, weights=w)

    @classmethod
    def uniform(cls, n: int) -> "ProbDist":
        return cls(n=n, weights=np.full(n, 1.0 / n))

    @classmethod
    def point_mass(cls, n: int, index: int) -> "ProbDist":
        w = np.zeros(n)
        w[index] = 1.0
        return cls(n=n, weights=w)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigendecomposition with eigenvalues sorted descending.

    Column j of ``eigenvectors`` pairs with ``eigenvalues[j]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def validate_state(entries) -> DensityMatrix:
    """Check the density-matrix invariants and return the validated state.

    The matrix is symmetrized to (A + A†)/2 before the spectral checks
    whenever the Hermitian defect is within tolerance, so rounding noise
    cannot leak a complex spectrum downstream.

    Raises:
        NotHermitian: Hermitian defect above 1e-9.
        NotUnitTrace: |trace - 1| above 1e-9.
        NotPSD: minimum eigenvalue below -1e-9.
    """
    a = np.asarray(entries, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"expected a square 2-D array, got shape {a.shape}")
    herm_defect = float(np.abs(a - a.conj().T).max())
    if herm_defect > HERMITIAN_TOL:
        raise NotHermitian(
            f"Hermitian defect {herm_defect:.3e} exceeds {HERMITIAN_TOL:g}"
        )
    a = (a + a.conj().T) / 2.0
    trace_defect = abs(float(a.trace().real) - 1.0)
    if trace_defect > TRACE_TOL:
        raise NotUnitTrace(f"trace defect {trace_defect:.3e} exceeds {TRACE_TOL:g}")
    min_eig = float(np.linalg.eigvalsh(a)[0])
    if min_eig < -PSD_TOL:
        raise NotPSD(f"minimum eigenvalue {min_eig:.3e} is below -{PSD_TOL:g}")
    return DensityMatrix(dim=a.shape[0], entries=a)


def pure_state(vec) -> DensityMatrix:
    """Rank-1 state |v><v| from an (unnormalized) state vector."""
    v = np.asarray(vec, dtype=np.complex128).reshape(-1)
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise ValueError("state vector must be nonzero")
    v = v / norm
    return validate_state(np.outer(v, v.conj()))


def maximally_mixed(dim: int) -> DensityMatrix:
    return validate_state(np.eye(dim) / dim)


def spectral_decomposition(rho: DensityMatrix) -> Spectrum:
    """Full eigendecomposition, eigenvalues descending."""
    w, v = np.linalg.eigh(rho.entries)
    return Spectrum(eigenvalues=w[::-1].copy(), eigenvectors=v[:, ::-1].copy())


def _entropy_from_weights(w: np.ndarray) -> float:
    # Weights at or below EIG_FLOOR (including clamped negative noise)
    # contribute 0; replacing them by 1.0 zeroes the log term.
    w = np.where(w > EIG_FLOOR, w, 1.0)
    return float(-np.sum(w * np.log2(w)))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """S(rho) = -sum_i lambda_i log2 lambda_i, in bits."""
    return _entropy_from_weights(rho.eigenvalues)


def shannon_entropy(mu: ProbDist) -> float:
    """H(mu) in bits, with 0 log 0 := 0."""
    return _entropy_from_weights(mu.weights)


def quantum_relative_entropy(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """D(rho || sigma) = Tr rho (log2 rho - log2 sigma), in bits.

    Returns +infinity when the support of rho is not contained in the
    support of sigma: some eigenvector of rho with eigenvalue above
    1e-12 has squared overlap above 1e-10 with the null space of sigma.
    """
    if rho.dim != sigma.dim:
        raise DimensionMismatch(f"dimensions {rho.dim} and {sigma.dim} differ")
    r_w, r_v = np.linalg.eigh(rho.entries)
    s_w, s_v = np.linalg.eigh(sigma.entries)
    null = s_w <= SUPPORT_EIG_CUTOFF
    if bool(null.any()):
        live_rho = r_w > SUPPORT_EIG_CUTOFF
        if bool(live_rho.any()):
            # overlap[i, j] = |<u_i | w_j>|^2 over the null columns of sigma
            overlap = np.abs(r_v[:, live_rho].conj().T @ s_v[:, null]) ** 2
            if float(overlap.sum(axis=1).max()) > SUPPORT_OVERLAP_CUTOFF:
                return math.inf
    live = ~null
    # <w_j | rho | w_j> for the live eigenvectors of sigma
    proj = rho.entries @ s_v[:, live]
    diag = np.einsum("aj,aj->j", s_v[:, live].conj(), proj).real
    tr_rho_log_sigma = float(np.dot(np.log2(s_w[live]), diag))
    return -_entropy_from_weights(r_w) - tr_rho_log_sigma


def _check_ensemble(mu: ProbDist, states: Sequence[DensityMatrix]) -> int:
    if len(states) != mu.n:
        raise LengthMismatch(f"{len(states)} states for {mu.n} weights")
    dims = {s.dim for s in states}
    if len(dims) != 1:
        raise DimensionMismatch(f"states carry mixed dimensions {sorted(dims)}")
    return dims.pop()


def mix(mu: ProbDist, states: Sequence[DensityMatrix]) -> DensityMatrix:
    """Convex combination sum_x mu(x) rho_x."""
    _check_ensemble(mu, states)
    acc = np.zeros_like(states[0].entries)
    for w, s in zip(mu.weights, states):
        acc += w * s.entries
    return validate_state(acc)


def cq_state(mu: ProbDist, states: Sequence[DensityMatrix]) -> DensityMatrix:
    """Block-diagonal classical-quantum state sum_x mu(x) |x><x| (x) rho_x."""
    d = _check_ensemble(mu, states)
    n = mu.n
    out = np.zeros((n * d, n * d), dtype=np.complex128)
    for x, (w, s) in enumerate(zip(mu.weights, states)):
        out[x * d : (x + 1) * d, x * d : (x + 1) * d] = w * s.entries
    return validate_state(out)


def holevo_information(mu: ProbDist, states: Sequence[DensityMatrix]) -> float:
    """chi(mu) = S(sum_x mu(x) rho_x) - sum_x mu(x) S(rho_x), in bits.

    Equals the mutual information S(A) + S(B) - S(AB) of the corresponding
    classical-quantum bipartite state.
    """
    _check_ensemble(mu, states)
    avg = mix(mu, states)
    cond = float(
        np.dot(mu.weights, np.array([von_neumann_entropy(s) for s in states]))
    )
    return von_neumann_entropy(avg) - cond
