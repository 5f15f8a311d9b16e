"""Pure-numpy implementation of the solver's hot loops.

Mirrors ``cqcap._kernels_numba`` function for function; the active module
is picked in ``cqcap.backend``.
"""

import numpy as np

EIG_FLOOR = 1e-15
EXP_CLIP = 30.0


def state_entropies(states: np.ndarray) -> np.ndarray:
    """Per-state von Neumann entropies (bits) for a stacked (n, d, d) array."""
    w = np.linalg.eigvalsh(states)
    w = np.where(w > EIG_FLOOR, w, 1.0)
    return -np.sum(w * np.log2(w), axis=1)


def capacity_iterations(states, entropies, tol, max_iters):
    """Multiplicative-update capacity iteration with divergence-radius bounds.

    states: (n, d, d) complex128, one density matrix per letter.
    entropies: (n,) per-letter von Neumann entropies in bits.

    Returns (mu, lower_hist, upper_hist, iterations, converged, ok); ``ok``
    is False when a non-finite bound appeared and the run stopped early.
    """
    n, d, _ = states.shape
    mu = np.full(n, 1.0 / n)
    lower_hist = np.empty(max_iters + 1)
    upper_hist = np.empty(max_iters + 1)
    last = 0
    converged = False
    ok = True
    for t in range(max_iters + 1):
        rho_bar = np.tensordot(mu, states, axes=1)
        w, v = np.linalg.eigh(rho_bar)
        live = w > EIG_FLOOR
        logw = np.zeros(d)
        logw[live] = np.log2(w[live])
        s_bar = -float(np.dot(w[live], logw[live]))
        # overlap[x, j] = <v_j| rho_x |v_j>; zero weight on dead directions
        # is guaranteed by support containment (mu stays strictly positive).
        proj = states @ v
        overlap = np.einsum("aj,xaj->xj", v.conj(), proj).real
        div = -entropies - overlap @ logw
        lower = s_bar - float(np.dot(mu, entropies))
        upper = float(div.max())
        lower_hist[t] = lower
        upper_hist[t] = upper
        last = t
        if not (np.isfinite(lower) and np.isfinite(upper)):
            ok = False
            break
        if upper - lower <= tol:
            converged = True
            break
        if t == max_iters:
            break
        mu = mu * np.exp2(np.clip(div, 0.0, EXP_CLIP))
        mu = mu / mu.sum()
    return (
        mu,
        lower_hist[: last + 1].copy(),
        upper_hist[: last + 1].copy(),
        last,
        converged,
        ok,
    )
