"""Numba-jitted implementation of the solver's hot loops.

Same contracts as ``cqcap._kernels_numpy``; the active module is picked in
``cqcap.backend``. The loops are written element-wise so numba compiles
them without object-mode fallbacks.
"""

import numpy as np
from numba import njit

EIG_FLOOR = 1e-15
EXP_CLIP = 30.0


@njit(cache=True)
def state_entropies(states):
    """Per-state von Neumann entropies (bits) for a stacked (n, d, d) array."""
    n = states.shape[0]
    out = np.empty(n)
    for x in range(n):
        w = np.linalg.eigvalsh(states[x])
        s = 0.0
        for j in range(w.shape[0]):
            if w[j] > EIG_FLOOR:
                s -= w[j] * np.log2(w[j])
        out[x] = s
    return out


@njit(cache=True)
def capacity_iterations(states, entropies, tol, max_iters):
    """Multiplicative-update capacity iteration with divergence-radius bounds.

    Returns (mu, lower_hist, upper_hist, iterations, converged, ok).
    """
    n = states.shape[0]
    d = states.shape[1]
    mu = np.full(n, 1.0 / n)
    lower_hist = np.empty(max_iters + 1)
    upper_hist = np.empty(max_iters + 1)
    div = np.empty(n)
    logw = np.empty(d)
    last = 0
    converged = False
    ok = True
    for t in range(max_iters + 1):
        rho_bar = np.zeros((d, d), dtype=np.complex128)
        for x in range(n):
            rho_bar += mu[x] * states[x]
        w, v = np.linalg.eigh(rho_bar)
        s_bar = 0.0
        for j in range(d):
            if w[j] > EIG_FLOOR:
                logw[j] = np.log2(w[j])
                s_bar -= w[j] * logw[j]
            else:
                logw[j] = 0.0
        for x in range(n):
            proj = states[x] @ v
            acc = 0.0
            for j in range(d):
                if logw[j] != 0.0:
                    ov = 0.0
                    for a in range(d):
                        ov += (np.conj(v[a, j]) * proj[a, j]).real
                    acc += logw[j] * ov
            div[x] = -entropies[x] - acc
        lower = s_bar
        for x in range(n):
            lower -= mu[x] * entropies[x]
        upper = div[0]
        for x in range(1, n):
            if div[x] > upper:
                upper = div[x]
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
        total = 0.0
        for x in range(n):
            e = div[x]
            if e < 0.0:
                e = 0.0
            elif e > EXP_CLIP:
                e = EXP_CLIP
            mu[x] = mu[x] * np.exp2(e)
            total += mu[x]
        for x in range(n):
            mu[x] /= total
    return (
        mu,
        lower_hist[: last + 1].copy(),
        upper_hist[: last + 1].copy(),
        last,
        converged,
        ok,
    )
