"""Super-additivity machinery: proof assemblies, chain-rule checks, budgeted
minimum-derived-capacity search, and machine-checkable certificates.

The certificate follows the constructive argument behind the inequality
C(E) >= sum_i min over derived channels on axis i. For a bipartite channel:
solve each slice E^x for an optimal prior mu_x, derive the axis channel from
those priors and solve it for mu_X, then check that the Holevo information
of the composed joint prior equals C(E^X) + E_x[C(E^x)] (the chain rule) and
stays below the capacity bracket of the full channel (feasibility). Minimum
capacities over the infinite family of derived channels cannot be certified
by sampling, so those searches report explicit upper bounds on the minima;
a failed minima comparison is flagged, never fatal.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _cartesian
from typing import NamedTuple

import numpy as np

from .channels import (
    LABEL_SEP,
    CqChannel,
    DerivedCollection,
    MultipartiteChannel,
    _complement_size,
    _derive_from_slices,
    _random_state,
    derive_channel,
    slice_channel,
)
from .errors import (
    AxisOutOfRange,
    DimensionMismatch,
    LengthMismatch,
    ShapeMismatch,
)
from .quantum import DensityMatrix, ProbDist, holevo_information, mix
from .solver import DEFAULT_MAX_ITERS, DEFAULT_TOL, CapacityResult, capacity

# Coordinate-descent refinement of the best sampled collection: one step is
# one golden-section line search from the current conditional toward each
# simplex vertex of one cyclically chosen letter.
REFINE_STEPS = 50
_GOLDEN_ITERS = 10
_INV_PHI = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, eq=False)
class CcqState:
    """Classical-classical-quantum state: joint weights over (x, y) pairs,
    row-major, with one quantum state per pair."""

    x_size: int
    y_size: int
    joint_dist: ProbDist
    states: tuple[DensityMatrix, ...]

    def __post_init__(self):
        if self.x_size < 1 or self.y_size < 1:
            raise ShapeMismatch("x_size and y_size must be positive")
        pairs = self.x_size * self.y_size
        if self.joint_dist.n != pairs:
            raise ShapeMismatch(
                f"joint distribution over {self.joint_dist.n} pairs, expected {pairs}"
            )
        if len(self.states) != pairs:
            raise LengthMismatch(f"{len(self.states)} states for {pairs} pairs")
        dims = {s.dim for s in self.states}
        if len(dims) != 1:
            raise DimensionMismatch(f"states carry mixed dimensions {sorted(dims)}")


class ChainRuleResult(NamedTuple):
    lhs: float
    rhs: float
    residual: float
    marginal_term: float
    conditional_term: float


def chain_rule_check(state: CcqState) -> ChainRuleResult:
    """Check I(XY:Z) = I(X:Z) + E_x[I(Y:Z | X=x)] on an explicit state.

    Letters with P(x) = 0 have no conditional distribution; they contribute
    nothing and are skipped in both right-hand-side terms.
    """
    nx, ny = state.x_size, state.y_size
    joint = state.joint_dist.weights.reshape(nx, ny)
    lhs = holevo_information(state.joint_dist, state.states)
    px = joint.sum(axis=1)
    marg_weights = []
    marg_states = []
    conditional_term = 0.0
    for x in range(nx):
        if px[x] <= 0.0:
            continue
        cond = ProbDist.validated(joint[x] / px[x])
        row = state.states[x * ny : (x + 1) * ny]
        marg_weights.append(px[x])
        marg_states.append(mix(cond, row))
        conditional_term += float(px[x]) * holevo_information(cond, row)
    marginal_term = holevo_information(ProbDist.validated(marg_weights), marg_states)
    rhs = marginal_term + conditional_term
    return ChainRuleResult(lhs, rhs, abs(lhs - rhs), marginal_term, conditional_term)


def random_ccq_state(
    x_size: int, y_size: int, dim: int, seed: int, ensemble: str = "mixed"
) -> CcqState:
    """Seed-deterministic random tripartite test state."""
    rng = np.random.default_rng(seed)
    pairs = x_size * y_size
    w = rng.dirichlet(np.ones(pairs))
    joint = ProbDist.validated(w / w.sum())
    states = tuple(_random_state(rng, dim, ensemble) for _ in range(pairs))
    return CcqState(x_size=x_size, y_size=y_size, joint_dist=joint, states=states)


@dataclass(frozen=True, eq=False)
class ProofAssembly:
    """All quantities of the constructive bipartite argument.

    ``per_slice[i]`` is the capacity solve of the slice at the i-th letter of
    axis 0; its optimizer is the conditional prior mu_x. ``joint`` is the
    product-of-conditionals prior on the full alphabet.
    """

    axis_letters: tuple[str, ...]
    per_slice: tuple[CapacityResult, ...]
    derived_on_axis: CqChannel
    axis_result: CapacityResult
    joint: ProbDist
    joint_information: float

    @property
    def axis_optimizer(self) -> ProbDist:
        return self.axis_result.optimizer

    @property
    def axis_capacity(self) -> float:
        return self.axis_result.value

    @property
    def slice_capacities(self) -> tuple[float, ...]:
        return tuple(r.value for r in self.per_slice)

    @property
    def chain_value(self) -> float:
        """C(E^X) + sum_x mu_X(x) C(E^x), from the recorded sub-solves."""
        return self.axis_capacity + float(
            np.dot(self.axis_optimizer.weights, self.slice_capacities)
        )

    @property
    def all_converged(self) -> bool:
        return self.axis_result.converged and all(r.converged for r in self.per_slice)


def build_proof_assembly(
    channel: MultipartiteChannel,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> ProofAssembly:
    """Run the constructive argument on a bipartite channel.

    Slice and axis solves run at tol / (2 |X|) so the accumulated solver
    error across the chain stays inside tol.
    """
    if channel.k != 2:
        raise AxisOutOfRange("proof assembly needs a bipartite channel; group axes first")
    letters = channel.axes[0]
    sub_tol = tol / (2.0 * len(letters))
    per_slice = tuple(
        capacity(slice_channel(channel, 0, x), sub_tol, max_iters) for x in letters
    )
    coll = DerivedCollection(axis=0, dists=tuple(r.optimizer for r in per_slice))
    derived = derive_channel(channel, coll)
    axis_result = capacity(derived, sub_tol, max_iters)
    comp = per_slice[0].optimizer.n
    w = np.empty(len(letters) * comp)
    for i, r in enumerate(per_slice):
        w[i * comp : (i + 1) * comp] = (
            axis_result.optimizer.weights[i] * r.optimizer.weights
        )
    joint = ProbDist.validated(w)
    joint_information = holevo_information(joint, channel.base.states)
    return ProofAssembly(
        axis_letters=letters,
        per_slice=per_slice,
        derived_on_axis=derived,
        axis_result=axis_result,
        joint=joint,
        joint_information=joint_information,
    )


class MinDerivedEstimate(NamedTuple):
    estimate: float
    witness: DerivedCollection
    solves: int


def _golden_section(fun, f_at_zero: float) -> tuple[float, float]:
    """Minimize fun over [0, 1]; returns (best value, best t) over all probes."""
    best_v, best_t = f_at_zero, 0.0
    f1 = fun(1.0)
    if f1 < best_v:
        best_v, best_t = f1, 1.0
    a, b = 0.0, 1.0
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc = fun(c)
    if fc < best_v:
        best_v, best_t = fc, c
    fd = fun(d)
    if fd < best_v:
        best_v, best_t = fd, d
    for _ in range(_GOLDEN_ITERS):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = fun(c)
            if fc < best_v:
                best_v, best_t = fc, c
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = fun(d)
            if fd < best_v:
                best_v, best_t = fd, d
    return best_v, best_t


def _segment_toward_vertex(base: np.ndarray, vertex: int, t: float) -> np.ndarray:
    w = (1.0 - t) * base
    w[vertex] += t
    return w / w.sum()


def estimate_min_derived_capacity(
    channel: MultipartiteChannel,
    axis: int,
    budget: int,
    seed: int,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> MinDerivedEstimate:
    """Budgeted search for low-capacity derived channels on one axis.

    Candidates are ``budget`` seeded flat-Dirichlet collections, every
    point-mass collection on a single complementary tuple, and the uniform
    collection. The best candidate is then refined by cyclic coordinate
    descent: golden-section line searches from the current conditional
    toward each simplex vertex, ties broken toward the smallest vertex
    index. The returned estimate is an upper bound on the true minimum over
    all collections (up to solver tolerance), not the minimum itself.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if not 0 <= axis < channel.k:
        raise AxisOutOfRange(f"axis {axis} for arity {channel.k}")
    if channel.k < 2:
        raise AxisOutOfRange("deriving needs at least two axes")
    letters = channel.axes[axis]
    nx = len(letters)
    comp = _complement_size(channel, axis)
    slices = [slice_channel(channel, axis, x) for x in letters]
    solves = 0

    def evaluate(dists) -> float:
        nonlocal solves
        solves += 1
        derived = _derive_from_slices(letters, slices, dists)
        return capacity(derived, tol, max_iters).value

    rng = np.random.default_rng(seed)
    candidates = []
    for _ in range(budget):
        dists = []
        for _ in range(nx):
            w = rng.dirichlet(np.ones(comp))
            dists.append(ProbDist.validated(w / w.sum()))
        candidates.append(tuple(dists))
    for t0 in range(comp):
        candidates.append((ProbDist.point_mass(comp, t0),) * nx)
    candidates.append((ProbDist.uniform(comp),) * nx)

    best_val = np.inf
    best_dists = candidates[0]
    for dists in candidates:
        val = evaluate(dists)
        if val < best_val:
            best_val, best_dists = val, dists

    current = [d.weights.copy() for d in best_dists]

    def eval_with(x: int, wx: np.ndarray) -> float:
        dists = [
            ProbDist.validated(wx if i == x else current[i]) for i in range(nx)
        ]
        return evaluate(tuple(dists))

    for step in range(REFINE_STEPS):
        x = step % nx
        base = current[x]
        step_val = best_val
        step_w = None
        for vertex in range(comp):
            val, t = _golden_section(
                lambda t: eval_with(x, _segment_toward_vertex(base, vertex, t)),
                best_val,
            )
            if val < step_val:
                step_val = val
                step_w = _segment_toward_vertex(base, vertex, t)
        if step_w is not None:
            current[x] = step_w
            best_val = step_val

    witness = DerivedCollection(
        axis=axis, dists=tuple(ProbDist.validated(w) for w in current)
    )
    return MinDerivedEstimate(estimate=float(best_val), witness=witness, solves=solves)


@dataclass(frozen=True, eq=False)
class AxisMinEstimate:
    """Searched minimum derived capacity for one axis, with its witness."""

    axis: int
    estimate: float
    witness: DerivedCollection


@dataclass(frozen=True, eq=False)
class SuperAdditivityCertificate:
    """Numerical record of the super-additivity argument for one channel.

    Hard checks: ``chain_residual <= tol`` and ``feasibility_slack >= -tol``.
    The minima comparison C >= sum of per-axis estimates is informational
    because the estimates only upper-bound the true minima; when it fails the
    certificate carries the ``inconclusive-minima`` flag but still passes.
    For arity above two the argument recurses on the axis-0 slices and
    ``sub_certificates`` records one certificate per axis-0 letter.
    """

    arity: int
    split_axis: int
    capacity_bracket: tuple[float, float]
    chain_value: float
    chain_residual: float
    feasibility_slack: float
    min_estimates: tuple[AxisMinEstimate, ...]
    minima_consistent: bool
    verdict: str
    reasons: tuple[str, ...]
    flags: tuple[str, ...]
    assembly: ProofAssembly
    base_result: CapacityResult
    sub_certificates: tuple[tuple[str, "SuperAdditivityCertificate"], ...]

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


def group_first_axis(channel: MultipartiteChannel) -> MultipartiteChannel:
    """Reinterpret axes (0 | 1..k-1) as a bipartite channel over the same base."""
    if channel.k < 2:
        raise AxisOutOfRange("grouping needs at least two axes")
    rest = tuple(LABEL_SEP.join(t) for t in _cartesian(*channel.axes[1:]))
    return MultipartiteChannel(axes=(channel.axes[0], rest), base=channel.base)


def _child_seed(seed: int, tag: int) -> int:
    return int(np.random.SeedSequence([seed, tag]).generate_state(1, np.uint64)[0])


def _embed_witness_through_slice(
    channel: MultipartiteChannel,
    slice_letter_index: int,
    parent_axis: int,
    witness: DerivedCollection,
) -> DerivedCollection:
    """Lift a witness on an axis-0 slice to a collection on the full channel.

    The complement of ``parent_axis`` in the full channel is axis 0 followed
    by the slice's own complement (row-major); the lifted conditionals put
    all mass on the fixed axis-0 letter.
    """
    sub_comp = witness.dists[0].n
    n0 = len(channel.axes[0])
    dists = []
    for dist in witness.dists:
        w = np.zeros(n0 * sub_comp)
        lo = slice_letter_index * sub_comp
        w[lo : lo + sub_comp] = dist.weights
        dists.append(ProbDist.validated(w))
    return DerivedCollection(axis=parent_axis, dists=tuple(dists))


def verify_superadditivity(
    channel: MultipartiteChannel,
    tol: float = DEFAULT_TOL,
    budget: int = 32,
    seed: int = 0,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> SuperAdditivityCertificate:
    """Produce a certificate for the super-additivity inequality on ``channel``.

    Arity two runs the constructive argument directly. Larger arities split
    axis 0 against the rest: the grouped bipartition carries the hard checks
    for C(E), each axis-0 slice is certified recursively, and per-axis
    minimum estimates from the recursion are aggregated (smallest across
    slices, witnesses lifted back to the full channel).
    """
    k = channel.k
    if k < 2:
        raise AxisOutOfRange("super-additivity needs at least two axes")
    grouped = channel if k == 2 else group_first_axis(channel)
    assembly = build_proof_assembly(grouped, tol, max_iters)
    base_result = capacity(channel.base, tol, max_iters)
    chain_value = assembly.chain_value
    chain_residual = abs(assembly.joint_information - chain_value)
    feasibility_slack = base_result.lower_bound - assembly.joint_information

    reasons = []
    flags = []
    if chain_residual > tol:
        reasons.append(
            f"chain residual {chain_residual:.3e} exceeds tolerance {tol:g}"
        )
    if feasibility_slack < -tol:
        reasons.append(
            f"feasibility slack {feasibility_slack:.3e} is below -{tol:g}"
        )

    est0 = estimate_min_derived_capacity(
        grouped, 0, budget, _child_seed(seed, 0), tol, max_iters
    )
    min_estimates = [AxisMinEstimate(axis=0, estimate=est0.estimate, witness=est0.witness)]

    sub_certificates: list[tuple[str, SuperAdditivityCertificate]] = []
    if k == 2:
        est1 = estimate_min_derived_capacity(
            grouped, 1, budget, _child_seed(seed, 1), tol, max_iters
        )
        min_estimates.append(
            AxisMinEstimate(axis=1, estimate=est1.estimate, witness=est1.witness)
        )
    else:
        for li, letter in enumerate(channel.axes[0]):
            sub = verify_superadditivity(
                slice_channel(channel, 0, letter),
                tol,
                budget,
                _child_seed(seed, 100 + li),
                max_iters,
            )
            sub_certificates.append((letter, sub))
        if any(not cert.passed for _, cert in sub_certificates):
            reasons.append("a slice sub-certificate failed")
        for i in range(1, k):
            best_li = 0
            best = sub_certificates[0][1].min_estimates[i - 1]
            for li, (_, cert) in enumerate(sub_certificates[1:], start=1):
                cand = cert.min_estimates[i - 1]
                if cand.estimate < best.estimate:
                    best_li, best = li, cand
            min_estimates.append(
                AxisMinEstimate(
                    axis=i,
                    estimate=best.estimate,
                    witness=_embed_witness_through_slice(
                        channel, best_li, i, best.witness
                    ),
                )
            )

    estimate_sum = sum(e.estimate for e in min_estimates)
    minima_consistent = base_result.lower_bound + tol >= estimate_sum
    if not minima_consistent:
        flags.append(
            "inconclusive-minima: searched estimates exceed the capacity lower "
            "bound; the estimates are upper bounds, so this does not falsify "
            "the inequality"
        )

    verdict = "pass" if not reasons else "fail"
    return SuperAdditivityCertificate(
        arity=k,
        split_axis=0,
        capacity_bracket=(base_result.lower_bound, base_result.upper_bound),
        chain_value=chain_value,
        chain_residual=chain_residual,
        feasibility_slack=feasibility_slack,
        min_estimates=tuple(min_estimates),
        minima_consistent=minima_consistent,
        verdict=verdict,
        reasons=tuple(reasons),
        flags=tuple(flags),
        assembly=assembly,
        base_result=base_result,
        sub_certificates=tuple(sub_certificates),
    )
