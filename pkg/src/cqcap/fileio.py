"""File formats and report assembly for the command-line tools.

All files are UTF-8 JSON with an explicit version tag. Complex matrix
entries are stored as [re, im] pairs so parsing is locale-proof; floats
round-trip exactly through the shortest-repr encoding. Unknown top-level
keys are rejected.
"""

from __future__ import annotations

import hashlib
import json
import math
from itertools import product as _cartesian
from pathlib import Path

import numpy as np

from .channels import CqChannel, DerivedCollection, MultipartiteChannel
from .errors import ParseError, SchemaError, StateError, StateValidationError
from .quantum import ProbDist, validate_state
from .superadd import CcqState, ProofAssembly, SuperAdditivityCertificate

FORMAT_VERSION = 1

_CHANNEL_KEYS = {"version", "dim", "axes", "states"}
_CCQ_KEYS = {"version", "dim", "x_size", "y_size", "joint_dist", "states"}
_COLLECTION_KEYS = {"version", "axis", "dists"}


def _load_json(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise SchemaError(f"{path}: top level must be an object")
    return obj


def _require_keys(obj: dict, keys: set, path) -> None:
    missing = keys - obj.keys()
    if missing:
        raise SchemaError(f"{path}: missing keys {sorted(missing)}")
    unknown = obj.keys() - keys
    if unknown:
        raise SchemaError(f"{path}: unknown keys {sorted(unknown)}")


def _check_version(obj: dict, path) -> None:
    if obj["version"] != FORMAT_VERSION:
        raise SchemaError(
            f"{path}: unsupported version {obj['version']!r}, expected {FORMAT_VERSION}"
        )


def _positive_int(value, name: str, path) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise SchemaError(f"{path}: {name} must be a positive integer")
    return value


def _decode_matrix(raw, dim: int, label: str, path) -> np.ndarray:
    try:
        num = np.asarray(raw, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise SchemaError(
            f"{path}: state at {label!r} is not a rectangular numeric array"
        ) from exc
    if num.shape != (dim, dim, 2):
        raise SchemaError(
            f"{path}: state at {label!r} must be a {dim}x{dim} array of [re, im] pairs"
        )
    return num[..., 0] + 1j * num[..., 1]


def _encode_matrix(entries: np.ndarray) -> list:
    return np.stack([entries.real, entries.imag], axis=-1).tolist()


def _decode_axes(raw, path) -> tuple[tuple[str, ...], ...]:
    if not isinstance(raw, list) or not raw:
        raise SchemaError(f"{path}: axes must be a nonempty list of label lists")
    axes = []
    for i, axis in enumerate(raw):
        if not isinstance(axis, list) or not axis:
            raise SchemaError(f"{path}: axis {i} must be a nonempty list of labels")
        if not all(isinstance(x, str) for x in axis):
            raise SchemaError(f"{path}: axis {i} labels must be strings")
        axes.append(tuple(axis))
    return tuple(axes)


def parse_channel(path) -> MultipartiteChannel:
    """Read and fully validate a channel file."""
    obj = _load_json(path)
    _require_keys(obj, _CHANNEL_KEYS, path)
    _check_version(obj, path)
    dim = _positive_int(obj["dim"], "dim", path)
    axes = _decode_axes(obj["axes"], path)
    n = int(np.prod([len(a) for a in axes]))
    raw_states = obj["states"]
    if not isinstance(raw_states, list) or len(raw_states) != n:
        raise SchemaError(f"{path}: expected {n} states, got {len(raw_states)}")
    labels = [",".join(t) for t in _cartesian(*axes)]
    states = []
    for label, raw in zip(labels, raw_states):
        entries = _decode_matrix(raw, dim, label, path)
        try:
            states.append(validate_state(entries))
        except StateValidationError as exc:
            raise StateError(f"{path}: state at tuple {label!r}: {exc}") from exc
    return MultipartiteChannel.build(axes, states)


def channel_to_obj(channel: MultipartiteChannel) -> dict:
    return {
        "version": FORMAT_VERSION,
        "dim": channel.dim,
        "axes": [list(a) for a in channel.axes],
        "states": [_encode_matrix(s.entries) for s in channel.base.states],
    }


def emit_channel(channel: MultipartiteChannel, path) -> None:
    Path(path).write_text(
        json.dumps(channel_to_obj(channel)) + "\n", encoding="utf-8"
    )


def parse_ccq_state(path) -> CcqState:
    """Read and fully validate a classical-classical-quantum state file."""
    obj = _load_json(path)
    _require_keys(obj, _CCQ_KEYS, path)
    _check_version(obj, path)
    dim = _positive_int(obj["dim"], "dim", path)
    x_size = _positive_int(obj["x_size"], "x_size", path)
    y_size = _positive_int(obj["y_size"], "y_size", path)
    pairs = x_size * y_size
    raw_joint = obj["joint_dist"]
    if not isinstance(raw_joint, list) or len(raw_joint) != pairs:
        raise SchemaError(f"{path}: joint_dist must list {pairs} weights")
    try:
        joint = ProbDist.validated(np.asarray(raw_joint, dtype=np.float64))
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{path}: joint_dist invalid: {exc}") from exc
    raw_states = obj["states"]
    if not isinstance(raw_states, list) or len(raw_states) != pairs:
        raise SchemaError(f"{path}: expected {pairs} states, got {len(raw_states)}")
    states = []
    for flat, raw in enumerate(raw_states):
        label = f"{flat // y_size},{flat % y_size}"
        entries = _decode_matrix(raw, dim, label, path)
        try:
            states.append(validate_state(entries))
        except StateValidationError as exc:
            raise StateError(f"{path}: state at tuple {label!r}: {exc}") from exc
    return CcqState(x_size=x_size, y_size=y_size, joint_dist=joint, states=tuple(states))


def ccq_state_to_obj(state: CcqState) -> dict:
    return {
        "version": FORMAT_VERSION,
        "dim": state.states[0].dim,
        "x_size": state.x_size,
        "y_size": state.y_size,
        "joint_dist": state.joint_dist.weights.tolist(),
        "states": [_encode_matrix(s.entries) for s in state.states],
    }


def emit_ccq_state(state: CcqState, path) -> None:
    Path(path).write_text(json.dumps(ccq_state_to_obj(state)) + "\n", encoding="utf-8")


def parse_collection(path) -> DerivedCollection:
    """Read a derived-channel collection file (shape-checked against the channel later)."""
    obj = _load_json(path)
    _require_keys(obj, _COLLECTION_KEYS, path)
    _check_version(obj, path)
    axis = obj["axis"]
    if not isinstance(axis, int) or isinstance(axis, bool) or axis < 0:
        raise SchemaError(f"{path}: axis must be a nonnegative integer")
    raw = obj["dists"]
    if not isinstance(raw, list) or not raw:
        raise SchemaError(f"{path}: dists must be a nonempty list of weight lists")
    dists = []
    for i, weights in enumerate(raw):
        if not isinstance(weights, list) or not weights:
            raise SchemaError(f"{path}: dists[{i}] must be a nonempty list")
        try:
            dists.append(ProbDist.validated(np.asarray(weights, dtype=np.float64)))
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"{path}: dists[{i}] invalid: {exc}") from exc
    return DerivedCollection(axis=axis, dists=tuple(dists))


def collection_to_obj(coll: DerivedCollection) -> dict:
    return {
        "version": FORMAT_VERSION,
        "axis": coll.axis,
        "dists": [d.weights.tolist() for d in coll.dists],
    }


def emit_collection(coll: DerivedCollection, path) -> None:
    Path(path).write_text(json.dumps(collection_to_obj(coll)) + "\n", encoding="utf-8")


def file_digest(path) -> str:
    try:
        return hashlib.sha256(Path(path).read_bytes()).hexdigest()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _sanitize(value):
    """Make a report payload JSON-safe; non-finite floats become strings."""
    if isinstance(value, dict):
        return {str(k): _sanitize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_sanitize(v) for v in value]
    if isinstance(value, (bool, str, int)) or value is None:
        return value
    if isinstance(value, (float, np.floating)):
        x = float(value)
        if math.isfinite(x):
            return x
        if x == math.inf:
            return "infinity"
        if x == -math.inf:
            return "-infinity"
        return "nan"
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.ndarray):
        return _sanitize(value.tolist())
    raise TypeError(f"cannot serialize {type(value).__name__} in a report")


def build_report(command: str, inputs: dict, results: dict, diagnostics: dict) -> dict:
    return {
        "command": command,
        "inputs": _sanitize(inputs),
        "results": _sanitize(results),
        "diagnostics": _sanitize(diagnostics),
    }


def render_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True)


def capacity_to_obj(result) -> dict:
    return {
        "value": result.value,
        "lower_bound": result.lower_bound,
        "upper_bound": result.upper_bound,
        "optimizer": result.optimizer.weights.tolist(),
        "iterations": result.iterations,
        "converged": result.converged,
    }


def assembly_to_obj(assembly: ProofAssembly) -> dict:
    return {
        "axis_letters": list(assembly.axis_letters),
        "slice_capacities": list(assembly.slice_capacities),
        "slice_optimizers": [r.optimizer.weights.tolist() for r in assembly.per_slice],
        "slices_converged": [r.converged for r in assembly.per_slice],
        "axis_capacity": assembly.axis_capacity,
        "axis_optimizer": assembly.axis_optimizer.weights.tolist(),
        "axis_converged": assembly.axis_result.converged,
        "joint": assembly.joint.weights.tolist(),
        "joint_information": assembly.joint_information,
    }


def certificate_to_obj(cert: SuperAdditivityCertificate) -> dict:
    return {
        "arity": cert.arity,
        "split_axis": cert.split_axis,
        "capacity_bracket": {
            "lower": cert.capacity_bracket[0],
            "upper": cert.capacity_bracket[1],
        },
        "chain_value": cert.chain_value,
        "chain_residual": cert.chain_residual,
        "feasibility_slack": cert.feasibility_slack,
        "min_estimates": [
            {
                "axis": e.axis,
                "estimate": e.estimate,
                "witness": collection_to_obj(e.witness),
            }
            for e in cert.min_estimates
        ],
        "minima_consistent": cert.minima_consistent,
        "verdict": cert.verdict,
        "reasons": list(cert.reasons),
        "flags": list(cert.flags),
        "assembly": assembly_to_obj(cert.assembly),
        "base_converged": cert.base_result.converged,
        "sub_certificates": {
            letter: certificate_to_obj(sub) for letter, sub in cert.sub_certificates
        },
    }
