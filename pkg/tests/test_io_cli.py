"""File formats, CLI subcommands, exit codes, and report determinism."""

import contextlib
import io
import json

import numpy as np
import pytest

import cqcap as cq
from cqcap import fileio
from cqcap.cli import run_cli
from cqcap.errors import ParseError, SchemaError, StateError
import helpers


def run(argv):
    """Run the CLI in-process; returns (exit code, parsed report)."""
    out = io.StringIO()
    err = io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = run_cli(argv)
    text = out.getvalue()
    report = json.loads(text) if text.strip() else None
    return code, report


class TestChannelFiles:
    def test_round_trip_is_identity(self, tmp_path):
        path = tmp_path / "chan.json"
        chan = cq.random_channel(3, [2, 2], "mixed", 5)
        fileio.emit_channel(chan, path)
        back = fileio.parse_channel(path)
        assert back.axes == chan.axes
        for s, t in zip(back.base.states, chan.base.states):
            np.testing.assert_array_equal(s.entries, t.entries)

    def test_orthogonal_file_has_unit_capacity(self, tmp_path):
        path = tmp_path / "ortho.json"
        fileio.emit_channel(
            cq.MultipartiteChannel.wrap(helpers.orthogonal_channel()), path
        )
        chan = fileio.parse_channel(path)
        assert cq.capacity(chan.base).value == pytest.approx(1.0, abs=1e-6)

    def test_bad_trace_names_the_tuple(self, tmp_path):
        path = tmp_path / "bad.json"
        obj = fileio.channel_to_obj(cq.MultipartiteChannel.wrap(helpers.orthogonal_channel()))
        obj["states"][1][1][1][0] = 0.9  # trace 0.9 on letter "1"
        path.write_text(json.dumps(obj))
        with pytest.raises(StateError, match="'1'"):
            fileio.parse_channel(path)

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "extra.json"
        obj = fileio.channel_to_obj(cq.MultipartiteChannel.wrap(helpers.orthogonal_channel()))
        obj["comment"] = "nope"
        path.write_text(json.dumps(obj))
        with pytest.raises(SchemaError, match="unknown keys"):
            fileio.parse_channel(path)

    def test_missing_key_rejected(self, tmp_path):
        path = tmp_path / "missing.json"
        obj = fileio.channel_to_obj(cq.MultipartiteChannel.wrap(helpers.orthogonal_channel()))
        del obj["dim"]
        path.write_text(json.dumps(obj))
        with pytest.raises(SchemaError, match="missing keys"):
            fileio.parse_channel(path)

    def test_wrong_version_rejected(self, tmp_path):
        path = tmp_path / "v9.json"
        obj = fileio.channel_to_obj(cq.MultipartiteChannel.wrap(helpers.orthogonal_channel()))
        obj["version"] = 9
        path.write_text(json.dumps(obj))
        with pytest.raises(SchemaError, match="version"):
            fileio.parse_channel(path)

    def test_malformed_json_rejected(self, tmp_path):
        path = tmp_path / "mangled.json"
        path.write_text("{not json")
        with pytest.raises(ParseError):
            fileio.parse_channel(path)

    def test_ragged_state_rejected(self, tmp_path):
        path = tmp_path / "ragged.json"
        obj = fileio.channel_to_obj(cq.MultipartiteChannel.wrap(helpers.orthogonal_channel()))
        obj["states"][0][0] = [[1.0, 0.0]]  # wrong row length
        path.write_text(json.dumps(obj))
        with pytest.raises(SchemaError):
            fileio.parse_channel(path)


class TestOtherFiles:
    def test_ccq_round_trip(self, tmp_path):
        path = tmp_path / "state.json"
        state = cq.random_ccq_state(2, 3, 2, 31)
        fileio.emit_ccq_state(state, path)
        back = fileio.parse_ccq_state(path)
        assert (back.x_size, back.y_size) == (2, 3)
        np.testing.assert_array_equal(
            back.joint_dist.weights, state.joint_dist.weights
        )
        for s, t in zip(back.states, state.states):
            np.testing.assert_array_equal(s.entries, t.entries)

    def test_collection_round_trip(self, tmp_path):
        path = tmp_path / "coll.json"
        chan = cq.random_channel(2, [2, 3], "mixed", 2)
        coll = cq.random_collection(chan, 0, np.random.default_rng(0))
        fileio.emit_collection(coll, path)
        back = fileio.parse_collection(path)
        assert back.axis == 0
        for d, e in zip(back.dists, coll.dists):
            np.testing.assert_array_equal(d.weights, e.weights)

    def test_collection_bad_weights_rejected(self, tmp_path):
        path = tmp_path / "coll.json"
        path.write_text(json.dumps({"version": 1, "axis": 0, "dists": [[0.5, 0.4]]}))
        with pytest.raises(SchemaError):
            fileio.parse_collection(path)


class TestCliCommands:
    def test_capacity_on_generated_orthogonal(self, tmp_path):
        out = tmp_path / "ortho.json"
        code, _ = run(["gen", "--type", "orthogonal", "--out", str(out)])
        assert code == 0
        code, report = run(["capacity", "--channel", str(out)])
        assert code == 0
        assert report["command"] == "capacity"
        assert report["results"]["value"] == pytest.approx(1.0, abs=1e-6)
        assert report["results"]["converged"] is True
        assert "wall_time_s" in report["diagnostics"]

    def test_negative_tol_is_usage_error(self, tmp_path):
        out = tmp_path / "ortho.json"
        run(["gen", "--type", "orthogonal", "--out", str(out)])
        code, report = run(["capacity", "--channel", str(out), "--tol", "-1"])
        assert code == 1
        assert report["results"]["error"]["type"] == "UsageError"

    def test_unknown_flag_is_usage_error(self):
        code, report = run(["capacity", "--nope"])
        assert code == 1
        assert report["command"] == "usage"

    def test_missing_file_is_input_error(self):
        code, report = run(["capacity", "--channel", "does-not-exist.json"])
        assert code == 3
        assert report["results"]["error"]["type"] == "ParseError"
        assert report["diagnostics"]["exit_code"] == 3

    def test_invalid_state_file_is_input_error(self, tmp_path):
        path = tmp_path / "bad.json"
        obj = fileio.channel_to_obj(
            cq.MultipartiteChannel.wrap(helpers.orthogonal_channel())
        )
        obj["states"][0][0][0][0] = 0.9
        path.write_text(json.dumps(obj))
        code, report = run(["capacity", "--channel", str(path)])
        assert code == 3
        assert report["results"]["error"]["type"] == "StateError"

    def test_slice_command(self, tmp_path):
        src = tmp_path / "rand.json"
        dst = tmp_path / "sliced.json"
        run(
            ["gen", "--type", "random-mixed", "--dim", "2", "--inputs", "2", "2",
             "--seed", "3", "--out", str(src)]
        )
        code, report = run(
            ["slice", "--channel", str(src), "--axis", "0", "--letter", "1",
             "--out", str(dst)]
        )
        assert code == 0
        sliced = fileio.parse_channel(dst)
        expected = cq.slice_channel(fileio.parse_channel(src), 0, "1")
        for s, t in zip(sliced.base.states, expected.states):
            np.testing.assert_array_equal(s.entries, t.entries)
        assert report["results"]["out_sha256"] == fileio.file_digest(dst)

    def test_slice_unknown_letter_is_input_error(self, tmp_path):
        src = tmp_path / "rand.json"
        run(
            ["gen", "--type", "random-mixed", "--dim", "2", "--inputs", "2", "2",
             "--seed", "3", "--out", str(src)]
        )
        code, report = run(
            ["slice", "--channel", str(src), "--axis", "0", "--letter", "9",
             "--out", str(tmp_path / "x.json")]
        )
        assert code == 3
        assert report["results"]["error"]["type"] == "UnknownLetter"

    def test_derive_command(self, tmp_path):
        src = tmp_path / "rand.json"
        cpath = tmp_path / "coll.json"
        dst = tmp_path / "derived.json"
        run(
            ["gen", "--type", "random-mixed", "--dim", "2", "--inputs", "2", "2",
             "--seed", "4", "--out", str(src)]
        )
        chan = fileio.parse_channel(src)
        coll = cq.uniform_collection(chan, 0)
        fileio.emit_collection(coll, cpath)
        code, report = run(
            ["derive", "--channel", str(src), "--axis", "0",
             "--collection", str(cpath), "--out", str(dst)]
        )
        assert code == 0
        derived = fileio.parse_channel(dst)
        expected = cq.derive_channel(chan, coll)
        for s, t in zip(derived.base.states, expected.states):
            np.testing.assert_array_equal(s.entries, t.entries)

    def test_derive_axis_conflict_is_input_error(self, tmp_path):
        src = tmp_path / "rand.json"
        cpath = tmp_path / "coll.json"
        run(
            ["gen", "--type", "random-mixed", "--dim", "2", "--inputs", "2", "2",
             "--seed", "4", "--out", str(src)]
        )
        chan = fileio.parse_channel(src)
        fileio.emit_collection(cq.uniform_collection(chan, 0), cpath)
        code, report = run(
            ["derive", "--channel", str(src), "--axis", "1",
             "--collection", str(cpath), "--out", str(tmp_path / "d.json")]
        )
        assert code == 3
        assert report["results"]["error"]["type"] == "SchemaError"

    def test_chain_check_command(self, tmp_path):
        path = tmp_path / "ccq.json"
        fileio.emit_ccq_state(cq.random_ccq_state(2, 2, 2, 17), path)
        code, report = run(["chain-check", "--state", str(path)])
        assert code == 0
        assert report["results"]["residual"] <= 1e-8
        assert report["results"]["lhs"] == pytest.approx(
            report["results"]["rhs"], abs=1e-8
        )

    def test_min_derived_on_single_axis_channel_is_input_error(self, tmp_path):
        path = tmp_path / "ortho.json"
        run(["gen", "--type", "orthogonal", "--out", str(path)])
        code, report = run(
            ["min-derived", "--channel", str(path), "--axis", "0",
             "--budget", "1", "--seed", "0"]
        )
        assert code == 3
        assert report["results"]["error"]["type"] == "AxisOutOfRange"

    def test_min_derived_on_xor(self, tmp_path):
        path = tmp_path / "xor.json"
        fileio.emit_channel(helpers.xor_channel(), path)
        code, report = run(
            ["min-derived", "--channel", str(path), "--axis", "0",
             "--budget", "2", "--seed", "0"]
        )
        assert code == 0
        assert report["results"]["estimate"] <= 1e-6
        assert report["results"]["witness"]["axis"] == 0

    def test_verify_superadd_product_channel(self, tmp_path):
        pp = tmp_path / "pp.json"
        prod = tmp_path / "prod.json"
        run(["gen", "--type", "purepair", "--overlap", "0.7071", "--out", str(pp)])
        code, _ = run(
            ["gen", "--type", "bsc", "--p", "0.1", "--tensor", str(pp),
             "--out", str(prod)]
        )
        assert code == 0
        code, report = run(
            ["verify-superadd", "--channel", str(prod), "--budget", "2", "--seed", "1"]
        )
        assert code == 0
        res = report["results"]
        assert res["verdict"] == "pass"
        assert res["chain_residual"] <= 1e-6
        assert res["feasibility_slack"] >= -1e-6

    def test_failing_verdict_maps_to_exit_2(self, tmp_path, monkeypatch):
        import dataclasses

        import cqcap.cli as cli_mod

        path = tmp_path / "chan.json"
        run(
            ["gen", "--type", "random-mixed", "--dim", "2", "--inputs", "2", "2",
             "--seed", "6", "--out", str(path)]
        )
        chan = fileio.parse_channel(path)
        cert = cq.verify_superadditivity(chan, budget=1, seed=0)
        forced = dataclasses.replace(
            cert, verdict="fail", reasons=("forced failure for exit-code wiring",)
        )
        monkeypatch.setattr(
            cli_mod, "verify_superadditivity", lambda *a, **k: forced
        )
        code, report = run(["verify-superadd", "--channel", str(path)])
        assert code == 2
        assert report["results"]["verdict"] == "fail"
        assert report["results"]["reasons"]

    def test_numerical_breakdown_maps_to_exit_4(self, tmp_path, monkeypatch):
        from cqcap.errors import NumericalBreakdown
        import cqcap.cli as cli_mod

        path = tmp_path / "ortho.json"
        run(["gen", "--type", "orthogonal", "--out", str(path)])

        def explode(*args, **kwargs):
            raise NumericalBreakdown("forced breakdown for exit-code wiring")

        monkeypatch.setattr(cli_mod, "capacity", explode)
        code, report = run(["capacity", "--channel", str(path)])
        assert code == 4
        assert report["results"]["error"]["type"] == "NumericalBreakdown"

    def test_gen_purepair_requires_overlap(self, tmp_path):
        code, report = run(["gen", "--type", "purepair", "--out", str(tmp_path / "x.json")])
        assert code == 1
        assert "overlap" in report["results"]["error"]["message"]

    def test_gen_flag_cross_contamination_rejected(self, tmp_path):
        code, _ = run(
            ["gen", "--type", "orthogonal", "--p", "0.1", "--out", str(tmp_path / "x.json")]
        )
        assert code == 1

    def test_gen_random_pure_states_are_rank_one(self, tmp_path):
        out = tmp_path / "pure.json"
        code, _ = run(
            ["gen", "--type", "random-pure", "--dim", "3", "--inputs", "2", "2",
             "--seed", "8", "--out", str(out)]
        )
        assert code == 0
        chan = fileio.parse_channel(out)
        for s in chan.base.states:
            assert cq.von_neumann_entropy(s) <= 1e-9


class TestReportDeterminism:
    def _results_bytes(self, argv):
        code, report = run(argv)
        assert code in (0, 2)
        return json.dumps(report["results"], sort_keys=True).encode()

    def test_repeat_runs_are_byte_identical(self, tmp_path):
        chan_path = tmp_path / "chan.json"
        run(
            ["gen", "--type", "random-mixed", "--dim", "2", "--inputs", "2", "2",
             "--seed", "21", "--out", str(chan_path)]
        )
        ccq_path = tmp_path / "ccq.json"
        fileio.emit_ccq_state(cq.random_ccq_state(2, 2, 2, 5), ccq_path)
        commands = [
            ["capacity", "--channel", str(chan_path)],
            ["min-derived", "--channel", str(chan_path), "--axis", "0",
             "--budget", "2", "--seed", "3"],
            ["verify-superadd", "--channel", str(chan_path), "--budget", "2",
             "--seed", "3"],
            ["chain-check", "--state", str(ccq_path)],
        ]
        for argv in commands:
            assert self._results_bytes(argv) == self._results_bytes(argv)

    def test_gen_output_files_are_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        argv = ["gen", "--type", "random-mixed", "--dim", "3", "--inputs", "2",
                "--seed", "77"]
        run(argv + ["--out", str(a)])
        run(argv + ["--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_error_reports_are_well_formed(self):
        code, report = run(["capacity", "--channel", "nope.json"])
        assert code == 3
        assert set(report) == {"command", "inputs", "results", "diagnostics"}
        assert report["diagnostics"]["backend"] in ("numba", "numpy")
