"""Channel construction, slicing, deriving, and random instances."""

import numpy as np
import pytest

import cqcap as cq
from cqcap.errors import (
    AxisOutOfRange,
    InvalidEnsemble,
    ShapeMismatch,
    UnknownLetter,
)
import helpers


class TestConstruction:
    def test_duplicate_labels_rejected(self):
        with pytest.raises(ShapeMismatch):
            cq.CqChannel.from_states(
                ["a", "a"], [cq.maximally_mixed(2), cq.maximally_mixed(2)]
            )

    def test_base_alphabet_must_match_axes(self):
        bit = [cq.pure_state([1.0, 0.0]), cq.pure_state([0.0, 1.0])]
        base = cq.CqChannel.from_states(["x", "y"], bit)
        with pytest.raises(ShapeMismatch):
            cq.MultipartiteChannel(axes=(("0", "1"),), base=base)

    def test_flat_index_round_trip(self):
        chan = cq.random_channel(2, [2, 3, 4], "pure", 0)
        for flat in range(24):
            assert chan.flat_index(chan.tuple_index(flat)) == flat

    def test_tuple_labels_are_row_major(self):
        chan = cq.random_channel(2, [2, 2], "pure", 1)
        assert list(chan.base.alphabet) == ["0,0", "0,1", "1,0", "1,1"]


class TestSliceChannel:
    def test_xor_slice_substitutes_the_letter(self):
        sliced = cq.slice_channel(helpers.xor_channel(), 0, "1")
        assert isinstance(sliced, cq.CqChannel)
        np.testing.assert_allclose(
            sliced.states[0].entries, cq.pure_state([0.0, 1.0]).entries
        )
        np.testing.assert_allclose(
            sliced.states[1].entries, cq.pure_state([1.0, 0.0]).entries
        )

    def test_slicing_ignored_axis_returns_axis_channel(self):
        chan = helpers.ignore_y_channel()
        for letter in ("0", "1"):
            sliced = cq.slice_channel(chan, 1, letter)
            for x in range(2):
                np.testing.assert_allclose(
                    sliced.states[x].entries, chan.base.states[2 * x].entries
                )

    def test_double_slice_matches_pair_fixing(self):
        chan = cq.random_channel(2, [2, 2, 2], "mixed", 42)
        for a0 in ("0", "1"):
            for a1 in ("0", "1"):
                # slice axis 0 then (old) axis 1, in both orders
                once = cq.slice_channel(cq.slice_channel(chan, 0, a0), 0, a1)
                twice = cq.slice_channel(cq.slice_channel(chan, 1, a1), 0, a0)
                direct = [
                    chan.base.states[chan.flat_index((int(a0), int(a1), z))]
                    for z in range(2)
                ]
                for z in range(2):
                    np.testing.assert_array_equal(
                        once.states[z].entries, direct[z].entries
                    )
                    np.testing.assert_array_equal(
                        twice.states[z].entries, direct[z].entries
                    )

    def test_unknown_letter_and_axis(self):
        chan = helpers.xor_channel()
        with pytest.raises(UnknownLetter):
            cq.slice_channel(chan, 0, "2")
        with pytest.raises(AxisOutOfRange):
            cq.slice_channel(chan, 5, "0")


class TestDeriveChannel:
    def test_point_mass_collection_matches_slice(self):
        chan = cq.random_channel(2, [2, 3], "mixed", 9)
        for axis in (0, 1):
            comp = 3 if axis == 0 else 2
            comp_axis = 1 - axis
            for t0 in range(comp):
                coll = cq.point_mass_collection(chan, axis, t0)
                derived = cq.derive_channel(chan, coll)
                sliced = cq.slice_channel(
                    chan, comp_axis, chan.axes[comp_axis][t0]
                )
                for i in range(len(derived.alphabet)):
                    np.testing.assert_allclose(
                        derived.states[i].entries,
                        sliced.states[i].entries,
                        atol=1e-15,
                    )

    def test_xor_derivation_embeds_binary_symmetric_channel(self):
        p = 0.3
        dist = cq.ProbDist.validated([1.0 - p, p])
        coll = cq.DerivedCollection(axis=0, dists=(dist, dist))
        derived = cq.derive_channel(helpers.xor_channel(), coll)
        np.testing.assert_allclose(derived.states[0].entries, np.diag([1 - p, p]), atol=1e-15)
        np.testing.assert_allclose(derived.states[1].entries, np.diag([p, 1 - p]), atol=1e-15)

    def test_uniform_collection_on_ignored_axis_recovers_axis_channel(self):
        chan = helpers.ignore_y_channel()
        derived = cq.derive_channel(chan, cq.uniform_collection(chan, 0))
        for x in range(2):
            np.testing.assert_allclose(
                derived.states[x].entries, chan.base.states[2 * x].entries, atol=1e-15
            )

    def test_derived_states_are_valid(self):
        rng = np.random.default_rng(7)
        for seed in range(10):
            chan = cq.random_channel(3, [2, 2], "mixed", seed)
            coll = cq.random_collection(chan, int(rng.integers(0, 2)), rng)
            derived = cq.derive_channel(chan, coll)
            for s in derived.states:
                cq.validate_state(s.entries)

    def test_shape_mismatch_rejected(self):
        chan = helpers.xor_channel()
        bad = cq.DerivedCollection(axis=0, dists=(cq.ProbDist.uniform(3),) * 2)
        with pytest.raises(ShapeMismatch):
            cq.derive_channel(chan, bad)

    def test_data_processing_on_random_instances(self):
        tol = 1e-6
        rng = np.random.default_rng(1234)
        for seed in range(20):
            chan = cq.random_channel(2, [2, 2], "mixed", 500 + seed)
            axis = int(rng.integers(0, 2))
            coll = cq.random_collection(chan, axis, rng)
            derived_cap = cq.capacity(cq.derive_channel(chan, coll), tol).value
            base_cap = cq.capacity(chan.base, tol).value
            assert derived_cap <= base_cap + 2 * tol


class TestRandomChannel:
    def test_same_seed_gives_identical_channels(self):
        a = cq.random_channel(3, [2, 2], "mixed", 77)
        b = cq.random_channel(3, [2, 2], "mixed", 77)
        for s, t in zip(a.base.states, b.base.states):
            np.testing.assert_array_equal(s.entries, t.entries)

    def test_different_seed_differs(self):
        a = cq.random_channel(2, [2], "mixed", 1)
        b = cq.random_channel(2, [2], "mixed", 2)
        assert np.abs(a.base.states[0].entries - b.base.states[0].entries).max() > 1e-6

    def test_pure_ensemble_has_zero_entropy(self):
        chan = cq.random_channel(4, [3, 2], "pure", 5)
        for s in chan.base.states:
            assert cq.von_neumann_entropy(s) <= 1e-9

    def test_mixed_ensemble_mean_entropy_is_interior(self):
        chan = cq.random_channel(2, [1000], "mixed", 12)
        mean = np.mean([cq.von_neumann_entropy(s) for s in chan.base.states])
        assert 0.0 < mean < 1.0

    def test_invalid_ensemble(self):
        with pytest.raises(InvalidEnsemble):
            cq.random_channel(2, [2], "thermal", 0)


class TestTensorChannel:
    def test_axes_concatenate_and_states_kron(self):
        left = cq.MultipartiteChannel.wrap(helpers.orthogonal_channel())
        right = cq.MultipartiteChannel.wrap(helpers.bsc_channel(0.1))
        prod = cq.tensor_channel(left, right)
        assert prod.k == 2
        assert prod.dim == 4
        expected = np.kron(np.diag([1.0, 0.0]), np.diag([0.9, 0.1]))
        np.testing.assert_allclose(prod.base.states[0].entries, expected, atol=1e-15)
