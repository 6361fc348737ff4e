"""Random instance generation and the JSON interchange format."""

import json

import numpy as np
import pytest

import lambertmul as lm


class TestRandomInstance:
    def test_deterministic_for_fixed_seed(self):
        a = lm.random_instance(0)
        b = lm.random_instance(0)
        assert a[0] == b[0]
        assert a[1] == b[1]
        for f, g in zip(a[2], b[2]):
            np.testing.assert_array_equal(f, g)

    def test_different_seeds_differ(self):
        a = lm.random_instance(1)
        b = lm.random_instance(2)
        same_space = a[0] == b[0]
        same_fns = all(
            f.shape == g.shape and np.array_equal(f, g) for f, g in zip(a[2], b[2])
        )
        assert not (same_space and same_fns)

    def test_weights_respect_floor(self):
        cfg = lm.GeneratorConfig(weight_floor_ratio=1e-6)
        for seed in range(300):
            sp, _, _ = lm.random_instance(seed, cfg)
            # the floor is relative to the mean raw draw, which the final
            # weights can only exceed, so this bound is conservative
            assert np.all(sp.weights >= 1e-6 * sp.weights.mean() * 0.999)

    def test_values_bounded_by_scale(self):
        cfg = lm.GeneratorConfig(value_scale=2.5)
        for seed in range(100):
            _, _, fns = lm.random_instance(seed, cfg)
            for f in fns:
                assert np.all(np.abs(f) <= 2.5 + 1e-12)

    def test_degenerate_shapes_emitted_often_enough(self):
        n_trials = 2000
        single = coarse = fine = 0
        for seed in range(n_trials):
            sp, pt, _ = lm.random_instance(seed)
            if sp.n_atoms == 1:
                single += 1
            if pt.is_coarse():
                coarse += 1
            if pt.is_fine():
                fine += 1
        assert single >= 0.05 * n_trials
        assert coarse >= 0.05 * n_trials
        assert fine >= 0.05 * n_trials

    def test_config_bounds_validated(self):
        with pytest.raises(ValueError):
            lm.GeneratorConfig(max_atoms=0)
        with pytest.raises(ValueError):
            lm.GeneratorConfig(value_scale=-1.0)


class TestSerialization:
    def test_round_trip_bit_exact(self, tmp_path):
        sp, pt, fns = lm.random_instance(11)
        functions = {"u": fns[0], "v": fns[1]}
        path = tmp_path / "inst.json"
        lm.write_instance(path, sp, pt, functions)
        sp2, pt2, fns2 = lm.read_instance(path)
        assert sp2 == sp
        assert pt2 == pt
        assert set(fns2) == {"u", "v"}
        np.testing.assert_array_equal(fns2["u"], fns[0])
        np.testing.assert_array_equal(fns2["v"], fns[1])

    def test_round_trip_awkward_floats(self, tmp_path):
        # values that need all 17 significant digits to survive
        sp = lm.make_space([0.1, 1 / 3, np.nextafter(1.0, 2.0)])
        pt = lm.make_partition(sp, [{0, 2}, {1}])
        f = np.array([np.pi, np.e, np.sqrt(2)]) * (1 + 1e-16j)
        path = tmp_path / "inst.json"
        lm.write_instance(path, sp, pt, {"f": f})
        sp2, _, fns2 = lm.read_instance(path)
        np.testing.assert_array_equal(sp2.weights, sp.weights)
        np.testing.assert_array_equal(fns2["f"], f)

    def test_complex_pair_format(self, tmp_path):
        path = tmp_path / "inst.json"
        path.write_text(
            '{"weights": [1.0, 1.0], "blocks": [[0, 1]],'
            ' "functions": {"f": [[1.0, 2.0], [3.0, 0.0]]}}'
        )
        _, _, fns = lm.read_instance(path)
        np.testing.assert_array_equal(fns["f"], [1 + 2j, 3 + 0j])

    def test_negative_weight_rejected_with_field(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"weights": [1.0, -1.0], "blocks": [[0, 1]], "functions": {}}')
        with pytest.raises(lm.InstanceFormatError, match="weights"):
            lm.read_instance(path)

    def test_malformed_json_reports_line(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"weights": [1.0,\n  oops]}')
        with pytest.raises(lm.InstanceFormatError, match="line 2"):
            lm.read_instance(path)

    def test_bad_complex_entry_reports_field(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(
            '{"weights": [1.0], "blocks": [[0]], "functions": {"f": [[1.0]]}}'
        )
        with pytest.raises(lm.InstanceFormatError, match=r"functions\['f'\]\[0\]"):
            lm.read_instance(path)

    def test_wrong_function_length_reports_field(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(
            '{"weights": [1.0, 1.0], "blocks": [[0, 1]], "functions": {"f": [[1.0, 0.0]]}}'
        )
        with pytest.raises(lm.InstanceFormatError, match="expected 2 values"):
            lm.read_instance(path)

    def test_block_gap_reports_field(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"weights": [1.0, 1.0], "blocks": [[0]], "functions": {}}')
        with pytest.raises(lm.InstanceFormatError, match="blocks"):
            lm.read_instance(path)


class TestInstanceRecord:
    def test_params_round_trip_including_inf_and_complex(self):
        sp, pt, fns = lm.random_instance(3)
        inst = lm.Instance(
            space=sp,
            partition=pt,
            functions={"u": fns[0]},
            params={"p": 2.0, "r": lm.INF, "lam": 1.5 - 0.5j, "search_seed": 7},
        )
        doc = json.loads(json.dumps(inst.to_dict()))
        back = lm.Instance.from_dict(doc)
        assert back.params["p"] == 2.0
        assert back.params["r"] == lm.INF
        assert back.params["lam"] == 1.5 - 0.5j
        assert back.params["search_seed"] == 7
        np.testing.assert_array_equal(back.functions["u"], fns[0])
