import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvnn_bench import gradcheck, nn
from cvnn_bench.ctensor import ShapeError
from cvnn_bench.wirtinger import complex_gradient, numeric_param_cogradient


def toy_separable(rng, n=400, noise=0.3):
    """Two-class complex dataset with means +/-(1+j): linearly separable."""
    f0 = (1 + 1j) + noise * (rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2)))
    f1 = -(1 + 1j) + noise * (rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2)))
    x = np.vstack([f0, f1])
    y = np.zeros((2 * n, 2))
    y[:n, 0] = 1.0
    y[n:, 1] = 1.0
    perm = rng.permutation(2 * n)
    return x[perm], y[perm]


class TestActivations:
    def test_type_a_relu_clips_components(self):
        out = nn.activate(nn.type_a("relu"), np.array([[1 - 2j]]))
        np.testing.assert_array_equal(out, [[1 + 0j]])
        out = nn.activate(nn.type_a("relu"), np.array([[-3 - 4j]]))
        np.testing.assert_array_equal(out, [[0 + 0j]])

    def test_type_b_relu_is_identity(self):
        rng = np.random.default_rng(0)
        z = rng.normal(size=(3, 4)) + 1j * rng.normal(size=(3, 4))
        np.testing.assert_allclose(nn.activate(nn.type_b("relu"), z), z, atol=1e-15)

    def test_type_a_real_field_collapses(self):
        x = np.array([[-1.0, 2.0]])
        np.testing.assert_array_equal(nn.activate(nn.type_a("relu"), x), [[0.0, 2.0]])
        out = nn.activate(nn.type_a("sigmoid"), x)
        assert not np.iscomplexobj(out)

    def test_linear_identity(self):
        z = np.array([[1 + 2j, -3j]])
        np.testing.assert_array_equal(nn.activate(nn.LINEAR, z), z)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            nn.ActivationKind("type_c", "relu")
        with pytest.raises(ValueError):
            nn.type_a("elu")


class TestSoftmaxMagnitude:
    def test_zero_row_is_uniform(self):
        np.testing.assert_allclose(nn.softmax_magnitude(np.zeros((1, 2), dtype=complex)), [[0.5, 0.5]])

    def test_phase_invariance(self):
        np.testing.assert_allclose(nn.softmax_magnitude(np.array([[3.0, 3.0j]])), [[0.5, 0.5]])

    def test_log_two_row(self):
        probs = nn.softmax_magnitude(np.array([[np.log(2.0), 0.0]], dtype=complex))
        np.testing.assert_allclose(probs, [[2 / 3, 1 / 3]], atol=1e-12)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=25, deadline=None)
    def test_rows_sum_to_one(self, seed):
        rng = np.random.default_rng(seed)
        z = 3 * (rng.normal(size=(4, 5)) + 1j * rng.normal(size=(4, 5)))
        sums = nn.softmax_magnitude(z).sum(axis=1)
        np.testing.assert_allclose(sums, 1.0, atol=1e-12)

    def test_invariant_to_common_magnitude_shift(self):
        mags = np.array([[0.7, 1.3, 0.2]])
        base = nn.softmax_magnitude(mags.astype(complex))
        shifted = nn.softmax_magnitude((mags + 5.0).astype(complex))
        np.testing.assert_allclose(base, shifted, atol=1e-12)


class TestCrossEntropy:
    def test_confident_correct_is_near_zero(self):
        probs = np.array([[1.0, 0.0]])
        labels = np.array([[1.0, 0.0]])
        assert nn.cross_entropy(probs, labels) == pytest.approx(0.0, abs=1e-9)

    def test_uniform_row_wrong_class(self):
        loss = nn.cross_entropy(np.array([[0.5, 0.5]]), np.array([[0.0, 1.0]]))
        assert loss == pytest.approx(np.log(2.0))

    def test_mean_invariance_over_identical_rows(self):
        probs = np.array([[0.3, 0.7]])
        labels = np.array([[0.0, 1.0]])
        one = nn.cross_entropy(probs, labels)
        two = nn.cross_entropy(np.tile(probs, (2, 1)), np.tile(labels, (2, 1)))
        assert one == pytest.approx(two)

    def test_shape_error(self):
        with pytest.raises(ShapeError):
            nn.cross_entropy(np.ones((1, 2)), np.ones((1, 3)))


class TestGlorotInit:
    def test_bound_for_paper_layer(self):
        rng = np.random.default_rng(1)
        w = nn.init_glorot_uniform(128, 64, rng)
        limit = np.sqrt(6.0 / 192.0)
        assert limit == pytest.approx(0.1768, abs=5e-4)
        assert np.abs(w.real).max() <= limit
        assert np.abs(w.imag).max() <= limit

    def test_variance_criterion(self):
        # E|w|^2 = 2/(fan_in+fan_out) for complex, Var(w) likewise for real
        rng = np.random.default_rng(2)
        w = nn.init_glorot_uniform(100, 100, rng)
        target = 2.0 / 200.0
        assert np.mean(np.abs(w) ** 2) == pytest.approx(target, rel=0.05)
        wr = nn.init_glorot_uniform(100, 100, rng, complex_field=False)
        assert wr.var() == pytest.approx(target, rel=0.05)

    def test_small_fans_zero_mean(self):
        rng = np.random.default_rng(3)
        draws = np.concatenate(
            [nn.init_glorot_uniform(3, 3, rng).reshape(-1) for _ in range(2000)]
        )
        se = np.std(draws.real) / np.sqrt(draws.size)
        assert abs(draws.real.mean()) < 3 * se
        assert abs(draws.imag.mean()) < 3 * se

    def test_real_model_weights_have_no_imaginary_part(self):
        rng = np.random.default_rng(4)
        w = nn.init_glorot_uniform(5, 4, rng, complex_field=False)
        assert not np.iscomplexobj(w)


class TestDropoutMask:
    def test_zero_rate_is_all_ones(self):
        mask = nn.dropout_mask(0.0, (3, 4), np.random.default_rng(0))
        np.testing.assert_array_equal(mask, np.ones((3, 4)))

    def test_half_rate_zero_fraction(self):
        mask = nn.dropout_mask(0.5, (250, 400), np.random.default_rng(1))
        zero_fraction = np.mean(mask == 0.0)
        assert zero_fraction == pytest.approx(0.5, abs=0.01)
        assert set(np.unique(mask)) == {0.0, 2.0}

    def test_expectation_preserving(self):
        rng = np.random.default_rng(2)
        mask = nn.dropout_mask(0.3, (1000, 100), rng)
        se = np.std(mask.reshape(-1)) / np.sqrt(mask.size)
        assert abs(mask.mean() - 1.0) < 3 * se

    def test_invalid_rate(self):
        with pytest.raises(ValueError):
            nn.dropout_mask(1.0, (2, 2), np.random.default_rng(0))


class TestForward:
    def test_zero_model_gives_uniform_probs(self):
        spec = nn.mlp_spec("complex", 3, (4,), n_classes=3, dropout_rate=0.0, seed=0)
        model = nn.build_model(spec)
        for layer in model.layers:
            layer.W[:] = 0
        rng = np.random.default_rng(0)
        batch = rng.normal(size=(5, 3)) + 1j * rng.normal(size=(5, 3))
        probs, _ = nn.forward(model, batch)
        np.testing.assert_allclose(probs, 1.0 / 3.0, atol=1e-12)

    def test_eval_mode_is_deterministic(self):
        spec = nn.mlp_spec("complex", 4, (6,), dropout_rate=0.5, seed=1)
        model = nn.build_model(spec)
        rng = np.random.default_rng(2)
        batch = rng.normal(size=(3, 4)) + 1j * rng.normal(size=(3, 4))
        p1, _ = nn.forward(model, batch, training=False)
        p2, _ = nn.forward(model, batch, training=False)
        np.testing.assert_array_equal(p1, p2)

    def test_identity_layer_matches_softmax_oracle(self):
        spec = nn.ModelSpec(
            field_kind="complex",
            layers=(nn.LayerSpec(3, 3, nn.SOFTMAX_MAGNITUDE),),
            seed=0,
        )
        model = nn.build_model(spec)
        model.layers[0].W = np.eye(3, dtype=complex)
        model.layers[0].b[:] = 0
        rng = np.random.default_rng(3)
        batch = rng.normal(size=(4, 3)) + 1j * rng.normal(size=(4, 3))
        probs, _ = nn.forward(model, batch)
        np.testing.assert_allclose(probs, nn.softmax_magnitude(batch), atol=1e-14)

    def test_forward_width_mismatch(self):
        spec = nn.mlp_spec("complex", 3, (4,), seed=0)
        model = nn.build_model(spec)
        with pytest.raises(ShapeError):
            nn.forward(model, np.zeros((2, 5), dtype=complex))

    def test_real_model_rejects_complex_batch(self):
        spec = nn.mlp_spec("real", 3, (4,), seed=0)
        model = nn.build_model(spec)
        with pytest.raises(ShapeError):
            nn.forward(model, np.zeros((2, 3), dtype=complex))


class TestBackward:
    def test_keystone_finite_difference_match(self):
        # every dW/db entry on a 2-layer model over 5 random batches
        rng = np.random.default_rng(10)
        spec = nn.mlp_spec("complex", 4, (5,), n_classes=2, dropout_rate=0.0, seed=11)
        model = nn.build_model(spec)
        for _ in range(5):
            batch = rng.normal(size=(6, 4)) + 1j * rng.normal(size=(6, 4))
            labels = np.zeros((6, 2))
            labels[np.arange(6), rng.integers(0, 2, 6)] = 1.0
            errs = gradcheck.model_gradient_error(model, batch, labels)
            assert max(errs.values()) <= 1e-5

    def test_keystone_with_dropout_masks_fixed(self):
        rng = np.random.default_rng(12)
        spec = nn.mlp_spec("complex", 3, (6, 4), n_classes=2, dropout_rate=0.5, seed=13)
        model = nn.build_model(spec)
        batch = rng.normal(size=(4, 3)) + 1j * rng.normal(size=(4, 3))
        labels = np.zeros((4, 2))
        labels[:, 0] = 1.0
        masks = [
            nn.dropout_mask(ls.dropout_rate, (4, ls.output_size), rng) if ls.dropout_rate else None
            for ls in spec.layers
        ]
        errs = gradcheck.model_gradient_error(model, batch, labels, masks=masks)
        assert max(errs.values()) <= 1e-5

    def test_gradients_vanish_at_perfect_prediction(self):
        spec = nn.ModelSpec(
            field_kind="complex", layers=(nn.LayerSpec(2, 2, nn.SOFTMAX_MAGNITUDE),), seed=0
        )
        model = nn.build_model(spec)
        model.layers[0].W = 50.0 * np.eye(2, dtype=complex)
        batch = np.array([[1.0 + 0j, 0.001 + 0j], [0.001 + 0j, 1.0 + 0j]])
        labels = np.eye(2)
        probs, cache = nn.forward(model, batch)
        assert np.allclose(probs, labels, atol=1e-6)
        grads = nn.backward(model, cache, labels)
        assert max(np.abs(g).max() for pair in grads for g in pair) < 1e-4

    def test_real_model_gradients_are_exactly_real(self):
        rng = np.random.default_rng(14)
        spec = nn.mlp_spec("real", 4, (5,), n_classes=2, dropout_rate=0.0, seed=15)
        model = nn.build_model(spec)
        batch = rng.normal(size=(6, 4))
        labels = np.zeros((6, 2))
        labels[np.arange(6), rng.integers(0, 2, 6)] = 1.0
        _, cache = nn.forward(model, batch)
        for dW, db in nn.backward(model, cache, labels):
            assert not np.iscomplexobj(dW) and not np.iscomplexobj(db)

    def test_real_model_matches_finite_differences(self):
        rng = np.random.default_rng(16)
        spec = nn.mlp_spec("real", 3, (5,), n_classes=2, dropout_rate=0.0, seed=17)
        model = nn.build_model(spec)
        batch = rng.normal(size=(5, 3))
        labels = np.zeros((5, 2))
        labels[np.arange(5), rng.integers(0, 2, 5)] = 1.0
        errs = gradcheck.model_gradient_error(model, batch, labels)
        assert max(errs.values()) <= 1e-5

    def test_label_shape_mismatch(self):
        spec = nn.mlp_spec("complex", 3, (4,), seed=0)
        model = nn.build_model(spec)
        _, cache = nn.forward(model, np.zeros((2, 3), dtype=complex))
        with pytest.raises(ShapeError):
            nn.backward(model, cache, np.zeros((2, 3)))


class TestMseLoss:
    def test_value_and_cogradient_match_oracle(self):
        rng = np.random.default_rng(18)
        pred = rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))
        target = rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))
        loss, pair = nn.mse_loss(pred, target)
        assert loss == pytest.approx(np.mean(np.abs(pred - target) ** 2))
        numeric = numeric_param_cogradient(lambda: nn.mse_loss(pred, target)[0], pred)
        np.testing.assert_allclose(pair.d_zbar, numeric.d_zbar, atol=1e-7)
        np.testing.assert_allclose(pair.d_z, numeric.d_z, atol=1e-7)


class TestSgdStep:
    def test_zero_learning_rate_is_identity(self):
        spec = nn.mlp_spec("complex", 2, (3,), seed=0)
        model = nn.build_model(spec)
        before = [layer.W.copy() for layer in model.layers]
        grads = [(np.ones_like(l.W), np.ones_like(l.b)) for l in model.layers]
        nn.sgd_step(model, grads, 0.0)
        for b, layer in zip(before, model.layers):
            np.testing.assert_array_equal(b, layer.W)

    def test_scalar_update(self):
        spec = nn.ModelSpec(
            field_kind="complex", layers=(nn.LayerSpec(1, 1, nn.SOFTMAX_MAGNITUDE),), seed=0
        )
        model = nn.build_model(spec)
        w0 = complex(model.layers[0].W[0, 0])
        grads = [(np.array([[1 + 1j]]), np.zeros((1, 1), dtype=complex))]
        nn.sgd_step(model, grads, 0.01)
        assert complex(model.layers[0].W[0, 0]) == pytest.approx(w0 - (0.01 + 0.01j))

    def test_descent_property_at_small_step(self):
        rng = np.random.default_rng(19)
        for trial in range(20):
            spec = nn.mlp_spec(
                "complex", 3, (4,), n_classes=2, dropout_rate=0.0, seed=int(rng.integers(1 << 30))
            )
            model = nn.build_model(spec)
            batch = rng.normal(size=(8, 3)) + 1j * rng.normal(size=(8, 3))
            labels = np.zeros((8, 2))
            labels[np.arange(8), rng.integers(0, 2, 8)] = 1.0
            probs, cache = nn.forward(model, batch)
            before = nn.cross_entropy(probs, labels)
            nn.sgd_step(model, nn.backward(model, cache, labels), 1e-4)
            after = nn.cross_entropy(nn.forward(model, batch)[0], labels)
            assert after <= before + 1e-12

    def test_gradient_shape_mismatch(self):
        spec = nn.mlp_spec("complex", 2, (3,), seed=0)
        model = nn.build_model(spec)
        bad = [(np.zeros((5, 5)), np.zeros((1, 3)))] * len(model.layers)
        with pytest.raises(ShapeError):
            nn.sgd_step(model, bad, 0.1)


class TestTrainEvaluate:
    def test_separable_toy_reaches_high_accuracy(self):
        rng = np.random.default_rng(20)
        x, y = toy_separable(rng)
        spec = nn.mlp_spec("complex", 2, (8,), dropout_rate=0.0, seed=21)
        cfg = nn.TrainConfig(epochs=50, batch_size=32, learning_rate=0.01, rng_seed=22)
        _, hist = nn.train(spec, (x[:600], y[:600]), (x[600:], y[600:]), cfg)
        assert max(hist.test_accuracy) >= 0.99
        assert len(hist.test_accuracy) == 50

    def test_training_is_bit_deterministic(self):
        rng = np.random.default_rng(23)
        x, y = toy_separable(rng, n=60)
        spec = nn.mlp_spec("complex", 2, (4,), dropout_rate=0.5, seed=24)
        cfg = nn.TrainConfig(epochs=5, batch_size=16, rng_seed=25)
        _, h1 = nn.train(spec, (x[:80], y[:80]), (x[80:], y[80:]), cfg)
        _, h2 = nn.train(spec, (x[:80], y[:80]), (x[80:], y[80:]), cfg)
        assert h1 == h2

    def test_batch_size_larger_than_dataset_rejected(self):
        rng = np.random.default_rng(26)
        x, y = toy_separable(rng, n=10)
        spec = nn.mlp_spec("complex", 2, (3,), seed=0)
        with pytest.raises(ValueError):
            nn.train(spec, (x, y), (x, y), nn.TrainConfig(epochs=1, batch_size=100))

    def test_width_mismatch_rejected(self):
        spec = nn.mlp_spec("complex", 3, (3,), seed=0)
        x = np.zeros((10, 2), dtype=complex)
        y = np.tile([1.0, 0.0], (10, 1))
        with pytest.raises(ShapeError):
            nn.train(spec, (x, y), (x, y), nn.TrainConfig(epochs=1, batch_size=5))

    def test_evaluate_perfect_predictions(self):
        spec = nn.ModelSpec(
            field_kind="complex", layers=(nn.LayerSpec(2, 2, nn.SOFTMAX_MAGNITUDE),), seed=0
        )
        model = nn.build_model(spec)
        model.layers[0].W = 10.0 * np.eye(2, dtype=complex)
        x = np.array([[1 + 0j, 0j], [0j, 1 + 0j]])
        y = np.eye(2)
        loss, acc = nn.evaluate(model, (x, y))
        assert acc == 1.0

    def test_evaluate_random_model_is_chance(self):
        rng = np.random.default_rng(27)
        from cvnn_bench import datagen

        ds = datagen.make_dataset("A", 5000, 16, rng)
        spec = nn.mlp_spec("complex", 16, (8,), seed=28)
        model = nn.build_model(spec)
        _, acc = nn.evaluate(model, ds)
        assert acc == pytest.approx(0.5, abs=0.05)

    def test_evaluate_is_repeatable(self):
        rng = np.random.default_rng(29)
        x, y = toy_separable(rng, n=30)
        spec = nn.mlp_spec("complex", 2, (3,), seed=30)
        model = nn.build_model(spec)
        assert nn.evaluate(model, (x, y)) == nn.evaluate(model, (x, y))


class TestStructure:
    def test_real_parameter_counts_1hl(self):
        cvnn = nn.mlp_spec("complex", 128, (64,), seed=0)
        assert nn.parameter_count(cvnn) == 128 * 64 + 64 + 64 * 2 + 2
        assert nn.real_parameter_count(cvnn) == 2 * (128 * 64 + 64 + 64 * 2 + 2)

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            nn.ModelSpec(field_kind="complex", layers=(), seed=0)
        with pytest.raises(ValueError):
            nn.ModelSpec(
                field_kind="quaternion",
                layers=(nn.LayerSpec(2, 2, nn.SOFTMAX_MAGNITUDE),),
                seed=0,
            )
        with pytest.raises(ValueError):
            nn.ModelSpec(
                field_kind="complex",
                layers=(
                    nn.LayerSpec(2, 3, nn.type_a("relu")),
                    nn.LayerSpec(4, 2, nn.SOFTMAX_MAGNITUDE),
                ),
                seed=0,
            )

    def test_final_layer_must_be_softmax(self):
        with pytest.raises(ValueError):
            nn.ModelSpec(
                field_kind="complex", layers=(nn.LayerSpec(2, 2, nn.type_a("relu")),), seed=0
            )


class TestSaveLoad:
    def test_complex_round_trip(self, tmp_path):
        spec = nn.mlp_spec("complex", 5, (4, 3), n_classes=2, dropout_rate=0.5, seed=31)
        model = nn.build_model(spec)
        path = tmp_path / "weights.cvnnw"
        nn.save_model(model, path)
        back = nn.load_model(path)
        assert back.spec == model.spec
        for a, b in zip(model.layers, back.layers):
            np.testing.assert_array_equal(a.W, b.W)
            np.testing.assert_array_equal(a.b, b.b)

    def test_real_round_trip(self, tmp_path):
        spec = nn.mlp_spec("real", 4, (3,), seed=32)
        model = nn.build_model(spec)
        path = tmp_path / "weights.cvnnw"
        nn.save_model(model, path)
        back = nn.load_model(path)
        assert not np.iscomplexobj(back.layers[0].W)
        for a, b in zip(model.layers, back.layers):
            np.testing.assert_array_equal(a.W, b.W)

    def test_bad_magic_rejected(self, tmp_path):
        path = tmp_path / "junk.bin"
        path.write_bytes(b"NOTAMODEL" * 4)
        with pytest.raises(ValueError):
            nn.load_model(path)

    def test_predictions_survive_round_trip(self, tmp_path):
        rng = np.random.default_rng(33)
        spec = nn.mlp_spec("complex", 3, (4,), seed=34)
        model = nn.build_model(spec)
        batch = rng.normal(size=(6, 3)) + 1j * rng.normal(size=(6, 3))
        path = tmp_path / "w.cvnnw"
        nn.save_model(model, path)
        p1, _ = nn.forward(model, batch)
        p2, _ = nn.forward(nn.load_model(path), batch)
        np.testing.assert_array_equal(p1, p2)
