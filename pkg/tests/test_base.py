import numpy as np
import pytest

from locbench.data import ValidationError
from locbench.learners import (
    FeatureMatrix,
    LearnerSpec,
    prediction_from_scores,
    standardize,
)


class TestStandardize:
    def test_two_point_column_by_hand(self):
        stats, transformed = standardize(np.array([[1.0], [3.0]]))
        assert stats.mean[0] == 2.0
        assert stats.scale[0] == 1.0  # population std of [1, 3]
        assert transformed[:, 0].tolist() == [-1.0, 1.0]

    def test_constant_column_passes_through(self):
        stats, transformed = standardize(np.array([[5.0, 1.0], [5.0, 2.0], [5.0, 3.0]]))
        assert transformed[:, 0].tolist() == [5.0, 5.0, 5.0]
        assert abs(transformed[:, 1].mean()) < 1e-9

    def test_idempotent_on_standardized_input(self):
        rng = np.random.default_rng(0)
        X = rng.normal(size=(50, 3))
        _, once = standardize(X)
        _, twice = standardize(once)
        assert np.allclose(once, twice, atol=1e-9)

    def test_transformed_train_has_zero_mean_unit_std(self):
        rng = np.random.default_rng(1)
        X = rng.normal(loc=7.0, scale=3.0, size=(40, 4))
        _, transformed = standardize(X)
        assert np.allclose(transformed.mean(axis=0), 0.0, atol=1e-9)
        assert np.allclose(transformed.std(axis=0), 1.0, atol=1e-9)

    def test_test_data_uses_training_statistics(self):
        train = np.array([[0.0], [2.0]])  # mean 1, std 1
        stats, _ = standardize(train)
        assert stats.transform(np.array([[3.0]]))[0, 0] == 2.0


class TestFeatureMatrix:
    def test_rejects_non_finite(self):
        with pytest.raises(ValidationError, match="non-finite"):
            FeatureMatrix(values=np.array([[1.0, np.nan]]), columns=("a", "b"))

    def test_rejects_column_name_mismatch(self):
        with pytest.raises(ValidationError):
            FeatureMatrix(values=np.zeros((2, 3)), columns=("a", "b"))

    def test_shape_accessors(self):
        fm = FeatureMatrix(values=np.zeros((4, 2)), columns=("a", "b"))
        assert (fm.n_rows, fm.n_cols) == (4, 2)


class TestLearnerSpec:
    def test_defaults_resolve_per_family(self):
        assert LearnerSpec("knn").resolved()["k"] == 5
        forest = LearnerSpec("random_forest").resolved()
        assert (forest["trees"], forest["depth"]) == (100, 10)
        gbt = LearnerSpec("gbt").resolved()
        assert (gbt["trees"], gbt["depth"], gbt["rate"]) == (100, 5, 0.1)
        assert LearnerSpec("ann").resolved()["layers"] == (10,)
        assert LearnerSpec("deep_learning").resolved()["layers"] == (50, 50)
        assert LearnerSpec("svr").resolved()["c"] == 1.0

    def test_overrides_merge(self):
        spec = LearnerSpec("random_forest", params={"trees": 7})
        assert spec.resolved()["trees"] == 7
        assert spec.resolved()["depth"] == 10

    def test_unknown_family_and_params_rejected(self):
        with pytest.raises(ValidationError, match="unknown learner family"):
            LearnerSpec("boosted_stumps")
        with pytest.raises(ValidationError, match="does not accept"):
            LearnerSpec("knn", params={"trees": 3})

    @pytest.mark.parametrize(
        "family,params",
        [
            ("knn", {"k": 0}),
            ("random_forest", {"trees": 0}),
            ("random_forest", {"depth": 0}),
            ("gbt", {"rate": 0.0}),
            ("gbt", {"rate": 1.5}),
            ("ann", {"layers": (0,)}),
            ("svr", {"c": 0.0}),
            ("svr", {"epsilon": -1.0}),
            ("svr", {"kernel": "poly"}),
        ],
    )
    def test_out_of_range_parameters_rejected(self, family, params):
        with pytest.raises(ValidationError):
            LearnerSpec(family, params=params)

    def test_text_round_trip(self):
        for spec in (
            LearnerSpec("knn", seed=7, params={"k": 3}),
            LearnerSpec("random_forest", seed=1, params={"trees": 50, "depth": 6}),
            LearnerSpec("svr", params={"c": 2.0, "epsilon": 0.05, "kernel": "linear"}),
            LearnerSpec("deep_learning", params={"layers": (20, 20), "rate": 0.05}),
        ):
            text = spec.to_text()
            back = LearnerSpec.from_text(text)
            assert back.family == spec.family
            assert back.seed == spec.seed
            assert back.resolved() == spec.resolved()

    def test_from_text_examples(self):
        spec = LearnerSpec.from_text("family=knn k=1 seed=9")
        assert (spec.family, spec.seed, spec.resolved()["k"]) == ("knn", 9, 1)
        spec = LearnerSpec.from_text("family=ann layers=15,5")
        assert spec.resolved()["layers"] == (15, 5)

    def test_from_text_requires_family(self):
        with pytest.raises(ValidationError, match="family"):
            LearnerSpec.from_text("k=3")
        with pytest.raises(ValidationError, match="key=value"):
            LearnerSpec.from_text("family=knn k")


class TestPredictionFromScores:
    def test_rejects_unnormalized(self):
        with pytest.raises(ValidationError):
            prediction_from_scores(np.array([0.5, 0.2, 0.1, 0.1]))

    def test_rejects_negative(self):
        with pytest.raises(ValidationError):
            prediction_from_scores(np.array([-0.1, 0.6, 0.3, 0.2]))

    def test_label_is_argmax(self):
        pred = prediction_from_scores(np.array([0.1, 0.2, 0.6, 0.1]))
        assert pred.label == "office"
        assert pred.confidence["office"] == pytest.approx(0.6)
