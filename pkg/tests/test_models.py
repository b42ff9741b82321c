"""Model registry, hyperparameter applicability, and variant fitting."""

import numpy as np
import pytest

from stablepred.data import build_laplacian, standardize
from stablepred.models import (
    AUGMENTED_MODELS,
    AUTOENCODER_MODELS,
    GRAPH_MODELS,
    MODEL_NAMES,
    ModelSpec,
    fit_model,
    validate_hyperparams,
)
from stablepred.objectives import HyperParams
from stablepred.optimizer import OptimizerConfig
from stablepred.synthetic import SyntheticSpec, generate, make_group_graph

SPEC = SyntheticSpec(
    n_samples=60, n_groups=3, group_size=4, within_group_noise=0.3,
    n_informative_groups=1, true_weight_scale=1.5, label_noise=0.0, seed=8,
)

# one activating assignment per knob, paired with the models that accept it
KNOB_GRID = [
    ("lambda_en", {"lambda_en": 0.5}, frozenset({"elastic-net"})),
    ("lambda_fg", {"lambda_fg": 0.2}, GRAPH_MODELS),
    ("lambda_ae", {"lambda_ae": 5.0}, AUTOENCODER_MODELS),
    ("lambda_l2", {"lambda_l2": 0.01}, AUTOENCODER_MODELS),
]


class TestValidateHyperparams:
    def test_neutral_settings_accepted_everywhere(self):
        for model in MODEL_NAMES:
            validate_hyperparams(model, HyperParams(alpha=0.1))

    @pytest.mark.parametrize("model", MODEL_NAMES)
    @pytest.mark.parametrize("knob,assignment,accepted_by", KNOB_GRID)
    def test_applicability_grid(self, model, knob, assignment, accepted_by):
        h = HyperParams(alpha=0.1, **assignment)
        if model in accepted_by:
            validate_hyperparams(model, h)
        else:
            with pytest.raises(ValueError, match=knob):
                validate_hyperparams(model, h)

    def test_unknown_model(self):
        with pytest.raises(ValueError, match="unknown model"):
            validate_hyperparams("ridge", HyperParams())


class TestModelSpec:
    def test_graph_requirements(self):
        d = generate(SPEC)
        lap = build_laplacian(make_group_graph(SPEC), d.feature_names)
        with pytest.raises(ValueError, match="requires a feature-graph"):
            ModelSpec("lasso-graph")
        with pytest.raises(ValueError, match="does not take a Laplacian"):
            ModelSpec("lasso", laplacian=lap)
        ModelSpec("lasso-graph", laplacian=lap)

    def test_augment_requirements(self):
        d = generate(SPEC)
        lap = build_laplacian(make_group_graph(SPEC), d.feature_names)
        rows = np.zeros((3, d.n_features))
        with pytest.raises(ValueError, match="requires an augment"):
            ModelSpec("ag-lasso-autoencoder-graph", laplacian=lap)
        with pytest.raises(ValueError, match="does not take an augment"):
            ModelSpec("lasso-autoencoder-graph", laplacian=lap, augment=rows)
        ModelSpec("ag-lasso-autoencoder-graph", laplacian=lap, augment=rows)


class TestFitModel:
    def setup_method(self):
        self.train = standardize(generate(SPEC))
        self.lap = build_laplacian(make_group_graph(SPEC), self.train.feature_names)
        aug_spec = SyntheticSpec(**{**SPEC.__dict__, "seed": SPEC.seed + 2})
        self.aug = standardize(generate(aug_spec, labeled=False)).X
        self.cfg = OptimizerConfig(max_iters=250, learning_rate=0.05, rel_tol=1e-8, seed=3)

    def variants(self):
        h_lin = HyperParams(alpha=0.02)
        h_ae = HyperParams(alpha=0.02, lambda_ae=10.0, lambda_l2=1e-3, hidden_units=3)
        yield ModelSpec("lasso"), h_lin
        yield ModelSpec("elastic-net"), HyperParams(alpha=0.02, lambda_en=0.5)
        yield ModelSpec("lasso-graph", laplacian=self.lap), HyperParams(alpha=0.02, lambda_fg=0.05)
        yield ModelSpec("lasso-autoencoder"), h_ae
        yield (
            ModelSpec("lasso-autoencoder-graph", laplacian=self.lap),
            HyperParams(alpha=0.02, lambda_ae=10.0, lambda_l2=1e-3, lambda_fg=0.05, hidden_units=3),
        )
        yield (
            ModelSpec("ag-lasso-autoencoder-graph", laplacian=self.lap, augment=self.aug),
            HyperParams(alpha=0.02, lambda_ae=10.0, lambda_l2=1e-3, lambda_fg=0.05, hidden_units=3),
        )

    def test_every_variant_fits_and_descends(self):
        for spec, h in self.variants():
            fit = fit_model(spec, self.train, h, self.cfg)
            assert fit.effective_theta.shape == (self.train.n_features,)
            assert fit.result.final_loss <= fit.result.loss_trace[0]
            assert np.all(np.isfinite(fit.effective_theta))

    def test_factorized_theta_matches_params(self):
        spec = ModelSpec("lasso-autoencoder")
        h = HyperParams(alpha=0.02, lambda_ae=10.0, lambda_l2=1e-3, hidden_units=3)
        fit = fit_model(spec, self.train, h, self.cfg)
        np.testing.assert_array_equal(fit.effective_theta, fit.params.effective_theta())

    def test_deterministic_given_seed(self):
        spec = ModelSpec("lasso-autoencoder")
        h = HyperParams(alpha=0.02, lambda_ae=10.0, hidden_units=3)
        a = fit_model(spec, self.train, h, self.cfg, init_seed=5)
        b = fit_model(spec, self.train, h, self.cfg, init_seed=5)
        assert a.effective_theta.tobytes() == b.effective_theta.tobytes()

    def test_rejects_inapplicable_hyperparams(self):
        with pytest.raises(ValueError, match="lambda_ae"):
            fit_model(ModelSpec("lasso"), self.train, HyperParams(lambda_ae=1.0), self.cfg)

    def test_rejects_unlabeled_data(self):
        from stablepred.data import make_dataset

        unlabeled = make_dataset(self.train.X)
        with pytest.raises(ValueError, match="labeled"):
            fit_model(ModelSpec("lasso"), unlabeled, HyperParams(), self.cfg)

    def test_large_alpha_sparser_than_small(self):
        cfg = OptimizerConfig(max_iters=400, learning_rate=0.02, rel_tol=1e-9, seed=3)
        small = fit_model(ModelSpec("lasso"), self.train, HyperParams(alpha=0.001), cfg)
        large = fit_model(ModelSpec("lasso"), self.train, HyperParams(alpha=0.5), cfg)
        tol = 1e-2
        assert np.sum(np.abs(large.effective_theta) > tol) < np.sum(
            np.abs(small.effective_theta) > tol
        )
