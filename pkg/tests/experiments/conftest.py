import pytest

from src.ai.collective import CLConfig
from src.experiments.config import ExperimentConfig, SplitConfig, SyntheticSpec


@pytest.fixture
def small_config():
    """Two quick trials on an 80-node block graph."""
    return ExperimentConfig(
        name="small",
        synthetic=SyntheticSpec(n=80, num_classes=2, homophily=0.9, avg_degree=6.0, feature_dim=4, feature_noise=1.0),
        cl=CLConfig(K=2, T=2, J=4, hidden_dim=4),
        split=SplitConfig(train_size=10, test_size=20, val_size=10, test_label_mode="random"),
        trials=2,
        seed=0,
        baseline_epochs=15,
    )
