"""
Expressiveness battery: certified counterexample graphs, collapse of the
component models on them, separation through label sampling, and the
estimator properties collective training relies on.

Each check returns a CheckResult; a check that raises a library error is
reported as failed instead of aborting the battery.
"""

import math
from typing import Callable, List, Optional, Sequence

import numpy as np

from src.ai.collective import (
    CLConfig,
    CollectiveHistory,
    CollectiveTrainingResult,
    LabelSampleSet,
    LabelSource,
    MaskMatrix,
    Scenario,
    build_input,
    cl_infer,
    draw_label_samples,
    exhaustive_embedding_moments,
    exhaustive_expected_embedding,
    label_probabilities,
    mc_embedding,
    sample_mask,
    surrogate_bound,
)
from src.ai.common import CollectiveGNNError, Matrix
from src.ai.gnn import ModelKind, create_model, forward, train_baseline
from src.ai.graph import Graph, SplitSpec, UNLABELED
from src.ai.wl import make_prop2_graph, make_thm2_graph, wl_node_equivalence
from src.infrastructure.storage import ArtifactStore
from src.utils.logger import logger
from .config import ExperimentConfig, SplitConfig, SyntheticSpec
from .reports import CheckResult, ExpressivenessReport
from .runner import build_report, execute_trial

COLLAPSE_TOL = 1e-6
SEPARATION_MIN_GAP = 1e-3
SYMMETRY_TOL = 1e-9
SEPARATION_SUCCESS_RATE = 0.9
COLLAPSE_SEEDS = 10
SURROGATE_INSTANCES = 10
SURROGATE_SAMPLES = 200
UNBIASED_K = 10
UNBIASED_REPS = 1000
GCN_LAYERS = 2
RADIUS_EPOCHS = 200
RADIUS_LR = 0.05

SEPARATION_CONFIG = CLConfig(K=10, T=2, J=10, scenario=Scenario.TEST_UNLABELED)

BENCHMARK_CONFIG = ExperimentConfig(
    name="homophily-benchmark",
    synthetic=SyntheticSpec(n=600, num_classes=3, homophily=0.9, feature_noise=None),
    model=ModelKind.GCN,
    cl=CLConfig(K=5, T=4, J=50, scenario=Scenario.TEST_PARTIAL),
    split=SplitConfig(train_size=30, test_size=150, test_label_rate=0.5),
    trials=5,
    seed=0,
    ablations=["uniform"],
)


def max_pairwise_difference(z: Matrix, nodes: Sequence[int]) -> float:
    rows = z[list(nodes)]
    return float((rows.max(axis=0) - rows.min(axis=0)).max())


def _untrained_result(g: Graph, cfg: CLConfig, source: LabelSource, rng: np.random.Generator) -> CollectiveTrainingResult:
    """One randomly initialized GCN snapshot per iteration, as if collective training had produced them."""
    models = [
        create_model(ModelKind.GCN, g.num_features + g.num_classes, g.num_classes, rng, hidden_dim=cfg.hidden_dim)
        for _ in range(cfg.T)
    ]
    return CollectiveTrainingResult(
        kind=ModelKind.GCN.value,
        config=cfg,
        label_source=source,
        models=models,
        history=CollectiveHistory(kind=ModelKind.GCN.value, label_source=source, scenario=cfg.scenario),
    )


def _random_graph(rng: np.random.Generator, n: int, num_classes: int, edge_prob: float, discrete: bool) -> Graph:
    """Connected random graph: a path backbone plus independent extra edges."""
    edges = [(i, i + 1) for i in range(n - 1)]
    edges += [(i, j) for i in range(n) for j in range(i + 2, n) if rng.random() < edge_prob]
    if discrete:
        features = np.eye(2)[rng.integers(0, 2, size=n)]
        labels = np.full(n, UNLABELED)
    else:
        features = rng.normal(size=(n, 3))
        labels = rng.integers(0, num_classes, size=n)
    return Graph.from_edges(n, edges, features=features, labels=labels, num_classes=num_classes)


def check_thm2_certificate() -> CheckResult:
    cert = make_thm2_graph()
    cert.verify()
    return CheckResult(
        name="thm2_certificate",
        passed=True,
        detail={
            "shared_color": cert.shared_color,
            "wl_rounds": cert.wl_rounds,
            "automorphisms_checked": cert.automorphisms_checked,
        },
    )


def check_prop2_certificate(d: int) -> CheckResult:
    cert = make_prop2_graph(d)
    cert.verify()
    return CheckResult(
        name=f"prop2_certificate_d{d}",
        passed=True,
        detail={"num_nodes": cert.num_nodes, "pair": list(cert.pair), "distinguishing_nodes": cert.distinguishing_nodes},
    )


def check_baseline_collapse(seeds: Sequence[int]) -> CheckResult:
    """A randomly initialized GCN in eval mode gives the symmetric groups identical embeddings."""
    cert = make_thm2_graph()
    g = cert.graph()
    members = cert.group_a + cert.group_b
    gaps = []
    for seed in seeds[:COLLAPSE_SEEDS]:
        model = create_model(ModelKind.GCN, g.num_features, g.num_classes, np.random.default_rng(seed))
        z, _ = forward(model, g, g.features, False)
        gaps.append(max_pairwise_difference(z, members))
    return CheckResult(
        name="baseline_collapse",
        passed=max(gaps) < COLLAPSE_TOL,
        detail={"max_difference": max(gaps), "seeds": len(gaps)},
    )


def _group_gap(z: Matrix, group_a: Sequence[int], group_b: Sequence[int]) -> float:
    return float(np.abs(z[list(group_a)].mean(axis=0) - z[list(group_b)].mean(axis=0)).max())


def _dispersion_gap(variance: Matrix, group_a: Sequence[int], group_b: Sequence[int]) -> float:
    """Largest difference of the groups' mean per-sample variance, relative to their largest variance."""
    scale = max(float(variance[list(group_a) + list(group_b)].max()), np.finfo(np.float64).tiny)
    return _group_gap(variance, group_a, group_b) / scale


def check_collective_separation(seeds: Sequence[int]) -> CheckResult:
    """
    Single label samples spread the two groups' embeddings differently.

    The expected averaged embedding of the two groups is equal for any
    model, because the groups share every one-hop marginal. The exact
    per-sample variance is not: nodes of group A sit on triangles, so the
    samples they see are correlated. The control split mixes both orbits
    evenly and must stay symmetric.
    """
    cert = make_thm2_graph()
    g = cert.graph()
    cfg = SEPARATION_CONFIG
    n, num_classes = g.num_nodes, g.num_classes
    zero_labels = np.zeros((n, num_classes))
    mask = MaskMatrix.zeros(n)
    base = LabelSampleSet.zeros(cfg.K, n, num_classes)
    control_a = cert.group_a[::2] + cert.group_b[::2]
    control_b = cert.group_a[1::2] + cert.group_b[1::2]

    gaps, control_gaps = [], []
    for seed in seeds:
        rng = np.random.default_rng(seed)
        first, second = _untrained_result(g, cfg, LabelSource.PREDICTED, rng).models
        probs = label_probabilities(first, g, zero_labels, mask, base)
        _, variance = exhaustive_embedding_moments(second, g, zero_labels, mask, probs)
        gaps.append(_dispersion_gap(variance, cert.group_a, cert.group_b))
        control_gaps.append(_dispersion_gap(variance, control_a, control_b))
    successes = sum(gap > SEPARATION_MIN_GAP for gap in gaps)
    return CheckResult(
        name="collective_separation",
        passed=successes >= math.ceil(SEPARATION_SUCCESS_RATE * len(gaps)) and max(control_gaps) < SYMMETRY_TOL,
        detail={
            "successes": successes,
            "seeds": len(gaps),
            "min_gap": min(gaps),
            "max_control_gap": max(control_gaps),
        },
    )


def check_deterministic_symmetry(seeds: Sequence[int]) -> CheckResult:
    """Feeding probability rows instead of samples keeps the symmetric groups collapsed."""
    cert = make_thm2_graph()
    g = cert.graph()
    cfg = SEPARATION_CONFIG
    members = cert.group_a + cert.group_b
    worst = 0.0
    for seed in seeds:
        rng = np.random.default_rng(seed)
        result = _untrained_result(g, cfg, LabelSource.DETERMINISTIC, rng)
        inference = cl_infer(result, g, SplitSpec(train_labeled=[]), cfg, rng)
        worst = max([worst] + [max_pairwise_difference(z, members) for z in inference.embeddings])
    return CheckResult(
        name="deterministic_symmetry",
        passed=worst < SYMMETRY_TOL,
        detail={"max_difference": worst, "seeds": len(seeds), "iterations": cfg.T},
    )


def check_radius_extension(seeds: Sequence[int], d: int = GCN_LAYERS) -> CheckResult:
    """
    On the certified radius-extension pair, the d-layer baseline and the
    first collective iteration collapse the pair. The first iteration is
    trained on the two labeled distinguishing nodes, which sit at matching
    positions around u and v; the exact expected embedding of the second
    iteration then separates the pair.
    """
    cert = make_prop2_graph(d)
    g = cert.graph()
    u, v = cert.pair
    a, b = cert.distinguishing_nodes
    n, num_classes = g.num_nodes, g.num_classes
    zero_labels = np.zeros((n, num_classes))
    mask = MaskMatrix.zeros(n)
    base = LabelSampleSet.zeros(1, n, num_classes)
    first_inputs = build_input(g, zero_labels, zero_labels, mask)
    split = SplitSpec(train_labeled=[a, b])

    baseline_gaps, first_gaps, label_gaps, second_gaps = [], [], [], []
    for seed in seeds:
        rng = np.random.default_rng(seed)
        baseline = create_model(ModelKind.GCN, g.num_features, num_classes, rng)
        z, _ = forward(baseline, g, g.features, False)
        baseline_gaps.append(float(np.abs(z[u] - z[v]).max()))

        first = create_model(ModelKind.GCN, g.num_features + num_classes, num_classes, rng, dropout_p=0.0)
        first, _ = train_baseline(
            first, g, split, RADIUS_EPOCHS, RADIUS_LR, 0.0, None, rng, inputs=first_inputs
        )
        z1 = mc_embedding(first, g, zero_labels, mask, base)
        first_gaps.append(float(np.abs(z1[u] - z1[v]).max()))
        probs = label_probabilities(first, g, zero_labels, mask, base)
        label_gaps.append(float(np.abs(probs[a] - probs[b]).max()))

        second = create_model(ModelKind.GCN, g.num_features + num_classes, num_classes, rng)
        expected = exhaustive_expected_embedding(second, g, zero_labels, mask, probs)
        second_gaps.append(float(np.abs(expected[u] - expected[v]).max()))

    successes = sum(gap > SEPARATION_MIN_GAP for gap in second_gaps)
    collapsed = max(baseline_gaps + first_gaps) < COLLAPSE_TOL
    return CheckResult(
        name=f"radius_extension_d{d}",
        passed=collapsed and successes >= math.ceil(SEPARATION_SUCCESS_RATE * len(seeds)),
        detail={
            "pair": [u, v],
            "distinguishing_nodes": [a, b],
            "baseline_max_difference": max(baseline_gaps),
            "first_iteration_max_difference": max(first_gaps),
            "min_label_difference": min(label_gaps),
            "min_gap": min(second_gaps),
            "successes": successes,
            "seeds": len(seeds),
        },
    )


def check_surrogate_bound(seeds: Sequence[int]) -> CheckResult:
    """Mean single-sample loss stays above the loss at the mean embedding on random instances."""
    cfg = CLConfig(scenario=Scenario.TEST_PARTIAL)
    bounds = []
    for seed in seeds[:SURROGATE_INSTANCES]:
        rng = np.random.default_rng(seed)
        g = _random_graph(rng, 8, 3, 0.3, discrete=False)
        model = create_model(ModelKind.GCN, g.num_features + g.num_classes, g.num_classes, rng)
        m = sample_mask(g, g.labeled_nodes, cfg, rng)
        probs = rng.dirichlet(np.ones(g.num_classes), size=g.num_nodes)
        samples = LabelSampleSet(draw_label_samples(probs, SURROGATE_SAMPLES, rng), source_iteration=1)
        bounds.append(
            surrogate_bound(model, g, g.label_onehot(m.visible_nodes), m, samples, g.label_onehot(), m.complement)
        )
    return CheckResult(
        name="surrogate_bound",
        passed=all(bound.holds for bound in bounds),
        detail={
            "instances": len(bounds),
            "min_slack": min(b.mean_sample_loss - b.mean_embedding_loss for b in bounds),
        },
    )


def check_unbiasedness(seed: int) -> CheckResult:
    """The Monte Carlo embedding converges to the exhaustive expectation on a 4-node, 2-class path."""
    rng = np.random.default_rng(seed)
    n, num_classes = 4, 2
    g = Graph.from_edges(n, [(0, 1), (1, 2), (2, 3)], features=rng.normal(size=(n, 2)), num_classes=num_classes)
    model = create_model(ModelKind.GCN, g.num_features + num_classes, num_classes, rng)
    zero_labels = np.zeros((n, num_classes))
    mask = MaskMatrix.zeros(n)
    p = rng.uniform(0.2, 0.8, size=n)
    probs = np.stack([p, 1.0 - p], axis=1)

    exact = exhaustive_expected_embedding(model, g, zero_labels, mask, probs)
    estimates = np.stack([
        mc_embedding(model, g, zero_labels, mask, LabelSampleSet(draw_label_samples(probs, UNBIASED_K, rng), source_iteration=1))
        for _ in range(UNBIASED_REPS)
    ])
    # scalar summary: the mean over all embedding entries
    stats = estimates.mean(axis=(1, 2))
    error = float(stats.std(ddof=1) / math.sqrt(UNBIASED_REPS))
    deviation = float(abs(stats.mean() - exact.mean()))
    return CheckResult(
        name="unbiasedness",
        passed=deviation <= 3.0 * error,
        detail={"deviation": deviation, "standard_error": error, "samples": UNBIASED_K * UNBIASED_REPS},
    )


def check_wl_round_bound(seeds: Sequence[int]) -> CheckResult:
    """A d-layer GCN is constant on the classes of d + 1 refinement rounds."""
    worst = 0.0
    for seed in seeds[:COLLAPSE_SEEDS]:
        rng = np.random.default_rng(seed)
        g = _random_graph(rng, 10, 2, 0.15, discrete=True)
        model = create_model(ModelKind.GCN, g.num_features, g.num_classes, rng)
        z, _ = forward(model, g, g.features, False)
        coloring = wl_node_equivalence(g, GCN_LAYERS + 1)
        for members in coloring.classes():
            worst = max(worst, max_pairwise_difference(z, sorted(members)))
    return CheckResult(
        name="wl_round_bound",
        passed=worst < COLLAPSE_TOL,
        detail={"max_difference": worst, "rounds": GCN_LAYERS + 1},
    )


def check_homophily_benchmark(config: ExperimentConfig = BENCHMARK_CONFIG) -> CheckResult:
    """Collective GCN beats the baseline significantly; the uniform-label ablation does not."""
    records = [execute_trial(config, trial) for trial in range(config.trials)]
    report = build_report(config, records, reproducible=True)
    collective = report.collective
    uniform = report.ablations.get("uniform")
    gains = collective.t_test is not None and collective.improvement.mean > 0 and collective.t_test.significant()
    uniform_gain = (
        uniform is not None
        and uniform.t_test is not None
        and uniform.improvement.mean > 0
        and uniform.t_test.significant()
    )
    return CheckResult(
        name="homophily_benchmark",
        passed=gains and not uniform_gain,
        detail={
            "improvement": collective.improvement.mean,
            "p_value": collective.t_test.p_value if collective.t_test else None,
            "uniform_improvement": uniform.improvement.mean if uniform else None,
            "uniform_p_value": uniform.t_test.p_value if uniform and uniform.t_test else None,
        },
    )


def _run_check(name: str, check: Callable[[], CheckResult]) -> CheckResult:
    try:
        result = check()
    except CollectiveGNNError as e:
        logger.error(
            "Expressiveness check raised",
            check=name,
            error_type=type(e).__name__,
            error_message=str(e),
        )
        return CheckResult(name=name, passed=False, detail={"error_type": type(e).__name__, "error_message": str(e)})
    logger.info("Expressiveness check finished", check=result.name, passed=result.passed, **result.detail)
    return result


def cmd_expressiveness(
    num_seeds: int = 20,
    include_benchmark: bool = False,
    store: Optional[ArtifactStore] = None,
) -> ExpressivenessReport:
    """
    Run the whole battery on seeds ``0 .. num_seeds - 1``.

    Args:
        num_seeds: Seeds for the randomized checks
        include_benchmark: Also run the five-trial homophily benchmark (minutes)
        store: Where to write ``expressiveness.json`` (optional)

    Returns:
        ExpressivenessReport; ``passed`` is True only if every check passed
    """
    seeds = list(range(num_seeds))
    checks: List[tuple] = [
        ("thm2_certificate", check_thm2_certificate),
        ("prop2_certificate_d1", lambda: check_prop2_certificate(1)),
        ("prop2_certificate_d2", lambda: check_prop2_certificate(2)),
        ("baseline_collapse", lambda: check_baseline_collapse(seeds)),
        ("collective_separation", lambda: check_collective_separation(seeds)),
        ("deterministic_symmetry", lambda: check_deterministic_symmetry(seeds)),
        ("radius_extension_d2", lambda: check_radius_extension(seeds)),
        ("surrogate_bound", lambda: check_surrogate_bound(seeds)),
        ("unbiasedness", lambda: check_unbiasedness(seeds[0] if seeds else 0)),
        ("wl_round_bound", lambda: check_wl_round_bound(seeds)),
    ]
    if include_benchmark:
        checks.append(("homophily_benchmark", check_homophily_benchmark))

    report = ExpressivenessReport(seeds=seeds, checks=[_run_check(name, check) for name, check in checks])
    if store is not None:
        store.save_model(report, "expressiveness.json")
    logger.info(
        "Expressiveness battery finished",
        passed=report.passed,
        failed=[check.name for check in report.checks if not check.passed],
    )
    return report
