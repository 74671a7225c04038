import pytest

from src.components.evaluation import (
    Arm,
    GridConfig,
    ablate_k,
    accuracy,
    avg_steps,
    reliability,
    run_experiment,
    run_grid,
    validate_k_values,
)
from src.components.evaluation.config import GridDefaults
from src.components.evaluation.service import build_site
from src.components.memory import MemoryStore
from src.components.sim import BaselinePolicy, MemoryPolicy, OptimalPolicy, RecallSettings
from src.components.similarity import ReferenceEmbedder
from src.core.exceptions import ParameterError

SMALL = GridConfig(seed=7, nodes=30, tasks=5, reps=2, replicates=2)


@pytest.fixture(scope="module")
def small_site():
    return build_site(SMALL)


def test_optimal_single_rep(small_site):
    site, tasks = small_site
    m = run_grid(site, tasks, OptimalPolicy(site), reps=1, seed=0)
    assert m.success == [[True]] * len(tasks)
    assert m.steps == [[task.optimal_steps] for task in tasks]


def test_grid_rejects_zero_reps(small_site):
    site, tasks = small_site
    with pytest.raises(ParameterError):
        run_grid(site, tasks, OptimalPolicy(site), reps=0, seed=0)


def test_grid_is_deterministic(small_site):
    site, tasks = small_site
    assert run_grid(site, tasks, BaselinePolicy(site), 3, seed=11) == run_grid(
        site, tasks, BaselinePolicy(site), 3, seed=11
    )


def test_memory_grid_accumulates_online(small_site, embedder):
    site, tasks = small_site
    store = MemoryStore()
    seen = []
    m = run_grid(
        site,
        tasks,
        MemoryPolicy(site),
        reps=2,
        seed=3,
        store=store,
        recall=RecallSettings(k=8, tau=0.3, embedder=embedder),
        on_episode=seen.append,
    )
    assert [episode.task_id for episode in seen] == [task.task_id for task in tasks for _ in range(2)]
    assert len(store) == sum(sum(row) for row in m.steps)


def test_base_grid_leaves_store_alone(small_site):
    site, tasks = small_site
    store = MemoryStore()
    run_grid(site, tasks, BaselinePolicy(site), 1, seed=0, store=store)
    assert len(store) == 0


def test_experiment_is_reproducible(embedder):
    arms = [Arm.BASE, Arm.MEMORY]
    first = run_experiment(SMALL, arms, embedder)
    second = run_experiment(SMALL, arms, embedder)
    assert first == second
    assert [len(first.matrices[arm.value]) for arm in arms] == [2, 2]


def test_memory_without_retrieval_equals_base(embedder, small_site):
    config = SMALL.model_copy(update={"k": 0})
    result = run_experiment(config, [Arm.BASE, Arm.MEMORY], embedder, site=small_site)
    assert result.matrices["memory"] == result.matrices["base"]


def test_ablation_at_zero_equals_base(embedder, small_site):
    curve = ablate_k(SMALL, [0], embedder, site=small_site)
    base = run_experiment(SMALL, [Arm.BASE], embedder, site=small_site)
    scores = [accuracy(m) for m in base.matrices["base"]]
    assert curve.k_values == [0]
    assert curve.replicate_accuracy == [scores]
    assert curve.accuracy == [pytest.approx(sum(scores) / len(scores))]


@pytest.mark.parametrize("k_values", [[], [0, 0], [2, 1], [-1, 2]])
def test_bad_k_values(k_values):
    with pytest.raises(ParameterError):
        validate_k_values(k_values)


@pytest.fixture(scope="module")
def fixture_experiment():
    return run_experiment(GridConfig(), [Arm.BASE, Arm.MEMORY], ReferenceEmbedder())


@pytest.mark.slow
def test_memory_beats_base_on_fixture_experiment(fixture_experiment):
    base, memory = fixture_experiment.matrices["base"], fixture_experiment.matrices["memory"]
    assert len(base) == len(memory) == 10
    pairs = list(zip(base, memory))

    more_accurate = sum(accuracy(m) - accuracy(b) >= 0.10 - 1e-9 for b, m in pairs)
    assert more_accurate >= 8

    steadier = sum((reliability(m) or 0.0) > (reliability(b) or 0.0) for b, m in pairs)
    assert steadier >= 8

    shorter = sum(
        avg_steps(b) is not None and avg_steps(m) is not None and avg_steps(m) <= 0.9 * avg_steps(b)
        for b, m in pairs
    )
    assert shorter >= 8


@pytest.mark.slow
def test_breadth_sweep_reaches_plateau():
    curve = ablate_k(GridConfig(), list(GridDefaults.ABLATION_K), ReferenceEmbedder())
    by_k = dict(zip(curve.k_values, curve.replicate_accuracy))
    assert len(by_k[0]) == 10

    assert all(at_8 >= at_0 for at_0, at_8 in zip(by_k[0], by_k[8]))
    flat = sum(abs(at_16 - at_8) <= 0.02 + 1e-9 for at_8, at_16 in zip(by_k[8], by_k[16]))
    assert flat >= 8
