import logging
import math
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from src.core.exceptions import ParameterError
from src.utils.seeds import derive_seed

from ..memory.service import MemoryStore
from ..similarity.schema import Embedder
from ..sim.agent import BaselinePolicy, MemoryPolicy, OptimalPolicy, Policy
from ..sim.schema import EpisodeResult, PolicyConfig, RecallSettings, SiteGraph, TaskSpec
from ..sim.service import generate_site, run_episode
from .metrics import accuracy, avg_steps, best_of_n, reliability
from .schema import AblationCurve, ArmSummary, Arm, ExperimentResult, GridConfig, ResultsMatrix

logger = logging.getLogger(__name__)

EpisodeCallback = Callable[[int, EpisodeResult], None]
StoreFactory = Callable[[int], MemoryStore]


def replicate_seed(seed: int, replicate: int) -> int:
    return derive_seed(seed, "replicate", replicate)


def episode_seed(seed: int, task_id: str, rep: int) -> int:
    return derive_seed(seed, task_id, rep)


def build_policy(arm: Arm, site: SiteGraph, config: PolicyConfig) -> Policy:
    if arm == Arm.MEMORY:
        return MemoryPolicy(site, config)
    if arm == Arm.OPTIMAL:
        return OptimalPolicy(site, config)
    return BaselinePolicy(site, config)


def build_site(config: GridConfig) -> Tuple[SiteGraph, List[TaskSpec]]:
    return generate_site(
        config.seed,
        nodes=config.nodes,
        branching=config.branching,
        tasks=config.tasks,
        loop_traps=config.loop_traps,
        penalty_pages=config.penalty_pages,
    )


def run_grid(
    site: SiteGraph,
    tasks: Sequence[TaskSpec],
    policy: Policy,
    reps: int,
    seed: int,
    store: Optional[MemoryStore] = None,
    recall: Optional[RecallSettings] = None,
    on_episode: Optional[Callable[[EpisodeResult], None]] = None,
) -> ResultsMatrix:
    """Run every (task, rep) episode in task-major, rep-minor order.

    With a store and a memory policy each finished episode is ingested before the
    next one starts, so later episodes recall earlier ones.
    """
    if reps < 1:
        raise ParameterError(f"reps must be at least 1, got {reps}")

    accumulate = store is not None and policy.uses_memory
    success: List[List[bool]] = []
    steps: List[List[int]] = []
    for task in tasks:
        success_row: List[bool] = []
        steps_row: List[int] = []
        for rep in range(reps):
            snapshot = store.entries() if store is not None else None
            result = run_episode(site, task, policy, episode_seed(seed, task.task_id, rep), snapshot, recall)
            if accumulate and result.trajectory is not None:
                store.ingest_trajectory(result.trajectory)  # type: ignore[union-attr]
            if on_episode is not None:
                on_episode(result)
            success_row.append(result.success)
            steps_row.append(result.steps_taken)
        success.append(success_row)
        steps.append(steps_row)

    return ResultsMatrix(tasks=[task.task_id for task in tasks], reps=reps, success=success, steps=steps)


def run_experiment(
    config: GridConfig,
    arms: Sequence[Arm],
    embedder: Embedder,
    site: Optional[Tuple[SiteGraph, List[TaskSpec]]] = None,
    store_factory: Optional[StoreFactory] = None,
    on_episode: Optional[EpisodeCallback] = None,
) -> ExperimentResult:
    """Run each arm on every replicate; replicates share the site and differ in rng seeds.

    Memory arms start every replicate from `store_factory(replicate)`, an empty
    in-memory store by default.
    """
    graph, tasks = site if site is not None else build_site(config)
    make_store = store_factory or (lambda _replicate: MemoryStore())
    recall = RecallSettings(k=config.k, tau=config.tau, embedder=embedder)

    result = ExperimentResult(seed=config.seed, task_ids=[task.task_id for task in tasks])
    for arm in arms:
        result.matrices[arm.value] = []

    for replicate in range(config.replicates):
        seed = replicate_seed(config.seed, replicate)
        for arm in arms:
            policy = build_policy(arm, graph, config.policy)
            store = make_store(replicate) if policy.uses_memory else None
            callback = (lambda episode, r=replicate: on_episode(r, episode)) if on_episode else None
            matrix = run_grid(graph, tasks, policy, config.reps, seed, store, recall, callback)
            result.matrices[arm.value].append(matrix)
            logger.info(
                "Replicate %d arm %s: accuracy %.3f", replicate, arm.value, accuracy(matrix)
            )
    return result


def summarize_matrix(arm: str, replicate: int, m: ResultsMatrix) -> ArmSummary:
    return ArmSummary(
        arm=arm,
        replicate=replicate,
        accuracy=accuracy(m),
        best_of_n=best_of_n(m),
        reliability=reliability(m),
        avg_steps=avg_steps(m),
    )


def summarize(result: ExperimentResult) -> List[ArmSummary]:
    return [
        summarize_matrix(arm, replicate, matrix)
        for arm, matrices in result.matrices.items()
        for replicate, matrix in enumerate(matrices)
    ]


def mean_defined(values: Sequence[Optional[float]]) -> Optional[float]:
    """Mean of the defined values; None when none is defined"""
    defined = [value for value in values if value is not None]
    if not defined:
        return None
    return math.fsum(defined) / len(defined)


def arm_means(summaries: Sequence[ArmSummary]) -> Dict[str, Dict[str, Optional[float]]]:
    """Replicate means of the four metrics, per arm"""
    grouped: Dict[str, List[ArmSummary]] = {}
    for summary in summaries:
        grouped.setdefault(summary.arm, []).append(summary)
    return {
        arm: {
            "accuracy": mean_defined([s.accuracy for s in rows]),
            "best_of_n": mean_defined([s.best_of_n for s in rows]),
            "reliability": mean_defined([s.reliability for s in rows]),
            "avg_steps": mean_defined([s.avg_steps for s in rows]),
        }
        for arm, rows in grouped.items()
    }


def validate_k_values(k_values: Sequence[int]) -> List[int]:
    values = list(k_values)
    if not values:
        raise ParameterError("k values must not be empty")
    if any(k < 0 for k in values):
        raise ParameterError(f"k values must be non-negative, got {values}")
    if len(set(values)) != len(values):
        raise ParameterError(f"duplicate k values in {values}")
    if values != sorted(values):
        raise ParameterError(f"k values must be ascending, got {values}")
    return values


def ablate_k(
    config: GridConfig,
    k_values: Sequence[int],
    embedder: Embedder,
    site: Optional[Tuple[SiteGraph, List[TaskSpec]]] = None,
) -> AblationCurve:
    """Memory-arm accuracy per retrieval breadth; k = 0 disables retrieval"""
    values = validate_k_values(k_values)
    shared_site = site if site is not None else build_site(config)

    means: List[float] = []
    per_replicate: List[List[float]] = []
    for k in values:
        run = run_experiment(config.model_copy(update={"k": k}), [Arm.MEMORY], embedder, site=shared_site)
        scores = [accuracy(matrix) for matrix in run.matrices[Arm.MEMORY.value]]
        per_replicate.append(scores)
        means.append(math.fsum(scores) / len(scores))
        logger.info("k=%d: mean accuracy %.3f", k, means[-1])

    return AblationCurve(
        k_values=values,
        accuracy=means,
        seeds=config.replicates,
        replicate_accuracy=per_replicate,
    )
