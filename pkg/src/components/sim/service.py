import json
import logging
from collections import deque
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

import numpy as np

from src.core.exceptions import ParameterError, SiteGenerationError
from src.db.models.action import ActionPayload
from src.utils.seeds import derive_seed

from ..memory.schema import TrajectoryRecord, TrajectoryStep
from ..retrieval.schema import RetrievalQuery, RetrievedExemplar
from ..retrieval.service import resolve_exemplars, retrieve
from ..state.schema import ActionKind, ActionRecord, EnvState, InternalState, MemoryEntry
from .agent import Policy
from .config import SiteDefaults, SiteFiles, SiteLimits, TaskDefaults, Vocabulary
from .schema import EpisodeResult, Link, NodeKind, RecallSettings, SiteGraph, SiteNode, TaskSpec

logger = logging.getLogger(__name__)


def _check_range(name: str, value: int, low: int, high: int) -> None:
    if not low <= value <= high:
        raise ParameterError(f"{name} must be in [{low}, {high}], got {value}")


def _pseudo_words(rng: np.random.Generator, count: int) -> List[str]:
    words: List[str] = []
    seen: Set[str] = set()
    syllables = Vocabulary.SYLLABLES
    while len(words) < count:
        length = int(rng.integers(Vocabulary.MIN_SYLLABLES, Vocabulary.MAX_SYLLABLES + 1))
        word = "".join(syllables[int(i)] for i in rng.integers(0, len(syllables), size=length))
        if word not in seen:
            seen.add(word)
            words.append(word)
    return words


def _click(token: str) -> ActionRecord:
    return ActionRecord(kind=ActionKind.CLICK, target=token)


def _forward_links(rng: np.random.Generator, nodes: int, branching: int) -> List[Set[int]]:
    """Forward edges of the content DAG; every page gets an incoming edge"""
    window = branching * SiteDefaults.WINDOW_FACTOR
    links: List[Set[int]] = [set() for _ in range(nodes)]
    for page in range(nodes - 1):
        candidates = np.arange(page + 1, min(nodes - 1, page + window) + 1)
        chosen = rng.choice(candidates, size=min(branching, len(candidates)), replace=False)
        links[page].update(int(target) for target in chosen)

    has_incoming = [False] * nodes
    for targets in links:
        for target in targets:
            has_incoming[target] = True
    for page in range(1, nodes):
        if not has_incoming[page]:
            source = int(rng.integers(max(0, page - window), page))
            links[source].add(page)
    return links


def _build_graph(
    rng: np.random.Generator,
    seed: int,
    nodes: int,
    branching: int,
    loop_traps: int,
    penalty_pages: int,
) -> SiteGraph:
    named = nodes + loop_traps + penalty_pages
    words = _pseudo_words(rng, named + nodes * SiteDefaults.CONTENT_TOKENS)
    names = words[:named]
    forward = _forward_links(rng, nodes, branching)
    trap_ids = list(range(nodes, nodes + loop_traps))
    penalty_ids = list(range(nodes + loop_traps, nodes + loop_traps + penalty_pages))
    distractors = [
        Link(action=_click(f"{Vocabulary.BANNER} {names[d]}"), target=d, distractor=True)
        for d in trap_ids + penalty_ids
    ]

    site_nodes = []
    for page in range(nodes):
        content = [
            Link(action=_click(f"{Vocabulary.LINK} {names[target]}"), target=target)
            for target in sorted(forward[page])
        ]
        links = content + distractors
        offset = named + page * SiteDefaults.CONTENT_TOKENS
        text = {f"{Vocabulary.TEXT} {word}" for word in words[offset : offset + SiteDefaults.CONTENT_TOKENS]}
        tokens = {f"{Vocabulary.PAGE} {names[page]}"} | text | {link.action.target for link in links}
        site_nodes.append(
            SiteNode(
                id=page,
                name=names[page],
                kind=NodeKind.CONTENT,
                observation=EnvState(features=frozenset(tokens)),
                links=links,
            )
        )

    for trap in trap_ids:
        retry = Link(action=_click(Vocabulary.RETRY), target=trap, distractor=True)
        site_nodes.append(
            SiteNode(
                id=trap,
                name=names[trap],
                kind=NodeKind.TRAP,
                observation=EnvState(features=frozenset({f"{Vocabulary.PAGE} {names[trap]}", Vocabulary.RETRY})),
                links=[retry],
            )
        )
    for penalty in penalty_ids:
        site_nodes.append(
            SiteNode(
                id=penalty,
                name=names[penalty],
                kind=NodeKind.PENALTY,
                observation=EnvState(features=frozenset({f"{Vocabulary.PAGE} {names[penalty]}"})),
            )
        )
    return SiteGraph(seed=seed, start=0, nodes=site_nodes)


def _forward_distances(site: SiteGraph, start: int) -> Dict[int, int]:
    dist = {start: 0}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for link in site.nodes[node].links:
            if link.target not in dist:
                dist[link.target] = dist[node] + 1
                queue.append(link.target)
    return dist


def _route(predecessors: List[List[int]], dist: Dict[int, int], goal: int) -> Set[int]:
    """Pages of one shortest forward path ending at goal, smaller page first on ties"""
    route = {goal}
    current = goal
    while dist[current] > 0:
        current = min(p for p in predecessors[current] if dist.get(p) == dist[current] - 1)
        route.add(current)
    return route


def _pick_tasks(
    rng: np.random.Generator,
    site: SiteGraph,
    content_nodes: int,
    count: int,
) -> Optional[List[TaskSpec]]:
    predecessors: List[List[int]] = [[] for _ in site.nodes]
    for node in site.nodes:
        for link in node.links:
            predecessors[link.target].append(node.id)

    distances: Dict[int, Dict[int, int]] = {}
    by_start: Dict[int, List[Tuple[int, int]]] = {}
    for start in range(content_nodes):
        reachable = _forward_distances(site, start)
        goals = sorted(
            (goal, d)
            for goal, d in reachable.items()
            if goal < content_nodes and TaskDefaults.MIN_DISTANCE <= d <= TaskDefaults.MAX_DISTANCE
        )
        if goals:
            by_start[start] = goals
            distances[start] = reachable
    if not by_start:
        return None

    order = [int(s) for s in rng.permutation(sorted(by_start))]
    used: Set[Tuple[int, int]] = set()
    covered: Set[int] = set()
    tasks: List[TaskSpec] = []
    # first pass gives every task its own start page; later passes reuse starts.
    # Among a start's goals, those whose shortest path crosses the fewest pages of
    # earlier tasks are preferred, so tasks share few pages.
    while len(tasks) < count:
        progressed = False
        for start in order:
            if len(tasks) == count:
                break
            options = [(goal, d) for goal, d in by_start[start] if (start, goal) not in used]
            if not options:
                continue
            routes = [_route(predecessors, distances[start], goal) for goal, _ in options]
            shared = [len(route & covered) for route in routes]
            fewest = [i for i, overlap in enumerate(shared) if overlap == min(shared)]
            pick = fewest[int(rng.integers(len(fewest)))]
            goal, distance = options[pick]
            used.add((start, goal))
            covered |= routes[pick]
            tasks.append(
                TaskSpec(
                    task_id=f"task-{len(tasks):03d}",
                    directive=TaskDefaults.DIRECTIVE_TEMPLATE.format(name=site.nodes[goal].name),
                    start=start,
                    goal=goal,
                    max_steps=TaskDefaults.STEP_BUDGET_FACTOR * distance,
                    optimal_steps=distance,
                )
            )
            progressed = True
        if not progressed:
            return None
    return tasks


def generate_site(
    seed: int,
    nodes: int = SiteDefaults.NODES,
    branching: int = SiteDefaults.BRANCHING,
    tasks: int = SiteDefaults.TASKS,
    loop_traps: int = SiteDefaults.LOOP_TRAPS,
    penalty_pages: int = SiteDefaults.PENALTY_PAGES,
) -> Tuple[SiteGraph, List[TaskSpec]]:
    """Build a site and its tasks; the same arguments always give the same result"""
    _check_range("nodes", nodes, SiteLimits.MIN_NODES, SiteLimits.MAX_NODES)
    _check_range("branching", branching, SiteLimits.MIN_BRANCHING, SiteLimits.MAX_BRANCHING)
    _check_range("tasks", tasks, SiteLimits.MIN_TASKS, SiteLimits.MAX_TASKS)
    if loop_traps < 0 or penalty_pages < 0:
        raise ParameterError("distractor counts must be non-negative")

    for attempt in range(SiteLimits.MAX_ATTEMPTS):
        rng = np.random.default_rng(seed if attempt == 0 else derive_seed(seed, "site", attempt))
        site = _build_graph(rng, seed, nodes, branching, loop_traps, penalty_pages)
        picked = _pick_tasks(rng, site, nodes, tasks)
        if picked is not None:
            logger.debug("Generated site seed=%d with %d nodes on attempt %d", seed, site.size, attempt + 1)
            return site, picked
        logger.debug("Site seed=%d attempt %d could not host %d tasks", seed, attempt + 1, tasks)

    raise SiteGenerationError(
        f"no site with {tasks} reachable tasks after {SiteLimits.MAX_ATTEMPTS} attempts (seed {seed})"
    )


def _recall(
    entries: Sequence[MemoryEntry],
    observation: EnvState,
    task: TaskSpec,
    recall: RecallSettings,
) -> List[RetrievedExemplar]:
    query = RetrievalQuery(
        query_env=observation,
        query_internal=InternalState(directive=task.directive),
        k=recall.k,
        tau=recall.tau,
    )
    return resolve_exemplars(entries, retrieve(entries, query, recall.embedder))


def run_episode(
    site: SiteGraph,
    task: TaskSpec,
    policy: Policy,
    seed: int,
    store: Optional[Sequence[MemoryEntry]] = None,
    recall: Optional[RecallSettings] = None,
) -> EpisodeResult:
    """Step a policy from the task start until the goal, a dead end or the step budget.

    The store is read as a snapshot taken when the episode starts.
    """
    rng = np.random.default_rng(seed)
    entries: Tuple[MemoryEntry, ...] = tuple(store) if store is not None else ()
    use_memory = policy.uses_memory and recall is not None and recall.k > 0 and len(entries) > 0

    node = task.start
    steps: List[TrajectoryStep] = []
    while len(steps) < task.max_steps and not task.is_goal(node):
        if not site.nodes[node].links:
            break
        observation = site.observation(node)
        exemplars = _recall(entries, observation, task, recall) if use_memory else []
        action = policy.act(observation, task, rng, exemplars)
        after = site.step(node, action)
        steps.append(
            TrajectoryStep(
                observation=observation.sorted_features(),
                action=ActionPayload.from_action(action),
                post_observation=site.observation(after).sorted_features(),
            )
        )
        node = after

    success = task.is_goal(node)
    trajectory = None
    if steps:
        trajectory = TrajectoryRecord(
            episode_id=f"{task.task_id}@{seed}",
            directive=task.directive,
            steps=steps,
            success=success,
        )
    return EpisodeResult(
        task_id=task.task_id,
        success=success,
        steps_taken=len(steps),
        final_node=node,
        trajectory=trajectory,
    )


def save_site(site: SiteGraph, tasks: Sequence[TaskSpec], directory: Union[str, Path]) -> None:
    """Write site.json and tasks.json"""
    target = Path(directory)
    target.mkdir(parents=True, exist_ok=True)
    (target / SiteFiles.SITE).write_text(site.model_dump_json(indent=2) + "\n", encoding="utf-8")
    payload = [task.model_dump(mode="json") for task in tasks]
    (target / SiteFiles.TASKS).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def load_site(directory: Union[str, Path]) -> Tuple[SiteGraph, List[TaskSpec]]:
    source = Path(directory)
    site = SiteGraph.model_validate_json((source / SiteFiles.SITE).read_text(encoding="utf-8"))
    raw_tasks = json.loads((source / SiteFiles.TASKS).read_text(encoding="utf-8"))
    return site, [TaskSpec.model_validate(task) for task in raw_tasks]
