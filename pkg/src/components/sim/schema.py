from collections import deque
from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr

from src.core.exceptions import ContractViolation

from ..memory.schema import TrajectoryRecord
from ..similarity.schema import Embedder
from ..state.schema import ActionRecord, EnvState
from .config import PolicyDefaults


class NodeKind(str, Enum):
    CONTENT = "content"
    TRAP = "trap"
    PENALTY = "penalty"


class Link(BaseModel):
    model_config = ConfigDict(frozen=True)

    action: ActionRecord
    target: int
    distractor: bool = False


class SiteNode(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: int = Field(ge=0)
    name: str
    kind: NodeKind
    observation: EnvState
    links: List[Link] = Field(default_factory=list)


class SiteGraph(BaseModel):
    """Deterministic state graph of a synthetic site.

    Node ids are list positions. Lookups are built once on construction; distances
    to a goal are computed on first use and cached.
    """

    seed: int
    start: int = 0
    nodes: List[SiteNode]

    _transitions: Dict[Tuple[int, ActionRecord], int] = PrivateAttr(default_factory=dict)
    _by_observation: Dict[EnvState, int] = PrivateAttr(default_factory=dict)
    _predecessors: List[List[int]] = PrivateAttr(default_factory=list)
    _distance_to: Dict[int, List[Optional[int]]] = PrivateAttr(default_factory=dict)

    def model_post_init(self, __context) -> None:
        self._predecessors = [[] for _ in self.nodes]
        for position, node in enumerate(self.nodes):
            if node.id != position:
                raise ContractViolation(f"node {node.id} stored at position {position}")
            if node.observation in self._by_observation:
                raise ContractViolation(f"nodes {self._by_observation[node.observation]} and {node.id} look identical")
            self._by_observation[node.observation] = node.id
            for link in node.links:
                self._transitions[(node.id, link.action)] = link.target
                self._predecessors[link.target].append(node.id)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SiteGraph):
            return NotImplemented
        return (self.seed, self.start, self.nodes) == (other.seed, other.start, other.nodes)

    @property
    def size(self) -> int:
        return len(self.nodes)

    def observation(self, node: int) -> EnvState:
        return self.nodes[node].observation

    def actions(self, node: int) -> List[ActionRecord]:
        return [link.action for link in self.nodes[node].links]

    def step(self, node: int, action: ActionRecord) -> int:
        try:
            return self._transitions[(node, action)]
        except KeyError:
            raise ContractViolation(f"action {action.describe()} is not available on node {node}")

    def node_of(self, observation: EnvState) -> Optional[int]:
        return self._by_observation.get(observation)

    def distance(self, node: int, goal: int) -> Optional[int]:
        """Fewest actions from node to goal, None when the goal cannot be reached"""
        if goal not in self._distance_to:
            dist: List[Optional[int]] = [None] * len(self.nodes)
            dist[goal] = 0
            queue = deque([goal])
            while queue:
                current = queue.popleft()
                for previous in self._predecessors[current]:
                    if dist[previous] is None:
                        dist[previous] = dist[current] + 1  # type: ignore[operator]
                        queue.append(previous)
            self._distance_to[goal] = dist
        return self._distance_to[goal][node]


class TaskSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    task_id: str
    directive: str
    start: int = Field(ge=0)
    goal: int = Field(ge=0)
    max_steps: int = Field(ge=0)
    optimal_steps: int = Field(ge=0)

    def is_goal(self, node: int) -> bool:
        return node == self.goal


class EpisodeResult(BaseModel):
    task_id: str
    success: bool
    steps_taken: int = Field(ge=0)
    final_node: int
    trajectory: Optional[TrajectoryRecord] = None


class PolicyConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    epsilon: float = Field(default=PolicyDefaults.EPSILON, ge=0.0, le=1.0)
    p_follow: float = Field(default=PolicyDefaults.P_FOLLOW, ge=0.0, le=1.0)
    noise_sigma: float = Field(default=PolicyDefaults.NOISE_SIGMA, ge=0.0)
    veto_weight: float = Field(default=PolicyDefaults.VETO_WEIGHT, gt=0.0, le=1.0)
    min_relevance: float = Field(default=PolicyDefaults.MIN_RELEVANCE, ge=-1.0, le=1.0)


class RecallSettings(BaseModel):
    """How a memory-using episode queries the store; k = 0 turns retrieval off"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    k: int = Field(ge=0)
    tau: float = Field(ge=0.0, le=1.0)
    embedder: Embedder
