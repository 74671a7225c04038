"""Simulated agents that pick actions on a SiteGraph.

BaselinePolicy is a noisy greedy agent without memory. MemoryPolicy adds recalled
exemplars on top of it: it follows the best recalled success, and otherwise falls back
to the baseline weights with actions seen only in failed episodes down-weighted. OptimalPolicy is a scripted
oracle used to check the harness itself.
"""

from abc import ABC, abstractmethod
from typing import List, Optional, Sequence, Set

import numpy as np

from src.core.exceptions import ContractViolation

from ..retrieval.schema import RetrievedExemplar
from ..state.schema import ActionRecord, EnvState
from .schema import PolicyConfig, SiteGraph, TaskSpec


class Policy(ABC):
    uses_memory = False

    def __init__(self, site: SiteGraph, config: Optional[PolicyConfig] = None):
        self.site = site
        self.config = config or PolicyConfig()

    def _current(self, observation: EnvState) -> int:
        node = self.site.node_of(observation)
        if node is None:
            raise ContractViolation("observation does not belong to this site")
        return node

    def _estimate(self, node: int, goal: int) -> float:
        distance = self.site.distance(node, goal)
        return float(self.site.size if distance is None else distance)

    @abstractmethod
    def act(
        self,
        observation: EnvState,
        task: TaskSpec,
        rng: np.random.Generator,
        exemplars: Sequence[RetrievedExemplar] = (),
    ) -> ActionRecord:
        """Pick one of the actions available in the observed state"""


class BaselinePolicy(Policy):
    """Greedy on a noisy distance estimate, uniformly random with probability epsilon"""

    def action_weights(
        self,
        node: int,
        task: TaskSpec,
        rng: np.random.Generator,
    ) -> np.ndarray:
        """Unnormalized selection weights over site.actions(node)"""
        targets = [link.target for link in self.site.nodes[node].links]
        count = len(targets)
        epsilon = self.config.epsilon
        noise = rng.normal(0.0, self.config.noise_sigma, size=count)
        estimates = np.array([self._estimate(target, task.goal) for target in targets]) + noise

        weights = np.full(count, epsilon / count)
        weights[int(np.argmin(estimates))] += 1.0 - epsilon
        return weights

    @staticmethod
    def sample(weights: np.ndarray, rng: np.random.Generator) -> int:
        return int(rng.choice(len(weights), p=weights / weights.sum()))

    def act(self, observation, task, rng, exemplars=()):
        node = self._current(observation)
        weights = self.action_weights(node, task, rng)
        return self.site.actions(node)[self.sample(weights, rng)]


class MemoryPolicy(Policy):
    """Baseline agent biased by recalled exemplars"""

    uses_memory = True

    def __init__(self, site: SiteGraph, config: Optional[PolicyConfig] = None):
        super().__init__(site, config)
        self.baseline = BaselinePolicy(site, self.config)

    def followable(
        self,
        actions: Sequence[ActionRecord],
        exemplars: Sequence[RetrievedExemplar],
    ) -> List[RetrievedExemplar]:
        """Successful exemplars whose action is available here, in retrieval order"""
        available = set(actions)
        return [
            exemplar
            for exemplar in exemplars
            if exemplar.entry.episode_success
            and exemplar.s_int >= self.config.min_relevance
            and exemplar.entry.action in available
        ]

    @staticmethod
    def vetoed(
        actions: Sequence[ActionRecord],
        exemplars: Sequence[RetrievedExemplar],
    ) -> Set[ActionRecord]:
        """Available actions recalled only from failed episodes"""
        failed = {exemplar.entry.action for exemplar in exemplars if not exemplar.entry.episode_success}
        succeeded = {exemplar.entry.action for exemplar in exemplars if exemplar.entry.episode_success}
        return (failed - succeeded) & set(actions)

    def action_weights(
        self,
        node: int,
        task: TaskSpec,
        rng: np.random.Generator,
        exemplars: Sequence[RetrievedExemplar] = (),
    ) -> np.ndarray:
        """Baseline weights with vetoed actions scaled by veto_weight"""
        weights = self.baseline.action_weights(node, task, rng)
        actions = self.site.actions(node)
        vetoed = self.vetoed(actions, exemplars)
        for index, action in enumerate(actions):
            if action in vetoed:
                weights[index] *= self.config.veto_weight
        return weights

    def act(self, observation, task, rng, exemplars=()):
        node = self._current(observation)
        actions = self.site.actions(node)
        candidates = self.followable(actions, exemplars)
        if candidates and rng.random() < self.config.p_follow:
            return candidates[0].entry.action

        weights = self.action_weights(node, task, rng, exemplars)
        return actions[BaselinePolicy.sample(weights, rng)]


class OptimalPolicy(Policy):
    """Always takes the first action on a shortest path to the goal"""

    def act(self, observation, task, rng, exemplars=()):
        node = self._current(observation)
        links = self.site.nodes[node].links
        best = min(range(len(links)), key=lambda i: (self._estimate(links[i].target, task.goal), i))
        return links[best].action
