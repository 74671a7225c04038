"""Validated configuration of one command-line run.

Values come from built-in defaults, then an optional JSON config file, then
command-line flags; later sources win.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from src.components.evaluation.config import GridDefaults, ReportFiles
from src.components.evaluation.schema import Arm, GridConfig
from src.components.recall.config import RenderDefaults
from src.components.retrieval.config import RetrievalConfig
from src.components.sim.config import PolicyDefaults, SiteDefaults, SiteLimits
from src.components.sim.schema import PolicyConfig
from src.components.similarity.schema import EmbedderSettings
from src.utils.seeds import config_hash

from .config import settings
from .exceptions import ConfigError

# config location -> command-line flag, where the two names differ
FLAG_NAMES: Dict[Tuple[str, ...], str] = {
    ("store",): "--store",
    ("embedder", "kind"): "--embedder",
    ("embedder", "endpoint"): "--embed-url",
    ("embedder", "dim"): "--embed-dim",
    ("embedder", "fallback"): "--embed-fallback",
    ("k_values",): "--k",
}

# settings that never change results and stay out of the run hash
UNHASHED_FIELDS = {"output_dir", "log_level", "store"}


def flag_for(loc: Tuple[Any, ...]) -> Optional[str]:
    key = tuple(str(part) for part in loc if not isinstance(part, int))
    if not key:
        return None
    if key in FLAG_NAMES:
        return FLAG_NAMES[key]
    return "--" + key[0].replace("_", "-")


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    # storage and output
    store: str = settings.STORE_PATH
    output_dir: str = settings.OUTPUT_DIR
    log_level: str = settings.LOG_LEVEL

    # site
    seed: int = GridDefaults.SEED
    nodes: int = Field(default=SiteDefaults.NODES, ge=SiteLimits.MIN_NODES, le=SiteLimits.MAX_NODES)
    branching: int = Field(
        default=SiteDefaults.BRANCHING, ge=SiteLimits.MIN_BRANCHING, le=SiteLimits.MAX_BRANCHING
    )
    tasks: int = Field(default=SiteDefaults.TASKS, ge=SiteLimits.MIN_TASKS, le=SiteLimits.MAX_TASKS)
    loop_traps: int = Field(default=SiteDefaults.LOOP_TRAPS, ge=0)
    penalty_pages: int = Field(default=SiteDefaults.PENALTY_PAGES, ge=0)

    # policy
    epsilon: float = Field(default=PolicyDefaults.EPSILON, ge=0.0, le=1.0)
    p_follow: float = Field(default=PolicyDefaults.P_FOLLOW, ge=0.0, le=1.0)
    noise_sigma: float = Field(default=PolicyDefaults.NOISE_SIGMA, ge=0.0)
    veto_weight: float = Field(default=PolicyDefaults.VETO_WEIGHT, gt=0.0, le=1.0)
    min_relevance: float = Field(default=PolicyDefaults.MIN_RELEVANCE, ge=-1.0, le=1.0)

    # retrieval and rendering
    k: int = Field(default=RetrievalConfig.DEFAULT_K, ge=0)
    tau: float = Field(default=RetrievalConfig.DEFAULT_TAU, ge=0.0, le=1.0)
    max_exemplars: int = Field(default=RenderDefaults.MAX_EXEMPLARS, ge=1)

    # experiment
    reps: int = Field(default=GridDefaults.REPS, ge=1)
    replicates: int = Field(default=GridDefaults.REPLICATES, ge=1)
    arms: List[Arm] = Field(default_factory=lambda: [Arm.BASE, Arm.MEMORY], min_length=1)
    arm: Arm = Arm.MEMORY
    k_values: List[int] = Field(default_factory=lambda: list(GridDefaults.ABLATION_K), min_length=1)

    embedder: EmbedderSettings = Field(default_factory=EmbedderSettings)

    @field_validator("arms")
    @classmethod
    def _distinct_arms(cls, value: List[Arm]) -> List[Arm]:
        if len(set(value)) != len(value):
            raise ValueError("arms must be distinct")
        return value

    @field_validator("k_values")
    @classmethod
    def _ascending_k(cls, value: List[int]) -> List[int]:
        if any(k < 0 for k in value):
            raise ValueError("k values must be non-negative")
        if len(set(value)) != len(value):
            raise ValueError("duplicate k values")
        if value != sorted(value):
            raise ValueError("k values must be ascending")
        return value

    def policy_config(self) -> PolicyConfig:
        return PolicyConfig(
            epsilon=self.epsilon,
            p_follow=self.p_follow,
            noise_sigma=self.noise_sigma,
            veto_weight=self.veto_weight,
            min_relevance=self.min_relevance,
        )

    def grid_config(self) -> GridConfig:
        return GridConfig(
            seed=self.seed,
            nodes=self.nodes,
            branching=self.branching,
            tasks=self.tasks,
            loop_traps=self.loop_traps,
            penalty_pages=self.penalty_pages,
            reps=self.reps,
            replicates=self.replicates,
            policy=self.policy_config(),
            k=self.k,
            tau=self.tau,
        )

    def fingerprint(self, command: str) -> Dict[str, Any]:
        """The values that decide a run's results"""
        payload = self.model_dump(mode="json", exclude=UNHASHED_FIELDS)
        payload["command"] = command
        return payload

    def run_dir(self, command: str) -> Path:
        digest = config_hash(self.fingerprint(command))[: ReportFiles.HASH_LENGTH]
        return Path(self.output_dir) / f"{digest}-seed{self.seed}"


def _validation_error(error: ValidationError) -> ConfigError:
    detail = error.errors()[0]
    flag = flag_for(tuple(detail.get("loc", ())))
    name = flag or "config"
    return ConfigError(f"invalid {name}: {detail.get('msg', 'invalid value')}", flag)


def _merge(base: Dict[str, Any], override: Mapping[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, Mapping) and isinstance(merged.get(key), Mapping):
            merged[key] = _merge(dict(merged[key]), value)
        else:
            merged[key] = value
    return merged


def read_config_file(path: str) -> Dict[str, Any]:
    source = Path(path)
    if not source.exists():
        raise ConfigError(f"config file not found: {path}", "--config")
    try:
        payload = json.loads(source.read_text(encoding="utf-8"))
    except ValueError as e:
        raise ConfigError(f"config file {path} is not valid JSON: {e}", "--config") from e
    if not isinstance(payload, dict):
        raise ConfigError(f"config file {path} must hold a JSON object", "--config")
    return payload


def build_run_config(
    flags: Mapping[str, Any],
    config_path: Optional[str] = None,
) -> RunConfig:
    """Merge defaults, the config file and explicitly given flags into a RunConfig"""
    values: Dict[str, Any] = read_config_file(config_path) if config_path else {}
    given = {key: value for key, value in flags.items() if value is not None}
    values = _merge(values, given)
    try:
        return RunConfig.model_validate(values)
    except ValidationError as e:
        raise _validation_error(e) from e
