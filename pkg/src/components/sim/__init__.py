"""Synthetic web-like environment and simulated agents"""

from .agent import BaselinePolicy, MemoryPolicy, OptimalPolicy, Policy
from .schema import (
    EpisodeResult,
    Link,
    NodeKind,
    PolicyConfig,
    RecallSettings,
    SiteGraph,
    SiteNode,
    TaskSpec,
)
from .service import generate_site, load_site, run_episode, save_site

__all__ = [
    "BaselinePolicy",
    "EpisodeResult",
    "Link",
    "MemoryPolicy",
    "NodeKind",
    "OptimalPolicy",
    "Policy",
    "PolicyConfig",
    "RecallSettings",
    "SiteGraph",
    "SiteNode",
    "TaskSpec",
    "generate_site",
    "load_site",
    "run_episode",
    "save_site",
]
