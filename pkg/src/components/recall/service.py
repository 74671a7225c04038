from typing import List, Optional, Sequence, Union

from ..retrieval.schema import RetrievedExemplar
from ..state.schema import EnvState, MemoryEntry
from .config import RenderLayout
from .schema import RenderConfig


def summarize_state(state: EnvState, max_chars: int) -> str:
    """Sorted features joined into one line, cut to max_chars"""
    if not state.features:
        return RenderLayout.EMPTY_STATE
    text = RenderLayout.FEATURE_SEPARATOR.join(state.sorted_features())
    if len(text) <= max_chars:
        return text
    keep = max(max_chars - len(RenderLayout.ELLIPSIS), 0)
    return text[:keep] + RenderLayout.ELLIPSIS


def _render_one(number: int, entry: MemoryEntry, config: RenderConfig) -> List[str]:
    outcome = RenderLayout.SUCCESS_LABEL if entry.episode_success else RenderLayout.FAILURE_LABEL
    return [
        f"[{number}] goal: {entry.internal.text}",
        f"    state: {summarize_state(entry.env_pre, config.max_chars_per_state)}",
        f"    action: {entry.action.describe()}",
        f"    result: {summarize_state(entry.env_post, config.max_chars_per_state)}",
        f"    outcome: {outcome}",
    ]


def render_exemplars(
    entries: Sequence[Union[MemoryEntry, RetrievedExemplar]],
    config: Optional[RenderConfig] = None,
) -> str:
    """Render retrieved entries as the procedural memory section, in retrieval order"""
    config = config or RenderConfig()
    resolved = [item.entry if isinstance(item, RetrievedExemplar) else item for item in entries]
    if not config.include_failures:
        resolved = [entry for entry in resolved if entry.episode_success]
    shown = resolved[: config.max_exemplars]

    lines = [RenderLayout.HEADER]
    if not shown:
        lines.append(RenderLayout.EMPTY_SENTINEL)
    for number, entry in enumerate(shown, start=1):
        lines.extend(_render_one(number, entry, config))
    return "\n".join(lines) + "\n"
