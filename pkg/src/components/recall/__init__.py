from .schema import RenderConfig
from .service import render_exemplars, summarize_state

__all__ = ["RenderConfig", "render_exemplars", "summarize_state"]
