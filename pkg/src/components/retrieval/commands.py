import argparse
import json

from rich.console import Console
from rich.table import Table

from src.core.exceptions import ConfigError
from src.core.run_config import RunConfig

from ..memory.service import MemoryStore
from ..recall.schema import RenderConfig
from ..recall.service import render_exemplars
from ..similarity.service import build_embedder
from ..state.schema import InternalState
from ..state.service import env_state_from_observation
from .schema import RetrievalQuery
from .service import resolve_exemplars, retrieve

console = Console()


def cmd_query(args: argparse.Namespace, config: RunConfig) -> int:
    """Retrieve exemplars for a state and print the scores and the rendered block"""
    if config.k < 1:
        raise ConfigError("query needs --k of at least 1", "--k")
    store = MemoryStore.load(config.store)
    entries = store.entries()
    query = RetrievalQuery(
        query_env=env_state_from_observation(args.env or []),
        query_internal=InternalState(directive=args.directive, progress_note=args.progress or ""),
        k=config.k,
        tau=config.tau,
    )
    result = retrieve(entries, query, build_embedder(config.embedder))
    block = render_exemplars(
        resolve_exemplars(entries, result),
        RenderConfig(max_exemplars=config.max_exemplars),
    )

    if args.json:
        print(json.dumps({"result": result.model_dump(mode="json"), "context": block}))
        return 0

    table = Table(title=f"Retrieved {len(result)} of {len(entries)} entries (k={query.k}, tau={query.tau})")
    table.add_column("id", justify="right")
    table.add_column("s_env", justify="right")
    table.add_column("s_int", justify="right")
    for entry_id, pair in zip(result.indices, result.scores):
        table.add_row(str(entry_id), f"{pair.s_env:.4f}", f"{pair.s_int:.4f}")
    console.print(table)
    console.print(block, markup=False, highlight=False)
    return 0
