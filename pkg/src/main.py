"""PRAXIS command line: procedural memory ingestion, retrieval and experiments"""

import argparse
import logging
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence

from pydantic import ValidationError
from rich.console import Console

from .components.evaluation.commands import cmd_ablate, cmd_eval, cmd_simulate
from .components.memory.commands import cmd_ingest, cmd_inspect
from .components.retrieval.commands import cmd_query
from .core.config import settings
from .core.exceptions import (
    ConfigError,
    ContractViolation,
    ParameterError,
    PraxisError,
    StorageIOError,
    StoreError,
    TrajectoryFormatError,
)
from .core.logging import setup_logging
from .core.run_config import RunConfig, build_run_config

logger = logging.getLogger(__name__)
err_console = Console(stderr=True)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2

Handler = Callable[[argparse.Namespace, RunConfig], int]

# argparse dest -> embedder config key
EMBEDDER_FLAGS = {
    "embedder_kind": "kind",
    "embed_url": "endpoint",
    "embed_dim": "dim",
    "embed_fallback": "fallback",
}

# argparse dests that are not RunConfig fields
COMMAND_ONLY = {"command", "handler", "config", "json", "trajectories", "env", "directive", "progress"}


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _name_list(text: str) -> List[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file; flags override its values")
    parser.add_argument("--log-level", dest="log_level", help="logging level (default WARNING)")
    parser.add_argument("--store", help=f"memory file (default {settings.STORE_PATH})")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument(
        "--embedder",
        dest="embedder_kind",
        choices=["auto", "reference", "remote"],
        help="internal-state embedder; auto uses the remote service when an endpoint is set",
    )
    parser.add_argument("--embed-url", dest="embed_url", help="embedding service URL (or PRAXIS_EMBED_URL)")
    parser.add_argument("--embed-dim", dest="embed_dim", type=int, help="embedding dimension")
    parser.add_argument(
        "--embed-fallback",
        dest="embed_fallback",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="fall back to the reference embedder when the service fails",
    )


def _add_experiment(parser: argparse.ArgumentParser, single_k: bool = True) -> None:
    parser.add_argument("--output-dir", dest="output_dir", help=f"run directory root (default {settings.OUTPUT_DIR})")
    parser.add_argument("--seed", type=int, help="site and experiment seed")
    parser.add_argument("--nodes", type=int, help="content pages per site (10-500)")
    parser.add_argument("--branching", type=int, help="minimum forward links per page (2-8)")
    parser.add_argument("--tasks", type=int, help="tasks per site")
    parser.add_argument("--loop-traps", dest="loop_traps", type=int, help="loop-trap distractors per page")
    parser.add_argument("--penalty-pages", dest="penalty_pages", type=int, help="dead-end distractors per page")
    parser.add_argument("--epsilon", type=float, help="baseline random-action probability")
    parser.add_argument("--p-follow", dest="p_follow", type=float, help="probability of following a recalled success")
    parser.add_argument("--noise-sigma", dest="noise_sigma", type=float, help="noise on the baseline distance estimate")
    parser.add_argument("--veto-weight", dest="veto_weight", type=float, help="weight factor for vetoed actions")
    parser.add_argument("--min-relevance", dest="min_relevance", type=float, help="internal score an exemplar needs to be followed (off by default)")
    parser.add_argument("--reps", type=int, help="repetitions per task")
    parser.add_argument("--replicates", type=int, help="independent rng replicates")
    parser.add_argument("--tau", type=float, help="environment score threshold")
    if single_k:
        parser.add_argument("--k", type=int, help="retrieval breadth (0 disables retrieval)")
    else:
        parser.add_argument("--k", dest="k_values", type=_int_list, help="ascending k values, e.g. 0,1,2,4,8,16")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="praxis",
        description="State-dependent procedural memory for agents",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    ingest = commands.add_parser("ingest", help="ingest a trajectory JSONL file into the store")
    ingest.add_argument("trajectories", help="trajectory file, one episode per line")
    _add_common(ingest)
    ingest.set_defaults(handler=cmd_ingest)

    query = commands.add_parser("query", help="retrieve exemplars for a state")
    query.add_argument("--env", action="append", help="observation token; repeat for each token")
    query.add_argument("--directive", required=True, help="current objective")
    query.add_argument("--progress", default="", help="progress note")
    query.add_argument("--k", type=int, help="retrieval breadth")
    query.add_argument("--tau", type=float, help="environment score threshold")
    query.add_argument("--max-exemplars", dest="max_exemplars", type=int, help="exemplars to render")
    _add_common(query)
    query.set_defaults(handler=cmd_query)

    simulate = commands.add_parser("simulate", help="run one arm and keep site, tasks and trajectories")
    simulate.add_argument("--arm", choices=["base", "memory", "optimal"], help="policy to run")
    _add_experiment(simulate)
    _add_common(simulate)
    simulate.set_defaults(handler=cmd_simulate)

    evaluate = commands.add_parser("eval", help="compare arms on shared seeds")
    evaluate.add_argument("--arms", type=_name_list, help="comma-separated arms, e.g. base,memory")
    _add_experiment(evaluate)
    _add_common(evaluate)
    evaluate.set_defaults(handler=cmd_eval)

    ablate = commands.add_parser("ablate", help="sweep the retrieval breadth k")
    _add_experiment(ablate, single_k=False)
    _add_common(ablate)
    ablate.set_defaults(handler=cmd_ablate)

    inspect = commands.add_parser("inspect", help="print memory store statistics")
    _add_common(inspect)
    inspect.set_defaults(handler=cmd_inspect)

    return parser


def collect_flags(args: argparse.Namespace) -> Dict[str, Any]:
    """Explicitly given flags as RunConfig values"""
    flags: Dict[str, Any] = {}
    embedder: Dict[str, Any] = {}
    for dest, value in vars(args).items():
        if value is None or dest in COMMAND_ONLY:
            continue
        if dest in EMBEDDER_FLAGS:
            embedder[EMBEDDER_FLAGS[dest]] = value
        else:
            flags[dest] = value
    if embedder:
        flags["embedder"] = embedder
    return flags


def _fail(message: str, code: int) -> int:
    err_console.print(f"error: {message}", markup=False, highlight=False)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(settings.LOG_LEVEL)

    try:
        config = build_run_config(collect_flags(args), args.config)
    except ConfigError as e:
        return _fail(str(e), EXIT_USAGE)
    setup_logging(config.log_level)

    try:
        return args.handler(args, config)
    except ConfigError as e:
        return _fail(str(e), EXIT_USAGE)
    except StorageIOError as e:
        return _fail(str(e), EXIT_RUNTIME)
    except (FileNotFoundError, StoreError, TrajectoryFormatError, ParameterError, ContractViolation) as e:
        return _fail(str(e), EXIT_USAGE)
    except ValidationError as e:
        return _fail(f"invalid input: {e.errors()[0].get('msg')}", EXIT_USAGE)
    except (PraxisError, OSError) as e:
        logger.debug("Runtime failure", exc_info=True)
        return _fail(str(e), EXIT_RUNTIME)


if __name__ == "__main__":
    sys.exit(main())
