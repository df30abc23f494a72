import argparse
import json
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from .. import __version__
from ..config.settings import LOG_LEVEL
from ..core.exceptions import FormatError, HyperdualError
from . import commands

logger = logging.getLogger(__name__)


def configure_logging(verbose: bool = False) -> None:
    # standard output carries the JSON result, so logs go to standard error
    logging.basicConfig(
        level=logging.DEBUG if verbose else getattr(logging, LOG_LEVEL.upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyperdual",
        description="Graphical models, tensor hypernetworks and the duality between them",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="Log at DEBUG level")
    parser.add_argument("-o", "--out", default=None, help="Write the result here instead of standard output")
    sub = parser.add_subparsers(dest="command", required=True)

    zoo = sub.add_parser("zoo", help="Generate a standard network or model")
    zoo.add_argument("family", help="mps, peps, tucker, cp, no-three-way or ising")
    zoo.add_argument("--sites", type=int, help="MPS site count")
    zoo.add_argument("--phys", type=int, help="Physical (dangling) edge size")
    zoo.add_argument("--bond", type=int, help="Bond size; the rank edge for cp")
    zoo.add_argument("--rows", type=int)
    zoo.add_argument("--cols", type=int)
    zoo.add_argument("--sizes", type=int, nargs="+", help="Per-mode or per-variable sizes")
    zoo.add_argument("--ranks", type=int, nargs="+", help="Tucker core sizes")
    zoo.add_argument("--fill", choices=["ones", "random"], default=None)
    zoo.add_argument("--seed", type=int, help="Implies --fill random")
    zoo.add_argument("--field", choices=["real", "complex"], default=None)

    dualize = sub.add_parser("dualize", help="Swap a graphical model and its dual network")
    dualize.add_argument("path", help='Model JSON, or "-" for standard input')

    contract = sub.add_parser("contract", help="Contract a tensor hypernetwork")
    contract.add_argument("path")
    contract.add_argument("--plan", dest="plan_path", help="Also write the junction-tree plan and its cost here")

    marginalize = sub.add_parser("marginalize", help="Marginal over a set of variables")
    marginalize.add_argument("path")
    marginalize.add_argument("--vars", type=int, nargs="*", default=[], dest="variables")
    marginalize.add_argument("--normalized", action="store_true")

    condition = sub.add_parser("condition", help="Restrict a variable (or edge) to a slice")
    condition.add_argument("path")
    condition.add_argument("--var", type=int, required=True, dest="variable")
    condition.add_argument("--keep", type=int, nargs="+", required=True)

    entropy = sub.add_parser("entropy", help="Shannon entropy of a normalized marginal")
    entropy.add_argument("path")
    entropy.add_argument("--vars", type=int, nargs="*", default=[], dest="variables")

    analyze = sub.add_parser("analyze", help="Structural report of a model and its dual")
    analyze.add_argument("path")

    plan = sub.add_parser("plan", help="Junction-tree contraction plan with cost and diagnostics")
    plan.add_argument("path")
    plan.add_argument("--order", type=int, nargs="+", help="Elimination order over the dual variables")

    execute = sub.add_parser("execute", help="Run a saved plan against a network")
    execute.add_argument("path")
    execute.add_argument("plan_path")

    expect = sub.add_parser("expect", help="Expectation value of block operators in an MPS")
    expect.add_argument("psi_path")
    expect.add_argument("blocks_path")
    return parser


def dispatch(args: argparse.Namespace) -> str:
    if args.command == "zoo":
        fill = args.fill or ("random" if args.seed is not None else None)
        return commands.cmd_zoo(
            args.family,
            sites=args.sites,
            phys=args.phys,
            bond=args.bond,
            rows=args.rows,
            cols=args.cols,
            sizes=args.sizes,
            ranks=args.ranks,
            fill=fill,
            seed=args.seed,
            field=args.field,
        )
    if args.command == "dualize":
        return commands.cmd_dualize(args.path)
    if args.command == "contract":
        return commands.cmd_contract(args.path, args.plan_path)
    if args.command == "marginalize":
        return commands.cmd_marginalize(args.path, args.variables, args.normalized)
    if args.command == "condition":
        return commands.cmd_condition(args.path, args.variable, args.keep)
    if args.command == "entropy":
        return commands.cmd_entropy(args.path, args.variables)
    if args.command == "analyze":
        return commands.cmd_analyze(args.path)
    if args.command == "plan":
        return commands.cmd_plan(args.path, args.order)
    if args.command == "execute":
        return commands.cmd_execute(args.path, args.plan_path)
    return commands.cmd_expect(args.psi_path, args.blocks_path)


def run(argv: Optional[List[str]] = None) -> int:
    """Parse, run one command, map failures to exit codes (1 domain, 2 I/O or format)"""
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    logger.debug(f"Running command: {args.command}")

    try:
        output = commands.save_or_return(dispatch(args), args.out)
    except FormatError as e:
        logger.error(f"Format error: {e}")
        return e.exit_code
    except HyperdualError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except (OSError, json.JSONDecodeError, ValidationError) as e:
        logger.error(f"I/O error: {e}")
        return 2
    except Exception as e:
        logger.error(f"Uncaught exception: {e}", exc_info=True)
        return 1

    if output is not None:
        sys.stdout.write(output)
    return 0
