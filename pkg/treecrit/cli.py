"""
Command-line front end for treecrit.

Results go to stdout as JSON or to ``--out`` as CSV. Every file written
gets a ``<out>.manifest.json`` sidecar with the command, the config echo,
the seed and the output digests. Errors print one line to stderr and exit
with 2 (parse), 3 (domain) or 4 (numerical or budget).
"""

import argparse
import json
import sys
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from . import __version__
from .core.config import get_settings
from .core.exceptions import EXIT_OK, TreeCritException, UnsupportedEnvironmentError
from .core.logging import get_logger, setup_logging
from .distributions import get_registry
from .models.verdicts import Target
from .schemas.reports import RunManifest
from .services import brw as brw_service
from .services import rde as rde_service
from .services import rwre as rwre_service
from .services import tree_sim
from .services.catalogue import CATALOGUE, get_family
from .services.classifier import classify, constant_table, find_critical_parameter
from .services.environment import load_brw, load_env
from .services.spectral import rate_function_grid
from .utils.csv_utils import format_float, frame_to_csv
from .utils.file_utils import atomic_write_text, hash_path

logger = get_logger(__name__)


class RunContext:
    """Collects outputs of one command and writes them with a manifest sidecar."""

    def __init__(self, command: str, argv: Sequence[str], seed: Optional[int] = None):
        self.command = command
        self.argv = list(argv)
        self.seed = seed
        self.config: Dict[str, Any] = {}
        self.started_at = datetime.now(timezone.utc)
        self._start = time.perf_counter()

    def header(self, **fields: Any) -> List[str]:
        lines = [f"command={self.command}"]
        if self.seed is not None:
            lines.append(f"seed={self.seed}")
        for key, value in fields.items():
            text = format_float(value) if isinstance(value, float) else str(value)
            lines.append(f"{key}={text}")
        return lines

    def write(self, outputs: Dict[Path, str]) -> None:
        for path, text in outputs.items():
            atomic_write_text(path, text)
        first = next(iter(outputs))
        manifest = RunManifest(
            command=self.command,
            argv=self.argv,
            config=self.config,
            seed=self.seed,
            version=__version__,
            started_at=self.started_at,
            wall_clock_seconds=time.perf_counter() - self._start,
            outputs={str(path): hash_path(path) for path in outputs},
        )
        sidecar = first.with_name(first.name + ".manifest.json")
        atomic_write_text(sidecar, manifest.model_dump_json(indent=2) + "\n")
        logger.info("outputs_written", command=self.command, files=[str(p) for p in outputs])


def _print_json(payload: Any) -> None:
    sys.stdout.write(json.dumps(payload, indent=2, default=str) + "\n")


def _range(text: str) -> Tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected numbers in LO:HI, got {text!r}") from None


def _grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected LO:HI:N, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI:N with integer N, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("N must be >= 1")
    return np.linspace(lo, hi, n)


# Commands


def cmd_classify(args: argparse.Namespace, ctx: RunContext) -> int:
    env = load_env(args.env)
    ctx.config = env.to_config()
    report = classify(env, eps_critical=args.eps_critical, include_speed=args.speed)
    payload = report.model_dump(mode="json", by_alias=True)
    _print_json(payload)
    if args.out:
        ctx.write({Path(args.out): json.dumps(payload, indent=2) + "\n"})
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace, ctx: RunContext) -> int:
    family = get_family(args.family)
    target = Target(args.target) if args.target else family.default_target
    lo, hi = sorted(args.param_range if args.param_range else family.default_range)
    ctx.config = {"family": family.name, "range": [lo, hi], "target": target.value}

    grid = np.linspace(lo, hi, args.points)
    table = constant_table(family.build, grid, target).rename(columns={"param": family.param_name})
    root = find_critical_parameter(family.build, (lo, hi), target)
    _print_json({"family": family.name, "target": target.value, family.param_name: root})
    if args.out:
        text = frame_to_csv(table, ctx.header(family=family.name, target=target.value, root=root))
        ctx.write({Path(args.out): text})
    return EXIT_OK


def cmd_rate_function(args: argparse.Namespace, ctx: RunContext) -> int:
    env = load_env(args.env)
    ctx.config = env.to_config()
    points = rate_function_grid(env, args.z)
    frame = pd.DataFrame(
        {
            "z": [p.z for p in points],
            "rate": [p.value for p in points],
            "s0": [p.s0 if p.s0 is not None else float("nan") for p in points],
        }
    )
    text = frame_to_csv(frame, ctx.header())
    if args.out:
        ctx.write({Path(args.out): text})
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_families(args: argparse.Namespace, ctx: RunContext) -> int:
    labels = [
        {
            "kind": meta.kind,
            "parameters": meta.parameters,
            "description": meta.description,
            "capabilities": [c.name.lower() for c in meta.capabilities],
        }
        for meta in get_registry().list_families()
    ]
    catalogue = [
        {
            "name": fam.name,
            "description": fam.description,
            "param": fam.param_name,
            "default_range": list(fam.default_range),
            "default_target": fam.default_target.value,
        }
        for fam in CATALOGUE.values()
    ]
    _print_json({"label_families": labels, "catalogue": catalogue})
    return EXIT_OK


def cmd_simulate_tree(args: argparse.Namespace, ctx: RunContext) -> int:
    env = load_env(args.env)
    ctx.config = {"env": env.to_config(), "depth": args.depth, "trials": args.trials, "s": args.s}
    if args.x is not None:
        ctx.config["x"] = args.x
        counts = tree_sim.count_exceedances(
            env, args.x, args.depth, args.trials, args.seed, args.root_color, args.threads
        )
        frame = counts.to_frame()
        header = ctx.header(x=args.x)
    else:
        stats = tree_sim.estimate_level_sums(
            env, args.s, args.depth, args.trials, args.seed, args.root_color, args.threads
        )
        frame = stats.to_frame()
        header = ctx.header(s=args.s, root_color=stats.root_color)
    ctx.write({Path(args.out): frame_to_csv(frame, header)})
    return EXIT_OK


def cmd_simulate_walk(args: argparse.Namespace, ctx: RunContext) -> int:
    env = load_env(args.env)
    if env.rwre is None:
        raise UnsupportedEnvironmentError(
            "walk simulation needs an rwre_joint environment", sibling_mode=env.sibling_mode.value
        )
    ctx.config = {"env": env.to_config(), "steps": args.steps, "walks": args.walks}
    results = rwre_service.simulate_walks(
        env.rwre, args.steps, args.walks, args.seed, args.cut_depth, args.threads
    )
    summary = {
        "walks": len(results),
        "steps": args.steps,
        "mean_root_visits": float(np.mean([r.root_visits for r in results])),
        "mean_max_depth": float(np.mean([r.max_depth for r in results])),
    }
    _print_json(summary)
    frame = rwre_service.walks_frame(results)
    ctx.write({Path(args.out): frame_to_csv(frame, ctx.header(cut_depth=args.cut_depth))})
    return EXIT_OK


def cmd_simulate_rde(args: argparse.Namespace, ctx: RunContext) -> int:
    env = load_env(args.env)
    ctx.config = {"env": env.to_config(), "pool": args.pool, "iterations": args.iters}
    result = rde_service.iterate(env, args.pool, args.iters, args.seed)
    _print_json(
        {
            "final_means": result.means[-1].tolist(),
            "iterations_run": result.iterations_run,
            "diverged": result.diverged,
            "diverged_at": result.diverged_at,
        }
    )
    header = ctx.header(pool=args.pool, diverged=str(result.diverged).lower())
    ctx.write({Path(args.out): frame_to_csv(result.to_frame(), header)})
    return EXIT_OK


def cmd_simulate_brw(args: argparse.Namespace, ctx: RunContext) -> int:
    spec = load_brw(args.spec)
    ctx.config = {"spec": spec.model_dump(mode="json"), "t": args.t, "trials": args.trials}
    estimate = brw_service.speed_estimate(
        spec, args.t, args.trials, args.seed, args.window, args.threads
    )
    _print_json(
        {
            "mean": estimate.mean,
            "ci": [estimate.ci_low, estimate.ci_high],
            "x0": estimate.x0,
            "degenerate": estimate.degenerate,
            "sound": estimate.sound,
        }
    )
    header = ctx.header(
        t=args.t,
        x0=estimate.x0,
        mean=estimate.mean,
        ci_low=estimate.ci_low,
        ci_high=estimate.ci_high,
        degenerate=str(estimate.degenerate).lower(),
        sound=str(estimate.sound).lower(),
    )
    outputs = {Path(args.out): frame_to_csv(estimate.to_frame(), header)}
    if args.trace:
        run = brw_service.simulate_brw(spec, args.t, args.seed, args.window)
        outputs[Path(args.trace)] = frame_to_csv(run.to_frame(), ctx.header(trial=0))
    ctx.write(outputs)
    return EXIT_OK


def cmd_simulate_fpp(args: argparse.Namespace, ctx: RunContext) -> int:
    spec = load_brw(args.spec)
    ctx.config = {"spec": spec.model_dump(mode="json"), "t": args.t, "depth": args.depth}
    reach = brw_service.fpp_reach(spec, args.t, args.depth, args.trials, args.seed, args.threads)
    ctx.write({Path(args.out): frame_to_csv(reach.to_frame(), ctx.header(t=args.t))})
    return EXIT_OK


def cmd_serve(args: argparse.Namespace, ctx: RunContext) -> int:
    import uvicorn

    settings = get_settings()
    uvicorn.run(
        "treecrit.main:app",
        host=args.host or settings.HOST,
        port=args.port or settings.PORT,
        log_config=None,
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treecrit",
        description="Criticality of random environments on coloured b-ary trees",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help="override TREECRIT_LOG_LEVEL")
    parser.add_argument("--log-format", choices=["json", "console"], default=None)
    parser.add_argument(
        "--threads", type=int, default=None, help="trial-level threads (default TREECRIT_THREADS)"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("classify", help="regime verdicts for an environment")
    p.add_argument("--env", required=True, help="environment config (JSON)")
    p.add_argument("--eps-critical", type=float, default=None)
    p.add_argument("--speed", action="store_true", help="also report the BRW speed x0")
    p.add_argument("--out", default=None, help="also write the verdict JSON here")
    p.set_defaults(handler=cmd_classify)

    p = commands.add_parser("sweep", help="spectral constant over a catalogue family")
    p.add_argument("--family", required=True, choices=sorted(CATALOGUE))
    p.add_argument("--param-range", type=_range, default=None, metavar="LO:HI")
    p.add_argument("--target", choices=[t.value for t in Target], default=None)
    p.add_argument("--points", type=int, default=17, help="grid points in the CSV table")
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_sweep)

    p = commands.add_parser("rate-function", help="rate function on a z grid")
    p.add_argument("--env", required=True)
    p.add_argument("--z", type=_grid, required=True, metavar="LO:HI:N")
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_rate_function)

    p = commands.add_parser("families", help="list label families and catalogue entries")
    p.set_defaults(handler=cmd_families)

    p = commands.add_parser("serve", help="run the HTTP API")
    p.add_argument("--host", default=None)
    p.add_argument("--port", type=int, default=None)
    p.set_defaults(handler=cmd_serve)

    simulate = commands.add_parser("simulate", help="Monte Carlo simulators")
    sims = simulate.add_subparsers(dest="simulator", required=True)

    def sim(name: str, handler: Callable[..., int], help_text: str) -> argparse.ArgumentParser:
        sp = sims.add_parser(name, help=help_text)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", required=True)
        sp.set_defaults(handler=handler)
        return sp

    sp = sim("tree", cmd_simulate_tree, "level sums of zeta^s or exceedance counts")
    sp.add_argument("--env", required=True)
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--s", type=float, default=1.0)
    sp.add_argument("--x", type=float, default=None, help="count zeta > x instead")
    sp.add_argument("--root-color", type=int, default=None)

    sp = sim("walk", cmd_simulate_walk, "random walk in random environment")
    sp.add_argument("--env", required=True, help="rwre_joint environment config")
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--walks", type=int, default=1)
    sp.add_argument("--cut-depth", type=int, default=10)

    sp = sim("rde", cmd_simulate_rde, "population dynamics for the RDE")
    sp.add_argument("--env", required=True)
    sp.add_argument("--pool", type=int, default=10000)
    sp.add_argument("--iters", type=int, default=100)

    sp = sim("brw", cmd_simulate_brw, "branching random walk speed")
    sp.add_argument("--spec", required=True, help="step-law config (JSON)")
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--trials", type=int, default=50)
    sp.add_argument("--window", type=float, default=None, help="pruning window W")
    sp.add_argument("--trace", default=None, help="also write the trial-0 frontier trace")

    sp = sim("fpp", cmd_simulate_fpp, "first-passage reachable-set counts")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--trials", type=int, default=100)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level, args.log_format)

    command = args.command if args.command != "simulate" else f"simulate {args.simulator}"
    ctx = RunContext(command, argv, seed=getattr(args, "seed", None))
    try:
        return int(args.handler(args, ctx))
    except TreeCritException as exc:
        field = exc.details.get("field")
        suffix = f" (field: {field})" if field else ""
        sys.stderr.write(f"error [{exc.error_code}]: {exc.message}{suffix}\n")
        logger.debug("command_failed", command=command, error_code=exc.error_code)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
