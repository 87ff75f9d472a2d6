"""Command-line interface: ``swapcm {list,scenario,run,sweep}``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from swapcm import __version__, kernels
from swapcm.errors import SwapCMError


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, default=None, help="output directory (default: runs/<name>)")
    common.add_argument("--backend", choices=sorted(kernels.BACKENDS), default=None,
                        help="trajectory kernel backend (default: compiled when available)")
    common.add_argument("--workers", type=_positive, default=1, help="processes for sweep cells")
    common.add_argument("--grid-theta", type=_positive, default=None,
                        help="polar resolution of the BLP pair search (non-Markovian runs)")
    common.add_argument("--grid-phi", type=_positive, default=None,
                        help="azimuthal resolution of the BLP pair search (non-Markovian runs)")
    common.add_argument("--joint-carryover", action="store_true",
                        help="carry the joint (system, next environment) state between steps")

    parser = argparse.ArgumentParser(prog="swapcm", description=__doc__)
    parser.add_argument("--version", action="version", version=f"swapcm {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("list", parents=[common], help="list the scenario registry")
    p = sub.add_parser("scenario", parents=[common], help="run a named scenario")
    p.add_argument("id")
    p = sub.add_parser("run", parents=[common], help="run a configuration file")
    p.add_argument("config", type=Path)
    p = sub.add_parser("sweep", parents=[common], help="run a sweep configuration file")
    p.add_argument("config", type=Path)
    return parser


def _list() -> None:
    from swapcm.experiments.scenarios import SCENARIOS, describe

    for sid in SCENARIOS:
        print(describe(sid))


def _load(path: Path, args, expect_sweep: bool):
    from swapcm.errors import ConfigError
    from swapcm.experiments.config import load_config, resolve_config

    loaded = load_config(path)
    if expect_sweep != (loaded.model == "sweep"):
        hint = "use 'swapcm sweep'" if loaded.model == "sweep" else "use 'swapcm run'"
        raise ConfigError(f"model: {loaded.model!r} configuration given to the wrong subcommand; {hint}")
    if args.joint_carryover:
        if loaded.model not in ("nonmarkovian", "sweep"):
            raise ConfigError(f"--joint-carryover applies only to non-Markovian models, not {loaded.model!r}")
        loaded = resolve_config({**loaded.params, "joint_carryover": True})
    return loaded


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.backend:
            kernels.set_backend(args.backend)
        if args.command == "list":
            _list()
            return 0
        from swapcm.experiments.scenarios import run_config, run_scenario

        if args.command == "scenario":
            out = args.out or Path("runs") / args.id
            manifest = run_scenario(args.id, out, args.grid_theta, args.grid_phi, args.joint_carryover, args.workers)
        else:
            out = args.out or Path("runs") / args.config.stem
            loaded = _load(args.config, args, expect_sweep=args.command == "sweep")
            manifest = run_config(loaded, out, "custom", args.grid_theta, args.grid_phi, args.workers)
    except (SwapCMError, OSError, ValueError) as exc:
        print(f"swapcm: error: {exc}", file=sys.stderr)
        return 1
    print(f"{manifest.run}: wrote {len(manifest.outputs) + 1} files to {out} "
          f"in {manifest.wall_clock_seconds:.2f} s ({manifest.backend} backend)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
