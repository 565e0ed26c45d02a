import argparse
import os
import sys
from typing import Optional

import pandas as pd

from homext.errors import MalformedInputError, PreconditionError, UnsupportedError
from homext.modcat import Ring

from cli.commands import COMMANDS, Context
from cli.coordinator import Coordinator, thread_count
from cli.logging import Logger, install
from cli.manifest import Manifest, canonical, save_json
from cli.verify import evaluate, instance_from_manifest, lookup

STATUSES = ("pass", "partial", "flagged", "fail")


class ArgumentParser(argparse.ArgumentParser):
    """ Reports usage errors as malformed input so they exit with 1. """

    def error(self, message: str):
        raise MalformedInputError(message, "arguments")


def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument('--ring', type=int, default=None, help='The modulus N of Z/N')
    common.add_argument('--manifest', type=str, default=None, help='Manifest with named objects')
    common.add_argument('--verbose', action='store_true', help='Log debug messages')

    parser = ArgumentParser(prog="homext", description="Exact homological algebra over Z/N")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)
    for cmd in COMMANDS.values():
        p = sub.add_parser(cmd.name, help=cmd.help, parents=[common])
        for flags, kwargs in cmd.arguments:
            p.add_argument(*flags, **kwargs)

    v = sub.add_parser("verify", help="check a proposition on a manifest or on fuzzed instances",
                       parents=[common])
    v.add_argument('prop', type=str, help='Proposition id, e.g. 1.1 or 5.mono.2')
    v.add_argument('--fuzz', type=int, nargs=2, metavar=("SEED", "COUNT"), default=None,
                   help='Run COUNT seeded instances')
    v.add_argument('--csv', type=str, default=None, help='Write the per-instance table')
    v.add_argument('--failures-dir', type=str, default="failures",
                   help='Directory for the manifests of failing instances')
    return parser


def load_context(args) -> Context:
    manifest: Optional[Manifest] = Manifest.load(args.manifest) if args.manifest else None
    if manifest is not None and args.ring is not None and manifest.ring.N != args.ring:
        raise MalformedInputError(f"--ring {args.ring} disagrees with the manifest ring Z/{manifest.ring.N}", "ring")
    if manifest is None and args.ring is not None:
        manifest = Manifest(Ring(args.ring))
    return Context(manifest)


def run_verify(args, ctx: Context) -> int:
    prop = lookup(args.prop)
    if args.fuzz is not None:
        seed, count = args.fuzz
        if count < 1:
            raise MalformedInputError(f"instance count must be positive, got {count}", "fuzz")
        ring = ctx.manifest.ring if ctx.manifest else None
        outcomes = Coordinator(prop.id, seed, count, ring, thread_count(), args.verbose).run()
    elif ctx.manifest is not None and args.manifest:
        seed = None
        inst = instance_from_manifest(prop, ctx.manifest)
        outcomes = [evaluate(prop, 0, ctx.manifest.ring, inst)]
    else:
        raise MalformedInputError("verify needs --manifest or --fuzz", "manifest")

    for o in outcomes:
        print(o.line())
    if args.fuzz is None:
        print(canonical(outcomes[0].report))

    table = pd.DataFrame([o.row() for o in outcomes])
    counts = table.groupby("status").size().reindex(STATUSES, fill_value=0)
    print(counts.to_frame("instances").to_string())
    if args.csv:
        table.to_csv(args.csv, index=False)
        Logger.info(f"Wrote {len(table)} rows to {args.csv}")

    for o in outcomes:
        if o.replay is not None and seed is not None:
            path = os.path.join(args.failures_dir, f"{prop.id}-{seed}-{o.index}.json")
            save_json(path, o.replay)
            Logger.warn(f"Instance {o.index} failed, replay with --manifest {path}")

    trailer = {"prop": prop.id, "instances": len(outcomes), **{s: int(counts[s]) for s in STATUSES}}
    trailer["ok"] = trailer["fail"] == 0
    print(canonical(trailer))
    return 0 if trailer["ok"] else 2


def main(argv: Optional[list[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        install(args.verbose)
        ctx = load_context(args)
        if args.command == "verify":
            return run_verify(args, ctx)
        print(COMMANDS[args.command].run(ctx, args).render())
        return 0
    except MalformedInputError as e:
        Logger.error(f"malformed input: {e}")
        return 1
    except (PreconditionError, UnsupportedError) as e:
        Logger.error(str(e))
        return 2


if __name__ == '__main__':
    sys.exit(main())
