"""Command line interface mirroring the HTTP service over a local store.

Exit codes: 0 success, 2 usage error, 3 not found, 4 conflict,
5 invalid input, 6 store integrity failure, 7 configuration or service
failure, 1 unexpected error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .annealing import AnnealingConfig
from .config import ServiceConfig
from .errors import (
    ConfigError,
    ConflictError,
    FormatError,
    IntegrityError,
    NotFoundError,
    SigcloudError,
    ValidationError,
)
from .pbm import sniff_and_load

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_NOT_FOUND = 3
EXIT_CONFLICT = 4
EXIT_INVALID = 5
EXIT_INTEGRITY = 6
EXIT_CONFIG = 7

_EXIT_CODES = """\
exit codes:
  0  success
  2  usage error
  3  client, review, or snapshot not found
  4  conflict (already enrolled, review already decided)
  5  invalid input (bad image, bad parameters)
  6  store integrity failure
  7  configuration or service failure
  1  unexpected error
"""


def _load_images(paths: list[str]):
    rasters = []
    for p in paths:
        data = Path(p).read_bytes()
        try:
            rasters.append(sniff_and_load(data))
        except FormatError as err:
            raise FormatError(f"{p}: {err}") from err
    return rasters


def _emit(args, payload: dict, human: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(human)


def _service_config(args) -> ServiceConfig:
    overrides = {
        "store_path": args.store,
        "accept_below": getattr(args, "accept_below", None),
        "reject_at_or_above": getattr(args, "reject_at", None),
    }
    if getattr(args, "config", None):
        return ServiceConfig.from_file(args.config, **overrides)
    return ServiceConfig().with_overrides(**overrides)


def _processor(args):
    from .service import Processor

    return Processor.open(_service_config(args))


def _sa_from_args(args) -> AnnealingConfig | None:
    fields = (args.sa_t0, args.sa_rate, args.sa_iters, args.sa_seed)
    if all(v is None for v in fields):
        return None
    base = AnnealingConfig()
    return AnnealingConfig(
        initial_temperature=args.sa_t0 if args.sa_t0 is not None else base.initial_temperature,
        cooling_rate=args.sa_rate if args.sa_rate is not None else base.cooling_rate,
        outer_iterations=args.sa_iters if args.sa_iters is not None else base.outer_iterations,
        seed=args.sa_seed if args.sa_seed is not None else base.seed,
    )


def cmd_enroll(args) -> int:
    processor = _processor(args)
    rasters = _load_images(args.images)
    summary = processor.enroll(
        args.client, rasters, m=args.m, sa=_sa_from_args(args), re_enroll=args.re_enroll
    )
    _emit(
        args,
        summary,
        f"enrolled {summary['client_id']} v{summary['version']}: "
        f"{summary['created_from']} signatures, {summary['variant_count']} variants",
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    from .service import outcome_json_bytes

    processor = _processor(args)
    raster = _load_images([args.image])[0]
    outcome = processor.verify(args.client, raster)
    if args.json:
        sys.stdout.write(outcome_json_bytes(outcome).decode() + "\n")
    else:
        print(f"{outcome.decision.value} score={outcome.score:.6f} request={outcome.request_id}")
    return EXIT_OK


def cmd_reviews_list(args) -> int:
    listing = _processor(args).reviews(args.status)
    if args.json:
        print(json.dumps(listing, sort_keys=True))
    elif not listing["reviews"]:
        print("no reviews")
    else:
        for item in listing["reviews"]:
            print(
                f"{item['request_id']} client={item['client_id']} "
                f"score={item['score']:.6f} status={item['status']}"
            )
    return EXIT_OK


def _cmd_reviews_decide(args, decision: str) -> int:
    item = _processor(args).decide_review(args.request_id, decision, args.supervisor)
    _emit(args, item, f"{item['request_id']} {item['status']} by {item['decided_by']}")
    return EXIT_OK


def cmd_snapshot(args) -> int:
    payload = _processor(args).snapshot()
    _emit(args, payload, payload["snapshot_id"])
    return EXIT_OK


def cmd_snapshots(args) -> int:
    payload = _processor(args).snapshots()
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    elif not payload["snapshots"]:
        print("no snapshots")
    else:
        for snap in payload["snapshots"]:
            print(snap["snapshot_id"])
    return EXIT_OK


def cmd_restore(args) -> int:
    payload = _processor(args).restore(args.snapshot_id)
    _emit(args, payload, f"restored {payload['restored']}")
    return EXIT_OK


def cmd_serve(args) -> int:
    from .service import serve

    config = _service_config(args).with_overrides(host=args.host, port=args.port)
    try:
        serve(config)
    except KeyboardInterrupt:
        pass
    except OSError as err:
        print(f"serve failed: {err}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


def cmd_demo(args) -> int:
    from .demo import run_demo

    summary = run_demo(args.out, sample_count=args.samples)
    _emit(
        args,
        summary,
        f"wrote input/, simplified/, aggregated/ under {summary['out_dir']} "
        f"(replay: {summary['replay_decision']}, score {summary['replay_score']:.6f})",
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sigcloud",
        description="Signature verification over annealed profile-curve templates.",
        epilog=_EXIT_CODES,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument(
        "--store",
        default=os.environ.get("SIGCLOUD_STORE", "sigcloud-store"),
        help="store directory (default: $SIGCLOUD_STORE or ./sigcloud-store)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enroll", help="enroll a client from signature images")
    p.add_argument("client")
    p.add_argument("images", nargs="+", help="PBM (P1/P4) or PGM (P2/P5) files")
    p.add_argument("--m", type=int, default=None, help="basis point count")
    p.add_argument("--sa-t0", type=float, default=None, help="annealing initial temperature")
    p.add_argument("--sa-rate", type=float, default=None, help="annealing cooling rate")
    p.add_argument("--sa-iters", type=int, default=None, help="annealing outer iterations")
    p.add_argument("--sa-seed", type=int, default=None, help="annealing seed")
    p.add_argument("--re-enroll", action="store_true", help="replace an existing enrollment")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_enroll)

    p = sub.add_parser("verify", help="verify a signature image against a client")
    p.add_argument("client")
    p.add_argument("image")
    p.add_argument("--accept-below", type=float, default=None)
    p.add_argument("--reject-at", type=float, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    reviews = sub.add_parser("reviews", help="inspect and decide escalated reviews")
    reviews_sub = reviews.add_subparsers(dest="reviews_command", required=True)
    p = reviews_sub.add_parser("list")
    p.add_argument("--status", default="pending", choices=["pending", "approved", "denied", "all"])
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_reviews_list)
    for name in ("approve", "deny"):
        p = reviews_sub.add_parser(name)
        p.add_argument("request_id")
        p.add_argument("--supervisor", required=True)
        p.add_argument("--json", action="store_true")
        p.set_defaults(func=lambda a, d=name: _cmd_reviews_decide(a, d))

    p = sub.add_parser("snapshot", help="snapshot the store")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_snapshot)

    p = sub.add_parser("snapshots", help="list snapshots")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_snapshots)

    p = sub.add_parser("restore", help="restore the store from a snapshot")
    p.add_argument("snapshot_id")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_restore)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default=None)
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--config", default=None, help="JSON (or TOML) service config file")
    p.add_argument("--accept-below", type=float, default=None)
    p.add_argument("--reject-at", type=float, default=None)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("demo", help="run the synthetic end-to-end pipeline")
    p.add_argument("--out", default="demo-output")
    p.add_argument("--samples", type=int, default=4)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_demo)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_NOT_FOUND
    except ConflictError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFLICT
    except (ValidationError, FormatError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INVALID
    except IntegrityError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INTEGRITY
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INVALID
    except SigcloudError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    sys.exit(main())
