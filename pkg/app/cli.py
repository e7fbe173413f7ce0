"""Command-line front end: ``python -m app <command> ...``.

Results are JSON on stdout (or --output); exit status 0 on success, 1 when
verify finds a failed check, 2 on usage and algebra errors.
"""
import argparse
import json
import logging
import sys
from typing import Any, Dict, List, NoReturn, Optional

import pydantic

from app.commands import (
    cmd_casimir,
    cmd_dims,
    cmd_list_presets,
    cmd_oracle,
    cmd_phi,
    cmd_rep,
    cmd_table,
    cmd_verify,
)
from app.core.config import settings
from app.core.errors import AlgebraError
from app.core.log import configure_logging
from app.engine.numeric import ScalarMode
from app.engine.repbuild import BasisKind
from app.engine.rewrite import Strategy
from app.schemas.algebra import AlgebraFile
from app.schemas.requests import (
    CasimirRequest,
    CliConfig,
    DimsRequest,
    OracleRequest,
    PhiRequest,
    RepRequest,
    TableRequest,
    VerifyRequest,
)

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_CHECKS_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    code = "usage_error"


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise UsageError(message)


def _common(parser: argparse.ArgumentParser, algebra: bool = True) -> None:
    parser.add_argument("--output", help="write JSON here instead of stdout")
    parser.add_argument("--pretty", action="store_true", help="indent the JSON output")
    parser.add_argument("--log-level", help=f"default {settings.LOG_LEVEL}")
    if not algebra:
        return
    parser.add_argument("--preset", help="preset key, see list-presets")
    parser.add_argument(
        "--param", action="append", default=[], metavar="K=V", help="preset parameter (repeatable)"
    )
    parser.add_argument("--algebra", metavar="FILE", help="algebra JSON document")
    parser.add_argument("--mode", choices=[m.value for m in ScalarMode])
    parser.add_argument("--tol", type=float, help="residual / root tolerance")
    parser.add_argument(
        "--float-fallback",
        action="store_true",
        help="retry in real mode when an exact computation leaves the rationals",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="python -m app", description=settings.PROJECT_NAME)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    _common(sub.add_parser("list-presets", help="list the preset algebras"), algebra=False)

    p = sub.add_parser("phi", help="structure function Phi(eta, m)")
    _common(p)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--eta", help="evaluate at this weight instead of returning Phi symbolically")

    p = sub.add_parser("casimir", help="solve s rho(z) - rho(G(z)) = f(z)")
    _common(p)
    p.add_argument("--max-degree", type=int)
    p.add_argument("--eta")
    p.add_argument("--dim", type=int, help="list s^m rho(eta) for m < DIM")

    p = sub.add_parser("dims", help="finite-dimensional modules up to N_MAX")
    _common(p)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--interval", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--scan-steps", type=int)
    p.add_argument("--side-tol", type=float)
    p.add_argument("--want-complex", action="store_true")
    p.add_argument("--jobs", type=int, default=settings.DEFAULT_JOBS)

    for name, help_text in (("rep", "representation matrices"), ("verify", "check a module")):
        p = sub.add_parser(name, help=help_text)
        _common(p)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--eta", required=True)
        p.add_argument("--normalized", action="store_true")
        if name == "verify":
            p.add_argument("--root-of-unity", type=int, metavar="K", help="also check D = C^K")

    p = sub.add_parser("oracle", help="normal ordering by rewriting")
    _common(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--word", help='e.g. "J- J+ J+"')
    group.add_argument("--m", type=int, help="compare Phi(eta, m) from rewriting with the recurrence")
    p.add_argument("--strategy", choices=[s.value for s in Strategy], default=Strategy.leftmost.value)

    p = sub.add_parser("table", help="compare Phi with the tabulated closed form of a preset")
    _common(p)
    p.add_argument("--m-max", type=int, default=5)
    return parser


def _params(pairs: List[str]) -> Dict[str, str]:
    out: Dict[str, str] = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise UsageError(f"--param expects K=V, got {pair!r}")
        out[key.strip()] = value.strip()
    return out


def _load_algebra(path: str) -> AlgebraFile:
    try:
        with open(path, encoding="utf-8") as fh:
            return AlgebraFile.parse_obj(json.load(fh))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read algebra file {path}: {exc}") from exc


def _source(args: argparse.Namespace) -> Dict[str, Any]:
    return {
        "preset": args.preset,
        "params": _params(args.param),
        "algebra": _load_algebra(args.algebra) if args.algebra else None,
        "mode": args.mode,
        "float_fallback": args.float_fallback,
    }


def _dispatch(args: argparse.Namespace) -> Dict[str, Any]:
    command = args.command
    if command == "list-presets":
        return cmd_list_presets()
    source = _source(args)
    if command == "phi":
        return cmd_phi(PhiRequest(m=args.m, eta=args.eta, **source))
    if command == "casimir":
        return cmd_casimir(
            CasimirRequest(max_degree=args.max_degree, eta=args.eta, dim=args.dim, **source)
        )
    if command == "dims":
        return cmd_dims(
            DimsRequest(
                n_max=args.n_max,
                interval=args.interval,
                scan_steps=args.scan_steps,
                root_tol=args.tol,
                side_tol=args.side_tol,
                want_complex=args.want_complex,
                jobs=args.jobs,
                **source,
            )
        )
    basis = BasisKind.normalized if getattr(args, "normalized", False) else BasisKind.unnormalized
    if command == "rep":
        return cmd_rep(RepRequest(n=args.n, eta=args.eta, basis=basis, **source))
    if command == "verify":
        return cmd_verify(
            VerifyRequest(
                n=args.n,
                eta=args.eta,
                basis=basis,
                tol=args.tol,
                root_of_unity=args.root_of_unity,
                **source,
            )
        )
    if command == "oracle":
        return cmd_oracle(OracleRequest(word=args.word, m=args.m, strategy=args.strategy, **source))
    if command == "table":
        return cmd_table(TableRequest(m_max=args.m_max, **source))
    raise UsageError(f"unknown command {command}")


def dumps(data: Any, pretty: bool = False) -> str:
    return json.dumps(data, sort_keys=True, indent=2 if pretty else None, allow_nan=False) + "\n"


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fail(code: str, message: str, extra: Optional[Dict[str, Any]] = None) -> int:
    body: Dict[str, Any] = {"code": code, "message": message}
    body.update(extra or {})
    sys.stdout.write(dumps({"error": body}))
    return EXIT_USAGE


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return _fail(UsageError.code, str(exc))
    config = CliConfig(output=args.output, pretty=args.pretty, log_level=args.log_level)
    configure_logging(config.log_level)

    try:
        data = _dispatch(args)
    except UsageError as exc:
        return _fail(UsageError.code, str(exc))
    except pydantic.ValidationError as exc:
        return _fail("invalid_request", "request failed validation", {"errors": json.loads(exc.json())})
    except AlgebraError as exc:
        logger.debug("command %s failed: %s", args.command, exc)
        body = exc.to_dict()
        return _fail(body.pop("code"), body.pop("message"), body)

    _emit(dumps(data, config.pretty), config.output)
    if args.command == "verify" and not data["ok"]:
        return EXIT_CHECKS_FAILED
    return EXIT_OK
