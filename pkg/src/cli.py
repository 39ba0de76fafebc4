"""Command-line tool: keys, signing, verification, combination and the harness experiments."""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .adversaries import ADVERSARIES
from .config import DEFAULT_PRESET, MAGIC_MESSAGE, PRESETS
from .errors import InvariantViolation, PolicyViolation, SchemeError
from .game_orchestrator import GameOrchestrator
from .lsh_scheme import combine, combine_messages, lsh_sign, lsh_verify, random_tag
from .message_encode import concat_all
from .params import decode_params, encode_params, load_preset, params_digest
from .privacy import run_privacy_experiment
from .serde import check_digest, decode, decode_as, encode, read_header
from .sh_scheme import check_key_pair, gen, sign, verify
from .transcript_manager import render_summary
from .types import LinearFunctional, Message, Params, PublicKey, SecretKey, Signature, Tag

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_REJECT = 1
EXIT_USAGE = 2
EXIT_INVARIANT = 3


def _rng(seed: Optional[str]) -> np.random.Generator:
    if seed is None:
        return np.random.default_rng()
    return np.random.default_rng(int(seed, 16))


def _params(args: argparse.Namespace) -> Params:
    if args.params_file:
        return decode_params(Path(args.params_file).read_bytes())
    return load_preset(args.preset)


def _write(path: str, data: bytes) -> None:
    Path(path).write_bytes(data)
    logger.info("wrote %d bytes to %s", len(data), path)


def _load_public_key(path: str) -> PublicKey:
    pk = decode_as(Path(path).read_bytes(), PublicKey)
    assert isinstance(pk, PublicKey)
    return pk


def _load_secret_key(path: str, pk: PublicKey) -> SecretKey:
    sk = decode_as(Path(path).read_bytes(), SecretKey, params_digest(pk.params))
    assert isinstance(sk, SecretKey)
    return sk


def _load_signature(path: str, pk: PublicKey) -> Signature:
    sigma = decode_as(Path(path).read_bytes(), Signature, params_digest(pk.params))
    assert isinstance(sigma, Signature)
    return sigma


def _load_tag(path: str, pk: PublicKey) -> Tag:
    tag = decode_as(Path(path).read_bytes(), Tag, params_digest(pk.params))
    assert isinstance(tag, Tag)
    return tag


def _load_message(path: str, lines: bool, pk: Optional[PublicKey] = None) -> Message:
    """A message envelope, a text file read one symbol per line (--lines), or one raw symbol."""
    data = Path(path).read_bytes()
    if lines:
        return Message.from_text_lines(data.decode("utf-8"))
    if data[:4] == MAGIC_MESSAGE:
        message = decode_as(data, Message, params_digest(pk.params) if pk is not None else None)
        assert isinstance(message, Message)
        return message
    return Message.of(data)


def _parse_coeffs(text: str) -> List[int]:
    try:
        return [int(c) for c in text.split(",") if c.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad coefficient list {text!r}") from None


def cmd_params(args: argparse.Namespace) -> int:
    params = _params(args)
    if args.out:
        _write(args.out, encode_params(params))
    print(render_summary(params.to_dict()), end="")
    return EXIT_OK


def cmd_keygen(args: argparse.Namespace) -> int:
    params = _params(args)
    pk, sk = gen(params, _rng(args.seed))
    check_key_pair(pk, sk)
    _write(args.out + ".pk", encode(pk))
    _write(args.out + ".sk", encode(sk, params))
    return EXIT_OK


def cmd_sign(args: argparse.Namespace) -> int:
    pk = _load_public_key(args.pk)
    sk = _load_secret_key(args.sk, pk)
    message = _load_message(args.message, args.lines, pk)
    sigma = sign(sk, pk, message, _rng(args.seed), single_symbol_only=args.policy_single_symbol)
    _write(args.out, encode(sigma, pk.params))
    return EXIT_OK


def _verdict(ok: int) -> int:
    print("ACCEPT" if ok else "REJECT")
    return EXIT_OK if ok else EXIT_REJECT


def cmd_verify(args: argparse.Namespace) -> int:
    pk = _load_public_key(args.pk)
    sigma = _load_signature(args.sig, pk)
    message = _load_message(args.message, args.lines, pk)
    return _verdict(verify(pk, message, sigma))


def cmd_concat(args: argparse.Namespace) -> int:
    """Concatenate signature envelopes, or message envelopes, in the order given."""
    blobs = [Path(p).read_bytes() for p in args.inputs]
    digests = [read_header(b)[1] for b in blobs]
    for d in digests[1:]:
        check_digest(d, digests[0], "input")
    items = [decode(b) for b in blobs]
    kinds = {type(i) for i in items}
    if len(kinds) != 1 or not kinds <= {Signature, Message}:
        raise PolicyViolation("concat takes only signatures or only messages")
    joined = concat_all(items)
    bound = next((d for d in digests if any(d)), digests[0])
    header_params = None
    if args.pk:
        header_params = _load_public_key(args.pk).params
        check_digest(bound, params_digest(header_params), "input")
    _write(args.out, encode(joined, header_params))
    return EXIT_OK


def _tag_for_signing(args: argparse.Namespace, pk: PublicKey, rng: np.random.Generator) -> Tag:
    if args.new_tag:
        tag = random_tag(pk.params.n, rng)
        _write(args.tag, encode(tag, pk.params))
        return tag
    return _load_tag(args.tag, pk)


def cmd_lsh_sign(args: argparse.Namespace) -> int:
    pk = _load_public_key(args.pk)
    sk = _load_secret_key(args.sk, pk)
    rng = _rng(args.seed)
    tag = _tag_for_signing(args, pk, rng)
    message = _load_message(args.message, args.lines, pk)
    sigma = lsh_sign(sk, pk, tag, message, rng, single_symbol_only=args.policy_single_symbol)
    _write(args.out, encode(sigma, pk.params))
    return EXIT_OK


def cmd_lsh_combine(args: argparse.Namespace) -> int:
    pk = _load_public_key(args.pk)
    tag = _load_tag(args.tag, pk)
    coeffs = args.coeffs
    if len(coeffs) != len(args.sigs):
        raise PolicyViolation(f"{len(coeffs)} coefficients for {len(args.sigs)} signatures")
    sigmas = [_load_signature(p, pk) for p in args.sigs]
    _write(args.out, encode(combine(pk, tag, list(zip(coeffs, sigmas))), pk.params))
    if args.messages:
        if len(args.messages) != len(coeffs):
            raise PolicyViolation(f"{len(args.messages)} messages for {len(coeffs)} coefficients")
        messages = [_load_message(p, args.lines, pk) for p in args.messages]
        _write(args.message_out or args.out + ".msg", encode(combine_messages(messages, coeffs)))
    return EXIT_OK


def cmd_lsh_verify(args: argparse.Namespace) -> int:
    pk = _load_public_key(args.pk)
    tag = _load_tag(args.tag, pk)
    sigma = _load_signature(args.sig, pk)
    message = _load_message(args.message, args.lines, pk)
    return _verdict(lsh_verify(pk, tag, message, sigma))


def cmd_game(args: argparse.Namespace) -> int:
    params = _params(args)
    rng = _rng(args.seed)
    orchestrator = GameOrchestrator(Path(args.transcripts) if args.transcripts else None)
    adversary_cls = ADVERSARIES[args.adversary]
    if args.games > 1:
        estimate = orchestrator.estimate_advantage(
            args.scheme, adversary_cls, params, args.queries, args.games, rng, args.mode, args.leak_trapdoor
        )
        print(render_summary({
            "games": estimate.games,
            "wins": estimate.wins,
            "extractions": estimate.extractions,
            "win_rate": f"{estimate.win_rate:.6f}",
            "extraction_rate": f"{estimate.extraction_rate:.6f}",
            "reduction_loss": f"{estimate.reduction_loss:.6f}",
            "mean_overhead_seconds": f"{estimate.mean_overhead_seconds:.6f}",
        }), end="")
        return EXIT_OK
    adversary = adversary_cls(np.random.default_rng(int(rng.integers(0, 2**63))))
    outcome = orchestrator.play(args.scheme, adversary, params, args.queries, rng, args.mode, args.leak_trapdoor)
    print(render_summary(outcome.summary()), end="")
    return EXIT_OK


def cmd_privacy(args: argparse.Namespace) -> int:
    params = _params(args)
    # two data sets that differ in the second symbol; functional (2, 0) ignores it
    v0: Tuple[bytes, ...] = (b"shared", b"left")
    v1: Tuple[bytes, ...] = (b"shared", b"right")
    functionals = [LinearFunctional((2, 0)), LinearFunctional((1, 0))]
    report = run_privacy_experiment(params, v0, v1, functionals, args.samples, _rng(args.seed))
    summary = {"samples": report.samples, "bin_width": f"{report.bin_width:.6f}"}
    for i, d in enumerate(report.distances):
        summary[f"distance_{i}"] = f"{d:.6f}"
    summary["max_distance"] = f"{report.max_distance:.6f}"
    print(render_summary(summary), end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--params-file", help="binary params record (SGSP)")
    common.add_argument(
        "--preset",
        default=DEFAULT_PRESET,
        choices=sorted(PRESETS),
        help="named parameters; paper-strict takes q >= (kn)^2 and q < 2^31, so it only admits kn <= 46340",
    )
    common.add_argument("--seed", help="hex seed for a reproducible run")
    common.add_argument("--lines", action="store_true", help="read message files as one symbol per line")
    common.add_argument("--policy-single-symbol", action="store_true", help="refuse to sign multi-symbol messages")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")

    parser = argparse.ArgumentParser(prog="sgsig", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", parents=[common], help="print or write a params record")
    p.add_argument("--out")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("keygen", parents=[common], help="write PREFIX.pk and PREFIX.sk")
    p.add_argument("--out", required=True, help="output prefix")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("sign", parents=[common])
    p.add_argument("--pk", required=True)
    p.add_argument("--sk", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("message")
    p.set_defaults(func=cmd_sign)

    p = sub.add_parser("verify", parents=[common])
    p.add_argument("--pk", required=True)
    p.add_argument("--sig", required=True)
    p.add_argument("message")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("concat", parents=[common], help="concatenate signatures or messages")
    p.add_argument("--pk", help="bind the output to this key's params")
    p.add_argument("--out", required=True)
    p.add_argument("inputs", nargs="+")
    p.set_defaults(func=cmd_concat)

    p = sub.add_parser("lsh-sign", parents=[common])
    p.add_argument("--pk", required=True)
    p.add_argument("--sk", required=True)
    p.add_argument("--tag", required=True)
    p.add_argument("--new-tag", action="store_true", help="draw a fresh tag and write it to --tag")
    p.add_argument("--out", required=True)
    p.add_argument("message")
    p.set_defaults(func=cmd_lsh_sign)

    p = sub.add_parser("lsh-combine", parents=[common])
    p.add_argument("--pk", required=True)
    p.add_argument("--tag", required=True)
    p.add_argument("--coeffs", required=True, type=_parse_coeffs, help="comma-separated, one per signature")
    p.add_argument("--messages", nargs="*", help="source messages, to also write the combined message")
    p.add_argument("--message-out")
    p.add_argument("--out", required=True)
    p.add_argument("sigs", nargs="+")
    p.set_defaults(func=cmd_lsh_combine)

    p = sub.add_parser("lsh-verify", parents=[common])
    p.add_argument("--pk", required=True)
    p.add_argument("--tag", required=True)
    p.add_argument("--sig", required=True)
    p.add_argument("message")
    p.set_defaults(func=cmd_lsh_verify)

    p = sub.add_parser("game", parents=[common], help="run the unforgeability game")
    p.add_argument("--scheme", choices=["SH", "LSH"], default="SH")
    p.add_argument("--adversary", choices=sorted(ADVERSARIES), default="trapdoor-leak")
    p.add_argument("--mode", choices=["real", "simulated"], default="simulated")
    p.add_argument("--queries", type=int, default=8, help="query budget")
    p.add_argument("--games", type=int, default=1)
    p.add_argument("--leak-trapdoor", action="store_true")
    p.add_argument("--transcripts", help="directory for transcripts and summaries")
    p.set_defaults(func=cmd_game)

    p = sub.add_parser("privacy", parents=[common], help="run the context-hiding experiment")
    p.add_argument("--samples", type=int, default=1000)
    p.set_defaults(func=cmd_privacy)

    return parser


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return int(args.func(args))
    except InvariantViolation as exc:
        print(f"InvariantViolation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except SchemeError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError, UnicodeDecodeError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
