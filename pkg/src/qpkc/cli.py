"""``qpkc`` command line: keys, encryption, authentication, signature demos and the verification report."""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import qpke
from .errors import ProtocolError, SchemeMismatchError
from .gf2 import BitWord
from .qauth import (
    auth_encode,
    auth_encode_with_identity,
    auth_keygen,
    auth_verify,
    auth_verify_with_identity,
)
from .qpke import KeyPair
from .qsign import make_instance, run_session, verify_from_transcript
from .qsim import PureState, overlap
from .seeding import fork
from .serialize import (
    auth_key_from_json,
    auth_key_to_json,
    cipher_from_json,
    cipher_to_json,
    dumps,
    fingerprint,
    key_from_json,
    key_to_json,
    public_key_to_json,
    read_json,
    state_from_json,
    state_to_json,
    validate,
    write_json,
)
from .verification import run_all

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(","))


# flag -> keygen parameter name, per scheme
PARAM_FLAGS = {
    "rsa": {"p": "p", "q": "q", "e": "e"},
    "elgamal": {"p": "p", "alpha": "alpha", "s": "s"},
    "gm": {"p": "p", "q": "q", "k": "k", "t": "t"},
    "ecc": {"s": "s"},
    "mceliece": {"code": "code"},
    "niederreiter": {"code": "code"},
    "otu": {"p": "p", "k": "k", "primes": "primes", "g": "g", "d": "d"},
}


def _load_keypair(path: str) -> KeyPair:
    key = key_from_json(read_json(path))
    if not isinstance(key, KeyPair):
        raise UsageError(f"{path} holds only a public key")
    return key


def cmd_keygen(args) -> int:
    rng = fork(args.seed, "keygen")
    if args.scheme == "auth":
        if args.k is None or args.n is None:
            raise UsageError("auth keys need --k and --n")
        key = auth_keygen(args.k, args.n, rng)
        doc = auth_key_to_json(key)
        _info(f"auth key [{key.n},{key.k}]", args.out)
    else:
        params = {
            name: getattr(args, flag)
            for flag, name in PARAM_FLAGS[args.scheme].items()
            if getattr(args, flag) is not None
        }
        kp = qpke.keygen(args.scheme, params, rng)
        doc = key_to_json(kp)
        _info(f"{args.scheme} public key fingerprint {fingerprint(kp.public)}", args.out)
    _emit(doc, args.out)
    return EXIT_OK


def _info(text: str, out: str | None) -> None:
    """Human-readable lines go to stderr when stdout carries the JSON document."""
    print(text, file=sys.stdout if out else sys.stderr)


def _emit(doc: dict, out: str | None) -> None:
    if out:
        write_json(out, doc)
    else:
        sys.stdout.write(dumps(validate(doc)))


def cmd_encrypt(args) -> int:
    key = key_from_json(read_json(args.key))
    pk = key.public if isinstance(key, KeyPair) else key
    state = state_from_json(read_json(args.inp))
    rng = fork(args.seed, "encrypt")
    r = qpke.sample_randomness(pk, rng) if args.r is None else args.r
    cipher = qpke.encrypt(pk, state, r)
    _emit(cipher_to_json(cipher), args.out)
    if len(state.amplitudes) == 1:
        (m,) = state.amplitudes
        classical = qpke.classical_encrypt(pk, m, int(r))
        regs = " ".join(f"{k}={v}" for k, v in sorted(classical.registers.items()))
        side = f" side={list(classical.classical)}" if classical.classical else ""
        _info(f"classical cipher: {regs}{side}", args.out)
    return EXIT_OK


def cmd_decrypt(args) -> int:
    kp = _load_keypair(args.key)
    cipher = cipher_from_json(read_json(args.inp))
    if cipher.scheme != kp.scheme:
        raise SchemeMismatchError(f"key is {kp.scheme!r}, cipher is {cipher.scheme!r}")
    message, r = qpke.decrypt(kp, cipher, fork(args.seed, "decrypt"))
    _emit(state_to_json(message), args.out)
    if r is not None:
        _info(f"recovered r = {r}", args.out)
    if args.compare:
        reference = state_from_json(read_json(args.compare))
        _info(f"fidelity {overlap(message, reference):.12f}", args.out)
    return EXIT_OK


def cmd_auth_encode(args) -> int:
    key = auth_key_from_json(read_json(args.key))
    state = state_from_json(read_json(args.inp))
    if args.identity:
        encoded = auth_encode_with_identity(state, key, BitWord.from_string(args.identity))
    else:
        encoded = auth_encode(state, key)
    _emit(state_to_json(encoded), args.out)
    return EXIT_OK


def cmd_auth_verify(args) -> int:
    key = auth_key_from_json(read_json(args.key))
    state = state_from_json(read_json(args.inp))
    rng = fork(args.seed, "auth-verify")
    if "id" in state.layout:
        tag = auth_verify_with_identity(state, key, rng)
    else:
        tag = auth_verify(state, key, rng)
    line = tag.outcome + (f" identity={tag.identity}" if tag.identity is not None else "")
    if tag.accepted:
        _emit(state_to_json(tag.message), args.out)
        _info(line, args.out)
        return EXIT_OK
    print(line)
    return EXIT_FAIL


def _demo_message(width: int, rng: np.random.Generator) -> PureState:
    values = rng.choice(1 << width, size=min(2, 1 << width), replace=False)
    return PureState.from_register("m", width, {int(v): 1.0 for v in values}, normalize=True)


def cmd_sign_demo(args) -> int:
    kind = args.scheme or "rsa"
    inst, kp = make_instance(kind, rng=fork(args.seed, "sign/keygen"))
    sign_rng = fork(args.seed, "sign/session")
    message = state_from_json(read_json(args.inp)) if args.inp else _demo_message(inst.message_width, sign_rng)
    session, outcome = run_session(inst, kp, message, sign_rng, fork(args.seed, "sign/verify"), args.tamper)
    doc = {
        "kind": "transcript",
        "version": 1,
        "instance": kind,
        "public_key": public_key_to_json(kp.public),
        "seed": args.seed,
        "tamper": args.tamper,
        "steps": session.transcript,
    }
    if args.out:
        write_json(args.out, doc)
    _report_outcome(session.transcript, outcome)
    return EXIT_OK if outcome.accepted else EXIT_FAIL


def _report_outcome(steps: list[dict], outcome) -> None:
    for i, entry in enumerate(steps, 1):
        print(f"{i}. {entry['step']} ({entry['direction']})")
    print(
        f"challenge_check={outcome.challenge_check} tag_check={outcome.tag_check} "
        f"-> {'accepted' if outcome.accepted else 'rejected'}"
    )


def cmd_replay(args) -> int:
    doc = validate(read_json(args.inp))
    if doc["kind"] != "transcript":
        raise UsageError(f"{args.inp} is not a transcript")
    pk = key_from_json(doc["public_key"])
    steps = doc["steps"]
    outcome = verify_from_transcript(pk, steps, fork(doc["seed"], "sign/verify"))
    recorded = [s["payload"] for s in steps if s["step"] == "verify"]
    _report_outcome(steps, outcome)
    if recorded and recorded[-1]["accepted"] != outcome.accepted:
        print("replay outcome differs from the recorded verification", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK if outcome.accepted else EXIT_FAIL


def cmd_verify(args) -> int:
    report = run_all(args.seed, args.trials, args.fault)
    for suite in report["suites"]:
        status = "PASS" if suite["passed"] else "FAIL"
        print(f"{status} {suite['name']} ({suite['checks']} checks)")
        for f in suite["failures"]:
            print(f"    {f}")
    print("ALL PASS" if report["passed"] else "FAILURES")
    if args.out:
        write_json(args.out, report)
    return EXIT_OK if report["passed"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qpkc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_in=False, need_key=False):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--in", dest="inp", required=need_in)
        p.add_argument("--out")
        if need_key:
            p.add_argument("--key", required=True)
        return p

    kg = common(sub.add_parser("keygen", help="generate a key pair"))
    kg.add_argument("--scheme", required=True, choices=sorted(qpke.SCHEMES) + ["auth"])
    for flag in ("p", "q", "e", "alpha", "s", "k", "t", "g", "d", "n"):
        kg.add_argument(f"--{flag}", type=int)
    kg.add_argument("--code", choices=["hamming74", "signing"])
    kg.add_argument("--primes", type=_ints, help="comma-separated small primes (otu)")
    kg.set_defaults(func=cmd_keygen)

    enc = common(sub.add_parser("encrypt", help="encrypt a serialized state"), need_in=True, need_key=True)
    enc.add_argument("--r", type=int, help="explicit randomness (default: sampled from --seed)")
    enc.set_defaults(func=cmd_encrypt)

    dec = common(sub.add_parser("decrypt", help="decrypt a serialized cipher"), need_in=True, need_key=True)
    dec.add_argument("--compare", help="state file to report fidelity against")
    dec.set_defaults(func=cmd_decrypt)

    ae = common(sub.add_parser("auth-encode", help="encode a state for integrity checking"), need_in=True, need_key=True)
    ae.add_argument("--identity", help="sender identity bit string (at most 8 bits)")
    ae.set_defaults(func=cmd_auth_encode)

    av = common(sub.add_parser("auth-verify", help="check and extract an encoded state"), need_in=True, need_key=True)
    av.set_defaults(func=cmd_auth_verify)

    sd = common(sub.add_parser("sign-demo", help="run one signature session and save its transcript"))
    sd.add_argument("--scheme", choices=["rsa", "mceliece"], default="rsa")
    sd.add_argument("--tamper", help="tag-bit:I, challenge or reveal")
    sd.set_defaults(func=cmd_sign_demo)

    rp = common(sub.add_parser("replay", help="re-run verification from a saved transcript"), need_in=True)
    rp.set_defaults(func=cmd_replay)

    vf = common(sub.add_parser("verify", help="run the property suites and write a report"))
    vf.add_argument("--trials", type=int, default=20)
    vf.add_argument("--fault", action="store_true", help="inject transit faults into the auth and signature suites")
    vf.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if getattr(args, "trials", 1) < 1:
        print("error: --trials must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, ValueError, ProtocolError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
