"""Property suites behind ``qpkc verify``: each returns a JSON-ready result dict."""
from __future__ import annotations

from typing import Callable

import numpy as np

from . import qpke
from .qauth import auth_encode, auth_keygen, auth_verify, undetected_tampers
from .qpke import CASE2_RECOVERS_R, SCHEMES
from .qsign import make_instance, run_session
from .qsim import PureState, fidelity, overlap, trace_distance
from .seeding import fork

FIDELITY_TOL = 1e-9
MONOTONE_TOL = 1e-8

# parameter sets cycled through by the round-trip and degeneration suites
SCHEME_PARAMS: dict[str, list[dict]] = {
    "rsa": [{"p": 3, "q": 5}, {"p": 3, "q": 11}, {"p": 5, "q": 7}],
    "elgamal": [{"p": 11}, {"p": 23}],
    "gm": [{"p": 3, "q": 5, "k": 2}, {"p": 3, "q": 5, "k": 3}],
    "ecc": [{}],
    "mceliece": [{"code": "hamming74"}],
    "niederreiter": [{"code": "hamming74"}],
    "otu": [{"primes": (2, 3, 5, 7), "k": 2}],
}


class _Tally:
    def __init__(self, name: str):
        self.name = name
        self.checks = 0
        self.failures: list[str] = []

    def check(self, ok: bool, what: str) -> None:
        self.checks += 1
        if not ok and len(self.failures) < 5:
            self.failures.append(what)
        elif not ok:
            self.failures.append("...")
            self.failures = self.failures[:6]

    def result(self, **extra) -> dict:
        return {"name": self.name, "passed": not self.failures, "checks": self.checks, "failures": self.failures, **extra}


def roundtrip_suite(seed: int, trials: int, fault: bool = False) -> dict:
    t = _Tally("roundtrip")
    worst = 1.0
    for sid, param_sets in SCHEME_PARAMS.items():
        rng = fork(seed, f"roundtrip/{sid}")
        scheme = SCHEMES[sid]
        for i in range(trials):
            kp = qpke.keygen(sid, param_sets[i % len(param_sets)], rng)
            psi = qpke.random_message(kp, rng)
            r = qpke.sample_randomness(kp, rng)
            out, rec = qpke.decrypt(kp, qpke.encrypt(kp, psi, r), rng)
            f = overlap(out, psi)
            worst = min(worst, f)
            t.check(f >= 1 - FIDELITY_TOL, f"{sid} trial {i}: fidelity {f}")
            if scheme.decryption_case == CASE2_RECOVERS_R:
                t.check(rec == r, f"{sid} trial {i}: recovered r {rec} != {r}")
            else:
                t.check(rec is None, f"{sid} trial {i}: unexpected recovered r")
    return t.result(min_fidelity=round(worst, 12))


def degeneration_suite(seed: int, trials: int = 1, fault: bool = False) -> dict:
    """Every basis message under every r: quantum cipher registers equal the classical cipher."""
    t = _Tally("degeneration")
    for sid, param_sets in SCHEME_PARAMS.items():
        rng = fork(seed, f"degeneration/{sid}")
        scheme = SCHEMES[sid]
        for params in param_sets:
            kp = qpke.keygen(sid, params, rng)
            pk = kp.public
            domain = list(scheme.randomness_domain(pk))
            for r in domain:
                t.check(qpke.joint_injective(pk, r), f"{sid} r={r}: m -> (g,f) not injective")
                for m in scheme.message_space(pk):
                    c = qpke.encrypt(pk, qpke.basis_message(pk, m), r)
                    cc = qpke.classical_encrypt(pk, m, r)
                    (label,) = c.state.amplitudes
                    same = c.state.layout.split(label) == cc.registers and c.classical == cc.classical
                    t.check(same, f"{sid} m={m} r={r}: quantum cipher differs from classical")
                    t.check(qpke.classical_roundtrip(kp, m, r).value == m, f"{sid} m={m} r={r}: classical round trip")
    return t.result()


def _superposition(rng: np.random.Generator, width: int, space: list[int], dense: bool = False) -> PureState:
    """Gaussian amplitudes on a random subset of ``space`` (all of it when ``dense``)."""
    count = len(space) if dense else int(rng.integers(1, len(space) + 1))
    chosen = rng.choice(len(space), size=count, replace=False)
    amps = rng.normal(size=count) + 1j * rng.normal(size=count)
    return PureState.from_register("m", width, {space[int(i)]: complex(a) for i, a in zip(chosen, amps)}, normalize=True)


def monotonicity_pairs(seed: int, trials: int):
    """Yield ``(label, ensemble_1, ensemble_2, psi_1, psi_2)`` for RSA N=15 and GM N=15, k=2."""
    for sid, params in (("rsa", {"p": 3, "q": 5}), ("gm", {"p": 3, "q": 5, "k": 2})):
        rng = fork(seed, f"monotonicity/{sid}")
        scheme = SCHEMES[sid]
        for i in range(trials):
            kp = qpke.keygen(sid, params, rng)
            pk = kp.public
            domain = list(scheme.randomness_domain(pk))
            support = sorted(int(x) for x in rng.choice(domain, size=min(4, len(domain)), replace=False))
            dist = {r: 1.0 / len(support) for r in support}
            space = list(scheme.message_space(pk))
            w = scheme.message_width(pk)
            m1, m2 = _superposition(rng, w, space), _superposition(rng, w, space)
            yield (
                f"{sid} pair {i}",
                qpke.encrypt_ensemble(pk, m1, dist),
                qpke.encrypt_ensemble(pk, m2, dist),
                m1,
                m2,
            )


def monotonicity_suite(seed: int, trials: int, fault: bool = False) -> dict:
    """Encryption never decreases fidelity nor increases trace distance between two messages."""
    t = _Tally("monotonicity")
    slack = 1.0
    for label, e1, e2, m1, m2 in monotonicity_pairs(seed, max(trials, 20)):
        before = overlap(m1, m2)
        after = fidelity(e1, e2)
        slack = min(slack, after - before)
        t.check(after >= before - MONOTONE_TOL, f"{label}: F {after} < |<M1|M2>| {before}")
        d_before = trace_distance(m1, m2)
        d_after = trace_distance(e1, e2)
        t.check(d_after <= d_before + MONOTONE_TOL, f"{label}: D {d_after} > {d_before}")
    return t.result(min_fidelity_gain=round(slack, 12))


def fidelity_suite(seed: int, trials: int, fault: bool = False) -> dict:
    t = _Tally("fidelity_numerics")
    rng = fork(seed, "fidelity")
    for i in range(trials):
        w = int(rng.integers(1, 6))
        # full support keeps pairs generic; sqrt(1 - F^2) is ill-conditioned as F -> 1
        a = _superposition(rng, w, list(range(1 << w)), dense=True)
        b = _superposition(rng, w, list(range(1 << w)), dense=True)
        f = fidelity(a, b)
        t.check(abs(f - overlap(a, b)) <= FIDELITY_TOL, f"pair {i}: Uhlmann {f} vs overlap {overlap(a, b)}")
        d = trace_distance(a, b)
        t.check(abs(d - np.sqrt(max(0.0, 1 - f * f))) <= MONOTONE_TOL, f"pair {i}: D != sqrt(1-F^2)")
    return t.result()


def auth_suite(seed: int, trials: int, fault: bool = False) -> dict:
    """Honest accepts, weight-1 tamper rejection and the undetected-tamper set.

    In fault mode every honest trial also has one detectable codeword bit
    flipped in transit, and the suite checks that each is rejected.
    """
    t = _Tally("authentication")
    rng = fork(seed, "auth")
    key = auth_keygen(4, 8, rng)
    h_t = key.H_s.T
    detectable = [j for j in range(key.n) if h_t.mul_int(1 << j)]
    for i in range(trials):
        psi = _superposition(rng, key.k, list(range(1 << key.k)))
        encoded = auth_encode(psi, key)
        if fault:
            j = detectable[int(rng.integers(len(detectable)))]
            encoded = PureState(encoded.layout, {k ^ (1 << j): a for k, a in encoded.amplitudes.items()})
            t.check(not auth_verify(encoded, key, rng).accepted, f"trial {i}: flipped bit {j} accepted")
        else:
            tag = auth_verify(encoded, key, rng)
            t.check(tag.accepted and overlap(tag.message, psi) >= 1 - FIDELITY_TOL, f"trial {i}: honest reject")
    for m in range(1 << key.k):
        codeword = key.G_s.mul_int(m)
        for j in detectable:
            st = PureState.from_register("c", key.n, {codeword ^ (1 << j): 1.0})
            t.check(not auth_verify(st, key, rng).accepted, f"m={m} flip {j} accepted")
    codewords = {key.G_s.mul_int(m) for m in range(1, 1 << key.k)}
    t.check(undetected_tampers(key) == codewords, "undetected tampers differ from nonzero codewords")
    return t.result()


def signature_suite(seed: int, trials: int, fault: bool = False) -> dict:
    """Honest sessions for both instances; in fault mode one tag qubit is flipped in transit."""
    t = _Tally("signature")
    for kind in ("rsa", "mceliece"):
        sign_rng, verify_rng = fork(seed, f"sign/{kind}"), fork(seed, f"sign/{kind}/verify")
        inst, kp = make_instance(kind, rng=sign_rng)
        space = list(range(1 << inst.message_width))
        for i in range(trials):
            if fault:
                bit = int(sign_rng.integers(inst.tag_width))
                psi = PureState.from_register("m", inst.message_width, {space[int(sign_rng.integers(len(space)))]: 1.0})
                _, out = run_session(inst, kp, psi, sign_rng, verify_rng, tamper=f"tag-bit:{bit}")
                t.check(not out.accepted, f"{kind} trial {i}: tampered tag bit {bit} accepted")
                continue
            psi = _superposition(sign_rng, inst.message_width, space)
            session, out = run_session(inst, kp, psi, sign_rng, verify_rng)
            ok = out.accepted and overlap(out.recovered_message, psi) >= 1 - FIDELITY_TOL
            t.check(ok, f"{kind} trial {i}: honest session rejected")
            if kind == "mceliece":
                r = session.held[0]
                t.check(r.weight == session.r_b.weight + session.r_a.weight, f"trial {i}: W_H(r) mismatch")
    return t.result()


SUITES: dict[str, Callable[..., dict]] = {
    "roundtrip": roundtrip_suite,
    "degeneration": degeneration_suite,
    "monotonicity": monotonicity_suite,
    "fidelity_numerics": fidelity_suite,
    "authentication": auth_suite,
    "signature": signature_suite,
}


def run_all(seed: int, trials: int, fault: bool = False) -> dict:
    suites = [fn(seed, trials, fault) for fn in SUITES.values()]
    return {
        "kind": "report",
        "version": 1,
        "seed": seed,
        "trials": trials,
        "fault": fault,
        "passed": all(s["passed"] for s in suites),
        "suites": suites,
    }
