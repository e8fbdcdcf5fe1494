"""
Interactive signatures
======================

Bob sends a challenge, Alice inverts her trapdoor on it and tags every
message branch, Bob acknowledges, Alice reveals, Bob checks both the
challenge and the tag.
"""

# %%
import numpy as np

from qpkc.qsign import (
    alice_reveal,
    alice_sign,
    bob_acknowledge,
    bob_challenge,
    bob_verify,
    copy_tag_register,
    make_instance,
    run_session,
)
from qpkc.qsim import PureState, overlap

rng = np.random.default_rng(5)
inst, kp = make_instance("rsa", {"p": 3, "q": 5, "e": 3}, rng)
psi = PureState.from_register("m", inst.message_width, {1: 1, 3: 1}, normalize=True)

session = bob_challenge(inst, rng)
signed = alice_sign(kp, session, psi, rng)
print("challenge", session.r_b, "signed", signed.register_amplitudes())
bob_acknowledge(session)
r, r_prime = alice_reveal(session)
out = bob_verify(session, r, r_prime, rng)
print(out.accepted, overlap(out.recovered_message, psi))

# %%
# The McEliece instance: weights of r add up from the two challenge halves.
inst, kp = make_instance("mceliece", {}, rng)
psi = PureState.from_register("m", inst.message_width, {5: 1.0})
session = bob_challenge(inst, rng)
alice_sign(kp, session, psi, rng)
bob_acknowledge(session)
r, r_prime = alice_reveal(session)
print("W(r) =", r.weight, "=", session.r_b.weight, "+", session.r_a.weight)

# %%
# A copy of the tag allows a second, independent check.
copy_tag_register(session)
print(bob_verify(session, r, r_prime, rng, tag_register="tag_copy1").accepted)
print(bob_verify(session, r, r_prime, rng).accepted)

# %%
# Adversaries on the channel.
for tamper in (None, "tag-bit:2", "challenge", "reveal"):
    _, outcome = run_session(inst, kp, psi, np.random.default_rng(0), np.random.default_rng(1), tamper)
    print(f"{tamper!s:10s} challenge={outcome.challenge_check} tag={outcome.tag_check}")
