"""
Integrity checks on quantum messages
====================================

A systematic code ``G_s = [I | A]`` appends the tag ``mA`` to every branch.
The receiver measures the syndrome; any nonzero value means tampering.
"""

# %%
import numpy as np

from qpkc import qpke
from qpkc.gf2 import BitWord
from qpkc.qauth import (
    auth_encode,
    auth_encode_with_identity,
    auth_keygen,
    auth_verify,
    auth_verify_with_identity,
    open_from_transport,
    seal_for_transport,
    undetected_tampers,
)
from qpkc.qsim import PureState, overlap

rng = np.random.default_rng(4)
key = auth_keygen(4, 8, rng)
psi = PureState.from_register("m", 4, {3: 1, 12: 1j}, normalize=True)
encoded = auth_encode(psi, key)
tag = auth_verify(encoded, key, rng)
print(tag.outcome, overlap(tag.message, psi))

# %%
# A single flipped qubit in a parity position changes the syndrome.
flipped = PureState(encoded.layout, {k ^ (1 << 6): a for k, a in encoded.amplitudes.items()})
print(auth_verify(flipped, key, rng).outcome)

# %%
# Only codeword-shaped errors slip through.
print(len(undetected_tampers(key)), "undetected error words out of", 2**key.n - 1)

# %%
# An identity register rides along as H^l|S>.
tag = auth_verify_with_identity(auth_encode_with_identity(psi, key, BitWord(5, 0b10110)), key, rng)
print(tag.outcome, "sender", tag.identity)

# %%
# Sent under McEliece: the codeword register is the plaintext.
small = auth_keygen(2, 4, rng)
transport = qpke.keygen("mceliece", {}, rng)
msg = PureState.from_register("m", 2, {1: 1, 2: 1}, normalize=True)
sealed = seal_for_transport(msg, small, transport, qpke.sample_randomness(transport, rng))
print(open_from_transport(sealed, small, transport, rng).outcome)
