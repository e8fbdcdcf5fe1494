"""
Encrypting quantum messages
===========================

Each scheme lifts a classical trapdoor function to a reversible map
``|m> -> |g(m, r)>|f(m, r)>`` and undoes it with the private key.
"""

# %%
import numpy as np

from qpkc import qpke
from qpkc.qsim import PureState, overlap

# %%
# RSA with N = 15, e = 3. The cipher of ``|2>`` under r = 6 is ``|2 XOR 6>|2^3 mod 15>``.
kp = qpke.keygen("rsa", {"p": 3, "q": 5, "e": 3})
psi = PureState.from_register("m", 4, {2: 1, 7: 1}, normalize=True)
cipher = qpke.encrypt(kp, psi, 6)
print(cipher.state.register_amplitudes())
out, r = qpke.decrypt(kp, cipher)
print("recovered r =", r, "fidelity =", overlap(out, psi))

# %%
# ElGamal keeps |m> and ships alpha^r as classical side information.
kp = qpke.keygen("elgamal", {"p": 11, "alpha": 2, "s": 4})
cipher = qpke.encrypt(kp, PureState.from_register("m", 4, {7: 1.0}), 3)
print("side", cipher.classical, "state", cipher.state.register_amplitudes())

# %%
# The elliptic-curve scheme masks |m> with the x coordinate of rQ.
kp = qpke.keygen("ecc", {"s": 3})
cipher = qpke.encrypt(kp, PureState.from_register("m", 4, {5: 1.0}), 2)
print("rP =", cipher.classical, "state", cipher.state.register_amplitudes())

# %%
# Every scheme, one random superposition each.
rng = np.random.default_rng(1)
for sid in qpke.SCHEMES:
    kp = qpke.keygen(sid, {}, rng)
    psi = qpke.random_message(kp, rng)
    r = qpke.sample_randomness(kp, rng)
    out, rec = qpke.decrypt(kp, qpke.encrypt(kp, psi, r), rng)
    print(f"{sid:13s} terms={len(psi.amplitudes):2d} fidelity={overlap(out, psi):.12f} r={rec}")

# %%
# On basis states the quantum cipher is the textbook cipher.
kp = qpke.keygen("gm", {"p": 3, "q": 5, "k": 2, "t": 2})
basis = qpke.encrypt(kp, qpke.basis_message(kp, 0b10), 0b1001)
print(basis.state.register_amplitudes(), qpke.classical_encrypt(kp, 0b10, 0b1001).registers)
