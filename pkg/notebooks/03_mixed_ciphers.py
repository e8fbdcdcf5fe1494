"""
What an eavesdropper sees
=========================

Without r the cipher is a mixture over the randomness. Encryption never
makes two messages easier to tell apart: fidelity cannot drop and trace
distance cannot grow.
"""

# %%
import numpy as np

from qpkc import qpke
from qpkc.qsim import ensemble_to_density, fidelity, overlap, trace_distance

rng = np.random.default_rng(3)
kp = qpke.keygen("rsa", {"p": 3, "q": 5, "e": 3})
dist = {r: 0.25 for r in (0, 5, 6, 9)}

m1, m2 = qpke.random_message(kp, rng), qpke.random_message(kp, rng)
e1, e2 = qpke.encrypt_ensemble(kp, m1, dist), qpke.encrypt_ensemble(kp, m2, dist)
print("density dimension", ensemble_to_density(e1).dim)

# %%
print(f"before: F = {overlap(m1, m2):.6f}  D = {trace_distance(m1, m2):.6f}")
print(f"after:  F = {fidelity(e1, e2):.6f}  D = {trace_distance(e1, e2):.6f}")

# %%
# Over many pairs the gain in fidelity is never negative. Here it is zero up
# to rounding: f(m) pins down m, so the branches for different r sit on
# orthogonal supports and mixing them changes nothing.
gains = []
for _ in range(200):
    a, b = qpke.random_message(kp, rng), qpke.random_message(kp, rng)
    gains.append(fidelity(qpke.encrypt_ensemble(kp, a, dist), qpke.encrypt_ensemble(kp, b, dist)) - overlap(a, b))
print(f"gain range [{min(gains):.1e}, {max(gains):.1e}]")
