"""
Bits, codes and small number theory
===================================

The classical pieces under every quantum scheme: GF(2) matrices, the
syndrome decoder, constant-weight words and a toy elliptic curve.
"""

# %%
# A word of width n is an integer; bit j is coordinate j of a row vector.
import numpy as np

from qpkc.ecurve import DEFAULT_BASE, DEFAULT_CURVE, curve_points, scalar_mul
from qpkc.gf2 import BitWord, GF2Matrix, generalized_right_inverse, hamming74, signing_code, syndrome_decode
from qpkc.numtheory import CwCode, cw_decode, cw_encode, jacobi

code = hamming74()
print("G =", code.generator)
print("H =", code.check)
m = BitWord.from_string("1011")
print("m G =", code.generator.vec_mul(m))

# %%
# Flip one coordinate and decode it back from the syndrome alone.
e = BitWord(7, 1 << 4)
noisy = code.generator.vec_mul(m) ^ e
print("syndrome", code.syndrome(noisy), "-> error", syndrome_decode(code, code.syndrome(noisy)))

# %%
# The signing code corrects two errors; its radius is certified by building
# the full syndrome table at construction.
sc = signing_code()
print(f"signing code [{sc.n},{sc.k}] t={sc.t}")

# %%
# Right inverses of wide full-rank matrices drive the McEliece decryption chain.
rng = np.random.default_rng(0)
g = GF2Matrix(rng.integers(0, 2, size=(3, 8)))
while not g.is_full_row_rank:
    g = GF2Matrix(rng.integers(0, 2, size=(3, 8)))
print("G G^-1 = I:", g @ generalized_right_inverse(g) == GF2Matrix.identity(3))

# %%
# Constant-weight ranking used by the knapsack scheme.
cw = CwCode(4, 2)
for rank in range(cw.size):
    w = cw_encode(rank, cw)
    print(rank, w, cw_decode(w, cw))

# %%
# Jacobi symbols and the curve y^2 = x^3 + x + 6 over GF(11).
print("(2/15) =", jacobi(2, 15))
print(len(curve_points(DEFAULT_CURVE)), "points; 3P =", scalar_mul(DEFAULT_CURVE, 3, DEFAULT_BASE))
