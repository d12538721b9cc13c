"""Independent evaluation of the substitution-code redundancy at M=4, L=72, K=1.

r = log2 C(2^L, M) - log2 C(2^L' - M Q + M - 1, M - 1) - d2_bits
"""
from math import comb

import mpmath

mpmath.mp.dps = 50

M, L, K = 4, 72, 1
L_PRIME = 12  # ceil(3 log2 4) + 4 + 2
Q = sum(comb(L_PRIME, i) for i in range(2 * K + 1))
LOG_ML = (M * L - 1).bit_length()
D2 = M * (L - L_PRIME) - 4 * K * L_PRIME - 2 * K * LOG_ML

words = comb(2**L, M)
domain = comb(2**L_PRIME - M * Q + M - 1, M - 1)
r = mpmath.log(words, 2) - mpmath.log(domain, 2) - D2
print(f"Q={Q} d2={D2} domain={domain}")
print(mpmath.nstr(r, 15))
