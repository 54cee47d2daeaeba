"""
Bang degree and zero counts
===========================

The Bang degree of f bounds how many zeros f can have on [0, 1].  Here we
compute it for sinusoids in geometric classes and compare with the
actual zero count.
"""

import math

import numpy as np

from quasibang.bang import bang_degree, bang_profile
from quasibang.funcmodel import Sinusoid, count_zeros
from quasibang.sequences import Generator, from_generator

# sin(k pi x) has derivatives bounded by (k pi)^j, so it sits in the class
# with constant ratio k pi.
for k in (1, 3, 10):
    seq = from_generator(Generator.constant_ratio(k * math.pi), 200)
    deg = bang_degree(seq, 1.0)
    zeros, _ = count_zeros(Sinusoid(k))
    print(f"k = {k:2d}: zeros {zeros:3d} <= Bang degree {deg.value}")

# The factorial class: degree at sup-norm e^{-K} grows with K.
fact = from_generator(Generator.analytic(1.0), 400)
for K in range(5):
    print(f"||f|| = e^-{K}: degree {bang_degree(fact, math.exp(-K)).value}")

# The pointwise Bang norm drops where f nearly vanishes to high order.
seq = from_generator(Generator.constant_ratio(2 * math.pi), 200)
prof = bang_profile(Sinusoid(2), seq, np.linspace(0.0, 1.0, 9))
for x, B, L in prof.rows():
    print(f"x = {x:.3f}  B = {B:.4f}  L = {L:.4f}")
