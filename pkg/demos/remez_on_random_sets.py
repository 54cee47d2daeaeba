"""
Remez-type bounds on random sets
================================

Sup over an interval I against sup over a subset E.  The classical bound
for polynomials and the class-dependent bound are checked on a few
random unions of intervals.
"""

import numpy as np

from quasibang.funcmodel import Polynomial, Sinusoid, random_interval_set
from quasibang.remez import check_classical_remez, check_theorem_b, omega, omega_analytic
from quasibang.sequences import Generator, from_generator

rng = np.random.default_rng(3)
P = Polynomial((0.2, -1.0, 0.0, 2.5, -1.1))

for _ in range(3):
    E = random_interval_set(rng, 0.0, 1.0, max_components=3, min_measure=0.1)
    c = check_classical_remez(P, (0.0, 1.0), E)
    print(f"|E| = {E.measure:.3f}  ||P||_I = {c.lhs:.4f}  bound * ||P||_E = {c.rhs:.4g}  {c.verdict}")

# A sinusoid in its geometric class.  gamma = 0 for a constant ratio, so
# both Gamma variants give the same bound here.
gen = Generator.constant_ratio(3 * np.pi)
seq = from_generator(gen, 200)
E = random_interval_set(rng, 0.2, 0.7, max_components=2, min_measure=0.1)
for variant in ("standard", "propagation"):
    c = check_theorem_b(Sinusoid(3), gen, seq, (0.2, 0.7), E, variant)
    print(f"{variant:12s} N = {c.details['N']}  log10 bound = {np.log10(c.bound):.1f}  {c.verdict}")

# Omega: the quadrature agrees with the closed form in the analytic class.
for t in (0.5, 1e-2, 1e-6):
    print(f"t = {t:g}: Omega = {omega(Generator.analytic(1.0), t):.12f}  closed form {omega_analytic(t):.12f}")
