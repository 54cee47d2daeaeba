"""
A series that does not extend past [0, 1]
=========================================

The coefficients c_j = exp(-C j / log(j + e)) decay slower than any
geometric rate, yet their moments stay below n! (log(n + e))^n.  We
search the constant C and look at the resulting class.
"""

import math

import numpy as np

from quasibang.funcmodel import (
    coefficient_moment,
    find_nonextendable_constant,
    nonextendable_coefficient,
    nonextendable_series,
    regularized_log_majorant,
    series_class_sequence,
)

C = find_nonextendable_constant(400)
print("smallest power-of-two constant:", C)

for n in (0, 5, 10, 20):
    lhs = math.log(coefficient_moment(C, 400, n))
    print(f"n = {n:2d}: log moment {lhs:9.4f}  <=  log majorant {regularized_log_majorant(n):9.4f}")

# c_j^{1/j} = exp(-C / log(j + e)) creeps towards 1, so the radius of
# convergence is exactly 1; taken in logs since c_j underflows for large j.
j = np.array([10, 100, 1000, 10000])
print("c_j^(1/j), C = 1:", np.round(np.exp(-1.0 / np.log(j + math.e)), 5))
print("direct check at j = 100:", nonextendable_coefficient(1.0, 100) ** 0.01)

g, logs = series_class_sequence(nonextendable_series(C), 12)
print("log M_j of the normalized series:", np.round(logs, 3))
