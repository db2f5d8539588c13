"""The four oscillatory integrals of the potential."""

import numpy as np

from retarded_sl import compute_pqrs, make_problem
from retarded_sl.pqrs import half_abs_q_integral

p = make_problem("cos(x)", ("x/2", "(x-pi/2)/2"))
for mu in (0.0, 0.5, 1.0, 5.0, 40.0):
    v = compute_pqrs(p, mu)
    print(f"mu={mu:5.1f}  P={v.p_val:+.6f} Q={v.q_val:+.6f} R={v.r_val:+.6f} S={v.s_val:+.6f}")
print("bound 1/2 int |q| =", half_abs_q_integral(p))

# without delay P is constant and Q has a closed form for q = 1
unit = make_problem("1", "0")
for mu in (0.25, 1.5, 12.0):
    print(mu, compute_pqrs(unit, mu).q_val, np.sin(2 * mu * np.pi) / (4 * mu))
