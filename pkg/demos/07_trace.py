"""Regularized trace sums for q = 0, where the roots are known exactly.

The roots of mu^2 (cos(mu pi) - mu sin(mu pi)) are all real, so the
labelling is clean.  The integration grid is refined near each root because
squared roots amplify the integrator's phase error at large mu.
"""

import math

from retarded_sl import GridSpec, make_problem, trace_report

p = make_problem("0", "0", a1=0, a1p=1, a2=0, a2p=1)
rep = trace_report(p, 100, refine_grid=GridSpec(32768))
print("closed-form target", rep.rhs, "=", 2 / math.pi - 1)
for n in (10, 25, 50, 100):
    print(f"N={n:3d}  S_N={rep.partial_sum_at(n):+.8f}  S_N - target={rep.residual_at(n):+.8f}")
for w in rep.warnings:
    print("warning:", w)
# the residual settles near 4C/pi with C = -1
print("4C/pi =", -4 / math.pi)
