"""Integrating the delay equation for one spectral parameter."""

import numpy as np

from retarded_sl import GridSpec, make_problem, picard_solve, solve_omega

# q = cos x with half the distance to the left end (or to pi/2) as delay
p = make_problem("cos(x)", ("x/2", "(x-pi/2)/2"))
tr = solve_omega(p, 3.0)
print("y(pi), y'(pi) =", tr.end_values)

# dense output between nodes
print(tr.evaluate(np.array([0.3, 1.2, 2.9])))

# the integral-equation solver is a slower, independent check
ref = picard_solve(p, 3.0, GridSpec(16384))
print("max |y - y_ref| =", np.max(np.abs(tr.y_right - ref.y_right[::4])))

# fourth order in the step size
coarse, fine = solve_omega(p, 5.0, GridSpec(1024)), solve_omega(p, 5.0, GridSpec(2048))
finer = solve_omega(p, 5.0, GridSpec(4096))
d1 = np.max(np.abs(coarse.y_right - fine.y_right[::2]))
d2 = np.max(np.abs(fine.y_right - finer.y_right[::2]))
print("observed order", np.log2(d1 / d2))

# the interface divides y and y' by delta
p2 = p.with_coefficients(delta=2.0)
tr2 = solve_omega(p2, 3.0)
print(tr2.y_left[-1], 2 * tr2.y_right[0])
