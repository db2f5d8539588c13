"""Characteristic function against its closed form and its leading term."""

import numpy as np

from retarded_sl import char_fn_many, char_fn_unperturbed, char_fn_zero_q, make_problem

p0 = make_problem("0", "0", a1=1, a1p=0, a2=0, a2p=1)
mus = np.linspace(-10, 10, 201)
err = np.abs(char_fn_many(p0, mus) - char_fn_zero_q(p0, mus)) / (1 + np.abs(mus) ** 3)
print("q = 0: worst scaled error", err.max())

p = make_problem("cos(x)", ("x/2", "(x-pi/2)/2"))
f = char_fn_many(p, mus, threads=4)
f0 = char_fn_unperturbed(p, mus)
# F - F0 is two orders smaller in mu than F0 itself
big = np.abs(mus) > 3
print("max |F - F0| / mu^2 for |mu| > 3:", np.max(np.abs(f - f0)[big] / mus[big] ** 2))

# multiplying delta rescales F but keeps its zeros
print(np.allclose(2.0 * char_fn_many(p.with_coefficients(delta=2.0), mus), f, rtol=1e-10, atol=1e-9))
