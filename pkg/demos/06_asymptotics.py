"""Two-term eigenvalue asymptotics and what is left over."""

from retarded_sl import asymptotic_report, compute_spectrum, make_problem
from retarded_sl.asymptotics import scaled_residual_growth

p = make_problem("cos(x)", ("x/2", "(x-pi/2)/2"))
spec = compute_spectrum(p, 40)
rows = asymptotic_report(p, spec)
for r in rows:
    if r.n.k in (2, 5, 10, 20, 40):
        print(f"{str(r.n):>4} mu={r.mu_computed:+.10f} predicted={r.mu_predicted:+.10f} n^2*res={r.scaled_residual:+.4f}")

# <= 2 means the remainder is at least as small as C/n^2
print("growth of n^2 * residual:", scaled_residual_growth(rows))

# the correction can also take P, Q at the index itself
alt = asymptotic_report(p, spec, at="n")
print("same at n:", scaled_residual_growth(alt))
