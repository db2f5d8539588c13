"""Finding and labelling the real eigenvalues."""

from retarded_sl import IndexingError, compute_spectrum, make_problem

p = make_problem("cos(x)", ("x/2", "(x-pi/2)/2"))
spec = compute_spectrum(p, 12)
for lab in spec.labels():
    e = spec[lab]
    print(f"{str(lab):>4} {e.mu:+.12f}  unperturbed {e.mu0:+.0f}  eps {e.eps:+.3e}")
for w in spec.warnings:
    print("warning:", w)

# the four roots nearest 0 are not always real: here two of them form a
# complex pair and the labelling cannot be completed
try:
    compute_spectrum(make_problem("0", "0", a1=1, a1p=0, a2=0, a2p=1), 10)
except IndexingError as exc:
    print("IndexingError:", exc)
