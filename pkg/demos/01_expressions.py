"""Coefficient expressions: parse, print back, evaluate."""

import numpy as np

from retarded_sl import EvalDomainError, parse_expr, unparse, eval_expr

tree = parse_expr("x/2 + pi/4")
print(tree)
print(unparse(tree))  # binary nodes always come back parenthesized

# evaluation works pointwise or on arrays
xs = np.linspace(0, np.pi, 5)
print(eval_expr(parse_expr("cos(x)"), xs))

# leaving the reals is an error, not a nan
try:
    eval_expr(parse_expr("sqrt(x - 1)"), 0.0)
except EvalDomainError as exc:
    print("domain error:", exc)
