"""Truncated series over a semiring and their tropical derivatives."""
from tropdiff import (
    Bool, PosRat, boolean_pair, degenerate_differential, differentiate, padic_differential,
    parse_series, project, rank2_pair, separating_derivative_order,
)

a = parse_series("1 + 2t + 1/2t^3", PosRat, trunc_deg=8)
print("a          =", a)

# %% The p-adic differential weights t^n by |n|_p.
for d in (padic_differential(2), padic_differential(3), degenerate_differential(2)):
    print(f"{d.name:<14} a' =", differentiate(a, d))

# %% Projections: the leading term in T2, the support minimum in T.
print("pi(a)      =", project(a, rank2_pair(2)))
print("pi(a')     =", project(differentiate(a, padic_differential(2)), rank2_pair(2)))

# %% Two Boolean series agree at order 0 but a derivative tells them apart.
pair = boolean_pair()
x, y = parse_series("1 + t^2", Bool, None), parse_series("1 + t^3", Bool, None)
print("separating order of", x, "and", y, "->", separating_derivative_order(x, y, pair))
