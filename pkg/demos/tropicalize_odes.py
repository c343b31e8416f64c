"""Classical power-series solutions stay solutions after tropicalization."""
from fractions import Fraction

from tropdiff import (
    grigoriev, is_solution, linear_coefficients, padic_rank2, parse_rat_diffpoly,
    solve_linear_ode, trop_equation, trop_point,
)

ODES = {
    "exp": ("x1' - x1", [1]),
    "sin": ("x1'' + x1", [0, 1]),
    "cos": ("x1'' + x1", [1, 0]),
    "cosh": ("x1'' - x1", [1, 0]),
    "mixed": ("x1'' - x1", [2, Fraction(-1, 3)]),
}

for name, (text, init) in ODES.items():
    f = parse_rat_diffpoly(text)
    x = solve_linear_ode(linear_coefficients(f), init, 12)
    print(f"{name:<6} {text:<10} x = {x.to_literal()[:60]}...")
    for e in (grigoriev(), padic_rank2(2), padic_rank2(3)):
        verdict = is_solution(trop_equation(f, e), trop_point([x], e), e.pair)
        print(f"       {e.label:<20} {verdict.value}")
