"""Idempotent semirings and tropical vanishing.

Walks through the four value types, their addition and multiplication, the
canonical order, and which small lists of values tropically vanish.
"""
from fractions import Fraction

from tropdiff import Bool, PosRat, Rank2, TropExp, parse_value, trop_vanishes
from tropdiff.verify import vanishing_table

# %% Addition keeps the larger element in each semiring.
print("T:  e^-2 + e^-5 =", TropExp(2) + TropExp(5))
print("T:  e^-2 * e^-5 =", TropExp(2) * TropExp(5))
print("Q+: 3/2 + 4 =", PosRat(Fraction(3, 2)) + PosRat(4))
print("B:  0 + 1 =", Bool(False) + Bool(True))

# %% Rank-2 values compare by t-order first, then by the rational part.
a, b = parse_value("(e^-1, 8)", "T2"), parse_value("(e^-1, 1/2)", "T2")
print("T2:", a, "+", b, "=", a + b)
print("T2:", Rank2.of(0, 1), "+", a, "=", Rank2.of(0, 1) + a)

# %% A list vanishes when its maximum is attained at least twice.
for chosen, ok in vanishing_table([Rank2.of(1, 4), Rank2.of(1, 4), Rank2.of(4, 1)]):
    print(f"  {', '.join(map(str, chosen)):<32} vanishes: {ok}")

print("lone maximum:", trop_vanishes([TropExp(0), TropExp(3)]))
