"""Rooted forests as a free model of tropical differential expressions."""
from tropdiff import (
    Assignment, PosRat, SeriesTarget, eval_forest, forest_d, normalize,
    padic_differential, parse_forest, parse_series,
)

target = SeriesTarget(PosRat, padic_differential(2))
f = parse_forest("x1 * d(x1)")
print("f        =", f.to_literal())
print("d f      =", forest_d(f).to_literal())
print("normal   =", normalize(forest_d(f), target.coeff_d).to_literal())

x = parse_series("1 + t + 3t^2", PosRat, trunc_deg=8)
asg = Assignment(target, [x])
lhs = eval_forest(forest_d(f), asg)
rhs = target.d(eval_forest(f, asg))
print("eval(d f) =", lhs)
print("d(eval f) =", rhs)
print("agree:", lhs.agrees_with(rhs))
