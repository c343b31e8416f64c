"""Solving for the leading coefficient of x = 1 + c t^m, one slot at a time.

The equation is (e^-4,1) x + (1,8) x' + (e^-1,8) x'' over the rank-2
semiring with the 2-adic differential. For each m the solver reports whether
no c, every c > 0, or a single c makes x a solution.
"""
from tropdiff import parse_diffpoly, rank2_pair, scan_template

f = parse_diffpoly("(e^-4,1)*x1 + (1,8)*x1' + (e^-1,8)*x1''")
for slot, verdict in scan_template(f, 5, rank2_pair(2)).items():
    terms = "  +  ".join(t.to_literal() for t in verdict.terms)
    extra = f"  c = {verdict.c}" if verdict.c is not None else ""
    print(f"m = {slot}: {verdict.kind.value:<15}{extra}")
    print(f"        {terms}")
