"""Reference computations kept independent of the package internals."""

from itertools import combinations


def removal_verdict(f, support):
    """Independent check: leading exponents of each term, then the removal test."""
    def lead(j):
        shifted = [n - j for n in support if n >= j]
        return min(shifted) if shifted else None

    vals = []
    for m, c in f.terms:
        order = c.order
        for (_, j), k in m.exponents:
            n = lead(j)
            if n is None:
                order = None
                break
            order += n * k
        vals.append(order)
    known = [v for v in vals if v is not None]
    if not known:
        return True
    best = min(known)
    return known.count(best) >= 2


def brute_boolean_solutions(f, max_deg):
    out = []
    for r in range(max_deg + 2):
        for s in combinations(range(max_deg + 1), r):
            if removal_verdict(f, s):
                out.append(set(s))
    return out
