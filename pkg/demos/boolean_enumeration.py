"""All Boolean solutions of x + x' up to degree 5, checked by brute force."""
import time

from tropdiff import enumerate_boolean_solutions, parse_diffpoly

f = parse_diffpoly("x + x'", "T")
start = time.perf_counter()
result = enumerate_boolean_solutions(f, 5)
elapsed = time.perf_counter() - start

print(f"{len(result.solutions)} supports in {elapsed * 1000:.1f} ms")
for support in result.supports():
    print("  {" + ", ".join(map(str, sorted(support))) + "}")

# every nonempty solution contains 0 and 1: the two lowest terms must tie
assert all({0, 1} <= s for s in result.supports() if s)
