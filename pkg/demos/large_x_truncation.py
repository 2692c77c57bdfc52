"""
Optimal truncation at large x
=============================

The large-x expansion of F is a double series in 1/x that never converges.
Grouping it by total power and stopping before the smallest group gives the
best accuracy the series can offer; that smallest group is also the error
estimate.
"""

from syncfn import FixedN, Optimal, f_large_x, f_quadrature, large_x_coefficients

# the first coefficients are exact rationals
print("leading coefficients:", large_x_coefficients(3, n_cap=2)[:3])

# the double-precision oracle is good to about 1e-15, which limits the
# comparison beyond x ~ 30
for x in (5.0, 10.0, 20.0, 30.0):
    ref = f_quadrature(x).value
    best = f_large_x(x, Optimal())
    fixed = f_large_x(x, FixedN(2))
    print(f"x={x:4g}  optimal: {best.order_used:2d} groups, error {abs(best.value - ref) / ref:.1e}"
          f" (est {best.rel_error_estimate:.1e});  N=2: error {abs(fixed.value - ref) / ref:.1e}")
