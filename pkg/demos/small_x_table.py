"""
Truncating the small-x expansion
================================

F(x) behaves like x^{1/3} near the origin, with corrections in powers
x, x^{7/3}, x^{11/3}, ...  This prints the generated coefficients and the
relative error of the first few partial sums.
"""

from syncfn import SmallXTruncation, f_closed, f_small_x, small_x_coefficients
from syncfn.precision import EXTENDED

for exponent, coeff in small_x_coefficients(6):
    print(f"x^{str(exponent):>5}  {coeff: .12f}")

# relative errors need more than double precision at the small end
print()
for x_text in ("0.001", "0.01", "0.05"):
    x = EXTENDED.num(x_text)
    exact = f_closed(x, 1e-20, precision="extended").value
    for m in range(1, 6):
        s_m = f_small_x(x, SmallXTruncation(m), precision="extended").value
        print(f"x={x_text:>6}  M={m}  S_M={float(s_m):.6f}  "
              f"eps={float(abs(s_m - exact) / exact):.2e}")
