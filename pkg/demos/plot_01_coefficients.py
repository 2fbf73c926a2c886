"""
The coefficient family b_k(y)
=============================

The surface is written as ``f(x, y) = y + c*y*x**3 + sum_k b_k(y) x**k / k``.
Each ``b_k`` is produced exactly, with ``c`` kept as a symbol, by integrating
``b_k'' = -k (P_k + Q_k - R_k)`` twice from ``y = 0``.
"""

from fractions import Fraction

from lightlike_zmc.recurrence import compare_with_reference, generate, invariant_report

table = generate(12)
for k, b in enumerate(table.coefficients):
    print(f"b_{k:<2d} = {b}")

###############################################################################
# Every monomial ``c**j * y**i`` of ``b_k`` satisfies ``i + k - 3j = 1``, and
# every ``b_k`` is odd in ``y``.

for row in invariant_report(table):
    assert row["odd"] and row["weight"], row

###############################################################################
# Comparing with the closed forms usually quoted for b_0..b_7. The quoted
# ``b_6 = -24 c^2 y^7`` breaks the weight law; the recurrence gives ``c^4``.

for row in compare_with_reference(table):
    if not row["match"]:
        print(f"b_{row['k']}: generated {row['generated']}, quoted {row['reference']}")
        print("   ", row["note"])

###############################################################################
# Fixing ``c = 1/2`` turns each ``b_k`` into a rational polynomial in ``y``.

print(table[7].specialize_c(Fraction(1, 2)))
